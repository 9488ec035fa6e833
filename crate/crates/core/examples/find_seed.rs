//! Finds a good TTP solution to seed a diversity run: 2-opt descents from
//! random starts, both travel directions, each packed by the DP. Prints the
//! best solution as a snapshot JSON line.
//!
//! Usage: cargo run -p ttp-edo --example find_seed -- INSTANCE [RESTARTS]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ttp_edo::{dp_pack, parse_instance, two_opt_local_search, Tour, TtpSolution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().ok_or("usage: find_seed INSTANCE [RESTARTS]")?;
    let restarts: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let inst = parse_instance(&std::fs::read_to_string(path)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    let mut best: Option<TtpSolution> = None;
    for _ in 0..restarts {
        let mut order: Vec<usize> = (1..inst.num_cities()).collect();
        order.shuffle(&mut rng);
        order.insert(0, 0);
        let tour = two_opt_local_search(&inst, &Tour::new(order)?);
        for t in [tour.reversed(), tour] {
            let packing = dp_pack(&inst, &t);
            let sol = TtpSolution::new(&inst, t, packing)?;
            if best.as_ref().is_none_or(|b| sol.z() > b.z()) {
                best = Some(sol);
            }
        }
    }
    let best = best.ok_or("no restarts")?;
    eprintln!(
        "best z = {}, length = {}",
        best.z(),
        best.tour().length(&inst)
    );
    println!("{}", serde_json::to_string(&best.to_snapshot())?);
    Ok(())
}
