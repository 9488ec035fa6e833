//! Writes a 51-city, 50-item bounded strongly correlated TTP instance on the
//! eil51 coordinates, following the construction of the public benchmark
//! generator: one item per city except the first, weights uniform in
//! [1, 1000], profit = weight + 100, capacity = total weight / 11, speeds
//! 0.1 and 1, and a renting ratio under which a short tour carrying an
//! optimal travel-free knapsack breaks even.
//!
//! Usage: cargo run -p ttp-edo --example surrogate_instance > out.ttp

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttp_edo::solution::travel_time;
use ttp_edo::{two_opt_local_search, Instance, Item, PackingList, Tour};

const EIL51: [(f64, f64); 51] = [
    (37.0, 52.0),
    (49.0, 49.0),
    (52.0, 64.0),
    (20.0, 26.0),
    (40.0, 30.0),
    (21.0, 47.0),
    (17.0, 63.0),
    (31.0, 62.0),
    (52.0, 33.0),
    (51.0, 21.0),
    (42.0, 41.0),
    (31.0, 32.0),
    (5.0, 25.0),
    (12.0, 42.0),
    (36.0, 16.0),
    (52.0, 41.0),
    (27.0, 23.0),
    (17.0, 33.0),
    (13.0, 13.0),
    (57.0, 58.0),
    (62.0, 42.0),
    (42.0, 57.0),
    (16.0, 57.0),
    (8.0, 52.0),
    (7.0, 38.0),
    (27.0, 68.0),
    (30.0, 48.0),
    (43.0, 67.0),
    (58.0, 48.0),
    (58.0, 27.0),
    (37.0, 69.0),
    (38.0, 46.0),
    (46.0, 10.0),
    (61.0, 33.0),
    (62.0, 63.0),
    (63.0, 69.0),
    (32.0, 22.0),
    (45.0, 35.0),
    (59.0, 15.0),
    (5.0, 6.0),
    (10.0, 17.0),
    (21.0, 10.0),
    (5.0, 64.0),
    (30.0, 15.0),
    (39.0, 10.0),
    (32.0, 39.0),
    (25.0, 32.0),
    (25.0, 55.0),
    (48.0, 28.0),
    (56.0, 37.0),
    (30.0, 40.0),
];

fn nearest_neighbour(inst: &Instance) -> Tour {
    let n = inst.num_cities();
    let mut seen = vec![false; n];
    let mut order = vec![0];
    seen[0] = true;
    while order.len() < n {
        let last = *order.last().unwrap();
        let next = (0..n)
            .filter(|&c| !seen[c])
            .min_by(|&a, &b| inst.dist(last, a).total_cmp(&inst.dist(last, b)))
            .unwrap();
        seen[next] = true;
        order.push(next);
    }
    Tour::new(order).unwrap()
}

/// Plain 0-1 knapsack ignoring travel.
fn knapsack(inst: &Instance) -> Vec<usize> {
    let cap = inst.capacity() as usize;
    let m = inst.num_items();
    let mut best = vec![vec![0.0f64; cap + 1]; m + 1];
    for i in 0..m {
        let it = inst.item(i);
        let w = it.weight as usize;
        for j in 0..=cap {
            best[i + 1][j] = best[i][j];
            if j >= w && best[i][j - w] + it.profit > best[i + 1][j] {
                best[i + 1][j] = best[i][j - w] + it.profit;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut j = cap;
    for i in (0..m).rev() {
        if best[i + 1][j] != best[i][j] {
            chosen.push(i);
            j -= inst.item(i).weight as usize;
        }
    }
    chosen
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let items: Vec<Item> = (1..EIL51.len())
        .map(|city| {
            let weight = rng.gen_range(1..=1000u64);
            Item {
                profit: (weight + 100) as f64,
                weight,
                city,
            }
        })
        .collect();
    let capacity = items.iter().map(|i| i.weight).sum::<u64>() / 11;
    let draft = Instance::new(
        "eil51-TTP",
        EIL51.to_vec(),
        items.clone(),
        capacity,
        0.1,
        1.0,
        1.0,
    )
    .unwrap();

    let tour = two_opt_local_search(&draft, &nearest_neighbour(&draft));
    let packing = PackingList::from_items(&draft, &knapsack(&draft)).unwrap();
    let time =
        travel_time(&draft, &tour, &packing).min(travel_time(&draft, &tour.reversed(), &packing));
    let rent = (100.0 * packing.total_profit() / time).floor() / 100.0;

    let inst = Instance::new("eil51-TTP", EIL51.to_vec(), items, capacity, 0.1, 1.0, rent).unwrap();
    let text = inst.to_ttp_string().replacen(
        "KNAPSACK DATA TYPE: \t\n",
        "KNAPSACK DATA TYPE: \tbounded strongly corr\n",
        1,
    );
    print!("{text}");
}
