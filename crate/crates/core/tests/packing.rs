mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ttp_edo::{
    bit_flip, dp_pack, evaluate, item_visit_order, run_one_plus_one_ea, DpTable, Instance, Item,
    PackingBudget, PackingContext, PackingList, Tour,
};

fn item(profit: f64, weight: u64, city: usize) -> Item {
    Item {
        profit,
        weight,
        city,
    }
}

#[test]
fn dp_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..300 {
        let inst = common::random_instance(&mut rng, &common::InstanceShape::small());
        let tour = common::random_tour(&mut rng, inst.num_cities());
        let packing = dp_pack(&inst, &tour);
        assert!(packing.is_feasible(&inst));
        let z = evaluate(&inst, &tour, &packing).unwrap();
        let (oracle, _) = common::brute_force_packing(&inst, tour.order());
        assert!((z - oracle).abs() <= 1e-9, "dp {z} vs brute force {oracle}");
        let table = DpTable::build(&inst, &tour);
        assert!((table.best().1 - z).abs() <= 1e-9);
    }
}

#[test]
fn every_reachable_weight_holds_its_best_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let inst = common::random_instance(&mut rng, &common::InstanceShape::small());
        let tour = common::random_tour(&mut rng, inst.num_cities());
        let table = DpTable::build(&inst, &tour);
        let oracle = common::brute_force_by_weight(&inst, tour.order());
        assert_eq!(table.last_row().len(), oracle.len());
        for (j, (&beta, &best)) in table.last_row().iter().zip(&oracle).enumerate() {
            if best == f64::NEG_INFINITY {
                assert_eq!(beta, f64::NEG_INFINITY, "weight {j} is unreachable");
            } else {
                assert!((beta - best).abs() <= 1e-9, "weight {j}: {beta} vs {best}");
                let p = table.packing_at(&inst, j);
                assert_eq!(p.total_weight(), j as u64);
                assert!((evaluate(&inst, &tour, &p).unwrap() - best).abs() <= 1e-9);
            }
        }
        let empty = evaluate(&inst, &tour, &PackingList::empty(inst.num_items())).unwrap();
        assert!((table.last_row()[0] - empty).abs() <= 1e-9);
    }
}

#[test]
fn no_items_gives_the_empty_packing() {
    let inst = Instance::new(
        "e",
        vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)],
        vec![],
        5,
        0.1,
        1.0,
        2.0,
    )
    .unwrap();
    let p = dp_pack(&inst, &Tour::identity(3));
    assert_eq!(p.count(), 0);
    assert_eq!(
        evaluate(&inst, &Tour::identity(3), &p).unwrap(),
        -2.0 * 12.0
    );
}

#[test]
fn single_profitable_item_is_taken() {
    let pts = vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)];
    let cheap = Instance::new("c", pts.clone(), vec![item(40.0, 5, 1)], 10, 0.1, 1.0, 1.0).unwrap();
    let tour = Tour::identity(3);
    let with = evaluate(
        &cheap,
        &tour,
        &PackingList::from_items(&cheap, &[0]).unwrap(),
    )
    .unwrap();
    let without = evaluate(&cheap, &tour, &PackingList::empty(1)).unwrap();
    assert!(with > without);
    assert!(dp_pack(&cheap, &tour).is_selected(0));

    let dear = Instance::new("d", pts, vec![item(1.0, 5, 1)], 10, 0.1, 1.0, 1.0).unwrap();
    assert!(!dp_pack(&dear, &tour).is_selected(0));
}

#[test]
fn rent_increase_runs_from_pickup_to_the_end() {
    // Square, item at the last visited city: only the closing leg of length
    // 3 is affected.
    let pts = vec![(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (0.0, 3.0)];
    let inst = Instance::new("s", pts, vec![item(9.0, 4, 3)], 8, 0.2, 1.0, 2.0).unwrap();
    let ctx = PackingContext::new(&inst, &Tour::identity(4));
    let expected = 2.0 * 3.0 * (1.0 / (1.0 - 0.1 * 4.0) - 1.0);
    assert!((ctx.rent_increase(0, 4) - expected).abs() < 1e-12);

    let flat = Instance::new(
        "f",
        vec![(0.0, 0.0), (3.0, 0.0), (3.0, 3.0)],
        vec![item(9.0, 4, 1)],
        8,
        1.0,
        1.0,
        2.0,
    )
    .unwrap();
    let ctx = PackingContext::new(&flat, &Tour::identity(3));
    assert_eq!(ctx.rent_increase(0, 4), 0.0);
}

#[test]
fn items_follow_the_tour() {
    let pts = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)];
    let inst = Instance::new(
        "o",
        pts,
        vec![item(1.0, 1, 1), item(1.0, 1, 2)],
        5,
        0.1,
        1.0,
        1.0,
    )
    .unwrap();
    assert_eq!(
        item_visit_order(&inst, &Tour::new(vec![0, 2, 1]).unwrap()),
        vec![1, 0]
    );

    let pts = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)];
    let same = Instance::new(
        "s",
        pts,
        vec![item(1.0, 1, 2), item(1.0, 1, 1), item(1.0, 1, 2)],
        5,
        0.1,
        1.0,
        1.0,
    )
    .unwrap();
    assert_eq!(item_visit_order(&same, &Tour::identity(3)), vec![1, 0, 2]);
}

#[test]
fn ea_contract_holds_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut reached = 0;
    let mut runs = 0;
    for _ in 0..100 {
        let shape = common::InstanceShape {
            n: 3..=8,
            m: 1..=10,
            capacity: 1..=50,
        };
        let inst = common::random_instance(&mut rng, &shape);
        let tour = common::random_tour(&mut rng, inst.num_cities());
        let dp_z = evaluate(&inst, &tour, &dp_pack(&inst, &tour)).unwrap();
        let seed = common::random_packing(&mut rng, &inst);
        let seed_z = evaluate(&inst, &tour, &seed).unwrap();
        let budget = PackingBudget::twice_items(&inst);
        let run = run_one_plus_one_ea(&inst, &tour, &seed, budget, &mut rng);
        assert_eq!(run.evaluations, 2 * inst.num_items());
        assert!(run.accepted.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(run.accepted[0], seed_z);
        assert!(run.z >= seed_z);
        assert!(run.z <= dp_z + 1e-9);
        assert!(run.packing.is_feasible(&inst));
        assert_eq!(run.z, evaluate(&inst, &tour, &run.packing).unwrap());
        runs += 1;
        if (run.z - dp_z).abs() <= 1e-9 {
            reached += 1;
        }
    }
    println!("(1+1)EA reached the DP optimum in {reached} of {runs} runs");
}

#[test]
fn zero_budget_returns_the_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let inst = common::random_instance(&mut rng, &common::InstanceShape::small());
    let tour = common::random_tour(&mut rng, inst.num_cities());
    let seed = common::random_packing(&mut rng, &inst);
    let run = run_one_plus_one_ea(&inst, &tour, &seed, PackingBudget::new(0), &mut rng);
    assert_eq!(run.packing, seed);
    assert_eq!(run.evaluations, 0);
}

#[test]
fn infeasible_seed_is_repaired() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let pts = vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)];
    let items = vec![item(5.0, 4, 1), item(5.0, 4, 2), item(5.0, 4, 1)];
    let inst = Instance::new("r", pts, items, 8, 0.1, 1.0, 1.0).unwrap();
    let mut seed = PackingList::empty(3);
    for i in 0..3 {
        seed.set(&inst, i, true);
    }
    assert!(!seed.is_feasible(&inst));
    let run = run_one_plus_one_ea(
        &inst,
        &Tour::identity(3),
        &seed,
        PackingBudget::new(6),
        &mut rng,
    );
    assert!(run.packing.is_feasible(&inst));
    assert_eq!(run.evaluations, 6);
}

#[test]
fn bit_flip_rate_is_one_over_m() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let m = 8;
    let pts = vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)];
    let items = (0..m).map(|i| item(1.0, 1, 1 + i % 2)).collect();
    let inst = Instance::new("b", pts, items, 100, 0.1, 1.0, 1.0).unwrap();
    let base = PackingList::empty(m);
    let calls = 100_000;
    let mut flips = vec![0u32; m];
    let mut total = 0u64;
    for _ in 0..calls {
        let child = bit_flip(&inst, &base, &mut rng);
        for (i, f) in flips.iter_mut().enumerate() {
            if child.is_selected(i) {
                *f += 1;
                total += 1;
            }
        }
    }
    let p = 1.0 / m as f64;
    let sigma = (calls as f64 * p * (1.0 - p)).sqrt();
    for (i, &f) in flips.iter().enumerate() {
        let dev = (f as f64 - calls as f64 * p).abs();
        assert!(dev <= 3.0 * sigma, "bit {i}: {f} flips, {dev} > 3 sigma");
    }
    let mean = total as f64 / calls as f64;
    assert!((mean - 1.0).abs() < 0.02, "mean flips per call {mean}");

    let one = Instance::new(
        "one",
        vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)],
        vec![item(1.0, 1, 1)],
        5,
        0.1,
        1.0,
        1.0,
    )
    .unwrap();
    for _ in 0..100 {
        assert!(bit_flip(&one, &PackingList::empty(1), &mut rng).is_selected(0));
    }
}

proptest! {
    #[test]
    fn dp_dominates_every_feasible_packing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_instance(&mut rng, &common::InstanceShape::small());
        let tour = common::random_tour(&mut rng, inst.num_cities());
        let best = evaluate(&inst, &tour, &dp_pack(&inst, &tour)).unwrap();
        for _ in 0..20 {
            let p = common::random_packing(&mut rng, &inst);
            prop_assert!(evaluate(&inst, &tour, &p).unwrap() <= best + 1e-9);
        }
        let order = item_visit_order(&inst, &tour);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..inst.num_items()).collect::<Vec<_>>());
    }
}
