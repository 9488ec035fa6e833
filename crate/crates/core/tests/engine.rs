mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttp_edo::{
    dp_pack, evaluate, init_population, parse_instance, quality_threshold, run_edo, DiversityIndex,
    EdoConfig, EdoRun, FitnessMode, Instance, KpOperator, SolutionSnapshot, Tour, TtpSolution,
};

/// Optimal solution by enumerating tours and packing each one with the DP.
fn exhaustive_optimum(inst: &Instance) -> TtpSolution {
    common::all_tours(inst.num_cities())
        .into_iter()
        .map(|o| {
            let tour = Tour::new(o).unwrap();
            let p = dp_pack(inst, &tour);
            TtpSolution::new(inst, tour, p).unwrap()
        })
        .max_by(|a, b| a.z().total_cmp(&b.z()))
        .unwrap()
}

fn tiny_instance<R: Rng>(rng: &mut R) -> Instance {
    let shape = common::InstanceShape {
        n: 5..=7,
        m: 1..=8,
        capacity: 5..=40,
    };
    common::random_instance(rng, &shape)
}

#[test]
fn exhaustive_optimum_agrees_with_full_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    for _ in 0..5 {
        let shape = common::InstanceShape {
            n: 4..=6,
            m: 1..=6,
            capacity: 5..=30,
        };
        let inst = common::random_instance(&mut rng, &shape);
        let best = exhaustive_optimum(&inst);
        let (z, _, _) = common::brute_force_optimum(&inst);
        assert!((best.z() - z).abs() <= 1e-9);
    }
}

#[test]
fn zero_slack_keeps_only_optimal_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for _ in 0..5 {
        // Without items a tour and its mirror image have the same objective,
        // so the population can fill up with optimal solutions.
        let shape = common::InstanceShape {
            n: 5..=7,
            m: 0..=0,
            capacity: 5..=40,
        };
        let inst = common::random_instance(&mut rng, &shape);
        let seed = exhaustive_optimum(&inst);
        let mut cfg = EdoConfig::new(seed.z());
        cfg.alpha = 0.0;
        cfg.mu = 4;
        cfg.iterations = 200;
        let (pop, _) = run_edo(&inst, &cfg, &seed, &mut rng).unwrap();
        assert_eq!(pop.len(), 4);
        for m in pop.members() {
            assert_eq!(m.z(), seed.z());
        }
    }
}

#[test]
fn every_iteration_keeps_the_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    for trial in 0..12 {
        let inst = tiny_instance(&mut rng);
        let seed = exhaustive_optimum(&inst);
        let mut cfg = EdoConfig::new(seed.z());
        cfg.alpha = 0.3;
        cfg.mu = rng.gen_range(2..=6);
        cfg.fitness = FitnessMode::ALL[trial % 3];
        cfg.kp = if trial % 2 == 0 {
            KpOperator::Dp
        } else {
            KpOperator::Ea
        };
        let mut run = match EdoRun::new(&inst, cfg.clone(), &seed, &mut rng) {
            Ok(r) => r,
            Err(ttp_edo::TtpError::ThresholdTooTight { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let z_min = quality_threshold(&cfg);
        let mut last = run.population().entropies().get(cfg.fitness);
        for _ in 0..300 {
            let rec = run.step(&mut rng);
            let pop = run.population();
            assert_eq!(pop.len(), cfg.mu);
            for m in pop.members() {
                assert!(m.z() >= z_min);
                assert!(m.packing().is_feasible(&inst));
                assert_eq!(m.z(), evaluate(&inst, m.tour(), m.packing()).unwrap());
            }
            let fresh = DiversityIndex::from_solutions(
                inst.num_cities(),
                inst.num_items(),
                cfg.edge_denominator,
                pop.members(),
            );
            assert_eq!(pop.index(), &fresh);
            let now = rec.entropies().get(cfg.fitness);
            assert!(now >= last, "entropy fell from {last} to {now}");
            last = now;
        }
    }
}

#[test]
fn same_seed_same_run() {
    let inst = parse_instance(common::EIL51_TTP).unwrap();
    let snap: SolutionSnapshot = serde_json::from_str(common::EIL51_SEED).unwrap();
    let seed = TtpSolution::from_snapshot(&inst, &snap).unwrap();
    let mut cfg = EdoConfig::new(seed.z());
    cfg.mu = 10;
    cfg.iterations = 300;
    let go = || {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (pop, traj) = run_edo(&inst, &cfg, &seed, &mut rng).unwrap();
        let mut csv = Vec::new();
        traj.write_csv(&mut csv).unwrap();
        let snaps: Vec<SolutionSnapshot> =
            pop.members().iter().map(TtpSolution::to_snapshot).collect();
        (csv, serde_json::to_string(&snaps).unwrap())
    };
    assert_eq!(go(), go());
}

#[test]
fn initial_population_on_51_cities() {
    let inst = parse_instance(common::EIL51_TTP).unwrap();
    let snap: SolutionSnapshot = serde_json::from_str(common::EIL51_SEED).unwrap();
    let seed = TtpSolution::from_snapshot(&inst, &snap).unwrap();
    let cfg = EdoConfig::new(seed.z());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pop = init_population(&inst, &seed, &cfg, &mut rng).unwrap();
    assert_eq!(pop.len(), 50);
    assert!(pop.members().iter().all(|m| m.z() >= 0.9 * seed.z()));
}

#[test]
fn no_iterations_leaves_the_initial_population() {
    let inst = parse_instance(common::EIL51_TTP).unwrap();
    let snap: SolutionSnapshot = serde_json::from_str(common::EIL51_SEED).unwrap();
    let seed = TtpSolution::from_snapshot(&inst, &snap).unwrap();
    let mut cfg = EdoConfig::new(seed.z());
    cfg.mu = 8;
    cfg.iterations = 0;
    let (pop, traj) = run_edo(&inst, &cfg, &seed, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let init = init_population(&inst, &seed, &cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    assert_eq!(pop.members(), init.members());
    assert_eq!(traj.records.len(), 1);
    assert_eq!(traj.records[0].entropies(), init.entropies());
}

#[test]
fn negative_reference_value_still_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    // Heavy rent and nothing worth carrying: every solution is negative.
    let cities = (0..6)
        .map(|i| ((i * 7 % 11) as f64, (i * 5 % 7) as f64))
        .collect();
    let inst = Instance::new("neg", cities, vec![], 10, 0.1, 1.0, 5.0).unwrap();
    let seed = exhaustive_optimum(&inst);
    assert!(seed.z() < 0.0);
    let mut cfg = EdoConfig::new(seed.z());
    cfg.mu = 5;
    cfg.iterations = 100;
    cfg.alpha = 0.5;
    let z_min = quality_threshold(&cfg);
    assert!((z_min - 1.5 * seed.z()).abs() < 1e-9);
    let (pop, _) = run_edo(&inst, &cfg, &seed, &mut rng).unwrap();
    assert!(pop.members().iter().all(|m| m.z() >= z_min));
}
