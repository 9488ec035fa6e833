use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use ttp_edo::{
    dp_pack, evaluate, one_plus_one_ea, parse_instance, robustness as robustness_report, EdoConfig,
    EdoRun, Instance, KpOperator, PackingBudget, PackingList, SolutionSnapshot, Tour, Trajectory,
    TtpSolution,
};

use crate::artifacts::{ArtifactPaths, RunManifest, RunOutput, Summary};
use crate::{PackArgs, ReplayArgs, RobustnessArgs, RunArgs};

const PROGRESS_EVERY: u64 = 1000;

fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading instance {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing instance {}", path.display()))
}

fn z_matches(stored: f64, actual: f64) -> bool {
    (stored - actual).abs() <= 1e-6 * actual.abs().max(1.0)
}

fn load_seed(inst: &Instance, path: &Path) -> Result<TtpSolution> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading seed solution {}", path.display()))?;
    let snap: SolutionSnapshot = serde_json::from_str(&text)
        .with_context(|| format!("parsing seed solution {}", path.display()))?;
    let sol = TtpSolution::from_snapshot(inst, &snap)
        .with_context(|| format!("seed solution {} does not fit the instance", path.display()))?;
    if !z_matches(snap.z, sol.z()) {
        log::warn!(
            "seed solution stores z = {} but evaluates to {}; using the latter",
            snap.z,
            sol.z()
        );
    }
    Ok(sol)
}

fn jsonl<T: Serialize>(records: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, &r)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn execute(
    instance: &Path,
    seed_solution: &Path,
    cfg: EdoConfig,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let started = Instant::now();
    let inst = load_instance(instance)?;
    let seed = load_seed(&inst, seed_solution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut run = EdoRun::new(&inst, cfg.clone(), &seed, &mut rng)?;
    let mut trajectory = Trajectory::default();
    trajectory.records.push(run.record(false));
    let mut accepted = 0;
    for _ in 0..cfg.iterations {
        let rec = run.step(&mut rng);
        accepted += rec.accepted as u64;
        if rec.iteration % PROGRESS_EVERY == 0 {
            log::info!(
                "iteration {}: H = {:.4}, He = {:.4}, Hi = {:.4}",
                rec.iteration,
                rec.h,
                rec.he,
                rec.hi
            );
        }
        trajectory.records.push(rec);
    }

    let z_min = run.z_min();
    let pop = run.into_population();
    let mut trajectory_csv = Vec::new();
    trajectory.write_csv(&mut trajectory_csv)?;
    let output = RunOutput {
        trajectory_csv,
        population_jsonl: jsonl(pop.members().iter().map(TtpSolution::to_snapshot))?,
        summary: Summary {
            entropies: pop.entropies(),
            min_z: pop.min_z(),
            max_z: pop.max_z(),
            z_min,
            iterations: cfg.iterations,
            accepted,
        },
        robustness: robustness_report(pop.members()),
    };
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        instance: fs::canonicalize(instance)?,
        seed_solution: fs::canonicalize(seed_solution)?,
        config: cfg,
        artifacts: ArtifactPaths::default(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    output.write(dir, &manifest)?;
    writeln!(out, "{}", serde_json::to_string(&output.summary)?)?;
    Ok(())
}

pub fn run(args: RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = EdoConfig {
        alpha: args.alpha,
        mu: args.mu,
        iterations: args.iterations,
        fitness: args.fitness,
        kp: args.kp,
        ea_budget: args.ea_budget,
        edge_denominator: args.edge_denominator,
        seed: args.seed,
        stall_limit: EdoConfig::new(args.z_star).stall_limit,
        z_star: args.z_star,
    };
    execute(&args.instance, &args.seed_solution, cfg, &args.out, out)
}

pub fn replay(args: ReplayArgs, out: &mut dyn Write) -> Result<()> {
    let manifest = RunManifest::load(&args.manifest)?;
    if manifest.version != env!("CARGO_PKG_VERSION") {
        log::warn!(
            "manifest was written by version {}, replaying with {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    execute(
        &manifest.instance,
        &manifest.seed_solution,
        manifest.config,
        &args.out,
        out,
    )
}

/// Reads a population file, validating every member against the instance.
fn load_population(inst: &Instance, path: &Path) -> Result<Vec<TtpSolution>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading population {}", path.display()))?;
    let mut pop = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), k + 1);
        let snap: SolutionSnapshot = serde_json::from_str(line).with_context(at)?;
        let sol = TtpSolution::from_snapshot(inst, &snap).with_context(at)?;
        if !z_matches(snap.z, sol.z()) {
            bail!(
                "{}: stored z = {} but the solution evaluates to {} on this instance",
                at(),
                snap.z,
                sol.z()
            );
        }
        pop.push(sol);
    }
    ensure!(!pop.is_empty(), "population {} is empty", path.display());
    Ok(pop)
}

pub fn robustness(args: RobustnessArgs, out: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let pop = load_population(&inst, &args.population)?;
    writeln!(out, "{}", serde_json::to_string(&robustness_report(&pop))?)?;
    Ok(())
}

fn load_tour(inst: &Instance, path: &Path) -> Result<Tour> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading tour {}", path.display()))?;
    let cities: Vec<usize> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).with_context(|| format!("parsing tour {}", path.display()))?
    } else {
        text.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .with_context(|| format!("bad city `{t}` in tour"))
            })
            .collect::<Result<_>>()?
    };
    let tour = Tour::from_one_based(&cities)?;
    ensure!(
        tour.len() == inst.num_cities(),
        "tour visits {} cities, instance has {}",
        tour.len(),
        inst.num_cities()
    );
    Ok(tour)
}

#[derive(Serialize)]
struct PackOutput {
    method: KpOperator,
    packing: Vec<usize>,
    weight: u64,
    z: f64,
}

pub fn pack(args: PackArgs, out: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let tour = load_tour(&inst, &args.tour)?;
    let packing = match args.method {
        KpOperator::Dp => dp_pack(&inst, &tour),
        KpOperator::Ea => {
            let budget = args
                .ea_budget
                .map(PackingBudget::new)
                .unwrap_or_else(|| PackingBudget::twice_items(&inst));
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let empty = PackingList::empty(inst.num_items());
            one_plus_one_ea(&inst, &tour, &empty, budget, &mut rng)
        }
    };
    let report = PackOutput {
        method: args.method,
        packing: packing.selected().map(|i| i + 1).collect(),
        weight: packing.total_weight(),
        z: evaluate(&inst, &tour, &packing)?,
    };
    writeln!(out, "{}", serde_json::to_string(&report)?)?;
    Ok(())
}
