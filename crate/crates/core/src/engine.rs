//! Bi-level diversity-maximising EA: EAX-1AB on tours, a packing operator
//! on top of each child tour, a quality filter, and entropy-based survivor
//! selection.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diversity::{select_removal, DiversityIndex, EdgeDenominator, Entropies, FitnessMode};
use crate::error::{Result, TtpError};
use crate::instance::Instance;
use crate::packing::{dp_pack, one_plus_one_ea, PackingBudget};
use crate::solution::TtpSolution;
use crate::tour_ops::{eax_1ab, two_opt_mutation};

/// Packing operator applied to every new tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KpOperator {
    /// Exact dynamic program.
    Dp,
    /// (1+1)EA seeded with the first parent's packing.
    Ea,
}

impl fmt::Display for KpOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KpOperator::Dp => "dp",
            KpOperator::Ea => "ea",
        })
    }
}

impl FromStr for KpOperator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Self::Dp),
            "ea" => Ok(Self::Ea),
            other => Err(format!(
                "unknown packing operator `{other}` (expected dp or ea)"
            )),
        }
    }
}

fn default_stall_limit() -> u64 {
    1_000_000
}

/// Parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdoConfig {
    /// Quality slack: members must reach `(1 - alpha) z*`.
    pub alpha: f64,
    /// Population size.
    pub mu: usize,
    /// Offspring attempts, accepted or not.
    pub iterations: u64,
    pub fitness: FitnessMode,
    pub kp: KpOperator,
    /// (1+1)EA evaluations per offspring; `None` means `2m`.
    pub ea_budget: Option<usize>,
    pub edge_denominator: EdgeDenominator,
    pub seed: u64,
    /// Best known objective value.
    pub z_star: f64,
    /// Consecutive rejections tolerated while building the initial
    /// population.
    #[serde(default = "default_stall_limit")]
    pub stall_limit: u64,
}

impl EdoConfig {
    /// Standard settings: `alpha = 0.1`, `mu = 50`, 10000 iterations,
    /// fitness `H`, DP packing, `2m` EA budget.
    pub fn new(z_star: f64) -> Self {
        Self {
            alpha: 0.1,
            mu: 50,
            iterations: 10_000,
            fitness: FitnessMode::H,
            kp: KpOperator::Dp,
            ea_budget: None,
            edge_denominator: EdgeDenominator::TwoNMu,
            seed: 0,
            z_star,
            stall_limit: default_stall_limit(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(TtpError::Config(format!(
                "alpha {} not in [0, 1)",
                self.alpha
            )));
        }
        if self.mu == 0 {
            return Err(TtpError::Config("mu must be at least 1".into()));
        }
        if !self.z_star.is_finite() {
            return Err(TtpError::Config(format!(
                "z* {} is not finite",
                self.z_star
            )));
        }
        Ok(())
    }

    pub fn ea_budget_for(&self, inst: &Instance) -> PackingBudget {
        self.ea_budget
            .map(PackingBudget::new)
            .unwrap_or_else(|| PackingBudget::twice_items(inst))
    }
}

/// Minimum admissible objective. For `z* >= 0` this is `(1 - alpha) z*`;
/// for negative `z*` it is `z* - alpha |z*|`, so the threshold still lies
/// below the best known value.
pub fn quality_threshold(cfg: &EdoConfig) -> f64 {
    if cfg.z_star >= 0.0 {
        (1.0 - cfg.alpha) * cfg.z_star
    } else {
        cfg.z_star - cfg.alpha * cfg.z_star.abs()
    }
}

/// Population members with a diversity index kept in sync.
#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<TtpSolution>,
    index: DiversityIndex,
}

impl Population {
    pub fn new(inst: &Instance, denominator: EdgeDenominator) -> Self {
        Self {
            members: Vec::new(),
            index: DiversityIndex::new(inst.num_cities(), inst.num_items(), denominator),
        }
    }

    pub fn from_members(
        inst: &Instance,
        denominator: EdgeDenominator,
        members: Vec<TtpSolution>,
    ) -> Self {
        let index = DiversityIndex::from_solutions(
            inst.num_cities(),
            inst.num_items(),
            denominator,
            &members,
        );
        Self { members, index }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[TtpSolution] {
        &self.members
    }

    pub fn index(&self) -> &DiversityIndex {
        &self.index
    }

    pub fn push(&mut self, sol: TtpSolution) {
        self.index.add(&sol);
        self.members.push(sol);
    }

    pub fn remove(&mut self, q: usize) -> TtpSolution {
        let sol = self.members.remove(q);
        self.index.remove(&sol);
        sol
    }

    pub fn entropies(&self) -> Entropies {
        self.index.entropies()
    }

    pub fn select_removal(&self, mode: FitnessMode) -> usize {
        select_removal(&self.members, &self.index, mode)
    }

    pub fn min_z(&self) -> f64 {
        self.members
            .iter()
            .map(TtpSolution::z)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_z(&self) -> f64 {
        self.members
            .iter()
            .map(TtpSolution::z)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Builds the initial population from one compliant solution: repeatedly
/// 2-opt mutate the tour of a random member, pack it optimally and keep the
/// result if it meets the quality threshold.
pub fn init_population<R: Rng + ?Sized>(
    inst: &Instance,
    seed_solution: &TtpSolution,
    cfg: &EdoConfig,
    rng: &mut R,
) -> Result<Population> {
    cfg.validate()?;
    let z_min = quality_threshold(cfg);
    if cfg.z_star < 0.0 {
        log::warn!(
            "negative z* {}: using threshold z* - alpha|z*| = {z_min}",
            cfg.z_star
        );
    }
    if seed_solution.z() < z_min {
        return Err(TtpError::BelowThreshold {
            z: seed_solution.z(),
            z_min,
        });
    }
    if seed_solution.z() > cfg.z_star + 1e-9 * cfg.z_star.abs().max(1.0) {
        log::warn!(
            "seed objective {} exceeds the supplied z* {}",
            seed_solution.z(),
            cfg.z_star
        );
    }

    let mut pop = Population::new(inst, cfg.edge_denominator);
    pop.push(seed_solution.clone());
    let mut rejections = 0u64;
    while pop.len() < cfg.mu {
        let parent = &pop.members()[rng.gen_range(0..pop.len())];
        let tour = two_opt_mutation(parent.tour(), rng);
        let packing = dp_pack(inst, &tour);
        let sol = TtpSolution::new(inst, tour, packing)?;
        if sol.z() >= z_min {
            pop.push(sol);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= cfg.stall_limit {
                return Err(TtpError::ThresholdTooTight { rejections, z_min });
            }
        }
    }
    Ok(pop)
}

/// State of the population after one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub iteration: u64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "He")]
    pub he: f64,
    #[serde(rename = "Hi")]
    pub hi: f64,
    /// Whether this iteration's offspring met the quality threshold.
    pub accepted: bool,
}

impl TrajectoryRecord {
    pub fn entropies(&self) -> Entropies {
        Entropies {
            h: self.h,
            he: self.he,
            hi: self.hi,
        }
    }
}

/// Per-iteration entropies. Row 0 describes the initial population.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
}

impl Trajectory {
    pub const CSV_HEADER: &'static str = "iteration,H,He,Hi,accepted";

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.iteration, r.h, r.he, r.hi, r.accepted as u8
            )?;
        }
        Ok(())
    }

    pub fn last(&self) -> Option<&TrajectoryRecord> {
        self.records.last()
    }
}

/// An in-progress run that can be advanced one iteration at a time.
#[derive(Debug, Clone)]
pub struct EdoRun<'a> {
    inst: &'a Instance,
    cfg: EdoConfig,
    z_min: f64,
    ea_budget: PackingBudget,
    population: Population,
    iteration: u64,
}

impl<'a> EdoRun<'a> {
    /// Validates the configuration and builds the initial population.
    pub fn new<R: Rng + ?Sized>(
        inst: &'a Instance,
        cfg: EdoConfig,
        seed_solution: &TtpSolution,
        rng: &mut R,
    ) -> Result<Self> {
        let population = init_population(inst, seed_solution, &cfg, rng)?;
        Ok(Self {
            inst,
            z_min: quality_threshold(&cfg),
            ea_budget: cfg.ea_budget_for(inst),
            cfg,
            population,
            iteration: 0,
        })
    }

    pub fn config(&self) -> &EdoConfig {
        &self.cfg
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn into_population(self) -> Population {
        self.population
    }

    /// Record describing the current population.
    pub fn record(&self, accepted: bool) -> TrajectoryRecord {
        let e = self.population.entropies();
        TrajectoryRecord {
            iteration: self.iteration,
            h: e.h,
            he: e.he,
            hi: e.hi,
            accepted,
        }
    }

    /// One offspring attempt.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> TrajectoryRecord {
        let inst = self.inst;
        let members = self.population.members();
        let first = &members[rng.gen_range(0..members.len())];
        let second = &members[rng.gen_range(0..members.len())];
        let tour = eax_1ab(inst, first.tour(), second.tour(), rng);
        let packing = match self.cfg.kp {
            KpOperator::Dp => dp_pack(inst, &tour),
            KpOperator::Ea => one_plus_one_ea(inst, &tour, first.packing(), self.ea_budget, rng),
        };
        let child = TtpSolution::new(inst, tour, packing).expect("packing operators stay feasible");

        let accepted = child.z() >= self.z_min;
        if accepted {
            self.population.push(child);
            if self.population.len() > self.cfg.mu {
                let q = self.population.select_removal(self.cfg.fitness);
                self.population.remove(q);
            }
        }
        self.iteration += 1;
        self.record(accepted)
    }
}

/// Runs the full algorithm from a compliant seed solution.
pub fn run_edo<R: Rng + ?Sized>(
    inst: &Instance,
    cfg: &EdoConfig,
    seed_solution: &TtpSolution,
    rng: &mut R,
) -> Result<(Population, Trajectory)> {
    let mut run = EdoRun::new(inst, cfg.clone(), seed_solution, rng)?;
    let mut trajectory = Trajectory {
        records: Vec::with_capacity(cfg.iterations as usize + 1),
    };
    trajectory.records.push(run.record(false));
    for _ in 0..cfg.iterations {
        let rec = run.step(rng);
        trajectory.records.push(rec);
    }
    Ok((run.into_population(), trajectory))
}
