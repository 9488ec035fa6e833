//! Entropy of a population's edges and items, and entropy-maximising
//! survivor selection.
//!
//! Frequencies are kept incrementally together with a histogram of how many
//! edges (items) occur with each frequency. Every entropy is evaluated from
//! that histogram, so a value depends only on the multiset of members and
//! never on the order of past insertions and removals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::solution::TtpSolution;

/// Which population entropy drives survivor selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessMode {
    /// `H = H_e + H_i`
    H,
    /// Edge entropy only.
    He,
    /// Item entropy only.
    Hi,
}

impl FitnessMode {
    pub const ALL: [FitnessMode; 3] = [FitnessMode::H, FitnessMode::He, FitnessMode::Hi];
}

impl fmt::Display for FitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitnessMode::H => "h",
            FitnessMode::He => "he",
            FitnessMode::Hi => "hi",
        })
    }
}

impl FromStr for FitnessMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(Self::H),
            "he" => Ok(Self::He),
            "hi" => Ok(Self::Hi),
            other => Err(format!("unknown fitness `{other}` (expected h, he or hi)")),
        }
    }
}

/// Normaliser used for edge frequencies.
///
/// `TwoNMu` divides by `2nμ` even though `μ` undirected tours contribute
/// only `nμ` edge occurrences, so edge proportions sum to one half.
/// `NMu` normalises them to a proper distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum EdgeDenominator {
    #[default]
    #[serde(rename = "2nmu")]
    TwoNMu,
    #[serde(rename = "nmu")]
    NMu,
}

impl fmt::Display for EdgeDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeDenominator::TwoNMu => "2nmu",
            EdgeDenominator::NMu => "nmu",
        })
    }
}

impl FromStr for EdgeDenominator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2nmu" => Ok(Self::TwoNMu),
            "nmu" => Ok(Self::NMu),
            other => Err(format!(
                "unknown edge denominator `{other}` (expected 2nmu or nmu)"
            )),
        }
    }
}

/// The three population entropies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropies {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "He")]
    pub he: f64,
    #[serde(rename = "Hi")]
    pub hi: f64,
}

impl Entropies {
    pub fn get(&self, mode: FitnessMode) -> f64 {
        match mode {
            FitnessMode::H => self.h,
            FitnessMode::He => self.he,
            FitnessMode::Hi => self.hi,
        }
    }
}

/// `c ln c` with `0 ln 0 = 0`.
#[inline]
fn xlnx(c: u64) -> f64 {
    if c == 0 {
        0.0
    } else {
        let c = c as f64;
        c * c.ln()
    }
}

/// Edge and item frequencies over a population of TTP solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityIndex {
    n: usize,
    members: usize,
    denominator: EdgeDenominator,
    /// Dense `n x n` upper-triangular edge counts.
    edge_freq: Vec<u32>,
    item_freq: Vec<u32>,
    item_total: u64,
    /// `edge_hist[c]`: number of edges with frequency `c`.
    edge_hist: Vec<u64>,
    item_hist: Vec<u64>,
}

impl DiversityIndex {
    pub fn new(n: usize, m: usize, denominator: EdgeDenominator) -> Self {
        Self {
            n,
            members: 0,
            denominator,
            edge_freq: vec![0; n * n],
            item_freq: vec![0; m],
            item_total: 0,
            edge_hist: vec![(n * n.saturating_sub(1) / 2) as u64],
            item_hist: vec![m as u64],
        }
    }

    /// Index over the given solutions, counted from scratch.
    pub fn from_solutions<'a>(
        n: usize,
        m: usize,
        denominator: EdgeDenominator,
        solutions: impl IntoIterator<Item = &'a TtpSolution>,
    ) -> Self {
        let mut idx = Self::new(n, m, denominator);
        for s in solutions {
            idx.add(s);
        }
        idx
    }

    pub fn denominator(&self) -> EdgeDenominator {
        self.denominator
    }

    /// Population size `μ` currently indexed.
    pub fn members(&self) -> usize {
        self.members
    }

    /// Number of indexed tours using the undirected edge `{u, v}`.
    pub fn edge_freq(&self, u: usize, v: usize) -> u32 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edge_freq[a * self.n + b]
    }

    /// Number of indexed packings selecting `item`.
    pub fn item_freq(&self, item: usize) -> u32 {
        self.item_freq[item]
    }

    pub fn item_freq_total(&self) -> u64 {
        self.item_total
    }

    fn bump(hist: &mut Vec<u64>, from: u32, to: u32) {
        hist[from as usize] -= 1;
        if hist.len() <= to as usize {
            hist.resize(to as usize + 1, 0);
        }
        hist[to as usize] += 1;
        while hist.len() > 1 && hist[hist.len() - 1] == 0 {
            hist.pop();
        }
    }

    pub fn add(&mut self, sol: &TtpSolution) {
        for (a, b) in sol.tour().edges() {
            let f = &mut self.edge_freq[a * self.n + b];
            Self::bump(&mut self.edge_hist, *f, *f + 1);
            *f += 1;
        }
        for i in sol.packing().selected() {
            let f = &mut self.item_freq[i];
            Self::bump(&mut self.item_hist, *f, *f + 1);
            *f += 1;
            self.item_total += 1;
        }
        self.members += 1;
    }

    /// Removes a solution previously added.
    pub fn remove(&mut self, sol: &TtpSolution) {
        for (a, b) in sol.tour().edges() {
            let f = &mut self.edge_freq[a * self.n + b];
            assert!(*f > 0, "removing an edge that is not indexed");
            Self::bump(&mut self.edge_hist, *f, *f - 1);
            *f -= 1;
        }
        for i in sol.packing().selected() {
            let f = &mut self.item_freq[i];
            assert!(*f > 0, "removing an item that is not indexed");
            Self::bump(&mut self.item_hist, *f, *f - 1);
            *f -= 1;
            self.item_total -= 1;
        }
        self.members -= 1;
    }

    fn edge_entropy_from(&self, hist: &[u64], members: usize) -> f64 {
        if members == 0 {
            return 0.0;
        }
        let occurrences = (self.n * members) as f64;
        let denom = match self.denominator {
            EdgeDenominator::TwoNMu => 2.0 * occurrences,
            EdgeDenominator::NMu => occurrences,
        };
        let s: f64 = hist
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, &k)| k as f64 * xlnx(c as u64))
            .sum();
        // Σ -(f/D) ln(f/D) = (F ln D - Σ f ln f) / D with F = Σ f.
        (occurrences * denom.ln() - s) / denom
    }

    fn item_entropy_from(hist: &[u64], total: u64) -> f64 {
        if total == 0 {
            return 0.0;
        }
        let s: f64 = hist
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, &k)| k as f64 * xlnx(c as u64))
            .sum();
        let total_f = total as f64;
        total_f.ln() - s / total_f
    }

    /// `H_e = Σ_e -(f(e)/D) ln(f(e)/D)`, `D = 2nμ` by default.
    pub fn edge_entropy(&self) -> f64 {
        self.edge_entropy_from(&self.edge_hist, self.members)
    }

    /// `H_i = Σ_i -(f(i)/F) ln(f(i)/F)`, `F = Σ_i f(i)`; zero when no
    /// item is selected anywhere.
    pub fn item_entropy(&self) -> f64 {
        Self::item_entropy_from(&self.item_hist, self.item_total)
    }

    /// `H = H_e + H_i`.
    pub fn total_entropy(&self) -> f64 {
        self.edge_entropy() + self.item_entropy()
    }

    pub fn entropies(&self) -> Entropies {
        let he = self.edge_entropy();
        let hi = self.item_entropy();
        Entropies { h: he + hi, he, hi }
    }

    pub fn entropy(&self, mode: FitnessMode) -> f64 {
        self.entropies().get(mode)
    }

    /// Entropies the population would have without one copy of `sol`,
    /// which must be indexed. Computes exactly what [`Self::entropies`]
    /// returns after [`Self::remove`], without mutating the index.
    pub fn entropies_without(&self, sol: &TtpSolution) -> Entropies {
        let mut edge_hist = self.edge_hist.clone();
        for (a, b) in sol.tour().edges() {
            let f = self.edge_freq[a * self.n + b] as usize;
            edge_hist[f] -= 1;
            edge_hist[f - 1] += 1;
        }
        let mut item_hist = self.item_hist.clone();
        let mut total = self.item_total;
        for i in sol.packing().selected() {
            let f = self.item_freq[i] as usize;
            item_hist[f] -= 1;
            item_hist[f - 1] += 1;
            total -= 1;
        }
        let he = self.edge_entropy_from(&edge_hist, self.members - 1);
        let hi = Self::item_entropy_from(&item_hist, total);
        Entropies { h: he + hi, he, hi }
    }
}

/// Index of the member whose removal leaves the highest entropy for
/// `mode`; ties go to the smallest index. `index` must describe exactly
/// `members`.
pub fn select_removal(members: &[TtpSolution], index: &DiversityIndex, mode: FitnessMode) -> usize {
    assert!(
        !members.is_empty(),
        "cannot select from an empty population"
    );
    debug_assert_eq!(members.len(), index.members());
    let mut best = (0, f64::NEG_INFINITY);
    for (q, sol) in members.iter().enumerate() {
        let value = index.entropies_without(sol).get(mode);
        if value > best.1 {
            best = (q, value);
        }
    }
    best.0
}
