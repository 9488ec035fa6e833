//! Packing operators for a fixed tour: an exact packing-while-traveling
//! dynamic program and a (1+1) evolutionary algorithm.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;
use crate::solution::{evaluate, PackingList, Tour};

/// Items sorted by the tour position of their city, then by index.
pub fn item_visit_order(inst: &Instance, tour: &Tour) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.num_items()).collect();
    order.sort_by_key(|&i| (tour.position(inst.item(i).city), i));
    order
}

/// Per-tour data shared by all DP transitions.
#[derive(Debug, Clone)]
pub struct PackingContext<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    /// Distance still to travel after picking up each item in `order`,
    /// closing leg included.
    remaining: Vec<f64>,
    empty_value: f64,
}

impl<'a> PackingContext<'a> {
    pub fn new(inst: &'a Instance, tour: &Tour) -> Self {
        let n = tour.len();
        let cities = tour.order();
        // suffix[p]: length of the legs from position p back to the start.
        let mut suffix = vec![0.0; n + 1];
        for p in (0..n).rev() {
            suffix[p] = suffix[p + 1] + inst.dist(cities[p], cities[(p + 1) % n]);
        }
        let order = item_visit_order(inst, tour);
        let remaining = order
            .iter()
            .map(|&i| suffix[tour.position(inst.item(i).city)])
            .collect();
        Self {
            inst,
            order,
            remaining,
            empty_value: -inst.renting_ratio() * suffix[0] / inst.max_speed(),
        }
    }

    /// Items in processing order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Objective of the empty packing, `-R * length / v_max`.
    pub fn empty_value(&self) -> f64 {
        self.empty_value
    }

    /// Extra rent paid when the `rank`-th item in processing order raises
    /// the carried weight to `weight` from `weight - w_i`: the remaining
    /// distance times the change in inverse speed, times `R`.
    pub fn rent_increase(&self, rank: usize, weight: u64) -> f64 {
        let inst = self.inst;
        let w = inst.item(self.order[rank]).weight;
        let slower = 1.0 / inst.speed(weight) - 1.0 / inst.speed(weight - w);
        inst.renting_ratio() * self.remaining[rank] * slower
    }

    /// Candidate value `T` for taking the `rank`-th item so that the total
    /// weight becomes `weight`, given `prev` = β of the predecessor row at
    /// `weight - w_i`.
    pub fn transition(&self, prev: f64, rank: usize, weight: u64) -> f64 {
        prev + self.inst.item(self.order[rank]).profit - self.rent_increase(rank, weight)
    }
}

/// Row-major bit matrix recording which DP cells took their item.
#[derive(Debug, Clone)]
struct BitMatrix {
    cols: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            words: vec![0; (rows * cols).div_ceil(64)],
        }
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize) {
        let k = r * self.cols + c;
        self.words[k / 64] |= 1 << (k % 64);
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> bool {
        let k = r * self.cols + c;
        self.words[k / 64] >> (k % 64) & 1 == 1
    }
}

/// Result of the packing DP: the final β row and the take/skip decisions
/// needed to reconstruct an optimal packing.
///
/// `β[i][j]` is the best objective among selections of the first `i + 1`
/// items in processing order with total weight exactly `j`, or `-∞` when
/// no such selection exists.
#[derive(Debug, Clone)]
pub struct DpTable {
    order: Vec<usize>,
    last_row: Vec<f64>,
    take: BitMatrix,
}

impl DpTable {
    /// Fills the table with two rolling rows of width `W + 1`.
    pub fn build(inst: &Instance, tour: &Tour) -> Self {
        let ctx = PackingContext::new(inst, tour);
        let cap = inst.capacity() as usize;
        let m = ctx.order.len();
        let mut prev = vec![f64::NEG_INFINITY; cap + 1];
        prev[0] = ctx.empty_value;
        let mut cur = prev.clone();
        let mut take = BitMatrix::new(m, cap + 1);

        for rank in 0..m {
            let w = inst.item(ctx.order[rank]).weight as usize;
            cur.copy_from_slice(&prev);
            for j in w..=cap {
                let base = prev[j - w];
                if base == f64::NEG_INFINITY {
                    continue;
                }
                let t = ctx.transition(base, rank, j as u64);
                if t > cur[j] {
                    cur[j] = t;
                    take.set(rank, j);
                }
            }
            std::mem::swap(&mut prev, &mut cur);
        }

        Self {
            order: ctx.order,
            last_row: prev,
            take,
        }
    }

    /// β values of the last row, indexed by total weight.
    pub fn last_row(&self) -> &[f64] {
        &self.last_row
    }

    /// `(weight, value)` of the best cell in the last row; ties go to the
    /// lighter packing.
    pub fn best(&self) -> (usize, f64) {
        let mut best = (0, self.last_row[0]);
        for (j, &v) in self.last_row.iter().enumerate() {
            if v > best.1 {
                best = (j, v);
            }
        }
        best
    }

    /// Packing that attains the value stored at `weight` in the last row.
    pub fn packing_at(&self, inst: &Instance, weight: usize) -> PackingList {
        let mut packing = PackingList::empty(inst.num_items());
        let mut j = weight;
        for rank in (0..self.order.len()).rev() {
            if self.take.get(rank, j) {
                let item = self.order[rank];
                packing.set(inst, item, true);
                j -= inst.item(item).weight as usize;
            }
        }
        debug_assert_eq!(j, 0);
        packing
    }

    pub fn best_packing(&self, inst: &Instance) -> PackingList {
        self.packing_at(inst, self.best().0)
    }
}

/// Optimal packing for a fixed tour.
pub fn dp_pack(inst: &Instance, tour: &Tour) -> PackingList {
    DpTable::build(inst, tour).best_packing(inst)
}

/// Evaluation budget for [`one_plus_one_ea`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackingBudget {
    pub max_evaluations: usize,
}

impl PackingBudget {
    pub fn new(max_evaluations: usize) -> Self {
        Self { max_evaluations }
    }

    /// Twice the number of items.
    pub fn twice_items(inst: &Instance) -> Self {
        Self::new(2 * inst.num_items())
    }
}

/// Standard bit-flip mutation: each bit flips independently with
/// probability `1/m`.
pub fn bit_flip<R: Rng + ?Sized>(inst: &Instance, p: &PackingList, rng: &mut R) -> PackingList {
    let m = p.len();
    let mut child = p.clone();
    if m == 0 {
        return child;
    }
    let rate = 1.0 / m as f64;
    for i in 0..m {
        if rng.gen_bool(rate) {
            child.flip(inst, i);
        }
    }
    child
}

/// Outcome of a (1+1)EA run.
#[derive(Debug, Clone)]
pub struct EaRun {
    pub packing: PackingList,
    pub z: f64,
    /// Mutate-and-evaluate steps performed.
    pub evaluations: usize,
    /// Objective of the incumbent after the repair and after every accepted
    /// offspring.
    pub accepted: Vec<f64>,
}

/// (1+1)EA on the packing for a fixed tour, starting from `seed`.
///
/// An offspring replaces the incumbent only when it is feasible and its
/// objective is strictly higher. An over-capacity seed is first repaired by
/// dropping its items in random order until it fits.
pub fn run_one_plus_one_ea<R: Rng + ?Sized>(
    inst: &Instance,
    tour: &Tour,
    seed: &PackingList,
    budget: PackingBudget,
    rng: &mut R,
) -> EaRun {
    let mut current = seed.clone();
    if !current.is_feasible(inst) {
        let mut items: Vec<usize> = current.selected().collect();
        items.shuffle(rng);
        for i in items {
            if current.is_feasible(inst) {
                break;
            }
            current.set(inst, i, false);
        }
    }
    let mut z = evaluate(inst, tour, &current).expect("repaired packing is feasible");
    let mut accepted = vec![z];
    let mut evaluations = 0;
    while evaluations < budget.max_evaluations {
        evaluations += 1;
        let child = bit_flip(inst, &current, rng);
        if !child.is_feasible(inst) {
            continue;
        }
        let cz = evaluate(inst, tour, &child).expect("feasibility checked");
        if cz > z {
            current = child;
            z = cz;
            accepted.push(z);
        }
    }
    EaRun {
        packing: current,
        z,
        evaluations,
        accepted,
    }
}

/// Best packing found by the (1+1)EA; see [`run_one_plus_one_ea`].
pub fn one_plus_one_ea<R: Rng + ?Sized>(
    inst: &Instance,
    tour: &Tour,
    seed: &PackingList,
    budget: PackingBudget,
    rng: &mut R,
) -> PackingList {
    run_one_plus_one_ea(inst, tour, seed, budget, rng).packing
}
