//! Reference implementations used as oracles by the integration tests.
//!
//! Nothing here calls into the crate's evaluation, packing, entropy or
//! robustness code; only instance accessors and solution containers are
//! shared.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use ttp_edo::{EdgeDenominator, Instance, Item, PackingList, Tour, TtpSolution};

pub const EIL51_TTP: &str =
    include_str!("../fixtures/eil51_n50_bounded-strongly-corr_surrogate.ttp");
pub const EIL51_SEED: &str =
    include_str!("../fixtures/eil51_n50_bounded-strongly-corr_surrogate.seed.json");

pub fn ceil_dist(inst: &Instance, u: usize, v: usize) -> f64 {
    let (a, b) = (inst.cities()[u], inst.cities()[v]);
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt().ceil()
}

/// Objective by direct application of the closed form; `None` when the
/// packing exceeds the capacity.
pub fn naive_z(inst: &Instance, order: &[usize], bits: &[bool]) -> Option<f64> {
    let n = order.len();
    let mut weight = 0u64;
    let mut profit = 0.0;
    let mut time = 0.0;
    let nu = (inst.max_speed() - inst.min_speed()) / inst.capacity() as f64;
    for k in 0..n {
        let city = order[k];
        for (i, item) in inst.items().iter().enumerate() {
            if bits[i] && item.city == city {
                weight += item.weight;
                profit += item.profit;
            }
        }
        let next = order[(k + 1) % n];
        time += ceil_dist(inst, city, next) / (inst.max_speed() - nu * weight as f64);
    }
    (weight <= inst.capacity()).then(|| profit - inst.renting_ratio() * time)
}

/// Best objective over all `2^m` packings for a fixed tour.
pub fn brute_force_packing(inst: &Instance, order: &[usize]) -> (f64, Vec<bool>) {
    let m = inst.num_items();
    assert!(m <= 20, "enumeration too large");
    let mut best = (f64::NEG_INFINITY, vec![false; m]);
    for mask in 0u32..(1 << m) {
        let bits: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        if let Some(z) = naive_z(inst, order, &bits) {
            if z > best.0 {
                best = (z, bits);
            }
        }
    }
    best
}

/// Best objective with total packed weight exactly `w` for each `w`, or
/// `-inf` when no subset has that weight.
pub fn brute_force_by_weight(inst: &Instance, order: &[usize]) -> Vec<f64> {
    let m = inst.num_items();
    let cap = inst.capacity() as usize;
    let mut out = vec![f64::NEG_INFINITY; cap + 1];
    for mask in 0u32..(1 << m) {
        let bits: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        let w: u64 = (0..m)
            .filter(|&i| bits[i])
            .map(|i| inst.item(i).weight)
            .sum();
        if let Some(z) = naive_z(inst, order, &bits) {
            let slot = &mut out[w as usize];
            if z > *slot {
                *slot = z;
            }
        }
    }
    out
}

/// All tours starting at city 0.
pub fn all_tours(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let c = rest.remove(k);
            prefix.push(c);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(k, c);
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![0], &mut (1..n).collect(), &mut out);
    out
}

/// Optimal objective by enumerating every tour and every packing.
pub fn brute_force_optimum(inst: &Instance) -> (f64, Vec<usize>, Vec<bool>) {
    let mut best = (f64::NEG_INFINITY, Vec::new(), Vec::new());
    for order in all_tours(inst.num_cities()) {
        let (z, bits) = brute_force_packing(inst, &order);
        if z > best.0 {
            best = (z, order, bits);
        }
    }
    best
}

pub struct InstanceShape {
    pub n: std::ops::RangeInclusive<usize>,
    pub m: std::ops::RangeInclusive<usize>,
    pub capacity: std::ops::RangeInclusive<u64>,
}

impl InstanceShape {
    pub fn small() -> Self {
        Self {
            n: 3..=8,
            m: 0..=12,
            capacity: 1..=50,
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Instance {
    let n = rng.gen_range(shape.n.clone());
    let m = rng.gen_range(shape.m.clone());
    let capacity = rng.gen_range(shape.capacity.clone());
    // Distinct points, so every leg has positive length.
    let mut cities: Vec<(f64, f64)> = Vec::with_capacity(n);
    while cities.len() < n {
        let p = (rng.gen_range(0..60) as f64, rng.gen_range(0..60) as f64);
        if !cities.contains(&p) {
            cities.push(p);
        }
    }
    let items = (0..m)
        .map(|_| Item {
            profit: rng.gen_range(0..120) as f64,
            weight: rng.gen_range(1..=capacity.min(25)),
            city: rng.gen_range(1..n),
        })
        .collect();
    let v_min = [0.1, 0.5, 1.0][rng.gen_range(0..3)];
    let rent = rng.gen_range(0..400) as f64 / 100.0;
    Instance::new("random", cities, items, capacity, v_min, 1.0, rent).unwrap()
}

pub fn random_tour<R: Rng>(rng: &mut R, n: usize) -> Tour {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(rng);
    let mut order = vec![0];
    order.extend(rest);
    Tour::new(order).unwrap()
}

/// Uniform random bits, then random drops until the capacity holds.
pub fn random_packing<R: Rng>(rng: &mut R, inst: &Instance) -> PackingList {
    let m = inst.num_items();
    let bits: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
    let mut p = PackingList::from_bits(inst, bits).unwrap();
    let mut chosen: Vec<usize> = p.selected().collect();
    chosen.shuffle(rng);
    for i in chosen {
        if p.is_feasible(inst) {
            break;
        }
        p.set(inst, i, false);
    }
    p
}

pub fn random_solution<R: Rng>(rng: &mut R, inst: &Instance) -> TtpSolution {
    let tour = random_tour(rng, inst.num_cities());
    let packing = random_packing(rng, inst);
    TtpSolution::new(inst, tour, packing).unwrap()
}

fn undirected(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

pub fn tour_edges(order: &[usize]) -> Vec<(usize, usize)> {
    let n = order.len();
    (0..n)
        .map(|k| undirected(order[k], order[(k + 1) % n]))
        .collect()
}

pub fn is_hamiltonian_from_zero(order: &[usize], n: usize) -> bool {
    let set: HashSet<usize> = order.iter().copied().collect();
    order.len() == n && order.first() == Some(&0) && set.len() == n && set.iter().all(|&c| c < n)
}

/// Edge and item entropy recounted from scratch.
pub fn naive_entropies(pop: &[TtpSolution], n: usize, denominator: EdgeDenominator) -> (f64, f64) {
    let mu = pop.len() as f64;
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut items: HashMap<usize, usize> = HashMap::new();
    for sol in pop {
        for e in tour_edges(sol.tour().order()) {
            *edges.entry(e).or_default() += 1;
        }
        for (i, &b) in sol.packing().bits().iter().enumerate() {
            if b {
                *items.entry(i).or_default() += 1;
            }
        }
    }
    let d = match denominator {
        EdgeDenominator::TwoNMu => 2.0 * n as f64 * mu,
        EdgeDenominator::NMu => n as f64 * mu,
    };
    let he: f64 = edges
        .values()
        .map(|&f| {
            let p = f as f64 / d;
            -p * p.ln()
        })
        .sum();
    let total: usize = items.values().sum();
    let hi: f64 = if total == 0 {
        0.0
    } else {
        items
            .values()
            .map(|&f| {
                let p = f as f64 / total as f64;
                -p * p.ln()
            })
            .sum()
    };
    (he, hi)
}

/// Index whose removal leaves the highest entropy for `pick`, found by
/// recounting every candidate population; ties go to the lowest index.
pub fn naive_select_removal(
    pop: &[TtpSolution],
    n: usize,
    denominator: EdgeDenominator,
    pick: impl Fn(f64, f64) -> f64,
) -> (usize, Vec<f64>) {
    let values: Vec<f64> = (0..pop.len())
        .map(|q| {
            let rest: Vec<TtpSolution> = pop
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != q)
                .map(|(_, s)| s.clone())
                .collect();
            let (he, hi) = naive_entropies(&rest, n, denominator);
            pick(he, hi)
        })
        .collect();
    let mut best = 0;
    for q in 1..values.len() {
        if values[q] > values[best] {
            best = q;
        }
    }
    (best, values)
}

/// Coverage percentages by a double loop over elements and members.
pub fn naive_robustness(pop: &[TtpSolution]) -> (f64, f64) {
    let mut best = 0;
    for q in 1..pop.len() {
        if pop[q].z() > pop[best].z() {
            best = q;
        }
    }
    let b = &pop[best];
    let n = b.tour().len();
    let mut covered_edges = 0;
    for e in tour_edges(b.tour().order()) {
        let mut found = false;
        for q in pop {
            if !tour_edges(q.tour().order()).contains(&e) {
                found = true;
            }
        }
        if found {
            covered_edges += 1;
        }
    }
    let m = b.packing().len();
    let mut covered_items = 0;
    for i in 0..m {
        let mut found = false;
        for q in pop {
            if q.packing().bits()[i] != b.packing().bits()[i] {
                found = true;
            }
        }
        if found {
            covered_items += 1;
        }
    }
    let e = 100.0 * covered_edges as f64 / n as f64;
    let i = if m == 0 {
        0.0
    } else {
        100.0 * covered_items as f64 / m as f64
    };
    (e, i)
}
