//! How well a population offers alternatives to its best solution when a
//! single edge or item becomes unavailable.

use serde::{Deserialize, Serialize};

use crate::solution::TtpSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    /// Percentage of the best tour's edges avoided by some member.
    #[serde(rename = "E")]
    pub edge_coverage: f64,
    /// Percentage of items for which some member makes the opposite choice
    /// to the best solution.
    #[serde(rename = "I")]
    pub item_coverage: f64,
    pub best_z: f64,
}

/// Index of the member with the highest objective; ties go to the smallest
/// index.
pub fn best_member(pop: &[TtpSolution]) -> usize {
    assert!(!pop.is_empty(), "population is empty");
    let mut best = 0;
    for (i, s) in pop.iter().enumerate() {
        if s.z() > pop[best].z() {
            best = i;
        }
    }
    best
}

/// Share (in percent) of the best tour's `n` edges that at least one other
/// member does not use.
pub fn edge_robustness(pop: &[TtpSolution]) -> f64 {
    let best = pop[best_member(pop)].tour();
    let n = best.len();
    // Position-based frequency of each best-tour edge across the population.
    let mut freq = vec![0usize; n];
    for member in pop {
        let t = member.tour();
        for (k, f) in freq.iter_mut().enumerate() {
            let u = best.order()[k];
            if t.has_edge(u, best.next(u)) {
                *f += 1;
            }
        }
    }
    let covered = freq.iter().filter(|&&f| f < pop.len()).count();
    100.0 * covered as f64 / n as f64
}

/// Share (in percent) of all items for which some member's inclusion
/// decision differs from the best solution's. Zero when there are no items.
pub fn item_robustness(pop: &[TtpSolution]) -> f64 {
    let best = pop[best_member(pop)].packing();
    let m = best.len();
    if m == 0 {
        return 0.0;
    }
    let mut freq = vec![0usize; m];
    for member in pop {
        for i in member.packing().selected() {
            freq[i] += 1;
        }
    }
    let covered = (0..m)
        .filter(|&i| {
            if best.is_selected(i) {
                freq[i] < pop.len()
            } else {
                freq[i] > 0
            }
        })
        .count();
    100.0 * covered as f64 / m as f64
}

pub fn robustness(pop: &[TtpSolution]) -> RobustnessReport {
    RobustnessReport {
        edge_coverage: edge_robustness(pop),
        item_coverage: item_robustness(pop),
        best_z: pop[best_member(pop)].z(),
    }
}
