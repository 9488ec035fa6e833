//! Tour variation: single AB-cycle edge assembly crossover (EAX-1AB) and
//! 2-opt segment reversal.
//!
//! The crossover runs in three steps. [`build_ab_cycle`] walks the
//! symmetric difference of the parents' edge sets, alternating between
//! parent A and parent B edges until the walk closes. [`apply_ab_cycle`]
//! swaps the cycle's A edges for its B edges inside parent A, which leaves
//! every city with degree two but possibly splits the tour into subtours.
//! [`merge_subtours`] then greedily reconnects the smallest subtour to the
//! rest with the cheapest 2-edge exchange until a single cycle remains.

use rand::Rng;

use crate::error::TtpError;
use crate::instance::Instance;
use crate::solution::{edge, Edge, Tour};

const NONE: usize = usize::MAX;

/// A closed walk whose edges alternate between parent A and parent B.
///
/// Edge `k` joins `vertices[k]` and `vertices[(k + 1) % len]`; even `k`
/// are A edges and odd `k` are B edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbCycle {
    vertices: Vec<usize>,
}

impl AbCycle {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges (always even).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let len = self.vertices.len();
        (0..len).map(move |k| edge(self.vertices[k], self.vertices[(k + 1) % len]))
    }

    pub fn a_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges().step_by(2)
    }

    pub fn b_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges().skip(1).step_by(2)
    }
}

/// Parent A's edges at `v` that parent B does not use.
fn exclusive_neighbours(own: &Tour, other: &Tour, v: usize) -> ([usize; 2], usize) {
    let mut out = [NONE; 2];
    let mut k = 0;
    for u in [own.next(v), own.prev(v)] {
        if !other.has_edge(v, u) && !out[..k].contains(&u) {
            out[k] = u;
            k += 1;
        }
    }
    (out, k)
}

/// Builds one AB-cycle by a randomised alternating walk.
///
/// The walk starts at a uniformly random city that has an A edge missing
/// from B and at every step takes a uniformly random unused exclusive edge
/// of the parent whose turn it is. It stops when a B edge brings it back to
/// the start. Returns `None` when both parents have the same edge set.
pub fn build_ab_cycle<R: Rng + ?Sized>(a: &Tour, b: &Tour, rng: &mut R) -> Option<AbCycle> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let starts: Vec<usize> = (0..n)
        .filter(|&v| exclusive_neighbours(a, b, v).1 > 0)
        .collect();
    if starts.is_empty() {
        return None;
    }
    let start = starts[rng.gen_range(0..starts.len())];

    let mut used_a: Vec<Edge> = Vec::new();
    let mut used_b: Vec<Edge> = Vec::new();
    let mut vertices = vec![start];
    let mut cur = start;
    loop {
        for (own, other, used) in [(a, b, &mut used_a), (b, a, &mut used_b)] {
            let (nbrs, k) = exclusive_neighbours(own, other, cur);
            let mut options = [NONE; 2];
            let mut count = 0;
            for &u in &nbrs[..k] {
                if !used.contains(&edge(cur, u)) {
                    options[count] = u;
                    count += 1;
                }
            }
            // Every city has as many exclusive A edges as exclusive B edges,
            // so an alternating walk can always continue until it closes.
            assert!(count > 0, "alternating walk got stuck at city {cur}");
            let next = options[rng.gen_range(0..count)];
            used.push(edge(cur, next));
            cur = next;
            vertices.push(cur);
        }
        if cur == start {
            vertices.pop();
            return Some(AbCycle { vertices });
        }
    }
}

/// Degree-two edge set produced by applying an AB-cycle to parent A,
/// together with its decomposition into disjoint cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateSolution {
    adj: Vec<[usize; 2]>,
    subtours: Vec<Vec<usize>>,
}

impl IntermediateSolution {
    fn from_adjacency(adj: Vec<[usize; 2]>) -> Self {
        let subtours = decompose(&adj);
        Self { adj, subtours }
    }

    /// Wraps a tour as an intermediate solution with a single subtour.
    pub fn from_tour(tour: &Tour) -> Self {
        let adj = (0..tour.len())
            .map(|v| [tour.next(v), tour.prev(v)])
            .collect();
        Self::from_adjacency(adj)
    }

    /// Builds an intermediate solution from disjoint cycles that together
    /// cover cities `0..n`, each with at least three cities.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, TtpError> {
        let mut adj = vec![[NONE; 2]; n];
        let mut covered = 0;
        for cycle in cycles {
            if cycle.len() < 3 {
                return Err(TtpError::InvalidTour(format!(
                    "subtour {cycle:?} has fewer than 3 cities"
                )));
            }
            for (k, &v) in cycle.iter().enumerate() {
                if v >= n || adj[v][0] != NONE {
                    return Err(TtpError::InvalidTour(format!(
                        "city {} is out of range or repeated",
                        v + 1
                    )));
                }
                let len = cycle.len();
                adj[v] = [cycle[(k + 1) % len], cycle[(k + len - 1) % len]];
                covered += 1;
            }
        }
        if covered != n {
            return Err(TtpError::InvalidTour(format!(
                "subtours cover {covered} of {n} cities"
            )));
        }
        Ok(Self::from_adjacency(adj))
    }

    pub fn num_cities(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> [usize; 2] {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&u| u != NONE).count()
    }

    /// Disjoint cycles covering all cities. Each starts at its lowest city
    /// and the list is ordered by that city.
    pub fn subtours(&self) -> &[Vec<usize>] {
        &self.subtours
    }

    /// All undirected edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(v, nb)| nb.iter().filter(move |&&u| u > v).map(move |&u| (v, u)))
            .collect();
        out.sort_unstable();
        out
    }
}

fn decompose(adj: &[[usize; 2]]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            let [x, y] = adj[cur];
            let next = if x != prev { x } else { y };
            prev = cur;
            cur = next;
        }
        out.push(cycle);
    }
    out
}

fn replace_neighbour(adj: &mut [[usize; 2]], v: usize, old: usize, new: usize) {
    let slot = adj[v]
        .iter()
        .position(|&u| u == old)
        .expect("edge to replace is present");
    adj[v][slot] = new;
}

/// Removes the cycle's A edges from parent A and adds its B edges.
pub fn apply_ab_cycle(a: &Tour, cycle: &AbCycle) -> IntermediateSolution {
    let mut adj: Vec<[usize; 2]> = (0..a.len()).map(|v| [a.next(v), a.prev(v)]).collect();
    for (u, v) in cycle.a_edges() {
        replace_neighbour(&mut adj, u, v, NONE);
        replace_neighbour(&mut adj, v, u, NONE);
    }
    for (u, v) in cycle.b_edges() {
        replace_neighbour(&mut adj, u, NONE, v);
        replace_neighbour(&mut adj, v, NONE, u);
    }
    IntermediateSolution::from_adjacency(adj)
}

/// One reconnection performed by [`merge_subtours_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    pub removed: [Edge; 2],
    pub added: [Edge; 2],
    /// `-d(e1) - d(e2) + d(e3) + d(e4)` of the chosen exchange.
    pub cost: f64,
}

/// Joins subtours into a single tour; see [`merge_subtours_traced`].
pub fn merge_subtours(inst: &Instance, t: &IntermediateSolution) -> Tour {
    merge_subtours_traced(inst, t).0
}

/// Joins subtours into a single tour, returning the exchanges applied.
///
/// Each step takes the subtour with the fewest edges (ties: the one with the
/// lowest city), and over every edge `e1` of it, every edge `e2` outside it
/// and both ways of reconnecting their endpoints picks the exchange of
/// minimum cost. Equal costs are resolved by the smallest `(e1, e2)` pair,
/// then by the reconnection that joins like endpoints first. The returned
/// tour is read from city 0 towards its lower-numbered neighbour.
pub fn merge_subtours_traced(inst: &Instance, t: &IntermediateSolution) -> (Tour, Vec<MergeStep>) {
    let mut adj = t.adj.clone();
    let mut subtours = t.subtours.clone();
    let mut steps = Vec::with_capacity(subtours.len().saturating_sub(1));

    while subtours.len() > 1 {
        let r = (0..subtours.len())
            .min_by_key(|&i| subtours[i].len())
            .expect("at least two subtours");
        let small = &subtours[r];

        // (cost, e1, e2, option, [a, b, c, d])
        let mut best: Option<(f64, Edge, Edge, u8, [usize; 4])> = None;
        for (k, &a) in small.iter().enumerate() {
            let b = small[(k + 1) % small.len()];
            let e1 = edge(a, b);
            let d1 = inst.dist(a, b);
            for (s, other) in subtours.iter().enumerate() {
                if s == r {
                    continue;
                }
                for (l, &c) in other.iter().enumerate() {
                    let d = other[(l + 1) % other.len()];
                    let e2 = edge(c, d);
                    let base = -d1 - inst.dist(c, d);
                    let options = [
                        (base + inst.dist(a, c) + inst.dist(b, d), 0u8, [a, b, c, d]),
                        (base + inst.dist(a, d) + inst.dist(b, c), 1u8, [a, b, d, c]),
                    ];
                    for (cost, opt, ends) in options {
                        let better = match &best {
                            None => true,
                            Some((bc, be1, be2, bo, _)) => {
                                cost < *bc || (cost == *bc && (e1, e2, opt) < (*be1, *be2, *bo))
                            }
                        };
                        if better {
                            best = Some((cost, e1, e2, opt, ends));
                        }
                    }
                }
            }
        }

        let (cost, e1, e2, _, [a, b, c, d]) = best.expect("subtours have edges");
        // Remove (a, b) and (c, d); add (a, c) and (b, d).
        replace_neighbour(&mut adj, a, b, c);
        replace_neighbour(&mut adj, c, d, a);
        replace_neighbour(&mut adj, b, a, d);
        replace_neighbour(&mut adj, d, c, b);
        steps.push(MergeStep {
            removed: [e1, e2],
            added: [edge(a, c), edge(b, d)],
            cost,
        });
        subtours = decompose(&adj);
    }

    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut prev = 0;
    let mut cur = adj[0][0].min(adj[0][1]);
    order.push(0);
    while cur != 0 {
        order.push(cur);
        let [x, y] = adj[cur];
        let next = if x != prev { x } else { y };
        prev = cur;
        cur = next;
    }
    (
        Tour::new(order).expect("single cycle covers all cities"),
        steps,
    )
}

/// Orients `child` so that it leaves city 0 in the same direction as
/// `parent` whenever one of the parent's edges at city 0 survives.
fn orient_like(child: Tour, parent: &Tour) -> Tour {
    let (pn, pp) = (parent.next(0), parent.prev(0));
    let flip = if child.has_edge(0, pn) {
        child.next(0) != pn
    } else if child.has_edge(0, pp) {
        child.prev(0) != pp
    } else {
        false
    };
    if flip {
        child.reversed()
    } else {
        child
    }
}

/// EAX-1AB crossover. Returns a copy of `a` when the parents share all
/// edges. The child is traversed in parent A's direction when possible.
pub fn eax_1ab<R: Rng + ?Sized>(inst: &Instance, a: &Tour, b: &Tour, rng: &mut R) -> Tour {
    match build_ab_cycle(a, b, rng) {
        None => a.clone(),
        Some(cycle) => {
            let intermediate = apply_ab_cycle(a, &cycle);
            orient_like(merge_subtours(inst, &intermediate), a)
        }
    }
}

/// Reverses the tour segment between 0-based positions `i..=j`, with
/// `1 <= i < j < n` so that city 0 stays first.
pub fn reverse_segment(tour: &Tour, i: usize, j: usize) -> Tour {
    assert!(1 <= i && i < j && j < tour.len(), "bad segment {i}..={j}");
    let mut order = tour.order().to_vec();
    order[i..=j].reverse();
    Tour::new(order).expect("segment reversal preserves validity")
}

/// Random 2-opt move: reverses a uniformly chosen segment of at least two
/// cities, never moving city 0.
pub fn two_opt_mutation<R: Rng + ?Sized>(tour: &Tour, rng: &mut R) -> Tour {
    let n = tour.len();
    if n < 3 {
        return tour.clone();
    }
    let i = rng.gen_range(1..n);
    let mut j = rng.gen_range(1..n - 1);
    if j >= i {
        j += 1;
    }
    reverse_segment(tour, i.min(j), i.max(j))
}

/// First-improvement 2-opt descent to a local optimum of tour length.
pub fn two_opt_local_search(inst: &Instance, tour: &Tour) -> Tour {
    let mut order = tour.order().to_vec();
    let n = order.len();
    let mut improved = true;
    while improved {
        improved = false;
        for i in 1..n - 1 {
            for j in (i + 1)..n {
                if i == 1 && j == n - 1 {
                    continue;
                }
                let (p, s) = (order[i - 1], order[(j + 1) % n]);
                let delta = inst.dist(p, order[j]) + inst.dist(order[i], s)
                    - inst.dist(p, order[i])
                    - inst.dist(order[j], s);
                if delta < 0.0 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
    }
    Tour::new(order).expect("2-opt preserves validity")
}
