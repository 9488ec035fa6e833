//! Tours, packing lists and the TTP objective.

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TtpError};
use crate::instance::Instance;

/// Undirected edge stored as `(min, max)` of two 0-based cities.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A Hamiltonian cycle over all cities that starts at city 0.
///
/// Keeps the inverse permutation so that successor, predecessor and edge
/// membership queries are O(1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl Tour {
    /// Builds a tour from a 0-based visiting order.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(TtpError::InvalidTour(format!(
                "{n} cities, need at least 3"
            )));
        }
        if order[0] != 0 {
            return Err(TtpError::InvalidTour(format!(
                "tour starts at city {}, expected city 1",
                order[0] + 1
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &c) in order.iter().enumerate() {
            if c >= n || pos[c] != usize::MAX {
                return Err(TtpError::InvalidTour(format!(
                    "city {} is out of range or repeated",
                    c + 1
                )));
            }
            pos[c] = i;
        }
        Ok(Self { order, pos })
    }

    /// Builds a tour from 1-based city indices, as stored in files.
    pub fn from_one_based(cities: &[usize]) -> Result<Self> {
        let order = cities
            .iter()
            .map(|&c| {
                c.checked_sub(1)
                    .ok_or_else(|| TtpError::InvalidTour("city index 0".to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }

    /// The tour `0, 1, .., n-1`.
    pub fn identity(n: usize) -> Self {
        let order: Vec<usize> = (0..n).collect();
        Self {
            pos: order.clone(),
            order,
        }
    }

    /// Builds a tour for an instance, checking the city count.
    pub fn for_instance(inst: &Instance, order: Vec<usize>) -> Result<Self> {
        if order.len() != inst.num_cities() {
            return Err(TtpError::InvalidTour(format!(
                "tour has {} cities, instance has {}",
                order.len(),
                inst.num_cities()
            )));
        }
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.order.iter().map(|c| c + 1).collect()
    }

    /// Position of a city in the visiting order.
    #[inline]
    pub fn position(&self, city: usize) -> usize {
        self.pos[city]
    }

    #[inline]
    pub fn next(&self, city: usize) -> usize {
        let i = self.pos[city] + 1;
        if i == self.order.len() {
            self.order[0]
        } else {
            self.order[i]
        }
    }

    #[inline]
    pub fn prev(&self, city: usize) -> usize {
        let i = self.pos[city];
        if i == 0 {
            self.order[self.order.len() - 1]
        } else {
            self.order[i - 1]
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.next(u) == v || self.prev(u) == v
    }

    /// The `n` undirected edges, in visiting order, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| edge(self.order[i], self.order[(i + 1) % n]))
    }

    /// Total length of the cycle.
    pub fn length(&self, inst: &Instance) -> f64 {
        let n = self.order.len();
        (0..n)
            .map(|i| inst.dist(self.order[i], self.order[(i + 1) % n]))
            .sum()
    }

    /// Same cycle traversed in the opposite direction, still from city 0.
    pub fn reversed(&self) -> Self {
        let mut order = Vec::with_capacity(self.order.len());
        order.push(self.order[0]);
        order.extend(self.order[1..].iter().rev());
        Self::new(order).expect("reversal preserves validity")
    }
}

/// Item selection with cached weight and profit totals.
///
/// Equality and hashing look only at the selection bits.
#[derive(Debug, Clone)]
pub struct PackingList {
    selected: Vec<bool>,
    total_weight: u64,
    total_profit: f64,
}

impl PartialEq for PackingList {
    fn eq(&self, other: &Self) -> bool {
        self.selected == other.selected
    }
}

impl Eq for PackingList {}

impl Hash for PackingList {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.selected.hash(state);
    }
}

impl PackingList {
    pub fn empty(m: usize) -> Self {
        Self {
            selected: vec![false; m],
            total_weight: 0,
            total_profit: 0.0,
        }
    }

    pub fn from_bits(inst: &Instance, selected: Vec<bool>) -> Result<Self> {
        if selected.len() != inst.num_items() {
            return Err(TtpError::ItemOutOfRange {
                item: selected.len(),
                m: inst.num_items(),
            });
        }
        let mut p = Self {
            selected,
            total_weight: 0,
            total_profit: 0.0,
        };
        p.recompute(inst);
        Ok(p)
    }

    /// Builds a packing from 0-based item indices.
    pub fn from_items(inst: &Instance, items: &[usize]) -> Result<Self> {
        let mut p = Self::empty(inst.num_items());
        for &i in items {
            if i >= inst.num_items() {
                return Err(TtpError::ItemOutOfRange {
                    item: i + 1,
                    m: inst.num_items(),
                });
            }
            p.set(inst, i, true);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    #[inline]
    pub fn is_selected(&self, item: usize) -> bool {
        self.selected[item]
    }

    pub fn bits(&self) -> &[bool] {
        &self.selected
    }

    /// Selected 0-based item indices, ascending.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.selected
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
    }

    pub fn count(&self) -> usize {
        self.selected.iter().filter(|&&s| s).count()
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn total_profit(&self) -> f64 {
        self.total_profit
    }

    pub fn set(&mut self, inst: &Instance, item: usize, value: bool) {
        if self.selected[item] != value {
            self.flip(inst, item);
        }
    }

    pub fn flip(&mut self, inst: &Instance, item: usize) {
        let it = inst.item(item);
        if self.selected[item] {
            self.total_weight -= it.weight;
            self.total_profit -= it.profit;
        } else {
            self.total_weight += it.weight;
            self.total_profit += it.profit;
        }
        self.selected[item] = !self.selected[item];
    }

    /// Recomputes the cached sums from the selection bits.
    pub fn recompute(&mut self, inst: &Instance) {
        self.total_weight = 0;
        self.total_profit = 0.0;
        for (i, &s) in self.selected.iter().enumerate() {
            if s {
                self.total_weight += inst.item(i).weight;
                self.total_profit += inst.item(i).profit;
            }
        }
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.total_weight <= inst.capacity()
    }
}

/// Weight carried when leaving each tour position, i.e. after collecting
/// the selected items of that city.
pub fn cumulative_weights(inst: &Instance, tour: &Tour, packing: &PackingList) -> Vec<u64> {
    let mut carried = 0;
    tour.order()
        .iter()
        .map(|&city| {
            carried += inst
                .items_at(city)
                .iter()
                .filter(|&&i| packing.is_selected(i))
                .map(|&i| inst.item(i).weight)
                .sum::<u64>();
            carried
        })
        .collect()
}

/// Travel time of the tour under the packing's weight profile.
pub fn travel_time(inst: &Instance, tour: &Tour, packing: &PackingList) -> f64 {
    let order = tour.order();
    let n = order.len();
    let mut carried = 0u64;
    let mut time = 0.0;
    for i in 0..n {
        let city = order[i];
        for &item in inst.items_at(city) {
            if packing.is_selected(item) {
                carried += inst.item(item).weight;
            }
        }
        time += inst.dist(city, order[(i + 1) % n]) / inst.speed(carried);
    }
    time
}

/// TTP objective `z(x, y)`: collected profit minus rent paid for the
/// travel time. Fails when the packing exceeds the capacity.
pub fn evaluate(inst: &Instance, tour: &Tour, packing: &PackingList) -> Result<f64> {
    if packing.total_weight() > inst.capacity() {
        return Err(TtpError::CapacityExceeded {
            weight: packing.total_weight(),
            capacity: inst.capacity(),
        });
    }
    Ok(packing.total_profit() - inst.renting_ratio() * travel_time(inst, tour, packing))
}

/// A feasible TTP solution with its cached objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct TtpSolution {
    tour: Tour,
    packing: PackingList,
    z: f64,
}

impl TtpSolution {
    pub fn new(inst: &Instance, tour: Tour, packing: PackingList) -> Result<Self> {
        if tour.len() != inst.num_cities() {
            return Err(TtpError::InvalidTour(format!(
                "tour has {} cities, instance has {}",
                tour.len(),
                inst.num_cities()
            )));
        }
        if packing.len() != inst.num_items() {
            return Err(TtpError::ItemOutOfRange {
                item: packing.len(),
                m: inst.num_items(),
            });
        }
        let z = evaluate(inst, &tour, &packing)?;
        Ok(Self { tour, packing, z })
    }

    pub fn tour(&self) -> &Tour {
        &self.tour
    }

    pub fn packing(&self) -> &PackingList {
        &self.packing
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_snapshot(&self) -> SolutionSnapshot {
        SolutionSnapshot {
            tour: self.tour.to_one_based(),
            packing: self.packing.selected().map(|i| i + 1).collect(),
            z: self.z,
        }
    }

    /// Rebuilds a solution from its snapshot, re-evaluating `z`.
    pub fn from_snapshot(inst: &Instance, snap: &SolutionSnapshot) -> Result<Self> {
        let tour = Tour::from_one_based(&snap.tour)?;
        let items = snap
            .packing
            .iter()
            .map(|&i| {
                i.checked_sub(1).ok_or(TtpError::ItemOutOfRange {
                    item: 0,
                    m: inst.num_items(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; inst.num_items()];
        for &i in &items {
            if i < seen.len() && std::mem::replace(&mut seen[i], true) {
                return Err(TtpError::ItemOutOfRange {
                    item: i + 1,
                    m: inst.num_items(),
                });
            }
        }
        let packing = PackingList::from_items(inst, &items)?;
        Self::new(inst, tour, packing)
    }
}

/// Persisted form of a solution: 1-based city order, 1-based selected
/// items, and the objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSnapshot {
    pub tour: Vec<usize>,
    pub packing: Vec<usize>,
    pub z: f64,
}
