//! TTP benchmark instances.
//!
//! The text format is the one used by the public TTP benchmark suite: a
//! `KEY: value` header, a `NODE_COORD_SECTION` with `index x y` rows and an
//! `ITEMS SECTION` with `index profit weight city` rows. Indices in files are
//! 1-based; in memory cities and items are 0-based, so file city 1 is city 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, ParseErrorKind, Result, TtpError};

/// A collectable item. `city` is the 0-based home city.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Item {
    pub profit: f64,
    pub weight: u64,
    pub city: usize,
}

/// An immutable Traveling Thief Problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    data_type: String,
    cities: Vec<(f64, f64)>,
    items: Vec<Item>,
    capacity: u64,
    min_speed: f64,
    max_speed: f64,
    renting_ratio: f64,
    nu: f64,
    dist: Vec<f64>,
    items_at: Vec<Vec<usize>>,
}

/// Rounded-up Euclidean distance (TSPLIB `CEIL_2D`).
pub fn ceil_2d(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt().ceil()
}

impl Instance {
    /// Builds an instance from in-memory data, validating the same
    /// invariants the parser enforces.
    pub fn new(
        name: impl Into<String>,
        cities: Vec<(f64, f64)>,
        items: Vec<Item>,
        capacity: u64,
        min_speed: f64,
        max_speed: f64,
        renting_ratio: f64,
    ) -> Result<Self> {
        let n = cities.len();
        let invalid = |kind| TtpError::Parse(ParseError { line: 0, kind });
        if n < 3 {
            return Err(invalid(ParseErrorKind::TooFewCities(n)));
        }
        if capacity == 0 {
            return Err(invalid(ParseErrorKind::NonPositiveCapacity));
        }
        if !(min_speed > 0.0 && min_speed <= max_speed && max_speed.is_finite()) {
            return Err(invalid(ParseErrorKind::InvalidSpeeds {
                min: min_speed,
                max: max_speed,
            }));
        }
        if !(renting_ratio >= 0.0 && renting_ratio.is_finite()) {
            return Err(invalid(ParseErrorKind::MalformedHeader(format!(
                "renting ratio {renting_ratio}"
            ))));
        }
        let mut items_at = vec![Vec::new(); n];
        for (idx, item) in items.iter().enumerate() {
            if item.city == 0 {
                return Err(invalid(ParseErrorKind::ItemAtStartCity { item: idx + 1 }));
            }
            if item.city >= n {
                return Err(invalid(ParseErrorKind::UnknownCity {
                    item: idx + 1,
                    city: item.city + 1,
                }));
            }
            if item.weight == 0 {
                return Err(invalid(ParseErrorKind::NonPositiveWeight { item: idx + 1 }));
            }
            if !(item.profit >= 0.0 && item.profit.is_finite()) {
                return Err(invalid(ParseErrorKind::MalformedRecord(format!(
                    "item {} has profit {}",
                    idx + 1,
                    item.profit
                ))));
            }
            items_at[item.city].push(idx);
        }

        let mut dist = vec![0.0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let d = ceil_2d(cities[u], cities[v]);
                dist[u * n + v] = d;
                dist[v * n + u] = d;
            }
        }

        Ok(Self {
            name: name.into(),
            data_type: String::new(),
            nu: (max_speed - min_speed) / capacity as f64,
            cities,
            items,
            capacity,
            min_speed,
            max_speed,
            renting_ratio,
            dist,
            items_at,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn knapsack_data_type(&self) -> &str {
        &self.data_type
    }

    /// Number of cities `n`.
    pub fn num_cities(&self) -> usize {
        self.cities.len()
    }

    /// Number of items `m`.
    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    pub fn cities(&self) -> &[(f64, f64)] {
        &self.cities
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, idx: usize) -> &Item {
        &self.items[idx]
    }

    /// Items located at a 0-based city, in index order.
    pub fn items_at(&self, city: usize) -> &[usize] {
        &self.items_at[city]
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn min_speed(&self) -> f64 {
        self.min_speed
    }

    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    pub fn renting_ratio(&self) -> f64 {
        self.renting_ratio
    }

    /// Speed loss per unit of carried weight, `(v_max - v_min) / W`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Travel speed while carrying `weight`.
    #[inline]
    pub fn speed(&self, weight: u64) -> f64 {
        self.max_speed - self.nu * weight as f64
    }

    /// Distance between 0-based cities. Panics on out-of-range indices.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.cities.len() + v]
    }

    /// Distance between 1-based cities, as they appear in benchmark files.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        let n = self.num_cities();
        for city in [u, v] {
            if city == 0 || city > n {
                return Err(TtpError::CityOutOfRange { city, n });
            }
        }
        Ok(self.dist(u - 1, v - 1))
    }

    /// Serialises the instance back to the benchmark text format.
    pub fn to_ttp_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PROBLEM NAME: \t{}", self.name)?;
        writeln!(f, "KNAPSACK DATA TYPE: \t{}", self.data_type)?;
        writeln!(f, "DIMENSION:\t{}", self.num_cities())?;
        writeln!(f, "NUMBER OF ITEMS: \t{}", self.num_items())?;
        writeln!(f, "CAPACITY OF KNAPSACK: \t{}", self.capacity)?;
        writeln!(f, "MIN SPEED: \t{}", self.min_speed)?;
        writeln!(f, "MAX SPEED: \t{}", self.max_speed)?;
        writeln!(f, "RENTING RATIO: \t{}", self.renting_ratio)?;
        writeln!(f, "EDGE_WEIGHT_TYPE:\tCEIL_2D")?;
        writeln!(f, "NODE_COORD_SECTION\t(INDEX, X, Y): ")?;
        for (i, (x, y)) in self.cities.iter().enumerate() {
            writeln!(f, "{}\t{}\t{}", i + 1, x, y)?;
        }
        writeln!(
            f,
            "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER): "
        )?;
        for (i, item) in self.items.iter().enumerate() {
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                i + 1,
                item.profit,
                item.weight,
                item.city + 1
            )?;
        }
        Ok(())
    }
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_instance(s)
    }
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    data_type: Option<String>,
    dimension: Option<usize>,
    num_items: Option<usize>,
    capacity: Option<i64>,
    min_speed: Option<f64>,
    max_speed: Option<f64>,
    renting_ratio: Option<f64>,
    edge_weight_type: Option<String>,
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Header,
    Nodes,
    Items,
}

fn field<T: FromStr>(line: usize, what: &str, raw: &str) -> std::result::Result<T, ParseError> {
    raw.parse().map_err(|_| ParseError {
        line,
        kind: ParseErrorKind::MalformedRecord(format!("cannot read {what} from `{raw}`")),
    })
}

/// Parses a TTP benchmark file.
pub fn parse_instance(text: &str) -> std::result::Result<Instance, ParseError> {
    let mut header = Header::default();
    let mut section = Section::Header;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut items: Vec<Option<(f64, i64, usize)>> = Vec::new();
    let mut node_rows = 0usize;
    let mut item_rows = 0usize;
    let mut nodes_line = 0usize;
    let mut items_line = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed == "EOF" {
            continue;
        }
        let err = |kind| ParseError { line, kind };

        if trimmed.starts_with("NODE_COORD_SECTION") {
            let n = header
                .dimension
                .ok_or_else(|| err(ParseErrorKind::MissingHeader("DIMENSION")))?;
            coords = vec![None; n];
            section = Section::Nodes;
            nodes_line = line;
            continue;
        }
        if trimmed.starts_with("ITEMS SECTION") {
            let m = header
                .num_items
                .ok_or_else(|| err(ParseErrorKind::MissingHeader("NUMBER OF ITEMS")))?;
            items = vec![None; m];
            section = Section::Items;
            items_line = line;
            continue;
        }

        match section {
            Section::Header => {
                let (key, value) = trimmed
                    .split_once(':')
                    .ok_or_else(|| err(ParseErrorKind::MalformedHeader(trimmed.to_string())))?;
                let key = key.trim().to_ascii_uppercase();
                let value = value.trim();
                match key.as_str() {
                    "PROBLEM NAME" | "NAME" => header.name = Some(value.to_string()),
                    "KNAPSACK DATA TYPE" => header.data_type = Some(value.to_string()),
                    "DIMENSION" => header.dimension = Some(field(line, "DIMENSION", value)?),
                    "NUMBER OF ITEMS" => {
                        header.num_items = Some(field(line, "NUMBER OF ITEMS", value)?)
                    }
                    "CAPACITY OF KNAPSACK" => {
                        header.capacity = Some(field(line, "CAPACITY OF KNAPSACK", value)?)
                    }
                    "MIN SPEED" => header.min_speed = Some(field(line, "MIN SPEED", value)?),
                    "MAX SPEED" => header.max_speed = Some(field(line, "MAX SPEED", value)?),
                    "RENTING RATIO" => {
                        header.renting_ratio = Some(field(line, "RENTING RATIO", value)?)
                    }
                    "EDGE_WEIGHT_TYPE" => {
                        if value != "CEIL_2D" {
                            return Err(err(ParseErrorKind::UnsupportedEdgeWeight(
                                value.to_string(),
                            )));
                        }
                        header.edge_weight_type = Some(value.to_string());
                    }
                    "COMMENT" | "TYPE" => {}
                    _ => return Err(err(ParseErrorKind::MalformedHeader(trimmed.to_string()))),
                }
            }
            Section::Nodes => {
                let cols: Vec<&str> = trimmed.split_whitespace().collect();
                if cols.len() != 3 {
                    return Err(err(ParseErrorKind::MalformedRecord(trimmed.to_string())));
                }
                let index: usize = field(line, "city index", cols[0])?;
                let x: f64 = field(line, "x coordinate", cols[1])?;
                let y: f64 = field(line, "y coordinate", cols[2])?;
                node_rows += 1;
                match coords.get_mut(index.wrapping_sub(1)) {
                    Some(slot @ None) => *slot = Some((x, y)),
                    _ => {
                        return Err(err(ParseErrorKind::MalformedRecord(format!(
                            "city index {index} is out of range or repeated"
                        ))))
                    }
                }
            }
            Section::Items => {
                let cols: Vec<&str> = trimmed.split_whitespace().collect();
                if cols.len() != 4 {
                    return Err(err(ParseErrorKind::MalformedRecord(trimmed.to_string())));
                }
                let index: usize = field(line, "item index", cols[0])?;
                let profit: f64 = field(line, "profit", cols[1])?;
                let weight: i64 = field(line, "weight", cols[2])?;
                let city: usize = field(line, "assigned city", cols[3])?;
                item_rows += 1;
                if !(profit >= 0.0 && profit.is_finite()) {
                    return Err(err(ParseErrorKind::MalformedRecord(format!(
                        "item {index} has profit {profit}"
                    ))));
                }
                if weight <= 0 {
                    return Err(err(ParseErrorKind::NonPositiveWeight { item: index }));
                }
                if city == 1 {
                    return Err(err(ParseErrorKind::ItemAtStartCity { item: index }));
                }
                if city == 0 || city > coords.len() {
                    return Err(err(ParseErrorKind::UnknownCity { item: index, city }));
                }
                match items.get_mut(index.wrapping_sub(1)) {
                    Some(slot @ None) => *slot = Some((profit, weight, city - 1)),
                    _ => {
                        return Err(err(ParseErrorKind::MalformedRecord(format!(
                            "item index {index} is out of range or repeated"
                        ))))
                    }
                }
            }
        }
    }

    if section == Section::Header {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::UnexpectedEof("NODE_COORD_SECTION"),
        });
    }
    let eof = |kind| ParseError {
        line: last_line,
        kind,
    };
    let n = coords.len();
    if node_rows != n {
        return Err(ParseError {
            line: nodes_line,
            kind: ParseErrorKind::CountMismatch {
                section: "NODE_COORD_SECTION",
                declared: n,
                found: node_rows,
            },
        });
    }
    if header.num_items.is_some() && items_line == 0 {
        return Err(eof(ParseErrorKind::UnexpectedEof("ITEMS SECTION")));
    }
    if item_rows != items.len() {
        return Err(ParseError {
            line: items_line,
            kind: ParseErrorKind::CountMismatch {
                section: "ITEMS SECTION",
                declared: items.len(),
                found: item_rows,
            },
        });
    }

    let missing = |name| eof(ParseErrorKind::MissingHeader(name));
    let capacity = header
        .capacity
        .ok_or_else(|| missing("CAPACITY OF KNAPSACK"))?;
    let min_speed = header.min_speed.ok_or_else(|| missing("MIN SPEED"))?;
    let max_speed = header.max_speed.ok_or_else(|| missing("MAX SPEED"))?;
    let renting_ratio = header
        .renting_ratio
        .ok_or_else(|| missing("RENTING RATIO"))?;
    header
        .edge_weight_type
        .as_ref()
        .ok_or_else(|| missing("EDGE_WEIGHT_TYPE"))?;
    if capacity <= 0 {
        return Err(eof(ParseErrorKind::NonPositiveCapacity));
    }

    let cities = coords.into_iter().flatten().collect();
    let items = items
        .into_iter()
        .flatten()
        .map(|(profit, weight, city)| Item {
            profit,
            weight: weight as u64,
            city,
        })
        .collect();
    let mut inst = Instance::new(
        header.name.unwrap_or_default(),
        cities,
        items,
        capacity as u64,
        min_speed,
        max_speed,
        renting_ratio,
    )
    .map_err(|e| match e {
        TtpError::Parse(p) => ParseError {
            line: last_line,
            kind: p.kind,
        },
        other => eof(ParseErrorKind::MalformedRecord(other.to_string())),
    })?;
    inst.data_type = header.data_type.unwrap_or_default();
    Ok(inst)
}
