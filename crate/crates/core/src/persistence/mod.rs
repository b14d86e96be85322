//! Height filtrations, barcodes over F2, Betti curves and the bottleneck
//! distance.
//!
//! Intervals follow the closed-birth, open-death convention: a class born at
//! `b` and dying at `d` is alive on `[b, d)`. Zero-length intervals are kept in
//! the barcode but are flagged ephemeral and ignored by Betti curves and
//! distances.

mod bottleneck;
pub(crate) mod reduce;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{facets_of, Direction, SimplexLabel, Subcomplex};
use reduce::{reduce, CellComplex, Pairing};

pub use bottleneck::{bottleneck, bottleneck_all_degrees};

#[derive(Debug, Error, PartialEq)]
pub enum PersistenceError {
    #[error("face {face} of {simplex} enters the filtration after it")]
    FaceAfterCoface {
        face: SimplexLabel,
        simplex: SimplexLabel,
    },
    #[error("face {face} of {simplex} is missing from the filtration")]
    MissingFace {
        face: SimplexLabel,
        simplex: SimplexLabel,
    },
    #[error("simplex {0} appears twice")]
    Duplicate(SimplexLabel),
    #[error("simplex {0} has a non-finite value")]
    NonFinite(SimplexLabel),
}

/// Simplices paired with the value at which they enter, ordered by value,
/// then dimension, then vertex tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    entries: Vec<(Vec<usize>, f64)>,
}

fn entry_order(a: &(Vec<usize>, f64), b: &(Vec<usize>, f64)) -> Ordering {
    a.1.total_cmp(&b.1)
        .then_with(|| a.0.len().cmp(&b.0.len()))
        .then_with(|| a.0.cmp(&b.0))
}

impl Filtration {
    /// Sorts `entries` into filtration order and checks that every face is
    /// present with a value no larger than its cofaces'.
    pub fn new(mut entries: Vec<(Vec<usize>, f64)>) -> Result<Self, PersistenceError> {
        for (s, v) in &mut entries {
            s.sort_unstable();
            if !v.is_finite() {
                return Err(PersistenceError::NonFinite(SimplexLabel(s.clone())));
            }
        }
        entries.sort_by(entry_order);
        let mut value_of: HashMap<&[usize], f64> = HashMap::with_capacity(entries.len());
        for (s, v) in &entries {
            if value_of.insert(s.as_slice(), *v).is_some() {
                return Err(PersistenceError::Duplicate(SimplexLabel(s.clone())));
            }
        }
        for (s, v) in &entries {
            for f in facets_of(s) {
                match value_of.get(f.as_slice()) {
                    None => {
                        return Err(PersistenceError::MissingFace {
                            face: SimplexLabel(f),
                            simplex: SimplexLabel(s.clone()),
                        })
                    }
                    Some(fv) if fv > v => {
                        return Err(PersistenceError::FaceAfterCoface {
                            face: SimplexLabel(f),
                            simplex: SimplexLabel(s.clone()),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(Vec<usize>, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Simplices whose value is at most `t`; a prefix of the order.
    pub fn prefix(&self, t: f64) -> &[(Vec<usize>, f64)] {
        let end = self.entries.partition_point(|(_, v)| *v <= t);
        &self.entries[..end]
    }

    fn cells(&self) -> CellComplex {
        let position: HashMap<&[usize], usize> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.as_slice(), i))
            .collect();
        CellComplex {
            dims: self.entries.iter().map(|(s, _)| s.len() - 1).collect(),
            boundary: self
                .entries
                .iter()
                .map(|(s, _)| facets_of(s).map(|f| position[f.as_slice()]).collect())
                .collect(),
        }
    }
}

/// Lower-star filtration of `sub` in direction `v`: each simplex enters at
/// the largest height of its vertices.
pub fn lower_star_filtration(sub: &Subcomplex<'_>, v: &Direction) -> Filtration {
    let parent = sub.parent();
    let heights = parent.simplex_heights(v);
    let mut entries: Vec<(Vec<usize>, f64)> = sub
        .ids()
        .map(|id| (parent.simplex(id).to_vec(), heights[id]))
        .collect();
    entries.sort_by(entry_order);
    Filtration { entries }
}

/// A persistence interval `[birth, death)` in one homological degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub degree: usize,
    pub birth: f64,
    #[serde(serialize_with = "ser_death", deserialize_with = "de_death")]
    pub death: f64,
}

fn ser_death<S: Serializer>(d: &f64, s: S) -> Result<S::Ok, S::Error> {
    if d.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*d)
    }
}

fn de_death<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Death {
        Finite(f64),
        Text(String),
    }
    match Death::deserialize(d)? {
        Death::Finite(x) => Ok(x),
        Death::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Death::Text(t) => Err(serde::de::Error::custom(format!("bad death value {t:?}"))),
    }
}

impl Interval {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn is_ephemeral(&self) -> bool {
        self.birth == self.death
    }

    /// Alive at `t` under the closed-birth, open-death convention.
    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }

    fn order(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.birth.total_cmp(&other.birth))
            .then_with(|| self.death.total_cmp(&other.death))
    }
}

/// Persistence intervals of all degrees, sorted by degree, birth, death.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Barcode {
    intervals: Vec<Interval>,
}

impl Barcode {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(Interval::order);
        Self { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn in_degree(&self, n: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.degree == n)
    }

    /// Intervals of positive length.
    pub fn persistent(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|i| !i.is_ephemeral())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.intervals.iter().map(|i| i.degree).max()
    }

    /// Drops intervals above degree `n`.
    pub fn truncated(mut self, n: usize) -> Self {
        self.intervals.retain(|i| i.degree <= n);
        self
    }

    /// Betti numbers in degrees `0..=max_degree` at `t`.
    pub fn betti_at(&self, t: f64, max_degree: usize) -> Vec<usize> {
        let mut out = vec![0; max_degree + 1];
        for i in self.persistent() {
            if i.degree <= max_degree && i.contains(t) {
                out[i.degree] += 1;
            }
        }
        out
    }

    /// CSV with header `degree,birth,death`; ephemeral intervals omitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,birth,death\n");
        for i in self.persistent() {
            let death = if i.is_essential() {
                "inf".to_string()
            } else {
                format!("{:?}", i.death)
            };
            let _ = writeln!(out, "{},{:?},{}", i.degree, i.birth, death);
        }
        out
    }

    /// JSON array of intervals; ephemeral intervals omitted.
    pub fn to_json(&self) -> String {
        let persistent: Vec<&Interval> = self.persistent().collect();
        serde_json::to_string(&persistent).expect("intervals serialize")
    }
}

/// Number of persistent intervals in degree `n` alive at `t`.
pub fn betti_curve(bc: &Barcode, n: usize, t: f64) -> usize {
    bc.persistent()
        .filter(|i| i.degree == n && i.contains(t))
        .count()
}

pub(crate) fn barcode_from_pairing(p: &Pairing, dims: &[usize], values: &[f64]) -> Barcode {
    let mut intervals = Vec::with_capacity(p.pairs.len() + p.essential.len());
    for &(b, d) in &p.pairs {
        intervals.push(Interval {
            degree: dims[b],
            birth: values[b],
            death: values[d],
        });
    }
    for &b in &p.essential {
        intervals.push(Interval {
            degree: dims[b],
            birth: values[b],
            death: f64::INFINITY,
        });
    }
    Barcode::new(intervals)
}

/// Barcode of a filtration in every degree it contains.
pub fn compute_barcode(filt: &Filtration) -> Barcode {
    let cells = filt.cells();
    let top = cells.dims.iter().copied().max().unwrap_or(0);
    let values: Vec<f64> = filt.entries.iter().map(|(_, v)| *v).collect();
    barcode_from_pairing(&reduce(&cells, top), &cells.dims, &values)
}

/// Barcode of the lower-star filtration of `sub` for precomputed simplex
/// heights, restricted to degrees `0..=max_degree`. Equivalent to
/// `compute_barcode(&lower_star_filtration(..))` without building vertex
/// tuples.
pub fn sublevel_barcode(sub: &Subcomplex<'_>, heights: &[f64], max_degree: usize) -> Barcode {
    let parent = sub.parent();
    let mut order: Vec<usize> = sub.ids().collect();
    // ids are already ordered by (dimension, vertex tuple)
    order.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]).then(a.cmp(&b)));
    let mut position = vec![usize::MAX; parent.num_simplices()];
    for (pos, &id) in order.iter().enumerate() {
        position[id] = pos;
    }
    let cells = CellComplex {
        dims: order.iter().map(|&id| parent.simplex_dim(id)).collect(),
        boundary: order
            .iter()
            .map(|&id| parent.facets(id).iter().map(|&f| position[f]).collect())
            .collect(),
    };
    let values: Vec<f64> = order.iter().map(|&id| heights[id]).collect();
    barcode_from_pairing(&reduce(&cells, max_degree), &cells.dims, &values)
}

/// Betti numbers of a subcomplex in degrees `0..=top dimension` (empty for
/// the empty subcomplex).
pub fn betti_numbers(sub: &Subcomplex<'_>) -> Vec<usize> {
    let parent = sub.parent();
    let ids: Vec<usize> = sub.ids().collect();
    let Some(top) = ids.iter().map(|&id| parent.simplex_dim(id)).max() else {
        return Vec::new();
    };
    let mut position = vec![usize::MAX; parent.num_simplices()];
    for (pos, &id) in ids.iter().enumerate() {
        position[id] = pos;
    }
    let cells = CellComplex {
        dims: ids.iter().map(|&id| parent.simplex_dim(id)).collect(),
        boundary: ids
            .iter()
            .map(|&id| parent.facets(id).iter().map(|&f| position[f]).collect())
            .collect(),
    };
    essential_counts(&cells, top)
}

/// Ranks of homology of a cell complex in degrees `0..=top`.
pub(crate) fn essential_counts(cells: &CellComplex, top: usize) -> Vec<usize> {
    let p = reduce(cells, top);
    let mut out = vec![0; top + 1];
    for &i in &p.essential {
        out[cells.dims[i]] += 1;
    }
    out
}

/// Pads or compares Betti vectors of different lengths as if extended by
/// zeros.
pub fn betti_eq(a: &[usize], b: &[usize]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
}
