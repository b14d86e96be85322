//! Embedded simplicial complexes and the subsets the rest of the crate works
//! with: subcomplexes, closed covers, intersections and directional sublevel
//! sets.
//!
//! Simplices are stored once, in the parent [`EmbeddedComplex`], ordered by
//! dimension and then lexicographically by vertex tuple. Everything else
//! refers to simplices by their position in that order (a simplex id), and a
//! [`Subcomplex`] is a membership mask over those ids.

pub mod io;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::union_find::UnionFind;

pub use io::{
    load, load_cover, load_json, load_off, parse_cover, parse_json, parse_off, save, save_cover,
    to_json_string, to_off_string, CoverData, CoverElementData, Format,
};

/// Tolerance on `|v| = 1` for directions.
pub const DIRECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("invalid complex: {0}")]
    Invalid(#[from] Violation),
    #[error("subcomplexes do not share a parent complex")]
    MismatchedParents,
    #[error("mask has {found} entries, parent has {expected} simplices")]
    MaskLength { expected: usize, found: usize },
    #[error("mask is not closed under faces: face {face} of {simplex} absent")]
    MaskNotClosed { face: SimplexLabel, simplex: SimplexLabel },
    #[error("simplex {0} is not in the parent complex")]
    UnknownSimplex(SimplexLabel),
    #[error("cover does not contain simplex {0} of the parent")]
    CoverIncomplete(SimplexLabel),
    #[error("cover has no elements")]
    EmptyCover,
    #[error("direction has norm {norm}, expected 1")]
    NotUnit { norm: f64 },
    #[error("direction has {found} coordinates, expected {expected}")]
    DirectionDimension { expected: usize, found: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A vertex tuple rendered the way violations report it: `012` when every
/// index is a single digit, `10,11,12` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexLabel(pub Vec<usize>);

impl fmt::Display for SimplexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().all(|&i| i < 10) { "" } else { "," };
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

/// First invariant violation found in raw complex data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("unsupported ambient dimension {0}; expected 2 or 3")]
    UnsupportedDimension(usize),
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("simplex {0} is not strictly sorted")]
    NotSorted(SimplexLabel),
    #[error("simplex {simplex} listed with {group}-simplices")]
    WrongGroup { simplex: SimplexLabel, group: usize },
    #[error("simplex {simplex} references vertex {index} out of range")]
    OutOfRange { simplex: SimplexLabel, index: usize },
    #[error("simplex {0} listed twice")]
    Duplicate(SimplexLabel),
    #[error("face {face} of {simplex} absent")]
    MissingFace {
        face: SimplexLabel,
        simplex: SimplexLabel,
    },
}

/// Serialized form of a complex. `simplices[k]` lists the k-simplices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexData {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

/// Checks every invariant of an embedded complex and reports the first
/// offending item.
pub fn validate(data: &ComplexData) -> Result<(), Violation> {
    if !(2..=3).contains(&data.dimension) {
        return Err(Violation::UnsupportedDimension(data.dimension));
    }
    for (i, p) in data.vertices.iter().enumerate() {
        if p.len() != data.dimension {
            return Err(Violation::CoordinateCount {
                vertex: i,
                expected: data.dimension,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Violation::NonFinite(i));
        }
    }
    let n = data.vertices.len();
    let mut seen: HashMap<&[usize], ()> = HashMap::new();
    for (k, group) in data.simplices.iter().enumerate() {
        for s in group {
            let label = || SimplexLabel(s.clone());
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Violation::NotSorted(label()));
            }
            if s.len() != k + 1 {
                return Err(Violation::WrongGroup {
                    simplex: label(),
                    group: k,
                });
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Violation::OutOfRange {
                    simplex: label(),
                    index: bad,
                });
            }
            if seen.insert(s.as_slice(), ()).is_some() {
                return Err(Violation::Duplicate(label()));
            }
        }
    }
    for group in data.simplices.iter().skip(1) {
        for s in group {
            for face in facets_of(s) {
                if !seen.contains_key(face.as_slice()) {
                    return Err(Violation::MissingFace {
                        face: SimplexLabel(face),
                        simplex: SimplexLabel(s.clone()),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Codimension-one faces of a sorted vertex tuple, in the order obtained by
/// dropping each vertex in turn.
pub(crate) fn facets_of(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).filter(move |_| s.len() > 1).map(move |skip| {
        s.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// A unit vector in the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self, ComplexError> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_TOLERANCE {
            return Err(ComplexError::NotUnit { norm });
        }
        Ok(Self(coords))
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(coords: Vec<f64>) -> Result<Self, ComplexError> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(ComplexError::NotUnit { norm });
        }
        Ok(Self(coords.into_iter().map(|x| x / norm).collect()))
    }

    /// Planar direction at `angle` radians from the positive x-axis.
    pub fn from_angle(angle: f64) -> Self {
        Self(vec![angle.cos(), angle.sin()])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, p: &[f64]) -> f64 {
        self.0.iter().zip(p).map(|(a, b)| a * b).sum()
    }
}

impl TryFrom<Vec<f64>> for Direction {
    type Error = ComplexError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Direction::new(v)
    }
}

impl From<Direction> for Vec<f64> {
    fn from(d: Direction) -> Self {
        d.0
    }
}

/// A finite simplicial complex whose vertices carry coordinates in R^2 or R^3.
///
/// Immutable after construction. Simplex ids follow the canonical order
/// (dimension, then lexicographic vertex tuple).
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    dimension: usize,
    coords: Vec<f64>,
    simplices: Vec<Vec<usize>>,
    facets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    dim_start: Vec<usize>,
    vertex_simplex: Vec<Option<usize>>,
}

impl PartialEq for EmbeddedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.simplices == other.simplices
            && self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl EmbeddedComplex {
    /// Builds a complex from data that must already satisfy every invariant.
    pub fn from_data(data: &ComplexData) -> Result<Self, ComplexError> {
        validate(data)?;
        let all = data.simplices.iter().flatten().cloned().collect();
        Ok(Self::assemble(data.dimension, &data.vertices, all))
    }

    /// Builds the closure of `generators`: every face of every generator is
    /// added. Generators may be unsorted.
    pub fn from_maximal(
        dimension: usize,
        vertices: Vec<Vec<f64>>,
        generators: &[Vec<usize>],
    ) -> Result<Self, ComplexError> {
        let probe = ComplexData {
            dimension,
            vertices,
            simplices: Vec::new(),
        };
        validate(&probe)?;
        let n = probe.vertices.len();
        let mut all: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        for g in generators {
            let mut s = g.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Violation::NotSorted(SimplexLabel(g.clone())).into());
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Violation::OutOfRange {
                    simplex: SimplexLabel(g.clone()),
                    index: bad,
                }
                .into());
            }
            if s.is_empty() {
                continue;
            }
            close_into(&s, &mut all);
        }
        Ok(Self::assemble(dimension, &probe.vertices, all.into_iter().collect()))
    }

    /// Builds a complex from a simplex list already known to be sorted,
    /// in range and closed under faces.
    pub(crate) fn from_closed(
        dimension: usize,
        vertices: Vec<Vec<f64>>,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        let probe = ComplexData {
            dimension,
            vertices,
            simplices: Vec::new(),
        };
        validate(&probe)?;
        Ok(Self::assemble(dimension, &probe.vertices, simplices))
    }

    fn assemble(dimension: usize, vertices: &[Vec<f64>], mut all: Vec<Vec<usize>>) -> Self {
        all.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<usize>, usize> =
            all.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let facets = all
            .iter()
            .map(|s| facets_of(s).map(|f| index[&f]).collect())
            .collect();
        let top = all.last().map_or(0, |s| s.len());
        let mut dim_start = vec![0; top];
        for k in 0..top {
            dim_start[k] = all.partition_point(|s| s.len() < k + 1);
        }
        let mut vertex_simplex = vec![None; vertices.len()];
        for (i, s) in all.iter().enumerate().take_while(|(_, s)| s.len() == 1) {
            vertex_simplex[s[0]] = Some(i);
        }
        Self {
            dimension,
            coords: vertices.iter().flatten().copied().collect(),
            simplices: all,
            facets,
            index,
            dim_start,
            vertex_simplex,
        }
    }

    pub fn empty(dimension: usize) -> Self {
        Self::assemble(dimension, &[], Vec::new())
    }

    /// Ambient dimension d.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &[usize] {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Dimension of simplex `id` (number of vertices minus one).
    pub fn simplex_dim(&self, id: usize) -> usize {
        self.simplices[id].len() - 1
    }

    /// Ids of the codimension-one faces of simplex `id`.
    pub fn facets(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    pub fn id_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    /// Simplex id of the 0-simplex on coordinate row `vertex`.
    pub fn vertex_simplex(&self, vertex: usize) -> Option<usize> {
        self.vertex_simplex.get(vertex).copied().flatten()
    }

    /// Largest simplex dimension, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Id range of the k-simplices.
    pub fn ids_of_dim(&self, k: usize) -> std::ops::Range<usize> {
        match self.dim_start.get(k) {
            Some(&start) => start..self.dim_start.get(k + 1).copied().unwrap_or(self.simplices.len()),
            None => self.simplices.len()..self.simplices.len(),
        }
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        (0..self.dim_start.len())
            .map(|k| self.ids_of_dim(k).len())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.count_by_dim()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Height of a simplex in direction `v`: the maximum of `x · v` over its
    /// vertices, which is exact for straight simplices.
    pub fn height(&self, id: usize, v: &Direction) -> f64 {
        self.simplices[id]
            .iter()
            .map(|&i| v.dot(self.vertex(i)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `x · v` for every coordinate row.
    pub fn vertex_heights(&self, v: &Direction) -> Vec<f64> {
        (0..self.num_vertices()).map(|i| v.dot(self.vertex(i))).collect()
    }

    /// Height of every simplex, indexed by simplex id.
    pub fn simplex_heights(&self, v: &Direction) -> Vec<f64> {
        let vh = self.vertex_heights(v);
        self.simplices
            .iter()
            .map(|s| s.iter().map(|&i| vh[i]).fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }

    pub fn to_data(&self) -> ComplexData {
        let top = self.top_dim().map_or(0, |t| t + 1);
        ComplexData {
            dimension: self.dimension,
            vertices: (0..self.num_vertices())
                .map(|i| self.vertex(i).to_vec())
                .collect(),
            simplices: (0..top)
                .map(|k| self.ids_of_dim(k).map(|i| self.simplices[i].clone()).collect())
                .collect(),
        }
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(&self.to_data()).expect("complex data serializes");
        hex::encode(Sha256::digest(&json))
    }

    /// Returns a copy with every vertex mapped through `f`.
    pub fn map_vertices(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Self {
        let vertices: Vec<Vec<f64>> = (0..self.num_vertices()).map(|i| f(self.vertex(i))).collect();
        let mut out = self.clone();
        out.coords = vertices.into_iter().flatten().collect();
        out
    }
}

fn close_into(s: &[usize], all: &mut std::collections::HashSet<Vec<usize>>) {
    if all.contains(s) {
        return;
    }
    all.insert(s.to_vec());
    for f in facets_of(s) {
        close_into(&f, all);
    }
}

/// A face-closed subset of a parent complex.
#[derive(Debug, Clone)]
pub struct Subcomplex<'a> {
    parent: &'a EmbeddedComplex,
    mask: Vec<bool>,
}

impl PartialEq for Subcomplex<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.mask == other.mask
    }
}

impl<'a> Subcomplex<'a> {
    pub fn full(parent: &'a EmbeddedComplex) -> Self {
        Self {
            parent,
            mask: vec![true; parent.num_simplices()],
        }
    }

    pub fn empty(parent: &'a EmbeddedComplex) -> Self {
        Self {
            parent,
            mask: vec![false; parent.num_simplices()],
        }
    }

    pub fn from_mask(parent: &'a EmbeddedComplex, mask: Vec<bool>) -> Result<Self, ComplexError> {
        if mask.len() != parent.num_simplices() {
            return Err(ComplexError::MaskLength {
                expected: parent.num_simplices(),
                found: mask.len(),
            });
        }
        for (id, &m) in mask.iter().enumerate() {
            if !m {
                continue;
            }
            if let Some(&f) = parent.facets(id).iter().find(|&&f| !mask[f]) {
                return Err(ComplexError::MaskNotClosed {
                    face: SimplexLabel(parent.simplex(f).to_vec()),
                    simplex: SimplexLabel(parent.simplex(id).to_vec()),
                });
            }
        }
        Ok(Self { parent, mask })
    }

    /// Face-closure of the given simplex ids.
    pub fn closure_of_ids(parent: &'a EmbeddedComplex, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; parent.num_simplices()];
        let mut stack: Vec<usize> = ids.into_iter().collect();
        while let Some(id) = stack.pop() {
            if !mask[id] {
                mask[id] = true;
                stack.extend_from_slice(parent.facets(id));
            }
        }
        Self { parent, mask }
    }

    /// Face-closure of the given vertex tuples, which must be simplices of
    /// the parent (any vertex order).
    pub fn closure_of(parent: &'a EmbeddedComplex, generators: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut ids = Vec::with_capacity(generators.len());
        for g in generators {
            let mut s = g.clone();
            s.sort_unstable();
            let id = parent
                .id_of(&s)
                .ok_or_else(|| ComplexError::UnknownSimplex(SimplexLabel(g.clone())))?;
            ids.push(id);
        }
        Ok(Self::closure_of_ids(parent, ids))
    }

    pub fn parent(&self) -> &'a EmbeddedComplex {
        self.parent
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, id: usize) -> bool {
        self.mask[id]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    /// Member simplex ids in canonical order.
    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn is_subset_of(&self, other: &Subcomplex<'_>) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Members that are not a face of another member.
    pub fn maximal_ids(&self) -> Vec<usize> {
        let mut covered = vec![false; self.mask.len()];
        for id in self.ids() {
            for &f in self.parent.facets(id) {
                covered[f] = true;
            }
        }
        self.ids().filter(|&i| !covered[i]).collect()
    }

    pub fn sublevel(&self, v: &Direction, t: f64) -> Subcomplex<'a> {
        let heights = self.parent.simplex_heights(v);
        self.sublevel_with_heights(&heights, t)
    }

    /// Sublevel set for precomputed simplex heights.
    pub fn sublevel_with_heights(&self, heights: &[f64], t: f64) -> Subcomplex<'a> {
        Subcomplex {
            parent: self.parent,
            mask: self
                .mask
                .iter()
                .zip(heights)
                .map(|(&m, &h)| m && h <= t)
                .collect(),
        }
    }

    pub fn union(&self, other: &Subcomplex<'_>) -> Result<Subcomplex<'a>, ComplexError> {
        if !std::ptr::eq(self.parent, other.parent) {
            return Err(ComplexError::MismatchedParents);
        }
        Ok(Subcomplex {
            parent: self.parent,
            mask: self.mask.iter().zip(&other.mask).map(|(&a, &b)| a || b).collect(),
        })
    }

    /// Connected components of the 1-skeleton. Each component is labelled by
    /// its smallest vertex index.
    pub fn components(&self) -> Components {
        let parent = self.parent;
        let n = parent.num_vertices();
        let mut uf = UnionFind::new(n);
        for id in parent.ids_of_dim(1).filter(|&i| self.mask[i]) {
            let e = parent.simplex(id);
            uf.union(e[0], e[1]);
        }
        let mut root_label: HashMap<usize, usize> = HashMap::new();
        let mut labels = vec![None; n];
        // 0-simplices come in increasing vertex order, so the first vertex
        // seen in a class is its minimum.
        for id in parent.ids_of_dim(0).filter(|&i| self.mask[i]) {
            let v = parent.simplex(id)[0];
            let root = uf.find(v);
            let label = *root_label.entry(root).or_insert(v);
            labels[v] = Some(label);
        }
        Components {
            labels,
            count: root_label.len(),
        }
    }
}

/// Component labelling of a subcomplex's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// `labels[vertex]` is the component id, or `None` when the vertex is
    /// not in the subcomplex.
    pub labels: Vec<Option<usize>>,
    pub count: usize,
}

impl Components {
    /// Component ids in increasing order.
    pub fn ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .filter_map(|(v, l)| (*l == Some(v)).then_some(v))
            .collect();
        ids.sort_unstable();
        ids
    }
}

/// Simplex-set intersection of subcomplexes of one parent.
pub fn intersect<'a>(elements: &[Subcomplex<'a>]) -> Result<Subcomplex<'a>, ComplexError> {
    let (first, rest) = elements.split_first().ok_or(ComplexError::EmptyCover)?;
    let mut mask = first.mask.clone();
    for e in rest {
        if !std::ptr::eq(first.parent, e.parent) {
            return Err(ComplexError::MismatchedParents);
        }
        for (m, &b) in mask.iter_mut().zip(&e.mask) {
            *m &= b;
        }
    }
    Ok(Subcomplex {
        parent: first.parent,
        mask,
    })
}

/// A finite closed cover of a complex by subcomplexes.
#[derive(Debug, Clone)]
pub struct Cover<'a> {
    parent: &'a EmbeddedComplex,
    elements: Vec<Subcomplex<'a>>,
}

impl<'a> Cover<'a> {
    pub fn new(elements: Vec<Subcomplex<'a>>) -> Result<Self, ComplexError> {
        let parent = elements.first().ok_or(ComplexError::EmptyCover)?.parent;
        if elements.iter().any(|e| !std::ptr::eq(e.parent, parent)) {
            return Err(ComplexError::MismatchedParents);
        }
        for id in 0..parent.num_simplices() {
            if !elements.iter().any(|e| e.mask[id]) {
                return Err(ComplexError::CoverIncomplete(SimplexLabel(
                    parent.simplex(id).to_vec(),
                )));
            }
        }
        Ok(Self { parent, elements })
    }

    /// Cover by the closures of the maximal simplices of `parent`.
    pub fn by_maximal_simplices(parent: &'a EmbeddedComplex) -> Result<Self, ComplexError> {
        let full = Subcomplex::full(parent);
        let elements = full
            .maximal_ids()
            .into_iter()
            .map(|id| Subcomplex::closure_of_ids(parent, [id]))
            .collect();
        Self::new(elements)
    }

    pub fn parent(&self) -> &'a EmbeddedComplex {
        self.parent
    }

    pub fn elements(&self) -> &[Subcomplex<'a>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}


/// Small shapes shared by unit tests and the public examples.
pub mod fixtures {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    /// Regular octagon on the unit circle with vertex k at angle kπ/4. The
    /// coordinates are exact at the axis points.
    pub fn octagon() -> EmbeddedComplex {
        let s = FRAC_1_SQRT_2;
        let vertices = vec![
            vec![1.0, 0.0],
            vec![s, s],
            vec![0.0, 1.0],
            vec![-s, s],
            vec![-1.0, 0.0],
            vec![-s, -s],
            vec![0.0, -1.0],
            vec![s, -s],
        ];
        let edges: Vec<Vec<usize>> = (0..8).map(|i| vec![i, (i + 1) % 8]).collect();
        EmbeddedComplex::from_maximal(2, vertices, &edges).expect("octagon is valid")
    }

    /// The left and right closed half-arcs of [`octagon`], meeting at the
    /// top and bottom vertices.
    pub fn octagon_halves(c: &EmbeddedComplex) -> Cover<'_> {
        let left: Vec<Vec<usize>> = (2..6).map(|i| vec![i, i + 1]).collect();
        let right: Vec<Vec<usize>> = vec![vec![6, 7], vec![7, 0], vec![0, 1], vec![1, 2]];
        Cover::new(vec![
            Subcomplex::closure_of(c, &left).expect("left arc"),
            Subcomplex::closure_of(c, &right).expect("right arc"),
        ])
        .expect("halves cover the octagon")
    }

    /// Regular N-gon on a circle of the given radius.
    pub fn polygon(n: usize, radius: f64) -> EmbeddedComplex {
        let vertices = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                vec![radius * a.cos(), radius * a.sin()]
            })
            .collect();
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        EmbeddedComplex::from_maximal(2, vertices, &edges).expect("polygon is valid")
    }

    /// Boundary of the axis-aligned square `[-1, 1]^2`.
    pub fn square_boundary() -> EmbeddedComplex {
        let vertices = vec![
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        let edges: Vec<Vec<usize>> = (0..4).map(|i| vec![i, (i + 1) % 4]).collect();
        EmbeddedComplex::from_maximal(2, vertices, &edges).expect("square is valid")
    }

    /// Octahedron with every face subdivided into `m^2` triangles and all
    /// vertices pushed onto the unit sphere.
    pub fn subdivided_octahedron(m: usize) -> EmbeddedComplex {
        assert!(m >= 1);
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut lookup: HashMap<[i64; 3], usize> = HashMap::new();
        let mut triangles = Vec::new();
        let mi = m as i64;
        for sx in [1i64, -1] {
            for sy in [1i64, -1] {
                for sz in [1i64, -1] {
                    // lattice points (a, b, c) with a + b + c = m on this face
                    let mut id = |a: i64, b: i64| -> usize {
                        let c = mi - a - b;
                        let key = [sx * a, sy * b, sz * c];
                        *lookup.entry(key).or_insert_with(|| {
                            let p = [key[0] as f64, key[1] as f64, key[2] as f64];
                            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                            vertices.push(vec![p[0] / n, p[1] / n, p[2] / n]);
                            vertices.len() - 1
                        })
                    };
                    for a in 0..mi {
                        for b in 0..(mi - a) {
                            let p0 = id(a, b);
                            let p1 = id(a + 1, b);
                            let p2 = id(a, b + 1);
                            triangles.push(vec![p0, p1, p2]);
                            if a + b + 1 < mi {
                                let p3 = id(a + 1, b + 1);
                                triangles.push(vec![p1, p3, p2]);
                            }
                        }
                    }
                }
            }
        }
        EmbeddedComplex::from_maximal(3, vertices, &triangles).expect("sphere is valid")
    }

    /// The cover of [`subdivided_octahedron`] by its eight closed octant
    /// patches.
    pub fn octant_cover(c: &EmbeddedComplex) -> Cover<'_> {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); 8];
        for id in c.ids_of_dim(2) {
            let s = c.simplex(id);
            let mut centroid = [0.0; 3];
            for &v in s {
                for (k, x) in c.vertex(v).iter().enumerate() {
                    centroid[k] += x;
                }
            }
            let octant = (centroid[0] < 0.0) as usize * 4
                + (centroid[1] < 0.0) as usize * 2
                + (centroid[2] < 0.0) as usize;
            groups[octant].push(id);
        }
        Cover::new(
            groups
                .into_iter()
                .map(|g| Subcomplex::closure_of_ids(c, g))
                .collect(),
        )
        .expect("octants cover the sphere")
    }
}
