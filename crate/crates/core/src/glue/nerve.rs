use std::collections::HashMap;
use std::ops::Range;

use serde::Serialize;

use crate::complex::{intersect, Cover, EmbeddedComplex, Subcomplex};

/// One nonempty intersection `M_I` of cover elements.
#[derive(Debug, Clone)]
pub struct NerveEntry<'a> {
    /// Sorted cover indices `I`.
    pub indices: Vec<usize>,
    pub sub: Subcomplex<'a>,
    /// Entry ids of `I \ {i}` for each `i` in `I`, in order; empty at depth 1.
    pub facets: Vec<usize>,
    pub(crate) simplex_ids: Vec<usize>,
    /// Coordinate rows of the member vertices, increasing.
    pub(crate) vertices: Vec<usize>,
    /// Member edges as pairs of positions in `vertices`.
    pub(crate) edges: Vec<(usize, usize)>,
}

impl NerveEntry<'_> {
    pub fn depth(&self) -> usize {
        self.indices.len()
    }
}

/// All nonempty intersections of a cover up to a maximum depth, ordered by
/// depth and then lexicographically by index set.
#[derive(Debug, Clone)]
pub struct Nerve<'a> {
    parent: &'a EmbeddedComplex,
    cover_len: usize,
    entries: Vec<NerveEntry<'a>>,
    depths: Vec<Range<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

fn make_entry<'a>(indices: Vec<usize>, sub: Subcomplex<'a>, facets: Vec<usize>) -> NerveEntry<'a> {
    let parent = sub.parent();
    let simplex_ids: Vec<usize> = sub.ids().collect();
    let vertices: Vec<usize> = simplex_ids
        .iter()
        .take_while(|&&id| parent.simplex_dim(id) == 0)
        .map(|&id| parent.simplex(id)[0])
        .collect();
    let edges = parent
        .ids_of_dim(1)
        .filter(|&id| sub.contains(id))
        .map(|id| {
            let e = parent.simplex(id);
            let pos = |v: usize| vertices.binary_search(&v).expect("edge endpoints are members");
            (pos(e[0]), pos(e[1]))
        })
        .collect();
    NerveEntry {
        indices,
        sub,
        facets,
        simplex_ids,
        vertices,
        edges,
    }
}

/// Enumerates the nonempty intersections of `cover` with at most `max_depth`
/// elements (all depths when `None`).
pub fn build_nerve<'a>(cover: &Cover<'a>, max_depth: Option<usize>) -> Nerve<'a> {
    let max_depth = max_depth.unwrap_or(cover.len()).min(cover.len());
    let elements = cover.elements();
    let mut entries: Vec<NerveEntry<'a>> = Vec::new();
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut depths = Vec::new();

    let start = entries.len();
    for (i, e) in elements.iter().enumerate() {
        if !e.is_empty() {
            lookup.insert(vec![i], entries.len());
            entries.push(make_entry(vec![i], e.clone(), Vec::new()));
        }
    }
    depths.push(start..entries.len());

    for _ in 1..max_depth {
        let prev = depths.last().expect("depth 1 exists").clone();
        let start = entries.len();
        for k in prev {
            let last = *entries[k].indices.last().expect("index sets are nonempty");
            for j in last + 1..elements.len() {
                let mut indices = entries[k].indices.clone();
                indices.push(j);
                // every facet must be a nonempty intersection already listed
                let facets: Option<Vec<usize>> = (0..indices.len())
                    .map(|skip| {
                        let f: Vec<usize> = indices
                            .iter()
                            .enumerate()
                            .filter(|&(p, _)| p != skip)
                            .map(|(_, &x)| x)
                            .collect();
                        lookup.get(&f).copied()
                    })
                    .collect();
                let Some(facets) = facets else { continue };
                let sub = intersect(&[entries[k].sub.clone(), elements[j].clone()])
                    .expect("cover elements share a parent");
                if sub.is_empty() {
                    continue;
                }
                lookup.insert(indices.clone(), entries.len());
                entries.push(make_entry(indices, sub, facets));
            }
        }
        if entries.len() == start {
            break;
        }
        depths.push(start..entries.len());
    }
    Nerve {
        parent: cover.parent(),
        cover_len: cover.len(),
        entries,
        depths,
        lookup,
    }
}

impl<'a> Nerve<'a> {
    pub fn parent(&self) -> &'a EmbeddedComplex {
        self.parent
    }

    pub fn cover_len(&self) -> usize {
        self.cover_len
    }

    pub fn entries(&self) -> &[NerveEntry<'a>] {
        &self.entries
    }

    /// Number of nonempty depths.
    pub fn depth_count(&self) -> usize {
        self.depths.len()
    }

    /// Entry ids at depth `k` (1-based).
    pub fn at_depth(&self, k: usize) -> Range<usize> {
        self.depths.get(k.wrapping_sub(1)).cloned().unwrap_or(0..0)
    }

    pub fn find(&self, indices: &[usize]) -> Option<&NerveEntry<'a>> {
        self.lookup.get(indices).map(|&i| &self.entries[i])
    }

    /// Index sets per depth, for reporting.
    pub fn summary(&self) -> NerveSummary {
        NerveSummary {
            depths: self
                .depths
                .iter()
                .map(|r| self.entries[r.clone()].iter().map(|e| e.indices.clone()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NerveSummary {
    pub depths: Vec<Vec<Vec<usize>>>,
}
