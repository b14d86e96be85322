//! Linear algebra at a single stalk `(v, t)`.

use std::collections::HashMap;

use serde::Serialize;

use super::nerve::{Nerve, NerveEntry};
use crate::complex::{Direction, Subcomplex};
use crate::linalg::F2Matrix;
use crate::persistence::reduce::CellComplex;
use crate::persistence::{betti_eq, betti_numbers, essential_counts};
use crate::union_find::UnionFind;

/// Component labels of the sublevel set of one nerve entry: for each member
/// vertex (by position), the smallest vertex index of its component, or
/// `None` above the level.
pub(crate) fn entry_components(entry: &NerveEntry<'_>, vertex_heights: &[f64], t: f64) -> Vec<Option<usize>> {
    let alive: Vec<bool> = entry.vertices.iter().map(|&v| vertex_heights[v] <= t).collect();
    let mut uf = UnionFind::new(entry.vertices.len());
    for &(a, b) in &entry.edges {
        if alive[a] && alive[b] {
            uf.union(a, b);
        }
    }
    let mut root_label = vec![usize::MAX; entry.vertices.len()];
    entry
        .vertices
        .iter()
        .enumerate()
        .map(|(pos, &v)| {
            alive[pos].then(|| {
                let r = uf.find(pos);
                if root_label[r] == usize::MAX {
                    root_label[r] = v;
                }
                root_label[r]
            })
        })
        .collect()
}

/// The degree-0 Čech complex at one stalk: depth k holds one basis vector
/// per connected component of each sublevel set `M_{I,v,t}` with `|I| = k`.
#[derive(Debug, Clone)]
pub struct CechH0Complex {
    pub direction: Direction,
    pub t: f64,
    /// Basis per depth (0-based): (index set, component label).
    pub basis: Vec<Vec<(Vec<usize>, usize)>>,
    /// `differentials[k]` maps depth `k` to depth `k + 1` (0-based); rows
    /// index the target basis.
    pub differentials: Vec<F2Matrix>,
}

impl CechH0Complex {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    /// Cohomology dimensions, one per depth.
    pub fn cohomology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(F2Matrix::rank).collect();
        cohomology_from_ranks(&self.dims(), &ranks)
    }

    /// Whether consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }
}

fn cohomology_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            dims[k] - out - inc
        })
        .collect()
}

/// Builds the Čech complex of degree-0 cohomology at `(v, t)`, given vertex
/// heights.
pub(crate) fn cech_h0_with_heights(nerve: &Nerve<'_>, vertex_heights: &[f64], t: f64) -> (Vec<Vec<(usize, usize)>>, Vec<F2Matrix>) {
    let entries = nerve.entries();
    let labels: Vec<Vec<Option<usize>>> = entries
        .iter()
        .map(|e| entry_components(e, vertex_heights, t))
        .collect();
    // per entry: sorted component labels and the offset of its block
    let mut comp_ids: Vec<Vec<usize>> = Vec::with_capacity(entries.len());
    for (e, l) in entries.iter().zip(&labels) {
        let ids: Vec<usize> = e
            .vertices
            .iter()
            .zip(l)
            .filter_map(|(&v, &lab)| (lab == Some(v)).then_some(v))
            .collect();
        comp_ids.push(ids);
    }
    let mut offset = vec![0usize; entries.len()];
    let mut basis: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in 1..=nerve.depth_count() {
        let mut b = Vec::new();
        for e in nerve.at_depth(k) {
            offset[e] = b.len();
            b.extend(comp_ids[e].iter().map(|&c| (e, c)));
        }
        basis.push(b);
    }
    let mut differentials = Vec::new();
    for k in 1..nerve.depth_count() {
        let rows = basis[k].len();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); basis[k - 1].len()];
        for (row, &(j, label)) in basis[k].iter().enumerate() {
            for &i in &entries[j].facets {
                let pos = entries[i]
                    .vertices
                    .binary_search(&label)
                    .expect("intersection vertices belong to every facet");
                let c = labels[i][pos].expect("vertex is below the level in the facet too");
                let col = offset[i] + comp_ids[i].binary_search(&c).expect("label is a component");
                cols[col].push(row);
            }
        }
        differentials.push(F2Matrix::from_columns(rows, cols));
    }
    (basis, differentials)
}

pub(crate) fn cech_h0_cohomology(nerve: &Nerve<'_>, vertex_heights: &[f64], t: f64) -> Vec<usize> {
    let (basis, diffs) = cech_h0_with_heights(nerve, vertex_heights, t);
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let ranks: Vec<usize> = diffs.iter().map(F2Matrix::rank).collect();
    cohomology_from_ranks(&dims, &ranks)
}

/// The degree-0 Čech complex of the cover's sublevel sets at `(v, t)`.
pub fn cech_h0_stalk(nerve: &Nerve<'_>, v: &Direction, t: f64) -> CechH0Complex {
    let vh = nerve.parent().vertex_heights(v);
    let (basis, differentials) = cech_h0_with_heights(nerve, &vh, t);
    let entries = nerve.entries();
    CechH0Complex {
        direction: v.clone(),
        t,
        basis: basis
            .into_iter()
            .map(|b| b.into_iter().map(|(e, c)| (entries[e].indices.clone(), c)).collect())
            .collect(),
        differentials,
    }
}

/// Čech–simplicial double complex at one stalk, in chain form: cell
/// `(I, σ)` for each simplex σ of the sublevel set of `M_I`, with Čech
/// degree `p = |I| - 1` and simplicial degree `q = dim σ`. Over F2 the
/// cohomology of the cochain double complex has the same dimensions as the
/// homology of this transpose.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    pub direction: Direction,
    pub t: f64,
    /// (entry id, simplex id) per cell.
    pub cells: Vec<(usize, usize)>,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    /// Čech part: `(J, σ) ↦ Σ (I, σ)` over facets `I` of `J`.
    pub horizontal: F2Matrix,
    /// Simplicial part: `(J, σ) ↦ Σ (J, τ)` over facets τ of σ.
    pub vertical: F2Matrix,
}

impl DoubleComplex {
    pub fn build(nerve: &Nerve<'_>, v: &Direction, t: f64) -> Self {
        let parent = nerve.parent();
        let heights = parent.simplex_heights(v);
        let mut cells = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, entry) in nerve.entries().iter().enumerate() {
            for &s in &entry.simplex_ids {
                if heights[s] <= t {
                    index.insert((e, s), cells.len());
                    cells.push((e, s));
                }
            }
        }
        let n = cells.len();
        let entries = nerve.entries();
        let horizontal = F2Matrix::from_columns(
            n,
            cells
                .iter()
                .map(|&(e, s)| entries[e].facets.iter().map(|&i| index[&(i, s)]).collect())
                .collect(),
        );
        let vertical = F2Matrix::from_columns(
            n,
            cells
                .iter()
                .map(|&(e, s)| parent.facets(s).iter().map(|&f| index[&(e, f)]).collect())
                .collect(),
        );
        Self {
            direction: v.clone(),
            t,
            p: cells.iter().map(|&(e, _)| entries[e].depth() - 1).collect(),
            q: cells.iter().map(|&(_, s)| parent.simplex_dim(s)).collect(),
            cells,
            horizontal,
            vertical,
        }
    }

    /// Both differentials square to zero and commute.
    pub fn check_differentials(&self) -> bool {
        self.horizontal.mul(&self.horizontal).is_zero()
            && self.vertical.mul(&self.vertical).is_zero()
            && self.horizontal.mul(&self.vertical) == self.vertical.mul(&self.horizontal)
    }

    /// Dimension of each cohomology group of the total complex.
    pub fn total_cohomology(&self) -> Vec<usize> {
        let n = self.cells.len();
        let total = self.horizontal.add(&self.vertical);
        let degree: Vec<usize> = (0..n).map(|i| self.p[i] + self.q[i]).collect();
        let Some(&top) = degree.iter().max() else {
            return Vec::new();
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (degree[i], i));
        let mut position = vec![0; n];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }
        let cells = CellComplex {
            dims: order.iter().map(|&i| degree[i]).collect(),
            boundary: order
                .iter()
                .map(|&i| total.column(i).iter().map(|&r| position[r]).collect())
                .collect(),
        };
        essential_counts(&cells, top)
    }
}

/// Cohomology of the total complex at `(v, t)`.
pub fn total_cohomology_stalk(nerve: &Nerve<'_>, v: &Direction, t: f64) -> Vec<usize> {
    DoubleComplex::build(nerve, v, t).total_cohomology()
}

/// `dims[p][q]` = sum over `|I| = p + 1` of `dim H^q` of the sublevel set of
/// `M_I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Page {
    pub dims: Vec<Vec<usize>>,
}

impl E1Page {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    /// Whether every entry with `q ≥ 1` is zero.
    pub fn higher_rows_vanish(&self) -> bool {
        self.dims.iter().all(|r| r.iter().skip(1).all(|&d| d == 0))
    }
}

pub(crate) fn e1_with_heights(nerve: &Nerve<'_>, simplex_heights: &[f64], t: f64) -> E1Page {
    let rows = nerve.parent().top_dim().map_or(1, |d| d + 1);
    let dims = (1..=nerve.depth_count())
        .map(|k| {
            let mut row = vec![0; rows];
            for e in nerve.at_depth(k) {
                let sub = nerve.entries()[e].sub.sublevel_with_heights(simplex_heights, t);
                for (q, b) in betti_numbers(&sub).into_iter().enumerate() {
                    row[q] += b;
                }
            }
            row
        })
        .collect();
    E1Page { dims }
}

pub fn e1_page(nerve: &Nerve<'_>, v: &Direction, t: f64) -> E1Page {
    e1_with_heights(nerve, &nerve.parent().simplex_heights(v), t)
}

/// Everything known about one stalk: the E1 page, both glued answers and
/// the direct Betti numbers of the sublevel set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StalkReport {
    pub direction: Vec<f64>,
    pub t: f64,
    pub e1: Vec<Vec<usize>>,
    pub fast: Vec<usize>,
    pub total: Vec<usize>,
    pub direct: Vec<usize>,
    pub fast_agrees: bool,
    pub total_agrees: bool,
}

impl StalkReport {
    pub fn new(e1: E1Page, direction: &Direction, t: f64, fast: Vec<usize>, total: Vec<usize>, direct: Vec<usize>) -> Self {
        Self {
            direction: direction.as_slice().to_vec(),
            t,
            e1: e1.dims,
            fast_agrees: betti_eq(&fast, &direct),
            total_agrees: betti_eq(&total, &direct),
            fast,
            total,
            direct,
        }
    }
}

pub fn stalk_report(nerve: &Nerve<'_>, v: &Direction, t: f64) -> StalkReport {
    let parent = nerve.parent();
    let sh = parent.simplex_heights(v);
    let vh = parent.vertex_heights(v);
    let direct = betti_numbers(&Subcomplex::full(parent).sublevel_with_heights(&sh, t));
    StalkReport::new(
        e1_with_heights(nerve, &sh, t),
        v,
        t,
        cech_h0_cohomology(nerve, &vh, t),
        total_cohomology_stalk(nerve, v, t),
        direct,
    )
}
