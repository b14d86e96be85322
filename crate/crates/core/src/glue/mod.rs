//! Gluing the transform of a shape from the transforms of a closed cover.
//!
//! Two routes are provided at each stalk `(v, t)`: the degree-0 Čech
//! complex of the cover's sublevel sets, which is exact when every
//! intersection has contractible or empty sublevel sets, and the total
//! complex of the Čech–simplicial double complex, which is always exact.

mod nerve;
mod stalk;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Cover, Direction, Subcomplex};
use crate::persistence::reduce::{reduce, CellComplex};
use crate::persistence::{barcode_from_pairing, betti_eq, sublevel_barcode, Barcode};
use crate::pht::DirectionGrid;

pub use nerve::{build_nerve, Nerve, NerveEntry, NerveSummary};
pub use stalk::{
    cech_h0_stalk, e1_page, stalk_report, total_cohomology_stalk, CechH0Complex, DoubleComplex, E1Page,
    StalkReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueMode {
    /// Degree-0 Čech complex only.
    Fast,
    /// Total complex of the double complex.
    Total,
}

impl std::str::FromStr for GlueMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" | "fastH0" | "fasth0" => Ok(Self::Fast),
            "total" => Ok(Self::Total),
            other => Err(format!("unknown glue mode {other:?}")),
        }
    }
}

/// Levels at which each direction is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum TGrid {
    /// Distinct vertex heights, midpoints between consecutive ones, and one
    /// level below and above everything.
    Critical,
    Uniform { lo: f64, hi: f64, count: usize },
    Values(Vec<f64>),
}

impl TGrid {
    pub fn resolve(&self, vertex_heights: &[f64]) -> Vec<f64> {
        match self {
            TGrid::Critical => critical_levels(vertex_heights),
            TGrid::Uniform { lo, hi, count } => match count {
                0 => Vec::new(),
                1 => vec![*lo],
                n => (0..*n)
                    .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
            TGrid::Values(v) => v.clone(),
        }
    }
}

/// Every combinatorially distinct sublevel set of a lower-star filtration is
/// reached at one of these levels.
pub fn critical_levels(vertex_heights: &[f64]) -> Vec<f64> {
    let mut h: Vec<f64> = vertex_heights.to_vec();
    h.sort_by(f64::total_cmp);
    h.dedup();
    let (Some(&lo), Some(&hi)) = (h.first(), h.last()) else {
        return vec![0.0];
    };
    let mut out = vec![lo - 1.0];
    for w in h.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(hi);
    out.push(hi + 1.0);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluedStalk {
    /// Index into the direction grid.
    pub direction: usize,
    pub t: f64,
    pub glued: Vec<usize>,
    pub direct: Vec<usize>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluedCurves {
    pub mode: GlueMode,
    pub stalks: Vec<GluedStalk>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl GluedCurves {
    pub fn mismatches(&self) -> impl Iterator<Item = &GluedStalk> {
        self.stalks.iter().filter(|s| !s.agrees)
    }

    pub fn all_agree(&self) -> bool {
        self.stalks.iter().all(|s| s.agrees)
    }
}

fn pad(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len.max(v.len()), 0);
    v
}

/// The filtered total complex for one direction: every cell `(I, σ)` enters
/// at the height of σ, so its prefixes are the stalk double complexes for
/// all levels at once.
fn total_barcode(nerve: &Nerve<'_>, heights: &[f64]) -> (Barcode, usize) {
    let parent = nerve.parent();
    let entries = nerve.entries();
    let mut base = Vec::with_capacity(entries.len());
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (e, entry) in entries.iter().enumerate() {
        base.push(cells.len());
        cells.extend(entry.simplex_ids.iter().map(|&s| (e, s)));
    }
    let local = |e: usize, s: usize| {
        base[e] + entries[e].simplex_ids.binary_search(&s).expect("face of a member is a member")
    };
    let degree = |(e, s): (usize, usize)| entries[e].depth() - 1 + parent.simplex_dim(s);
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (cells[a], cells[b]);
        heights[ca.1]
            .total_cmp(&heights[cb.1])
            .then(degree(ca).cmp(&degree(cb)))
            .then(ca.cmp(&cb))
    });
    let mut position = vec![0; cells.len()];
    for (pos, &c) in order.iter().enumerate() {
        position[c] = pos;
    }
    let dims: Vec<usize> = order.iter().map(|&c| degree(cells[c])).collect();
    let boundary = order
        .iter()
        .map(|&c| {
            let (e, s) = cells[c];
            entries[e]
                .facets
                .iter()
                .map(|&i| position[local(i, s)])
                .chain(parent.facets(s).iter().map(|&f| position[local(e, f)]))
                .collect()
        })
        .collect();
    let top = dims.iter().copied().max().unwrap_or(0);
    let complex = CellComplex { dims, boundary };
    let values: Vec<f64> = order.iter().map(|&c| heights[cells[c].1]).collect();
    (barcode_from_pairing(&reduce(&complex, top), &complex.dims, &values), top)
}

fn glue_direction(nerve: &Nerve<'_>, index: usize, v: &Direction, tgrid: &TGrid, mode: GlueMode) -> Vec<GluedStalk> {
    let parent = nerve.parent();
    let vh = parent.vertex_heights(v);
    let sh = parent.simplex_heights(v);
    let top = parent.top_dim().unwrap_or(0);
    let direct = sublevel_barcode(&Subcomplex::full(parent), &sh, top);
    let total = (mode == GlueMode::Total).then(|| total_barcode(nerve, &sh));
    tgrid
        .resolve(&vh)
        .into_iter()
        .map(|t| {
            let glued = match &total {
                Some((bc, deg)) => bc.betti_at(t, *deg),
                None => stalk::cech_h0_cohomology(nerve, &vh, t),
            };
            let d = direct.betti_at(t, top);
            let len = glued.len().max(d.len());
            let (glued, direct) = (pad(glued, len), pad(d, len));
            GluedStalk {
                direction: index,
                t,
                agrees: betti_eq(&glued, &direct),
                glued,
                direct,
            }
        })
        .collect()
}

/// Glued Betti numbers against direct ones on a `(v, t)` grid.
pub fn glued_betti_curves(cover: &Cover<'_>, grid: &DirectionGrid, tgrid: &TGrid, mode: GlueMode) -> GluedCurves {
    let nerve = build_nerve(cover, None);
    let stalks: Vec<Vec<GluedStalk>> = grid
        .directions
        .par_iter()
        .enumerate()
        .map(|(i, v)| glue_direction(&nerve, i, v, tgrid, mode))
        .collect();
    let warning = (mode == GlueMode::Fast && !convexity_check(cover).guaranteed()).then(|| {
        "fast path unsound: some cover elements are not single simplices, so intersections may carry higher cohomology"
            .to_string()
    });
    GluedCurves {
        mode,
        stalks: stalks.into_iter().flatten().collect(),
        warning,
    }
}

fn entry_barcodes(nerve: &Nerve<'_>, heights: &[f64], top: usize) -> Vec<Barcode> {
    nerve
        .entries()
        .iter()
        .map(|e| sublevel_barcode(&e.sub, heights, top))
        .collect()
}

fn e1_from_barcodes(nerve: &Nerve<'_>, barcodes: &[Barcode], t: f64, top: usize) -> E1Page {
    let dims = (1..=nerve.depth_count())
        .map(|k| {
            let mut row = vec![0; top + 1];
            for e in nerve.at_depth(k) {
                for (q, b) in barcodes[e].betti_at(t, top).into_iter().enumerate() {
                    row[q] += b;
                }
            }
            row
        })
        .collect();
    E1Page { dims }
}

/// Full stalk reports on a `(v, t)` grid, in direction-major order.
pub fn stalk_reports(cover: &Cover<'_>, grid: &DirectionGrid, tgrid: &TGrid) -> Vec<StalkReport> {
    let nerve = build_nerve(cover, None);
    let parent = cover.parent();
    let top = parent.top_dim().unwrap_or(0);
    let per_direction: Vec<Vec<StalkReport>> = grid
        .directions
        .par_iter()
        .map(|v| {
            let vh = parent.vertex_heights(v);
            let sh = parent.simplex_heights(v);
            let direct = sublevel_barcode(&Subcomplex::full(parent), &sh, top);
            let (total, total_top) = total_barcode(&nerve, &sh);
            let barcodes = entry_barcodes(&nerve, &sh, top);
            tgrid
                .resolve(&vh)
                .into_iter()
                .map(|t| {
                    StalkReport::new(
                        e1_from_barcodes(&nerve, &barcodes, t, top),
                        v,
                        t,
                        stalk::cech_h0_cohomology(&nerve, &vh, t),
                        total.betti_at(t, total_top),
                        direct.betti_at(t, top),
                    )
                })
                .collect()
        })
        .collect();
    per_direction.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Guaranteed,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub elements: Vec<Verdict>,
}

impl ConvexityReport {
    pub fn guaranteed(&self) -> bool {
        self.elements.iter().all(|&v| v == Verdict::Guaranteed)
    }
}

/// An element is guaranteed when it is the closure of one simplex: every
/// directional sublevel set of a simplex, and of any intersection with it,
/// is convex.
pub fn convexity_check(cover: &Cover<'_>) -> ConvexityReport {
    ConvexityReport {
        elements: cover
            .elements()
            .iter()
            .map(|e| {
                if e.maximal_ids().len() == 1 {
                    Verdict::Guaranteed
                } else {
                    Verdict::Unverified
                }
            })
            .collect(),
    }
}

/// A stalk where some intersection has higher cohomology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obstruction {
    pub direction: usize,
    pub t: f64,
    pub e1: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityScan {
    pub stalks: usize,
    pub obstructions: Vec<Obstruction>,
}

impl ConvexityScan {
    pub fn passed(&self) -> bool {
        self.obstructions.is_empty()
    }
}

/// E1 pages at every sampled stalk; rows `q ≥ 1` are read off per-entry
/// barcodes.
pub fn convexity_scan(cover: &Cover<'_>, grid: &DirectionGrid, tgrid: &TGrid) -> ConvexityScan {
    let nerve = build_nerve(cover, None);
    let parent = cover.parent();
    let top = parent.top_dim().unwrap_or(0);
    let per_direction: Vec<(usize, Vec<Obstruction>)> = grid
        .directions
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let sh = parent.simplex_heights(v);
            let barcodes = entry_barcodes(&nerve, &sh, top);
            let ts = tgrid.resolve(&parent.vertex_heights(v));
            let count = ts.len();
            let found = ts
                .into_iter()
                .filter_map(|t| {
                    let page = e1_from_barcodes(&nerve, &barcodes, t, top);
                    (!page.higher_rows_vanish()).then_some(Obstruction {
                        direction: i,
                        t,
                        e1: page.dims,
                    })
                })
                .collect();
            (count, found)
        })
        .collect();
    let mut scan = ConvexityScan {
        stalks: 0,
        obstructions: Vec::new(),
    };
    for (count, found) in per_direction {
        scan.stalks += count;
        scan.obstructions.extend(found);
    }
    scan
}
