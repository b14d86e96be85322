//! The persistent homology transform sampled on a finite grid of directions.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{Direction, Subcomplex};
use crate::persistence::{betti_curve, bottleneck_all_degrees, sublevel_barcode, Barcode, Interval};

#[derive(Debug, Error)]
pub enum PhtError {
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("scheme {scheme:?} is not available in dimension {dim}")]
    SchemeMismatch { scheme: GridScheme, dim: usize },
    #[error("grid resolution must be at least 1")]
    EmptyGrid,
    #[error("samples were computed on different direction grids")]
    GridMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Volume of the unit sphere S^{d-1} in R^d.
pub fn sphere_volume(d: usize) -> Result<f64, PhtError> {
    match d {
        2 => Ok(TAU),
        3 => Ok(4.0 * PI),
        other => Err(PhtError::UnsupportedDimension(other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScheme {
    /// Equally spaced angles (d = 2).
    Uniform,
    /// Golden-angle spiral points (d = 3).
    Fibonacci,
    /// Seeded uniform random directions (any supported d).
    Random,
}

impl GridScheme {
    /// The deterministic scheme for a dimension.
    pub fn default_for(d: usize) -> Self {
        if d == 3 {
            GridScheme::Fibonacci
        } else {
            GridScheme::Uniform
        }
    }
}

impl std::str::FromStr for GridScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "fibonacci" => Ok(Self::Fibonacci),
            "random" => Ok(Self::Random),
            other => Err(format!("unknown grid scheme {other:?}")),
        }
    }
}

/// Directions on S^{d-1} with quadrature weights summing to its volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    pub dimension: usize,
    pub scheme: GridScheme,
    pub directions: Vec<Direction>,
    pub weights: Vec<f64>,
}

impl DirectionGrid {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// The same grid with every direction mapped through `f` (which must
    /// preserve unit length).
    pub fn map_directions(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Self {
        let mut out = self.clone();
        out.directions = self
            .directions
            .iter()
            .map(|d| Direction::normalized(f(d.as_slice())).expect("rotation keeps unit length"))
            .collect();
        out
    }
}

/// Builds a grid of `resolution` equally weighted directions. `seed` is only
/// used by [`GridScheme::Random`].
pub fn make_grid(
    d: usize,
    resolution: usize,
    scheme: GridScheme,
    seed: Option<u64>,
) -> Result<DirectionGrid, PhtError> {
    let vol = sphere_volume(d)?;
    if resolution == 0 {
        return Err(PhtError::EmptyGrid);
    }
    let n = resolution;
    let directions: Vec<Direction> = match (scheme, d) {
        (GridScheme::Uniform, 2) => (0..n)
            .map(|k| Direction::from_angle(TAU * k as f64 / n as f64))
            .collect(),
        (GridScheme::Fibonacci, 3) => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    Direction::normalized(vec![r * phi.cos(), r * phi.sin(), z])
                        .expect("spiral point is nonzero")
                })
                .collect()
        }
        (GridScheme::Random, _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            (0..n)
                .map(|_| {
                    let phi = rng.random_range(0.0..TAU);
                    if d == 2 {
                        Direction::from_angle(phi)
                    } else {
                        let z: f64 = rng.random_range(-1.0..=1.0);
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        Direction::normalized(vec![r * phi.cos(), r * phi.sin(), z])
                            .expect("sphere point is nonzero")
                    }
                })
                .collect()
        }
        (scheme, dim) => return Err(PhtError::SchemeMismatch { scheme, dim }),
    };
    Ok(DirectionGrid {
        dimension: d,
        scheme,
        weights: vec![vol / n as f64; n],
        directions,
    })
}

fn serialize_persistent<S: Serializer>(barcodes: &[Barcode], s: S) -> Result<S::Ok, S::Error> {
    let lists: Vec<Vec<&Interval>> = barcodes.iter().map(|b| b.persistent().collect()).collect();
    lists.serialize(s)
}

fn deserialize_barcodes<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Barcode>, D::Error> {
    let lists = Vec::<Vec<Interval>>::deserialize(d)?;
    Ok(lists.into_iter().map(Barcode::new).collect())
}

/// Barcodes of a subcomplex for every direction of a grid.
///
/// The JSON form lists only intervals of positive length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhtSample {
    pub complex_hash: String,
    /// Barcodes cover degrees `0..=max_degree`.
    pub max_degree: usize,
    pub grid: DirectionGrid,
    #[serde(serialize_with = "serialize_persistent", deserialize_with = "deserialize_barcodes")]
    pub barcodes: Vec<Barcode>,
}

impl PhtSample {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sample serializes");
        s.push('\n');
        s
    }
}

fn subcomplex_hash(sub: &Subcomplex<'_>) -> String {
    let mut h = Sha256::new();
    h.update(sub.parent().content_hash().as_bytes());
    h.update(sub.mask().iter().map(|&m| m as u8).collect::<Vec<u8>>());
    hex::encode(h.finalize())
}

/// Barcodes of the lower-star filtration of `sub` in every grid direction,
/// in degrees `0..=d`.
pub fn compute_pht(sub: &Subcomplex<'_>, grid: &DirectionGrid) -> PhtSample {
    compute_pht_truncated(sub, grid, grid.dimension)
}

/// As [`compute_pht`], restricted to degrees `0..=max_degree`.
pub fn compute_pht_truncated(sub: &Subcomplex<'_>, grid: &DirectionGrid, max_degree: usize) -> PhtSample {
    let parent = sub.parent();
    let barcodes = grid
        .directions
        .par_iter()
        .map(|v| sublevel_barcode(sub, &parent.simplex_heights(v), max_degree))
        .collect();
    PhtSample {
        complex_hash: subcomplex_hash(sub),
        max_degree,
        grid: grid.clone(),
        barcodes,
    }
}

/// Weighted sum over directions of the largest per-degree bottleneck
/// distance. A computable stand-in for an interleaving-type distance between
/// transforms; it is not claimed to equal one.
pub fn pht_distance_surrogate(a: &PhtSample, b: &PhtSample) -> Result<f64, PhtError> {
    if a.grid != b.grid {
        return Err(PhtError::GridMismatch);
    }
    let max_degree = a.max_degree.max(b.max_degree);
    Ok(a.barcodes
        .iter()
        .zip(&b.barcodes)
        .zip(&a.grid.weights)
        .map(|((x, y), w)| w * bottleneck_all_degrees(x, y, max_degree))
        .sum())
}

const SVG_SIZE: f64 = 400.0;
const INNER_RADIUS: f64 = 24.0;
const OUTER_RADIUS: f64 = 176.0;
const RADIAL_BINS: usize = 48;
const PALETTE: [&str; 5] = ["#ffffff", "#fdd49e", "#fc8d59", "#d7301f", "#7f0000"];

/// Default height window: all finite interval endpoints, padded by 10%.
fn default_t_range(sample: &PhtSample) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for bc in &sample.barcodes {
        for i in bc.persistent() {
            lo = lo.min(i.birth);
            hi = hi.max(i.birth);
            if i.death.is_finite() {
                hi = hi.max(i.death);
            }
        }
    }
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = ((hi - lo) * 0.1).max(0.1);
    (lo - pad, hi + pad)
}

fn point(angle: f64, r: f64) -> (f64, f64) {
    let c = SVG_SIZE / 2.0;
    (c + r * angle.cos(), c - r * angle.sin())
}

/// Polar heatmap of the degree-`degree` Betti curve: each direction owns an
/// angular sector, and height `t` maps linearly to radius.
pub fn render_heatmap_svg(
    sample: &PhtSample,
    degree: usize,
    t_range: Option<(f64, f64)>,
) -> Result<String, PhtError> {
    if sample.grid.dimension != 2 {
        return Err(PhtError::UnsupportedDimension(sample.grid.dimension));
    }
    let (t_lo, t_hi) = t_range.unwrap_or_else(|| default_t_range(sample));
    let angles: Vec<f64> = sample
        .grid
        .directions
        .iter()
        .map(|d| d.as_slice()[1].atan2(d.as_slice()[0]).rem_euclid(TAU))
        .collect();
    let mut order: Vec<usize> = (0..angles.len()).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SVG_SIZE
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="{}"/>"#, PALETTE[0]);
    let bin = (t_hi - t_lo) / RADIAL_BINS as f64;
    let radius = |t: f64| INNER_RADIUS + (t - t_lo) / (t_hi - t_lo) * (OUTER_RADIUS - INNER_RADIUS);
    let m = order.len();
    for (k, &i) in order.iter().enumerate() {
        let (a0, a1) = if m == 1 {
            (0.0, TAU)
        } else {
            let prev = angles[order[(k + m - 1) % m]];
            let next = angles[order[(k + 1) % m]];
            let gap_prev = (angles[i] - prev).rem_euclid(TAU);
            let gap_next = (next - angles[i]).rem_euclid(TAU);
            (angles[i] - gap_prev / 2.0, angles[i] + gap_next / 2.0)
        };
        let bc = &sample.barcodes[i];
        let values: Vec<usize> = (0..RADIAL_BINS)
            .map(|j| betti_curve(bc, degree, t_lo + (j as f64 + 0.5) * bin))
            .collect();
        let mut j = 0;
        while j < RADIAL_BINS {
            let value = values[j];
            let start = j;
            while j < RADIAL_BINS && values[j] == value {
                j += 1;
            }
            if value == 0 {
                continue;
            }
            let r0 = radius(t_lo + start as f64 * bin);
            let r1 = radius(t_lo + j as f64 * bin);
            let color = PALETTE[value.min(PALETTE.len() - 1)];
            let large = if a1 - a0 > PI { 1 } else { 0 };
            let (x0, y0) = point(a0, r0);
            let (x1, y1) = point(a0, r1);
            let (x2, y2) = point(a1, r1);
            let (x3, y3) = point(a1, r0);
            let _ = writeln!(
                out,
                r#"<path d="M{x0:.3} {y0:.3} L{x1:.3} {y1:.3} A{r1:.3} {r1:.3} 0 {large} 0 {x2:.3} {y2:.3} L{x3:.3} {y3:.3} A{r0:.3} {r0:.3} 0 {large} 1 {x0:.3} {y0:.3} Z" fill="{color}" data-value="{value}"/>"#
            );
        }
    }
    let _ = writeln!(
        out,
        r##"<circle cx="{c}" cy="{c}" r="{INNER_RADIUS}" fill="none" stroke="#999999"/>"##,
        c = SVG_SIZE / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="8" y="16" font-family="monospace" font-size="11">degree {degree}, t in [{t_lo:.3}, {t_hi:.3}]</text>"#
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_heatmap(
    sample: &PhtSample,
    degree: usize,
    path: &Path,
    t_range: Option<(f64, f64)>,
) -> Result<(), PhtError> {
    std::fs::write(path, render_heatmap_svg(sample, degree, t_range)?)?;
    Ok(())
}
