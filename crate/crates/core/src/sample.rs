//! Sampling manifolds, building Čech complexes of ball unions and checking
//! how far their transforms are from a fine reference triangulation.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::fixtures::polygon;
use crate::complex::{ComplexError, EmbeddedComplex, Subcomplex};
use crate::persistence::sublevel_barcode;
use crate::pht::{compute_pht_truncated, pht_distance_surrogate, sphere_volume, DirectionGrid, PhtError, PhtSample};

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("invalid manifold: {0}")]
    InvalidSpec(String),
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("radius {eps} must satisfy 0 < eps < {limit}")]
    RadiusOutOfRange { eps: f64, limit: f64 },
    #[error("direction grid has dimension {grid}, manifold lives in R^{ambient}")]
    GridDimension { grid: usize, ambient: usize },
    #[error(transparent)]
    Pht(#[from] PhtError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A built-in manifold with analytically known reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ManifoldSpec {
    Circle { radius: f64 },
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
}

impl ManifoldSpec {
    pub fn validate(&self) -> Result<(), SampleError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match *self {
            ManifoldSpec::Circle { radius } | ManifoldSpec::Sphere { radius } if !positive(radius) => {
                Err(SampleError::InvalidSpec(format!("radius {radius} must be positive")))
            }
            ManifoldSpec::Torus { major, minor } if !positive(major) || !positive(minor) => {
                Err(SampleError::InvalidSpec("torus radii must be positive".into()))
            }
            ManifoldSpec::Torus { major, minor } if major <= minor => Err(SampleError::InvalidSpec(format!(
                "torus major radius {major} must exceed minor radius {minor}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ManifoldSpec::Circle { .. } => 2,
            _ => 3,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ManifoldSpec::Circle { .. } => 1,
            _ => 2,
        }
    }

    /// Reach of the embedding.
    pub fn reach(&self) -> f64 {
        match *self {
            ManifoldSpec::Circle { radius } | ManifoldSpec::Sphere { radius } => radius,
            ManifoldSpec::Torus { major, minor } => minor.min(major - minor),
        }
    }

    pub fn betti(&self) -> Vec<usize> {
        match self {
            ManifoldSpec::Circle { .. } => vec![1, 1],
            ManifoldSpec::Sphere { .. } => vec![1, 0, 1],
            ManifoldSpec::Torus { .. } => vec![1, 2, 1],
        }
    }

    /// Distance-like residual of the implicit equation at `p`.
    pub fn residual(&self, p: &[f64]) -> f64 {
        match *self {
            ManifoldSpec::Circle { radius } | ManifoldSpec::Sphere { radius } => (norm(p) - radius).abs(),
            ManifoldSpec::Torus { major, minor } => {
                let ring = p[0].hypot(p[1]) - major;
                (ring.hypot(p[2]) - minor).abs()
            }
        }
    }

    fn torus_point(major: f64, minor: f64, theta: f64, phi: f64) -> Vec<f64> {
        let w = major + minor * phi.cos();
        vec![w * theta.cos(), w * theta.sin(), minor * phi.sin()]
    }
}

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub spec: ManifoldSpec,
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let header = ["x", "y", "z"][..self.spec.ambient_dim()].join(",");
        let mut out = header + "\n";
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// `n` independent points, uniform for surface measure.
pub fn sample_points(spec: &ManifoldSpec, n: usize, seed: u64) -> Result<PointCloud, SampleError> {
    spec.validate()?;
    if n == 0 {
        return Err(SampleError::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = match *spec {
            ManifoldSpec::Circle { radius } => {
                let a = rng.random_range(0.0..TAU);
                vec![radius * a.cos(), radius * a.sin()]
            }
            ManifoldSpec::Sphere { radius } => {
                // Archimedes: the height is uniform on [-r, r]
                let z: f64 = rng.random_range(-radius..=radius);
                let a = rng.random_range(0.0..TAU);
                let w = (radius * radius - z * z).max(0.0).sqrt();
                vec![w * a.cos(), w * a.sin(), z]
            }
            ManifoldSpec::Torus { major, minor } => {
                let theta = rng.random_range(0.0..TAU);
                let phi = rng.random_range(0.0..TAU);
                let accept: f64 = rng.random();
                // area element is proportional to major + minor cos(phi)
                if accept * (major + minor) > major + minor * phi.cos() {
                    continue;
                }
                ManifoldSpec::torus_point(major, minor, theta, phi)
            }
        };
        points.push(p);
    }
    Ok(PointCloud {
        spec: *spec,
        seed,
        points,
    })
}

/// Deterministic points spread over the manifold.
pub fn reference_points(spec: &ManifoldSpec, resolution: usize) -> Vec<Vec<f64>> {
    let n = resolution.max(1);
    match *spec {
        ManifoldSpec::Circle { radius } => (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                vec![radius * a.cos(), radius * a.sin()]
            })
            .collect(),
        ManifoldSpec::Sphere { radius } => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                    let w = (1.0 - z * z).max(0.0).sqrt();
                    let a = golden * k as f64;
                    vec![radius * w * a.cos(), radius * w * a.sin(), radius * z]
                })
                .collect()
        }
        ManifoldSpec::Torus { major, minor } => (0..n)
            .flat_map(|i| {
                (0..n).map(move |j| {
                    ManifoldSpec::torus_point(major, minor, TAU * i as f64 / n as f64, TAU * j as f64 / n as f64)
                })
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub radius: f64,
    /// Largest distance from a reference point to its nearest sample.
    pub max_gap: f64,
    pub ok: bool,
}

/// Whether every reference point lies within `r` of a sample.
pub fn density_check(cloud: &PointCloud, r: f64, ref_resolution: usize) -> DensityReport {
    let max_gap = reference_points(&cloud.spec, ref_resolution)
        .iter()
        .map(|q| {
            cloud
                .points
                .iter()
                .map(|p| dist(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    DensityReport {
        radius: r,
        max_gap,
        ok: max_gap <= r,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

const CONTAINS_TOLERANCE: f64 = 1e-12;

impl Ball {
    fn empty(d: usize) -> Self {
        Ball {
            center: vec![0.0; d],
            radius: f64::NEG_INFINITY,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.radius >= 0.0 && dist(&self.center, p) <= self.radius + CONTAINS_TOLERANCE * (1.0 + self.radius)
    }
}

/// Smallest ball whose boundary passes through all of `points`, centred in
/// their affine hull. `None` when they are affinely dependent.
pub fn circumball(points: &[&[f64]]) -> Option<Ball> {
    let (first, rest) = points.split_first()?;
    let d = first.len();
    let k = rest.len();
    let diffs: Vec<Vec<f64>> = rest
        .iter()
        .map(|p| p.iter().zip(*first).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // 2 G λ = diag(G), where G is the Gram matrix of the differences
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| 2.0 * dot(&diffs[i], &diffs[j])).collect();
            row.push(dot(&diffs[i], &diffs[i]));
            row
        })
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                for c in col..=k {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut center = first.to_vec();
    for (i, diff) in diffs.iter().enumerate() {
        let lambda = m[i][k] / m[i][i];
        for a in 0..d {
            center[a] += lambda * diff[a];
        }
    }
    let radius = points.iter().map(|p| dist(&center, p)).fold(0.0, f64::max);
    Some(Ball { center, radius })
}

fn ball_on(boundary: &[&[f64]], d: usize) -> Ball {
    match boundary.len() {
        0 => Ball::empty(d),
        1 => Ball {
            center: boundary[0].to_vec(),
            radius: 0.0,
        },
        _ => circumball(boundary).unwrap_or_else(|| {
            // degenerate support: the best ball through all but one point
            (0..boundary.len())
                .map(|skip| {
                    let sub: Vec<&[f64]> = boundary
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, p)| *p)
                        .collect();
                    ball_on(&sub, d)
                })
                .filter(|b| boundary.iter().all(|p| b.contains(p)))
                .min_by(|a, b| a.radius.total_cmp(&b.radius))
                .unwrap_or_else(|| Ball::empty(d))
        }),
    }
}

fn welzl<'p>(points: &[&'p [f64]], boundary: &mut Vec<&'p [f64]>, d: usize) -> Ball {
    let Some((last, rest)) = points.split_last() else {
        return ball_on(boundary, d);
    };
    if boundary.len() == d + 1 {
        return ball_on(boundary, d);
    }
    let ball = welzl(rest, boundary, d);
    if ball.contains(last) {
        return ball;
    }
    boundary.push(last);
    let ball = welzl(rest, boundary, d);
    boundary.pop();
    ball
}

/// Smallest ball containing every point (Welzl's algorithm).
pub fn min_enclosing_ball(points: &[&[f64]]) -> Ball {
    let d = points.first().map_or(0, |p| p.len());
    welzl(points, &mut Vec::with_capacity(d + 1), d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CechParams {
    pub radius: f64,
    /// Largest simplex dimension built.
    pub max_dim: usize,
}

/// Simplices whose points fit in a ball of the given radius, up to the
/// dimension cap.
pub fn cech_complex(cloud: &PointCloud, params: &CechParams) -> Result<EmbeddedComplex, SampleError> {
    let pts = &cloud.points;
    let n = pts.len();
    let eps = params.radius;
    let fits = |s: &[usize]| {
        let refs: Vec<&[f64]> = s.iter().map(|&i| pts[i].as_slice()).collect();
        min_enclosing_ball(&refs).radius <= eps + CONTAINS_TOLERANCE
    };
    let later: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| fits(&[i, j])).collect())
        .collect();
    let mut simplices: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    fn extend(
        s: &mut Vec<usize>,
        candidates: &[usize],
        later: &[Vec<usize>],
        cap: usize,
        fits: &dyn Fn(&[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        for (idx, &k) in candidates.iter().enumerate() {
            s.push(k);
            if s.len() == 2 || fits(s) {
                out.push(s.clone());
                if s.len() <= cap {
                    let next: Vec<usize> = candidates[idx + 1..]
                        .iter()
                        .copied()
                        .filter(|c| later[k].binary_search(c).is_ok())
                        .collect();
                    extend(s, &next, later, cap, fits, out);
                }
            }
            s.pop();
        }
    }
    if params.max_dim >= 1 {
        for i in 0..n {
            extend(&mut vec![i], &later[i], &later, params.max_dim, &fits, &mut simplices);
        }
    }
    Ok(EmbeddedComplex::from_closed(
        cloud.spec.ambient_dim(),
        pts.clone(),
        simplices,
    )?)
}

/// Default resolution of [`reference_complex`] per manifold kind.
pub fn default_reference_resolution(spec: &ManifoldSpec) -> usize {
    match spec {
        ManifoldSpec::Circle { .. } => 256,
        ManifoldSpec::Sphere { .. } => 3,
        ManifoldSpec::Torus { .. } => 32,
    }
}

/// A fine deterministic triangulation: an N-gon, an icosahedron subdivided
/// `resolution` times, or an N×N torus grid.
pub fn reference_complex(spec: &ManifoldSpec, resolution: usize) -> Result<EmbeddedComplex, SampleError> {
    spec.validate()?;
    match *spec {
        ManifoldSpec::Circle { radius } => Ok(polygon(resolution.max(3), radius)),
        ManifoldSpec::Sphere { radius } => Ok(icosphere(resolution, radius)?),
        ManifoldSpec::Torus { major, minor } => {
            let n = resolution.max(3);
            let vertices = (0..n)
                .flat_map(|i| {
                    (0..n).map(move |j| {
                        ManifoldSpec::torus_point(major, minor, TAU * i as f64 / n as f64, TAU * j as f64 / n as f64)
                    })
                })
                .collect();
            let id = |i: usize, j: usize| (i % n) * n + j % n;
            let mut triangles = Vec::with_capacity(2 * n * n);
            for i in 0..n {
                for j in 0..n {
                    triangles.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                    triangles.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                }
            }
            Ok(EmbeddedComplex::from_maximal(3, vertices, &triangles)?)
        }
    }
}

fn icosphere(subdivisions: usize, radius: f64) -> Result<EmbeddedComplex, ComplexError> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            vertices.push(vec![0.0, a, b]);
            vertices.push(vec![a, b, 0.0]);
            vertices.push(vec![b, 0.0, a]);
        }
    }
    let mut faces = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                let edge = |a: usize, b: usize| (dist(&vertices[a], &vertices[b]) - 2.0).abs() < 1e-9;
                if edge(i, j) && edge(j, k) && edge(i, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    let unit = |p: Vec<f64>| -> Vec<f64> {
        let n = norm(&p);
        p.into_iter().map(|x| x / n).collect()
    };
    let mut vertices: Vec<Vec<f64>> = vertices.into_iter().map(unit).collect();
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec<f64>>| {
            *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let m = vertices[a].iter().zip(&vertices[b]).map(|(x, y)| 0.5 * (x + y)).collect();
                vertices.push(unit(m));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let vertices = vertices
        .into_iter()
        .map(|p| p.into_iter().map(|x| x * radius).collect())
        .collect();
    let faces: Vec<Vec<usize>> = faces.into_iter().map(|f| f.to_vec()).collect();
    EmbeddedComplex::from_maximal(3, vertices, &faces)
}

/// Which distance bound a run certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `0 < eps < reach / 2`: bound `2 eps vol(S^{d-1})`.
    Standard,
    /// `eps < reach / vol(S^{d-1})` as well: bound `eps`.
    Small,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationReport {
    pub manifold: ManifoldSpec,
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    pub reach: f64,
    pub density: DensityReport,
    /// Simplex counts of the Čech complex by dimension.
    pub cech_counts: Vec<usize>,
    /// Betti numbers of the Čech complex up to the manifold dimension.
    pub betti: Vec<usize>,
    pub expected_betti: Vec<usize>,
    pub homology_ok: bool,
    pub surrogate: f64,
    /// `2 eps vol(S^{d-1})`.
    pub bound: f64,
    pub within_bound: bool,
    pub regime: Regime,
    /// Present in the small regime: whether the surrogate is at most `eps`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_small_bound: Option<bool>,
}

impl ApproximationReport {
    /// Density held and the homology came out right.
    pub fn passed(&self) -> bool {
        self.density.ok && self.homology_ok
    }
}

/// Reference data shared by every run on one manifold and direction grid.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub spec: ManifoldSpec,
    pub grid: DirectionGrid,
    pub reference: PhtSample,
    /// Resolution of the reference points used by the density check.
    pub density_resolution: usize,
}

/// Default density-check resolution per manifold kind.
pub fn default_density_resolution(spec: &ManifoldSpec) -> usize {
    match spec {
        ManifoldSpec::Circle { .. } => 2048,
        ManifoldSpec::Sphere { .. } => 4096,
        ManifoldSpec::Torus { .. } => 96,
    }
}

impl Approximation {
    pub fn new(spec: &ManifoldSpec, grid: &DirectionGrid) -> Result<Self, SampleError> {
        Self::with_resolution(spec, grid, default_reference_resolution(spec))
    }

    pub fn with_resolution(spec: &ManifoldSpec, grid: &DirectionGrid, resolution: usize) -> Result<Self, SampleError> {
        spec.validate()?;
        if grid.dimension != spec.ambient_dim() {
            return Err(SampleError::GridDimension {
                grid: grid.dimension,
                ambient: spec.ambient_dim(),
            });
        }
        let reference = reference_complex(spec, resolution)?;
        let reference = compute_pht_truncated(&Subcomplex::full(&reference), grid, spec.intrinsic_dim());
        Ok(Self {
            spec: *spec,
            grid: grid.clone(),
            reference,
            density_resolution: default_density_resolution(spec),
        })
    }

    pub fn run(&self, n: usize, eps: f64, seed: u64) -> Result<ApproximationReport, SampleError> {
        let reach = self.spec.reach();
        if !(eps > 0.0 && eps < reach / 2.0) {
            return Err(SampleError::RadiusOutOfRange { eps, limit: reach / 2.0 });
        }
        let cloud = sample_points(&self.spec, n, seed)?;
        let density = density_check(&cloud, eps / 2.0, self.density_resolution);
        let top = self.spec.intrinsic_dim();
        let complex = cech_complex(
            &cloud,
            &CechParams {
                radius: eps,
                max_dim: top + 1,
            },
        )?;
        let full = Subcomplex::full(&complex);
        // at a constant height every class is essential and born at once
        let flat = sublevel_barcode(&full, &vec![0.0; complex.num_simplices()], top);
        let betti = flat.betti_at(0.0, top);
        let expected_betti = self.spec.betti();
        let sample = compute_pht_truncated(&full, &self.grid, top);
        let surrogate = pht_distance_surrogate(&sample, &self.reference)?;
        let vol = sphere_volume(self.spec.ambient_dim())?;
        let bound = 2.0 * eps * vol;
        let regime = if eps < reach / vol { Regime::Small } else { Regime::Standard };
        Ok(ApproximationReport {
            manifold: self.spec,
            n,
            eps,
            seed,
            reach,
            density,
            cech_counts: complex.count_by_dim(),
            homology_ok: betti == expected_betti,
            betti,
            expected_betti,
            surrogate,
            bound,
            within_bound: surrogate <= bound,
            regime,
            within_small_bound: (regime == Regime::Small).then_some(surrogate <= eps),
        })
    }

    /// One run per seed, in seed order.
    pub fn sweep(&self, n: usize, eps: f64, seeds: Range<u64>) -> Result<Vec<ApproximationReport>, SampleError> {
        seeds
            .into_par_iter()
            .map(|seed| self.run(n, eps, seed))
            .collect()
    }
}

/// A single sampling experiment against the default reference triangulation.
pub fn approximation_report(
    spec: &ManifoldSpec,
    n: usize,
    eps: f64,
    seed: u64,
    grid: &DirectionGrid,
) -> Result<ApproximationReport, SampleError> {
    Approximation::new(spec, grid)?.run(n, eps, seed)
}
