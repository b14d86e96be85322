//! Independent brute-force oracles and random inputs shared by the
//! integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use pht_core::complex::{Cover, EmbeddedComplex, Subcomplex};
use pht_core::glue::build_nerve;
use pht_core::persistence::{Barcode, Filtration, Interval};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rank over F2 of a matrix given as bit-packed rows.
pub fn rank_f2(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for bit in 0..words * 64 {
        let (w, mask) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & mask != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers of a face-closed simplex list by dense rank computation,
/// in degrees `0..=top`.
pub fn dense_betti(simplices: &[Vec<usize>]) -> Vec<usize> {
    let Some(top) = simplices.iter().map(|s| s.len() - 1).max() else {
        return Vec::new();
    };
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        by_dim[s.len() - 1].push(s);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = by_dim
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    // ranks[k] = rank of the boundary from degree k to degree k - 1
    let mut ranks = vec![0; top + 2];
    for k in 1..=top {
        let words = by_dim[k].len().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; by_dim[k - 1].len()];
        for (c, s) in by_dim[k].iter().enumerate() {
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                let r = index[k - 1][&f];
                rows[r][c / 64] ^= 1 << (c % 64);
            }
        }
        ranks[k] = rank_f2(rows);
    }
    (0..=top)
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

/// Bottleneck distance by trying every partial matching. Intervals given as
/// `(birth, death)` in a single degree; zero-length intervals are ignored.
pub fn exhaustive_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let a: Vec<(f64, f64)> = a.iter().copied().filter(|(x, y)| x != y).collect();
    let b: Vec<(f64, f64)> = b.iter().copied().filter(|(x, y)| x != y).collect();
    let pair = |p: (f64, f64), q: (f64, f64)| match (p.1.is_infinite(), q.1.is_infinite()) {
        (true, true) => (p.0 - q.0).abs(),
        (false, false) => (p.0 - q.0).abs().max((p.1 - q.1).abs()),
        _ => f64::INFINITY,
    };
    let diag = |p: (f64, f64)| if p.1.is_infinite() { f64::INFINITY } else { (p.1 - p.0) / 2.0 };
    fn search(
        i: usize,
        a: &[(f64, f64)],
        b: &[(f64, f64)],
        used: &mut Vec<bool>,
        worst: f64,
        best: &mut f64,
        pair: &dyn Fn((f64, f64), (f64, f64)) -> f64,
        diag: &dyn Fn((f64, f64)) -> f64,
    ) {
        if worst >= *best {
            return;
        }
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(q, _)| diag(*q))
                .fold(worst, f64::max);
            *best = best.min(rest);
            return;
        }
        search(i + 1, a, b, used, worst.max(diag(a[i])), best, pair, diag);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                search(i + 1, a, b, used, worst.max(pair(a[i], b[j])), best, pair, diag);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; b.len()];
    search(0, &a, &b, &mut used, 0.0, &mut best, &pair, &diag);
    best
}

/// Radius of the smallest enclosing ball, by checking the circumball of
/// every subset of at most `d + 1` points.
pub fn brute_force_meb(points: &[Vec<f64>]) -> f64 {
    let d = points[0].len();
    let n = points.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let subset: Vec<&Vec<f64>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &points[i]).collect();
        if subset.len() > d + 1 {
            continue;
        }
        let Some(center) = circumcenter(&subset) else { continue };
        let r = subset.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
        if points.iter().all(|p| dist(p, &center) <= r * (1.0 + 1e-9) + 1e-12) {
            best = best.min(r);
        }
    }
    best
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Center of the sphere through the points within their affine hull, via
/// the normal equations `|c - p_0| = |c - p_i|`.
fn circumcenter(points: &[&Vec<f64>]) -> Option<Vec<f64>> {
    let p0 = points[0];
    let k = points.len() - 1;
    if k == 0 {
        return Some(p0.clone());
    }
    let u: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // c = p0 + sum_j x_j u_j with sum_j (u_i . u_j) x_j = |u_i|^2 / 2
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&u[i], &u[j])).collect();
            row.push(dot(&u[i], &u[i]) / 2.0);
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    let mut center = p0.clone();
    for j in 0..k {
        let x = a[j][k] / a[j][j];
        for (c, uj) in center.iter_mut().zip(&u[j]) {
            *c += x * uj;
        }
    }
    Some(center)
}

pub fn intervals_of(bc: &Barcode, degree: usize) -> Vec<(f64, f64)> {
    bc.in_degree(degree).map(|i| (i.birth, i.death)).collect()
}

/// A barcode with at most `max_len` intervals spread over degrees 0 and 1,
/// drawn partly from a coarse lattice so that ties occur.
pub fn random_barcode(rng: &mut ChaCha8Rng, max_len: usize) -> Barcode {
    let intervals = (0..rng.random_range(0..=max_len))
        .map(|_| {
            let degree = rng.random_range(0..2);
            let coarse = rng.random_bool(0.5);
            let mut draw = || {
                if coarse {
                    rng.random_range(0..8) as f64 * 0.5
                } else {
                    rng.random_range(0.0..4.0)
                }
            };
            let birth = draw();
            let length = draw();
            let death = if rng.random_bool(0.2) { f64::INFINITY } else { birth + length };
            Interval { degree, birth, death }
        })
        .collect();
    Barcode::new(intervals)
}

/// A random simplicial complex on few vertices with a monotone filtration
/// and deliberate ties. At most `max_simplices` simplices.
pub fn random_filtration(rng: &mut ChaCha8Rng, max_simplices: usize) -> Filtration {
    loop {
        let n = rng.random_range(4..=9);
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for _ in 0..rng.random_range(2..=9) {
            let size = rng.random_range(2..=4).min(n);
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(rng);
            let mut s = verts[..size].to_vec();
            s.sort_unstable();
            close(&s, &mut all);
        }
        for v in 0..n {
            if rng.random_bool(0.3) {
                all.insert(vec![v]);
            }
        }
        if all.len() > max_simplices {
            continue;
        }
        let mut ordered: Vec<Vec<usize>> = all.into_iter().collect();
        ordered.sort_by_key(|s| s.len());
        let mut value: HashMap<Vec<usize>, f64> = HashMap::new();
        for s in &ordered {
            let floor = if s.len() == 1 {
                0.0
            } else {
                (0..s.len())
                    .map(|k| {
                        let mut f = s.clone();
                        f.remove(k);
                        value[&f]
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let bump = match rng.random_range(0..3) {
                0 => 0.0,
                1 => rng.random_range(0..4) as f64 * 0.25,
                _ => rng.random_range(0.0..1.0),
            };
            value.insert(s.clone(), floor + bump);
        }
        let entries = ordered.into_iter().map(|s| {
            let v = value[&s];
            (s, v)
        });
        return Filtration::new(entries.collect()).expect("monotone by construction");
    }
}

fn close(s: &[usize], out: &mut BTreeSet<Vec<usize>>) {
    if s.is_empty() || !out.insert(s.to_vec()) {
        return;
    }
    for k in 0..s.len() {
        let mut f = s.to_vec();
        f.remove(k);
        close(&f, out);
    }
}

fn jittered_grid(rng: &mut ChaCha8Rng, nx: usize, ny: usize, lift: bool) -> Vec<Vec<f64>> {
    let mut v = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let x = i as f64 + rng.random_range(-0.3..0.3);
            let y = j as f64 + rng.random_range(-0.3..0.3);
            if lift {
                v.push(vec![x, y, rng.random_range(-0.8..0.8)]);
            } else {
                v.push(vec![x, y]);
            }
        }
    }
    v
}

fn grid_patch(rng: &mut ChaCha8Rng, lift: bool) -> EmbeddedComplex {
    let k = rng.random_range(3..=5);
    let vertices = jittered_grid(rng, k, k, lift);
    let id = |i: usize, j: usize| j * k + i;
    let mut gens = Vec::new();
    for j in 0..k - 1 {
        for i in 0..k - 1 {
            let tris = if rng.random_bool(0.5) {
                [[id(i, j), id(i + 1, j), id(i + 1, j + 1)], [id(i, j), id(i + 1, j + 1), id(i, j + 1)]]
            } else {
                [[id(i, j), id(i + 1, j), id(i, j + 1)], [id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]]
            };
            for t in tris {
                if rng.random_bool(0.75) {
                    gens.push(t.to_vec());
                }
            }
        }
    }
    for _ in 0..rng.random_range(0..=3) {
        let i = rng.random_range(0..k - 1);
        let j = rng.random_range(0..k);
        gens.push(vec![id(i, j), id(i + 1, j)]);
    }
    if gens.is_empty() {
        gens.push(vec![id(0, 0), id(1, 0), id(0, 1)]);
    }
    EmbeddedComplex::from_maximal(if lift { 3 } else { 2 }, vertices, &gens).expect("valid patch")
}

fn bumpy_sphere(rng: &mut ChaCha8Rng) -> EmbeddedComplex {
    let m = rng.random_range(1..=2);
    let base = pht_core::complex::fixtures::subdivided_octahedron(m);
    let mut radii = Vec::new();
    for _ in 0..base.num_vertices() {
        radii.push(rng.random_range(0.8..1.2));
    }
    let mut k = 0;
    base.map_vertices(|p| {
        let r: f64 = radii[k];
        k += 1;
        p.iter().map(|x| x * r).collect()
    })
}

fn tetrahedra(rng: &mut ChaCha8Rng) -> EmbeddedComplex {
    let cubes = rng.random_range(1..=2);
    let (nx, ny, nz) = (cubes + 1, 2, 2);
    let mut vertices = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                vertices.push(vec![
                    x as f64 + rng.random_range(-0.2..0.2),
                    y as f64 + rng.random_range(-0.2..0.2),
                    z as f64 + rng.random_range(-0.2..0.2),
                ]);
            }
        }
    }
    let id = |x: usize, y: usize, z: usize| (z * ny + y) * nx + x;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut gens = Vec::new();
    for c in 0..cubes {
        for perm in perms {
            if !rng.random_bool(0.6) {
                continue;
            }
            let mut p = [c, 0, 0];
            let mut tet = vec![id(p[0], p[1], p[2])];
            for axis in perm {
                p[axis] += 1;
                tet.push(id(p[0], p[1], p[2]));
            }
            gens.push(tet);
        }
    }
    if gens.is_empty() {
        gens.push(vec![id(0, 0, 0), id(1, 0, 0), id(1, 1, 0), id(1, 1, 1)]);
    }
    EmbeddedComplex::from_maximal(3, vertices, &gens).expect("valid tetrahedra")
}

/// The `i`-th randomized test shape: planar patches, lifted patches in R^3,
/// perturbed spheres and tetrahedral blocks in turn. At most 300 simplices
/// and a nerve of manageable size under the cover by maximal simplices.
pub fn random_polyhedron(rng: &mut ChaCha8Rng, i: usize) -> EmbeddedComplex {
    loop {
        let c = match i % 4 {
            0 => grid_patch(rng, false),
            1 => grid_patch(rng, true),
            2 => bumpy_sphere(rng),
            _ => tetrahedra(rng),
        };
        if c.num_simplices() > 300 {
            continue;
        }
        let cover = Cover::by_maximal_simplices(&c).expect("maximal simplices cover");
        if build_nerve(&cover, None).entries().len() <= 4000 {
            return c;
        }
    }
}

/// A cover by 2 to 4 unions of maximal simplices with random overlaps.
pub fn random_cover<'a>(rng: &mut ChaCha8Rng, c: &'a EmbeddedComplex) -> Cover<'a> {
    let maximal = Subcomplex::full(c).maximal_ids();
    let k = rng.random_range(2..=4usize).min(maximal.len().max(1));
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &m in &maximal {
        let g = rng.random_range(0..k);
        groups[g].push(m);
        if rng.random_bool(0.3) {
            groups[rng.random_range(0..k)].push(m);
        }
    }
    for g in 0..k {
        if groups[g].is_empty() {
            groups[g].push(maximal[rng.random_range(0..maximal.len())]);
        }
    }
    Cover::new(
        groups
            .into_iter()
            .map(|g| Subcomplex::closure_of_ids(c, g))
            .collect(),
    )
    .expect("groups cover every maximal simplex")
}
