//! Bottleneck distance between barcodes.
//!
//! Finite intervals are matched by binary search over the finite set of
//! candidate costs, testing each threshold for a perfect matching in the
//! usual bipartite graph augmented with diagonal copies. Essential intervals
//! only match each other; sorting births gives the optimal matching there.

use super::Barcode;

fn split(bc: &Barcode, n: usize) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for i in bc.persistent().filter(|i| i.degree == n) {
        if i.is_essential() {
            essential.push(i.birth);
        } else {
            finite.push((i.birth, i.death));
        }
    }
    (finite, essential)
}

/// Bottleneck distance between the persistent intervals of degree `n`.
/// Returns `+∞` when the numbers of essential intervals differ.
pub fn bottleneck(a: &Barcode, b: &Barcode, n: usize) -> f64 {
    let (fa, mut ea) = split(a, n);
    let (fb, mut eb) = split(b, n);
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    ea.sort_by(f64::total_cmp);
    eb.sort_by(f64::total_cmp);
    let essential = ea
        .iter()
        .zip(&eb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fa, &fb))
}

/// Maximum of [`bottleneck`] over degrees `0..=max_degree`.
pub fn bottleneck_all_degrees(a: &Barcode, b: &Barcode, max_degree: usize) -> f64 {
    (0..=max_degree)
        .map(|n| bottleneck(a, b, n))
        .fold(0.0, f64::max)
}

fn half_length(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

fn sup_norm(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

/// Left vertices are `a` then diagonal copies of `b`; right vertices are `b`
/// then diagonal copies of `a`.
struct Graph<'a> {
    a: &'a [(f64, f64)],
    b: &'a [(f64, f64)],
}

impl Graph<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    fn cost(&self, l: usize, r: usize) -> f64 {
        let (p, q) = (self.a.len(), self.b.len());
        match (l < p, r < q) {
            (true, true) => sup_norm(self.a[l], self.b[r]),
            (true, false) => {
                if r - q == l {
                    half_length(self.a[l])
                } else {
                    f64::INFINITY
                }
            }
            (false, true) => {
                if l - p == r {
                    half_length(self.b[r])
                } else {
                    f64::INFINITY
                }
            }
            (false, false) => 0.0,
        }
    }

    fn has_perfect_matching(&self, threshold: f64) -> bool {
        let n = self.size();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|l| (0..n).filter(|&r| self.cost(l, r) <= threshold).collect())
            .collect();
        hopcroft_karp(&adj, n) == n
    }
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let g = Graph { a, b };
    let n = g.size();
    if n == 0 {
        return 0.0;
    }
    let mut candidates: Vec<f64> = (0..n)
        .flat_map(|l| (0..n).map(move |r| (l, r)))
        .map(|(l, r)| g.cost(l, r))
        .filter(|c| c.is_finite())
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // matching everything to the diagonal is always feasible, so the largest
    // candidate succeeds
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if g.has_perfect_matching(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Size of a maximum matching in a bipartite graph with `n` vertices on each
/// side.
fn hopcroft_karp(adj: &[Vec<usize>], n: usize) -> usize {
    const FREE: usize = usize::MAX;
    let mut match_l = vec![FREE; adj.len()];
    let mut match_r = vec![FREE; n];
    let mut dist = vec![0usize; adj.len()];
    let mut matched = 0;
    loop {
        // BFS layering from free left vertices
        let mut queue = std::collections::VecDeque::new();
        for l in 0..adj.len() {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == FREE {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            return matched;
        }
        for l in 0..adj.len() {
            if match_l[l] == FREE && augment(l, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        let m = match_r[r];
        let ok = m == usize::MAX
            || (dist[m] == dist[l].wrapping_add(1) && augment(m, adj, match_l, match_r, dist));
        if ok {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}
