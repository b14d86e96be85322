mod common;

use common::*;
use pht_core::complex::{Cover, Direction, EmbeddedComplex, Subcomplex};
use pht_core::glue::{build_nerve, cech_h0_stalk, critical_levels, total_cohomology_stalk, DoubleComplex};
use pht_core::persistence::{
    betti_eq, betti_numbers, bottleneck, compute_barcode, lower_star_filtration, sublevel_barcode, Barcode,
};
use pht_core::pht::{compute_pht, make_grid, GridScheme};
use pht_core::sample::{cech_complex, min_enclosing_ball, sample_points, Approximation, CechParams, ManifoldSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Direction {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Ok(dir) = Direction::normalized(v) {
            return dir;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_matches_dense_ranks_on_every_prefix(seed in any::<u64>()) {
        let filt = random_filtration(&mut rng(seed), 100);
        let bc = compute_barcode(&filt);
        let top = filt.entries().iter().map(|(s, _)| s.len() - 1).max().unwrap();
        let mut levels: Vec<f64> = filt.entries().iter().map(|e| e.1).collect();
        levels.dedup();
        for t in levels {
            let prefix: Vec<Vec<usize>> = filt.prefix(t).iter().map(|(s, _)| s.clone()).collect();
            prop_assert!(betti_eq(&bc.betti_at(t, top), &dense_betti(&prefix)), "t = {}", t);
        }
    }

    #[test]
    fn bottleneck_matches_exhaustive_matching(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_barcode(&mut r, 6);
        let b = random_barcode(&mut r, 6);
        for n in 0..2 {
            let fast = bottleneck(&a, &b, n);
            let slow = exhaustive_bottleneck(&intervals_of(&a, n), &intervals_of(&b, n));
            if slow.is_infinite() {
                prop_assert!(fast.is_infinite());
            } else {
                prop_assert!((fast - slow).abs() <= 1e-9, "{} vs {}", fast, slow);
            }
        }
    }

    #[test]
    fn bottleneck_is_a_symmetric_distance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_barcode(&mut r, 5);
        let b = random_barcode(&mut r, 5);
        prop_assert_eq!(bottleneck(&a, &a, 0), 0.0);
        let (x, y) = (bottleneck(&a, &b, 1), bottleneck(&b, &a, 1));
        prop_assert!(x == y || (x - y).abs() <= 1e-12);
    }

    #[test]
    fn bottleneck_is_stable_under_height_perturbation(seed in any::<u64>(), delta in 0.0f64..0.5) {
        let mut r = rng(seed);
        let c = random_polyhedron(&mut r, (seed % 4) as usize);
        let v = random_direction(&mut r, c.dimension());
        let full = Subcomplex::full(&c);
        let vh = c.vertex_heights(&v);
        let bumped: Vec<f64> = vh.iter().map(|h| h + r.random_range(-delta..=delta)).collect();
        let lift = |vh: &[f64]| -> Vec<f64> {
            (0..c.num_simplices())
                .map(|id| c.simplex(id).iter().map(|&u| vh[u]).fold(f64::NEG_INFINITY, f64::max))
                .collect()
        };
        let top = c.top_dim().unwrap();
        let a = sublevel_barcode(&full, &lift(&vh), top);
        let b = sublevel_barcode(&full, &lift(&bumped), top);
        for n in 0..=top {
            prop_assert!(bottleneck(&a, &b, n) <= delta + 1e-12);
        }
    }

    #[test]
    fn welzl_matches_brute_force(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=5) {
        let mut r = rng(seed);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| r.random_range(-1.0..1.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        let ball = min_enclosing_ball(&refs);
        prop_assert!((ball.radius - brute_force_meb(&points)).abs() <= 1e-9);
        prop_assert!(points.iter().all(|p| ball.contains(p)));
    }

    #[test]
    fn betti_numbers_match_dense_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_polyhedron(&mut r, (seed % 4) as usize);
        let v = random_direction(&mut r, c.dimension());
        let t = r.random_range(-1.0..3.0);
        let sub = Subcomplex::full(&c).sublevel(&v, t);
        let listed: Vec<Vec<usize>> = sub.ids().map(|id| c.simplex(id).to_vec()).collect();
        prop_assert!(betti_eq(&betti_numbers(&sub), &dense_betti(&listed)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn descent_on_random_covers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_polyhedron(&mut r, (seed % 4) as usize);
        let cover = random_cover(&mut r, &c);
        let nerve = build_nerve(&cover, None);
        for _ in 0..3 {
            let v = random_direction(&mut r, c.dimension());
            for t in critical_levels(&c.vertex_heights(&v)) {
                let direct = betti_numbers(&Subcomplex::full(&c).sublevel(&v, t));
                prop_assert!(betti_eq(&total_cohomology_stalk(&nerve, &v, t), &direct));
            }
        }
    }

    #[test]
    fn stalk_complexes_are_complexes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_polyhedron(&mut r, (seed % 4) as usize);
        let cover = random_cover(&mut r, &c);
        let nerve = build_nerve(&cover, None);
        let v = random_direction(&mut r, c.dimension());
        let levels = critical_levels(&c.vertex_heights(&v));
        let t = levels[r.random_range(0..levels.len())];
        prop_assert!(cech_h0_stalk(&nerve, &v, t).is_complex());
        prop_assert!(DoubleComplex::build(&nerve, &v, t).check_differentials());
    }

    #[test]
    fn restriction_is_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_polyhedron(&mut r, (seed % 4) as usize);
        let cover = random_cover(&mut r, &c);
        let element = &cover.elements()[0];
        let generators: Vec<Vec<usize>> = element.maximal_ids().iter().map(|&id| c.simplex(id).to_vec()).collect();
        let coords: Vec<Vec<f64>> = (0..c.num_vertices()).map(|i| c.vertex(i).to_vec()).collect();
        let standalone = EmbeddedComplex::from_maximal(c.dimension(), coords, &generators).unwrap();
        let v = random_direction(&mut r, c.dimension());
        for t in critical_levels(&c.vertex_heights(&v)) {
            prop_assert_eq!(
                betti_numbers(&element.sublevel(&v, t)),
                betti_numbers(&Subcomplex::full(&standalone).sublevel(&v, t))
            );
        }
    }

    #[test]
    fn cech_complex_is_monotone_in_radius(seed in any::<u64>(), e1 in 0.05f64..0.3, gap in 0.0f64..0.2) {
        let cloud = sample_points(&ManifoldSpec::Sphere { radius: 1.0 }, 40, seed).unwrap();
        let small = cech_complex(&cloud, &CechParams { radius: e1, max_dim: 3 }).unwrap();
        let large = cech_complex(&cloud, &CechParams { radius: e1 + gap, max_dim: 3 }).unwrap();
        prop_assert!(small.simplices().iter().all(|s| large.id_of(s).is_some()));
    }
}

#[test]
fn filtration_and_fast_path_agree() {
    let mut r = rng(5);
    for i in 0..12 {
        let c = random_polyhedron(&mut r, i);
        let v = random_direction(&mut r, c.dimension());
        let full = Subcomplex::full(&c);
        let slow = compute_barcode(&lower_star_filtration(&full, &v));
        let fast = sublevel_barcode(&full, &c.simplex_heights(&v), c.top_dim().unwrap());
        let persistent = |b: &Barcode| b.persistent().copied().collect::<Vec<_>>();
        assert_eq!(persistent(&slow), persistent(&fast));
    }
}

#[test]
fn rotation_equivariance() {
    let c = pht_core::complex::fixtures::polygon(7, 1.3);
    let grid = make_grid(2, 12, GridScheme::Uniform, None).unwrap();
    let k = 3;
    let angle = std::f64::consts::TAU * k as f64 / 12.0;
    let (s, co) = angle.sin_cos();
    let rotated = c.map_vertices(|p| vec![co * p[0] - s * p[1], s * p[0] + co * p[1]]);
    let a = compute_pht(&Subcomplex::full(&c), &grid);
    let b = compute_pht(&Subcomplex::full(&rotated), &grid);
    for i in 0..12 {
        let j = (i + k) % 12;
        for n in 0..=1 {
            assert!(bottleneck(&a.barcodes[i], &b.barcodes[j], n) <= 1e-9);
        }
    }
}

#[test]
fn betti_curves_stabilize_above_the_shape() {
    let mut r = rng(9);
    for i in 0..8 {
        let c = random_polyhedron(&mut r, i);
        let grid = make_grid(c.dimension(), 10, GridScheme::default_for(c.dimension()), None).unwrap();
        let sample = compute_pht(&Subcomplex::full(&c), &grid);
        let beta = betti_numbers(&Subcomplex::full(&c));
        for bc in &sample.barcodes {
            assert!(betti_eq(&bc.betti_at(100.0, c.dimension()), &beta));
        }
    }
}

#[test]
fn parallel_and_serial_transforms_are_identical() {
    let c = pht_core::complex::fixtures::subdivided_octahedron(3);
    let grid = make_grid(3, 40, GridScheme::Fibonacci, None).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| compute_pht(&Subcomplex::full(&c), &grid).to_json())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn triangle_covers_have_no_higher_cohomology() {
    let mut r = rng(21);
    for i in 0..8 {
        let c = random_polyhedron(&mut r, i);
        let cover = Cover::by_maximal_simplices(&c).unwrap();
        let nerve = build_nerve(&cover, None);
        let v = random_direction(&mut r, c.dimension());
        for t in critical_levels(&c.vertex_heights(&v)) {
            assert!(pht_core::glue::e1_page(&nerve, &v, t).higher_rows_vanish());
        }
    }
}

#[test]
fn surrogate_shrinks_with_radius() {
    let spec = ManifoldSpec::Circle { radius: 1.0 };
    let grid = make_grid(2, 16, GridScheme::Uniform, None).unwrap();
    let approx = Approximation::new(&spec, &grid).unwrap();
    let mean = |n: usize, eps: f64| {
        let runs = approx.sweep(n, eps, 0..4).unwrap();
        assert!(runs.iter().all(|r| r.density.ok));
        runs.iter().map(|r| r.surrogate).sum::<f64>() / runs.len() as f64
    };
    let coarse = mean(300, 0.3);
    let fine = mean(600, 0.15);
    assert!(fine <= coarse * 1.1, "{fine} > {coarse}");
}
