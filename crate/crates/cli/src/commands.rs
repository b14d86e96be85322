use std::fmt::Write as _;
use std::path::Path;

use pht_core::complex::io::{parse_cover, parse_json, parse_off, Format};
use pht_core::complex::{EmbeddedComplex, Subcomplex};
use pht_core::glue::{convexity_check, glued_betti_curves, stalk_reports, build_nerve, GlueMode};
use pht_core::pht::{
    compute_pht_truncated, make_grid, pht_distance_surrogate, render_heatmap_svg, DirectionGrid, GridScheme,
    PhtSample,
};
use pht_core::sample::{default_reference_resolution, sample_points, Approximation, ManifoldSpec};
use serde::Serialize;

use crate::args::{DistanceArgs, GlueArgs, GridArgs, ManifoldKind, PhtArgs, RenderArgs, SampleArgs};
use crate::error::CliError;
use crate::output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Mismatch,
}

fn load_complex(out: &mut OutputDir, path: &Path) -> Result<EmbeddedComplex, CliError> {
    let text = out.read_input(path)?;
    let complex = match Format::from_path(path) {
        Format::Off => parse_off(&text),
        Format::Json => parse_json(&text),
    };
    complex.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn grid_for(d: usize, args: &GridArgs) -> Result<DirectionGrid, CliError> {
    let scheme = args.scheme.unwrap_or(GridScheme::default_for(d));
    Ok(make_grid(d, args.directions, scheme, args.seed)?)
}

pub fn pht(args: &PhtArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let complex = load_complex(out, &args.complex)?;
    let d = complex.dimension();
    let grid = grid_for(d, &args.grid)?;
    let sample = compute_pht_truncated(&Subcomplex::full(&complex), &grid, args.max_degree.unwrap_or(d));
    out.write("pht.json", &sample.to_json())?;
    let mut csv = String::from("direction,degree,birth,death\n");
    for (i, bc) in sample.barcodes.iter().enumerate() {
        for line in bc.to_csv().lines().skip(1) {
            let _ = writeln!(csv, "{i},{line}");
        }
    }
    out.write("barcodes.csv", &csv)?;
    Ok(Outcome::Success)
}

pub fn glue_run(args: &GlueArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let complex = load_complex(out, &args.complex)?;
    let cover_text = out.read_input(&args.cover)?;
    let cover = parse_cover(&cover_text, &complex).map_err(|e| CliError::Input(format!("{}: {e}", args.cover.display())))?;
    let grid = grid_for(complex.dimension(), &args.grid)?;
    let convexity = convexity_check(&cover);
    if args.mode == GlueMode::Fast && !convexity.guaranteed() {
        eprintln!("warning: fast path unsound: some cover elements are not single simplices");
    }
    let reports = stalk_reports(&cover, &grid, &args.t_grid);
    let mut lines = String::new();
    for r in &reports {
        lines.push_str(&serde_json::to_string(r).expect("report serializes"));
        lines.push('\n');
    }
    print!("{lines}");
    out.write("stalks.jsonl", &lines)?;
    out.write_json("nerve.json", &build_nerve(&cover, None).summary())?;
    out.write_json("convexity.json", &convexity)?;
    let agrees = |r: &&pht_core::glue::StalkReport| match args.mode {
        GlueMode::Fast => r.fast_agrees,
        GlueMode::Total => r.total_agrees,
    };
    let agree = reports.iter().filter(agrees).count();
    eprintln!("agree: {agree}, disagree: {}", reports.len() - agree);
    Ok(if agree == reports.len() { Outcome::Success } else { Outcome::Mismatch })
}

pub fn verify(args: &GlueArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let complex = load_complex(out, &args.complex)?;
    let cover_text = out.read_input(&args.cover)?;
    let cover = parse_cover(&cover_text, &complex).map_err(|e| CliError::Input(format!("{}: {e}", args.cover.display())))?;
    let grid = grid_for(complex.dimension(), &args.grid)?;
    let curves = glued_betti_curves(&cover, &grid, &args.t_grid, args.mode);
    if let Some(w) = &curves.warning {
        eprintln!("warning: {w}");
    }
    for s in curves.mismatches() {
        println!("mismatch direction={} t={} glued={:?} direct={:?}", s.direction, s.t, s.glued, s.direct);
    }
    out.write_json("verify.json", &curves)?;
    let bad = curves.mismatches().count();
    eprintln!("stalks: {}, mismatches: {bad}", curves.stalks.len());
    Ok(if bad == 0 { Outcome::Success } else { Outcome::Mismatch })
}

#[derive(Serialize)]
struct SweepSummary<T> {
    total: usize,
    passed: usize,
    all_within_bound: bool,
    max_surrogate: f64,
    runs: Vec<T>,
}

pub fn sample_run(args: &SampleArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let spec = match args.manifold {
        ManifoldKind::Circle => ManifoldSpec::Circle { radius: args.radius },
        ManifoldKind::Sphere => ManifoldSpec::Sphere { radius: args.radius },
        ManifoldKind::Torus => ManifoldSpec::Torus {
            major: args
                .major
                .ok_or_else(|| CliError::Usage("--R is required for the torus".into()))?,
            minor: args.radius,
        },
    };
    spec.validate()?;
    let d = spec.ambient_dim();
    let grid = make_grid(d, args.directions, args.scheme.unwrap_or(GridScheme::default_for(d)), None)?;
    let resolution = args
        .reference_resolution
        .unwrap_or_else(|| default_reference_resolution(&spec));
    let approx = Approximation::with_resolution(&spec, &grid, resolution)?;
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let reports = approx.sweep(args.n, args.eps, args.seed..args.seed + args.runs)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let max_surrogate = reports.iter().map(|r| r.surrogate).fold(0.0, f64::max);
    println!(
        "passed {passed}/{} max surrogate {max_surrogate:.6} bound {:.6}",
        reports.len(),
        reports[0].bound
    );
    if args.runs == 1 {
        out.write_json("report.json", &reports[0])?;
        if args.export_points {
            out.write("points.csv", &sample_points(&spec, args.n, args.seed)?.to_csv())?;
        }
    } else {
        if args.export_points {
            return Err(CliError::Usage("--export-points needs a single run".into()));
        }
        let all_within_bound = reports.iter().all(|r| r.within_bound);
        out.write_json(
            "report.json",
            &SweepSummary {
                total: reports.len(),
                passed,
                all_within_bound,
                max_surrogate,
                runs: reports,
            },
        )?;
    }
    Ok(Outcome::Success)
}

fn load_sample(out: &mut OutputDir, path: &Path) -> Result<PhtSample, CliError> {
    let text = out.read_input(path)?;
    PhtSample::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DistanceRecord<'a> {
    a: &'a str,
    b: &'a str,
    surrogate: f64,
}

pub fn distance(args: &DistanceArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let a = load_sample(out, &args.a)?;
    let b = load_sample(out, &args.b)?;
    let surrogate = pht_distance_surrogate(&a, &b)?;
    println!("{surrogate}");
    out.write_json(
        "distance.json",
        &DistanceRecord {
            a: &a.complex_hash,
            b: &b.complex_hash,
            surrogate,
        },
    )?;
    Ok(Outcome::Success)
}

pub fn render(args: &RenderArgs, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let sample = load_sample(out, &args.pht)?;
    let range = args.t_min.zip(args.t_max);
    let svg = render_heatmap_svg(&sample, args.degree, range)?;
    out.write(&args.output, &svg)?;
    Ok(Outcome::Success)
}
