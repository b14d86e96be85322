use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pht_core::complex::fixtures::{octagon, octagon_halves, octant_cover, subdivided_octahedron};
use pht_core::complex::io::{save_cover, to_json_string};
use sha2::{Digest, Sha256};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_pht");

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        let c = octagon();
        std::fs::write(ws.path("circle8.json"), to_json_string(&c)).unwrap();
        save_cover(&octagon_halves(&c), &ws.path("halves.json")).unwrap();
        let s = subdivided_octahedron(3);
        std::fs::write(ws.path("sphere.json"), to_json_string(&s)).unwrap();
        save_cover(&octant_cover(&s), &ws.path("octants.json")).unwrap();
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN)
            .args(args)
            .current_dir(self.dir.path())
            .env_remove("PHT_OUT_DIR")
            .output()
            .unwrap()
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn verify_total_on_worked_example_succeeds() {
    let ws = Workspace::new();
    let o = ws.run(&["verify", "--complex", "circle8.json", "--cover", "halves.json", "--mode", "total"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(ws.path("out/verify.json").exists());
    assert!(ws.path("out/manifest.json").exists());
}

#[test]
fn verify_fast_on_octants_reports_mismatches() {
    let ws = Workspace::new();
    let o = ws.run(&[
        "verify", "--complex", "sphere.json", "--cover", "octants.json", "--mode", "fast", "--directions", "16",
    ]);
    assert_eq!(code(&o), 1);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("mismatch direction=")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fast path unsound"));
}

#[test]
fn missing_input_is_an_io_error() {
    let ws = Workspace::new();
    let o = ws.run(&["pht", "--complex", "missing.off"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.off"));
}

#[test]
fn malformed_input_is_a_parse_error() {
    let ws = Workspace::new();
    std::fs::write(ws.path("bad.off"), "OFF\n3 1 0\n0 0 0\n").unwrap();
    assert_eq!(code(&ws.run(&["pht", "--complex", "bad.off"])), 3);
}

#[test]
fn usage_errors_exit_with_two() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["pht", "--complex", "circle8.json", "--bogus"])), 2);
    assert_eq!(code(&ws.run(&["frobnicate"])), 2);
    assert_eq!(
        code(&ws.run(&["sample", "run", "--manifold", "circle", "--eps", "0.5", "--n", "10"])),
        2
    );
    assert_eq!(code(&ws.run(&["glue", "run", "--complex", "circle8.json", "--cover", "halves.json", "--t-grid", "nope"])), 2);
}

#[test]
fn config_file_supplies_flags_and_rejects_unknown_keys() {
    let ws = Workspace::new();
    std::fs::write(ws.path("run.cfg"), "# planar grid\ndirections = 8\nout-dir = cfg-out\n").unwrap();
    let o = ws.run(&["--config", "run.cfg", "pht", "--complex", "circle8.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sample: serde_json::Value = serde_json::from_str(&ws.read("cfg-out/pht.json")).unwrap();
    assert_eq!(sample["barcodes"].as_array().unwrap().len(), 8);

    // the command line wins over the file
    let o = ws.run(&["--config", "run.cfg", "pht", "--complex", "circle8.json", "--directions", "4"]);
    assert_eq!(code(&o), 0);
    let sample: serde_json::Value = serde_json::from_str(&ws.read("cfg-out/pht.json")).unwrap();
    assert_eq!(sample["barcodes"].as_array().unwrap().len(), 4);

    std::fs::write(ws.path("bad.cfg"), "colour = red\n").unwrap();
    assert_eq!(code(&ws.run(&["--config", "bad.cfg", "pht", "--complex", "circle8.json"])), 2);
}

#[test]
fn output_directory_precedence() {
    let ws = Workspace::new();
    let run_env = |args: &[&str]| {
        Command::new(BIN)
            .args(args)
            .current_dir(ws.dir.path())
            .env("PHT_OUT_DIR", "env-out")
            .output()
            .unwrap()
    };
    assert_eq!(code(&run_env(&["pht", "--complex", "circle8.json", "--directions", "4"])), 0);
    assert!(ws.path("env-out/pht.json").exists());
    assert_eq!(
        code(&run_env(&["pht", "--complex", "circle8.json", "--directions", "4", "--out-dir", "flag-out"])),
        0
    );
    assert!(ws.path("flag-out/pht.json").exists());
}

#[test]
fn manifest_records_input_hashes() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["pht", "--complex", "circle8.json", "--directions", "4"])), 0);
    let manifest: serde_json::Value = serde_json::from_str(&ws.read("out/manifest.json")).unwrap();
    let expected = hex::encode(Sha256::digest(std::fs::read(ws.path("circle8.json")).unwrap()));
    assert_eq!(manifest["inputs"][0]["sha256"], expected.as_str());
    assert_eq!(manifest["command"], "pht");
    assert_eq!(manifest["outputs"], serde_json::json!(["pht.json", "barcodes.csv"]));
    assert!(ws.read("out/barcodes.csv").starts_with("direction,degree,birth,death\n"));
}

fn outputs_with_threads(ws: &Workspace, threads: &str, args: &[&str], files: &[&str]) -> Vec<String> {
    let out_dir = format!("t{threads}");
    let mut full = vec!["--threads", threads, "--out-dir", &out_dir];
    full.extend_from_slice(args);
    let o = ws.run(&full);
    assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    files
        .iter()
        .map(|f| ws.read(&Path::new(&out_dir).join(f).to_string_lossy()))
        .collect()
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let ws = Workspace::new();
    let cases: [(&[&str], &[&str]); 3] = [
        (&["pht", "--complex", "sphere.json", "--directions", "30"], &["pht.json", "barcodes.csv", "manifest.json"]),
        (
            &["verify", "--complex", "sphere.json", "--cover", "octants.json", "--directions", "12"],
            &["verify.json", "manifest.json"],
        ),
        (
            &["sample", "run", "--manifold", "circle", "--eps", "0.3", "--n", "120", "--runs", "3", "--directions", "8"],
            &["report.json"],
        ),
    ];
    for (args, files) in cases {
        assert_eq!(
            outputs_with_threads(&ws, "1", args, files),
            outputs_with_threads(&ws, "3", args, files),
            "{args:?}"
        );
    }
}

#[test]
fn glue_run_streams_stalk_reports() {
    let ws = Workspace::new();
    let o = ws.run(&[
        "glue", "run", "--complex", "circle8.json", "--cover", "halves.json", "--mode", "fast", "--directions", "4",
    ]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout, ws.read("out/stalks.jsonl"));
    let reports: Vec<serde_json::Value> = stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!reports.is_empty());
    for r in &reports {
        for key in ["direction", "t", "e1", "fast", "total", "direct", "fast_agrees", "total_agrees"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    let nerve: serde_json::Value = serde_json::from_str(&ws.read("out/nerve.json")).unwrap();
    assert_eq!(nerve["depths"], serde_json::json!([[[0], [1]], [[0, 1]]]));
}

#[test]
fn sample_run_writes_report_and_points() {
    let ws = Workspace::new();
    let o = ws.run(&[
        "sample", "run", "--manifold", "circle", "--r", "1", "--n", "300", "--eps", "0.3", "--seed", "4",
        "--export-points", "--directions", "8",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&ws.read("out/report.json")).unwrap();
    assert_eq!(report["betti"], serde_json::json!([1, 1]));
    assert_eq!(report["regime"], "standard");
    let points = ws.read("out/points.csv");
    assert_eq!(points.lines().count(), 301);
    assert!(points.starts_with("x,y\n"));
}

#[test]
fn torus_needs_major_radius() {
    let ws = Workspace::new();
    let o = ws.run(&["sample", "run", "--manifold", "torus", "--r", "0.5", "--eps", "0.1", "--n", "10"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn distance_and_render_use_saved_transforms() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["pht", "--complex", "circle8.json", "--directions", "16", "--out-dir", "a"])), 0);
    let o = ws.run(&["distance", "a/pht.json", "a/pht.json", "--out-dir", "d"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "0");
    let o = ws.run(&["render", "--pht", "a/pht.json", "--degree", "0", "--out-dir", "r"]);
    assert_eq!(code(&o), 0);
    assert!(ws.read("r/heatmap.svg").starts_with("<svg"));

    assert_eq!(code(&ws.run(&["pht", "--complex", "circle8.json", "--directions", "8", "--out-dir", "b"])), 0);
    let o = ws.run(&["distance", "a/pht.json", "b/pht.json"]);
    assert_eq!(code(&o), 3, "grids differ");

    assert_eq!(code(&ws.run(&["pht", "--complex", "sphere.json", "--directions", "8", "--out-dir", "s"])), 0);
    assert_eq!(code(&ws.run(&["render", "--pht", "s/pht.json"])), 2);
}
