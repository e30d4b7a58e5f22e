use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn attrib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attrib"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("run attrib")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn without_provenance(mut doc: Value) -> Value {
    doc.as_object_mut().expect("object").remove("provenance");
    doc
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("UTF-8 path")
}

const FAMILY: &str = "fixtures/three_chain.json";
const ASSETS: &str = "fixtures/synthetic_assets.csv";

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&attrib(&["--help"])), 0);
    assert_eq!(code(&attrib(&["--version"])), 0);
    assert_eq!(code(&attrib(&["growth", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &[][..],
        &["no-such-command"],
        &["telltale"],
        &["simulate", "--family", FAMILY],
        &["simulate", "--family", FAMILY, "--target", "L1", "--learner", "oracle"],
        &["adversary", "--mode", "sideways"],
        &["problang-verify", "--trials", "many"],
        &["growth", "--assets", ASSETS, "--k", "4"],
        &["growth", "--assets", ASSETS, "--window", "2019:2025"],
        &["compute", "--preset", "paper-2030"],
        &["report-all", "--assets", ASSETS],
    ] {
        assert_eq!(code(&attrib(args)), 1, "{args:?}");
    }
}

#[test]
fn telltale_matches_golden() {
    let out = attrib(&["telltale", "--family", FAMILY]);
    assert_eq!(code(&out), 0);
    let golden: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/three_chain.telltale.json"))
            .unwrap(),
    )
    .unwrap();
    let doc = stdout_json(&out);
    assert_eq!(doc["verified"], Value::Bool(true));
    assert_eq!(without_provenance(doc), without_provenance(golden));
}

#[test]
fn telltale_exit_codes() {
    let out = attrib(&["telltale", "--family", FAMILY, "--check", "fixtures/bad_telltales.json"]);
    assert_eq!(code(&out), 3);
    let doc = stdout_json(&out);
    assert_eq!(doc["verified"], Value::Bool(false));
    assert_eq!(doc["violation"]["reason"], "overgeneral");

    let good = attrib(&[
        "telltale",
        "--family",
        FAMILY,
        "--check",
        "fixtures/three_chain.telltale.json",
    ]);
    assert_eq!(code(&good), 0);

    assert_eq!(code(&attrib(&["telltale", "--family", "fixtures/missing.json"])), 2);
    assert_eq!(code(&attrib(&["telltale", "--family", ASSETS])), 2);
}

#[test]
fn provenance_records_input_digest() {
    let doc = stdout_json(&attrib(&["telltale", "--family", FAMILY]));
    let prov = &doc["provenance"];
    assert_eq!(prov["tool"], "attrib");
    assert_eq!(prov["command"], "telltale");
    let digest = prov["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn simulate_reports_convergence() {
    let out = attrib(&["simulate", "--family", FAMILY, "--target", "L3", "--horizon", "12"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["learner"], "finite-class");
    assert_eq!(doc["final_correct"], Value::Bool(true));
    assert_eq!(doc["hypothesis_trace"].as_array().unwrap().len(), 12);

    assert_eq!(code(&attrib(&["simulate", "--family", FAMILY, "--target", "L9"])), 2);
    assert_eq!(
        code(&attrib(&[
            "simulate",
            "--family",
            FAMILY,
            "--target",
            "L1",
            "--learner",
            "likelihood-ratio"
        ])),
        2
    );
}

#[test]
fn simulate_shuffled_is_seeded() {
    let args = [
        "simulate",
        "--family",
        FAMILY,
        "--target",
        "L3",
        "--schedule",
        "shuffled",
        "--seed",
        "7",
    ];
    let a = attrib(&args);
    let b = attrib(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn nested_adversary_certifies() {
    for learner in ["min-consistent", "max-consistent", "impatient-5", "finite-class"] {
        let out = attrib(&["adversary", "--mode", "nested", "--learner", learner, "--horizon", "30"]);
        assert_eq!(code(&out), 0, "{learner}");
        let doc = stdout_json(&out);
        assert_eq!(doc["final_correct"], Value::Bool(false), "{learner}");
    }
    let out = attrib(&[
        "adversary",
        "--mode",
        "nested",
        "--learner",
        "finite-class",
        "--horizon",
        "10",
        "--k",
        "5000",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn support_adversary_forces_error() {
    for learner in ["posterior-uniform", "likelihood-ratio"] {
        for order in ["canonical", "interleaved"] {
            let out = attrib(&[
                "adversary",
                "--mode",
                "support",
                "--learner",
                learner,
                "--order",
                order,
                "--horizon",
                "100",
            ]);
            assert_eq!(code(&out), 0);
            let doc = stdout_json(&out);
            assert_eq!(doc["forced_error_certificate"], Value::Bool(true));
            assert_eq!(doc["transcripts_identical"], Value::Bool(true));
            for run in doc["runs"].as_array().unwrap() {
                assert_eq!(run["forced_error"], Value::Bool(true));
                assert_eq!(run["final_correct"], Value::Bool(false));
            }
        }
    }
    assert_eq!(
        code(&attrib(&[
            "adversary",
            "--mode",
            "support",
            "--learner",
            "min-consistent"
        ])),
        2
    );
}

#[test]
fn problang_verify_checks() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("accuracy.csv");
    let out = attrib(&[
        "problang-verify",
        "--trials",
        "50",
        "--sizes",
        "1,20",
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["checks"]["normalized"], Value::Bool(true));
    assert_eq!(doc["checks"]["support_equal"], Value::Bool(true));
    assert_eq!(doc["report"]["classifier_accuracy_by_M"].as_array().unwrap().len(), 2);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.lines().any(|l| l == "sample_size,trials,accuracy,std_error"));

    let short = attrib(&["problang-verify", "--max-n", "10", "--trials", "10"]);
    assert_eq!(code(&short), 3);
    assert_eq!(stdout_json(&short)["checks"]["normalized"], Value::Bool(false));
    assert_eq!(code(&attrib(&["problang-verify", "--trials", "0"])), 2);
}

#[test]
fn growth_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("series.csv");
    let fits = dir.path().join("fits.json");
    let svg = dir.path().join("growth.svg");
    let snap = dir.path().join("snapshot.json");
    let out = attrib(&[
        "growth",
        "--assets",
        ASSETS,
        "--k",
        "1",
        "--out",
        path_str(&csv),
        "--fits",
        path_str(&fits),
        "--svg",
        path_str(&svg),
        "--save-snapshot",
        path_str(&snap),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let series = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = series.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,C,O,D,N_k1,N_k2,N_k3");
    let last: Vec<u128> = rows
        .last()
        .unwrap()
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    let (c, o, d) = (last[0], last[1], last[2]);
    assert_eq!(last[3], c + o * (1 + d));
    assert_eq!(last[4], c + o * (1 + d + d * (d - 1) / 2));

    let fits: Value = serde_json::from_str(&std::fs::read_to_string(&fits).unwrap()).unwrap();
    let rows = fits["fits"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let (b, tau) = (row["b"].as_f64().unwrap(), row["tau"].as_f64().unwrap());
        assert!((tau - std::f64::consts::LN_2 / b).abs() < 1e-12);
    }

    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg"));
    assert!(picture.contains("stroke-dasharray"));

    let cached = attrib(&["growth", "--assets", path_str(&snap)]);
    assert_eq!(code(&cached), 0);
    let cached_rows: Vec<String> = String::from_utf8(cached.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    let fresh_rows: Vec<String> = series
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    assert_eq!(cached_rows, fresh_rows);
}

#[test]
fn growth_input_errors() {
    assert_eq!(code(&attrib(&["growth", "--assets", "fixtures/missing.csv"])), 2);
    assert_eq!(code(&attrib(&["growth", "--assets", FAMILY])), 2);
    let dir = tempfile::tempdir().unwrap();
    let columns = dir.path().join("columns.json");
    std::fs::write(&columns, r#"{"name": "title"}"#).unwrap();
    assert_eq!(
        code(&attrib(&[
            "growth",
            "--assets",
            ASSETS,
            "--columns",
            path_str(&columns)
        ])),
        2
    );
    std::fs::write(&columns, r#"{"nmae": "title"}"#).unwrap();
    assert_eq!(
        code(&attrib(&[
            "growth",
            "--assets",
            ASSETS,
            "--columns",
            path_str(&columns)
        ])),
        2
    );
}

#[test]
fn growth_with_region_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("regions.json");
    std::fs::write(&map, r#"[{"organization": "Example Lab", "region": "europe"}]"#).unwrap();
    let out = attrib(&["growth", "--assets", ASSETS, "--region-map", path_str(&map)]);
    assert_eq!(code(&out), 0);
    std::fs::write(&map, r#"[{"organization": "Example Lab", "region": "atlantis"}]"#).unwrap();
    assert_eq!(
        code(&attrib(&["growth", "--assets", ASSETS, "--region-map", path_str(&map)])),
        2
    );
}

#[test]
fn compute_reference_figures() {
    let out = attrib(&["compute", "--preset", "paper-national-annual"]);
    assert_eq!(code(&out), 0);
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("paper-national-annual"));
    assert!(report.contains("197.581 yr"));
    assert!(report.contains("1.93 PB"));
    assert!(report.contains("16.060 min"));

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("scenarios.csv");
    let out = attrib(&["compute", "--out", path_str(&table)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&table).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("paper-2025-single-item,2.2000e13,1.0000e5,2.2000e18,1.2941e0,1.294 s"));

    assert_eq!(code(&attrib(&["compute", "--tokens=-5"])), 3);
    assert_eq!(
        code(&attrib(&["compute", "--tokens", "1e6", "--machine-flops", "0"])),
        3
    );
    assert_eq!(
        code(&attrib(&["compute", "--preset", "paper-daily-sweep", "--tokens", "5"])),
        1
    );
}

#[test]
fn report_all_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = attrib(&["report-all", "--assets", ASSETS, "--out-dir", path_str(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "growth_single.csv",
        "growth_single.svg",
        "growth_multi_dataset.csv",
        "growth_multi_dataset.svg",
        "slices_modality.csv",
        "slices_modality.svg",
        "slices_region.csv",
        "slices_region.svg",
        "cumulative_parameters.csv",
        "cumulative_parameters.svg",
        "compute_sweep.csv",
        "compute_heatmap.svg",
        "daily_sweep_hours.svg",
        "compute_budget.csv",
        "compute_budget.txt",
        "fits.csv",
    ] {
        let path = dir.path().join(name);
        let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("{name} missing"));
        assert!(!text.is_empty(), "{name}");
    }
    let compute = std::fs::read_to_string(dir.path().join("compute_sweep.csv")).unwrap();
    for line in compute.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (wall, log) = (f[4].parse::<f64>().unwrap(), f[5].parse::<f64>().unwrap());
        assert!((wall.log10() - log).abs() < 1e-3, "{line}");
    }
}

fn run_in(dir: &Path, args: &[&str]) -> Vec<(PathBuf, Vec<u8>)> {
    let out = attrib(args);
    assert_eq!(code(&out), 0);
    let mut files: Vec<(PathBuf, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (PathBuf::from(p.file_name().unwrap()), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("report");
    let args = ["report-all", "--assets", ASSETS, "--out-dir", path_str(&out_dir)];
    let first = run_in(&out_dir, &args);
    let second = run_in(&out_dir, &args);
    assert_eq!(first, second);

    for args in [
        &["problang-verify", "--trials", "30", "--seed", "3"][..],
        &["adversary", "--mode", "nested", "--horizon", "40"],
        &["compute"],
    ] {
        assert_eq!(attrib(args).stdout, attrib(args).stdout, "{args:?}");
    }
}
