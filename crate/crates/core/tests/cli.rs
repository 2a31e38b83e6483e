use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutrit-dsd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn scan_writes_fig3_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let o = bin(&[
        "scan", "--alpha", "4.3", "--r", "0.9", "--variant", "as-written", "--t-end", "0.2", "--steps", "201",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["t", "p", "negativity", "ccnr", "lambda_min"]);
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][2] - 0.054_492_802_689_926_29).abs() < 1e-12);

    // negativity leaves zero between two adjacent rows around t = 0.075
    let k = rows.iter().position(|r| r[2] == 0.0).unwrap();
    assert!(rows[k - 1][0] < 0.075 && rows[k][0] >= 0.075 - 1e-3, "{:?}", &rows[k - 1..=k]);

    let bytes = std::fs::read(&out).unwrap();
    assert!(!bytes.contains(&b'\r'));

    let manifest = read_json(&dir.path().join("fig3.manifest.json"));
    assert_eq!(manifest["command"], "scan");
    assert_eq!(manifest["parameters"]["variant"], "as-written");
    assert_eq!(manifest["parameters"]["steps"], 201);
    assert_eq!(manifest["output"]["file"], "fig3.csv");
    assert_eq!(manifest["output"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["library_version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["schema_version"].is_u64());
}

#[test]
fn manifest_keys_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = bin(&["scan", "--alpha", "3", "--r", "0.5", "--t-end", "0.1", "--steps", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("s.manifest.json")).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = bin(&[
            "scan", "--alpha", "4.8", "--r", "0.9", "--t-end", "0.3", "--steps", "50", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn surface_rows_are_alpha_major() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surf.csv");
    let o = bin(&[
        "surface", "--alpha-min", "4", "--alpha-max", "5", "--alpha-steps", "2", "--r", "0.9", "--t-min", "0",
        "--t-max", "0.1", "--t-steps", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["alpha", "t", "p", "lambda_min"]);
    assert_eq!(rows.len(), 4);
    let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(coords, vec![(4.0, 0.0), (4.0, 0.1), (5.0, 0.0), (5.0, 0.1)]);
    assert!(dir.path().join("surf.manifest.json").exists());
}

#[test]
fn surface_for_alpha_five_changes_sign_along_t() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surf.csv");
    let o = bin(&[
        "surface", "--alpha-min", "5", "--alpha-max", "5", "--alpha-steps", "1", "--r", "0.9", "--t-max", "1",
        "--t-steps", "21", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = read_csv(&out);
    assert!(rows[0][3] < 0.0);
    assert!(rows.iter().any(|r| r[3] >= 0.0));
}

#[test]
fn out_of_domain_as_written_cell_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surf.csv");
    let o = bin(&[
        "surface", "--alpha-min", "4", "--alpha-max", "5", "--alpha-steps", "2", "--r", "0.9", "--t-max", "0.5",
        "--t-steps", "3", "--variant", "as-written", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("alpha = 4") && err.contains("t = 0.5"), "{err}");
    assert!(!out.exists());
}

#[test]
fn events_for_fig3_start_with_death() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ev.json");
    let o = bin(&[
        "events", "--alpha", "4.3", "--r", "0.9", "--t-end", "0.3", "--steps", "61", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let events = read_json(&out);
    let list = events.as_array().unwrap();
    assert_eq!(list[0]["kind"], "DSD");
    assert!((list[0]["t_start"].as_f64().unwrap() - 0.075).abs() < 5e-3);
    assert_eq!(list[1]["kind"], "ccnr_positive");
    assert_eq!(list[2]["kind"], "undetected");
    let manifest = read_json(&dir.path().join("ev.manifest.json"));
    assert_eq!(manifest["command"], "events");
    assert_eq!(manifest["parameters"]["refine_tol"], 1e-5);
}

#[test]
fn separable_start_without_absorption_has_no_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ev.json");
    let o = bin(&[
        "events", "--alpha", "2", "--r", "0", "--variant", "factorized", "--t-end", "2", "--steps", "101",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let events = read_json(&out);
    for e in events.as_array().unwrap() {
        assert!(e["kind"] != "DSD" && e["kind"] != "DSB", "{e}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["scan", "--alpha", "4.3"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bin(&["scan", "--alpha", "4.3", "--r", "0.9", "--t-end", "0.2", "--variant", "nope", "--out", "x.csv"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = bin(&["scan", "--alpha", "4.3", "--r", "0.9", "--t-end", "0.2", "--steps", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_3_and_name_the_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = bin(&["scan", "--alpha", "5.5", "--r", "0.9", "--t-end", "0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));

    let o = bin(&["scan", "--alpha", "4.3", "--r", "1.5", "--t-end", "0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r = 1.5"));

    let o = bin(&["scan", "--alpha", "4.3", "--r", "0.9", "--t-end", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ln(2)/2"));
}

#[test]
fn validate_passes_on_a_clean_build() {
    let o = bin(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(!text.contains("FAIL"));
    let summary = text.lines().last().unwrap();
    let count: usize = summary.split_whitespace().next().unwrap().parse().unwrap();
    assert!(count >= 10, "{summary}");
}

#[test]
fn validate_reports_injected_fault_by_name() {
    let o = bin(&["validate", "--inject-fault", "completeness"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("kraus_completeness_as_written")));
}

#[test]
fn run_is_callable_in_process() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qutrit_dsd::cli::run(["qutrit-dsd", "--help"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8_lossy(&out).contains("scan"));
}
