use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn entrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    entrack(&all)
}

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "instances", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn primes_writes_one_row_per_state() {
    let dir = TempDir::new().unwrap();
    assert_ok(&run_in(dir.path(), &["primes", "--n", "14"]));
    let rows = lines(&dir.path().join("trajectory.csv"));
    assert_eq!(
        rows[0],
        "scenario,label,sequence,alpha,beta,lambda0,entropy_vn,gap,renyi_2,renyi_3"
    );
    assert_eq!(rows.len(), 1 + 26);
    let m = manifest(dir.path());
    assert_eq!(m["results"]["pi_k"][0], 1900);

    let qft = TempDir::new().unwrap();
    assert_ok(&run_in(qft.path(), &["primes", "--n", "14", "--qft"]));
    assert_eq!(lines(&qft.path().join("trajectory.csv")).len(), 1 + 52);
}

#[test]
fn adiabatic_grid_times_partitions() {
    let dir = TempDir::new().unwrap();
    let inst = instance("ec_n10_s1.txt");
    assert_ok(&run_in(dir.path(), &["adiabatic", "--instance", &inst, "--seed", "7"]));
    assert_eq!(lines(&dir.path().join("trajectory.csv")).len(), 1 + 11 * 3);
    let m = manifest(dir.path());
    assert_eq!(m["results"]["containment_violations"], serde_json::json!([]));
    assert_eq!(m["results"]["flexible_exceedances"], 0);
}

#[test]
fn boundary_grid_size() {
    let dir = TempDir::new().unwrap();
    assert_ok(&run_in(dir.path(), &["boundary", "--curve", "f1", "--grid", "200"]));
    let rows = lines(&dir.path().join("boundary.csv"));
    assert_eq!(rows[0], "x,f1");
    assert_eq!(rows.len(), 1 + 200);
}

#[test]
fn shor_manifest_records_factors_and_digests() {
    let dir = TempDir::new().unwrap();
    assert_ok(&run_in(dir.path(), &["shor", "--N", "21", "--a", "2", "--seed", "4"]));
    let m = manifest(dir.path());
    let mut f: Vec<u64> = serde_json::from_value(m["results"]["factors"].clone()).unwrap();
    f.sort_unstable();
    assert_eq!(f, vec![3, 7]);
    assert_eq!(m["seeds"], serde_json::json!([4]));
    let digest = m["outputs"]["trajectory.csv"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.bytes().all(|b| b.is_ascii_hexdigit()));
}

#[test]
fn json_flag_adds_boundaries() {
    let dir = TempDir::new().unwrap();
    assert_ok(&run_in(dir.path(), &["--json", "shor", "--N", "15", "--a", "7", "--seed", "2"]));
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(doc["scenario"], "shor");
    let names: Vec<&str> = doc["boundaries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"f1") && names.contains(&"f_shor"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let even = run_in(dir.path(), &["shor", "--N", "16", "--a", "3", "--seed", "1"]);
    assert_eq!(even.status.code(), Some(2));
    let missing_seed = run_in(dir.path(), &["shor", "--N", "15", "--a", "7"]);
    assert_eq!(missing_seed.status.code(), Some(2));
    let bad_curve = run_in(dir.path(), &["boundary", "--curve", "nonsense"]);
    assert_eq!(bad_curve.status.code(), Some(2));
    assert_eq!(entrack(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let missing = run_in(dir.path(), &["adiabatic", "--instance", "/nonexistent/inst.txt", "--seed", "1"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn validate_accepts_output_and_flags_tampering() {
    let dir = TempDir::new().unwrap();
    assert_ok(&run_in(dir.path(), &["primes", "--n", "10"]));
    let csv = dir.path().join("trajectory.csv");
    let good = entrack(&["validate", csv.to_str().unwrap()]);
    assert_ok(&good);
    assert!(String::from_utf8_lossy(&good.stdout).starts_with("rows 18 violations 0"));

    // Entropy above ln α cannot belong to any state.
    let text = fs::read_to_string(&csv).unwrap();
    let mut rows: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut fields: Vec<String> = rows[3].split(',').map(str::to_owned).collect();
    fields[6] = "9.0".into();
    rows[3] = fields.join(",");
    let bad_path = dir.path().join("tampered.csv");
    fs::write(&bad_path, rows.join("\n") + "\n").unwrap();
    let bad = entrack(&["validate", bad_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("violations 1"));
}

#[test]
fn csv_identical_across_thread_counts() {
    let inst = instance("ec_n10_s2.txt");
    let runs: [&[&str]; 3] = [
        &["adiabatic", "--instance", &inst, "--seed", "3"],
        &["grover", "--n", "8", "--marked", "5,77", "--seed", "9"],
        &["rmt", "conditional", "--alpha", "16", "--beta", "32", "--samples", "300", "--seed", "5"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let dir = TempDir::new().unwrap();
            let mut full = vec!["--threads", threads];
            full.extend_from_slice(args);
            assert_ok(&run_in(dir.path(), &full));
            let mut files: Vec<_> = fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .collect();
            files.sort();
            outputs.push(files.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>());
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
}

#[test]
fn generated_instance_round_trips() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("inst.txt");
    assert_ok(&entrack(&[
        "gen-instance", "--n", "8", "--clauses", "5", "--seed", "3", "--file",
        file.to_str().unwrap(),
    ]));
    let out = dir.path().join("run");
    assert_ok(&run_in(&out, &["grover", "--instance", file.to_str().unwrap(), "--seed", "1"]));
    let m = manifest(&out);
    assert!(m["results"]["success_probability"].as_f64().unwrap() > 0.9);
}
