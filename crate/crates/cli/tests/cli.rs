use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrlab")).args(args).output().expect("binary runs")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn quaternion_check_is_qr_with_trivial_multiplier() {
    let out = qrlab(&["check", &corpus_file("q8.pres")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["order"], 8);
    assert_eq!(v["h2"]["hopf"]["torsion"], serde_json::json!([]));
    assert_eq!(v["h2"]["agree"], true);
    assert_eq!(v["primes"][0]["qr"]["verdict"]["verdict"], "qr");
    assert_eq!(v["primes"][0]["harness"]["violations"], 0);
}

#[test]
fn klein_four_has_witness() {
    let out = qrlab(&["check", &corpus_file("c2xc2.pres")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let qr = &v["primes"][0]["qr"];
    assert_eq!(qr["verdict"]["verdict"], "not-qr");
    assert_eq!(qr["verdict"]["witness_level"], 1);
    assert_eq!(qr["levels"][0]["p_torsion"], serde_json::json!([2]));
    assert!(v["primes"][0]["harness"].is_null());
}

#[test]
fn json_is_byte_identical_and_sorted() {
    let a = qrlab(&["check", &corpus_file("m16.pres")]);
    let b = qrlab(&["check", &corpus_file("m16.pres")]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && l.contains("\":"))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qrlab(&["check", "/definitely/missing.pres"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.pres", "gens: a; relators: c^2; prime: 2;");
    let out = qrlab(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));
    let np = write(dir.path(), "np.pres", "gens: a; relators: a^2; prime: 4;");
    assert_eq!(qrlab(&["check", &np]).status.code(), Some(2));
    assert_eq!(qrlab(&["check"]).status.code(), Some(2));
    // S3 is not a 2-group: partial report with the failing stage
    let s3 = write(dir.path(), "s3.pres", "gens: a, b; relators: a^3, b^2, a*b*a*b; prime: 2;");
    let out = qrlab(&["check", &s3]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed_stage"], "filtration");
    assert_eq!(v["order"], 6);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.pres", "gens: a, b; relators: a*b*a^-1*b^-1; prime: 2;");
    let out = qrlab(&["check", &z2, "--max-cosets", "500"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed_stage"], "enumerate");
}

#[test]
fn bundled_corpus_matches() {
    let out = qrlab(&["corpus", &corpus_file("corpus.toml"), "--jobs", "4"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{csv}\n{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "id,prime,order,gab,h2,qr,harness,millis,check");
    assert_eq!(lines.len(), 14);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
}

#[test]
fn empty_corpus_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "empty.toml", "# nothing here\n");
    let out = qrlab(&["corpus", &c]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn wrong_expectation_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c4.pres", "gens: a; relators: a^4; prime: 2;");
    write(dir.path(), "c2.pres", "gens: a; relators: a^2; prime: 2;");
    let c = write(
        dir.path(),
        "c.toml",
        "[[entry]]\nid = \"c4\"\npath = \"c4.pres\"\nexpected = { order = 5 }\n\n\
         [[entry]]\nid = \"c2\"\npath = \"c2.pres\"\nexpected = { order = 2, qr = true, h2 = \"0\" }\n",
    );
    let out = qrlab(&["corpus", &c, "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("c4,") && rows[0].contains("mismatch: order"));
    assert!(rows[1].ends_with(",ok"));
}

#[test]
fn duplicate_ids_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "d.toml",
        "[[entry]]\nid = \"x\"\npath = \"a.pres\"\n[[entry]]\nid = \"x\"\npath = \"b.pres\"\n",
    );
    assert_eq!(qrlab(&["corpus", &c]).status.code(), Some(2));
}

#[test]
fn missing_entry_file_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "m.toml", "[[entry]]\nid = \"gone\"\npath = \"gone.pres\"\n");
    let out = qrlab(&["corpus", &c]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("gone,,,,,error"));
}

#[test]
fn oracles() {
    let out = qrlab(&["oracle", "bar-h2", &corpus_file("c4.pres")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["text"], "0");
    let out = qrlab(&["oracle", "delta-dims", &corpus_file("c4.pres"), "--prime", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["dims"], serde_json::json!([3, 2, 1, 0]));
    let out = qrlab(&["oracle", "subgroups", &corpus_file("trivial.pres")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    let out = qrlab(&["oracle", "bar-h2", &corpus_file("c2xc2.pres")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["text"], "Z/2");
}

#[test]
fn csv_and_out_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.csv");
    let out = qrlab(&[
        "check",
        &corpus_file("c9.pres"),
        "--format",
        "csv",
        "--out",
        &out_path.to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(out_path).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("c9,3,9,Z/9,0,qr,"));
}

#[test]
fn max_level_and_extra_primes() {
    let out = qrlab(&["check", &corpus_file("c4.pres"), "--max-level", "6", "--precision", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["primes"][0]["qr"]["levels"].as_array().unwrap().len(), 6);
    assert_eq!(v["primes"][0]["harness"]["precision"], 8);
    // the trivial group is a p-group for every p
    let out = qrlab(&["check", &corpus_file("trivial.pres"), "--prime", "2", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["primes"].as_array().unwrap().len(), 2);
}

#[test]
fn timing_is_opt_in() {
    let out = qrlab(&["check", &corpus_file("c2.pres")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["timing"].is_null());
    let out = qrlab(&["check", &corpus_file("c2.pres"), "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["timing"]["total_ms"].is_u64());
}
