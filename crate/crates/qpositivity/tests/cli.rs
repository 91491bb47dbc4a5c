//! Black-box tests of the command-line interface: argument parsing,
//! output formats, exit codes, and seeded determinism.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpositivity"))
}

fn write_spec(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

#[test]
fn eval_qpoch_inf_prints_frozen_value() {
    let out = bin()
        .args(["--no-timestamp", "eval", "qpoch-inf", "--a", "0.5", "--q", "0.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"function\":\"qpoch-inf\""), "{text}");
    let v: f64 = text
        .split("\"value_re\":")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((v - 0.28878809508660242).abs() < 1e-15, "{v}");
}

#[test]
fn eval_csv_output() {
    let out = bin()
        .args([
            "--output", "csv", "--no-timestamp", "eval", "aq", "--z", "-1", "--q", "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "function,value_re,value_im,terms_used,tail_bound");
    let row = lines.next().unwrap();
    assert!(row.starts_with("aq,2.1726687508496"), "{row}");
}

#[test]
fn eval_unknown_function_is_usage_error() {
    let out = bin().args(["eval", "nope", "--q", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gram_accepts_valid_spec_and_reports_psd() {
    let spec = write_spec(
        r#"{"theorem":"euler","params":[{"y":0.5,"q":0.5},{"y":0.2,"q":0.8}],
            "points":[-3.0,-2.0,-1.0,0.0,1.0,2.0,3.0,4.0]}"#,
    );
    let out = bin()
        .args(["--no-timestamp", "gram", "--spec"])
        .arg(spec.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"is_psd\":true"), "{text}");
    assert!(text.contains("\"dim\":8"), "{text}");
}

#[test]
fn gram_single_point_is_trivially_psd() {
    let spec = write_spec(r#"{"theorem":"gauss","params":[{"c":0.3,"k":0.8}],"points":[0.5]}"#);
    let out = bin()
        .args(["--no-timestamp", "gram", "--dump-matrix", "--spec"])
        .arg(spec.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"is_psd\":true"), "{text}");
    // the 1x1 Gram entry is the kernel at lag zero
    assert!(text.contains("\"matrix\":[[1.5121204663585"), "{text}");
}

#[test]
fn gram_rejects_out_of_domain_spec() {
    let spec = write_spec(r#"{"theorem":"euler","params":[{"y":1.5,"q":0.5}],"points":[0.0]}"#);
    let out = bin().args(["gram", "--spec"]).arg(spec.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gram_rejects_malformed_json() {
    let spec = write_spec(r#"{"theorem":"euler""#);
    let out = bin().args(["gram", "--spec"]).arg(spec.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_seeded_runs_are_byte_identical() {
    let run = || {
        bin()
            .args(["--seed", "7", "--no-timestamp", "certify", "2.3", "--random", "1000"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certify_grid_csv_shape() {
    let out = bin()
        .args([
            "--output", "csv", "--no-timestamp", "certify", "2.8", "--u", "0.3:3:4", "--v",
            "-1:1:5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ineq_id,u,v,lhs,rhs,margin,ratio,pass");
    // 4 x 5 grid rows + header + summary comment line
    assert_eq!(lines.len(), 22, "{text}");
    assert!(lines[21].starts_with("# summary total=20 pass=20 fail=0"));
    for row in &lines[1..21] {
        assert!(row.starts_with("2.8,"), "{row}");
        assert!(row.ends_with(",true"), "{row}");
    }
}

#[test]
fn certify_without_grid_or_random_is_usage_error() {
    let out = bin().args(["certify", "2.3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no grid given"), "{err}");
}

#[test]
fn certify_rejects_mismatched_axes() {
    // 2.8 needs u and v; passing q is an error.
    let out = bin()
        .args(["certify", "2.8", "--u", "0.3:3:4", "--q", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_as_printed_variant_runs() {
    let out = bin()
        .args([
            "--no-timestamp", "certify", "2.17", "--variant", "as-printed", "--zx", "0.1:0.5:3",
            "--zy", "0.2",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2.17:as-printed"), "{text}");
}

#[test]
fn sweep_all_small_run_passes() {
    let out = bin()
        .args(["--no-timestamp", "--seed", "3", "sweep-all", "--random", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"total\":140,\"pass\":140,\"fail\":0"), "{text}");
}

#[test]
fn oracle_single_point_and_random() {
    let out = bin()
        .args([
            "--no-timestamp", "oracle", "euler", "--z", "0.5", "--q", "0.5", "--x", "1.0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"transform\":\"euler\""), "{text}");
    assert!(text.contains("\"pass\":true"), "{text}");

    let out = bin()
        .args(["--no-timestamp", "--seed", "5", "oracle", "ramanujan", "--random", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"total\":5,\"pass\":5"), "{text}");
}

#[test]
fn oracle_density_dump_csv() {
    let out = bin()
        .args([
            "--output", "csv", "--no-timestamp", "oracle", "density", "--family", "euler",
            "--z", "0.5", "--q", "0.5", "--alphas", "-2:2:9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,density");
    assert_eq!(lines.len(), 10);
    for row in &lines[1..] {
        let d: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(d >= 0.0, "{row}");
    }
}

#[test]
fn oracle_insufficient_cutoff_is_reported() {
    let out = bin()
        .args([
            "oracle", "euler", "--z", "0.5", "--q", "0.5", "--x", "0.0", "--cutoff", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cutoff"), "{err}");
}

#[test]
fn timestamp_toggles_summary_fields() {
    let with_ts = bin()
        .args(["certify", "2.8", "--u", "1", "--v", "0.5"])
        .output()
        .unwrap();
    let text = String::from_utf8(with_ts.stdout).unwrap();
    assert!(text.contains("\"timestamp\":"), "{text}");
    assert!(text.contains("\"elapsed_ms\":"), "{text}");
    let without = bin()
        .args(["--no-timestamp", "certify", "2.8", "--u", "1", "--v", "0.5"])
        .output()
        .unwrap();
    let text = String::from_utf8(without.stdout).unwrap();
    assert!(!text.contains("timestamp"), "{text}");
}
