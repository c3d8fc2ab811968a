use std::process::{Command, Output};

use serde_json::Value;

fn fzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fzeta(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn failure(args: &[&str]) -> String {
    let out = fzeta(args);
    assert!(!out.status.success(), "{args:?} should fail");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "));
    err
}

#[test]
fn cantor_lattice_string() {
    let v = json(&[
        "string",
        "lattice",
        "--r",
        "1/3",
        "--m",
        "2",
        "--n-terms",
        "4",
    ]);
    let lengths = v["lengths"].as_array().unwrap();
    assert_eq!(lengths.len(), 4);
    for (n, e) in lengths.iter().enumerate() {
        assert_eq!(e["l"], format!("1/{}", 3u64.pow(n as u32 + 1)));
        assert_eq!(e["m"], 1u64 << n);
    }
}

#[test]
fn realized_cantor_string() {
    let v = json(&["string", "realize", "--variant", "omega1", "--depth", "2"]);
    let ivs = v["intervals"].as_array().unwrap();
    assert_eq!(ivs.len(), 3);
    assert_eq!(ivs[1], serde_json::json!(["1/3", "2/3"]));
}

#[test]
fn no_gap_is_rejected() {
    let err = failure(&["string", "lattice", "--r", "1/2", "--m", "2"]);
    assert!(err.contains("m·r ≥ 1"), "{err}");
    assert!(err.starts_with("error: invalid_parameter: "));
}

#[test]
fn pole_lists() {
    let v = json(&["dims", "--r", "1/3", "--m", "2", "--im-max", "12"]);
    let poles = v["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 5);
    let ims: Vec<f64> = poles.iter().map(|p| p["im"].as_f64().unwrap()).collect();
    assert!(ims.windows(2).all(|w| w[0] < w[1]));
    let v = json(&["dims", "--r", "1/3", "--m", "2", "--im-max", "0.1"]);
    let poles = v["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 1);
    assert!((poles[0]["re"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-14);
    let v = json(&["dims", "--im-max", "6", "--verify"]);
    assert_eq!(v["poles"].as_array().unwrap().len(), 3);
}

#[test]
fn tube_sweep() {
    let text = stdout(&[
        "tube",
        "--r",
        "1/3",
        "--m",
        "2",
        "--grid",
        "50",
        "--n-terms",
        "500",
    ]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(
        header,
        [
            "epsilon",
            "v_direct",
            "v_explicit",
            "abs_diff",
            "normalized"
        ]
    );
    assert_eq!(rows.len(), 50);
    let diff = column(&header, "abs_diff");
    let worst = rows
        .iter()
        .map(|r| r[diff].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 2e-3);
}

#[test]
fn tube_single_epsilon() {
    let (header, rows) = csv_rows(&stdout(&["tube", "--epsilon", "1/18"]));
    assert_eq!(rows.len(), 1);
    let v: f64 = rows[0][column(&header, "v_direct")].parse().unwrap();
    assert_eq!(v, 7.0 / 9.0);

    let out = fzeta(&["tube", "--epsilon", "3/4"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows[0][column(&header, "v_explicit")], "");
    assert!(String::from_utf8_lossy(&out.stderr).contains("note:"));
}

#[test]
fn spectrum_tables() {
    let (header, rows) = csv_rows(&stdout(&["spectrum", "--h", "3", "--w", "3", "--K", "24"]));
    assert_eq!(header, ["k1", "k2", "alpha", "sigma", "f_alpha", "is_max"]);
    let maxes: Vec<_> = rows.iter().filter(|r| r[5] == "true").collect();
    assert_eq!(maxes.len(), 1);
    assert_eq!((maxes[0][0].as_str(), maxes[0][1].as_str()), ("1", "2"));
    let pairs = (1..=24u64)
        .map(|k2| (0..=k2).filter(|&k1| num_gcd(k1, k2) == 1).count())
        .sum::<usize>();
    assert_eq!(rows.len(), pairs);

    let (_, rows) = csv_rows(&stdout(&["spectrum", "--h", "2", "--w", "3", "--K", "12"]));
    for r in rows {
        let sigma: f64 = r[3].parse().unwrap();
        let f: f64 = r[4].parse().unwrap();
        assert!((sigma - f).abs() <= 1e-12);
    }

    let err = failure(&["spectrum", "--h", "3", "--w", "2"]);
    assert!(err.contains("degenerate: equal weights"), "{err}");
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn census_table() {
    let (header, rows) = csv_rows(&stdout(&[
        "measure-census",
        "--h",
        "3",
        "--w",
        "3",
        "--n",
        "2",
    ]));
    assert_eq!(
        header,
        [
            "n",
            "j",
            "k1_reduced",
            "k2_reduced",
            "alpha",
            "length",
            "count"
        ]
    );
    let counts: Vec<&str> = rows.iter().map(|r| r[6].as_str()).collect();
    assert_eq!(counts, ["1", "2", "1"]);
    assert!(rows.iter().all(|r| r[5] == "1/9"));
    let (_, rows) = csv_rows(&stdout(&["measure-census", "--n", "3", "--all-levels"]));
    assert_eq!(rows.len(), 2 + 3 + 4);
}

#[test]
fn mzeta_reports() {
    let v = json(&["mzeta", "--variant", "omega2"]);
    assert_eq!(v["zeta_neg_infty"], "(1/9)^s");
    assert!(v["poles_neg_infty"].as_array().unwrap().is_empty());

    let v = json(&["mzeta", "--variant", "omega1", "--verify-stages", "12"]);
    assert!(v["oracle"]["max_relative_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(
        v["zeta_neg_infty"],
        "2*(4/9)^s + 2*(1/27)^s/(1 - 2*(1/3)^s)"
    );

    let v = json(&["mzeta", "--variant", "omega3"]);
    let re = v["poles_neg_infty"][0]["re"].as_f64().unwrap();
    assert!((re - 0.31546).abs() < 1e-5);

    let all = json(&["mzeta"]);
    let reports = all.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports
        .iter()
        .all(|r| r["zeta_infty"] == reports[0]["zeta_infty"]));

    let err = failure(&["mzeta", "--eta1", "1/3"]);
    assert!(err.contains("hypothesis"), "{err}");
}

#[test]
fn zeta_and_pzeta_values() {
    let v = json(&["zeta", "--s-re", "2"]);
    assert!((v["closed_form"]["re"].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-15);
    let v = json(&["zeta", "--s-re", "0.6309297535714574"]);
    assert!(v["closed_form"].is_null());
    assert!(v["closed_form_error"].as_str().unwrap().contains("pole"));

    let v = json(&["pzeta", "--k1", "1", "--k2", "2", "--s-re", "1"]);
    let sum = v["value"]["partial_sum"]["re"].as_f64().unwrap();
    assert!((sum - ((9.0f64 / 5.0).sqrt() - 1.0)).abs() < 1e-12);
    assert!((v["abscissa_numeric"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-6);
    failure(&["pzeta", "--k1", "2", "--k2", "4"]);
}

#[test]
fn content_and_box_dimension() {
    let v = json(&["content-bounds"]);
    assert_eq!(v["measurable"], false);
    for w in v["windows"].as_array().unwrap() {
        assert!(w["gap"].as_f64().unwrap() > 1e-2);
    }
    let v = json(&[
        "box-dim",
        "--variant",
        "omega1",
        "--depth",
        "12",
        "--eps",
        "1/9,1/27,1/81,1/243,1/729,1/2187,1/6561",
    ]);
    let slope = v["slope_estimate"].as_f64().unwrap();
    assert!((slope - 2f64.ln() / 3f64.ln()).abs() < 0.02);
    failure(&["box-dim", "--depth", "3", "--eps", "1/81"]);
}

#[test]
fn invalid_inputs_fail_on_one_line() {
    for args in [
        &["zeta", "--r", "0.3", "--s-re", "1"][..],
        &["string", "realize", "--variant", "omega4"],
        &["string", "realize", "--variant", "omega1", "--depth", "0"],
        &["dims", "--im-max", "-1"],
        &["dims", "--bogus"],
        &["measure-census", "--n", "30"],
        &["tube", "--n-terms", "0"],
        &["tube", "--epsilon", "-1/3"],
    ] {
        failure(args);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["dims", "--im-max", "30", "--verify"][..],
        &["tube"],
        &["spectrum", "--K", "16"],
        &["mzeta", "--verify-stages", "8"],
        &["measure-census", "--n", "10", "--all-levels"],
    ] {
        assert_eq!(fzeta(args).stdout, fzeta(args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = fzeta(&["spectrum", "--K", "6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&["spectrum", "--K", "6"]));

    let missing = dir.path().join("no/such/dir/x.json");
    let err = failure(&["zeta", "--s-re", "2", "--out", missing.to_str().unwrap()]);
    assert!(err.starts_with("error: io: "));
}
