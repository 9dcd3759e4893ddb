use std::process::Command;

use digraph_pstar::cli::run;
use digraph_pstar::entropy::entropy_p2_closed;
use serde_json::Value;

fn pstar(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("pstar").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => s.parse().unwrap(),
        other => panic!("not a number: {other}"),
    }
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.take_while(|l| !l.is_empty()).map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn critical_reports() {
    let (code, out, _) = pstar(&["critical", "--p", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(num(&v["beta1_c"]), -2.0);
    assert_eq!(num(&v["beta2_c"]), 2.0);
    let (_, out, _) = pstar(&["critical", "--p", "3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(num(&v["beta2_c"]), 1.125);
    let (code, _, err) = pstar(&["critical", "--p", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("p must be >= 2"));
}

#[test]
fn curve_rows_follow_the_antidiagonal() {
    let (code, out, _) = pstar(&["curve", "--p", "2", "--beta1-min", "-6", "--beta1-max", "-2.5", "--steps", "8"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["beta1", "beta2", "x1", "x2", "qprime", "dx1_dbeta1", "dx2_dbeta1"]);
    assert_eq!(rows.len(), 8);
    let parsed: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x.parse().unwrap()).collect()).collect();
    for r in &parsed {
        assert!((r[1] + r[0]).abs() <= 1e-8);
        let q = -(r[3] - r[2]) / (r[3].powi(2) - r[2].powi(2));
        assert!((r[4] - q).abs() <= 1e-12);
    }
    assert!(parsed.windows(2).all(|w| w[1][2] > w[0][2]), "x1 increases down the file");
    assert_eq!(pstar(&["curve", "--p", "2", "--beta1-min", "-3", "--beta1-max", "-1"]).0, 2);
}

#[test]
fn grid_psi_es_matches_closed_form() {
    let (code, out, _) = pstar(&["grid", "--p", "2", "--quantity", "psi_es", "--resolution", "64"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["e", "s", "psi_es"]);
    assert_eq!(rows.len(), 64 * 64);
    let mut cells = std::collections::HashMap::new();
    for r in &rows {
        let (e, s, v): (f64, f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        match entropy_p2_closed(e, s) {
            Ok(want) if s >= e * e && s <= e => assert!((v - want).abs() < 1e-12, "({e}, {s})"),
            _ => assert_eq!(r[2], "-inf", "({e}, {s})"),
        }
        cells.insert(((e * 63.0).round() as i64, (s * 63.0).round() as i64), v);
    }
    // bilinear interpolation at (0.5, 0.3) from the four surrounding cells
    let (fe, fs): (f64, f64) = (0.5 * 63.0, 0.3 * 63.0);
    let (i, j) = (fe.floor() as i64, fs.floor() as i64);
    let (te, ts) = (fe - i as f64, fs - j as f64);
    let at = |a: i64, b: i64| -> f64 { cells[&(a, b)] };
    let v = (1.0 - te) * (1.0 - ts) * at(i, j) + te * (1.0 - ts) * at(i + 1, j) + (1.0 - te) * ts * at(i, j + 1) + te * ts * at(i + 1, j + 1);
    assert!((v + 0.10364).abs() < 2e-3, "interpolated {v}");
}

#[test]
fn dpsi_de_is_flat_inside_u() {
    let (code, out, _) = pstar(&["grid", "--p", "2", "--quantity", "dpsi_de", "--resolution", "32", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let (_, tags, _) = pstar(&["grid", "--p", "2", "--quantity", "region_tag", "--resolution", "32", "--format", "json"]);
    let t: Value = serde_json::from_str(&tags).unwrap();
    let es: Vec<f64> = v["axis1"]["values"].as_array().unwrap().iter().map(num).collect();
    let b2s: Vec<f64> = v["axis2"]["values"].as_array().unwrap().iter().map(num).collect();
    let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(num).collect();
    let tag: Vec<f64> = t["values"].as_array().unwrap().iter().map(num).collect();
    let mut checked = 0;
    for (j, &b2) in b2s.iter().enumerate() {
        let inside: Vec<f64> = (0..es.len()).filter(|&i| tag[i * b2s.len() + j] == 1.0).map(|i| vals[i * b2s.len() + j]).collect();
        if let Some(first) = inside.first() {
            assert!(inside.iter().all(|x| x == first), "beta2 = {b2}");
            // −q⁻¹(β₂) = β₂ for p = 2
            assert!((first - b2).abs() < 1e-8);
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn json_and_csv_encode_the_same_numbers() {
    for q in ["psi_es", "psi_e_beta2", "psi_beta1_s", "dpsi_ds", "region_tag"] {
        let (_, csv, _) = pstar(&["grid", "--p", "3", "--quantity", q, "--resolution", "12"]);
        let (_, json, _) = pstar(&["grid", "--p", "3", "--quantity", q, "--resolution", "12", "--format", "json"]);
        let v: Value = serde_json::from_str(&json).unwrap();
        let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(num).collect();
        let (_, rows) = csv_rows(&csv);
        assert_eq!(rows.len(), vals.len());
        for (r, x) in rows.iter().zip(&vals) {
            let c: f64 = r[2].parse().unwrap();
            assert!(c.to_bits() == x.to_bits() || (c.is_nan() && x.is_nan()), "{q}: {c} vs {x}");
        }
    }
}

#[test]
fn point_queries() {
    let (code, out, _) = pstar(&["point", "--p", "2", "--e", "0.5", "--s", "0.3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((num(&v["psi"]) + 0.10364).abs() < 1e-5);
    assert!((num(&v["lambda"]) - 0.5).abs() < 1e-12);
    assert_eq!(v["region"], "interior");

    let v: Value = serde_json::from_str(&pstar(&["point", "--beta1", "0", "--beta2", "0"]).1).unwrap();
    assert_eq!(num(&v["psi"]), 0.0);
    assert!((num(&v["argmax"][0]) - 0.5).abs() < 1e-14);

    let v: Value = serde_json::from_str(&pstar(&["point", "--e", "0.3", "--beta2", "1"]).1).unwrap();
    assert!((num(&v["psi"]) - 0.0077171).abs() < 1e-7);
    assert_eq!(v["region"], "uniform");

    let v: Value = serde_json::from_str(&pstar(&["point", "--beta1", "-3", "--s", "0.4"]).1).unwrap();
    assert_eq!(v["region"], "bipodal");

    let v: Value = serde_json::from_str(&pstar(&["point", "--e", "0.5", "--s", "0.9"]).1).unwrap();
    assert_eq!(v["psi"], "-inf");

    assert_eq!(pstar(&["point", "--e", "0.5", "--s", "0.3", "--beta2", "1"]).0, 2);
    assert_eq!(pstar(&["point", "--e", "0.5"]).0, 2);
}

#[test]
fn compare_reports_gaps_and_row_law() {
    let (code, out, _) = pstar(&["compare", "--p", "2", "--e", "0.5", "--s", "0.3", "--delta", "0.05", "--n-list", "8,12,16", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let gaps: Vec<f64> = rows.iter().map(|r| num(&r["gap"])).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    assert_eq!(v["gaps_decreasing"], decreasing);
    assert_eq!(code, if decreasing { 0 } else { 4 });
    let hist = v["row_law"]["histogram"].as_array().unwrap();
    assert_eq!(hist.len(), 17);
    let total: f64 = hist.iter().map(|h| num(&h["probability"])).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let (_, out, _) = pstar(&["compare", "--p", "2", "--e", "0.5", "--s", "0.25", "--delta", "0.05", "--n-list", "4,8"]);
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "psi").unwrap();
    assert!(rows.iter().all(|r| r[col].parse::<f64>().unwrap() == 0.0));

    let (code, out, _) = pstar(&["compare", "--p", "2", "--e", "0.5", "--s", "0.9", "--delta", "0.01", "--n-list", "4"]);
    assert_ne!(code, 0);
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "psi_n").unwrap();
    assert_eq!(rows[0][col], "-inf");

    assert_eq!(pstar(&["compare", "--e", "0.5", "--s", "0.3", "--n-list", "40"]).0, 3);
}

#[test]
fn oracle_outputs() {
    let (code, out, _) = pstar(&["oracle", "--n", "2"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["E", "S", "log_weight"]);
    let counts: Vec<(u64, u64, u64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse::<f64>().unwrap().exp().round() as u64))
        .collect();
    assert_eq!(counts, [(0, 0, 1), (1, 1, 4), (2, 2, 4), (2, 4, 2), (3, 5, 4), (4, 8, 1)]);

    let (_, out, _) = pstar(&["oracle", "--n", "2", "--e", "0.5", "--s", "0.25", "--delta", "0.01"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((num(&v["psi_n"]) + 0.3466).abs() < 1e-4);

    let args = ["oracle", "--n", "8", "--e", "0.5", "--s", "0.3", "--count", "50", "--seed", "42"];
    let (code, a, _) = pstar(&args);
    assert_eq!(code, 0);
    assert_eq!(a, pstar(&args).1);
    assert_eq!(csv_rows(&a).1.len(), 50);

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let (_, cold, _) = pstar(&["oracle", "--n", "5", "--cache", cache]);
    let (_, warm, _) = pstar(&["oracle", "--n", "5", "--cache", cache]);
    assert_eq!(cold, warm);
    assert_eq!(cold, pstar(&["oracle", "--n", "5"]).1);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let (code, stdout, _) = pstar(&["grid", "--quantity", "psi_es", "--resolution", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, pstar(&["grid", "--quantity", "psi_es", "--resolution", "8"]).1);
    let bad = dir.path().join("missing").join("grid.csv");
    assert_eq!(pstar(&["grid", "--quantity", "psi_es", "--resolution", "8", "--out", bad.to_str().unwrap()]).0, 3);
}

#[test]
fn usage_errors() {
    assert_eq!(pstar(&[]).0, 2);
    assert_eq!(pstar(&["grid", "--quantity", "psi", "--resolution", "64"]).0, 2);
    assert_eq!(pstar(&["grid", "--quantity", "psi_es", "--resolution", "4"]).0, 2);
    assert_eq!(pstar(&["--help"]).0, 0);
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pstar"));
    cmd.env_remove("PSTAR_TOL_ROOT").env_remove("PSTAR_TOL_REGION");
    cmd
}

#[test]
fn binary_is_deterministic() {
    let args = ["grid", "--p", "3", "--quantity", "psi_es", "--resolution", "24"];
    let a = binary().args(args).output().unwrap();
    let b = binary().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, pstar(&args).1.into_bytes());
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary().args(["critical", "--p", "1"]).output().unwrap().status.code(), Some(2));
    assert_eq!(binary().args(["oracle", "--n", "20"]).output().unwrap().status.code(), Some(3));
}

#[test]
fn config_precedence() {
    let sources = |cmd: &mut Command| -> Value {
        let out = cmd.output().unwrap();
        serde_json::from_slice(&out.stdout).unwrap()
    };
    let find = |v: &Value, name: &str| -> (f64, String) {
        let row = v["settings"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap().clone();
        (num(&row["value"]), row["source"].as_str().unwrap().to_string())
    };
    let v = sources(binary().arg("config"));
    assert_eq!(find(&v, "root_tol"), (1e-13, "default".into()));
    let v = sources(binary().arg("config").env("PSTAR_TOL_ROOT", "1e-11"));
    assert_eq!(find(&v, "root_tol"), (1e-11, "env".into()));
    let v = sources(binary().args(["config", "--tol-root", "1e-12"]).env("PSTAR_TOL_ROOT", "1e-11"));
    assert_eq!(find(&v, "root_tol"), (1e-12, "flag".into()));
    let v = sources(binary().args(["--tol-region", "1e-8", "config"]));
    assert_eq!(find(&v, "region_tol"), (1e-8, "flag".into()));
}
