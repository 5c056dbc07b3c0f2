use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL_GRID: &str = r#"{"radial": 24, "angular": 32, "bidisc": {"radial": 12, "angular": 16}}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discnorm"))
}

/// Writes a corpus and a run config into a fresh directory.
fn setup(corpus: &str, extra: &str) -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("corpus.json"), corpus).unwrap();
    let cfg = dir.path().join("run.json");
    let sep = if extra.is_empty() { "" } else { "," };
    fs::write(
        &cfg,
        format!(r#"{{"corpus_path": "corpus.json", "grid": {SMALL_GRID}{sep}{extra}}}"#),
    )
    .unwrap();
    (dir, cfg)
}

fn run(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg(cmd)
        .arg("--config")
        .arg(cfg)
        .arg("--output")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().map(split_csv).collect()
}

fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0].iter().position(|c| c == name).unwrap()
}

const Z_ONLY: &str = r#"{"families": [{"name": "monomials", "params": {"from": 1, "to": 1}}]}"#;
const TWO_POLYS: &str = r#"{"families": [{"name": "monomials", "params": {"from": 1, "to": 2}},
    {"name": "random_polynomial", "params": {"count": 1, "degree": 4}}]}"#;

#[test]
fn bloch_of_identity() {
    let (dir, cfg) = setup(Z_ONLY, r#""norms": [{"kind": "bloch"}]"#);
    let out = dir.path().join("out.csv");
    let o = run("norms", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    let v: f64 = rows[1][column(&rows, "value")].parse().unwrap();
    assert!((v - 1.0).abs() < 1e-3);
}

#[test]
fn bergman_of_identity() {
    let (dir, cfg) = setup(Z_ONLY, r#""norms": [{"kind": "bergman_p", "p": 2}]"#);
    let out = dir.path().join("out.csv");
    assert!(run("norms", &cfg, &out, &[]).status.success());
    let rows = csv_rows(&out);
    let v: f64 = rows[1][column(&rows, "value")].parse().unwrap();
    assert!((v - PI / 2.0).abs() < 1e-6, "{v}");
    assert_eq!(rows[1][column(&rows, "params")], "p=2");
}

#[test]
fn default_norm_kinds() {
    let (dir, cfg) = setup(Z_ONLY, "");
    let out = dir.path().join("out.csv");
    assert!(run("norms", &cfg, &out, &[]).status.success());
    let rows = csv_rows(&out);
    let kinds: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(kinds, ["bloch", "bergman_p", "bp", "hardy_p", "lusin"]);
}

#[test]
fn empty_corpus_is_header_only() {
    for cmd in ["norms", "equivalence", "search"] {
        let (dir, cfg) = setup(r#"{"families": []}"#, "");
        let out = dir.path().join("out.csv");
        let o = run(cmd, &cfg, &out, &[]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let rows = csv_rows(&out);
        let data = rows[1..].iter().filter(|r| !r[0].starts_with("summary:")).count();
        assert_eq!(data, 0, "{cmd}");
        assert_eq!(rows[0][0], "label");
    }
}

#[test]
fn equivalence_columns_and_summary() {
    let (dir, cfg) = setup(TWO_POLYS, r#""theorem": "S2""#);
    let out = dir.path().join("out.csv");
    let o = run("equivalence", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0].join(","),
        "label,theorem,p,alpha,lhs_power_value,test_dual,searched_dual,holder_floor,ratio_test,ratio_searched,refine_delta,error"
    );
    let labels: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(
        labels,
        ["z^1", "z^2", "random-0", "summary:min", "summary:max", "summary:band"]
    );
    let band: f64 = rows[6][column(&rows, "ratio_test")].parse().unwrap();
    assert!((1.0..=20.0).contains(&band), "{band}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let (dir, cfg) = setup(TWO_POLYS, r#""theorem": "S4", "search": {"budget": 4}"#);
    for fmt in ["csv", "json"] {
        let a = dir.path().join(format!("a.{fmt}"));
        let b = dir.path().join(format!("b.{fmt}"));
        assert!(run("equivalence", &cfg, &a, &["--format", fmt, "--seed", "11"])
            .status
            .success());
        assert!(run("equivalence", &cfg, &b, &["--format", fmt, "--seed", "11"])
            .status
            .success());
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{fmt}");
    }
}

#[test]
fn violated_hypothesis_exits_2() {
    let (dir, cfg) = setup(Z_ONLY, r#""theorem": "S2", "p": 1.5, "alpha": 1.8"#);
    let o = run("equivalence", &cfg, &dir.path().join("out.csv"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p ≥ α′"));
}

#[test]
fn malformed_config_exits_2() {
    let (dir, cfg) = setup(Z_ONLY, r#""no_such_field": 1"#);
    let o = run("norms", &cfg, &dir.path().join("out.csv"), &[]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(&cfg, "{not json").unwrap();
    assert_eq!(
        run("norms", &cfg, &dir.path().join("out.csv"), &[]).status.code(),
        Some(2)
    );
}

#[test]
fn missing_corpus_exits_2() {
    let (dir, cfg) = setup(Z_ONLY, "");
    fs::remove_file(dir.path().join("corpus.json")).unwrap();
    for cmd in ["norms", "search"] {
        let o = run(cmd, &cfg, &dir.path().join("out.csv"), &[]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn evaluation_error_exits_3_with_error_rows() {
    // beta outside [0, p + 2) fails per row, after the bloch row succeeds.
    let (dir, cfg) = setup(
        Z_ONLY,
        r#""norms": [{"kind": "bloch"}, {"kind": "kwon_ast", "p": 2, "beta": 5}]"#,
    );
    let out = dir.path().join("out.csv");
    let o = run("norms", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    let err = column(&rows, "error");
    assert!(rows[1][err].is_empty());
    assert!(rows[2][err].contains("beta"), "{:?}", rows[2]);
    assert!(rows[2][column(&rows, "value")].is_empty());
}

#[test]
fn search_budget_one_matches_test_weight() {
    let (dir, cfg) = setup(TWO_POLYS, r#""theorem": "S2", "search": {"budget": 1}"#);
    let out = dir.path().join("out.csv");
    let o = run("search", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    let (t, s) = (column(&rows, "test_dual"), column(&rows, "searched_dual"));
    for r in &rows[1..] {
        let (a, b): (f64, f64) = (r[t].parse().unwrap(), r[s].parse().unwrap());
        assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} {b}");
        assert_eq!(r[column(&rows, "ordering_violated")], "false");
    }
}

#[test]
fn larger_budget_never_worse() {
    let (dir, cfg) = setup(TWO_POLYS, r#""theorem": "S2", "search": {"budget": 1}"#);
    let one = dir.path().join("one.csv");
    assert!(run("search", &cfg, &one, &[]).status.success());
    fs::write(
        &cfg,
        format!(
            r#"{{"corpus_path": "corpus.json", "grid": {SMALL_GRID}, "theorem": "S2", "search": {{"budget": 40}}}}"#
        ),
    )
    .unwrap();
    let many = dir.path().join("many.csv");
    assert!(run("search", &cfg, &many, &[]).status.success());
    let (a, b) = (csv_rows(&one), csv_rows(&many));
    let s = column(&a, "searched_dual");
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        let (x, y): (f64, f64) = (x[s].parse().unwrap(), y[s].parse().unwrap());
        assert!(y <= x * (1.0 + 1e-12), "{y} > {x}");
    }
}

#[test]
fn csv_and_json_agree() {
    let (dir, cfg) = setup(TWO_POLYS, r#""theorem": "S3", "search": {"budget": 3}"#);
    for cmd in ["norms", "search", "equivalence"] {
        let csv = dir.path().join("out.csv");
        let json = dir.path().join("out.json");
        assert!(run(cmd, &cfg, &csv, &["--format", "csv"]).status.success(), "{cmd}");
        assert!(run(cmd, &cfg, &json, &["--format", "json"]).status.success(), "{cmd}");
        let rows = csv_rows(&csv);
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
        let objs = match doc.get("rows") {
            Some(r) => r.as_array().unwrap().clone(),
            None => doc.as_array().unwrap().clone(),
        };
        let data: Vec<&Vec<String>> = rows[1..].iter().filter(|r| !r[0].starts_with("summary:")).collect();
        assert_eq!(objs.len(), data.len(), "{cmd}");
        for (r, o) in data.iter().zip(&objs) {
            for (name, cell) in rows[0].iter().zip(r.iter()) {
                let v = &o[name.as_str()];
                match v {
                    serde_json::Value::Number(n) => {
                        let x = n.as_f64().unwrap();
                        let y: f64 = cell.parse().unwrap();
                        assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{cmd} {name}");
                    }
                    serde_json::Value::Null => assert!(cell.is_empty(), "{cmd} {name}"),
                    serde_json::Value::String(s) => assert_eq!(s, cell, "{cmd} {name}"),
                    serde_json::Value::Bool(b) => assert_eq!(b.to_string(), *cell, "{cmd} {name}"),
                    other => panic!("unexpected {other}"),
                }
            }
        }
    }
}

#[test]
fn seed_changes_random_entries_only() {
    let (dir, cfg) = setup(TWO_POLYS, r#""norms": [{"kind": "bergman_p", "p": 2}]"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(run("norms", &cfg, &a, &["--seed", "1"]).status.success());
    assert!(run("norms", &cfg, &b, &["--seed", "2"]).status.success());
    let (a, b) = (csv_rows(&a), csv_rows(&b));
    assert_eq!(a[1], b[1]);
    assert_eq!(a[2], b[2]);
    assert_ne!(a[3], b[3]);
}

#[test]
fn grid_scale_multiplies_counts() {
    let (dir, cfg) = setup(Z_ONLY, r#""norms": [{"kind": "bloch"}]"#);
    let out = dir.path().join("out.csv");
    assert!(run("norms", &cfg, &out, &["--grid-scale", "2"]).status.success());
    let rows = csv_rows(&out);
    assert!(rows[1][column(&rows, "grid")].contains("n=48,m=64"), "{:?}", rows[1]);
}

#[test]
fn stdout_without_output_flag() {
    let (_dir, cfg) = setup(Z_ONLY, r#""norms": [{"kind": "bloch"}]"#);
    let o = bin().args(["norms", "--config"]).arg(&cfg).output().unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("label,norm,params,value,grid,error\n"));
}
