use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ringspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringspec"))
        .args(args)
        .env_remove("RINGSPEC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ringspec(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn robnik_map() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("maps/robnik.json")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `(energy, multiplicity)` per CSV row.
fn energies(csv: &str) -> Vec<(f64, u32)> {
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("index,energy,label1,label2,s,multiplicity,engine")
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[5].parse().unwrap())
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn exact_first_row() {
    let csv = ok(&["exact", "--a", "0.5", "--b", "1", "--count", "10"]);
    let rows = energies(&csv);
    assert!(rel(rows[0].0, 39.01328850) < 1e-9);
    // a degenerate pair straddling the cutoff is kept whole
    let states: usize = rows.iter().map(|r| r.1 as usize).sum();
    assert!(states == 10 || states == 11, "{states}");
    let first = csv.lines().nth(1).unwrap();
    assert_eq!(
        first.split(',').skip(2).collect::<Vec<_>>(),
        vec!["0", "1", "", "1", "exact"]
    );
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(
        ringspec(&["exact", "--a", "0.5", "--count", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringspec(&["exact", "--a", "1.5", "--count", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ringspec(&["ccm", "--count", "3"]).status.code(), Some(2));
    assert_eq!(
        ringspec(&["ccm", "--a", "0.5", "--nx", "7", "--ny", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringspec(&["analytic", "--alpha", "0.1", "--count", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn resource_guard_exits_4() {
    let out = ringspec(&[
        "ccm", "--a", "0.9", "--nx", "14", "--ny", "1000", "--count", "5",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn degenerate_map_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("bad.json");
    // cardioid cusp: the density vanishes at x = lx, y = pi
    std::fs::write(&map, r#"{"lx": 0.2, "c": 1, "eta": [1, 0.5]}"#).unwrap();
    let out = ringspec(&[
        "ccm",
        "--map",
        path_str(&map),
        "--nx",
        "6",
        "--ny",
        "20",
        "--count",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    ok(&[
        "exact",
        "--a",
        "0.3",
        "--count",
        "25",
        "--out",
        path_str(&csv),
    ]);
    ok(&[
        "exact",
        "--a",
        "0.3",
        "--count",
        "25",
        "--out",
        path_str(&json),
    ]);
    let from_csv = energies(&std::fs::read_to_string(&csv).unwrap());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let from_json: Vec<(f64, u32)> = doc["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| {
            (
                l["energy"].as_f64().unwrap(),
                l["multiplicity"].as_u64().unwrap() as u32,
            )
        })
        .collect();
    assert_eq!(from_csv, from_json);
    assert_eq!(doc["manifest"]["command"], "exact");
    assert_eq!(doc["manifest"]["parameters"]["count"], 25);

    let sidecar: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("s.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["parameters"]["a"], 0.3);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        ok(&[
            "analytic",
            "--map",
            path_str(&robnik_map()),
            "--count",
            "40",
            "--out",
            path_str(p),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn ccm_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("ccm.json");
    let args = |o: &Path| {
        vec![
            "ccm".to_string(),
            "--a".into(),
            "0.5".into(),
            "--nx".into(),
            "8".into(),
            "--ny".into(),
            "24".into(),
            "--count".into(),
            "6".into(),
            "--cache-dir".into(),
            cache.display().to_string(),
            "--out".into(),
            o.display().to_string(),
        ]
    };
    let run = |o: &Path| {
        let a = args(o);
        let refs: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        ok(&refs);
        serde_json::from_str::<Value>(&std::fs::read_to_string(o).unwrap()).unwrap()
    };
    let cold = run(&out);
    assert_eq!(cold["manifest"]["cache_hit"], false);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
    let warm = run(&dir.path().join("ccm2.json"));
    assert_eq!(warm["manifest"]["cache_hit"], true);
    assert_eq!(cold["levels"], warm["levels"]);
    let ground = cold["levels"][0]["energy"].as_f64().unwrap();
    assert!(rel(ground, 39.01328850) < 1e-2, "{ground}");
    assert_eq!(cold["levels"][0]["label1"], Value::Null);
    assert_eq!(cold["levels"][0]["engine"], "ccm");
}

#[test]
fn ccm_vectors_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    ok(&[
        "ccm",
        "--map",
        path_str(&robnik_map()),
        "--nx",
        "6",
        "--ny",
        "30",
        "--count",
        "3",
        "--vectors",
        "2",
        "--out",
        path_str(&out),
    ]);
    let psi = std::fs::read_to_string(dir.path().join("r.csv.psi1.csv")).unwrap();
    assert!(psi.starts_with("u,v,psi\n"));
    assert_eq!(psi.lines().count(), 1 + 5 * 31);
    assert!(dir.path().join("r.csv.psi2.csv").exists());
    assert!(!dir.path().join("r.csv.psi3.csv").exists());
}

#[test]
fn analytic_alpha_zero_is_annulus() {
    let plain = energies(&ok(&["analytic", "--a", "0.9", "--count", "60"]));
    let robnik = energies(&ok(&[
        "analytic", "--a", "0.9", "--alpha", "0", "--count", "60",
    ]));
    assert_eq!(plain.len(), robnik.len());
    for (x, y) in plain.iter().zip(&robnik) {
        assert!(rel(x.0, y.0) < 1e-10);
        assert_eq!(x.1, y.1);
    }
}

#[test]
fn variational_table_value() {
    let text = ok(&[
        "variational",
        "--a",
        "0.001",
        "--basis",
        "radial",
        "--n",
        "5",
    ]);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let last: f64 = rows[4][1].parse().unwrap();
    assert!(rel(last, 7.367206060) < 1e-6, "{last}");
    // N = 1 is the closed formula, the lowest analytic level
    let first: f64 = rows[0][1].parse().unwrap();
    let formula = energies(&ok(&["analytic", "--a", "0.001", "--count", "1"]))[0].0;
    assert!(rel(first, formula) < 1e-12);
    // gaps against the exact ground state are positive
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn variational_robnik_is_monotone() {
    let text = ok(&[
        "variational",
        "--map",
        path_str(&robnik_map()),
        "--basis",
        "angular",
        "--n",
        "3",
        "--quad-n",
        "64",
    ]);
    let e: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(e.len(), 3);
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
}

#[test]
fn geometry_of_bundled_map() {
    let v: Value =
        serde_json::from_str(&ok(&["geometry", "--map", path_str(&robnik_map())])).unwrap();
    assert!((v["area"].as_f64().unwrap() - 1.07032).abs() < 5e-6);
    assert!((v["perimeter"].as_f64().unwrap() - 11.5250).abs() < 5e-5);
    let fine: Value = serde_json::from_str(&ok(&[
        "geometry",
        "--map",
        path_str(&robnik_map()),
        "--quad-n",
        "512",
    ]))
    .unwrap();
    assert!((fine["area"].as_f64().unwrap() - v["area"].as_f64().unwrap()).abs() < 1e-8);

    let annulus: Value = serde_json::from_str(&ok(&["geometry", "--a", "0.5"])).unwrap();
    assert!(
        rel(
            annulus["area"].as_f64().unwrap(),
            std::f64::consts::PI * 0.75
        ) < 1e-10
    );
}

#[test]
fn berry_on_oracle_file() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = dir.path().join("exact.csv");
    let curves = dir.path().join("curves.csv");
    let summary = dir.path().join("berry.json");
    ok(&[
        "exact",
        "--a",
        "0.9",
        "--count",
        "2000",
        "--out",
        path_str(&spectrum),
    ]);
    ok(&[
        "berry",
        path_str(&spectrum),
        "--area-exact",
        "0.5969026041820607",
        "--curves",
        path_str(&curves),
        "--out",
        path_str(&summary),
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(v["area_rel_error"].as_f64().unwrap().abs() < 5e-3, "{v}");
    assert_eq!(v["manifest"]["parameters"]["states"], 2000);

    let text = std::fs::read_to_string(&curves).unwrap();
    assert!(text.starts_with("t,a0,a1,a2,a3,t_star\n"));
    let marked: Vec<&str> = text.lines().filter(|l| l.ends_with(",1.0")).collect();
    assert_eq!(marked.len(), 1);
    let t_star: f64 = marked[0].split(',').next().unwrap().parse().unwrap();
    assert_eq!(t_star, v["t_star"].as_f64().unwrap());
}

#[test]
fn berry_reads_plain_lists() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("e.txt");
    let csv = ok(&["exact", "--a", "0.5", "--count", "300"]);
    let mut plain = String::new();
    for (e, m) in energies(&csv) {
        for _ in 0..m {
            plain.push_str(&format!("{e:?}\n"));
        }
    }
    std::fs::write(&list, plain).unwrap();
    let v: Value = serde_json::from_str(&ok(&["berry", path_str(&list)])).unwrap();
    assert_eq!(v["manifest"]["parameters"]["states"], 300);
    assert!(v["area"].as_f64().unwrap() > 2.0 && v["area"].as_f64().unwrap() < 2.5);
}

#[test]
fn weyl_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let (exact, approx) = (dir.path().join("e.csv"), dir.path().join("a.csv"));
    ok(&[
        "exact",
        "--a",
        "0.9",
        "--count",
        "100",
        "--out",
        path_str(&exact),
    ]);
    ok(&[
        "analytic",
        "--a",
        "0.9",
        "--count",
        "100",
        "--out",
        path_str(&approx),
    ]);
    let text = ok(&["compare", path_str(&approx), path_str(&exact)]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,energy,reference,rel_error"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() == 100 || rows.len() == 101);
    assert!(rows.iter().all(|r| r[3].abs() < 1e-2));

    let weyl = ok(&["weyl", "--a", "0.9", "--count", "5"]);
    assert_eq!(weyl.lines().count(), 6);
    assert!(weyl.lines().nth(1).unwrap().starts_with("1,"));
}
