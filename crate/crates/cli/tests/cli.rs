use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str = "scheme,method,n,m,rho1_db,rho2_db,rhoi_db,capacity_bits,stderr,samples,seed";

fn relaycap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaycap")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[derive(Debug)]
struct Row {
    scheme: String,
    method: String,
    n: usize,
    rho1_db: f64,
    rhoi_db: String,
    capacity: f64,
    stderr: f64,
    samples: u64,
    seed: u64,
}

fn parse(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 11, "{l}");
            Row {
                scheme: f[0].into(),
                method: f[1].into(),
                n: f[2].parse().unwrap(),
                rho1_db: f[4].parse().unwrap(),
                rhoi_db: f[6].into(),
                capacity: f[7].parse().unwrap(),
                stderr: f[8].parse().unwrap(),
                samples: f[9].parse().unwrap(),
                seed: f[10].parse().unwrap(),
            }
        })
        .collect()
}

fn stdout(o: &Output) -> String {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_smoke() {
    let o = relaycap(&[
        "eval", "--scheme", "zf", "--n", "4", "--m", "2", "--rho1-db", "10", "--rho2-db", "10", "--rhoi-db", "0",
        "--method", "analytic",
    ]);
    let rows = parse(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].scheme.as_str(), rows[0].method.as_str()), ("zf", "analytic-exact"));
    assert!((rows[0].capacity - 1.713_899_513).abs() < 1e-8);
    assert_eq!(rows[0].rhoi_db, "0;0");
}

#[test]
fn eval_rows_per_scheme_and_method() {
    let o = relaycap(&[
        "eval", "--scheme", "mrc,mmse", "--n", "3", "--m", "1", "--rho1-db", "5", "--rhoi-db", "0", "--method",
        "mc,analytic", "--samples", "2000", "--seed", "4",
    ]);
    let rows = parse(&stdout(&o));
    let methods: Vec<&str> = rows.iter().map(|r| r.method.as_str()).collect();
    assert_eq!(methods, ["mc", "analytic-upper", "analytic-lower", "mc", "analytic-upper", "analytic-lower"]);
    assert_eq!((rows[0].samples, rows[0].seed), (2000, 4));
    assert!(rows[0].stderr > 0.0);
}

#[test]
fn exit_codes() {
    let zf_short = relaycap(&["eval", "--scheme", "zf", "--n", "2", "--m", "3", "--rho1-db", "10", "--rhoi-db", "0", "--method", "analytic"]);
    assert_eq!(code(&zf_short), 2);
    let unequal = relaycap(&["eval", "--scheme", "mmse", "--n", "4", "--rho1-db", "10", "--rhoi-db", "0,10", "--method", "analytic"]);
    assert_eq!(code(&unequal), 2);
    assert!(String::from_utf8_lossy(&unequal.stderr).contains("equal interferer powers"));
    assert_eq!(code(&relaycap(&["eval", "--scheme", "foo", "--n", "4", "--rho1-db", "10"])), 2);
    assert_eq!(code(&relaycap(&["eval", "--scheme", "mrc", "--n", "4", "--rho1-db", "0:10:5"])), 2);
    assert_eq!(code(&relaycap(&["eval", "--bogus"])), 2);
    assert_eq!(code(&relaycap(&["figure", "9"])), 2);
    // unequal powers are fine for simulation
    let mc = relaycap(&["eval", "--scheme", "mmse", "--n", "4", "--rho1-db", "10", "--rhoi-db", "0,10", "--samples", "1000"]);
    assert_eq!(code(&mc), 0);
}

#[test]
fn numeric_failure_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let o = relaycap(&[
        "eval", "--scheme", "mmse", "--n", "4", "--m", "2", "--rho1-db", "10", "--rhoi-db", "300", "--samples", "1000",
        "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none(), "no files, not even temporaries");
}

fn sweep_to(path: &Path, threads: &str) {
    let o = relaycap(&[
        "sweep", "--scheme", "mrc,zf,mmse", "--n", "4", "--m", "2", "--rho1-db", "0:20:10", "--rhoi-db", "0", "--method",
        "mc,analytic", "--samples", "3000", "--seed", "11", "--threads", threads, "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("c.csv"));
    sweep_to(&a, "1");
    sweep_to(&b, "1");
    sweep_to(&c, "4");
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    assert_eq!(a, std::fs::read(c).unwrap());
    let rows = parse(std::str::from_utf8(&a).unwrap());
    // 3 points x (mrc 3 rows + zf 2 rows + mmse 3 rows)
    assert_eq!(rows.len(), 24);
    let rho: Vec<f64> = rows.iter().map(|r| r.rho1_db).collect();
    assert!(rho.windows(2).all(|w| w[0] <= w[1]), "rows follow sweep order");
}

fn mc_table(rows: &[Row]) -> HashMap<(String, String, u64), (f64, f64)> {
    rows.iter()
        .filter(|r| r.method == "mc")
        .map(|r| ((r.scheme.clone(), r.rhoi_db.clone(), (r.rho1_db * 10.0) as u64), (r.capacity, r.stderr)))
        .collect()
}

#[test]
fn scheme_ordering_setup() {
    let o = relaycap(&[
        "sweep", "--scheme", "mrc,zf,mmse", "--n", "4", "--m", "2", "--rho1-db", "0:30:10", "--rhoi-db", "0;10",
        "--method", "mc", "--samples", "20000",
    ]);
    let rows = parse(&stdout(&o));
    let t = mc_table(&rows);
    for rhoi in ["0;0", "10;10"] {
        for r in [0, 100, 200, 300] {
            let get = |s: &str| t[&(s.to_string(), rhoi.to_string(), r)];
            let (mrc, zf, mmse) = (get("mrc"), get("zf"), get("mmse"));
            let ci = |a: (f64, f64), b: (f64, f64)| 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
            assert!(mmse.0 >= zf.0 - ci(mmse, zf), "rhoI={rhoi} rho1={r}: {mmse:?} {zf:?}");
            assert!(zf.0 >= mrc.0 - ci(zf, mrc), "rhoI={rhoi} rho1={r}: {zf:?} {mrc:?}");
        }
    }
}

#[test]
fn ceiling_setup() {
    let o = relaycap(&[
        "sweep", "--scheme", "mrc,zf,mmse", "--n", "4", "--m", "2", "--rho1-db", "30:40:5", "--rho2-db", "10",
        "--rhoi-db", "0", "--samples", "20000",
    ]);
    let rows = parse(&stdout(&o));
    for scheme in ["mrc", "zf", "mmse"] {
        let c: Vec<f64> = rows.iter().filter(|r| r.scheme == scheme).map(|r| r.capacity).collect();
        assert_eq!(c.len(), 3);
        assert!(c[2] - c[1] < 0.02, "{scheme}: {c:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("point.cfg");
    std::fs::write(&cfg, "# operating point\nscheme = mrc\nn = 3\nm = 2\nrho1-db = 10\nrhoi_db = 3\nsamples = 1500\nseed = 5\n").unwrap();
    let o = relaycap(&["eval", "--config", cfg.to_str().unwrap(), "--seed", "8"]);
    let rows = parse(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].n, rows[0].samples, rows[0].seed), (3, 1500, 8));
    assert_eq!(rows[0].rhoi_db, "3;3");
    std::fs::write(&cfg, "scheme = mrc\nwidth = 3\n").unwrap();
    assert_eq!(code(&relaycap(&["eval", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&relaycap(&["eval", "--config", dir.path().join("missing").to_str().unwrap()])), 2);
}

#[test]
fn figure_with_sample_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = relaycap(&["figure", "2", "--samples", "1000", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = parse(&std::fs::read_to_string(&out).unwrap());
    assert!(rows.iter().filter(|r| r.method == "mc").all(|r| r.samples == 1000));
    let gp = std::fs::read_to_string(dir.path().join("fig2.gp")).unwrap();
    assert!(gp.contains("<< EOD") && gp.contains("plot "));
}

#[test]
fn selftest_passes() {
    let o = relaycap(&["selftest"]);
    let text = stdout(&o);
    assert!(text.lines().count() >= 8);
    assert!(!text.contains("FAIL"));
}
