//! Point evaluation and CSV output.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use relaycap::analytic::{evaluate, large_n_capacity};
use relaycap::channel::SystemConfig;
use relaycap::mc::{estimate_capacity, CapacityEstimate, Method};
use relaycap::precoding::Scheme;

use crate::settings::{config_err, MethodChoice, Settings};

pub const HEADER: &str = "scheme,method,n,m,rho1_db,rho2_db,rhoi_db,capacity_bits,stderr,samples,seed";

/// One concrete evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    Mc,
    Method(Method),
    LargeN,
}

impl Eval {
    /// Concrete evaluations behind a requested method for `scheme`.
    pub fn expand(choice: MethodChoice, scheme: Scheme) -> Vec<Eval> {
        match (choice, scheme) {
            (MethodChoice::Mc, _) => vec![Eval::Mc],
            (MethodChoice::Analytic, Scheme::Zf) => vec![Eval::Method(Method::AnalyticExact)],
            (MethodChoice::Analytic, _) => {
                vec![Eval::Method(Method::AnalyticUpper), Eval::Method(Method::AnalyticLower)]
            }
            (MethodChoice::Upper, Scheme::Zf) | (MethodChoice::Lower, Scheme::Zf) => {
                vec![Eval::Method(Method::AnalyticExact)]
            }
            (MethodChoice::Upper, _) => vec![Eval::Method(Method::AnalyticUpper)],
            (MethodChoice::Lower, _) => vec![Eval::Method(Method::AnalyticLower)],
            (MethodChoice::LargeN, _) => vec![Eval::LargeN],
            (MethodChoice::Quadrature, _) => vec![Eval::Method(Method::QuadratureOracle)],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Eval::Mc => Method::MonteCarlo.tag(),
            Eval::Method(m) => m.tag(),
            Eval::LargeN => "large-n",
        }
    }
}

/// One sweep point; powers in dB as given by the user.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub scheme: Scheme,
    pub eval: Eval,
    pub n: usize,
    pub rho1_db: f64,
    pub rho2_db: f64,
    pub rhoi_db: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl Point {
    pub fn config(&self) -> relaycap::Result<SystemConfig> {
        SystemConfig::new(
            self.n,
            db_to_linear(self.rho1_db),
            db_to_linear(self.rho2_db),
            self.rhoi_db.iter().map(|&d| db_to_linear(d)).collect(),
        )
    }

    pub fn evaluate(&self) -> relaycap::Result<CapacityEstimate> {
        let cfg = self.config()?;
        match self.eval {
            Eval::Mc => estimate_capacity(self.scheme, &cfg, self.samples, self.seed),
            Eval::Method(m) => Ok(evaluate(self.scheme, m, &cfg)?.estimate()),
            Eval::LargeN => Ok(large_n_capacity(&cfg)?.estimate()),
        }
    }

    pub fn csv_row(&self, est: &CapacityEstimate) -> String {
        let rhoi: Vec<String> = self.rhoi_db.iter().map(|v| v.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{:e},{},{}",
            self.scheme.name(),
            self.eval.tag(),
            self.n,
            self.rhoi_db.len(),
            self.rho1_db,
            self.rho2_db,
            rhoi.join(";"),
            est.value,
            est.stderr,
            est.samples,
            est.seed
        )
    }
}

/// Points in sweep order: interference profile, N, ρ1, scheme, method.
pub fn expand(s: &Settings) -> Vec<Point> {
    let mut out = Vec::new();
    for profile in &s.rhoi_db {
        for &n in &s.n {
            for &r1 in &s.rho1_db {
                for &scheme in &s.schemes {
                    for &choice in &s.methods {
                        for eval in Eval::expand(choice, scheme) {
                            out.push(Point {
                                scheme,
                                eval,
                                n,
                                rho1_db: r1,
                                rho2_db: s.rho2_db.unwrap_or(r1),
                                rhoi_db: profile.clone(),
                                samples: s.samples,
                                seed: s.seed,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Evaluate every point, in parallel, keeping sweep order. The first
/// error (in sweep order) aborts the run.
pub fn evaluate_all(points: &[Point], threads: Option<usize>) -> anyhow::Result<Vec<CapacityEstimate>> {
    let work = || -> Vec<relaycap::Result<CapacityEstimate>> { points.par_iter().map(Point::evaluate).collect() };
    let results = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| config_err(format!("cannot start {t} threads: {e}")))?
            .install(work),
        None => work(),
    };
    points
        .iter()
        .zip(results)
        .map(|(p, r)| {
            r.map_err(|e| {
                anyhow::Error::new(e).context(format!("{} {} at n={} rho1={} dB", p.scheme, p.eval.tag(), p.n, p.rho1_db))
            })
        })
        .collect()
}

pub fn csv_rows(points: &[Point], estimates: &[CapacityEstimate]) -> Vec<String> {
    points.iter().zip(estimates).map(|(p, e)| p.csv_row(e)).collect()
}

pub fn render_csv(rows: &[String]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| config_err(format!("--output {} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

/// CSV to `output` or to stdout.
pub fn emit(rows: &[String], output: Option<&Path>) -> anyhow::Result<()> {
    let csv = render_csv(rows);
    match output {
        Some(p) => write_atomic(p, &csv),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
