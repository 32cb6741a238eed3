//! Monte Carlo estimation of ergodic capacity and SINR statistics.
//!
//! Sample `i` of stream `seed` always uses the same channel draw, so
//! estimates are reproducible for any thread count, and different schemes
//! or SNR points evaluated with one seed share their random numbers.

use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use crate::channel::{sample_channels, SystemConfig};
use crate::error::{Error, Result};
use crate::precoding::{sinr, Scheme, SinrBreakdown};

/// Fewest samples accepted by the estimators.
pub const MIN_SAMPLES: u64 = 1000;

const CHUNK: u64 = 1024;

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MonteCarlo,
    AnalyticExact,
    AnalyticUpper,
    AnalyticLower,
    QuadratureOracle,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::MonteCarlo => "mc",
            Method::AnalyticExact => "analytic-exact",
            Method::AnalyticUpper => "analytic-upper",
            Method::AnalyticLower => "analytic-lower",
            Method::QuadratureOracle => "quadrature-oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Method::MonteCarlo,
            Method::AnalyticExact,
            Method::AnalyticUpper,
            Method::AnalyticLower,
            Method::QuadratureOracle,
        ]
        .into_iter()
        .find(|m| m.tag() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown method tag '{s}'")))
    }
}

/// A capacity value in bits/s/Hz.
///
/// For Monte Carlo, `stderr` is the sample standard deviation over
/// `sqrt(samples)`; for analytic values it is the numeric error estimate
/// and `samples` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub method: Method,
    pub seed: u64,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMean {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments { n: 0.0, mean: 0.0, m2: 0.0 };

    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!("at least {MIN_SAMPLES} samples are required, got {samples}")));
    }
    Ok(())
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("could not build a thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Mean of `stat` over samples `0..samples` of `scheme`, using the global
/// rayon pool or a dedicated one with `threads` workers.
///
/// Per-chunk moments are merged in chunk order, so the result is
/// bit-identical for every thread count.
pub fn sample_mean_with<F>(
    scheme: Scheme,
    config: &SystemConfig,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
    stat: F,
) -> Result<SampleMean>
where
    F: Fn(&SinrBreakdown) -> f64 + Sync + Send,
{
    check_samples(samples)?;
    scheme.check(config)?;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<Moments>> = with_pool(threads, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut m = Moments::EMPTY;
                for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                    let real = sample_channels(config, seed, i);
                    m.push(stat(&sinr(scheme, &real, config)?));
                }
                Ok(m)
            })
            .collect()
    })?;
    let mut total = Moments::EMPTY;
    for p in parts {
        total = total.merge(p?);
    }
    let var = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(SampleMean { mean: total.mean, stderr: (var / total.n).sqrt(), samples })
}

pub fn sample_mean<F>(scheme: Scheme, config: &SystemConfig, samples: u64, seed: u64, stat: F) -> Result<SampleMean>
where
    F: Fn(&SinrBreakdown) -> f64 + Sync + Send,
{
    sample_mean_with(scheme, config, samples, seed, None, stat)
}

/// Instantaneous mutual information `½ log2(1+γ)`.
pub fn mutual_information(s: &SinrBreakdown) -> f64 {
    0.5 * s.gamma_end.ln_1p() / std::f64::consts::LN_2
}

/// Monte Carlo ergodic capacity `½ E log2(1+γ)`.
pub fn estimate_capacity(scheme: Scheme, config: &SystemConfig, samples: u64, seed: u64) -> Result<CapacityEstimate> {
    estimate_capacity_with(scheme, config, samples, seed, None)
}

/// [`estimate_capacity`] on a dedicated pool of `threads` workers.
pub fn estimate_capacity_with(
    scheme: Scheme,
    config: &SystemConfig,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<CapacityEstimate> {
    let m = sample_mean_with(scheme, config, samples, seed, threads, mutual_information)?;
    Ok(CapacityEstimate { value: m.mean.max(0.0), stderr: m.stderr, samples, method: Method::MonteCarlo, seed })
}

/// Which SINR an empirical distribution is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    Gamma1,
    Gamma2,
    End,
}

impl Hop {
    pub fn pick(self, s: &SinrBreakdown) -> f64 {
        match self {
            Hop::Gamma1 => s.gamma1,
            Hop::Gamma2 => s.gamma2,
            Hop::End => s.gamma_end,
        }
    }
}

/// Empirical c.d.f.: a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut v: Vec<f64>) -> Self {
        v.sort_by(f64::total_cmp);
        Self { sorted: v }
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|v| *v <= x) as f64 / self.sorted.len() as f64
    }

    /// Kolmogorov–Smirnov distance to `cdf`, checked on both sides of each
    /// step.
    pub fn ks_distance<F: FnMut(f64) -> Result<f64>>(&self, mut cdf: F) -> Result<f64> {
        let n = self.sorted.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = cdf(x)?;
            d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
        }
        Ok(d)
    }
}

/// Empirical distribution of one SINR of `scheme`.
pub fn empirical_cdf(scheme: Scheme, config: &SystemConfig, which: Hop, samples: u64, seed: u64) -> Result<EmpiricalCdf> {
    check_samples(samples)?;
    scheme.check(config)?;
    let v: Result<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| sinr(scheme, &sample_channels(config, seed, i), config).map(|s| which.pick(&s)))
        .collect();
    Ok(EmpiricalCdf::from_samples(v?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut a = Moments::EMPTY;
        xs.iter().for_each(|x| a.push(*x));
        let mut l = Moments::EMPTY;
        let mut r = Moments::EMPTY;
        xs[..37].iter().for_each(|x| l.push(*x));
        xs[37..].iter().for_each(|x| r.push(*x));
        let b = l.merge(r);
        assert!((a.mean - b.mean).abs() < 1e-15);
        assert!((a.m2 - b.m2).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let c = SystemConfig::equal(2, 1, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(estimate_capacity(Scheme::Mrc, &c, 999, 1), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn empirical_steps() {
        let e = EmpiricalCdf::from_samples(vec![3.0, 1.0, 2.0, 2.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(9.0), 1.0);
        let d = e.ks_distance(|x| Ok((x / 4.0).min(1.0))).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn method_tags_round_trip() {
        for m in ["mc", "analytic-exact", "analytic-upper", "analytic-lower", "quadrature-oracle"] {
            assert_eq!(m.parse::<Method>().unwrap().tag(), m);
        }
    }
}
