//! Per-hop SINR distribution functions and the capacity integral over a
//! c.d.f.

use crate::channel::{build_profile, SystemConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Quad, Tolerance};
use crate::specfun::{binomial, factorial, gamma_q, gauss_2f1, lngamma, rgamma};
use crate::sum::CompensatedSum;

use super::HALF_LOG2E;

const CLAMP_SLACK: f64 = 1e-9;

fn clamp_probability(what: &'static str, p: f64) -> Result<f64> {
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&p) {
        return Err(Error::NumericInconsistency { what, value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `(1/2ln2) ∫₀^∞ (1 − F(x)) / (1 + x) dx`, the capacity term of a
/// non-negative SINR with c.d.f. `F`.
///
/// `tail_bound` is the scale of the upper tail (of the order of the mean
/// SINR); it only steers the quadrature.
pub fn capacity_from_cdf<F>(mut cdf: F, tail_bound: f64) -> Result<Quad>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure: Option<Error> = None;
    let scale = if tail_bound.is_finite() && tail_bound > 0.0 { tail_bound } else { 1.0 };
    let q = integrate_to_infinity(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            match cdf(x) {
                Ok(f) => (1.0 - f) / (1.0 + x),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        scale,
        Tolerance::new(1e-11, 1e-11),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let q = q?;
    Ok(Quad { value: q.value * HALF_LOG2E, error: q.error * HALF_LOG2E, evaluations: q.evaluations })
}

/// `P(γ ≤ x)` for `γ ~ Gamma(n, ρ)`, the law of `ρ‖h‖²`.
pub fn cdf_gamma_hop(x: f64, n: usize, rho: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - gamma_q(n as f64, x / rho)?)
}

/// c.d.f. of the first-hop SINR under MRC combining, for any set of
/// interferer powers (repeated values allowed).
pub fn cdf_gamma1_mrc(x: f64, config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    if x.is_nan() {
        return Err(Error::domain("cdf_gamma1_mrc", "x is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if config.m == 0 {
        return cdf_gamma_hop(x, config.n, config.rho1);
    }
    let rho1 = config.rho1;
    let profile = build_profile(&config.rho_i)?;
    let t = x / rho1;
    let mut tail = CompensatedSum::new();
    for k in 0..config.n {
        // x^k e^{-x/ρ1} / (ρ1^k k!) in log form
        let lead = (-t + k as f64 * t.ln() - lngamma(k as f64 + 1.0)?).exp();
        if lead == 0.0 {
            continue;
        }
        for l in 0..=k {
            let c = binomial(k as u32, l as u32);
            for (rho, j, chi) in profile.terms() {
                let ratio = rho1 / (rho1 + rho * x);
                let jl = (j + l) as f64;
                let w = (lngamma(jl)? - lngamma(j as f64)?).exp();
                tail.add(lead * c * chi * w * rho.powi(l as i32) * ratio.powf(jl));
            }
        }
    }
    clamp_probability("cdf_gamma1_mrc", 1.0 - tail.value())
}

fn equal_power(config: &SystemConfig) -> Result<f64> {
    if config.m == 0 {
        return Ok(0.0);
    }
    config.common_interference().ok_or(Error::UnequalInterference)
}

/// c.d.f. of the first-hop SINR under MMSE combining with equal-power
/// interferers.
pub fn cdf_gamma1_mmse(x: f64, config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    let rho_i = equal_power(config)?;
    if x.is_nan() {
        return Err(Error::domain("cdf_gamma1_mmse", "x is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (n, m) = (config.n, config.m);
    let t = x / config.rho1;
    let base = 1.0 - gamma_q(n as f64, t)?;
    if m == 0 {
        return clamp_probability("cdf_gamma1_mmse", base);
    }
    let m1 = n.saturating_sub(m) + 1;
    // Γ(M+1) e^{-t} t^N
    let lead = (lngamma(m as f64 + 1.0)? - t + n as f64 * t.ln()).exp();
    let mut s = CompensatedSum::new();
    for mm in m1..=n {
        let d = (n - mm) as f64;
        let f = gauss_2f1(m as f64 + 1.0, d + 1.0, d + 2.0, -rho_i * t)?;
        let den = rgamma(mm as f64) / factorial((n - mm + 1) as u32) * rgamma((mm + m - n) as f64);
        s.add(rho_i.powf(d + 1.0) * f * den);
    }
    clamp_probability("cdf_gamma1_mmse", base + lead * s.value())
}
