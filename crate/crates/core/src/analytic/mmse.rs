//! MMSE/MRT bounds for equal-power interferers.

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::mc::Method;
use crate::precoding::Scheme;
use crate::specfun::{
    factorial, lngamma, meijer_g2_cached, meijer_g_cached, rgamma, Estimate, MeijerG2Spec, MeijerGSpec, MellinKernel,
};

use super::{hop_capacity, hop_log_moment, Ledger, TermRecord, TheoremResult, HALF_LOG2E};

fn interference(config: &SystemConfig) -> Result<f64> {
    Scheme::Mmse.check(config)?;
    if config.m == 0 {
        return Ok(0.0);
    }
    config.common_interference().ok_or(Error::UnequalInterference)
}

// Indices m1..=N of the correction sums and 1/(Γ(m) Γ(N−m+1) Γ(m−N+M)).
fn corrections(config: &SystemConfig) -> impl Iterator<Item = (usize, f64)> {
    let (n, m) = (config.n, config.m);
    let m1 = if m == 0 { n + 1 } else { n.saturating_sub(m) + 1 };
    (m1..=n).map(move |mm| (mm, rgamma(mm as f64) / factorial((n - mm) as u32) * rgamma((mm + m - n) as f64)))
}

// G^{1,3}_{3,2}(ρI | a, −M−1, m−N−1; −1, m−N−2)
fn g13(a: f64, mm: usize, config: &SystemConfig, rho_i: f64) -> Result<Estimate> {
    let (n, m) = (config.n as f64, config.m as f64);
    let d = mm as f64 - n;
    let spec = MeijerGSpec::new(1, 3, vec![a, -m - 1.0, d - 1.0], vec![-1.0, d - 2.0], rho_i)?;
    meijer_g_cached(&spec)
}

fn c_gamma1(config: &SystemConfig, led: &mut Ledger) -> Result<()> {
    let rho_i = interference(config)?;
    let (n, rho1) = (config.n, config.rho1);
    let base = hop_capacity(n, rho1)?;
    led.add(1.0, base, 0.0);
    for (mm, den) in corrections(config) {
        let d = mm as f64 - n as f64;
        let second = MellinKernel::new(1, 2, vec![-(config.m as f64) - 1.0, d - 1.0], vec![-1.0, d - 2.0])?;
        let spec = MeijerG2Spec::new(n as f64 + 2.0, MellinKernel::g11(0.0, 0.0), second, rho1, rho_i)?;
        let g = meijer_g2_cached(&spec)?;
        let w = -HALF_LOG2E * rho1 * den * rho_i.powf(2.0 - d);
        led.add(w, g.value, g.error);
        led.note(format!("g2 c_gamma1 m={mm}"), g.value, g.error);
    }
    Ok(())
}

/// MMSE first-hop capacity term `(1/2ln2) E ln(1+γ1)`.
pub fn mmse_c_gamma1(config: &SystemConfig) -> Result<Estimate> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    Ok(Estimate { value: led.value(), error: led.error() })
}

fn log_moment(config: &SystemConfig, led: &mut Ledger) -> Result<()> {
    let rho_i = interference(config)?;
    led.add(1.0, hop_log_moment(config.n, config.rho1)?, 0.0);
    for (mm, den) in corrections(config) {
        let d = mm as f64 - config.n as f64;
        let g = g13(-(config.n as f64), mm, config, rho_i)?;
        led.add(-den * rho_i.powf(2.0 - d), g.value, g.error);
        led.note(format!("g13 log-moment m={mm}"), g.value, g.error);
    }
    Ok(())
}

/// `E ln γ1` under MMSE combining.
pub fn mmse_log_moment(config: &SystemConfig) -> Result<Estimate> {
    let mut led = Ledger::new();
    log_moment(config, &mut led)?;
    Ok(Estimate { value: led.value(), error: led.error() })
}

fn moment(order: f64, config: &SystemConfig) -> Result<Estimate> {
    if !(order > 0.0 && order.is_finite()) {
        return Err(Error::domain("mmse_moment", format!("order must be positive, got {order}")));
    }
    let rho_i = interference(config)?;
    let (n, rho1) = (config.n, config.rho1);
    let scale = order * rho1.powf(order);
    let mut led = Ledger::new();
    for k in 0..n {
        let kf = k as f64;
        led.add(scale, (lngamma(kf + order)? - lngamma(kf + 1.0)?).exp(), 0.0);
    }
    for (mm, den) in corrections(config) {
        let d = mm as f64 - n as f64;
        let g = g13(-(n as f64) - order, mm, config, rho_i)?;
        led.add(-scale * den * rho_i.powf(2.0 - d), g.value, g.error);
    }
    Ok(Estimate { value: led.value(), error: led.error() })
}

/// `E γ1^n` under MMSE combining, for real `n > 0`.
pub fn mmse_moment(n: f64, config: &SystemConfig) -> Result<f64> {
    Ok(moment(n, config)?.value)
}

/// Upper bound from the log-moments of both hops.
pub fn mmse_capacity_upper(config: &SystemConfig) -> Result<TheoremResult> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    let (c1, e1) = (led.value(), led.error());
    let c2 = hop_capacity(config.n, config.rho2)?;
    let mut lm = Ledger::new();
    log_moment(config, &mut lm)?;
    let l1 = lm.value();
    let l2 = hop_log_moment(config.n, config.rho2)?;
    let cross = HALF_LOG2E * (l2.exp() + l1.exp()).ln_1p();
    let e_cross = HALF_LOG2E * lm.error();
    let mut trail = led.into_trail();
    trail.extend(lm.into_trail());
    trail.push(TermRecord { label: "E ln gamma1".into(), value: l1, error: e_cross / HALF_LOG2E });
    TheoremResult::assemble(c1, c2, cross, e1 + e_cross + 1e-14, Method::AnalyticUpper, trail)
}

/// Lower bound from the means of both hops.
pub fn mmse_capacity_lower(config: &SystemConfig) -> Result<TheoremResult> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    let (c1, e1) = (led.value(), led.error());
    let c2 = hop_capacity(config.n, config.rho2)?;
    let mean = moment(1.0, config)?;
    let denom = 1.0 + mean.value + config.n as f64 * config.rho2;
    let cross = HALF_LOG2E * denom.ln();
    let e_cross = HALF_LOG2E * mean.error / denom;
    let mut trail = led.into_trail();
    trail.push(TermRecord { label: "E gamma1".into(), value: mean.value, error: mean.error });
    TheoremResult::assemble(c1, c2, cross, e1 + e_cross + 1e-14, Method::AnalyticLower, trail)
}
