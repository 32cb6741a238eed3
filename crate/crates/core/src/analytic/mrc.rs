//! MRC/MRT bounds. Interferer powers may differ and repeat; they enter
//! through the characteristic coefficients of the power profile.

use crate::channel::{build_profile, InterferenceProfile, SystemConfig};
use crate::error::{Error, Result};
use crate::mc::Method;
use crate::precoding::Scheme;
use crate::specfun::{binomial, lngamma, tricomi_u_cached, tricomi_u_da_cached, tricomi_u_db_cached, Estimate, EULER_GAMMA};

use super::oracles::mrc_term_g2;
use super::{hop_capacity, hop_log_moment, Ledger, TheoremResult, HALF_LOG2E};

// relative error assigned to one Tricomi U value and to one derivative
const U_REL: f64 = 1e-12;
const DU_REL: f64 = 1e-8;

fn profile(config: &SystemConfig) -> Result<InterferenceProfile> {
    Scheme::Mrc.check(config)?;
    build_profile(&config.rho_i)
}

fn ln_weight(k: usize, l: usize, j: usize) -> Result<f64> {
    // ln[ C(k,l) Γ(j+l)/Γ(j) / k! ]
    Ok(binomial(k as u32, l as u32).ln() + lngamma((j + l) as f64)? - lngamma(j as f64)? - lngamma(k as f64 + 1.0)?)
}

fn c_gamma1(config: &SystemConfig, led: &mut Ledger) -> Result<()> {
    if config.m == 0 {
        let v = hop_capacity(config.n, config.rho1)?;
        led.add(1.0, v, 0.0);
        led.note("c_gamma1 interference-free", v, 0.0);
        return Ok(());
    }
    let p = profile(config)?;
    let rho1 = config.rho1;
    for k in 0..config.n {
        for l in 0..=k {
            for (rho, j, chi) in p.terms() {
                if chi == 0.0 {
                    continue;
                }
                let w = chi * (ln_weight(k, l, j)? + l as f64 * rho.ln() - k as f64 * rho1.ln()).exp();
                let g = mrc_term_g2(k, j, l, rho1, rho)?;
                led.add(HALF_LOG2E * w, g.value, g.error);
                led.note(format!("g2 c_gamma1 k={k} l={l} j={j} rho={rho}"), g.value, g.error);
            }
        }
    }
    Ok(())
}

/// MRC first-hop capacity term `(1/2ln2) E ln(1+γ1)`.
pub fn mrc_c_gamma1(config: &SystemConfig) -> Result<Estimate> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    Ok(Estimate { value: led.value(), error: led.error() })
}

fn log_moment(config: &SystemConfig, led: &mut Ledger) -> Result<()> {
    if config.m == 0 {
        led.add(1.0, hop_log_moment(config.n, config.rho1)?, 0.0);
        return Ok(());
    }
    let p = profile(config)?;
    let rho1 = config.rho1;
    for (rho, j, chi) in p.terms() {
        let z = 1.0 / rho;
        let b = 1.0 - j as f64;
        let u = tricomi_u_cached(0.0, b, z)?;
        let da = tricomi_u_da_cached(0.0, b, z)?;
        let db = tricomi_u_db_cached(0.0, b, z)?;
        led.add(chi, ((rho1 / rho).ln() - EULER_GAMMA) * u, 0.0);
        led.add(chi, da, DU_REL * da.abs());
        led.add(chi, db, DU_REL * db.abs());
        led.note(format!("dU/da(0,{b},{z})"), da, DU_REL * da.abs());
    }
    for k in 1..config.n {
        for l in 0..=k {
            for (rho, j, chi) in p.terms() {
                let w = chi * (ln_weight(k, l, j)? + lngamma(k as f64 + 1.0)? - (k as f64).ln()
                    + (l as f64 - k as f64) * rho.ln())
                .exp();
                let u = tricomi_u_cached(k as f64, (k + 1) as f64 - (j + l) as f64, 1.0 / rho)?;
                led.add(w, u, U_REL * u.abs());
            }
        }
    }
    Ok(())
}

/// `E ln γ1` under MRC combining.
pub fn mrc_log_moment(config: &SystemConfig) -> Result<Estimate> {
    let mut led = Ledger::new();
    log_moment(config, &mut led)?;
    Ok(Estimate { value: led.value(), error: led.error() })
}

/// `E γ1^n` under MRC combining, for real `n > 0`.
pub fn mrc_moment(n: f64, config: &SystemConfig) -> Result<f64> {
    Ok(moment(n, config)?.value)
}

fn moment(n: f64, config: &SystemConfig) -> Result<Estimate> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::domain("mrc_moment", format!("order must be positive, got {n}")));
    }
    let rho1 = config.rho1;
    if config.m == 0 {
        Scheme::Mrc.check(config)?;
        let nn = config.n as f64;
        return Ok(Estimate { value: (n * rho1.ln() + lngamma(nn + n)? - lngamma(nn)?).exp(), error: 0.0 });
    }
    let p = profile(config)?;
    let mut led = Ledger::new();
    for k in 0..config.n {
        let kn = k as f64 + n;
        for l in 0..=k {
            for (rho, j, chi) in p.terms() {
                let lw = ln_weight(k, l, j)? + l as f64 * rho.ln() - k as f64 * rho1.ln()
                    + n.ln()
                    + kn * (rho1 / rho).ln()
                    + lngamma(kn)?;
                let u = tricomi_u_cached(kn, kn + 1.0 - (j + l) as f64, 1.0 / rho)?;
                led.add(chi * lw.exp(), u, U_REL * u.abs());
            }
        }
    }
    Ok(Estimate { value: led.value(), error: led.error() })
}

/// Upper bound from Jensen on `E ln(1 + γ1 + γ2)` with the log-moments
/// of both hops.
pub fn mrc_capacity_upper(config: &SystemConfig) -> Result<TheoremResult> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    let (c1, e1) = (led.value(), led.error());
    let c2 = hop_capacity(config.n, config.rho2)?;
    let mut lm = Ledger::new();
    log_moment(config, &mut lm)?;
    let a1 = lm.value();
    let l2 = hop_log_moment(config.n, config.rho2)?;
    let cross = HALF_LOG2E * (l2.exp() + a1.exp()).ln_1p();
    let e_cross = HALF_LOG2E * lm.error();
    let mut trail = led.into_trail();
    trail.extend(lm.into_trail());
    trail.push(super::TermRecord { label: "E ln gamma1".into(), value: a1, error: e_cross / HALF_LOG2E });
    TheoremResult::assemble(c1, c2, cross, e1 + e_cross + 1e-14, Method::AnalyticUpper, trail)
}

/// Lower bound from Jensen on `E ln(1 + γ1 + γ2)` with the means of both
/// hops.
pub fn mrc_capacity_lower(config: &SystemConfig) -> Result<TheoremResult> {
    let mut led = Ledger::new();
    c_gamma1(config, &mut led)?;
    let (c1, e1) = (led.value(), led.error());
    let c2 = hop_capacity(config.n, config.rho2)?;
    let a2 = moment(1.0, config)?;
    let denom = 1.0 + config.n as f64 * config.rho2 + a2.value;
    let cross = HALF_LOG2E * denom.ln();
    let e_cross = HALF_LOG2E * a2.error / denom;
    let mut trail = led.into_trail();
    trail.push(super::TermRecord { label: "E gamma1".into(), value: a2.value, error: a2.error });
    TheoremResult::assemble(c1, c2, cross, e1 + e_cross + 1e-14, Method::AnalyticLower, trail)
}
