//! Exact ZF/MRT capacity and the large-antenna limit.
//!
//! After zero forcing both hops are Gamma distributed (orders `N − M` and
//! `N`), so the capacity is exact rather than a bound.

use crate::channel::SystemConfig;
use crate::error::Result;
use crate::mc::Method;
use crate::precoding::Scheme;
use crate::specfun::tricomi_u_cached;

use super::oracles::zf_term_g2;
use super::{hop_capacity, Ledger, TheoremResult, HALF_LOG2E};

const U_REL: f64 = 1e-12;

// Capacity of the dual hop with Gamma(n1, ρ1) and Gamma(n2, ρ2) SINRs.
fn dual_gamma(n1: usize, n2: usize, rho1: f64, rho2: f64, method: Method) -> Result<TheoremResult> {
    let c1 = hop_capacity(n1, rho1)?;
    let c2 = hop_capacity(n2, rho2)?;
    let mut led = Ledger::new();
    for (n, rho) in [(n1, rho1), (n2, rho2)] {
        for k in 0..n {
            let u = tricomi_u_cached(1.0, 1.0 - k as f64, 1.0 / rho)?;
            led.add(HALF_LOG2E, u, U_REL * u.abs());
        }
    }
    for k in 0..n1 {
        for j in 0..n2 {
            let g = zf_term_g2(k, j, rho1, rho2)?;
            led.add(-HALF_LOG2E * rho1 * rho2, g.value, g.error);
            led.note(format!("g2 cross k={k} j={j}"), g.value, g.error);
        }
    }
    let cross = led.value();
    let err = led.error() + 1e-14;
    TheoremResult::assemble(c1, c2, cross, err, method, led.into_trail())
}

/// Exact ergodic capacity of ZF/MRT; needs `N > M`.
///
/// Interferer powers do not enter: zero forcing removes them entirely.
pub fn zf_capacity_exact(config: &SystemConfig) -> Result<TheoremResult> {
    Scheme::Zf.check(config)?;
    dual_gamma(config.n - config.m, config.n, config.rho1, config.rho2, Method::AnalyticExact)
}

/// Large-antenna capacity: the interference-free dual hop with `N`
/// antennas on both sides, which ZF and MMSE approach as `N` grows.
pub fn large_n_capacity(config: &SystemConfig) -> Result<TheoremResult> {
    config.validate()?;
    dual_gamma(config.n, config.n, config.rho1, config.rho2, Method::AnalyticExact)
}
