//! Closed-form ergodic capacity expressions and bounds for the three relay
//! schemes, with the quadrature paths used to cross-check them.
//!
//! Every expression splits the capacity as `C = C_{γ1} + C_{γ2} − C_{γT}`
//! where `C_{γT}` is the capacity term of `γ1 + γ2` (or a Jensen bound on
//! it). [`TheoremResult`] keeps that breakdown together with a trail of
//! the special-function calls behind each term.

mod cdf;
mod mmse;
mod mrc;
mod oracles;
mod zf;

pub use cdf::{capacity_from_cdf, cdf_gamma1_mmse, cdf_gamma1_mrc, cdf_gamma_hop};
pub use mmse::{mmse_c_gamma1, mmse_capacity_lower, mmse_capacity_upper, mmse_log_moment, mmse_moment};
pub use mrc::{mrc_c_gamma1, mrc_capacity_lower, mrc_capacity_upper, mrc_log_moment, mrc_moment};
pub use oracles::{
    calibration, capacity_mgf_quadrature, mrc_term_g2, mrc_term_quadrature, zf_term_g2, zf_term_quadrature,
    Calibration, Normalisation,
};
pub use zf::{large_n_capacity, zf_capacity_exact};

use std::f64::consts::LN_2;

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::mc::{CapacityEstimate, Method};
use crate::precoding::Scheme;
use crate::specfun::{digamma, scaled_upper_gamma};
use crate::sum::CompensatedSum;

/// `1/(2 ln 2)`: nats of `E ln(1+γ)` to bits/s/Hz with the half-duplex
/// pre-log.
pub const HALF_LOG2E: f64 = 0.5 / LN_2;

/// One special-function call (or group of calls) behind a theorem value.
#[derive(Debug, Clone, PartialEq)]
pub struct TermRecord {
    pub label: String,
    pub value: f64,
    pub error: f64,
}

/// A closed-form capacity value with its decomposition.
///
/// `value = c_gamma1 + c_gamma2 − c_cross`; `c_cross` is the exact
/// `C_{γT}` for exact expressions and the bound term for bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremResult {
    pub value: f64,
    pub c_gamma1: f64,
    pub c_gamma2: f64,
    pub c_cross: f64,
    /// Absolute numeric error estimate of `value`.
    pub error: f64,
    pub method: Method,
    pub trail: Vec<TermRecord>,
}

impl TheoremResult {
    fn assemble(c_gamma1: f64, c_gamma2: f64, c_cross: f64, error: f64, method: Method, trail: Vec<TermRecord>) -> Result<Self> {
        let value = c_gamma1 + c_gamma2 - c_cross;
        if !value.is_finite() {
            return Err(Error::NumericInconsistency { what: "capacity", value });
        }
        Ok(Self { value, c_gamma1, c_gamma2, c_cross, error, method, trail })
    }

    pub fn estimate(&self) -> CapacityEstimate {
        CapacityEstimate { value: self.value.max(0.0), stderr: self.error, samples: 0, method: self.method, seed: 0 }
    }
}

/// Running sum of weighted terms with an error budget.
#[derive(Debug, Default)]
pub(crate) struct Ledger {
    sum: CompensatedSum,
    error: f64,
    trail: Vec<TermRecord>,
}

impl Ledger {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, weight: f64, value: f64, error: f64) {
        self.sum.add(weight * value);
        self.error += (weight * error).abs() + 4.0 * f64::EPSILON * (weight * value).abs();
    }

    pub(crate) fn note(&mut self, label: impl Into<String>, value: f64, error: f64) {
        self.trail.push(TermRecord { label: label.into(), value, error });
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum.value()
    }

    pub(crate) fn error(&self) -> f64 {
        self.error
    }

    pub(crate) fn into_trail(self) -> Vec<TermRecord> {
        self.trail
    }
}

/// Capacity term of a `Gamma(n, ρ)` SINR:
/// `e^{1/ρ} Σ_{k<n} ρ^{−k} Γ(−k, 1/ρ) / (2 ln 2)`.
pub fn hop_capacity(n: usize, rho: f64) -> Result<f64> {
    let z = 1.0 / rho;
    let mut s = CompensatedSum::new();
    for k in 0..n {
        s.add(rho.powi(-(k as i32)) * scaled_upper_gamma(-(k as f64), z)?);
    }
    Ok(HALF_LOG2E * s.value())
}

/// `E ln γ` for `γ ~ Gamma(n, ρ)`.
pub fn hop_log_moment(n: usize, rho: f64) -> Result<f64> {
    Ok(digamma(n as f64)? + rho.ln())
}

/// Evaluate the expression matching `scheme` and `method`.
///
/// `AnalyticExact` is only available for ZF; `QuadratureOracle` is the
/// exact MGF-route integral for every scheme.
pub fn evaluate(scheme: Scheme, method: Method, config: &SystemConfig) -> Result<TheoremResult> {
    match (scheme, method) {
        (Scheme::Zf, Method::AnalyticExact) => zf_capacity_exact(config),
        (Scheme::Mrc, Method::AnalyticUpper) => mrc_capacity_upper(config),
        (Scheme::Mrc, Method::AnalyticLower) => mrc_capacity_lower(config),
        (Scheme::Mmse, Method::AnalyticUpper) => mmse_capacity_upper(config),
        (Scheme::Mmse, Method::AnalyticLower) => mmse_capacity_lower(config),
        (Scheme::Zf, Method::AnalyticUpper | Method::AnalyticLower) => zf_capacity_exact(config),
        (_, Method::QuadratureOracle) => capacity_mgf_quadrature(scheme, config),
        (s, m) => Err(Error::InvalidConfig(format!("no {m} expression for {s}"))),
    }
}

/// `E γ1^n` for MRC or MMSE combining.
pub fn general_moment_gamma1(scheme: Scheme, n: f64, config: &SystemConfig) -> Result<f64> {
    match scheme {
        Scheme::Mrc => mrc_moment(n, config),
        Scheme::Mmse => mmse_moment(n, config),
        Scheme::Zf => Err(Error::InvalidConfig("moments are provided for mrc and mmse only".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_hop() {
        // e Γ(0,1) / (2 ln 2)
        let v = hop_capacity(1, 1.0).unwrap();
        assert!((v - std::f64::consts::E * 0.219_383_934_395_520_273_68 * HALF_LOG2E).abs() < 1e-15);
        let v = hop_log_moment(4, 10.0).unwrap();
        assert!((v - 3.558_702_761_4).abs() < 1e-8);
    }
}
