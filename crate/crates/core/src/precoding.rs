//! Relay combining (MRC, ZF, MMSE), MRT forwarding, and per-realization
//! SINR.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, RowDVector};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::channel::{ChannelRealization, SystemConfig};
use crate::error::{Error, Result};

/// Reciprocal-condition threshold below which a Gram matrix is treated as
/// singular.
pub const RCOND_LIMIT: f64 = 1e-12;

/// Receive combining at the relay; transmission is always MRT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Mrc,
    Zf,
    Mmse,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Mrc, Scheme::Zf, Scheme::Mmse];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Mrc => "mrc",
            Scheme::Zf => "zf",
            Scheme::Mmse => "mmse",
        }
    }

    /// Configuration checks shared by simulation and analysis.
    pub fn check(self, config: &SystemConfig) -> Result<()> {
        config.validate()?;
        if self == Scheme::Zf && config.m > 0 && config.n <= config.m {
            return Err(Error::InvalidConfig(format!(
                "zero forcing needs more antennas than interferers (n = {}, m = {})",
                config.n, config.m
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mrc" => Ok(Scheme::Mrc),
            "zf" => Ok(Scheme::Zf),
            "mmse" => Ok(Scheme::Mmse),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}' (expected mrc, zf or mmse)"))),
        }
    }
}

/// Per-hop and end-to-end SINR of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrBreakdown {
    pub scheme: Scheme,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_end: f64,
}

/// End-to-end SINR of variable-gain AF.
pub fn combine(gamma1: f64, gamma2: f64) -> f64 {
    gamma1 * gamma2 / (gamma1 + gamma2 + 1.0)
}

impl SinrBreakdown {
    fn new(scheme: Scheme, gamma1: f64, gamma2: f64) -> Self {
        Self { scheme, gamma1, gamma2, gamma_end: combine(gamma1, gamma2) }
    }
}

/// Relay matrix factors: `W = ω · steering · w1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayWeights {
    pub w1: RowDVector<Complex64>,
    pub omega2: f64,
    pub steering: DVector<Complex64>,
}

impl RelayWeights {
    pub fn matrix(&self) -> DMatrix<Complex64> {
        &self.steering * &self.w1 * Complex64::new(self.omega2.sqrt(), 0.0)
    }
}

fn norm2(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn gamma2(real: &ChannelRealization, config: &SystemConfig) -> f64 {
    config.rho2 * norm2(&real.h2)
}

fn check_dims(real: &ChannelRealization, config: &SystemConfig) -> Result<()> {
    let n = config.n;
    if real.h1.len() != n || real.h2.len() != n || real.h_i.nrows() != n || real.h_i.ncols() != config.m {
        return Err(Error::InvalidConfig("channel dimensions do not match the configuration".into()));
    }
    Ok(())
}

/// MRC/MRT: `γ1 = ‖h1‖²ρ1/(U1+1)` with `U1 = Σ|h1†h_Ii|²ρ_Ii/‖h1‖²`.
pub fn mrc_sinr(real: &ChannelRealization, config: &SystemConfig) -> Result<SinrBreakdown> {
    check_dims(real, config)?;
    let n1 = norm2(&real.h1);
    let u1 = if n1 > 0.0 {
        real.h_i
            .column_iter()
            .zip(&config.rho_i)
            .map(|(col, r)| real.h1.dotc(&col).norm_sqr() * r)
            .sum::<f64>()
            / n1
    } else {
        0.0
    };
    Ok(SinrBreakdown::new(Scheme::Mrc, n1 * config.rho1 / (u1 + 1.0), gamma2(real, config)))
}

fn cholesky_checked(m: DMatrix<Complex64>) -> Result<Cholesky<Complex64, Dyn>> {
    let chol = Cholesky::new(m).ok_or(Error::RankDeficient { rcond: 0.0 })?;
    let diag = chol.l_dirty().diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)));
    let rcond = if hi > 0.0 { (lo / hi).powi(2) } else { 0.0 };
    if !(rcond >= RCOND_LIMIT) {
        return Err(Error::RankDeficient { rcond });
    }
    Ok(chol)
}

// projection of h1 onto the orthogonal complement of the interference span
fn zf_residual(real: &ChannelRealization) -> Result<DVector<Complex64>> {
    if real.h_i.ncols() == 0 {
        return Ok(real.h1.clone());
    }
    let h = &real.h_i;
    let gram = h.adjoint() * h;
    let chol = cholesky_checked(gram)?;
    let x = chol.solve(&(h.adjoint() * &real.h1));
    Ok(&real.h1 - h * x)
}

/// ZF/MRT: `γ1 = ρ1 h1†P h1` with `P` the projector orthogonal to `H_I`.
pub fn zf_sinr(real: &ChannelRealization, config: &SystemConfig) -> Result<SinrBreakdown> {
    Scheme::Zf.check(config)?;
    check_dims(real, config)?;
    let r = zf_residual(real)?;
    Ok(SinrBreakdown::new(Scheme::Zf, config.rho1 * norm2(&r), gamma2(real, config)))
}

fn covariance(real: &ChannelRealization, config: &SystemConfig) -> DMatrix<Complex64> {
    let mut r = DMatrix::<Complex64>::identity(config.n, config.n);
    for (col, &p) in real.h_i.column_iter().zip(&config.rho_i) {
        r += (&col * col.adjoint()) * Complex64::new(p, 0.0);
    }
    r
}

/// MMSE/MRT: `γ1 = ρ1 h1†R⁻¹h1` with `R = I + Σ ρ_Ii h_Ii h_Ii†`.
///
/// Unequal interferer powers are accepted here.
pub fn mmse_sinr(real: &ChannelRealization, config: &SystemConfig) -> Result<SinrBreakdown> {
    check_dims(real, config)?;
    let chol = cholesky_checked(covariance(real, config))?;
    let x = chol.solve(&real.h1);
    let q = real.h1.dotc(&x).re.max(0.0);
    Ok(SinrBreakdown::new(Scheme::Mmse, config.rho1 * q, gamma2(real, config)))
}

/// SINR of `scheme` for one realization.
pub fn sinr(scheme: Scheme, real: &ChannelRealization, config: &SystemConfig) -> Result<SinrBreakdown> {
    match scheme {
        Scheme::Mrc => mrc_sinr(real, config),
        Scheme::Zf => zf_sinr(real, config),
        Scheme::Mmse => mmse_sinr(real, config),
    }
}

/// `|w1 h1|²ρ1 + Σ|w1 h_Ii|²ρ_Ii + ‖w1‖²`, the received power after combining.
pub fn combined_power(w1: &RowDVector<Complex64>, real: &ChannelRealization, config: &SystemConfig) -> f64 {
    let sig = (w1 * &real.h1)[(0, 0)].norm_sqr() * config.rho1;
    let interf: f64 = real
        .h_i
        .column_iter()
        .zip(&config.rho_i)
        .map(|(col, r)| (w1 * col)[(0, 0)].norm_sqr() * r)
        .sum();
    let noise: f64 = w1.iter().map(|z| z.norm_sqr()).sum();
    sig + interf + noise
}

/// Combining row, power factor and MRT steering for `scheme`.
pub fn build_weights(scheme: Scheme, real: &ChannelRealization, config: &SystemConfig) -> Result<RelayWeights> {
    scheme.check(config)?;
    check_dims(real, config)?;
    let w1: RowDVector<Complex64> = match scheme {
        Scheme::Mrc => {
            let n = norm2(&real.h1).sqrt();
            real.h1.adjoint() / Complex64::new(n, 0.0)
        }
        Scheme::Zf => {
            let r = zf_residual(real)?;
            let n = norm2(&r).sqrt();
            if n > 0.0 {
                r.adjoint() / Complex64::new(n, 0.0)
            } else {
                RowDVector::zeros(config.n)
            }
        }
        Scheme::Mmse => {
            let chol = cholesky_checked(covariance(real, config))?;
            chol.solve(&real.h1).adjoint()
        }
    };
    let p = combined_power(&w1, real, config);
    let omega2 = if p > 0.0 { config.rho2 / p } else { 0.0 };
    let h2n = norm2(&real.h2).sqrt();
    let steering = &real.h2 / Complex64::new(h2n, 0.0);
    Ok(RelayWeights { w1, omega2, steering })
}

/// End-to-end SINR from the relay matrix itself:
/// `|h2†W h1|²ρ1 / (Σ|h2†W h_Ii|²ρ_Ii + ‖h2†W‖² + 1)`.
pub fn generic_sinr(weights: &RelayWeights, real: &ChannelRealization, config: &SystemConfig) -> f64 {
    let w = weights.matrix();
    let g = real.h2.adjoint() * w;
    let sig = (&g * &real.h1)[(0, 0)].norm_sqr() * config.rho1;
    let interf: f64 = real
        .h_i
        .column_iter()
        .zip(&config.rho_i)
        .map(|(col, r)| (&g * col)[(0, 0)].norm_sqr() * r)
        .sum();
    let fwd: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    sig / (interf + fwd + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(h1: Vec<f64>, h2: Vec<f64>, hi: Vec<f64>, m: usize) -> ChannelRealization {
        let n = h1.len();
        ChannelRealization {
            h1: DVector::from_iterator(n, h1.into_iter().map(c)),
            h2: DVector::from_iterator(n, h2.into_iter().map(c)),
            h_i: DMatrix::from_iterator(n, m, hi.into_iter().map(c)),
        }
    }

    #[test]
    fn scalar_mrc() {
        let cfg = SystemConfig::new(1, 10.0, 10.0, vec![1.0]).unwrap();
        let r = real(vec![1.0], vec![1.0], vec![1.0], 1);
        let s = mrc_sinr(&r, &cfg).unwrap();
        assert_eq!(s.gamma1, 5.0);
        assert_eq!(s.gamma2, 10.0);
        assert!((s.gamma_end - 3.125).abs() < 1e-15);
        let m = mmse_sinr(&r, &cfg).unwrap();
        assert!((m.gamma1 - 5.0).abs() < 1e-14);
    }

    #[test]
    fn zf_projection_examples() {
        let cfg = SystemConfig::new(2, 10.0, 10.0, vec![1.0]).unwrap();
        let r = real(vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], 1);
        assert!((zf_sinr(&r, &cfg).unwrap().gamma1 - 10.0).abs() < 1e-14);
        let r = real(vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], 1);
        assert!(zf_sinr(&r, &cfg).unwrap().gamma1.abs() < 1e-14);
        let bad = SystemConfig::new(1, 10.0, 10.0, vec![1.0]).unwrap();
        assert!(zf_sinr(&real(vec![1.0], vec![1.0], vec![1.0], 1), &bad).is_err());
    }

    #[test]
    fn rank_deficient_interference() {
        let cfg = SystemConfig::new(3, 10.0, 10.0, vec![1.0, 1.0]).unwrap();
        let r = real(vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0], 2);
        assert!(matches!(zf_sinr(&r, &cfg), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn no_interference_baseline() {
        let cfg = SystemConfig::new(2, 3.0, 5.0, vec![]).unwrap();
        let r = ChannelRealization {
            h1: dvector![Complex64::new(0.3, 0.4), Complex64::new(1.0, -1.0)],
            h2: dvector![c(1.0), c(2.0)],
            h_i: DMatrix::zeros(2, 0),
        };
        let want = 3.0 * (0.25 + 2.0);
        for s in Scheme::ALL {
            assert!((sinr(s, &r, &cfg).unwrap().gamma1 - want).abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("MMSE".parse::<Scheme>().unwrap(), Scheme::Mmse);
        assert!("foo".parse::<Scheme>().is_err());
        assert_eq!(Scheme::Zf.to_string(), "zf");
    }
}
