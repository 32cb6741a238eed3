//! Operating points, channel draws and interference power profiles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// One operating point. Every power is a ratio to the noise power.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Relay antennas.
    pub n: usize,
    /// Interferers.
    pub m: usize,
    /// Source-to-relay SNR.
    pub rho1: f64,
    /// Relay-to-destination SNR.
    pub rho2: f64,
    /// Per-interferer INR at the relay, `m` entries.
    pub rho_i: Vec<f64>,
}

impl SystemConfig {
    pub fn new(n: usize, rho1: f64, rho2: f64, rho_i: Vec<f64>) -> Result<Self> {
        let c = Self { n, m: rho_i.len(), rho1, rho2, rho_i };
        c.validate()?;
        Ok(c)
    }

    /// `m` interferers of equal power `rho_i`.
    pub fn equal(n: usize, m: usize, rho1: f64, rho2: f64, rho_i: f64) -> Result<Self> {
        Self::new(n, rho1, rho2, vec![rho_i; m])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("the relay needs at least one antenna".into()));
        }
        if self.rho_i.len() != self.m {
            return Err(Error::InvalidConfig(format!(
                "{} interferer powers given for m = {}",
                self.rho_i.len(),
                self.m
            )));
        }
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.rho1) || !ok(self.rho2) {
            return Err(Error::InvalidConfig(format!(
                "SNRs must be positive and finite (rho1 = {}, rho2 = {})",
                self.rho1, self.rho2
            )));
        }
        if let Some(bad) = self.rho_i.iter().find(|v| !ok(**v)) {
            return Err(Error::InvalidConfig(format!("interferer powers must be positive and finite, got {bad}")));
        }
        Ok(())
    }

    /// The common interferer power when all are equal (`None` for `m = 0`
    /// or unequal powers).
    pub fn common_interference(&self) -> Option<f64> {
        let first = *self.rho_i.first()?;
        self.rho_i.iter().all(|v| *v == first).then_some(first)
    }

    pub fn total_interference(&self) -> f64 {
        self.rho_i.iter().sum()
    }
}

/// One draw of the three channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Source to relay, `n × 1`.
    pub h1: DVector<Complex64>,
    /// Relay to destination, `n × 1`.
    pub h2: DVector<Complex64>,
    /// Interferers to relay, `n × m` (one column per interferer).
    pub h_i: DMatrix<Complex64>,
}

impl ChannelRealization {
    pub fn is_finite(&self) -> bool {
        self.h1.iter().chain(self.h2.iter()).chain(self.h_i.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn cn01<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draw the channels for sample `index` of the stream `seed`.
///
/// The draw depends only on `(seed, index)` and the dimensions, so any
/// partition of the index range over threads reproduces the same samples.
pub fn sample_channels(config: &SystemConfig, seed: u64, index: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = config.n;
    let h1 = DVector::from_fn(n, |_, _| cn01(&mut rng));
    let h2 = DVector::from_fn(n, |_, _| cn01(&mut rng));
    let h_i = DMatrix::from_fn(n, config.m, |_, _| cn01(&mut rng));
    ChannelRealization { h1, h2, h_i }
}

/// Interferer powers grouped into distinct values with their
/// characteristic coefficients.
///
/// The coefficients are defined by the partial-fraction expansion
/// `Π_l (1+ρ_l s)^{−τ_l} = Σ_i Σ_{j≤τ_i} χ_{i,j} (1+ρ_i s)^{−j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceProfile {
    /// The diagonal of `D` as given.
    pub powers: Vec<f64>,
    /// Distinct powers in decreasing order.
    pub distinct: Vec<f64>,
    /// Multiplicity of each distinct power.
    pub multiplicity: Vec<usize>,
    /// `chi[i][j-1]` is `χ_{i,j}`.
    pub chi: Vec<Vec<f64>>,
}

impl InterferenceProfile {
    /// Number of distinct powers, `ρ(D)`.
    pub fn rank(&self) -> usize {
        self.distinct.len()
    }

    /// Iterate `(ρ_i, j, χ_{i,j})` over all coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (f64, usize, f64)> + '_ {
        self.distinct
            .iter()
            .zip(&self.chi)
            .flat_map(|(&r, row)| row.iter().enumerate().map(move |(j, &c)| (r, j + 1, c)))
    }

    /// Evaluate the partial-fraction side at `s`.
    pub fn expansion(&self, s: f64) -> f64 {
        self.terms().map(|(r, j, c)| c * (1.0 + r * s).powi(-(j as i32))).sum()
    }

    /// Evaluate the product side at `s`.
    pub fn product(&self, s: f64) -> f64 {
        self.distinct
            .iter()
            .zip(&self.multiplicity)
            .map(|(&r, &t)| (1.0 + r * s).powi(-(t as i32)))
            .product()
    }
}

/// Group interferer powers (exact equality) and compute `χ_{i,j}`.
pub fn build_profile(rho_i: &[f64]) -> Result<InterferenceProfile> {
    if let Some(bad) = rho_i.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidConfig(format!("interferer powers must be positive and finite, got {bad}")));
    }
    let mut sorted = rho_i.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut distinct: Vec<f64> = Vec::new();
    let mut multiplicity: Vec<usize> = Vec::new();
    for v in sorted {
        if distinct.last() == Some(&v) {
            *multiplicity.last_mut().unwrap() += 1;
        } else {
            distinct.push(v);
            multiplicity.push(1);
        }
    }
    let chi = (0..distinct.len()).map(|i| coefficients(&distinct, &multiplicity, i)).collect();
    Ok(InterferenceProfile { powers: rho_i.to_vec(), distinct, multiplicity, chi })
}

// With u = 1 + ρ_i s the product is u^{−τ_i} g(u); χ_{i,j} is the
// coefficient of u^{τ_i − j} in the Taylor series of g at u = 0.
fn coefficients(distinct: &[f64], mult: &[usize], i: usize) -> Vec<f64> {
    let tau = mult[i];
    let mut series = vec![0.0; tau];
    series[0] = 1.0;
    for (l, (&rl, &tl)) in distinct.iter().zip(mult).enumerate() {
        if l == i {
            continue;
        }
        // ((1−r) + r u)^{−τ_l} = (1−r)^{−τ_l} (1 + c u)^{−τ_l}, c = r/(1−r)
        let r = rl / distinct[i];
        let c = r / (1.0 - r);
        let lead = (1.0 - r).powi(-(tl as i32));
        let mut factor = vec![0.0; tau];
        let mut coef = lead;
        for (k, f) in factor.iter_mut().enumerate() {
            *f = coef;
            coef *= -(tl as f64 + k as f64) / (k as f64 + 1.0) * c;
        }
        let mut next = vec![0.0; tau];
        for (a, &x) in series.iter().enumerate() {
            for (b, &y) in factor.iter().enumerate().take(tau - a) {
                next[a + b] += x * y;
            }
        }
        series = next;
    }
    // χ_{i,j} = series[τ − j]
    (1..=tau).map(|j| series[tau - j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        let p = build_profile(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(p.distinct, vec![1.0]);
        assert_eq!(p.multiplicity, vec![3]);
        assert_eq!(p.chi, vec![vec![0.0, 0.0, 1.0]]);

        let p = build_profile(&[1.0, 2.0]).unwrap();
        assert_eq!(p.distinct, vec![2.0, 1.0]);
        assert!((p.chi[0][0] - 2.0).abs() < 1e-14);
        assert!((p.chi[1][0] + 1.0).abs() < 1e-14);

        let p = build_profile(&[2.0, 1.0, 1.0]).unwrap();
        assert!((p.chi[0][0] - 4.0).abs() < 1e-13);
        assert!((p.chi[1][0] + 2.0).abs() < 1e-13);
        assert!((p.chi[1][1] + 1.0).abs() < 1e-13);
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(0, 1.0, 1.0, vec![]).is_err());
        assert!(SystemConfig::new(2, -1.0, 1.0, vec![]).is_err());
        assert!(SystemConfig::new(2, 1.0, 1.0, vec![0.0]).is_err());
        let c = SystemConfig::equal(4, 2, 10.0, 10.0, 1.0).unwrap();
        assert_eq!(c.common_interference(), Some(1.0));
        assert_eq!(SystemConfig::new(2, 1.0, 1.0, vec![1.0, 2.0]).unwrap().common_interference(), None);
    }

    #[test]
    fn draws_are_reproducible() {
        let c = SystemConfig::equal(3, 2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(sample_channels(&c, 7, 11), sample_channels(&c, 7, 11));
        assert_ne!(sample_channels(&c, 7, 11), sample_channels(&c, 7, 12));
        assert_ne!(sample_channels(&c, 8, 11), sample_channels(&c, 7, 11));
    }
}
