//! Quick identity and calibration suite.

use relaycap::analytic::{calibration, capacity_mgf_quadrature, zf_capacity_exact};
use relaycap::channel::{build_profile, sample_channels, SystemConfig};
use relaycap::precoding::{build_weights, generic_sinr, sinr, Scheme};
use relaycap::specfun::{gamma, gauss_2f1, meijer_g, tricomi_u, upper_incomplete_gamma, MeijerGSpec};

type Check = (&'static str, fn() -> relaycap::Result<f64>, f64);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn g11_reduction() -> relaycap::Result<f64> {
    let mut worst = 0.0f64;
    for alpha in 1..=6 {
        for x in [0.1, 1.0, 10.0] {
            let spec = MeijerGSpec::new(1, 1, vec![1.0 - alpha as f64], vec![0.0], x)?;
            worst = worst.max(rel(meijer_g(&spec)?.value, gamma(alpha as f64)? * (1.0 + x).powi(-alpha)));
        }
    }
    Ok(worst)
}

fn gamma_recursion() -> relaycap::Result<f64> {
    let mut worst = 0.0f64;
    for a in -3..=3 {
        let a = a as f64;
        for x in [0.1, 1.0, 10.0] {
            let rhs = a * upper_incomplete_gamma(a, x)? + x.powf(a) * (-x).exp();
            worst = worst.max(rel(upper_incomplete_gamma(a + 1.0, x)?, rhs));
        }
    }
    Ok(worst)
}

fn tricomi_power() -> relaycap::Result<f64> {
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.5] {
        for z in [0.3, 2.0, 9.0] {
            worst = worst.max(rel(tricomi_u(a, a + 1.0, z)?, z.powf(-a)));
        }
    }
    Ok(worst)
}

fn gauss_log() -> relaycap::Result<f64> {
    let mut worst = 0.0f64;
    for z in [-0.3, -1.0, -5.0, -40.0] {
        worst = worst.max(rel(gauss_2f1(1.0, 1.0, 2.0, z)?, -(-z as f64).ln_1p() / z));
    }
    Ok(worst)
}

fn g_calibration() -> relaycap::Result<f64> {
    Ok(calibration()?.max_rel_deviation)
}

fn partial_fractions() -> relaycap::Result<f64> {
    let p = build_profile(&[10.0, 1.0, 10.0, 0.5])?;
    let mut worst = 0.0f64;
    for s in [0.01, 0.5, 3.0, 40.0] {
        worst = worst.max(rel(p.expansion(s), p.product(s)));
    }
    Ok(worst)
}

fn sinr_equivalence() -> relaycap::Result<f64> {
    let cfg = SystemConfig::new(4, 10.0, 10.0, vec![1.0, 2.0])?;
    let mut worst = 0.0f64;
    for i in 0..500 {
        let real = sample_channels(&cfg, 1, i);
        for scheme in Scheme::ALL {
            let w = build_weights(scheme, &real, &cfg)?;
            worst = worst.max(rel(generic_sinr(&w, &real, &cfg), sinr(scheme, &real, &cfg)?.gamma_end));
        }
    }
    Ok(worst)
}

fn zf_exact_vs_quadrature() -> relaycap::Result<f64> {
    let cfg = SystemConfig::equal(4, 2, 10.0, 10.0, 1.0)?;
    Ok((zf_capacity_exact(&cfg)?.value - capacity_mgf_quadrature(Scheme::Zf, &cfg)?.value).abs())
}

const CHECKS: &[Check] = &[
    ("G(1,1;1,1) reduction", g11_reduction, 1e-9),
    ("incomplete gamma recursion", gamma_recursion, 1e-9),
    ("U(a, a+1, z) = z^-a", tricomi_power, 1e-9),
    ("2F1(1,1;2;z) logarithm", gauss_log, 1e-9),
    ("two-variable G calibration", g_calibration, 1e-6),
    ("interference partial fractions", partial_fractions, 1e-9),
    ("relay matrix SINR equivalence", sinr_equivalence, 1e-10),
    ("ZF closed form vs quadrature", zf_exact_vs_quadrature, 1e-6),
];

pub fn run() -> anyhow::Result<()> {
    let mut failed = 0;
    for (name, check, limit) in CHECKS {
        match check() {
            Ok(dev) if dev <= *limit => println!("ok    {name}: {dev:.2e} (limit {limit:.0e})"),
            Ok(dev) => {
                failed += 1;
                println!("FAIL  {name}: {dev:.2e} (limit {limit:.0e})");
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    if failed > 0 {
        return Err(relaycap::Error::NumericInconsistency { what: "selftest failures", value: failed as f64 }.into());
    }
    Ok(())
}
