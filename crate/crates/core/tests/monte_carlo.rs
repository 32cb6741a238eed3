use relaycap::analytic::{cdf_gamma_hop, zf_capacity_exact};
use relaycap::channel::SystemConfig;
use relaycap::mc::{empirical_cdf, estimate_capacity, estimate_capacity_with, sample_mean, Hop, Method};
use relaycap::precoding::Scheme;

#[test]
fn thread_count_does_not_change_the_estimate() {
    let cfg = SystemConfig::new(4, 10.0, 10.0, vec![1.0, 2.0]).unwrap();
    for scheme in Scheme::ALL {
        let one = estimate_capacity_with(scheme, &cfg, 10_000, 42, Some(1)).unwrap();
        for t in [2, 8] {
            let many = estimate_capacity_with(scheme, &cfg, 10_000, 42, Some(t)).unwrap();
            assert_eq!(one.value.to_bits(), many.value.to_bits(), "{scheme} threads={t}");
            assert_eq!(one.stderr.to_bits(), many.stderr.to_bits());
        }
        assert_eq!(one.method, Method::MonteCarlo);
        assert_eq!((one.samples, one.seed), (10_000, 42));
    }
}

#[test]
fn capacity_grows_with_source_snr() {
    for scheme in Scheme::ALL {
        let mut last = 0.0;
        for rho1 in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let cfg = SystemConfig::equal(3, 2, rho1, 10.0, 3.0).unwrap();
            let c = estimate_capacity(scheme, &cfg, 5_000, 9).unwrap().value;
            assert!(c > last, "{scheme} rho1={rho1}: {c} <= {last}");
            last = c;
        }
    }
}

#[test]
fn vanishing_snr_gives_vanishing_capacity() {
    let cfg = SystemConfig::equal(3, 1, 1e-12, 10.0, 1.0).unwrap();
    for scheme in Scheme::ALL {
        let c = estimate_capacity(scheme, &cfg, 5_000, 1).unwrap();
        assert!(c.value >= 0.0 && c.value < 1e-11, "{scheme}: {}", c.value);
    }
}

#[test]
fn zf_simulation_matches_exact_capacity() {
    for cfg in [SystemConfig::equal(4, 2, 10.0, 10.0, 5.0).unwrap(), SystemConfig::equal(2, 1, 10.0, 10.0, 1.0).unwrap()] {
        let mc = estimate_capacity(Scheme::Zf, &cfg, 100_000, 5).unwrap();
        let exact = zf_capacity_exact(&cfg).unwrap().value;
        assert!((mc.value - exact).abs() < 3.0 * mc.stderr, "{} vs {exact} ± {}", mc.value, mc.stderr);
    }
}

#[test]
fn second_hop_is_gamma() {
    let cfg = SystemConfig::equal(4, 2, 10.0, 3.0, 1.0).unwrap();
    let e = empirical_cdf(Scheme::Mrc, &cfg, Hop::Gamma2, 100_000, 6).unwrap();
    let ks = e.ks_distance(|x| cdf_gamma_hop(x, 4, 3.0)).unwrap();
    assert!(ks < 0.01, "ks = {ks}");
    let e = empirical_cdf(Scheme::Zf, &cfg, Hop::Gamma1, 100_000, 6).unwrap();
    let ks = e.ks_distance(|x| cdf_gamma_hop(x, 2, 10.0)).unwrap();
    assert!(ks < 0.01, "zf first hop ks = {ks}");
}

#[test]
fn zf_approaches_mmse_with_many_antennas() {
    let cfg = SystemConfig::equal(20, 2, 10.0, 10.0, 10.0).unwrap();
    let zf = estimate_capacity(Scheme::Zf, &cfg, 20_000, 8).unwrap().value;
    let mmse = estimate_capacity(Scheme::Mmse, &cfg, 20_000, 8).unwrap().value;
    assert!(mmse >= zf);
    assert!(mmse - zf < 0.01, "{mmse} vs {zf}");
}

#[test]
fn sample_count_limits() {
    let cfg = SystemConfig::equal(2, 1, 1.0, 1.0, 1.0).unwrap();
    assert!(estimate_capacity(Scheme::Mrc, &cfg, 999, 0).is_err());
    let odd = estimate_capacity(Scheme::Mrc, &cfg, 1_001, 0).unwrap();
    assert_eq!(odd.samples, 1_001);
    let m = sample_mean(Scheme::Mrc, &cfg, 3_000, 0, |s| s.gamma2).unwrap();
    assert!((m.mean - 2.0).abs() < 4.0 * m.stderr);
}
