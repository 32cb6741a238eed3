//! Figure presets and gnuplot sidecars.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use relaycap::precoding::Scheme;

use crate::run::{Eval, Point};
use crate::settings::{config_err, MethodChoice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    Rho1,
    Antennas,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub id: u32,
    pub title: &'static str,
    pub x: XAxis,
    pub points: Vec<Point>,
}

fn lin_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn sweep(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step).round() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

struct Builder {
    samples: u64,
    seed: u64,
    points: Vec<Point>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn add(&mut self, schemes: &[Scheme], methods: &[MethodChoice], n: usize, rho1: &[f64], rho2: Option<f64>, rhoi: &[f64]) {
        for &r1 in rho1 {
            for &scheme in schemes {
                for &choice in methods {
                    for eval in Eval::expand(choice, scheme) {
                        self.points.push(Point {
                            scheme,
                            eval,
                            n,
                            rho1_db: r1,
                            rho2_db: rho2.unwrap_or(r1),
                            rhoi_db: rhoi.to_vec(),
                            samples: self.samples,
                            seed: self.seed,
                        });
                    }
                }
            }
        }
    }
}

/// The sweep behind figure `id`.
pub fn preset(id: u32, samples: u64, seed: u64) -> anyhow::Result<Figure> {
    use MethodChoice::{Analytic, LargeN, Mc};
    let all = Scheme::ALL;
    let snr = sweep(0.0, 30.0, 5.0);
    let mut b = Builder { samples, seed, points: Vec::new() };
    let (title, x) = match id {
        2 | 3 | 4 => {
            let (scheme, pairs, title): (Scheme, &[(usize, usize)], _) = match id {
                2 => (Scheme::Mrc, &[(2, 1), (4, 1), (4, 2), (6, 2)], "MRC/MRT, rho_I = 0 dB"),
                3 => (Scheme::Zf, &[(3, 1), (4, 2), (6, 4), (6, 2)], "ZF/MRT, rho_I = 0 dB"),
                _ => (Scheme::Mmse, &[(2, 1), (4, 1), (4, 2), (6, 2)], "MMSE/MRT, rho_I = 0 dB"),
            };
            for &(n, m) in pairs {
                b.add(&[scheme], &[Mc, Analytic], n, &snr, None, &vec![0.0; m]);
            }
            (title, XAxis::Rho1)
        }
        5 => {
            let total = 10.0;
            let equal = vec![lin_to_db(total / 3.0); 3];
            let unequal = vec![lin_to_db(0.9 * total), lin_to_db(0.05 * total), lin_to_db(0.05 * total)];
            for n in [3, 4] {
                b.add(&[Scheme::Mmse], &[Mc], n, &snr, None, &equal);
                b.add(&[Scheme::Mmse], &[Mc], n, &snr, None, &unequal);
            }
            ("MMSE/MRT, M = 3, total INR 10 dB: equal vs 18:1:1 split", XAxis::Rho1)
        }
        6 => {
            for rhoi in [0.0, 10.0] {
                b.add(&all, &[Mc, Analytic], 4, &snr, None, &[rhoi, rhoi]);
            }
            ("N = 4, M = 2, rho_I = 0 and 10 dB", XAxis::Rho1)
        }
        7 => {
            for n in (6..=30).step_by(2) {
                b.add(&all, &[Mc], n, &[10.0], Some(10.0), &[0.0; 5]);
                b.add(&[Scheme::Mmse], &[LargeN], n, &[10.0], Some(10.0), &[0.0; 5]);
            }
            ("rho_1 = rho_2 = 10 dB, rho_I = 0 dB, M = 5", XAxis::Antennas)
        }
        8 => {
            b.add(&all, &[Mc, Analytic], 4, &sweep(0.0, 40.0, 5.0), Some(10.0), &[0.0, 0.0]);
            ("rho_2 = 10 dB, N = 4, M = 2, rho_I = 0 dB", XAxis::Rho1)
        }
        other => return Err(config_err(format!("no figure {other} (expected 2 to 8)"))),
    };
    Ok(Figure { id, title, x, points: b.points })
}

fn fmt_db(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.3}", x).trim_end_matches('0').trim_end_matches('.').to_string()).collect();
    parts.join(",")
}

/// Gnuplot command file with one inline data block per curve.
pub fn gnuplot(fig: &Figure, csv_name: &str, capacities: &[f64]) -> String {
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for (p, &c) in fig.points.iter().zip(capacities) {
        let mut label = format!("{} {}", p.scheme, p.eval.tag());
        if fig.x == XAxis::Rho1 {
            write!(label, " N={}", p.n).ok();
        }
        write!(label, " M={} rhoI=[{}] dB", p.rhoi_db.len(), fmt_db(&p.rhoi_db)).ok();
        let x = match fig.x {
            XAxis::Rho1 => p.rho1_db,
            XAxis::Antennas => p.n as f64,
        };
        if !series.contains_key(&label) {
            order.push(label.clone());
        }
        series.entry(label).or_default().push((x, c));
    }
    let mut s = String::new();
    writeln!(s, "# figure {}: {} (data from {csv_name})", fig.id, fig.title).ok();
    for (i, label) in order.iter().enumerate() {
        writeln!(s, "$s{i} << EOD").ok();
        for (x, y) in &series[label] {
            writeln!(s, "{x} {y}").ok();
        }
        writeln!(s, "EOD").ok();
    }
    let xlabel = match fig.x {
        XAxis::Rho1 => "rho_1 (dB)",
        XAxis::Antennas => "relay antennas N",
    };
    writeln!(s, "set title '{}' noenhanced", fig.title).ok();
    writeln!(s, "set xlabel '{xlabel}' noenhanced").ok();
    writeln!(s, "set ylabel 'ergodic capacity (bits/s/Hz)'").ok();
    writeln!(s, "set key left top noenhanced").ok();
    writeln!(s, "set grid").ok();
    let plots: Vec<String> = order
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let style = if label.contains(" mc ") { "points" } else { "lines" };
            format!("$s{i} using 1:2 with {style} title '{label}'")
        })
        .collect();
    writeln!(s, "plot {}", plots.join(", \\\n     ")).ok();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for id in 2..=8 {
            let f = preset(id, 1000, 1).unwrap();
            assert!(!f.points.is_empty());
            assert!(f.points.iter().all(|p| p.config().is_ok()), "figure {id}");
        }
        assert!(preset(1, 1000, 1).is_err());
        assert!(preset(9, 1000, 1).is_err());
    }

    #[test]
    fn sidecar_has_one_block_per_curve() {
        let f = preset(8, 1000, 1).unwrap();
        let caps = vec![1.0; f.points.len()];
        let g = gnuplot(&f, "f.csv", &caps);
        // three schemes, mc plus two bounds for mrc and mmse, exact for zf
        assert_eq!(g.matches("<< EOD").count(), 8);
        assert!(g.contains("plot $s0 using 1:2"));
    }
}
