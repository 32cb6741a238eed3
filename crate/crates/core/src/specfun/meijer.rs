//! Meijer G functions by numerical Mellin–Barnes integration along vertical
//! lines.
//!
//! The univariate function uses the convention
//!
//! ```text
//! G^{m,n}_{p,q}(z | a; b) = 1/(2πi) ∫ Π_{j≤m} Γ(b_j − s) Π_{k≤n} Γ(1 − a_k + s)
//!                                    / (Π_{j>m} Γ(1 − b_j + s) Π_{k>n} Γ(a_k − s)) z^s ds
//! ```
//!
//! and the two-variable function is
//!
//! ```text
//! G2(x, y) = 1/(2πi)² ∫∫ Γ(A + s + t) K₁(s) K₂(t) x^s y^t ds dt
//!          = ∫₀^∞ e^{−u} u^{A−1} G₁(xu) G₂(yu) du,
//! ```
//!
//! where `K₁`, `K₂` are the Mellin kernels of two univariate G functions and
//! `A` is the shared parameter.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

use super::gamma::lngamma_complex_unchecked;

const TAIL_RATIO: f64 = 1e-16;
const MAX_HALF_LENGTH: f64 = 2000.0;
const MIN_NODES: usize = 64;
const PER_PANEL: usize = 16;

/// Gamma-ratio kernel of a univariate Meijer G, without its argument.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinKernel {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MellinKernel {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let k = Self { m, n, a, b };
        k.validate()?;
        Ok(k)
    }

    /// `G^{1,1}_{1,1}(· | a; b)`.
    pub fn g11(a: f64, b: f64) -> Self {
        Self { m: 1, n: 1, a: vec![a], b: vec![b] }
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        if self.m > self.q() || self.n > self.p() {
            return Err(Error::domain(
                "meijer_g",
                format!("orders m={} n={} exceed q={} p={}", self.m, self.n, self.q(), self.p()),
            ));
        }
        if self.a.iter().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::domain("meijer_g", "non-finite parameter"));
        }
        let (lo, hi) = self.strip();
        if !(lo < hi) {
            return Err(Error::PoleSeparation { left: lo, right: hi });
        }
        if self.decay_rate() <= 0.0 {
            return Err(Error::unsupported(
                "meijer_g",
                format!("m+n−(p+q)/2 = {} gives no exponential decay on a vertical line", self.decay_rate()),
            ));
        }
        Ok(())
    }

    /// Open interval of `Re s` separating the left poles (from `Γ(1−a_k+s)`)
    /// from the right poles (from `Γ(b_j−s)`).
    pub fn strip(&self) -> (f64, f64) {
        let lo = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    /// Exponential decay rate `m + n − (p+q)/2` of the kernel in `|Im s|`
    /// (in units of `π`).
    pub fn decay_rate(&self) -> f64 {
        self.m as f64 + self.n as f64 - 0.5 * (self.p() + self.q()) as f64
    }

    /// `ln K(s)`, or `None` where a reciprocal gamma vanishes.
    pub fn ln_kernel(&self, s: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in &self.b[..self.m] {
            acc += lngamma_complex_unchecked(Complex64::new(*b, 0.0) - s);
        }
        for a in &self.a[..self.n] {
            acc += lngamma_complex_unchecked(Complex64::new(1.0 - a, 0.0) + s);
        }
        for b in &self.b[self.m..] {
            let arg = Complex64::new(1.0 - b, 0.0) + s;
            if is_pole(arg) {
                return None;
            }
            acc -= lngamma_complex_unchecked(arg);
        }
        for a in &self.a[self.n..] {
            let arg = Complex64::new(*a, 0.0) - s;
            if is_pole(arg) {
                return None;
            }
            acc -= lngamma_complex_unchecked(arg);
        }
        Some(acc)
    }

    fn ln_abs_real(&self, sigma: f64) -> f64 {
        self.ln_kernel(Complex64::new(sigma, 0.0)).map_or(f64::NEG_INFINITY, |v| v.re)
    }

    fn to_bits(&self, out: &mut Vec<u64>) {
        out.push(self.m as u64);
        out.push(self.n as u64);
        out.push(self.a.len() as u64);
        out.extend(self.a.iter().map(|v| v.to_bits()));
        out.extend(self.b.iter().map(|v| v.to_bits()));
    }
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Univariate Meijer G parameter block with its argument.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub kernel: MellinKernel,
    pub z: f64,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>, z: f64) -> Result<Self> {
        let kernel = MellinKernel::new(m, n, a, b)?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::domain("meijer_g", format!("argument must be positive, got {z}")));
        }
        Ok(Self { kernel, z })
    }

    pub(crate) fn cache_key(&self) -> Vec<u64> {
        let mut v = Vec::new();
        self.kernel.to_bits(&mut v);
        v.push(self.z.to_bits());
        v
    }
}

/// Two-variable Meijer G parameter block: shared parameter `A`, the two
/// per-variable kernels and the arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerG2Spec {
    pub shared: f64,
    pub first: MellinKernel,
    pub second: MellinKernel,
    pub x: f64,
    pub y: f64,
}

impl MeijerG2Spec {
    pub fn new(shared: f64, first: MellinKernel, second: MellinKernel, x: f64, y: f64) -> Result<Self> {
        first.validate()?;
        second.validate()?;
        if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
            return Err(Error::domain("meijer_g2", format!("arguments must be positive, got ({x}, {y})")));
        }
        if !shared.is_finite() {
            return Err(Error::domain("meijer_g2", "non-finite shared parameter"));
        }
        let (_, hi1) = first.strip();
        let (_, hi2) = second.strip();
        if shared + hi1 + hi2 <= 0.0 {
            return Err(Error::PoleSeparation { left: -shared, right: hi1 + hi2 });
        }
        Ok(Self { shared, first, second, x, y })
    }

    pub(crate) fn cache_key(&self) -> Vec<u64> {
        let mut v = vec![self.shared.to_bits()];
        self.first.to_bits(&mut v);
        self.second.to_bits(&mut v);
        v.push(self.x.to_bits());
        v.push(self.y.to_bits());
        v
    }
}

/// Quadrature rule along the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourRule {
    /// Gauss–Legendre panels with the given node count per panel.
    GaussLegendre { per_panel: usize },
    /// Composite trapezoid with a common step on every axis.
    Trapezoid,
}

/// Where and how a Mellin–Barnes integral is discretised.
///
/// `offsets` are the real parts of the contours, `half_lengths` the
/// truncation points in `|Im s|`, `nodes` the number of nodes on each
/// half-line. For the panel rule `breaks` holds the panel edges on
/// `[0, half_length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPlan {
    pub offsets: Vec<f64>,
    pub half_lengths: Vec<f64>,
    pub nodes: Vec<usize>,
    pub rule: ContourRule,
    pub breaks: Vec<f64>,
}

impl ContourPlan {
    /// Contour chosen from the integrand: offset at the real-axis saddle,
    /// panel widths bounded by the distance to the nearest pole, and
    /// truncation where the integrand falls below `1e-16` of its peak.
    pub fn for_spec(spec: &MeijerGSpec) -> Result<Self> {
        let k = &spec.kernel;
        let (lo, hi) = k.strip();
        let lnz = spec.z.ln();
        let sigma = minimise_1d(|s| k.ln_abs_real(s) + s * lnz, lo, hi);
        let d = (sigma - lo).min(hi - sigma);
        let f = |tau: f64| integrand(k, sigma, tau, lnz).norm();
        let peak = f(0.0).max(f(d.min(1.0)));
        let mut breaks = vec![0.0];
        let mut tau = 0.0;
        let mut quiet = 0;
        loop {
            let w = d.max(0.5 * tau).min(1.0);
            tau += w;
            breaks.push(tau);
            let tail = f(tau).max(f(tau - 0.5 * w));
            if tail <= TAIL_RATIO * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= 2 && breaks.len() > MIN_NODES / PER_PANEL {
                break;
            }
            if tau > MAX_HALF_LENGTH {
                return Err(Error::non_convergent(
                    "meijer_g",
                    format!("integrand tail {tail:e} above {:e} at |Im s| = {tau}", TAIL_RATIO * peak),
                ));
            }
        }
        let panels = breaks.len() - 1;
        Ok(Self {
            offsets: vec![sigma],
            half_lengths: vec![tau],
            nodes: vec![panels * PER_PANEL],
            rule: ContourRule::GaussLegendre { per_panel: PER_PANEL },
            breaks,
        })
    }

    /// Trapezoid plan for a two-variable G.
    pub fn for_spec2(spec: &MeijerG2Spec) -> Result<Self> {
        let (s1, s2) = saddle_2d(spec);
        let (lo1, hi1) = spec.first.strip();
        let (lo2, hi2) = spec.second.strip();
        let d = (s1 - lo1).min(hi1 - s1).min(s2 - lo2).min(hi2 - s2).min(spec.shared + s1 + s2);
        let mut h = (d / 6.0).min(0.25);
        let t1 = truncation(&spec.first, s1, spec.x.ln(), h)?;
        let t2 = truncation(&spec.second, s2, spec.y.ln(), h)?;
        h = h.min(t1 / MIN_NODES as f64).min(t2 / MIN_NODES as f64);
        let n1 = (t1 / h).ceil() as usize;
        let n2 = (t2 / h).ceil() as usize;
        Ok(Self {
            offsets: vec![s1, s2],
            half_lengths: vec![n1 as f64 * h, n2 as f64 * h],
            nodes: vec![n1, n2],
            rule: ContourRule::Trapezoid,
            breaks: Vec::new(),
        })
    }

    /// Same contour with twice the nodes.
    pub fn doubled(&self) -> Self {
        let mut p = self.clone();
        match p.rule {
            ContourRule::GaussLegendre { per_panel } => {
                p.rule = ContourRule::GaussLegendre { per_panel: 2 * per_panel };
            }
            ContourRule::Trapezoid => {}
        }
        p.nodes.iter_mut().for_each(|n| *n *= 2);
        p
    }

    /// The trapezoid plan re-expressed on Gauss–Legendre panels of unit
    /// width with 16 nodes each (an independent rule for the same contour).
    pub fn as_panels(&self) -> Self {
        let mut p = self.clone();
        let t = self.half_lengths.iter().copied().fold(0.0, f64::max);
        // shorten panels near the origin where the nearest pole sits
        p.breaks = vec![0.0];
        let mut tau = 0.0;
        while tau < t {
            let w = (0.1 + 0.5 * tau).min(0.5);
            tau = (tau + w).min(t);
            p.breaks.push(tau);
        }
        let panels = p.breaks.len() - 1;
        p.rule = ContourRule::GaussLegendre { per_panel: PER_PANEL };
        p.nodes = vec![panels * PER_PANEL; self.nodes.len()];
        p
    }
}

/// A value with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn integrand(k: &MellinKernel, sigma: f64, tau: f64, lnz: f64) -> Complex64 {
    let s = Complex64::new(sigma, tau);
    match k.ln_kernel(s) {
        Some(l) => (l + s * lnz).exp(),
        None => Complex64::new(0.0, 0.0),
    }
}

fn finite_bounds(lo: f64, hi: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + 40.0),
        (false, true) => (hi - 40.0, hi),
        (false, false) => (-20.0, 20.0),
    }
}

// golden-section search for the minimum of a function that is infinite at
// both (pole) endpoints
fn minimise_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let (lo, hi) = finite_bounds(lo, hi);
    let w = hi - lo;
    let margin = (1e-3 * w).min(1e-2);
    let (mut a, mut b) = (lo + margin, hi - margin);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-9 * w.max(1.0) {
            break;
        }
    }
    let s = 0.5 * (a + b);
    // never sit closer to a pole than a small fraction of the strip
    s.clamp(lo + 0.02 * w.min(1.0), hi - 0.02 * w.min(1.0))
}

fn saddle_2d(spec: &MeijerG2Spec) -> (f64, f64) {
    let (lo1, hi1) = spec.first.strip();
    let (lo2, hi2) = spec.second.strip();
    let (lnx, lny) = (spec.x.ln(), spec.y.ln());
    let a = spec.shared;
    let phi = |s1: f64, s2: f64| {
        let g = a + s1 + s2;
        if g <= 0.0 {
            return f64::INFINITY;
        }
        super::gamma::lngamma_unchecked(g) + spec.first.ln_abs_real(s1) + spec.second.ln_abs_real(s2) + s1 * lnx + s2 * lny
    };
    let (f1lo, f1hi) = finite_bounds(lo1, hi1);
    let (f2lo, f2hi) = finite_bounds(lo2, hi2);
    let mut s1 = f1hi - 0.5 * (f1hi - f1lo).min(1.0);
    let mut s2 = f2hi - 0.5 * (f2hi - f2lo).min(1.0);
    if a + s1 + s2 <= 0.0 {
        // move both toward their right poles until the shared gamma is admissible
        let need = -(a + s1 + s2);
        let room = (f1hi - s1) + (f2hi - s2);
        let frac = ((need + 0.5 * (room - need).max(0.0)) / room).min(0.99);
        s1 += frac * (f1hi - s1);
        s2 += frac * (f2hi - s2);
    }
    for _ in 0..30 {
        let old = (s1, s2);
        s1 = minimise_1d(|v| phi(v, s2), f1lo.max(-a - s2), f1hi);
        s2 = minimise_1d(|v| phi(s1, v), f2lo.max(-a - s1), f2hi);
        if (s1 - old.0).abs() + (s2 - old.1).abs() < 1e-8 {
            break;
        }
    }
    (s1, s2)
}

fn truncation(k: &MellinKernel, sigma: f64, lnz: f64, h: f64) -> Result<f64> {
    let f = |tau: f64| integrand(k, sigma, tau, lnz).norm();
    let peak = (0..8).map(|i| f(i as f64 * 0.25)).fold(0.0, f64::max);
    let step = h.max(0.25);
    let mut tau = 0.0;
    let mut quiet = 0.0;
    while quiet < 1.0 {
        tau += step;
        if f(tau) <= TAIL_RATIO * peak {
            quiet += step;
        } else {
            quiet = 0.0;
        }
        if tau > MAX_HALF_LENGTH {
            return Err(Error::non_convergent("meijer_g2", format!("kernel tail did not decay by |Im s| = {tau}")));
        }
    }
    Ok(tau)
}

thread_local! {
    static GL_NODES: std::cell::RefCell<std::collections::HashMap<usize, std::rc::Rc<(Vec<f64>, Vec<f64>)>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

fn gl(n: usize) -> std::rc::Rc<(Vec<f64>, Vec<f64>)> {
    GL_NODES.with(|m| m.borrow_mut().entry(n).or_insert_with(|| std::rc::Rc::new(gauss_legendre(n))).clone())
}

fn gl_panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], n: usize) -> (f64, f64) {
    let rule = gl(n);
    let (x, w) = (&rule.0, &rule.1);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for e in breaks.windows(2) {
        let (c, r) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        for (xi, wi) in x.iter().zip(w) {
            let v = f(c + r * xi) * wi * r;
            sum += v;
            abs += v.abs();
        }
    }
    (sum, abs)
}

/// Univariate Meijer G on the given contour.
pub fn meijer_g_with(spec: &MeijerGSpec, plan: &ContourPlan) -> Result<Estimate> {
    let ContourRule::GaussLegendre { per_panel } = plan.rule else {
        return Err(Error::domain("meijer_g", "univariate contours use the panel rule"));
    };
    let sigma = plan.offsets[0];
    let (lo, hi) = spec.kernel.strip();
    if !(sigma > lo && sigma < hi) {
        return Err(Error::PoleSeparation { left: lo, right: hi });
    }
    let lnz = spec.z.ln();
    let f = |tau: f64| integrand(&spec.kernel, sigma, tau, lnz).re;
    let (fine, abs) = gl_panels(f, &plan.breaks, per_panel);
    let (coarse, _) = gl_panels(f, &plan.breaks, (per_panel / 2).max(2));
    let t = *plan.breaks.last().unwrap();
    let tail = integrand(&spec.kernel, sigma, t, lnz).norm();
    let value = fine / PI;
    if !value.is_finite() {
        return Err(Error::non_convergent("meijer_g", "non-finite contour sum"));
    }
    let error = ((fine - coarse).abs() + 64.0 * f64::EPSILON * abs + tail) / PI;
    Ok(Estimate { value, error })
}

/// Univariate Meijer G on its automatically planned contour.
pub fn meijer_g(spec: &MeijerGSpec) -> Result<Estimate> {
    let plan = ContourPlan::for_spec(spec)?;
    meijer_g_with(spec, &plan)
}

/// Two-variable Meijer G on the given contour.
pub fn meijer_g2_with(spec: &MeijerG2Spec, plan: &ContourPlan) -> Result<Estimate> {
    let (s1, s2) = (plan.offsets[0], plan.offsets[1]);
    let (lo1, hi1) = spec.first.strip();
    let (lo2, hi2) = spec.second.strip();
    if !(s1 > lo1 && s1 < hi1) {
        return Err(Error::PoleSeparation { left: lo1, right: hi1 });
    }
    if !(s2 > lo2 && s2 < hi2) {
        return Err(Error::PoleSeparation { left: lo2, right: hi2 });
    }
    if spec.shared + s1 + s2 <= 0.0 {
        return Err(Error::PoleSeparation { left: -spec.shared, right: s1 + s2 });
    }
    match plan.rule {
        ContourRule::Trapezoid => g2_trapezoid(spec, plan),
        ContourRule::GaussLegendre { per_panel } => g2_panels(spec, plan, per_panel),
    }
}

/// Two-variable Meijer G on its automatically planned contour.
pub fn meijer_g2(spec: &MeijerG2Spec) -> Result<Estimate> {
    let plan = ContourPlan::for_spec2(spec)?;
    meijer_g2_with(spec, &plan)
}

fn kernel_row(k: &MellinKernel, sigma: f64, lnz: f64, taus: impl Iterator<Item = f64>) -> Vec<Complex64> {
    taus.map(|t| integrand(k, sigma, t, lnz)).collect()
}

fn g2_trapezoid(spec: &MeijerG2Spec, plan: &ContourPlan) -> Result<Estimate> {
    let (s1, s2) = (plan.offsets[0], plan.offsets[1]);
    let (n1, n2) = (plan.nodes[0], plan.nodes[1]);
    let h = plan.half_lengths[0] / n1 as f64;
    let n1i = n1 as i64;
    let k1 = kernel_row(&spec.first, s1, spec.x.ln(), (-n1i..=n1i).map(|i| i as f64 * h));
    let k2 = kernel_row(&spec.second, s2, spec.y.ln(), (0..=n2).map(|j| j as f64 * h));
    let base = spec.shared + s1 + s2;
    // shared gamma depends on i + j only
    let shared: Vec<Complex64> = (-n1i..=(n1i + n2 as i64))
        .map(|m| lngamma_complex_unchecked(Complex64::new(base, m as f64 * h)).exp())
        .collect();
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for (ii, a) in k1.iter().enumerate() {
        let i = ii as i64 - n1i;
        let mut row = Complex64::new(0.0, 0.0);
        let mut row_coarse = Complex64::new(0.0, 0.0);
        for (j, b) in k2.iter().enumerate() {
            let g = shared[(ii + j) as usize];
            let w = if j == 0 { 0.5 } else { 1.0 };
            let v = b * g * w;
            row += v;
            abs += (a * v).norm();
            if j % 2 == 0 {
                row_coarse += v;
            }
        }
        fine += a * row;
        if i % 2 == 0 {
            coarse += a * row_coarse;
        }
    }
    let scale = 2.0 / (4.0 * PI * PI);
    let value = scale * h * h * fine.re;
    let coarse = scale * 4.0 * h * h * coarse.re;
    if !value.is_finite() {
        return Err(Error::non_convergent("meijer_g2", "non-finite contour sum"));
    }
    let error = (value - coarse).abs() + 64.0 * f64::EPSILON * scale * h * h * abs;
    Ok(Estimate { value, error })
}

fn g2_panels(spec: &MeijerG2Spec, plan: &ContourPlan, per_panel: usize) -> Result<Estimate> {
    let (s1, s2) = (plan.offsets[0], plan.offsets[1]);
    let run = |n: usize| -> (f64, f64) {
        let rule = gl(n);
        let mut taus = Vec::new();
        let mut weights = Vec::new();
        for e in plan.breaks.windows(2) {
            let (c, r) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
            for (x, w) in rule.0.iter().zip(&rule.1) {
                taus.push(c + r * x);
                weights.push(w * r);
            }
        }
        let k1p = kernel_row(&spec.first, s1, spec.x.ln(), taus.iter().copied());
        let k1m = kernel_row(&spec.first, s1, spec.x.ln(), taus.iter().map(|t| -t));
        let k2 = kernel_row(&spec.second, s2, spec.y.ln(), taus.iter().copied());
        let base = spec.shared + s1 + s2;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (i, (&t1, &w1)) in taus.iter().zip(&weights).enumerate() {
            for (j, (&t2, &w2)) in taus.iter().zip(&weights).enumerate() {
                let gp = lngamma_complex_unchecked(Complex64::new(base, t1 + t2)).exp();
                let gm = lngamma_complex_unchecked(Complex64::new(base, t2 - t1)).exp();
                let v = (k1p[i] * gp + k1m[i] * gm) * k2[j] * (w1 * w2);
                sum += v;
                abs += v.norm();
            }
        }
        let scale = 2.0 / (4.0 * PI * PI);
        (scale * sum.re, scale * abs)
    };
    let (fine, abs) = run(per_panel);
    let (coarse, _) = run((per_panel / 2).max(2));
    Ok(Estimate { value: fine, error: (fine - coarse).abs() + 64.0 * f64::EPSILON * abs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exponential_reduction() {
        let spec = MeijerGSpec::new(1, 0, vec![], vec![0.0], 1.0).unwrap();
        let g = meijer_g(&spec).unwrap();
        assert!(rel(g.value, (-1.0f64).exp()) < 1e-12, "{g:?}");
    }

    #[test]
    fn binomial_reduction() {
        for alpha in 1..=6 {
            for &x in &[0.1, 1.0, 10.0] {
                let spec = MeijerGSpec::new(1, 1, vec![1.0 - alpha as f64], vec![0.0], x).unwrap();
                let g = meijer_g(&spec).unwrap();
                let want = super::super::gamma::gamma(alpha as f64).unwrap() * (1.0 + x).powi(-alpha);
                assert!(rel(g.value, want) < 1e-9, "alpha={alpha} x={x}: {} vs {want}", g.value);
            }
        }
    }

    #[test]
    fn g13_reference_values() {
        let cases = [
            (vec![-4.0, -3.0, -2.0], vec![-1.0, -3.0], 1.0, 0.385_389_449_292_776_297_36),
            (vec![-3.0, -2.0, -1.0], vec![-1.0, -2.0], 10.0, 0.009_201_464_254_470_845_167_9),
            (vec![-5.0, -3.0, -3.0], vec![-1.0, -4.0], 0.1, 68.590_794_016_917_114_918),
        ];
        for (a, b, z, want) in cases {
            let spec = MeijerGSpec::new(1, 3, a.clone(), b.clone(), z).unwrap();
            let g = meijer_g(&spec).unwrap();
            assert!(rel(g.value, want) < 1e-10, "{a:?};{b:?} at {z}: {g:?}");
        }
        let spec = MeijerGSpec::new(1, 2, vec![-3.0, -1.0], vec![-1.0, -2.0], 3.0).unwrap();
        assert!(rel(meijer_g(&spec).unwrap().value, 0.104_166_666_666_666_666_67) < 1e-10);
        let spec = MeijerGSpec::new(1, 1, vec![-5.0], vec![0.0], 0.1).unwrap();
        assert!(rel(meijer_g(&spec).unwrap().value, 67.736_871_606_453_289_707) < 1e-10);
    }

    #[test]
    fn doubling_stays_within_estimate() {
        let spec = MeijerGSpec::new(1, 3, vec![-4.0, -3.0, -2.0], vec![-1.0, -3.0], 1.0).unwrap();
        let plan = ContourPlan::for_spec(&spec).unwrap();
        assert!(plan.nodes[0] >= 64);
        let a = meijer_g_with(&spec, &plan).unwrap();
        let b = meijer_g_with(&spec, &plan.doubled()).unwrap();
        assert!((a.value - b.value).abs() <= a.error, "{a:?} {b:?}");
    }

    #[test]
    fn pole_separation_is_rejected() {
        // left pole family starts at 0.5, right family at 0
        let err = MeijerGSpec::new(1, 1, vec![1.5], vec![0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::PoleSeparation { .. }));
        assert!(MeijerGSpec::new(1, 1, vec![0.0], vec![0.0], -1.0).is_err());
        assert!(MeijerGSpec::new(2, 0, vec![], vec![0.0], 1.0).is_err());
    }

    #[test]
    fn bivariate_matches_laplace_integral() {
        // ∫ s e^{-s} (1+s)^{-2} ds = U(2, 1, 1)
        let spec = MeijerG2Spec::new(2.0, MellinKernel::g11(0.0, 0.0), MellinKernel::g11(0.0, 0.0), 1.0, 1.0).unwrap();
        let plan = ContourPlan::for_spec2(&spec).unwrap();
        let g = meijer_g2_with(&spec, &plan).unwrap();
        assert!(rel(g.value, 0.192_694_724_646_388_148_68) < 1e-10, "{g:?}");
        let d = meijer_g2_with(&spec, &plan.doubled()).unwrap();
        assert!((d.value - g.value).abs() <= g.error.max(1e-15), "{g:?} {d:?}");
        let p = meijer_g2_with(&spec, &plan.as_panels()).unwrap();
        assert!(rel(p.value, g.value) < 1e-9, "{p:?} {g:?}");
    }
}
