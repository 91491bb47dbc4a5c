//! Quadrature verification of the Fourier-integral representations behind
//! the positive definite kernels.
//!
//! Each kernel equals the transform of an explicit nonnegative density:
//!
//! - Euler:     exp(x^2/(4 ln q)) / ((z e^{ix};q)_inf sqrt(2 ln(1/q)))
//!              = (1/sqrt(2 pi)) Int q^{a^2} A_q(-q^{2a} z) e^{-i a x} da
//! - Phi11:     (a z e^{ix};q)_inf exp(x^2/(2 ln q))
//!              / ((b e^{ix};q)_inf (z e^{ix};q)_inf sqrt(ln(1/q)))
//!              = (1/sqrt(2 pi)) Int (-b q^{a+1/2};q)_inf q^{a^2/2}
//!                1phi1(a; -b q^{a+1/2}; q, -z q^{a+1/2}) e^{-i a x} da
//! - Gaussian (Ramanujan) integral with w = c sqrt(q) e^{2ikx}, q = e^{-2k^2}:
//!              Int e^{-x^2+2mx} / |(w;q)_inf|^2 dx
//!              = sqrt(pi) e^{m^2} (-cq e^{2imk}, -conj(c)q e^{-2imk};q)_inf
//!                / (|c|^2 q; q)_inf
//!
//! Densities are evaluated through the positively rearranged series
//! sum_s coef_s q^{(a+s)^2} (and the q^{(a+s)^2/2} analogue), which stays
//! stable for large negative a where the textbook form overflows.

use crate::error::{Error, Result};
use crate::qkernel::{qpoch_inf, QBase, QComplex, TruncationPolicy};

const PI: f64 = std::f64::consts::PI;
/// Absolute tail budget for integration cutoffs.
const EPS_TAIL: f64 = 1e-20;
/// Density terms with Gaussian exponent beyond this are dropped per node.
const WINDOW_LOG: f64 = 80.0;

/// Quadrature rule selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Trapezoid,
    GaussLegendreComposite,
}

/// Integration controls. `cutoff <= 0` picks the certified automatic cutoff;
/// an explicit cutoff below the required one errors with the needed value.
/// `nodes` is the point budget per unit length: the Gauss-Legendre scheme
/// uses `nodes`-point panels of unit length, the trapezoid scheme uses
/// `nodes` subintervals per unit length.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub cutoff: f64,
    pub nodes: usize,
    pub scheme: Scheme,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            cutoff: 0.0,
            nodes: 64,
            scheme: Scheme::GaussLegendreComposite,
        }
    }
}

/// Closed form vs quadrature, with the sampled density minimum.
#[derive(Debug, Clone, Copy)]
pub struct TransformCheck {
    pub lhs: QComplex,
    pub rhs: QComplex,
    pub rel_err: f64,
    pub density_min: f64,
}

impl TransformCheck {
    fn new(lhs: QComplex, rhs: QComplex, density_min: f64) -> Self {
        let rel_err = (lhs - rhs).norm() / lhs.norm().max(1e-300);
        TransformCheck { lhs, rhs, rel_err, density_min }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut out = vec![(0.0, 0.0); n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(z) and its derivative
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        out[i] = (-z, w);
        out[n - 1 - i] = (z, w);
    }
    out
}

/// Nodes and weights covering [-cutoff, cutoff] for the given spec.
fn nodes_weights(cutoff: f64, spec: &QuadratureSpec) -> Vec<(f64, f64)> {
    let (a, b) = (-cutoff, cutoff);
    match spec.scheme {
        Scheme::GaussLegendreComposite => {
            let panels = ((b - a).ceil() as usize).max(1);
            let gl = gauss_legendre(spec.nodes.max(2));
            let h = (b - a) / panels as f64;
            let mut out = Vec::with_capacity(panels * gl.len());
            for p in 0..panels {
                let lo = a + h * p as f64;
                let mid = lo + 0.5 * h;
                for &(t, w) in &gl {
                    out.push((mid + 0.5 * h * t, 0.5 * h * w));
                }
            }
            out
        }
        Scheme::Trapezoid => {
            let steps = (((b - a) * spec.nodes as f64).ceil() as usize).max(2);
            let h = (b - a) / steps as f64;
            (0..=steps)
                .map(|i| {
                    let w = if i == 0 || i == steps { 0.5 * h } else { h };
                    (a + h * i as f64, w)
                })
                .collect()
        }
    }
}

/// Fixed-tree pairwise summation (deterministic, low roundoff).
fn pairwise_sum(v: &[QComplex]) -> QComplex {
    match v.len() {
        0 => QComplex::new(0.0, 0.0),
        1..=4 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// cutoff = max(Gaussian rule, geometric rule for the slow a -> -inf tail).
fn required_cutoff(ln_inv_qeff: f64, mu: f64) -> f64 {
    let gauss = (EPS_TAIL.recip().ln() / ln_inv_qeff).sqrt() + 2.0;
    let geo = if mu > 1e-12 {
        (EPS_TAIL * (1.0 - mu)).ln() / mu.ln()
    } else {
        0.0
    };
    gauss.max(geo)
}

fn resolve_cutoff(spec: &QuadratureSpec, needed: f64) -> Result<f64> {
    if spec.cutoff <= 0.0 {
        Ok(needed)
    } else if spec.cutoff < needed {
        Err(Error::CutoffInsufficient { cutoff: spec.cutoff, needed })
    } else {
        Ok(spec.cutoff)
    }
}

/// Rearranged density sum_s coef_s e^{g (a+s)^2}, g = ln q (Euler) or
/// (ln q)/2 (1phi1); only the window |a+s| <= W contributes at a node.
struct RearrangedDensity {
    coef: Vec<QComplex>,
    g: f64, // negative Gaussian exponent rate
    window: f64,
}

impl RearrangedDensity {
    fn eval(&self, alpha: f64) -> QComplex {
        let lo = (-alpha - self.window).ceil().max(0.0) as usize;
        let hi_f = (-alpha + self.window).floor();
        let mut acc = QComplex::new(0.0, 0.0);
        if hi_f < lo as f64 {
            return acc;
        }
        let hi = (hi_f as usize).min(self.coef.len().saturating_sub(1));
        for s in lo..=hi {
            let t = alpha + s as f64;
            acc += self.coef[s] * (self.g * t * t).exp();
        }
        acc
    }
}

fn euler_density(z: QComplex, qb: QBase, s_max: usize) -> Result<RearrangedDensity> {
    let q = qb.get();
    let mut coef = Vec::with_capacity(s_max + 1);
    let mut c = QComplex::new(1.0, 0.0); // z^s / (q;q)_s
    let mut qs = 1.0;
    coef.push(c);
    for _ in 0..s_max {
        qs *= q;
        c *= z / (1.0 - qs);
        coef.push(c);
    }
    let window = (WINDOW_LOG / -qb.ln()).sqrt();
    Ok(RearrangedDensity { coef, g: qb.ln(), window })
}

fn phi11_density(a: f64, b: f64, z: f64, qb: QBase, s_max: usize) -> Result<RearrangedDensity> {
    let q = qb.get();
    // u_n = (a;q)_n z^n / (q;q)_n, w_m = b^m / (q;q)_m, h_s = conv(u, w)
    let mut u = Vec::with_capacity(s_max + 1);
    let mut w = Vec::with_capacity(s_max + 1);
    let mut un = 1.0;
    let mut wm = 1.0;
    let mut qn = 1.0; // q^n
    u.push(un);
    w.push(wm);
    for _ in 0..s_max {
        un *= z * (1.0 - a * qn) / (1.0 - qn * q);
        wm *= b / (1.0 - qn * q);
        qn *= q;
        u.push(un);
        w.push(wm);
    }
    let coef = (0..=s_max)
        .map(|s| {
            let h: f64 = (0..=s).map(|n| u[n] * w[s - n]).sum();
            QComplex::new(h, 0.0)
        })
        .collect();
    let window = (2.0 * WINDOW_LOG / -qb.ln()).sqrt();
    Ok(RearrangedDensity { coef, g: 0.5 * qb.ln(), window })
}

fn check_q(q: f64) -> Result<QBase> {
    QBase::new(q)
}

/// Euler kernel transform check at one (z, q, x).
pub fn verify_euler_transform(
    z: QComplex,
    q: f64,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<TransformCheck> {
    let qb = check_q(q)?;
    if !(z.norm() < 1.0) {
        return Err(Error::DomainViolation(format!(
            "euler transform needs |z| < 1, got {}",
            z.norm()
        )));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let lnq = qb.ln();
    let needed = required_cutoff(-lnq, z.norm());
    let cutoff = resolve_cutoff(quad, needed)?;

    let policy = TruncationPolicy::default();
    let eixz = QComplex::new(0.0, x).exp() * z;
    let lhs = (x * x / (4.0 * lnq)).exp()
        / (qpoch_inf(eixz, qb, &policy)?.value * (-2.0 * lnq).sqrt());

    let window = (WINDOW_LOG / -lnq).sqrt();
    let s_max = (cutoff + window).ceil() as usize + 4;
    let dens = euler_density(z, qb, s_max)?;
    let pts = nodes_weights(cutoff, quad);
    let mut density_min = f64::INFINITY;
    let vals: Vec<QComplex> = pts
        .iter()
        .map(|&(alpha, w)| {
            let rho = dens.eval(alpha);
            density_min = density_min.min(rho.re);
            rho * QComplex::new(0.0, -alpha * x).exp() * w
        })
        .collect();
    let rhs = pairwise_sum(&vals) / (2.0 * PI).sqrt();
    Ok(TransformCheck::new(lhs, rhs, density_min))
}

/// 1phi1 kernel transform check at one (a, b, z, q, x).
pub fn verify_phi11_transform(
    a: f64,
    b: f64,
    z: f64,
    q: f64,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<TransformCheck> {
    let qb = check_q(q)?;
    for (name, v, lo) in [("a", a, -1.0), ("b", b, 0.0), ("z", z, 0.0)] {
        if !(v.is_finite() && v >= lo && v < 1.0) {
            return Err(Error::DomainViolation(format!(
                "phi11 transform needs {name} in [{lo}, 1), got {v}"
            )));
        }
    }
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let lnq = qb.ln();
    let needed = required_cutoff(-0.5 * lnq, b.max(z));
    let cutoff = resolve_cutoff(quad, needed)?;

    let policy = TruncationPolicy::default();
    let eix = QComplex::new(0.0, x).exp();
    let lhs = qpoch_inf(eix * (a * z), qb, &policy)?.value * (x * x / (2.0 * lnq)).exp()
        / (qpoch_inf(eix * b, qb, &policy)?.value
            * qpoch_inf(eix * z, qb, &policy)?.value
            * (-lnq).sqrt());

    let window = (2.0 * WINDOW_LOG / -lnq).sqrt();
    let s_max = (cutoff + window).ceil() as usize + 4;
    let dens = phi11_density(a, b, z, qb, s_max)?;
    let pts = nodes_weights(cutoff, quad);
    let mut density_min = f64::INFINITY;
    let vals: Vec<QComplex> = pts
        .iter()
        .map(|&(alpha, w)| {
            let rho = dens.eval(alpha);
            density_min = density_min.min(rho.re);
            rho * QComplex::new(0.0, -alpha * x).exp() * w
        })
        .collect();
    let rhs = pairwise_sum(&vals) / (2.0 * PI).sqrt();
    Ok(TransformCheck::new(lhs, rhs, density_min))
}

/// Ramanujan Gaussian integral check at one (c, k, m), a = c, b = conj(c).
pub fn verify_ramanujan_integral(
    c: QComplex,
    k: f64,
    m: QComplex,
    quad: &QuadratureSpec,
) -> Result<TransformCheck> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::DomainViolation(format!("k must be > 0, got {k}")));
    }
    if !(c.norm() < 1.0) {
        return Err(Error::DomainViolation(format!(
            "ramanujan integral needs |c| < 1, got {}",
            c.norm()
        )));
    }
    if !(m.re.is_finite() && m.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let q = (-2.0 * k * k).exp();
    let qb = check_q(q)?;
    let needed = EPS_TAIL.recip().ln().sqrt() + m.norm() + 2.0;
    let cutoff = resolve_cutoff(quad, needed)?;

    let policy = TruncationPolicy::default();
    let i2mk = QComplex::new(0.0, 2.0 * k) * m;
    let lhs = PI.sqrt()
        * (m * m).exp()
        * qpoch_inf(-c * q * i2mk.exp(), qb, &policy)?.value
        * qpoch_inf(-c.conj() * q * (-i2mk).exp(), qb, &policy)?.value
        / qpoch_inf(QComplex::new(c.norm_sqr() * q, 0.0), qb, &policy)?.value;

    let sq = q.sqrt();
    let pts = nodes_weights(cutoff, quad);
    let mut density_min = f64::INFINITY;
    let vals: Result<Vec<QComplex>> = pts
        .iter()
        .map(|&(xv, w)| {
            let arg = c * sq * QComplex::new(0.0, 2.0 * k * xv).exp();
            let p = qpoch_inf(arg, qb, &policy)?.value;
            let density = (-xv * xv + 2.0 * m.re * xv).exp() / p.norm_sqr();
            density_min = density_min.min(density);
            Ok(density * QComplex::new(0.0, 2.0 * m.im * xv).exp() * w)
        })
        .collect();
    let rhs = pairwise_sum(&vals?);
    Ok(TransformCheck::new(lhs, rhs, density_min))
}

/// Density family selector for [`reconstruct_density`].
#[derive(Debug, Clone, Copy)]
pub enum DensityFamily {
    Euler { z: f64, q: f64 },
    Phi11 { a: f64, b: f64, z: f64, q: f64 },
    Gauss { c: f64, k: f64, m: f64 },
}

/// Samples the Bochner density of the selected transform at the given
/// abscissas; nonnegative inside the hypothesis domains.
pub fn reconstruct_density(family: &DensityFamily, alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite);
    }
    let amax = alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    match *family {
        DensityFamily::Euler { z, q } => {
            let qb = check_q(q)?;
            if !(z.abs() < 1.0) {
                return Err(Error::DomainViolation(format!("|z| < 1 required, got {z}")));
            }
            let window = (WINDOW_LOG / -qb.ln()).sqrt();
            let s_max = (amax + window).ceil() as usize + 4;
            let dens = euler_density(QComplex::new(z, 0.0), qb, s_max)?;
            Ok(alphas.iter().map(|&a| dens.eval(a).re).collect())
        }
        DensityFamily::Phi11 { a, b, z, q } => {
            let qb = check_q(q)?;
            for (name, v, lo) in [("a", a, -1.0), ("b", b, 0.0), ("z", z, 0.0)] {
                if !(v.is_finite() && v >= lo && v < 1.0) {
                    return Err(Error::DomainViolation(format!(
                        "{name} in [{lo}, 1) required, got {v}"
                    )));
                }
            }
            let window = (2.0 * WINDOW_LOG / -qb.ln()).sqrt();
            let s_max = (amax + window).ceil() as usize + 4;
            let dens = phi11_density(a, b, z, qb, s_max)?;
            Ok(alphas.iter().map(|&al| dens.eval(al).re).collect())
        }
        DensityFamily::Gauss { c, k, m } => {
            if !(k.is_finite() && k > 0.0 && c.abs() < 1.0 && m.is_finite()) {
                return Err(Error::DomainViolation(
                    "gauss density needs k > 0, |c| < 1, finite m".into(),
                ));
            }
            let q = (-2.0 * k * k).exp();
            let qb = check_q(q)?;
            let policy = TruncationPolicy::default();
            let sq = q.sqrt();
            alphas
                .iter()
                .map(|&x| {
                    let arg = QComplex::new(c * sq, 0.0) * QComplex::new(0.0, 2.0 * k * x).exp();
                    let p = qpoch_inf(arg, qb, &policy)?.value;
                    Ok((-x * x + 2.0 * m * x).exp() / p.norm_sqr())
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::ramanujan_aq;

    fn qc(re: f64, im: f64) -> QComplex {
        QComplex::new(re, im)
    }

    fn default_quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // 8-point rule is exact through degree 15
        let gl = gauss_legendre(8);
        let int_x6: f64 = gl.iter().map(|&(x, w)| w * x.powi(6)).sum();
        assert!((int_x6 - 2.0 / 7.0).abs() < 1e-14);
        let total: f64 = gl.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn euler_transform_gaussian_case() {
        // z = 0, x = 0: both sides reduce to 1/sqrt(2 ln(1/q))
        for &q in &[0.2, 0.5, 0.8] {
            let t = verify_euler_transform(qc(0.0, 0.0), q, 0.0, &default_quad()).unwrap();
            let expect = 1.0 / (2.0 * (1.0 / q).ln()).sqrt();
            assert!((t.lhs.re - expect).abs() < 1e-14);
            assert!(t.rel_err <= 1e-12, "q={q}: rel_err {}", t.rel_err);
        }
    }

    #[test]
    fn euler_transform_frozen_cases() {
        let t = verify_euler_transform(qc(0.5, 0.0), 0.5, 0.0, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
        let t = verify_euler_transform(qc(0.5, 0.0), 0.5, PI, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
    }

    #[test]
    fn phi11_transform_gaussian_case() {
        for &q in &[0.3, 0.6] {
            let t = verify_phi11_transform(0.0, 0.0, 0.0, q, 0.0, &default_quad()).unwrap();
            let expect = 1.0 / (1.0 / q).ln().sqrt();
            assert!((t.lhs.re - expect).abs() < 1e-14);
            assert!(t.rel_err <= 1e-12, "q={q}: rel_err {}", t.rel_err);
        }
    }

    #[test]
    fn phi11_transform_frozen_cases() {
        let t = verify_phi11_transform(0.3, 0.4, 0.5, 0.6, 0.0, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
        let t = verify_phi11_transform(0.3, 0.4, 0.5, 0.6, 2.0, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
    }

    #[test]
    fn ramanujan_integral_cases() {
        // c = 0: plain Gaussian integral, sqrt(pi) e^{m^2}
        let t = verify_ramanujan_integral(qc(0.0, 0.0), 0.8, qc(0.3, 0.0), &default_quad())
            .unwrap();
        assert!((t.lhs.re - PI.sqrt() * (0.09f64).exp()).abs() < 1e-12);
        assert!(t.rel_err <= 1e-12, "rel_err {}", t.rel_err);
        let t = verify_ramanujan_integral(qc(0.3, 0.0), 0.8, qc(0.0, 0.0), &default_quad())
            .unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
        // m = 0.5i exercises the oscillatory specialization
        let t = verify_ramanujan_integral(qc(0.3, 0.0), 0.8, qc(0.0, 0.5), &default_quad())
            .unwrap();
        assert!(t.rel_err <= 1e-8, "rel_err {}", t.rel_err);
        assert!(t.density_min >= 0.0);
    }

    #[test]
    fn total_mass_matches_kernel_at_zero() {
        // x = 0: the quadrature reproduces the kernel value at the origin
        let t = verify_euler_transform(qc(0.4, 0.0), 0.35, 0.0, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-10);
        let t = verify_phi11_transform(-0.5, 0.3, 0.4, 0.5, 0.0, &default_quad()).unwrap();
        assert!(t.rel_err <= 1e-10);
    }

    #[test]
    fn cutoff_insufficient_reports_needed() {
        let quad = QuadratureSpec { cutoff: 2.0, ..Default::default() };
        match verify_euler_transform(qc(0.5, 0.0), 0.5, 0.0, &quad) {
            Err(Error::CutoffInsufficient { cutoff, needed }) => {
                assert_eq!(cutoff, 2.0);
                assert!(needed > 2.0);
            }
            other => panic!("expected CutoffInsufficient, got {other:?}"),
        }
    }

    #[test]
    fn trapezoid_convergence_at_least_quadratic() {
        let lhs_scale = |t: &TransformCheck| t.lhs.norm();
        let run = |nodes: usize| {
            verify_euler_transform(
                qc(0.5, 0.0),
                0.5,
                1.0,
                &QuadratureSpec { cutoff: 0.0, nodes, scheme: Scheme::Trapezoid },
            )
            .unwrap()
        };
        let c1 = run(1);
        let c2 = run(2);
        let e1 = (c1.lhs - c1.rhs).norm();
        let e2 = (c2.lhs - c2.rhs).norm();
        assert!(
            e2 <= e1 / 4.0 + 1e-10 * lhs_scale(&c1),
            "e1 = {e1}, e2 = {e2}"
        );
    }

    #[test]
    fn density_reconstruction_euler() {
        // alpha = 0 reproduces A_q(-z); z = 0 reduces to the pure Gaussian
        let d = reconstruct_density(&DensityFamily::Euler { z: 0.5, q: 0.5 }, &[0.0]).unwrap();
        let aq = ramanujan_aq(qc(-0.5, 0.0), QBase::new(0.5).unwrap(), &TruncationPolicy::default())
            .unwrap()
            .value
            .re;
        assert!((d[0] - aq).abs() < 1e-13);
        assert!(d[0] > 0.0);
        let alphas = [-1.5, -0.3, 0.0, 0.7, 2.0];
        let d = reconstruct_density(&DensityFamily::Euler { z: 0.0, q: 0.5 }, &alphas).unwrap();
        for (al, v) in alphas.iter().zip(&d) {
            assert!((v - 0.5f64.powf(al * al)).abs() < 1e-14);
        }
    }

    #[test]
    fn density_decay_at_cutoff() {
        let qb = QBase::new(0.5).unwrap();
        let a = required_cutoff(-qb.ln(), 0.5);
        let d = reconstruct_density(&DensityFamily::Euler { z: 0.5, q: 0.5 }, &[-a, 0.0, a])
            .unwrap();
        assert!(d[0] <= 1e-16 * d[1]);
        assert!(d[2] <= 1e-16 * d[1]);
    }

    #[test]
    fn density_nonnegative_families() {
        let alphas: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.25).collect();
        let d = reconstruct_density(
            &DensityFamily::Phi11 { a: -0.7, b: 0.5, z: 0.6, q: 0.5 },
            &alphas,
        )
        .unwrap();
        assert!(d.iter().all(|&v| v >= 0.0));
        let d = reconstruct_density(&DensityFamily::Gauss { c: 0.3, k: 0.8, m: 0.2 }, &alphas)
            .unwrap();
        assert!(d.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn domain_checks() {
        assert!(verify_euler_transform(qc(1.2, 0.0), 0.5, 0.0, &default_quad()).is_err());
        assert!(verify_phi11_transform(0.3, 1.4, 0.5, 0.6, 0.0, &default_quad()).is_err());
        assert!(verify_ramanujan_integral(qc(0.3, 0.0), -1.0, qc(0.0, 0.0), &default_quad())
            .is_err());
        assert!(reconstruct_density(&DensityFamily::Euler { z: 0.5, q: 1.5 }, &[0.0]).is_err());
    }
}
