//! Signed-margin evaluation of the kernel modulus inequalities.
//!
//! Every operation evaluates both sides of one inequality, oriented so that
//! "margin = lhs - rhs >= 0" is the claim under test. Both sides are
//! computed through identical code paths so that at each symmetry point
//! (x = 0 or v = 0) the margin is exactly zero in floating point. Products
//! of q-Pochhammer moduli are accumulated in log space, which keeps sweeps
//! stable all the way to q = 1 - 1e-3 where the linear-space products
//! under/overflow.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qkernel::{
    q_gamma, qpoch_inf_log_abs, theta4_vtau, QBase, QComplex, TruncationPolicy,
};

const ONE: QComplex = QComplex::new(1.0, 0.0);
const PI: f64 = std::f64::consts::PI;

/// Identifier of one inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IneqId {
    I2_3,
    I2_6,
    I2_7,
    I2_8,
    I2_9,
    I2_10,
    I2_13a,
    I2_15,
    I2_16,
    I2_17,
    I2_20,
    I2_23,
    I2_24,
    I2_28,
}

/// All inequality ids, in report order.
pub const ALL_INEQS: [IneqId; 14] = [
    IneqId::I2_3,
    IneqId::I2_6,
    IneqId::I2_7,
    IneqId::I2_8,
    IneqId::I2_9,
    IneqId::I2_10,
    IneqId::I2_13a,
    IneqId::I2_15,
    IneqId::I2_16,
    IneqId::I2_17,
    IneqId::I2_20,
    IneqId::I2_23,
    IneqId::I2_24,
    IneqId::I2_28,
];

impl fmt::Display for IneqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IneqId::I2_3 => "2.3",
            IneqId::I2_6 => "2.6",
            IneqId::I2_7 => "2.7",
            IneqId::I2_8 => "2.8",
            IneqId::I2_9 => "2.9",
            IneqId::I2_10 => "2.10",
            IneqId::I2_13a => "2.13a",
            IneqId::I2_15 => "2.15",
            IneqId::I2_16 => "2.16",
            IneqId::I2_17 => "2.17",
            IneqId::I2_20 => "2.20",
            IneqId::I2_23 => "2.23",
            IneqId::I2_24 => "2.24",
            IneqId::I2_28 => "2.28",
        };
        f.write_str(s)
    }
}

impl FromStr for IneqId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "2.3" => IneqId::I2_3,
            "2.6" => IneqId::I2_6,
            "2.7" => IneqId::I2_7,
            "2.8" => IneqId::I2_8,
            "2.9" => IneqId::I2_9,
            "2.10" => IneqId::I2_10,
            "2.13a" => IneqId::I2_13a,
            "2.15" => IneqId::I2_15,
            "2.16" => IneqId::I2_16,
            "2.17" => IneqId::I2_17,
            "2.20" => IneqId::I2_20,
            "2.23" => IneqId::I2_23,
            "2.24" => IneqId::I2_24,
            "2.28" => IneqId::I2_28,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown inequality id '{other}'"
                )))
            }
        })
    }
}

/// Exponent convention for the Moebius-mapped inequalities 2.15-2.17.
///
/// `DerivedForm` uses the exponent obtained by substituting u + iv = f(z)
/// into the half-plane inequality (the only variant with a pass
/// expectation); `AsPrinted` uses the companion convention that replaces
/// Im(f(z)) by Im(z) (for 2.17, the sign-flipped exponent), recorded for
/// reference without a pass guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    DerivedForm,
    AsPrinted,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" | "derived-form" => Ok(Variant::DerivedForm),
            "as-printed" | "printed" => Ok(Variant::AsPrinted),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant '{other}' (expected 'derived' or 'as-printed')"
            ))),
        }
    }
}

/// One inequality instance: both sides, the signed margin, and the verdict.
#[derive(Debug, Clone)]
pub struct MarginReport {
    pub inequality_id: String,
    pub inputs: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl MarginReport {
    fn from_logs(id: String, inputs: Vec<(String, f64)>, log_lhs: f64, log_rhs: f64) -> Self {
        let lhs = log_lhs.exp();
        let rhs = log_rhs.exp();
        let margin = lhs - rhs;
        let ratio = (log_lhs - log_rhs).exp();
        let pass = if margin.is_nan() {
            // both sides overflowed; decide in log space
            log_lhs >= log_rhs - 1e-12 * log_lhs.abs().max(log_rhs.abs()).max(1.0)
        } else {
            margin >= -1e-12 * lhs.abs().max(rhs.abs()).max(1.0)
        };
        MarginReport { inequality_id: id, inputs, lhs, rhs, margin, ratio, pass }
    }

    fn from_values(id: String, inputs: Vec<(String, f64)>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        let ratio = lhs / rhs;
        let pass = margin >= -1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
        MarginReport { inequality_id: id, inputs, lhs, rhs, margin, ratio, pass }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("{name} must lie in (0,1), got {v}")))
    }
}

fn check_pm_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > -1.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("{name} must lie in (-1,1), got {v}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("{name} must be > 0, got {v}")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("{name} must be finite, got {v}")))
    }
}

/// ln |(a;q)_inf| under the wide truncation policy.
fn lpoch(a: QComplex, q: QBase) -> Result<f64> {
    Ok(qpoch_inf_log_abs(a, q, &TruncationPolicy::wide())?.value.re)
}

#[inline]
fn eix(x: f64) -> QComplex {
    QComplex::new(0.0, x).exp()
}

/// q^{iv} = e^{iv ln q}.
#[inline]
fn q_iv(v: f64, lnq: f64) -> QComplex {
    QComplex::new(0.0, v * lnq).exp()
}

fn indexed_inputs(names: &[(&str, &[f64])], scalars: &[(&str, f64)]) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (name, vals) in names {
        if vals.len() == 1 {
            out.push((name.to_string(), vals[0]));
        } else {
            for (i, v) in vals.iter().enumerate() {
                out.push((format!("{name}{i}"), *v));
            }
        }
    }
    for (name, v) in scalars {
        out.push((name.to_string(), *v));
    }
    out
}

/// prod_l (y_l;q_l)_inf / |(y_l e^{ix};q_l)_inf| * exp(x^2 / (4 ln q_l)) <= 1.
pub fn ineq_2_3(y: &[f64], q: &[f64], x: f64) -> Result<MarginReport> {
    if y.len() != q.len() || y.is_empty() {
        return Err(Error::DimMismatch { a: y.len(), b: q.len() });
    }
    check_finite("x", x)?;
    let e0 = eix(0.0);
    let ex = eix(x);
    let mut rhs_log = 0.0;
    for (yl, ql) in y.iter().zip(q) {
        check_unit("y", *yl)?;
        check_unit("q", *ql)?;
        let qb = QBase::new(*ql)?;
        rhs_log += lpoch(e0 * *yl, qb)? - lpoch(ex * *yl, qb)? + x * x / (4.0 * qb.ln());
    }
    let inputs = indexed_inputs(&[("y", y), ("q", q)], &[("x", x)]);
    Ok(MarginReport::from_logs("2.3".into(), inputs, 0.0, rhs_log))
}

/// |(y e^{ix};q)_inf| >= (y;q)_inf exp(x^2 / (4 ln q)).
pub fn ineq_2_9(y: f64, q: f64, x: f64) -> Result<MarginReport> {
    check_unit("y", y)?;
    check_unit("q", q)?;
    check_finite("x", x)?;
    let qb = QBase::new(q)?;
    let lhs_log = lpoch(eix(x) * y, qb)?;
    let rhs_log = lpoch(eix(0.0) * y, qb)? + x * x / (4.0 * qb.ln());
    let inputs = vec![("y".into(), y), ("q".into(), q), ("x".into(), x)];
    Ok(MarginReport::from_logs("2.9".into(), inputs, lhs_log, rhs_log))
}

/// |(q^{u+iv};q)_inf| >= (q^u;q)_inf q^{v^2/4}.
pub fn ineq_2_6(u: f64, v: f64, q: f64) -> Result<MarginReport> {
    check_positive("u", u)?;
    check_finite("v", v)?;
    check_unit("q", q)?;
    let qb = QBase::new(q)?;
    let lnq = qb.ln();
    let lhs_log = lpoch((QComplex::new(u, v) * lnq).exp(), qb)?;
    let rhs_log = lpoch((QComplex::new(u, 0.0) * lnq).exp(), qb)? + v * v / 4.0 * lnq;
    let inputs = vec![("u".into(), u), ("v".into(), v), ("q".into(), q)];
    Ok(MarginReport::from_logs("2.6".into(), inputs, lhs_log, rhs_log))
}

/// ln |Gamma_q(w)| through the same complex path for both sides of 2.7/2.16.
fn log_abs_q_gamma(w: QComplex, qb: QBase) -> Result<f64> {
    let lnq = qb.ln();
    let ln1mq = (1.0 - qb.get()).ln();
    let lq = lpoch(QComplex::new(qb.get(), 0.0), qb)?;
    Ok((1.0 - w.re) * ln1mq + lq - lpoch((w * lnq).exp(), qb)?)
}

/// Gamma_q(u) >= |Gamma_q(u+iv)| q^{v^2/4}.
pub fn ineq_2_7(u: f64, v: f64, q: f64) -> Result<MarginReport> {
    check_positive("u", u)?;
    check_finite("v", v)?;
    check_unit("q", q)?;
    let qb = QBase::new(q)?;
    let lhs_log = log_abs_q_gamma(QComplex::new(u, 0.0), qb)?;
    let rhs_log = log_abs_q_gamma(QComplex::new(u, v), qb)? + v * v / 4.0 * qb.ln();
    let inputs = vec![("u".into(), u), ("v".into(), v), ("q".into(), q)];
    Ok(MarginReport::from_logs("2.7".into(), inputs, lhs_log, rhs_log))
}

/// theta_4(v | iu) / theta_4(0 | iu) >= e^{-pi v^2 / u}.
pub fn ineq_2_8(u: f64, v: f64) -> Result<MarginReport> {
    check_positive("u", u)?;
    check_finite("v", v)?;
    let pol = TruncationPolicy::default();
    let tau = QComplex::new(0.0, u);
    let num = theta4_vtau(QComplex::new(v, 0.0), tau, &pol)?.value.re;
    let den = theta4_vtau(QComplex::new(0.0, 0.0), tau, &pol)?.value.re;
    let lhs = num / den;
    let rhs = (-PI * v * v / u).exp();
    let inputs = vec![("u".into(), u), ("v".into(), v)];
    Ok(MarginReport::from_values("2.8".into(), inputs, lhs, rhs))
}

/// (q^2, q e^{ix}, q e^{-ix}; q^2)_inf >= (q^2, q, q; q^2)_inf exp(x^2/(4 ln q)).
pub fn ineq_2_10(x: f64, q: f64) -> Result<MarginReport> {
    check_finite("x", x)?;
    check_unit("q", q)?;
    let qb = QBase::new(q)?;
    let q2 = qb.squared();
    let lq2 = lpoch(QComplex::new(q * q, 0.0), q2)?;
    let side = |t: f64| -> Result<f64> {
        Ok(lq2 + lpoch(eix(t) * q, q2)? + lpoch(eix(-t) * q, q2)?)
    };
    let lhs_log = side(x)?;
    let rhs_log = side(0.0)? + x * x / (4.0 * qb.ln());
    let inputs = vec![("x".into(), x), ("q".into(), q)];
    Ok(MarginReport::from_logs("2.10".into(), inputs, lhs_log, rhs_log))
}

/// |theta_4(ui - v | ui)| >= theta_4(0 | ui) e^{pi u (1 - v^2/u^2)}.
pub fn ineq_2_13a(u: f64, v: f64) -> Result<MarginReport> {
    check_positive("u", u)?;
    check_finite("v", v)?;
    let pol = TruncationPolicy::default();
    let tau = QComplex::new(0.0, u);
    let lhs = theta4_vtau(QComplex::new(-v, u), tau, &pol)?.value.norm();
    let theta0 = theta4_vtau(QComplex::new(0.0, 0.0), tau, &pol)?.value.re;
    let rhs = theta0 * (PI * (u - v * v / u)).exp();
    let inputs = vec![("u".into(), u), ("v".into(), v)];
    Ok(MarginReport::from_values("2.13a".into(), inputs, lhs, rhs))
}

/// f(z) = (1+z)/(1-z), the unit disk onto the right half-plane.
pub fn moebius_map(z: QComplex) -> Result<QComplex> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if z.norm() >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "moebius_map needs |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    Ok((ONE + z) / (ONE - z))
}

/// The disk-mapped inequalities 2.15 (q-Pochhammer), 2.16 (Gamma_q),
/// 2.17 (theta_4), under the selected exponent [`Variant`].
pub fn ineq_mapped(id: IneqId, z: QComplex, q: f64, variant: Variant) -> Result<MarginReport> {
    let f = moebius_map(z)?;
    let u = f.re;
    let vf = f.im;
    let tag = |base: &str| -> String {
        match variant {
            Variant::DerivedForm => base.to_string(),
            Variant::AsPrinted => format!("{base}:as-printed"),
        }
    };
    match id {
        IneqId::I2_15 | IneqId::I2_16 => {
            check_unit("q", q)?;
            let qb = QBase::new(q)?;
            let lnq = qb.ln();
            let exponent = match variant {
                Variant::DerivedForm => vf * vf / 4.0,
                Variant::AsPrinted => z.im * z.im / 4.0,
            };
            let inputs = vec![
                ("zx".into(), z.re),
                ("zy".into(), z.im),
                ("q".into(), q),
            ];
            if id == IneqId::I2_15 {
                let lhs_log = lpoch((f * lnq).exp(), qb)?;
                let rhs_log = lpoch((QComplex::new(u, 0.0) * lnq).exp(), qb)? + exponent * lnq;
                Ok(MarginReport::from_logs(tag("2.15"), inputs, lhs_log, rhs_log))
            } else {
                let lhs_log = log_abs_q_gamma(QComplex::new(u, 0.0), qb)?;
                let rhs_log = log_abs_q_gamma(f, qb)? + exponent * lnq;
                Ok(MarginReport::from_logs(tag("2.16"), inputs, lhs_log, rhs_log))
            }
        }
        IneqId::I2_17 => {
            let pol = TruncationPolicy::default();
            let tau = QComplex::new(0.0, u);
            let lhs = theta4_vtau(QComplex::new(-vf, u), tau, &pol)?.value.norm();
            let theta0 = theta4_vtau(QComplex::new(0.0, 0.0), tau, &pol)?.value.re;
            let exponent = match variant {
                Variant::DerivedForm => PI * (u - vf * vf / u),
                Variant::AsPrinted => {
                    let (x, y) = (z.re, z.im);
                    let d = (1.0 - x) * (1.0 - x) + y * y;
                    let w = 1.0 - x * x - y * y;
                    PI * (4.0 * y * y - w * w) / (d * w)
                }
            };
            let rhs = theta0 * exponent.exp();
            let inputs = vec![("zx".into(), z.re), ("zy".into(), z.im)];
            Ok(MarginReport::from_values(tag("2.17"), inputs, lhs, rhs))
        }
        other => Err(Error::InvalidParameter(format!(
            "ineq_mapped only handles 2.15/2.16/2.17, got {other}"
        ))),
    }
}

/// prod_l |(b_l e^{ix}, z_l e^{ix}; q_l)_inf / (a_l z_l e^{ix}; q_l)_inf|
/// >= prod_l (b_l, z_l; q_l)_inf / (a_l z_l; q_l)_inf exp(x^2/(2 ln q_l)).
pub fn ineq_2_20(a: &[f64], b: &[f64], z: &[f64], q: &[f64], x: f64) -> Result<MarginReport> {
    let n = a.len();
    if n == 0 || b.len() != n || z.len() != n || q.len() != n {
        return Err(Error::DimMismatch { a: n, b: b.len().max(z.len()).max(q.len()) });
    }
    check_finite("x", x)?;
    let e0 = eix(0.0);
    let ex = eix(x);
    let mut lhs_log = 0.0;
    let mut rhs_log = 0.0;
    for l in 0..n {
        check_pm_unit("a", a[l])?;
        check_unit("b", b[l])?;
        check_unit("z", z[l])?;
        check_unit("q", q[l])?;
        let qb = QBase::new(q[l])?;
        let side = |e: QComplex| -> Result<f64> {
            Ok(lpoch(e * b[l], qb)? + lpoch(e * z[l], qb)? - lpoch(e * (a[l] * z[l]), qb)?)
        };
        lhs_log += side(ex)?;
        rhs_log += side(e0)? + x * x / (2.0 * qb.ln());
    }
    let inputs = indexed_inputs(&[("a", a), ("b", b), ("z", z), ("q", q)], &[("x", x)]);
    Ok(MarginReport::from_logs("2.20".into(), inputs, lhs_log, rhs_log))
}

/// |(a q^{iv}, b q^{iv};q)_inf / (bc q^{iv};q)_inf|
/// >= (a, b;q)_inf / (bc;q)_inf q^{v^2/2}.
pub fn ineq_2_23(a: f64, b: f64, c: f64, q: f64, v: f64) -> Result<MarginReport> {
    check_unit("a", a)?;
    check_unit("b", b)?;
    check_pm_unit("c", c)?;
    check_unit("q", q)?;
    check_finite("v", v)?;
    let qb = QBase::new(q)?;
    let lnq = qb.ln();
    let side = |t: f64| -> Result<f64> {
        let w = q_iv(t, lnq);
        Ok(lpoch(w * a, qb)? + lpoch(w * b, qb)? - lpoch(w * (b * c), qb)?)
    };
    let lhs_log = side(v)?;
    let rhs_log = side(0.0)? + v * v / 2.0 * lnq;
    let inputs = vec![
        ("a".into(), a),
        ("b".into(), b),
        ("c".into(), c),
        ("q".into(), q),
        ("v".into(), v),
    ];
    Ok(MarginReport::from_logs("2.23".into(), inputs, lhs_log, rhs_log))
}

/// |(b q^{iv};q)_inf^2 / (ab q^{iv};q)_inf| >= (b;q)_inf^2 / (ab;q)_inf q^{v^2/2}.
pub fn ineq_2_24(a: f64, b: f64, q: f64, v: f64) -> Result<MarginReport> {
    check_pm_unit("a", a)?;
    check_unit("b", b)?;
    check_unit("q", q)?;
    check_finite("v", v)?;
    let qb = QBase::new(q)?;
    let lnq = qb.ln();
    let side = |t: f64| -> Result<f64> {
        let w = q_iv(t, lnq);
        Ok(2.0 * lpoch(w * b, qb)? - lpoch(w * (a * b), qb)?)
    };
    let lhs_log = side(v)?;
    let rhs_log = side(0.0)? + v * v / 2.0 * lnq;
    let inputs = vec![
        ("a".into(), a),
        ("b".into(), b),
        ("q".into(), q),
        ("v".into(), v),
    ];
    Ok(MarginReport::from_logs("2.24".into(), inputs, lhs_log, rhs_log))
}

/// e^{x^2} (-c, -c; q)_inf >= (-c e^{-2xk}, -c e^{2xk}; q)_inf
/// with q = e^{-2k^2} and 0 < c < q^{1/2}.
pub fn ineq_2_28(c: f64, k: f64, x: f64) -> Result<MarginReport> {
    check_positive("k", k)?;
    check_finite("x", x)?;
    let q = (-2.0 * k * k).exp();
    let qb = QBase::new(q)?;
    let c_max = (-k * k).exp();
    if !(c.is_finite() && c > 0.0 && c < c_max) {
        return Err(Error::DomainViolation(format!(
            "2.28 needs 0 < c < q^(1/2) = {c_max}, got c = {c}"
        )));
    }
    let lp = |arg: f64| lpoch(QComplex::new(arg, 0.0), qb);
    let lhs_log = x * x + 2.0 * lp(-c)?;
    let rhs_log = lp(-c * (-2.0 * x * k).exp())? + lp(-c * (2.0 * x * k).exp())?;
    let inputs = vec![("c".into(), c), ("k".into(), k), ("x".into(), x)];
    Ok(MarginReport::from_logs("2.28".into(), inputs, lhs_log, rhs_log))
}

/// One sweep axis: `count` evenly spaced samples on [lo, hi].
#[derive(Debug, Clone)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lo + step * i as f64).collect()
    }
}

/// Either a cartesian grid over named axes or seeded random in-domain draws.
#[derive(Debug, Clone)]
pub enum SweepGrid {
    Grid(Vec<Axis>),
    Random { draws: usize, seed: u64 },
}

/// Canonical scalar parameter order for each inequality.
pub fn param_names(id: IneqId) -> &'static [&'static str] {
    match id {
        IneqId::I2_3 | IneqId::I2_9 => &["y", "q", "x"],
        IneqId::I2_6 | IneqId::I2_7 => &["u", "v", "q"],
        IneqId::I2_8 | IneqId::I2_13a => &["u", "v"],
        IneqId::I2_10 => &["x", "q"],
        IneqId::I2_15 | IneqId::I2_16 => &["zx", "zy", "q"],
        IneqId::I2_17 => &["zx", "zy"],
        IneqId::I2_20 => &["a", "b", "z", "q", "x"],
        IneqId::I2_23 => &["a", "b", "c", "q", "v"],
        IneqId::I2_24 => &["a", "b", "q", "v"],
        IneqId::I2_28 => &["c", "k", "x"],
    }
}

/// Evaluates one inequality at scalar parameter values in canonical order.
pub fn eval_point(id: IneqId, vals: &[f64], variant: Variant) -> Result<MarginReport> {
    let expect = param_names(id).len();
    if vals.len() != expect {
        return Err(Error::DimMismatch { a: vals.len(), b: expect });
    }
    match id {
        IneqId::I2_3 => ineq_2_3(&[vals[0]], &[vals[1]], vals[2]),
        IneqId::I2_9 => ineq_2_9(vals[0], vals[1], vals[2]),
        IneqId::I2_6 => ineq_2_6(vals[0], vals[1], vals[2]),
        IneqId::I2_7 => ineq_2_7(vals[0], vals[1], vals[2]),
        IneqId::I2_8 => ineq_2_8(vals[0], vals[1]),
        IneqId::I2_13a => ineq_2_13a(vals[0], vals[1]),
        IneqId::I2_10 => ineq_2_10(vals[0], vals[1]),
        IneqId::I2_15 | IneqId::I2_16 => {
            ineq_mapped(id, QComplex::new(vals[0], vals[1]), vals[2], variant)
        }
        IneqId::I2_17 => ineq_mapped(id, QComplex::new(vals[0], vals[1]), 0.5, variant),
        IneqId::I2_20 => ineq_2_20(&[vals[0]], &[vals[1]], &[vals[2]], &[vals[3]], vals[4]),
        IneqId::I2_23 => ineq_2_23(vals[0], vals[1], vals[2], vals[3], vals[4]),
        IneqId::I2_24 => ineq_2_24(vals[0], vals[1], vals[2], vals[3]),
        IneqId::I2_28 => ineq_2_28(vals[0], vals[1], vals[2]),
    }
}

const EDGE: f64 = 1e-3;

fn unit_clamped<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(EDGE..=1.0 - EDGE)
}

fn disk_point<R: Rng>(rng: &mut R, radius: f64) -> QComplex {
    loop {
        let z = QComplex::new(
            rng.gen_range(-radius..=radius),
            rng.gen_range(-radius..=radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

/// Draws one in-domain sample (canonical order), clamped 1e-3 from edges.
pub fn sample_point<R: Rng>(id: IneqId, rng: &mut R) -> Vec<f64> {
    match id {
        IneqId::I2_3 | IneqId::I2_9 => {
            vec![unit_clamped(rng), unit_clamped(rng), rng.gen_range(-6.0..=6.0)]
        }
        IneqId::I2_6 | IneqId::I2_7 => vec![
            rng.gen_range(EDGE..=4.0),
            rng.gen_range(-4.0..=4.0),
            unit_clamped(rng),
        ],
        IneqId::I2_8 | IneqId::I2_13a => {
            vec![rng.gen_range(0.1..=3.0), rng.gen_range(-2.0..=2.0)]
        }
        IneqId::I2_10 => vec![rng.gen_range(-6.0..=6.0), unit_clamped(rng)],
        IneqId::I2_15 | IneqId::I2_16 => {
            let z = disk_point(rng, 0.9);
            vec![z.re, z.im, unit_clamped(rng)]
        }
        IneqId::I2_17 => loop {
            let z = disk_point(rng, 0.9);
            // keep Re f(z) bounded away from 0
            if moebius_map(z).map(|f| f.re >= 0.05).unwrap_or(false) {
                break vec![z.re, z.im];
            }
        },
        IneqId::I2_20 => vec![
            rng.gen_range(-1.0 + EDGE..=1.0 - EDGE),
            unit_clamped(rng),
            unit_clamped(rng),
            unit_clamped(rng),
            rng.gen_range(-6.0..=6.0),
        ],
        IneqId::I2_23 => vec![
            unit_clamped(rng),
            unit_clamped(rng),
            rng.gen_range(-1.0 + EDGE..=1.0 - EDGE),
            unit_clamped(rng),
            rng.gen_range(-3.0..=3.0),
        ],
        IneqId::I2_24 => vec![
            rng.gen_range(-1.0 + EDGE..=1.0 - EDGE),
            unit_clamped(rng),
            unit_clamped(rng),
            rng.gen_range(-3.0..=3.0),
        ],
        IneqId::I2_28 => {
            let k: f64 = rng.gen_range(0.15..=1.5);
            let c = (-k * k).exp() * unit_clamped(rng);
            vec![c, k, rng.gen_range(-3.0..=3.0)]
        }
    }
}

/// Runs an inequality over a grid or random draws; deterministic order.
pub fn sweep(id: IneqId, grid: &SweepGrid, variant: Variant) -> Result<Vec<MarginReport>> {
    match grid {
        SweepGrid::Random { draws, seed } => {
            if *draws == 0 {
                return Err(Error::InvalidParameter("draw count must be >= 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*draws)
                .map(|_| eval_point(id, &sample_point(id, &mut rng), variant))
                .collect()
        }
        SweepGrid::Grid(axes) => {
            let names = param_names(id);
            if axes.is_empty() {
                return Err(Error::InvalidParameter("empty grid".into()));
            }
            let mut ordered = Vec::with_capacity(names.len());
            for name in names {
                let ax = axes.iter().find(|a| a.name == *name).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "inequality {id} needs axis '{name}' (required axes: {})",
                        names.join(", ")
                    ))
                })?;
                if ax.count == 0 {
                    return Err(Error::InvalidParameter(format!("axis '{name}' is empty")));
                }
                ordered.push(ax.values());
            }
            for ax in axes {
                if !names.contains(&ax.name.as_str()) {
                    return Err(Error::InvalidParameter(format!(
                        "axis '{}' is not a parameter of inequality {id}",
                        ax.name
                    )));
                }
            }
            let total: usize = ordered.iter().map(|v| v.len()).product();
            let mut out = Vec::with_capacity(total);
            let mut idx = vec![0usize; ordered.len()];
            loop {
                let vals: Vec<f64> = idx.iter().zip(&ordered).map(|(i, v)| v[*i]).collect();
                out.push(eval_point(id, &vals, variant)?);
                // odometer increment, last axis fastest
                let mut pos = ordered.len();
                loop {
                    if pos == 0 {
                        return Ok(out);
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < ordered[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
    }
}

/// Ratio form of the q-Gamma functional equation, used by identity suites:
/// Gamma_q(x+1) vs ((1-q^x)/(1-q)) Gamma_q(x), returned as (lhs, rhs).
pub fn q_gamma_functional_pair(x: QComplex, q: f64) -> Result<(QComplex, QComplex)> {
    let qb = QBase::new(q)?;
    let pol = TruncationPolicy::default();
    let lhs = q_gamma(x + ONE, qb, &pol)?.value;
    let qx = (x * qb.ln()).exp();
    let rhs = (ONE - qx) / (1.0 - q) * q_gamma(x, qb, &pol)?.value;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> QComplex {
        QComplex::new(re, im)
    }

    #[test]
    fn equality_points_are_exact() {
        // both sides run through identical code paths at the symmetry point
        assert_eq!(ineq_2_3(&[0.5], &[0.5], 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_9(0.5, 0.5, 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_6(1.0, 0.0, 0.5).unwrap().margin, 0.0);
        assert_eq!(ineq_2_7(0.5, 0.0, 0.5).unwrap().margin, 0.0);
        assert_eq!(ineq_2_8(1.0, 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_10(0.0, 0.6).unwrap().margin, 0.0);
        assert_eq!(ineq_2_20(&[0.3], &[0.4], &[0.5], &[0.6], 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_23(0.3, 0.4, 0.5, 0.6, 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_24(0.3, 0.7, 0.5, 0.0).unwrap().margin, 0.0);
        assert_eq!(ineq_2_28(0.2, 0.8, 0.0).unwrap().margin, 0.0);
        assert_eq!(
            ineq_mapped(IneqId::I2_15, c(0.0, 0.0), 0.5, Variant::DerivedForm)
                .unwrap()
                .margin,
            0.0
        );
        assert_eq!(
            ineq_mapped(IneqId::I2_16, c(0.0, 0.0), 0.5, Variant::DerivedForm)
                .unwrap()
                .margin,
            0.0
        );
    }

    #[test]
    fn near_equality_points_theta() {
        // 2.13a and 2.17 hit equality through the quasi-periodicity identity,
        // exact only up to roundoff
        let r = ineq_2_13a(1.0, 0.0).unwrap();
        assert!(r.margin.abs() <= 1e-13 * r.rhs.max(1.0), "margin {}", r.margin);
        let r = ineq_mapped(IneqId::I2_17, c(0.0, 0.0), 0.5, Variant::DerivedForm).unwrap();
        assert!(r.margin.abs() <= 1e-13 * r.rhs.max(1.0), "margin {}", r.margin);
    }

    #[test]
    fn frozen_single_points_pass() {
        for r in [
            ineq_2_3(&[0.5], &[0.5], PI).unwrap(),
            ineq_2_9(0.5, 0.5, 1.0).unwrap(),
            ineq_2_6(1.0, 2.0, 0.5).unwrap(),
            ineq_2_7(0.5, 1.0, 0.5).unwrap(),
            ineq_2_8(1.0, 0.5).unwrap(),
            ineq_2_10(1.0, 0.6).unwrap(),
            ineq_2_13a(1.0, 0.3).unwrap(),
            ineq_2_20(&[0.3], &[0.4], &[0.5], &[0.6], 1.0).unwrap(),
            ineq_2_23(0.3, 0.4, 0.5, 0.6, 1.0).unwrap(),
            ineq_2_24(0.3, 0.7, 0.5, 2.0).unwrap(),
            ineq_2_28(0.2, 0.8, 0.5).unwrap(),
        ] {
            assert!(r.pass && r.margin >= 0.0, "{}: margin {}", r.inequality_id, r.margin);
        }
    }

    #[test]
    fn moebius_basics() {
        assert_eq!(moebius_map(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(moebius_map(c(0.5, 0.0)).unwrap(), c(3.0, 0.0));
        assert!(moebius_map(c(1.0, 0.0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let z = disk_point(&mut rng, 0.999);
            assert!(moebius_map(z).unwrap().re > 0.0);
        }
    }

    #[test]
    fn ineq_2_8_even_in_v() {
        for &u in &[0.4, 1.0, 2.5] {
            for &v in &[0.3, 0.9, 1.7] {
                let a = ineq_2_8(u, v).unwrap();
                let b = ineq_2_8(u, -v).unwrap();
                assert!((a.lhs - b.lhs).abs() <= 1e-13 * a.lhs.abs());
                assert_eq!(a.rhs, b.rhs);
            }
        }
    }

    #[test]
    fn ineq_2_3_matches_2_9_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let y = unit_clamped(&mut rng);
            let q = unit_clamped(&mut rng);
            let x = rng.gen_range(-6.0..=6.0);
            let r3 = ineq_2_3(&[y], &[q], x).unwrap();
            let r9 = ineq_2_9(y, q, x).unwrap();
            assert_eq!(r3.pass, r9.pass, "y={y} q={q} x={x}");
            // 2.3's product is rhs_2.9 / lhs_2.9
            let prod = r9.rhs / r9.lhs;
            if prod.is_finite() && r3.rhs.is_finite() {
                assert!((r3.rhs - prod).abs() <= 1e-10 * (1.0 + prod.abs()));
            }
        }
    }

    #[test]
    fn ineq_2_23_and_2_24_specialize_2_20() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let a = unit_clamped(&mut rng);
            let b = unit_clamped(&mut rng);
            let cc = rng.gen_range(-1.0 + EDGE..=1.0 - EDGE);
            let q: f64 = rng.gen_range(0.05..=0.95);
            let v = rng.gen_range(-3.0..=3.0);
            let x = v * q.ln();
            let r23 = ineq_2_23(a, b, cc, q, v).unwrap();
            let r20 = ineq_2_20(&[cc], &[a], &[b], &[q], x).unwrap();
            assert_eq!(r23.pass, r20.pass);
            assert!((r23.ratio - r20.ratio).abs() <= 1e-10 * (1.0 + r20.ratio.abs()));
            let a24 = rng.gen_range(-1.0 + EDGE..=1.0 - EDGE);
            let r24 = ineq_2_24(a24, b, q, v).unwrap();
            let r20b = ineq_2_20(&[a24], &[b], &[b], &[q], x).unwrap();
            assert_eq!(r24.pass, r20b.pass);
            assert!((r24.ratio - r20b.ratio).abs() <= 1e-10 * (1.0 + r20b.ratio.abs()));
        }
    }

    #[test]
    fn domain_violations_rejected() {
        assert!(ineq_2_9(1.5, 0.5, 1.0).is_err());
        assert!(ineq_2_6(-1.0, 0.5, 0.5).is_err());
        assert!(ineq_2_7(0.5, 0.5, 1.0).is_err());
        assert!(ineq_2_8(0.0, 0.5).is_err());
        assert!(ineq_2_28(0.9, 0.8, 0.0).is_err()); // c >= q^{1/2}
        assert!(ineq_2_3(&[0.5, 0.4], &[0.5], 1.0).is_err());
        assert!(ineq_mapped(IneqId::I2_3, c(0.1, 0.1), 0.5, Variant::DerivedForm).is_err());
    }

    #[test]
    fn sweep_grid_runs_and_rejects_bad_axes() {
        let grid = SweepGrid::Grid(vec![
            Axis { name: "u".into(), lo: 0.3, hi: 3.0, count: 5 },
            Axis { name: "v".into(), lo: -2.0, hi: 2.0, count: 7 },
        ]);
        let reports = sweep(IneqId::I2_8, &grid, Variant::DerivedForm).unwrap();
        assert_eq!(reports.len(), 35);
        assert!(reports.iter().all(|r| r.pass));
        let missing = SweepGrid::Grid(vec![Axis { name: "u".into(), lo: 0.3, hi: 3.0, count: 5 }]);
        assert!(sweep(IneqId::I2_8, &missing, Variant::DerivedForm).is_err());
        let extra = SweepGrid::Grid(vec![
            Axis { name: "u".into(), lo: 0.3, hi: 3.0, count: 2 },
            Axis { name: "v".into(), lo: -2.0, hi: 2.0, count: 2 },
            Axis { name: "y".into(), lo: 0.1, hi: 0.2, count: 2 },
        ]);
        assert!(sweep(IneqId::I2_8, &extra, Variant::DerivedForm).is_err());
        assert!(sweep(IneqId::I2_8, &SweepGrid::Grid(vec![]), Variant::DerivedForm).is_err());
    }

    #[test]
    fn random_sweep_is_deterministic() {
        let grid = SweepGrid::Random { draws: 50, seed: 42 };
        let a = sweep(IneqId::I2_23, &grid, Variant::DerivedForm).unwrap();
        let b = sweep(IneqId::I2_23, &grid, Variant::DerivedForm).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.inputs, y.inputs);
            assert!(x.margin == y.margin || (x.margin.is_nan() && y.margin.is_nan()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        // every inequality holds on random in-domain draws
        #[test]
        fn all_ineqs_hold_on_draws(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for id in ALL_INEQS {
                let vals = sample_point(id, &mut rng);
                let r = eval_point(id, &vals, Variant::DerivedForm).unwrap();
                prop_assert!(
                    r.margin >= -1e-10 * r.lhs.abs().max(r.rhs.abs()).max(1.0),
                    "{}: margin {} at {:?}", r.inequality_id, r.margin, r.inputs
                );
            }
        }
    }
}
