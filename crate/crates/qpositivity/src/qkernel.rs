//! Scalar q-special functions over complex arguments with certified truncation:
//! q-Pochhammer symbols, Ramanujan's function A_q, the confluent basic
//! hypergeometric series 1phi1, the Jacobi theta function theta_4 (bilateral
//! series and triple-product forms), and the q-Gamma function.
//!
//! Every infinite series/product is truncated under an explicit a-posteriori
//! tail bound recorded in the returned [`EvalResult`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex value type used throughout the crate.
pub type QComplex = Complex64;

/// The base q of a q-series, restricted to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(Error::InvalidParameter(format!(
                "q must lie in (0,1), got {q}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// ln q, always negative.
    #[inline]
    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// The base q^2, still in (0, 1).
    pub fn squared(self) -> QBase {
        QBase(self.0 * self.0)
    }
}

/// Per-evaluation truncation controls for infinite series and products.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    /// Absolute (series) or relative (products, via the log) tail bound target.
    pub tail_tol: f64,
    /// Hard cap on the number of terms/factors.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_tol: 1e-16,
            max_terms: 10_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, max_terms: usize) -> Result<Self> {
        if !(tail_tol > 0.0) || max_terms < 1 {
            return Err(Error::InvalidParameter(
                "tail_tol must be > 0 and max_terms >= 1".into(),
            ));
        }
        Ok(TruncationPolicy { tail_tol, max_terms })
    }

    /// Wide policy for parameter sweeps that approach q -> 1, where
    /// (a;q)_inf needs tens of thousands of factors.
    pub fn wide() -> Self {
        TruncationPolicy {
            tail_tol: 1e-16,
            max_terms: 200_000,
        }
    }
}

/// A truncated evaluation together with its certificate.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: QComplex,
    pub terms_used: usize,
    pub tail_bound: f64,
}

#[inline]
fn ensure_finite(z: QComplex) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

const ONE: QComplex = QComplex::new(1.0, 0.0);

/// (a;q)_inf = prod_{n>=0} (1 - a q^n).
///
/// Stops at the first N with |a| q^{N+1} < 1/2 and the log-tail bound
/// sum_{n>N} |a| q^n / (1 - |a| q^n) <= tail_tol.
pub fn qpoch_inf(a: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    qpoch_inf_impl(a, q, policy, None)
}

/// As [`qpoch_inf`] but errors when a factor (1 - a q^n) falls below
/// `pole_tol * (1 + |a|)` in modulus; used by Gamma_q and 1phi1 pole checks.
fn qpoch_inf_impl(
    a: QComplex,
    q: QBase,
    policy: &TruncationPolicy,
    pole_tol: Option<f64>,
) -> Result<EvalResult> {
    ensure_finite(a)?;
    let q = q.get();
    let abs_a = a.norm();
    let pole_thresh = pole_tol.map(|t| t * (1.0 + abs_a));
    let mut prod = ONE;
    let mut aqn = a; // a q^n
    let mut head = abs_a * q; // |a| q^{n+1}
    for n in 0..policy.max_terms {
        let factor = ONE - aqn;
        if let Some(t) = pole_thresh {
            if factor.norm() < t {
                return Err(Error::PoleAtNonpositiveInteger);
            }
        }
        prod *= factor;
        aqn *= q;
        if head < 0.5 {
            let tail = head / ((1.0 - q) * (1.0 - head));
            if tail <= policy.tail_tol {
                ensure_finite(prod)?;
                return Ok(EvalResult {
                    value: prod,
                    terms_used: n + 1,
                    tail_bound: tail,
                });
            }
        }
        head *= q;
    }
    Err(Error::TruncationExceeded {
        terms: policy.max_terms,
        tail_bound: head / (1.0 - q),
    })
}

/// ln |(a;q)_inf|, accumulated termwise as sum of ln|1 - a q^n|.
///
/// Same stopping rule as [`qpoch_inf`]; immune to the over/underflow the
/// linear-space product hits for q near 1, which inequality sweeps need.
/// Errors with `NumericalFailure` if a factor modulus drops below 1e-300.
pub fn qpoch_inf_log_abs(a: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(a)?;
    let q = q.get();
    let abs_a = a.norm();
    let mut log_sum = 0.0f64;
    let mut aqn = a;
    let mut head = abs_a * q;
    for n in 0..policy.max_terms {
        let factor = ONE - aqn;
        let fnorm = factor.norm();
        if fnorm < 1e-300 {
            return Err(Error::NumericalFailure(
                "q-Pochhammer factor vanishes; log-modulus undefined".into(),
            ));
        }
        log_sum += fnorm.ln();
        aqn *= q;
        if head < 0.5 {
            let tail = head / ((1.0 - q) * (1.0 - head));
            if tail <= policy.tail_tol {
                if !log_sum.is_finite() {
                    return Err(Error::NonFinite);
                }
                return Ok(EvalResult {
                    value: QComplex::new(log_sum, 0.0),
                    terms_used: n + 1,
                    tail_bound: tail,
                });
            }
        }
        head *= q;
    }
    Err(Error::TruncationExceeded {
        terms: policy.max_terms,
        tail_bound: head / (1.0 - q),
    })
}

/// (a;q)_n = prod_{k=0..n-1} (1 - a q^k); the empty product is 1.
pub fn qpoch_fin(a: QComplex, q: QBase, n: usize) -> Result<QComplex> {
    ensure_finite(a)?;
    let q = q.get();
    let mut prod = ONE;
    let mut aqk = a;
    for _ in 0..n {
        prod *= ONE - aqk;
        aqk *= q;
    }
    ensure_finite(prod)?;
    Ok(prod)
}

/// Ramanujan's entire function A_q(z) = sum_{n>=0} q^{n^2} / (q;q)_n (-z)^n.
pub fn ramanujan_aq(z: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(z)?;
    let q = q.get();
    let abs_z = z.norm();
    let mut sum = ONE;
    let mut term = ONE;
    let mut q_pow_odd = q; // q^{2n+1} after n steps
    let mut qn = 1.0; // q^n
    for n in 1..=policy.max_terms {
        qn *= q;
        // t_n = t_{n-1} * q^{2n-1} * (-z) / (1 - q^n)
        term *= -z * (q_pow_odd / q / (1.0 - qn)) * q * 1.0;
        sum += term;
        q_pow_odd *= q * q; // now q^{2n+1}
        // ratio bound |t_{n+1}/t_n| <= 2 q^{2n+1} |z| once q^{n+1} <= 1/2
        if qn * q <= 0.5 {
            let r = 2.0 * q_pow_odd * abs_z;
            if r < 0.5 {
                let tail = term.norm() * r / (1.0 - r);
                if tail <= policy.tail_tol {
                    ensure_finite(sum)?;
                    return Ok(EvalResult {
                        value: sum,
                        terms_used: n + 1,
                        tail_bound: tail,
                    });
                }
            }
        }
    }
    Err(Error::TruncationExceeded {
        terms: policy.max_terms,
        tail_bound: term.norm(),
    })
}

/// The confluent basic hypergeometric series
/// 1phi1(a; b; q, z) = sum_{n>=0} (a;q)_n q^{C(n,2)} / ((b;q)_n (q;q)_n) (-z)^n.
pub fn phi11(
    a: QComplex,
    b: QComplex,
    q: QBase,
    z: QComplex,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    ensure_finite(a)?;
    ensure_finite(b)?;
    ensure_finite(z)?;
    let q = q.get();
    let abs_a = a.norm();
    let abs_b = b.norm();
    let abs_z = z.norm();
    let pole_thresh = 1e-14 * (1.0 + abs_b);
    let mut sum = ONE;
    let mut term = ONE;
    let mut qn = 1.0; // q^n
    for n in 0..policy.max_terms {
        // advance t_n -> t_{n+1}:
        // ratio = (1 - a q^n) q^n (-z) / ((1 - b q^n) (1 - q^{n+1}))
        let bqn = b * qn;
        let denom_b = ONE - bqn;
        if denom_b.norm() < pole_thresh {
            return Err(Error::PoleAtB);
        }
        let denom_q = 1.0 - qn * q;
        term *= (ONE - a * qn) * (-z) * qn / (denom_b * denom_q);
        sum += term;
        let qn1 = qn * q;
        // certified ratio bound once the moduli are tame
        if abs_b * qn1 < 0.5 && qn1 * q <= 0.5 {
            let r = (1.0 + abs_a * qn1) * qn1 * abs_z
                / ((1.0 - abs_b * qn1) * (1.0 - qn1 * q));
            if r < 0.5 {
                let tail = term.norm() * r / (1.0 - r);
                if tail <= policy.tail_tol {
                    ensure_finite(sum)?;
                    return Ok(EvalResult {
                        value: sum,
                        terms_used: n + 2,
                        tail_bound: tail,
                    });
                }
            }
        }
        qn = qn1;
    }
    Err(Error::TruncationExceeded {
        terms: policy.max_terms,
        tail_bound: term.norm(),
    })
}

/// Bilateral theta sum sum_{n in Z} q^{n^2} (-z)^n for complex q with |q| < 1.
fn theta4_bilateral(z: QComplex, q: QComplex, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(z)?;
    ensure_finite(q)?;
    if z.norm() < 1e-300 {
        return Err(Error::ZeroArgument);
    }
    let abs_q = q.norm();
    if !(abs_q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta base must satisfy |q| < 1, got |q| = {abs_q}"
        )));
    }
    // Argument reduction into the annulus 1 <= |z| <= 1/|q| via the exact
    // symmetries theta4(1/z) = theta4(z) and theta4(z) = -qz theta4(q^2 z);
    // outside it the bilateral sum cancels against a large gross term mass.
    let mut z = z;
    let mut pref = ONE;
    if z.norm() < 1.0 {
        z = z.inv();
    }
    for _ in 0..policy.max_terms {
        if z.norm() * abs_q <= 1.0 {
            break;
        }
        pref *= -q * z;
        z *= q * q;
    }
    ensure_finite(pref)?;
    // For |tau| < 1 the dual nome exp(-i pi / tau) is smaller than q and the
    // direct sum is ill-conditioned (the value is exponentially smaller than
    // the gross term mass), so switch to the modular inversion
    //   theta4(v|tau) = (-i tau)^{-1/2} e^{-i pi v^2/tau} theta2(v/tau|-1/tau).
    let lq = q.ln();
    let tau = QComplex::new(lq.im / std::f64::consts::PI, -lq.re / std::f64::consts::PI);
    if tau.norm() < 1.0 {
        return theta4_modular(z, tau, pref, policy);
    }
    // The reduction prefactor rescales the truncation error, so the sum
    // must be carried to a correspondingly tighter absolute tail.
    let pref_norm = pref.norm();
    let tail_target = policy.tail_tol / pref_norm.max(1.0);
    let w = -z;
    let w_inv = ONE / w;
    let m = w.norm().max(w_inv.norm());
    let mut sum = ONE;
    let mut wp = ONE; // w^n
    let mut wm = ONE; // w^{-n}
    let mut qn2 = ONE; // q^{n^2}
    let mut q_odd = q; // q^{2n+1} with n = current index
    let mut abs_qn2 = 1.0;
    let mut abs_q_odd = abs_q;
    let mut mp = 1.0; // M^n
    for n in 1..=policy.max_terms {
        wp *= w;
        wm *= w_inv;
        qn2 *= q_odd; // q^{(n-1)^2} * q^{2n-1} = q^{n^2}
        abs_qn2 *= abs_q_odd;
        q_odd *= q * q;
        abs_q_odd *= abs_q * abs_q;
        mp *= m;
        sum += qn2 * (wp + wm);
        // |term_{+-(n+1)}| <= |q|^{(n+1)^2} M^{n+1}; ratio <= |q|^{2n+1} M
        let r = abs_q_odd * m;
        if r < 0.5 {
            let next = abs_qn2 * abs_q_odd * mp * m;
            let tail = 2.0 * next / (1.0 - r);
            if tail <= tail_target {
                let value = pref * sum;
                ensure_finite(value)?;
                return Ok(EvalResult {
                    value,
                    terms_used: 2 * n + 1,
                    tail_bound: pref_norm * tail,
                });
            }
        }
    }
    Err(Error::TruncationExceeded {
        terms: policy.max_terms,
        tail_bound: abs_qn2 * mp,
    })
}

/// Modular-inverted evaluation for |tau| < 1: the dual nome
/// e^{-i pi/tau} is far smaller than q, so the theta2 sum is dominated by
/// its leading term and free of the catastrophic cancellation the direct
/// sum suffers as q -> 1. The dominant exponent is factored out of the sum
/// so no intermediate overflows even when single terms exceed 1e300.
fn theta4_modular(
    z: QComplex,
    tau: QComplex,
    pref: QComplex,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    let pi = std::f64::consts::PI;
    let i = QComplex::new(0.0, 1.0);
    let lz = z.ln();
    let v = QComplex::new(lz.im / (2.0 * pi), -lz.re / (2.0 * pi));
    let tau_p = -tau.inv(); // -1/tau, upper half plane
    let v_p = v / tau;
    // theta2(v'|tau') = sum_{n in Z} e^{i pi tau' (n+1/2)^2 + (2n+1) i pi v'};
    // the n and -n-1 terms pair into +v' / -v' exponents.
    let drop = 60.0f64.max(5.0 - policy.tail_tol.ln());
    let mut exps: Vec<(QComplex, QComplex)> = Vec::new();
    let mut top = f64::NEG_INFINITY;
    loop {
        let h = exps.len() as f64 + 0.5;
        let base = i * pi * tau_p * h * h;
        let osc = 2.0 * h * pi * i * v_p;
        let a = base + osc;
        let b = base - osc;
        top = top.max(a.re).max(b.re);
        // the exponents are concave in n, so once both fall `drop` below the
        // running maximum every later term is smaller still
        if a.re < top - drop && b.re < top - drop {
            break;
        }
        exps.push((a, b));
        if exps.len() > policy.max_terms {
            return Err(Error::TruncationExceeded {
                terms: policy.max_terms,
                tail_bound: f64::INFINITY,
            });
        }
    }
    let mut sum = QComplex::new(0.0, 0.0);
    for (a, b) in exps.iter().rev() {
        sum += (a - top).exp() + (b - top).exp();
    }
    // (-i tau)^{-1/2} on the principal branch; Re(-i tau) > 0 for Im tau > 0.
    let scale = ONE / (-(i * tau)).sqrt();
    let gauss = (-(i * pi) * v * v / tau + top).exp();
    let head = pref * scale * gauss;
    let value = head * sum;
    ensure_finite(value)?;
    Ok(EvalResult {
        value,
        terms_used: 2 * exps.len(),
        tail_bound: 4.0 * (-drop).exp() * head.norm(),
    })
}

/// theta_4(z; q) = sum_{n in Z} q^{n^2} (-z)^n, truncated symmetrically.
pub fn theta4_series(z: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    theta4_bilateral(z, QComplex::new(q.get(), 0.0), policy)
}

/// theta_4 via the triple product (q^2, qz, q/z; q^2)_inf.
pub fn theta4_product(z: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(z)?;
    if z.norm() < 1e-300 {
        return Err(Error::ZeroArgument);
    }
    let qv = q.get();
    let q2 = q.squared();
    let f1 = qpoch_inf(QComplex::new(qv * qv, 0.0), q2, policy)?;
    let f2 = qpoch_inf(z * qv, q2, policy)?;
    let f3 = qpoch_inf(z.inv() * qv, q2, policy)?;
    Ok(EvalResult {
        value: f1.value * f2.value * f3.value,
        terms_used: f1.terms_used + f2.terms_used + f3.terms_used,
        tail_bound: f1.tail_bound + f2.tail_bound + f3.tail_bound,
    })
}

/// theta_4(v | tau) with z = e^{2 pi i v}, q = e^{pi i tau}, Im(tau) > 0.
pub fn theta4_vtau(v: QComplex, tau: QComplex, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(v)?;
    ensure_finite(tau)?;
    if !(tau.im > 0.0) {
        return Err(Error::BadTau);
    }
    let i = QComplex::new(0.0, 1.0);
    let z = (2.0 * std::f64::consts::PI * i * v).exp();
    let q = (std::f64::consts::PI * i * tau).exp();
    theta4_bilateral(z, q, policy)
}

/// Gamma_q(x) = (1-q)^{1-x} (q;q)_inf / (q^x;q)_inf, principal branches.
pub fn q_gamma(x: QComplex, q: QBase, policy: &TruncationPolicy) -> Result<EvalResult> {
    ensure_finite(x)?;
    let qv = q.get();
    let qx = (x * q.ln()).exp();
    let num = qpoch_inf(QComplex::new(qv, 0.0), q, policy)?;
    let den = qpoch_inf_impl(qx, q, policy, Some(1e-14))?;
    let prefactor = ((ONE - x) * (1.0 - qv).ln()).exp();
    let value = prefactor * num.value / den.value;
    ensure_finite(value)?;
    Ok(EvalResult {
        value,
        terms_used: num.terms_used + den.terms_used,
        tail_bound: num.tail_bound + den.tail_bound,
    })
}
