//! Gram matrices of the positive definite kernels and their certification.
//!
//! Three kernel families are supported, each a product of single-factor
//! kernels f_l(x) with f(-x) = conj(f(x)):
//!
//! - Euler:  prod_l exp(x^2 / (4 ln q_l)) / (y_l e^{ix}; q_l)_inf
//! - Phi11:  prod_l (a_l z_l e^{ix}; q_l)_inf exp(x^2 / (2 ln q_l))
//!           / ((b_l e^{ix}; q_l)_inf (z_l e^{ix}; q_l)_inf)
//! - Gauss:  prod_j e^{-x^2} (-c_j e^{-k_j^2 - 2 x k_j}; q_j)_inf
//!           (-c_j e^{-k_j^2 + 2 x k_j}; q_j)_inf  with  q_j = e^{-2 k_j^2}
//!
//! A Gram matrix over sample points x_1..x_m has entries f(x_j - x_k); it is
//! Hermitian by construction and positive semidefinite on the hypothesis
//! domain. PSD certification goes through a full eigendecomposition (cyclic
//! Jacobi on the real symmetric embedding) so rank-deficient instances from
//! repeated points still certify with a quantitative margin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::{qpoch_inf, QBase, QComplex, TruncationPolicy};

const ONE: QComplex = QComplex::new(1.0, 0.0);

/// One Euler-kernel factor: 0 < y, q < 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EulerFactor {
    pub y: f64,
    pub q: f64,
}

/// One 1phi1-kernel factor: 0 < b, z, q < 1 and -1 < a < 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Phi11Factor {
    pub a: f64,
    pub b: f64,
    pub z: f64,
    pub q: f64,
}

/// One Gauss-kernel factor: 0 < c < 1, k > 0; the base q = e^{-2k^2} is derived.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussFactor {
    pub c: f64,
    pub k: f64,
}

/// Kernel family plus its per-factor parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "theorem", content = "params", rename_all = "lowercase")]
pub enum GramParams {
    Euler(Vec<EulerFactor>),
    Phi11(Vec<Phi11Factor>),
    Gauss(Vec<GaussFactor>),
}

/// A Gram matrix instance: kernel family, factor parameters, sample points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramSpec {
    #[serde(flatten)]
    pub family: GramParams,
    pub points: Vec<f64>,
}

fn in_open_unit(v: f64) -> bool {
    v.is_finite() && v > 0.0 && v < 1.0
}

impl GramSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidParameter("points must be nonempty".into()));
        }
        if self.points.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        match &self.family {
            GramParams::Euler(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidParameter("params must be nonempty".into()));
                }
                for f in fs {
                    if !in_open_unit(f.y) || !in_open_unit(f.q) {
                        return Err(Error::DomainViolation(format!(
                            "euler factor needs 0 < y, q < 1, got y={} q={}",
                            f.y, f.q
                        )));
                    }
                }
            }
            GramParams::Phi11(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidParameter("params must be nonempty".into()));
                }
                for f in fs {
                    if !in_open_unit(f.b)
                        || !in_open_unit(f.z)
                        || !in_open_unit(f.q)
                        || !(f.a.is_finite() && f.a > -1.0 && f.a < 1.0)
                    {
                        return Err(Error::DomainViolation(format!(
                            "phi11 factor needs 0 < b, z, q < 1 and -1 < a < 1, got a={} b={} z={} q={}",
                            f.a, f.b, f.z, f.q
                        )));
                    }
                }
            }
            GramParams::Gauss(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidParameter("params must be nonempty".into()));
                }
                for f in fs {
                    if !in_open_unit(f.c) || !(f.k.is_finite() && f.k > 0.0) {
                        return Err(Error::DomainViolation(format!(
                            "gauss factor needs 0 < c < 1 and k > 0, got c={} k={}",
                            f.c, f.k
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Kernel value f(x) for this spec's family and parameters.
    pub fn kernel_value(&self, x: f64) -> Result<QComplex> {
        match &self.family {
            GramParams::Euler(fs) => kernel_value_euler(fs, x),
            GramParams::Phi11(fs) => kernel_value_phi11(fs, x),
            GramParams::Gauss(fs) => kernel_value_gauss(fs, x),
        }
    }
}

/// Euler kernel: prod_l exp(x^2/(4 ln q_l)) / (y_l e^{ix}; q_l)_inf.
pub fn kernel_value_euler(params: &[EulerFactor], x: f64) -> Result<QComplex> {
    let policy = TruncationPolicy::default();
    let eix = QComplex::new(0.0, x).exp();
    let mut prod = ONE;
    for f in params {
        let qb = QBase::new(f.q)?;
        let gauss = (x * x / (4.0 * qb.ln())).exp();
        let den = qpoch_inf(eix * f.y, qb, &policy)?.value;
        prod *= gauss / den;
    }
    Ok(prod)
}

/// 1phi1 kernel: prod_l (a z e^{ix}; q)_inf exp(x^2/(2 ln q))
/// / ((b e^{ix}; q)_inf (z e^{ix}; q)_inf).
pub fn kernel_value_phi11(params: &[Phi11Factor], x: f64) -> Result<QComplex> {
    let policy = TruncationPolicy::default();
    let eix = QComplex::new(0.0, x).exp();
    let mut prod = ONE;
    for f in params {
        let qb = QBase::new(f.q)?;
        let gauss = (x * x / (2.0 * qb.ln())).exp();
        let num = qpoch_inf(eix * (f.a * f.z), qb, &policy)?.value;
        let den_b = qpoch_inf(eix * f.b, qb, &policy)?.value;
        let den_z = qpoch_inf(eix * f.z, qb, &policy)?.value;
        prod *= num * gauss / (den_b * den_z);
    }
    Ok(prod)
}

/// Gauss kernel: prod_j e^{-x^2} (-c e^{-k^2-2xk}; q)_inf (-c e^{-k^2+2xk}; q)_inf
/// with q = e^{-2k^2}. Real-valued for real x.
pub fn kernel_value_gauss(params: &[GaussFactor], x: f64) -> Result<QComplex> {
    let policy = TruncationPolicy::default();
    let mut prod = ONE;
    for f in params {
        let qb = QBase::new((-2.0 * f.k * f.k).exp())?;
        let gauss = (-x * x).exp();
        let lo = qpoch_inf(
            QComplex::new(-f.c * (-f.k * f.k - 2.0 * x * f.k).exp(), 0.0),
            qb,
            &policy,
        )?
        .value;
        let hi = qpoch_inf(
            QComplex::new(-f.c * (-f.k * f.k + 2.0 * x * f.k).exp(), 0.0),
            qb,
            &policy,
        )?
        .value;
        prod *= gauss * lo * hi;
    }
    Ok(prod)
}

/// Dense complex square matrix, Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<QComplex>, // row-major
}

impl HermitianMatrix {
    /// Builds from a generator evaluated only on j <= k; the lower triangle
    /// is the mirrored conjugate and the diagonal is forced real.
    pub fn from_fn<F>(dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<QComplex>,
    {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        let mut data = vec![QComplex::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            for k in j..dim {
                let mut v = f(j, k)?;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
                if j == k {
                    v.im = 0.0;
                }
                data[j * dim + k] = v;
                data[k * dim + j] = v.conj();
            }
        }
        Ok(HermitianMatrix { dim, data })
    }

    /// Builds from explicit rows; rejects non-square or non-Hermitian input.
    pub fn from_rows(rows: &[Vec<QComplex>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("rows must form a nonempty square matrix".into()));
        }
        for j in 0..dim {
            if rows[j][j].im != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "diagonal entry ({j},{j}) is not real"
                )));
            }
            for k in j + 1..dim {
                if rows[j][k] != rows[k][j].conj() {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({j},{k}) and ({k},{j}) are not conjugate"
                    )));
                }
            }
        }
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            data.extend_from_slice(r);
        }
        Ok(HermitianMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![QComplex::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            data[j * dim + j] = ONE;
        }
        HermitianMatrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> QComplex {
        self.data[j * self.dim + k]
    }

    /// max |entry|, the scale used by relative tolerances.
    pub fn scale(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<Vec<QComplex>> {
        (0..self.dim)
            .map(|j| self.data[j * self.dim..(j + 1) * self.dim].to_vec())
            .collect()
    }
}

/// Outcome of a PSD certification.
#[derive(Debug, Clone, Copy)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
    pub scale: f64,
}

/// entries[j][k] = f(x_j - x_k) for the spec's kernel; points are used
/// exactly as given (no sorting, no deduplication).
pub fn build_gram(spec: &GramSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let pts = &spec.points;
    HermitianMatrix::from_fn(pts.len(), |j, k| spec.kernel_value(pts[j] - pts[k]))
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The m x m complex Hermitian H = A + iB embeds into the real symmetric
/// 2m x 2m matrix [[A, -B], [B, A]], whose spectrum is that of H doubled;
/// cyclic Jacobi diagonalizes it and adjacent pairs are averaged back.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = m.dim;
    let nn = 2 * n;
    let mut s = vec![0.0f64; nn * nn];
    for j in 0..n {
        for k in 0..n {
            let v = m.get(j, k);
            s[j * nn + k] = v.re;
            s[(j + n) * nn + (k + n)] = v.re;
            s[j * nn + (k + n)] = -v.im;
            s[(j + n) * nn + k] = v.im;
        }
    }
    let mut eigs = jacobi_eigenvalues(&mut s, nn)?;
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((0..n).map(|i| 0.5 * (eigs[2 * i] + eigs[2 * i + 1])).collect())
}

/// Cyclic Jacobi for a real symmetric matrix in row-major full storage.
fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let budget = 30 * n * n;
    let mut rotations = 0usize;
    loop {
        // off-diagonal Frobenius mass; converged when negligible vs diagonal
        let mut off = 0.0;
        let mut dia = 0.0;
        for p in 0..n {
            dia += a[p * n + p] * a[p * n + p];
            for r in p + 1..n {
                off += a[p * n + r] * a[p * n + r];
            }
        }
        if off == 0.0 || off <= f64::EPSILON * f64::EPSILON * (dia + 2.0 * off) {
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = a[p * n + r];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[r * n + r];
                // rotation is a no-op at double precision: annihilate and move on
                if 100.0 * apq.abs() <= f64::EPSILON * (app.abs() + aqq.abs()) {
                    a[p * n + r] = 0.0;
                    a[r * n + p] = 0.0;
                    continue;
                }
                rotations += 1;
                if rotations > budget {
                    return Err(Error::NumericalFailure(format!(
                        "Jacobi eigensolver exceeded {budget} rotations"
                    )));
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[r * n + r] = aqq + t * apq;
                a[p * n + r] = 0.0;
                a[r * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == r {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + r];
                    let new_p = aip - s * (aiq + tau * aip);
                    let new_q = aiq + s * (aip - tau * aiq);
                    a[i * n + p] = new_p;
                    a[p * n + i] = new_p;
                    a[i * n + r] = new_q;
                    a[r * n + i] = new_q;
                }
            }
        }
    }
    Ok((0..n).map(|p| a[p * n + p]).collect())
}

/// PSD verdict from the full spectrum; tolerance = rel_tol * dim * max|entry|.
pub fn psd_check(m: &HermitianMatrix, rel_tol: f64) -> Result<PsdVerdict> {
    if !(rel_tol >= 0.0) {
        return Err(Error::InvalidParameter("rel_tol must be >= 0".into()));
    }
    let eigs = eigenvalues(m)?;
    let min_eigenvalue = eigs[0];
    let scale = m.scale();
    let tolerance_used = rel_tol * m.dim as f64 * scale;
    Ok(PsdVerdict {
        is_psd: min_eigenvalue >= -tolerance_used,
        min_eigenvalue,
        tolerance_used,
        scale,
    })
}

/// Entrywise (Schur/Hadamard) product; Hermitian structure is preserved.
pub fn schur_product(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch { a: a.dim, b: b.dim });
    }
    HermitianMatrix::from_fn(a.dim, |j, k| Ok(a.get(j, k) * b.get(j, k)))
}

/// Determinant via the eigenvalue product (real for Hermitian input).
pub fn det_hermitian(m: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().product())
}
