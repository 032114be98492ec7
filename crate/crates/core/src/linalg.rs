//! Dense complex linear algebra built on a cyclic Jacobi eigensolver for
//! Hermitian matrices.
//!
//! Everything spectral in the crate (|S|, fractional powers, norms, spectral
//! radii of positive products) reduces to [`hermitian_eigen`]. Tolerances are
//! relative to the operand's norm with an absolute floor of [`ABS_FLOOR`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Absolute floor applied to every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;

/// Relative asymmetry accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Negative eigenvalues down to `-PSD_CLAMP_TOL·‖A‖` are clamped to zero.
pub const PSD_CLAMP_TOL: f64 = 1e-8;

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
const TRIDIAGONAL_MAX_ITERS: usize = 60;

pub(crate) fn tolerance(rel: f64, scale: f64) -> f64 {
    (rel * scale).max(ABS_FLOOR)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns of `vectors`)
/// of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Largest eigenvalue magnitude; the operator norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// `V diag(f(λ)) V*`, exactly Hermitian.
    pub fn compose(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        compose_hermitian(&self.vectors, &mapped)
    }

    /// Same decomposition with negative roundoff removed from the spectrum.
    pub(crate) fn clamped(mut self) -> Self {
        for l in &mut self.eigenvalues {
            *l = l.max(0.0);
        }
        self
    }

    /// `A^p` for the (clamped) positive matrix this decomposes.
    pub(crate) fn power(&self, p: f64) -> ComplexMatrix {
        self.compose(|l| l.max(0.0).powf(p))
    }
}

fn compose_hermitian(v: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = v.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &lam) in values.iter().enumerate() {
                if lam != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * lam;
                }
            }
            if i == j {
                out[(i, i)] = C64::new(acc.re, 0.0);
            } else {
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
    }
    out
}

/// Cyclic Jacobi on the Hermitian part of `h`. Returns unsorted diagonal and,
/// if requested, the accumulated rotations.
fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<Vec<C64>>) {
    let n = h.rows();
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = C64::new(h[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = want_vectors.then(|| {
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = C64::new(1.0, 0.0);
        }
        v
    });

    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // ‖H‖ ≥ ‖H‖_F/√n, so this threshold is never looser than 1e-12·‖H‖.
    let threshold = JACOBI_OFF_TOL * fro / (n as f64).sqrt();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let d = apq.norm();
                if d == 0.0 {
                    continue;
                }
                let phase = apq / d;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * d);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(phase, 1) · [[c, s], [-s, c]]
                let g00 = phase * c;
                let g01 = phase * s;
                let g10 = C64::new(-s, 0.0);
                let g11 = C64::new(c, 0.0);

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g00 + akq * g10;
                    a[k * n + q] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g00.conj() * apk + g10.conj() * aqk;
                    a[q * n + k] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * g00 + vkq * g10;
                        v[k * n + q] = vkp * g01 + vkq * g11;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i].re).collect(), v)
}

/// Eigendecomposition of the Hermitian part of `h`, no validation.
pub(crate) fn eigh(h: &ComplexMatrix) -> EigenDecomposition {
    let n = h.rows();
    let (vals, vecs) = jacobi(h, true);
    let vecs = vecs.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| vecs[i * n + order[j]]);
    EigenDecomposition { eigenvalues, vectors }
}

/// Ascending eigenvalues of the Hermitian part of `h`, no validation.
///
/// Values only, so this takes the cheaper tridiagonal route instead of Jacobi.
pub(crate) fn eigvalsh(h: &ComplexMatrix) -> Vec<f64> {
    let (mut d, mut e) = tridiagonalize(h);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Householder reduction of the Hermitian part of `h` to a real symmetric
/// tridiagonal matrix: returns the diagonal and the subdiagonal magnitudes
/// (the phases of a Hermitian tridiagonal matrix do not affect its spectrum).
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a[k * n + k].re;
        let sigma = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        e[k] = sigma;
        if k + 2 == n || sigma == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] += phase * sigma;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = β B v, K = β (v* p) / 2, q = p − K v, B ← B − v q* − q v*
        for i in k + 1..n {
            p[i] = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum::<C64>() * beta;
        }
        let kk = 0.5 * beta * (k + 1..n).map(|i| v[i].conj() * p[i]).sum::<C64>().re;
        for i in k + 1..n {
            p[i] -= v[i] * kk;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= v[i] * p[j].conj() + p[i] * v[j].conj();
            }
        }
    }
    if n > 0 {
        d[n - 1] = a[n * n - 1].re;
    }
    (d, e)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix
/// (`e[i]` couples `i` and `i + 1`). Eigenvalues are left in `d`, unsorted.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        for _ in 0..TRIDIAGONAL_MAX_ITERS {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

pub(crate) fn lambda_max(h: &ComplexMatrix) -> f64 {
    match h.rows() {
        1 => h[(0, 0)].re,
        2 => {
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let half_gap = 0.5 * (a - d);
            0.5 * (a + d) + half_gap.hypot(h[(0, 1)].norm())
        }
        _ => *eigvalsh(h).last().expect("non-empty spectrum"),
    }
}

fn is_exactly_hermitian(h: &ComplexMatrix) -> bool {
    let n = h.rows();
    h.is_square() && (0..n).all(|i| h[(i, i)].im == 0.0 && (i + 1..n).all(|j| h[(i, j)] == h[(j, i)].conj()))
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let n = h.require_square()?;
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = (h - &h.adjoint()).frobenius_norm();
    // ‖H‖_F/√n ≤ ‖H‖: a Frobenius-based check at this level implies the operator-norm one.
    let tolerance = tolerance(HERMITIAN_TOL, h.frobenius_norm() / (n as f64).sqrt());
    if asymmetry > tolerance {
        return Err(Error::NotHermitian { asymmetry, tolerance });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(h)?;
    Ok(eigh(h))
}

pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(eigvalsh(h))
}

fn check_psd(eig: &EigenDecomposition) -> Result<()> {
    let tol = tolerance(PSD_CLAMP_TOL, eig.spectral_norm());
    let min = eig.min_eigenvalue();
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Decomposition of `S*S` with the spectrum clamped at zero.
pub(crate) fn gram_eigen(s: &ComplexMatrix) -> EigenDecomposition {
    eigh(&(&s.adjoint() * s)).clamped()
}

/// `|S| = (S*S)^{1/2}`.
pub fn matrix_abs(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    if is_exactly_hermitian(s) {
        return Ok(eigh(s).compose(f64::abs));
    }
    Ok(gram_eigen(s).power(0.5))
}

/// `A^p` for positive semidefinite `A` and `p ≥ 0`.
pub fn psd_power(a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !p.is_finite() || p < 0.0 {
        return Err(Error::BadExponent(p));
    }
    let eig = hermitian_eigen(a)?;
    check_psd(&eig)?;
    Ok(eig.power(p))
}

/// Applies a real scalar map to the spectrum of a Hermitian matrix.
pub fn spectral_map(a: &ComplexMatrix, map: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(a)?.compose(map))
}

pub(crate) fn norm_unchecked(s: &ComplexMatrix) -> f64 {
    if s.is_zero() {
        return 0.0;
    }
    if is_exactly_hermitian(s) {
        let vals = eigvalsh(s);
        return vals[0].abs().max(vals[vals.len() - 1].abs());
    }
    let gram = if s.rows() < s.cols() {
        s * &s.adjoint()
    } else {
        &s.adjoint() * s
    };
    lambda_max(&gram).max(0.0).sqrt()
}

/// Largest singular value.
pub fn operator_norm(s: &ComplexMatrix) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(norm_unchecked(s))
}

/// Singular values in descending order.
pub fn singular_values(s: &ComplexMatrix) -> Result<Vec<f64>> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(singular_values_unchecked(s))
}

pub(crate) fn singular_values_unchecked(s: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = if is_exactly_hermitian(s) {
        eigvalsh(s).into_iter().map(f64::abs).collect()
    } else {
        let gram = if s.rows() < s.cols() {
            s * &s.adjoint()
        } else {
            &s.adjoint() * s
        };
        eigvalsh(&gram).into_iter().map(|l| l.max(0.0).sqrt()).collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Validates a Schatten exponent: `p ≥ 1` or `p = ∞`.
pub fn check_schatten_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::BadExponent(p))
    } else {
        Ok(())
    }
}

pub(crate) fn schatten_from_singular(sv: &[f64], p: f64) -> f64 {
    let top = sv.iter().fold(0.0f64, |m, &x| m.max(x));
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    top * sv.iter().map(|&x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Schatten p-norm `(Σ σᵢᵖ)^{1/p}`; `p = f64::INFINITY` gives the operator norm.
pub fn schatten_norm(s: &ComplexMatrix, p: f64) -> Result<f64> {
    check_schatten_exponent(p)?;
    if p.is_infinite() {
        return operator_norm(s);
    }
    Ok(schatten_from_singular(&singular_values(s)?, p))
}

pub(crate) fn schatten_unchecked(s: &ComplexMatrix, p: f64) -> f64 {
    if p.is_infinite() {
        norm_unchecked(s)
    } else {
        schatten_from_singular(&singular_values_unchecked(s), p)
    }
}

/// `r(AB) = λ_max(A^{1/2} B A^{1/2})` for positive semidefinite `A`, `B`.
pub fn spectral_radius_psd_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.require_square()?;
    a.check_same_shape(b)?;
    let a_eig = hermitian_eigen(a)?;
    check_psd(&a_eig)?;
    check_psd(&hermitian_eigen(b)?)?;
    Ok(psd_product_radius(&a_eig.power(0.5), b))
}

/// `λ_max(H B H)` for `H = A^{1/2}` already computed.
pub(crate) fn psd_product_radius(a_half: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    lambda_max(&(&(a_half * b) * a_half)).max(0.0)
}

/// `(ℜS, ℑS)` with `ℜS = (S + S*)/2` and `ℑS = (S − S*)/(2i)`.
pub fn cartesian_decomposition(s: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    s.require_square()?;
    Ok(cartesian_unchecked(s))
}

pub(crate) fn cartesian_unchecked(s: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = s.rows();
    let re = ComplexMatrix::from_fn(n, n, |i, j| (s[(i, j)] + s[(j, i)].conj()) * 0.5);
    let im = ComplexMatrix::from_fn(n, n, |i, j| {
        let d = s[(i, j)] - s[(j, i)].conj();
        C64::new(d.im * 0.5, -d.re * 0.5)
    });
    (re, im)
}

/// `ℜ(e^{iθ}S) = cos θ · ℜS − sin θ · ℑS`.
pub(crate) fn rotated_real_part(re: &ComplexMatrix, im: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let (sin, cos) = theta.sin_cos();
    let mut out = re.scale_real(cos);
    for (o, b) in out.data_mut().iter_mut().zip(im.data()) {
        *o -= b * sin;
    }
    out
}

/// Operator-class flags of a square matrix at a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixClassification {
    pub is_hermitian: bool,
    pub is_normal: bool,
    pub is_accretive: bool,
    pub is_dissipative: bool,
    pub is_psd: bool,
    pub tolerance: f64,
    pub min_real_eigenvalue: f64,
    pub min_imag_eigenvalue: f64,
}

impl MatrixClassification {
    pub fn is_accretive_dissipative(&self) -> bool {
        self.is_accretive && self.is_dissipative
    }
}

/// Classifies `S` with every test relative to `‖S‖` (floor [`ABS_FLOOR`]).
pub fn classify(s: &ComplexMatrix, tol: f64) -> Result<MatrixClassification> {
    s.require_square()?;
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::BadShape(format!(
            "classification tolerance {tol} must be positive"
        )));
    }
    let (re, im) = cartesian_unchecked(s);
    Ok(classify_parts(s, &re, &im, norm_unchecked(s), tol))
}

pub(crate) fn classify_parts(
    s: &ComplexMatrix,
    re: &ComplexMatrix,
    im: &ComplexMatrix,
    norm: f64,
    tol: f64,
) -> MatrixClassification {
    let thr = tolerance(tol, norm);
    let min_re = eigvalsh(re)[0];
    let min_im = eigvalsh(im)[0];
    let is_hermitian = norm_unchecked(im) <= thr;
    let commutator = &(s * &s.adjoint()) - &(&s.adjoint() * s);
    let is_normal = norm_unchecked(&commutator) <= tolerance(tol, norm * norm);
    let is_accretive = min_re >= -thr;
    MatrixClassification {
        is_hermitian,
        is_normal,
        is_accretive,
        is_dissipative: min_im >= -thr,
        is_psd: is_hermitian && is_accretive,
        tolerance: tol,
        min_real_eigenvalue: min_re,
        min_imag_eigenvalue: min_im,
    }
}

/// The 2n×2n block matrix `[[O, S], [T*, O]]`.
pub fn off_diag_embed(s: &ComplexMatrix, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = s.require_square()?;
    s.check_same_shape(t)?;
    Ok(ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => s[(i, j - n)],
        (false, true) => t[(j, i - n)].conj(),
        _ => C64::new(0.0, 0.0),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn shear() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap()
    }

    fn jordan2() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn eigen_identity_and_diagonal() {
        let e = hermitian_eigen(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = hermitian_eigen(&ComplexMatrix::from_real_diag(&[3.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 3.0]);
    }

    #[test]
    fn eigen_swap_matrix() {
        // det([[−λ, 1], [1, −λ]]) = λ² − 1
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eigen_complex_two_by_two() {
        // [[2, i], [−i, 2]] has eigenvalues 2 ± 1
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]).unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 3.0, epsilon = 1e-14);
        let rebuilt = e.compose(|l| l);
        assert!(rebuilt.distance(&h) < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian_and_non_finite() {
        assert!(matches!(hermitian_eigen(&shear()), Err(Error::NotHermitian { .. })));
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]])
            .unwrap()
            .map(|z| if z.re == 1.0 { c(f64::INFINITY, 0.0) } else { z });
        assert_eq!(hermitian_eigen(&bad).unwrap_err(), Error::NonFinite);
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn eigen_of_zero_matrix() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        assert!(e.vectors.distance(&ComplexMatrix::identity(3)) == 0.0);
    }

    #[test]
    fn abs_examples() {
        assert!(
            matrix_abs(&ComplexMatrix::identity(3))
                .unwrap()
                .distance(&ComplexMatrix::identity(3))
                < 1e-15
        );
        let a = matrix_abs(&jordan2()).unwrap();
        assert!(a.distance(&ComplexMatrix::from_real_diag(&[0.0, 1.0])) < 1e-15);
        assert_eq!(
            matrix_abs(&ComplexMatrix::zeros(2, 2)).unwrap(),
            ComplexMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn psd_power_examples() {
        let r = psd_power(&ComplexMatrix::identity(2), 0.5).unwrap();
        assert!(r.distance(&ComplexMatrix::identity(2)) < 1e-15);
        let r = psd_power(&ComplexMatrix::from_real_diag(&[4.0, 9.0]), 0.5).unwrap();
        assert!(r.distance(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
        // p = 0 maps the kernel to 1 as well
        let r = psd_power(&ComplexMatrix::from_real_diag(&[0.0, 2.0]), 0.0).unwrap();
        assert!(r.distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn psd_power_errors() {
        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(psd_power(&neg, 0.5), Err(Error::NotPsd { .. })));
        assert!(matches!(
            psd_power(&ComplexMatrix::identity(2), -1.0),
            Err(Error::BadExponent(_))
        ));
        assert!(matches!(
            psd_power(&ComplexMatrix::identity(2), f64::NAN),
            Err(Error::BadExponent(_))
        ));
        // roundoff-sized negatives are clamped
        let tiny = ComplexMatrix::from_real_diag(&[1.0, -1e-12]);
        let r = psd_power(&tiny, 0.5).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn spectral_map_examples() {
        let r = spectral_map(&ComplexMatrix::from_real_diag(&[1.0, 4.0]), |t| t * t).unwrap();
        assert!(r.distance(&ComplexMatrix::from_real_diag(&[1.0, 16.0])) < 1e-14);
        let r = spectral_map(&ComplexMatrix::from_real_diag(&[0.25, 1.0]), f64::sqrt).unwrap();
        assert!(r.distance(&ComplexMatrix::from_real_diag(&[0.5, 1.0])) < 1e-15);
        assert!(matches!(spectral_map(&shear(), |t| t), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn norm_examples() {
        assert_abs_diff_eq!(operator_norm(&jordan2()).unwrap(), 1.0, epsilon = 1e-15);
        let d = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(0.0, -4.0)]);
        assert_abs_diff_eq!(operator_norm(&d).unwrap(), 4.0, epsilon = 1e-14);
        // singular values of the shear are √2 ± 1
        assert_abs_diff_eq!(operator_norm(&shear()).unwrap(), 1.0 + 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn schatten_examples() {
        assert_abs_diff_eq!(
            schatten_norm(&ComplexMatrix::identity(3), 1.0).unwrap(),
            3.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            schatten_norm(&ComplexMatrix::from_real_diag(&[3.0, 4.0]), 2.0).unwrap(),
            5.0,
            epsilon = 1e-14
        );
        let s = shear();
        assert_eq!(schatten_norm(&s, f64::INFINITY).unwrap(), operator_norm(&s).unwrap());
        assert!(matches!(schatten_norm(&s, 0.5), Err(Error::BadExponent(_))));
        assert_eq!(schatten_norm(&ComplexMatrix::zeros(2, 2), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn psd_product_radius_examples() {
        let i = ComplexMatrix::identity(2);
        assert_abs_diff_eq!(spectral_radius_psd_product(&i, &i).unwrap(), 1.0, epsilon = 1e-14);
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert_abs_diff_eq!(spectral_radius_psd_product(&a, &b).unwrap(), 8.0, epsilon = 1e-13);
        assert!(matches!(
            spectral_radius_psd_product(&a, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            spectral_radius_psd_product(&a, &ComplexMatrix::from_real_diag(&[1.0, -1.0])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn cartesian_examples() {
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(1.0, -1.0), c(-1.0, 0.0)]]).unwrap();
        let (re, im) = cartesian_decomposition(&h).unwrap();
        assert_eq!(re, h);
        assert!(im.is_zero());
        let (re, im) = cartesian_decomposition(&h.scale(c(0.0, 1.0))).unwrap();
        assert!(re.is_zero());
        assert!(im.distance(&h) < 1e-15);

        // (S − S*)/(2i) for the shear: entry (0,1) = 2/(2i) = −i, entry (1,0) = −2/(2i) = i
        let (re, im) = cartesian_decomposition(&shear()).unwrap();
        assert_eq!(re, ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap());
        let expected =
            ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(im, expected);
        assert!(matches!(
            cartesian_decomposition(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let k = classify(&ComplexMatrix::identity(2), 1e-9).unwrap();
        assert!(k.is_accretive && k.is_hermitian && k.is_normal && k.is_psd);
        assert!(k.is_dissipative);

        let k = classify(&ComplexMatrix::identity(2).scale(c(0.0, 1.0)), 1e-9).unwrap();
        assert!(k.is_dissipative && k.is_accretive && !k.is_hermitian && k.is_normal);

        let k = classify(&shear(), 1e-9).unwrap();
        assert!(k.is_accretive && !k.is_dissipative && !k.is_normal && !k.is_psd);
        assert_abs_diff_eq!(k.min_real_eigenvalue, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.min_imag_eigenvalue, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn embed_examples() {
        let one = ComplexMatrix::identity(1);
        let e = off_diag_embed(&one, &one).unwrap();
        assert_eq!(e, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());

        let s = shear();
        let e = off_diag_embed(&s, &ComplexMatrix::zeros(2, 2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(e[(i, j + 2)], s[(i, j)]);
                assert_eq!(e[(i + 2, j)], c(0.0, 0.0));
                assert_eq!(e[(i, j)], c(0.0, 0.0));
            }
        }
        assert!(matches!(
            off_diag_embed(&s, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
