use std::cell::OnceCell;

use crate::error::{Error, Result};
use crate::linalg::{
    cartesian_unchecked, classify_parts, eigh, gram_eigen, norm_unchecked, EigenDecomposition, MatrixClassification,
};
use crate::matrix::ComplexMatrix;
use crate::radius::radius_from_parts;

use super::EvalContext;

/// A square matrix together with lazily computed derived quantities.
///
/// Bounds evaluated on the same trial share one `Operand`, so `ω(S)`, `|S|`,
/// `|S*|` and friends are computed once. Cached values assume every call uses
/// the same [`EvalContext`].
#[derive(Debug)]
pub struct Operand {
    matrix: ComplexMatrix,
    re: ComplexMatrix,
    im: ComplexMatrix,
    norm: f64,
    omega: OnceCell<f64>,
    class: OnceCell<MatrixClassification>,
    norm_re: OnceCell<f64>,
    norm_im: OnceCell<f64>,
    square_norm: OnceCell<f64>,
    gram: OnceCell<EigenDecomposition>,
    cogram: OnceCell<EigenDecomposition>,
    abs: OnceCell<ComplexMatrix>,
    abs_half: OnceCell<ComplexMatrix>,
    abs_adj: OnceCell<ComplexMatrix>,
    abs_adj_half: OnceCell<ComplexMatrix>,
    gram_matrix: OnceCell<ComplexMatrix>,
    cogram_matrix: OnceCell<ComplexMatrix>,
}

impl Operand {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.require_square()?;
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let (re, im) = cartesian_unchecked(&matrix);
        let norm = norm_unchecked(&matrix);
        Ok(Operand {
            matrix,
            re,
            im,
            norm,
            omega: OnceCell::new(),
            class: OnceCell::new(),
            norm_re: OnceCell::new(),
            norm_im: OnceCell::new(),
            square_norm: OnceCell::new(),
            gram: OnceCell::new(),
            cogram: OnceCell::new(),
            abs: OnceCell::new(),
            abs_half: OnceCell::new(),
            abs_adj: OnceCell::new(),
            abs_adj_half: OnceCell::new(),
            gram_matrix: OnceCell::new(),
            cogram_matrix: OnceCell::new(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn re(&self) -> &ComplexMatrix {
        &self.re
    }

    pub fn im(&self) -> &ComplexMatrix {
        &self.im
    }

    /// `‖S‖`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `ω(S)`.
    pub fn omega(&self, ctx: &EvalContext) -> f64 {
        *self
            .omega
            .get_or_init(|| radius_from_parts(&self.re, &self.im, &ctx.sweep))
    }

    pub fn classification(&self, ctx: &EvalContext) -> &MatrixClassification {
        self.class
            .get_or_init(|| classify_parts(&self.matrix, &self.re, &self.im, self.norm, ctx.class_tol))
    }

    /// `‖ℜS‖`.
    pub fn norm_re(&self) -> f64 {
        *self.norm_re.get_or_init(|| norm_unchecked(&self.re))
    }

    /// `‖ℑS‖`.
    pub fn norm_im(&self) -> f64 {
        *self.norm_im.get_or_init(|| norm_unchecked(&self.im))
    }

    /// `‖S²‖`.
    pub fn square_norm(&self) -> f64 {
        *self
            .square_norm
            .get_or_init(|| norm_unchecked(&(&self.matrix * &self.matrix)))
    }

    /// Spectral decomposition of `S*S`.
    pub fn gram(&self) -> &EigenDecomposition {
        self.gram.get_or_init(|| gram_eigen(&self.matrix))
    }

    /// Spectral decomposition of `SS*`.
    pub fn cogram(&self) -> &EigenDecomposition {
        self.cogram.get_or_init(|| gram_eigen(&self.matrix.adjoint()))
    }

    /// `S*S = |S|²`, formed directly.
    pub fn gram_matrix(&self) -> &ComplexMatrix {
        self.gram_matrix
            .get_or_init(|| hermitian_part(&(&self.matrix.adjoint() * &self.matrix)))
    }

    /// `SS* = |S*|²`, formed directly.
    pub fn cogram_matrix(&self) -> &ComplexMatrix {
        self.cogram_matrix
            .get_or_init(|| hermitian_part(&(&self.matrix * &self.matrix.adjoint())))
    }

    /// `|S|`.
    pub fn abs(&self) -> &ComplexMatrix {
        self.abs.get_or_init(|| self.gram().power(0.5))
    }

    /// `|S|^{1/2}`.
    pub fn abs_half(&self) -> &ComplexMatrix {
        self.abs_half.get_or_init(|| self.gram().power(0.25))
    }

    /// `|S*|`.
    pub fn abs_adj(&self) -> &ComplexMatrix {
        self.abs_adj.get_or_init(|| self.cogram().power(0.5))
    }

    /// `|S*|^{1/2}`.
    pub fn abs_adj_half(&self) -> &ComplexMatrix {
        self.abs_adj_half.get_or_init(|| self.cogram().power(0.25))
    }

    /// `|S|^p`.
    pub fn abs_pow(&self, p: f64) -> ComplexMatrix {
        self.gram().power(p / 2.0)
    }

    /// `|S*|^p`.
    pub fn abs_adj_pow(&self, p: f64) -> ComplexMatrix {
        self.cogram().power(p / 2.0)
    }

    /// `f(|S|)` for a scalar map `f` on the singular values.
    pub fn abs_map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.gram().compose(|l| f(l.max(0.0).sqrt()))
    }

    /// `f(|S*|)`.
    pub fn abs_adj_map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.cogram().compose(|l| f(l.max(0.0).sqrt()))
    }

    /// Eigenvalues of `|S|` (ascending).
    pub fn singular_values(&self) -> Vec<f64> {
        self.gram().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect()
    }

    /// Eigenvalues of `|S*|` (ascending).
    pub fn adj_singular_values(&self) -> Vec<f64> {
        self.cogram().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect()
    }
}

pub(crate) fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

/// `M^p` for a matrix that is positive semidefinite up to roundoff.
pub(crate) fn psd_pow(m: &ComplexMatrix, p: f64) -> ComplexMatrix {
    eigh(m).clamped().power(p)
}

/// `|H|^p` for a Hermitian matrix.
pub(crate) fn hermitian_abs_pow(h: &ComplexMatrix, p: f64) -> ComplexMatrix {
    eigh(h).compose(|l| l.abs().powf(p))
}
