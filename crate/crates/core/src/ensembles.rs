//! Seeded random matrices for each operator class, plus fixed fixtures.
//!
//! Every sample is drawn from a ChaCha8 stream keyed by `(seed, stream)`, so
//! trial `k` of a sweep can be generated independently of trials `0..k`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::MatrixClassification;
use crate::matrix::{vec_norm, ComplexMatrix, C64};

/// Tolerance (relative to `scale`) at which samples satisfy their class.
pub const CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Ginibre,
    Hermitian,
    Psd,
    Unitary,
    Normal,
    Accretive,
    Dissipative,
    AccretiveDissipative,
    NilpotentJordan,
    Diagonal,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 10] = [
        EnsembleKind::Ginibre,
        EnsembleKind::Hermitian,
        EnsembleKind::Psd,
        EnsembleKind::Unitary,
        EnsembleKind::Normal,
        EnsembleKind::Accretive,
        EnsembleKind::Dissipative,
        EnsembleKind::AccretiveDissipative,
        EnsembleKind::NilpotentJordan,
        EnsembleKind::Diagonal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::Psd => "psd",
            EnsembleKind::Unitary => "unitary",
            EnsembleKind::Normal => "normal",
            EnsembleKind::Accretive => "accretive",
            EnsembleKind::Dissipative => "dissipative",
            EnsembleKind::AccretiveDissipative => "accretive_dissipative",
            EnsembleKind::NilpotentJordan => "nilpotent_jordan",
            EnsembleKind::Diagonal => "diagonal",
        }
    }

    /// Whether a classification is consistent with this kind's guarantee.
    /// Ginibre and Jordan samples carry no class flag and always pass.
    pub fn admits(self, c: &MatrixClassification) -> bool {
        match self {
            EnsembleKind::Ginibre | EnsembleKind::NilpotentJordan => true,
            EnsembleKind::Hermitian => c.is_hermitian,
            EnsembleKind::Psd => c.is_psd,
            EnsembleKind::Unitary | EnsembleKind::Normal | EnsembleKind::Diagonal => c.is_normal,
            EnsembleKind::Accretive => c.is_accretive,
            EnsembleKind::Dissipative => c.is_dissipative,
            EnsembleKind::AccretiveDissipative => c.is_accretive_dissipative(),
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown ensemble kind `{s}`")))
    }
}

/// Recipe for one random matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub scale: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        EnsembleSpec {
            kind,
            dim,
            scale: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::BadSpec("dim must be at least 1".into()));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::BadSpec(format!(
                "scale {} must be positive and finite",
                self.scale
            )));
        }
        Ok(())
    }
}

/// The generator behind stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `n×n` matrix of i.i.d. standard complex Gaussians (`E|z|² = 1`).
pub fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(n, n, data).expect("finite gaussian entries")
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    hermitian_part(&ginibre(n, rng))
}

/// `G*G / n`, symmetrised so it is exactly Hermitian.
fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    hermitian_part(&(&g.adjoint() * &g)).scale_real(1.0 / n as f64)
}

/// Haar unitary: Gram–Schmidt on a Ginibre matrix (columns), which fixes the
/// phases of the implied R factor to be positive.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let g = ginibre(n, rng);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut degenerate = false;
        for j in 0..n {
            let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
            // two passes of modified Gram–Schmidt for orthogonality to roundoff
            for _ in 0..2 {
                for q in &cols {
                    let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-10 {
                degenerate = true;
                break;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        if !degenerate {
            return ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

fn random_diagonal(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let diag: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_diag(&diag)
}

fn jordan_block(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `P + iH` with both parts exactly Hermitian.
fn with_parts(re: &ComplexMatrix, im: &ComplexMatrix) -> ComplexMatrix {
    re + &im.scale(C64::new(0.0, 1.0))
}

/// Draws one matrix from `spec.kind` using an explicit generator.
pub fn sample_from(kind: EnsembleKind, dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = dim;
    let m = match kind {
        EnsembleKind::Ginibre => ginibre(n, rng),
        EnsembleKind::Hermitian => random_hermitian(n, rng),
        EnsembleKind::Psd => random_psd(n, rng),
        EnsembleKind::Unitary => random_unitary(n, rng),
        EnsembleKind::Normal => {
            let u = random_unitary(n, rng);
            let d = random_diagonal(n, rng);
            &(&u * &d) * &u.adjoint()
        }
        EnsembleKind::Accretive => {
            let p = random_psd(n, rng);
            let h = random_hermitian(n, rng);
            with_parts(&p, &h)
        }
        EnsembleKind::Dissipative => {
            let h = random_hermitian(n, rng);
            let p = random_psd(n, rng);
            with_parts(&h, &p)
        }
        EnsembleKind::AccretiveDissipative => {
            let p = random_psd(n, rng);
            let q = random_psd(n, rng);
            with_parts(&p, &q)
        }
        EnsembleKind::NilpotentJordan => jordan_block(n),
        EnsembleKind::Diagonal => random_diagonal(n, rng),
    };
    if scale == 1.0 {
        m
    } else {
        m.scale_real(scale)
    }
}

/// Draws stream `stream` of the spec's seed.
pub fn sample_stream(spec: &EnsembleSpec, stream: u64) -> Result<ComplexMatrix> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, stream);
    Ok(sample_from(spec.kind, spec.dim, spec.scale, &mut rng))
}

/// Deterministic sample for a spec (stream 0 of its seed).
pub fn sample(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    sample_stream(spec, 0)
}

/// Uniformly distributed unit vector in ℂⁿ.
pub fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Named regression fixtures.
pub fn canonical_suite() -> Vec<(&'static str, ComplexMatrix)> {
    let c = C64::new;
    vec![
        ("zero", ComplexMatrix::zeros(2, 2)),
        ("identity", ComplexMatrix::identity(2)),
        ("jordan2", jordan_block(2)),
        (
            "shear",
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).expect("fixture"),
        ),
        ("diag_1_i", ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)])),
        (
            "identity_plus_i_identity",
            ComplexMatrix::from_diag(&[c(1.0, 1.0), c(1.0, 1.0)]),
        ),
    ]
}
