//! Numerical radius computations.
//!
//! `ω(S) = sup_θ λ_max(ℜ(e^{iθ}S))`: the support function of the numerical
//! range is maximised over a θ-grid, then the best cells are refined by
//! golden-section search. The curve is Lipschitz in θ with constant `‖S‖`, so
//! the grid maximum is within `‖S‖·π/coarse_grid` of the true value before
//! refinement.
//!
//! [`numerical_radius_oracle`] is an independent lower-bound certificate that
//! works in vector space instead of θ-space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::random_unit_vector;
use crate::error::{Error, Result};
use crate::linalg::{
    cartesian_unchecked, check_schatten_exponent, eigh, lambda_max, norm_unchecked, rotated_real_part,
    schatten_unchecked,
};
use crate::matrix::{inner, vec_norm, ComplexMatrix, C64};

pub const DEFAULT_ORACLE_RESTARTS: usize = 32;

const ORACLE_MAX_STEPS: usize = 2000;

/// Parameters of the rotation-angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Number of θ samples on `[0, 2π)`.
    pub coarse_grid: usize,
    /// Width of the bracket at which golden-section refinement stops.
    pub refine_tol: f64,
    pub max_refine_iters: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            coarse_grid: 720,
            refine_tol: 1e-10,
            max_refine_iters: 200,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid < 8 {
            return Err(Error::BadSweep(format!("coarse_grid {} < 8", self.coarse_grid)));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::BadSweep(format!(
                "refine_tol {} must be positive",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

const REFINED_CANDIDATES: usize = 3;

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, max_iters: usize) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = fc.max(fd);
    let mut iters = 0;
    while hi - lo > tol && iters < max_iters {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
            best = best.max(fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
            best = best.max(fd);
        }
        iters += 1;
    }
    best
}

/// Maximum of a 2π-periodic function: grid, then golden-section refinement
/// around the best few local maxima of the grid.
pub(crate) fn sweep_max(f: impl Fn(f64) -> f64, cfg: &SweepConfig) -> f64 {
    let n = cfg.coarse_grid;
    let step = std::f64::consts::TAU / n as f64;
    let values: Vec<f64> = (0..n).map(|k| f(k as f64 * step)).collect();

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = values[(k + n - 1) % n];
            let next = values[(k + 1) % n];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    // ties keep index order, so the result is reproducible
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(REFINED_CANDIDATES);

    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for k in peaks {
        let centre = k as f64 * step;
        let refined = golden_max(&f, centre - step, centre + step, cfg.refine_tol, cfg.max_refine_iters);
        best = best.max(refined);
    }
    best
}

/// `λ_max(ℜ(e^{iθ}S))`, the support function of the numerical range in direction −θ.
pub fn support_function(s: &ComplexMatrix, theta: f64) -> Result<f64> {
    s.require_square()?;
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let (re, im) = cartesian_unchecked(s);
    Ok(lambda_max(&rotated_real_part(&re, &im, theta)))
}

pub(crate) fn radius_from_parts(re: &ComplexMatrix, im: &ComplexMatrix, cfg: &SweepConfig) -> f64 {
    if re.is_zero() && im.is_zero() {
        return 0.0;
    }
    sweep_max(|theta| lambda_max(&rotated_real_part(re, im, theta)), cfg).max(0.0)
}

fn validate_square(s: &ComplexMatrix) -> Result<()> {
    s.require_square()?;
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Numerical radius `ω(S) = sup_{‖x‖=1} |⟨Sx, x⟩|`.
pub fn numerical_radius(s: &ComplexMatrix, cfg: &SweepConfig) -> Result<f64> {
    validate_square(s)?;
    cfg.validate()?;
    let (re, im) = cartesian_unchecked(s);
    Ok(radius_from_parts(&re, &im, cfg))
}

/// Lower bound on `ω(S)` from phase-aligned Rayleigh ascent over unit vectors.
///
/// Each step replaces `x` by the top eigenvector of `ℜ(e^{−i·arg⟨Sx,x⟩}S)`,
/// which never decreases `|⟨Sx,x⟩|`. The best value over `restarts` random
/// starts is returned; every reported value is attained by an explicit vector.
pub fn numerical_radius_oracle(s: &ComplexMatrix, restarts: usize, seed: u64) -> Result<f64> {
    validate_square(s)?;
    if restarts == 0 {
        return Err(Error::BadSweep("oracle needs at least one restart".into()));
    }
    let n = s.rows();
    let norm = norm_unchecked(s);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let mut x = random_unit_vector(n, &mut rng);
        let mut z = s.inner(&x, &x);
        for _ in 0..ORACLE_MAX_STEPS {
            let phase = if z.norm() > 0.0 {
                z.conj() / z.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            let (re, _) = cartesian_unchecked(&s.scale(phase));
            let eig = eigh(&re);
            let top: Vec<C64> = (0..n).map(|i| eig.vectors[(i, n - 1)]).collect();
            let z_next = s.inner(&top, &top);
            if z_next.norm() <= z.norm() + 1e-15 * norm {
                if z_next.norm() > z.norm() {
                    z = z_next;
                }
                break;
            }
            x = top;
            z = z_next;
        }
        debug_assert!((vec_norm(&x) - 1.0).abs() < 1e-9);
        best = best.max(z.norm());
    }
    Ok(best)
}

/// `ω([[O, S], [T*, O]]) = ½ sup_θ ‖S + e^{iθ}T‖`.
pub fn off_diag_numerical_radius(s: &ComplexMatrix, t: &ComplexMatrix, cfg: &SweepConfig) -> Result<f64> {
    validate_square(s)?;
    s.check_same_shape(t)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    cfg.validate()?;
    Ok(off_diag_unchecked(s, t, cfg))
}

pub(crate) fn off_diag_unchecked(s: &ComplexMatrix, t: &ComplexMatrix, cfg: &SweepConfig) -> f64 {
    if s.is_zero() && t.is_zero() {
        return 0.0;
    }
    let sum_norm = |theta: f64| {
        let rot = C64::from_polar(1.0, theta);
        let mut m = s.clone();
        for (o, b) in m.data_mut().iter_mut().zip(t.data()) {
            *o += rot * b;
        }
        norm_unchecked(&m)
    };
    0.5 * sweep_max(sum_norm, cfg)
}

/// `ω_p(S) = sup_θ ‖ℜ(e^{iθ}S)‖_p` for the Schatten p-norm.
pub fn weighted_numerical_radius(s: &ComplexMatrix, p: f64, cfg: &SweepConfig) -> Result<f64> {
    check_schatten_exponent(p)?;
    validate_square(s)?;
    cfg.validate()?;
    let (re, im) = cartesian_unchecked(s);
    Ok(weighted_from_parts(&re, &im, p, cfg))
}

pub(crate) fn weighted_from_parts(re: &ComplexMatrix, im: &ComplexMatrix, p: f64, cfg: &SweepConfig) -> f64 {
    if re.is_zero() && im.is_zero() {
        return 0.0;
    }
    sweep_max(|theta| schatten_unchecked(&rotated_real_part(re, im, theta), p), cfg)
}

/// Inner product helper re-exported for lemma checks.
pub(crate) fn quadratic_form(a: &ComplexMatrix, x: &[C64]) -> C64 {
    inner(&a.mul_vec(x), x)
}
