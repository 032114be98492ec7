use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensembles::{random_unit_vector, random_unitary, sample_from, EnsembleKind};
use crate::error::{Error, Result};
use crate::linalg::{cartesian_unchecked, norm_unchecked, off_diag_embed, schatten_unchecked};
use crate::matrix::{inner, vec_norm, ComplexMatrix, C64};
use crate::radius::{off_diag_unchecked, quadratic_form, radius_from_parts};

use super::catalog::fmt_p;
use super::operand::{hermitian_part, psd_pow};
use super::{BoundId, BoundReport, BoundSpec, EvalContext, Operand, TrialInputs};

const UNIT_TOL: f64 = 1e-9;

/// Operands of a lemma check: matrices `A`, `B` and vectors `x`, `y`.
#[derive(Debug, Clone, Copy)]
pub struct LemmaInputs<'a> {
    pub a: &'a Operand,
    pub b: &'a Operand,
    pub x: &'a [C64],
    pub y: &'a [C64],
}

/// Checks one preliminary lemma, written `id` or `id@param`.
pub fn check_lemma(lemma: &BoundSpec, inputs: &LemmaInputs<'_>, ctx: &EvalContext) -> Result<BoundReport> {
    use BoundId::*;
    let (a, b) = (inputs.a, inputs.b);
    a.matrix().check_same_shape(b.matrix())?;
    let param = || lemma.value().ok_or_else(|| Error::UnknownLemma(lemma.to_string()));
    let mut report = match lemma.id {
        K1 => k1(a, b, ctx),
        Lem2 => lem2(a, b, ctx),
        Lem3 => lem3(a, b, ctx),
        Lem14 => lem14(a, b, ctx),
        Lem17 => lem17(a, b, ctx),
        Lem22 => lem22(a, b, param()?, ctx)?,
        Lem27 => lem27(a, inputs.x, inputs.y, param()?, ctx)?,
        Lem28 => lem28(a, inputs.x, param()?, ctx)?,
        Eq21 => eq21(a, ctx),
        AsIneq => as_ineq(a, b, param()?, ctx)?,
        Pomoc => pomoc(a, b, ctx),
        _ => return Err(Error::UnknownLemma(lemma.to_string())),
    };
    report.bound_id = lemma.to_string();
    Ok(report)
}

fn positive_pair_gate(report: BoundReport, a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    if a.classification(ctx).is_psd && b.classification(ctx).is_psd {
        report
    } else {
        report.inapplicable("operands are not both positive semidefinite")
    }
}

/// `‖A+B‖ ≤ max{‖A + |B^{1/2}A^{1/2}|‖, ‖B + |A^{1/2}B^{1/2}|‖}` for positive `A`, `B`.
fn k1(a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    let (pa, pb) = (hermitian_part(a.matrix()), hermitian_part(b.matrix()));
    // |B^{1/2}A^{1/2}| = (A^{1/2} B A^{1/2})^{1/2}
    let cross_a = psd_pow(&(&(a.abs_half() * &pb) * a.abs_half()), 0.5);
    let cross_b = psd_pow(&(&(b.abs_half() * &pa) * b.abs_half()), 0.5);
    let rhs = norm_unchecked(&(&pa + &cross_a)).max(norm_unchecked(&(&pb + &cross_b)));
    let lhs = norm_unchecked(&(&pa + &pb));
    positive_pair_gate(
        BoundReport::inequality("k1", lhs, rhs, a.norm().max(b.norm()), ctx),
        a,
        b,
        ctx,
    )
}

/// `‖A+B‖ ≤ ‖|A| + |B|‖` for Hermitian or for normal `A`, `B`.
fn lem2(a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    let lhs = norm_unchecked(&(a.matrix() + b.matrix()));
    let rhs = norm_unchecked(&(a.abs() + b.abs()));
    let report = BoundReport::inequality("lem2", lhs, rhs, a.norm().max(b.norm()), ctx);
    let (ca, cb) = (a.classification(ctx), b.classification(ctx));
    if ca.is_hermitian && cb.is_hermitian {
        report.detail("variant", 0.0)
    } else if ca.is_normal && cb.is_normal {
        report.detail("variant", 1.0)
    } else {
        report.inapplicable("operands are neither both Hermitian nor both normal")
    }
}

/// `½ sup_θ ‖A + e^{iθ}B‖ = ω([[O,A],[B*,O]])`, comparing the closed form
/// against the radius of the assembled block matrix.
fn lem3(a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    let block = off_diag_embed(a.matrix(), b.matrix()).expect("shapes checked");
    let (re, im) = cartesian_unchecked(&block);
    let lhs = radius_from_parts(&re, &im, &ctx.sweep);
    let rhs = off_diag_unchecked(a.matrix(), b.matrix(), &ctx.sweep);
    BoundReport::identity("lem3", lhs, rhs, a.norm().max(b.norm()), ctx)
}

/// `‖ST − TS‖ ≤ ‖S‖‖T‖` when `S` or `T` is positive.
fn lem14(a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    let (s, t) = (a.matrix(), b.matrix());
    let lhs = norm_unchecked(&(&(s * t) - &(t * s)));
    let report = BoundReport::inequality("lem14", lhs, a.norm() * b.norm(), a.norm() * b.norm(), ctx);
    if a.classification(ctx).is_psd || b.classification(ctx).is_psd {
        report
    } else {
        report.inapplicable("neither operand is positive semidefinite")
    }
}

/// `max{‖A‖, ‖B‖} − ‖A^{1/2}B^{1/2}‖ ≤ ‖A − B‖` for positive `A`, `B`.
fn lem17(a: &Operand, b: &Operand, ctx: &EvalContext) -> BoundReport {
    let cross = norm_unchecked(&(a.abs_half() * b.abs_half()));
    let lhs = a.norm().max(b.norm()) - cross;
    let rhs = norm_unchecked(&(a.matrix() - b.matrix()));
    let report = BoundReport::inequality("lem17", lhs, rhs, a.norm().max(b.norm()), ctx).detail("cross_norm", cross);
    positive_pair_gate(report, a, b, ctx)
}

/// `|||AB − BA||| ≤ √(‖ℜA‖² + ‖ℑA‖²)·|||B|||` for normal `A` with `ℜA, ℑA ≥ 0`.
fn lem22(a: &Operand, b: &Operand, p: f64, ctx: &EvalContext) -> Result<BoundReport> {
    crate::linalg::check_schatten_exponent(p)?;
    let (s, t) = (a.matrix(), b.matrix());
    let lhs = schatten_unchecked(&(&(s * t) - &(t * s)), p);
    let b_norm = schatten_unchecked(t, p);
    let factor = a.norm_re().hypot(a.norm_im());
    let report = BoundReport::inequality(
        format!("lem22@{}", fmt_p(p)),
        lhs,
        factor * b_norm,
        a.norm() * b_norm,
        ctx,
    )
    .detail("factor", factor);
    let c = a.classification(ctx);
    Ok(if c.is_normal && c.is_accretive_dissipative() {
        report
    } else {
        report.inapplicable("first operand is not normal with positive real and imaginary parts")
    })
}

/// `|⟨Ax, y⟩| ≤ √(⟨f²(|A|)x, x⟩⟨g²(|A*|)y, y⟩)` with `f(t) = t^a`, `g(t) = t^{1−a}`.
///
/// The details also record the variant with `x` in both right-hand factors,
/// and the same variant at `y = x`.
fn lem27(a: &Operand, x: &[C64], y: &[C64], exponent: f64, ctx: &EvalContext) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&exponent) {
        return Err(Error::BadExponent(exponent));
    }
    let f2 = a.abs_map(|t| t.powf(exponent).powi(2));
    let g2 = a.abs_adj_map(|t| t.powf(1.0 - exponent).powi(2));
    let form = |m: &ComplexMatrix, v: &[C64]| quadratic_form(m, v).re.max(0.0);
    let ax = a.matrix().mul_vec(x);
    let lhs = inner(&ax, y).norm();
    let rhs = (form(&f2, x) * form(&g2, y)).sqrt();
    let printed_rhs = (form(&f2, x) * form(&g2, x)).sqrt();
    let x_only_lhs = inner(&ax, x).norm();
    let scale = a.norm() * vec_norm(x) * vec_norm(y);
    let tol = ctx.threshold(scale);
    Ok(
        BoundReport::inequality(format!("lem27@{exponent}"), lhs, rhs, scale, ctx)
            .detail("printed_rhs", printed_rhs)
            .flag("printed_holds", lhs <= printed_rhs + tol)
            .detail("x_only_lhs", x_only_lhs)
            .detail("x_only_rhs", printed_rhs)
            .flag(
                "x_only_holds",
                x_only_lhs <= printed_rhs + ctx.threshold(a.norm() * vec_norm(x).powi(2)),
            ),
    )
}

/// `⟨Ax, x⟩ʳ ≤ ⟨Aʳx, x⟩` for positive `A`, unit `x`, `r ≥ 1`.
fn lem28(a: &Operand, x: &[C64], r: f64, ctx: &EvalContext) -> Result<BoundReport> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::BadExponent(r));
    }
    let lhs = quadratic_form(a.matrix(), x).re.max(0.0).powf(r);
    let rhs = quadratic_form(&a.abs_pow(r), x).re;
    let report = BoundReport::inequality(format!("lem28@{r}"), lhs, rhs, a.norm().powf(r), ctx);
    Ok(if !a.classification(ctx).is_psd {
        report.inapplicable("operand is not positive semidefinite")
    } else if (vec_norm(x) - 1.0).abs() > UNIT_TOL {
        report.inapplicable("vector is not a unit vector")
    } else {
        report
    })
}

/// `‖ℜS‖, ‖ℑS‖ ≤ ω(S)`.
fn eq21(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let zero = ComplexMatrix::zeros(s.dim(), s.dim());
    let radius_of_re = radius_from_parts(s.re(), &zero, &ctx.sweep);
    BoundReport::inequality("eq21", s.norm_re().max(s.norm_im()), s.omega(ctx), s.norm(), ctx)
        .detail("norm_re", s.norm_re())
        .detail("norm_im", s.norm_im())
        .detail("radius_of_re", radius_of_re)
}

/// `‖((A+B)/2)ʳ‖ ≤ ‖(Aʳ + Bʳ)/2‖` for positive `A`, `B`, `r ≥ 1`.
fn as_ineq(a: &Operand, b: &Operand, r: f64, ctx: &EvalContext) -> Result<BoundReport> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::BadExponent(r));
    }
    let mean = hermitian_part(&(a.matrix() + b.matrix())).scale_real(0.5);
    let lhs = norm_unchecked(&psd_pow(&mean, r));
    let rhs = 0.5 * norm_unchecked(&(&a.abs_pow(r) + &b.abs_pow(r)));
    let scale = a.norm().max(b.norm()).powf(r);
    Ok(positive_pair_gate(
        BoundReport::inequality(format!("as_ineq@{r}"), lhs, rhs, scale, ctx),
        a,
        b,
        ctx,
    ))
}

/// `‖[[O, X], [Y, O]]‖ = max{‖X‖, ‖Y‖}`.
fn pomoc(x: &Operand, y: &Operand, ctx: &EvalContext) -> BoundReport {
    let block = off_diag_embed(x.matrix(), &y.matrix().adjoint()).expect("shapes checked");
    let scale = x.norm().max(y.norm());
    BoundReport::identity("pomoc", norm_unchecked(&block), scale, scale, ctx)
}

/// Random inputs satisfying a lemma's hypotheses, scaled by `scale`.
pub fn admissible_inputs(lemma: BoundId, dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> Result<TrialInputs> {
    use BoundId::*;
    if !lemma.is_lemma() {
        return Err(Error::UnknownLemma(lemma.name().to_string()));
    }
    if dim == 0 || !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::BadSpec(format!("dim {dim} and scale {scale} must be positive")));
    }
    let draw = |kind: EnsembleKind, rng: &mut ChaCha8Rng| sample_from(kind, dim, scale, rng);
    let (a, b) = match lemma {
        K1 | Lem17 | AsIneq | Lem28 => (draw(EnsembleKind::Psd, rng), draw(EnsembleKind::Psd, rng)),
        Lem2 => {
            let kind = if rng.random_bool(0.5) {
                EnsembleKind::Hermitian
            } else {
                EnsembleKind::Normal
            };
            (draw(kind, rng), draw(kind, rng))
        }
        Lem14 => {
            let p = draw(EnsembleKind::Psd, rng);
            let g = draw(EnsembleKind::Ginibre, rng);
            if rng.random_bool(0.5) {
                (p, g)
            } else {
                (g, p)
            }
        }
        Lem22 => {
            let u = random_unitary(dim, rng);
            let z: Vec<C64> = (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re.abs(), im.abs()) * scale
                })
                .collect();
            let a = &(&u * &ComplexMatrix::from_diag(&z)) * &u.adjoint();
            (a, draw(EnsembleKind::Ginibre, rng))
        }
        _ => (draw(EnsembleKind::Ginibre, rng), draw(EnsembleKind::Ginibre, rng)),
    };
    let x = random_unit_vector(dim, rng);
    let y = random_unit_vector(dim, rng);
    TrialInputs::new(a, b, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::stream_rng;
    use approx::assert_abs_diff_eq;

    fn run(id: &str, a: ComplexMatrix, b: ComplexMatrix, x: Vec<C64>) -> BoundReport {
        let inputs = TrialInputs::new(a, b, x.clone(), x).unwrap();
        let spec: BoundSpec = id.parse().unwrap();
        let li = LemmaInputs {
            a: &inputs.s,
            b: &inputs.t,
            x: &inputs.x,
            y: &inputs.y,
        };
        check_lemma(&spec, &li, &EvalContext::default()).unwrap()
    }

    fn e(n: usize, k: usize) -> Vec<C64> {
        (0..n).map(|i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    #[test]
    fn k1_identity() {
        let r = run("k1", ComplexMatrix::identity(2), ComplexMatrix::identity(2), e(2, 0));
        assert!(r.applicable);
        assert_abs_diff_eq!(r.lhs, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn lem28_eigenvector_case() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 4.0]);
        let r = run("lem28@2", a, ComplexMatrix::identity(2), e(2, 1));
        assert!(r.applicable);
        assert_abs_diff_eq!(r.lhs, 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 16.0, epsilon = 1e-10);
    }

    #[test]
    fn pomoc_random_equality() {
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            let inputs = admissible_inputs(BoundId::Pomoc, 4, 1.0, &mut rng).unwrap();
            let r = crate::bounds::evaluate(&BoundSpec::new(BoundId::Pomoc), &inputs, &EvalContext::default()).unwrap();
            assert!(r.slack.abs() <= 1e-9 * r.scale, "{r:?}");
        }
    }

    #[test]
    fn unknown_lemma() {
        let inputs = TrialInputs::single(ComplexMatrix::identity(2)).unwrap();
        let li = LemmaInputs {
            a: &inputs.s,
            b: &inputs.t,
            x: &inputs.x,
            y: &inputs.y,
        };
        let spec = BoundSpec::new(BoundId::Thm8);
        assert!(matches!(
            check_lemma(&spec, &li, &EvalContext::default()),
            Err(Error::UnknownLemma(_))
        ));
    }

    #[test]
    fn gates_reject_non_positive_inputs() {
        let g = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(!run("k1", g.clone(), g.clone(), e(2, 0)).applicable);
        assert!(!run("lem14", g.clone(), g.clone(), e(2, 0)).applicable);
        let mut x = e(2, 0);
        x[0] = C64::new(2.0, 0.0);
        assert!(!run("lem28", ComplexMatrix::identity(2), g, x).applicable);
    }

    #[test]
    fn admissible_inputs_meet_hypotheses() {
        let ctx = EvalContext::default();
        let mut rng = stream_rng(17, 3);
        for &id in BoundId::ALL.iter().filter(|id| id.is_lemma()) {
            for _ in 0..10 {
                let inputs = admissible_inputs(id, 5, 2.0, &mut rng).unwrap();
                let r = crate::bounds::evaluate(&BoundSpec::new(id), &inputs, &ctx).unwrap();
                assert!(r.applicable, "{id}: {:?}", r.reason);
            }
        }
    }
}
