use crate::error::{Error, Result};
use crate::linalg::{
    cartesian_unchecked, check_schatten_exponent, norm_unchecked, psd_product_radius, schatten_unchecked, tolerance,
};
use crate::matrix::ComplexMatrix;
use crate::radius::{off_diag_unchecked, radius_from_parts, weighted_from_parts};

use super::operand::{hermitian_abs_pow, hermitian_part, psd_pow};
use super::{BoundReport, EvalContext, Operand};

const FG_PRODUCT_TOL: f64 = 1e-8;
const EQ19_CLAMP: f64 = 1e-9;

fn check_pair(s: &Operand, t: &Operand) -> Result<()> {
    s.matrix().check_same_shape(t.matrix())
}

fn omega_of(m: &ComplexMatrix, ctx: &EvalContext) -> f64 {
    let (re, im) = cartesian_unchecked(m);
    radius_from_parts(&re, &im, &ctx.sweep)
}

/// `(X^{1/2} Y X^{1/2})^p` given `X^{1/2}`.
fn sandwich_pow(x_half: &ComplexMatrix, y: &ComplexMatrix, p: f64) -> ComplexMatrix {
    psd_pow(&(&(x_half * y) * x_half), p)
}

/// `max{‖|S*|^r + (|S*|^{1/2}|T*||S*|^{1/2})^{r/2}‖, ‖|S|^r + (|S|^{1/2}|T||S|^{1/2})^{r/2}‖}`.
fn mixed_norm_max(s: &Operand, t: &Operand, r: f64) -> f64 {
    let (adj_r, abs_r) = if r == 1.0 {
        (s.abs_adj().clone(), s.abs().clone())
    } else {
        (s.abs_adj_pow(r), s.abs_pow(r))
    };
    let first = &adj_r + &sandwich_pow(s.abs_adj_half(), t.abs_adj(), r / 2.0);
    let second = &abs_r + &sandwich_pow(s.abs_half(), t.abs(), r / 2.0);
    norm_unchecked(&first).max(norm_unchecked(&second))
}

/// `√r(|S||S*|)`.
fn product_root(s: &Operand) -> f64 {
    psd_product_radius(s.abs_half(), s.abs_adj()).sqrt()
}

fn gate_accretive_or_dissipative(s: &Operand, ctx: &EvalContext) -> Option<&'static str> {
    let c = s.classification(ctx);
    (!c.is_accretive && !c.is_dissipative).then_some("operand is neither accretive nor dissipative")
}

/// `½‖S‖ ≤ ω(S)`.
pub fn equiv_lower(s: &Operand, ctx: &EvalContext) -> BoundReport {
    BoundReport::inequality("equiv_lower", 0.5 * s.norm(), s.omega(ctx), s.norm(), ctx)
}

/// `ω(S) ≤ ‖S‖`.
pub fn equiv_upper(s: &Operand, ctx: &EvalContext) -> BoundReport {
    BoundReport::inequality("equiv_upper", s.omega(ctx), s.norm(), s.norm(), ctx)
}

/// `ω(S) ≤ ½(‖S‖ + ‖S²‖^{1/2})`.
pub fn kittaneh03(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let root = s.square_norm().sqrt();
    BoundReport::inequality("kittaneh03", s.omega(ctx), 0.5 * (s.norm() + root), s.norm(), ctx)
        .detail("square_norm_root", root)
}

/// `ω(S) ≤ ½(‖S‖ + √r(|S||S*|))`.
pub fn bp_spectral(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let root = product_root(s);
    let square_root = s.square_norm().sqrt();
    BoundReport::inequality("bp_spectral", s.omega(ctx), 0.5 * (s.norm() + root), s.norm(), ctx)
        .detail("product_radius_root", root)
        .detail("square_norm_root", square_root)
        .flag("improves_square_norm", root <= square_root + ctx.threshold(s.norm()))
}

/// `ω²(S) ≤ ¼‖|S|² + |S*|²‖ + ½ω(|S||S*|)`.
pub fn heydarbeygi(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let gram_sum = norm_unchecked(&(s.gram_matrix() + s.cogram_matrix()));
    let product_radius = omega_of(&(s.abs() * s.abs_adj()), ctx);
    let omega = s.omega(ctx);
    BoundReport::inequality(
        "heydarbeygi",
        omega * omega,
        0.25 * gram_sum + 0.5 * product_radius,
        s.norm() * s.norm(),
        ctx,
    )
    .detail("gram_sum_norm", gram_sum)
    .detail("product_radius", product_radius)
}

/// A pair of scalar maps with `f(t) g(t) = t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FgPair {
    /// `f(t) = t^a`, `g(t) = t^{1−a}`.
    Power(f64),
    /// `f(t) = 1 + t`, `g(t) = t / (1 + t)`.
    Rational,
}

impl FgPair {
    pub fn f(&self, t: f64) -> f64 {
        match *self {
            FgPair::Power(a) => t.powf(a),
            FgPair::Rational => 1.0 + t,
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        match *self {
            FgPair::Power(a) => t.powf(1.0 - a),
            FgPair::Rational => t / (1.0 + t),
        }
    }
}

/// `ω²(S) ≤ ¼‖ℜ(f⁴(|S|) + g⁴(|S*|) + 2f²(|S|)g²(|S*|))‖` for a built-in pair.
pub fn fg_general(s: &Operand, pair: &FgPair, ctx: &EvalContext) -> Result<BoundReport> {
    if let FgPair::Power(a) = *pair {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::BadExponent(a));
        }
    }
    let id = match pair {
        FgPair::Power(a) => format!("fg_general@{a}"),
        FgPair::Rational => "fg_general@rational".to_string(),
    };
    fg_bound(id, s, |t| pair.f(t), |t| pair.g(t), ctx)
}

/// The same bound for arbitrary maps `f`, `g`, checked on the spectra of
/// `|S|` and `|S*|`.
pub fn fg_bound(
    id: impl Into<String>,
    s: &Operand,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    ctx: &EvalContext,
) -> Result<BoundReport> {
    let mut worst = 0.0_f64;
    for t in s.singular_values().into_iter().chain(s.adj_singular_values()) {
        let (ft, gt) = (f(t), g(t));
        if !(ft >= 0.0 && gt >= 0.0) || !ft.is_finite() || !gt.is_finite() {
            return Err(Error::FgProductViolation(format!(
                "f({t}) = {ft}, g({t}) = {gt} must be finite and nonnegative"
            )));
        }
        let err = (ft * gt - t).abs();
        if err > FG_PRODUCT_TOL * t.max(1.0) {
            return Err(Error::FgProductViolation(format!("f({t})·g({t}) = {} ≠ {t}", ft * gt)));
        }
        worst = worst.max(err);
    }
    let f4 = s.abs_map(|t| f(t).powi(4));
    let g4 = s.abs_adj_map(|t| g(t).powi(4));
    let cross = &s.abs_map(|t| f(t).powi(2)) * &s.abs_adj_map(|t| g(t).powi(2));
    let sum = &(&f4 + &g4) + &(&cross + &cross.adjoint());
    let rhs = 0.25 * norm_unchecked(&hermitian_part(&sum));
    let omega = s.omega(ctx);
    Ok(BoundReport::inequality(id, omega * omega, rhs, s.norm() * s.norm(), ctx).detail("fg_product_error", worst))
}

/// The `f(x) = x^{1−t}`, `g(x) = x^t` instance.
pub fn power_mean(s: &Operand, t: f64, ctx: &EvalContext) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadExponent(t));
    }
    let mut report = fg_bound(format!("power_mean@{t}"), s, |x| x.powf(1.0 - t), |x| x.powf(t), ctx)?;
    report.details.insert("t".into(), t);
    Ok(report)
}

/// `ω([[O,S],[T*,O]]) ≤ ½max{α, β}`.
pub fn thm24(s: &Operand, t: &Operand, ctx: &EvalContext) -> Result<BoundReport> {
    check_pair(s, t)?;
    Ok(thm24_given(
        s,
        t,
        off_diag_unchecked(s.matrix(), t.matrix(), &ctx.sweep),
        ctx,
    ))
}

pub(super) fn thm24_given(s: &Operand, t: &Operand, lhs: f64, ctx: &EvalContext) -> BoundReport {
    let alpha = mixed_norm_max(s, t, 1.0);
    let beta = mixed_norm_max(t, s, 1.0);
    BoundReport::inequality("thm24", lhs, 0.5 * alpha.max(beta), s.norm().max(t.norm()), ctx)
        .detail("alpha", alpha)
        .detail("beta", beta)
}

/// `ω(S) ≤ ½max{‖|S*| + (|S*|^{1/2}|S||S*|^{1/2})^{1/2}‖, ‖|S| + (|S|^{1/2}|S*||S|^{1/2})^{1/2}‖}`,
/// with the spectral-radius bound it refines in the details.
pub fn cor10(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let first = s.abs_adj() + &sandwich_pow(s.abs_adj_half(), s.abs(), 0.5);
    let second = s.abs() + &sandwich_pow(s.abs_half(), s.abs_adj(), 0.5);
    let rhs = 0.5 * norm_unchecked(&first).max(norm_unchecked(&second));
    let spectral_rhs = 0.5 * (s.norm() + product_root(s));
    BoundReport::inequality("cor10", s.omega(ctx), rhs, s.norm(), ctx)
        .detail("spectral_rhs", spectral_rhs)
        .flag("chain_holds", rhs <= spectral_rhs + ctx.threshold(s.norm()))
}

/// `ωʳ([[O,S],[T*,O]]) ≤ ½max{λ, μ}` for `r ≥ 1`.
pub fn prop4(s: &Operand, t: &Operand, r: f64, ctx: &EvalContext) -> Result<BoundReport> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::BadExponent(r));
    }
    check_pair(s, t)?;
    Ok(prop4_given(
        s,
        t,
        r,
        off_diag_unchecked(s.matrix(), t.matrix(), &ctx.sweep),
        ctx,
    ))
}

pub(super) fn prop4_given(s: &Operand, t: &Operand, r: f64, radius: f64, ctx: &EvalContext) -> BoundReport {
    let lambda = mixed_norm_max(s, t, r);
    let mu = mixed_norm_max(t, s, r);
    let scale = s.norm().max(t.norm()).powf(r);
    BoundReport::inequality(format!("prop4@{r}"), radius.powf(r), 0.5 * lambda.max(mu), scale, ctx)
        .detail("lambda", lambda)
        .detail("mu", mu)
        .detail("r", r)
}

/// `max{r(|X*|(|X*| + |Y*|)), r(|X|(|X| + |Y|))}`.
fn radius_max(x: &Operand, y: &Operand) -> f64 {
    let adj = psd_product_radius(x.abs_adj_half(), &(x.abs_adj() + y.abs_adj()));
    let abs = psd_product_radius(x.abs_half(), &(x.abs() + y.abs()));
    adj.max(abs)
}

/// `ω²([[O,S],[T*,O]]) ≤ ½max{δ, ξ}`.
pub fn thm5(s: &Operand, t: &Operand, ctx: &EvalContext) -> Result<BoundReport> {
    check_pair(s, t)?;
    Ok(thm5_given(
        s,
        t,
        off_diag_unchecked(s.matrix(), t.matrix(), &ctx.sweep),
        ctx,
    ))
}

pub(super) fn thm5_given(s: &Operand, t: &Operand, radius: f64, ctx: &EvalContext) -> BoundReport {
    let delta = radius_max(s, t);
    let xi = radius_max(t, s);
    let scale = s.norm().max(t.norm()).powi(2);
    BoundReport::inequality("thm5", radius * radius, 0.5 * delta.max(xi), scale, ctx)
        .detail("delta", delta)
        .detail("xi", xi)
}

/// `ω²(S) ≤ ½max{r(|S*|(|S*| + |S|)), r(|S|(|S*| + |S|))}`.
pub fn eq16(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let sum = s.abs() + s.abs_adj();
    let adj = psd_product_radius(s.abs_adj_half(), &sum);
    let abs = psd_product_radius(s.abs_half(), &sum);
    let omega = s.omega(ctx);
    BoundReport::inequality("eq16", omega * omega, 0.5 * adj.max(abs), s.norm() * s.norm(), ctx)
        .detail("adjoint_radius", adj)
        .detail("abs_radius", abs)
}

/// `½max{‖|A| + ||B|^{1/2}|A|^{1/2}|‖, ‖|B| + ||A|^{1/2}|B|^{1/2}|‖}`, using
/// `||B|^{1/2}|A|^{1/2}| = (|A|^{1/2}|B||A|^{1/2})^{1/2}`.
fn normal_rhs(abs_a: &ComplexMatrix, half_a: &ComplexMatrix, abs_b: &ComplexMatrix, half_b: &ComplexMatrix) -> f64 {
    let first = abs_a + &sandwich_pow(half_a, abs_b, 0.5);
    let second = abs_b + &sandwich_pow(half_b, abs_a, 0.5);
    0.5 * norm_unchecked(&first).max(norm_unchecked(&second))
}

/// For normal `A`, `B`: `ω([[O,A],[B*,O]])` bounded by the `|A|`, `|B|` mixed norms.
pub fn normal_prop(a: &Operand, b: &Operand, ctx: &EvalContext) -> Result<BoundReport> {
    check_pair(a, b)?;
    Ok(normal_prop_given(
        a,
        b,
        off_diag_unchecked(a.matrix(), b.matrix(), &ctx.sweep),
        ctx,
    ))
}

pub(super) fn normal_prop_given(a: &Operand, b: &Operand, lhs: f64, ctx: &EvalContext) -> BoundReport {
    let rhs = normal_rhs(a.abs(), a.abs_half(), b.abs(), b.abs_half());
    let particular = normal_rhs(a.abs(), a.abs_half(), a.abs_adj(), a.abs_adj_half());
    let report = BoundReport::inequality("normal_prop", lhs, rhs, a.norm().max(b.norm()), ctx)
        .detail("particular_lhs", a.norm())
        .detail("particular_rhs", particular);
    let normal = (a.classification(ctx).is_normal, b.classification(ctx).is_normal);
    match normal {
        (true, true) => report,
        (false, _) => report.inapplicable("first operand is not normal"),
        (true, false) => report.inapplicable("second operand is not normal"),
    }
}

/// `‖S‖ ≤ ω(S) + √r(|ℜS||ℑS|)`.
pub fn thm6(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let re_half = hermitian_abs_pow(s.re(), 0.5);
    let im_abs = hermitian_abs_pow(s.im(), 1.0);
    let root = psd_product_radius(&re_half, &im_abs).sqrt();
    BoundReport::inequality("thm6", s.norm(), s.omega(ctx) + root, s.norm(), ctx).detail("spectral_term", root)
}

/// `(√3/3)‖S‖ ≤ ω(S)` for accretive or dissipative `S`.
pub fn thm8(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let (nr, ni) = (s.norm_re(), s.norm_im());
    let intermediate = nr * nr + ni * ni + nr * ni;
    let report = BoundReport::inequality("thm8", s.norm() / 3f64.sqrt(), s.omega(ctx), s.norm(), ctx)
        .detail("norm_re", nr)
        .detail("norm_im", ni)
        .detail("intermediate_rhs", intermediate)
        .detail("intermediate_slack", intermediate - s.norm() * s.norm());
    match gate_accretive_or_dissipative(s, ctx) {
        Some(reason) => report.inapplicable(reason),
        None => report,
    }
}

/// `(√2/2)‖S‖ ≤ ω(S)` for accretive-dissipative `S`.
pub fn ms_acc_dis(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let report = BoundReport::inequality(
        "ms_acc_dis",
        s.norm() * std::f64::consts::FRAC_1_SQRT_2,
        s.omega(ctx),
        s.norm(),
        ctx,
    );
    if s.classification(ctx).is_accretive_dissipative() {
        report
    } else {
        report.inapplicable("operand is not accretive-dissipative")
    }
}

/// `ω(ST) ≤ 3ω(S)ω(T)` when each operand is accretive or dissipative;
/// otherwise the general `4ω(S)ω(T)` is reported as inapplicable.
pub fn product3(s: &Operand, t: &Operand, ctx: &EvalContext) -> Result<BoundReport> {
    check_pair(s, t)?;
    let lhs = omega_of(&(s.matrix() * t.matrix()), ctx);
    let base = s.omega(ctx) * t.omega(ctx);
    let (cs, ct) = (s.classification(ctx), t.classification(ctx));
    let case = if cs.is_accretive && ct.is_accretive {
        1
    } else if cs.is_dissipative && ct.is_dissipative {
        2
    } else if (cs.is_accretive && ct.is_dissipative) || (cs.is_dissipative && ct.is_accretive) {
        3
    } else {
        0
    };
    let scale = s.norm() * t.norm();
    let rhs = if case == 0 { 4.0 * base } else { 3.0 * base };
    let report = BoundReport::inequality("product3", lhs, rhs, scale, ctx)
        .detail("case", case as f64)
        .detail("rhs_factor3", 3.0 * base)
        .detail("rhs_factor4", 4.0 * base);
    Ok(if case == 0 {
        report.inapplicable("operands are not each accretive or dissipative; factor-4 bound reported")
    } else {
        report
    })
}

fn gated(report: BoundReport, s: &Operand, ctx: &EvalContext) -> BoundReport {
    match gate_accretive_or_dissipative(s, ctx) {
        Some(reason) => report.inapplicable(reason),
        None => report,
    }
}

fn gram_sum_norm(s: &Operand) -> f64 {
    norm_unchecked(&(s.gram_matrix() + s.cogram_matrix()))
}

/// `‖S‖² ≤ ½‖SS* + S*S‖ + ‖ℜS‖‖ℑS‖`.
pub fn eq18(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let n2 = s.norm() * s.norm();
    let rhs = 0.5 * gram_sum_norm(s) + s.norm_re() * s.norm_im();
    gated(BoundReport::inequality("eq18", n2, rhs, n2, ctx), s, ctx)
}

/// `‖S‖² − ‖S²‖ ≤ 2‖ℜS‖‖ℑS‖`.
pub fn eq19(s: &Operand, ctx: &EvalContext) -> Result<BoundReport> {
    let n2 = s.norm() * s.norm();
    let mut gap = n2 - s.square_norm();
    if gap < 0.0 {
        if gap < -tolerance(EQ19_CLAMP, n2) {
            return Err(Error::InternalConsistency(format!("‖S‖² − ‖S²‖ = {gap:e} is negative")));
        }
        gap = 0.0;
    }
    let rhs = 2.0 * s.norm_re() * s.norm_im();
    Ok(gated(BoundReport::inequality("eq19", gap, rhs, n2, ctx), s, ctx))
}

/// `‖S‖² ≤ ‖ℜS‖‖ℑS‖ + min{‖ℜS‖‖ℑS‖ + ‖S²‖, ½‖SS* + S*S‖}`.
pub fn remark_min(s: &Operand, ctx: &EvalContext) -> BoundReport {
    let n2 = s.norm() * s.norm();
    let prod = s.norm_re() * s.norm_im();
    let first = prod + s.square_norm();
    let second = 0.5 * gram_sum_norm(s);
    let report = BoundReport::inequality("remark_min", n2, prod + first.min(second), n2, ctx)
        .detail("branch_first", first)
        .detail("branch_second", second);
    gated(report, s, ctx)
}

fn schatten_scale(s: &Operand, p: f64) -> f64 {
    s.norm() * schatten_unchecked(s.matrix(), p)
}

/// `|||SS*||| ≤ |||(ℜS)² + (ℑS)²||| + ‖ℜS‖·|||ℑS|||` (accretive), or with the
/// roles of `ℜS`, `ℑS` swapped (dissipative), in the Schatten p-norm.
pub fn thm25(s: &Operand, p: f64, ctx: &EvalContext) -> Result<BoundReport> {
    check_schatten_exponent(p)?;
    let lhs = schatten_unchecked(s.cogram_matrix(), p);
    let squares = &(s.re() * s.re()) + &(s.im() * s.im());
    let base = schatten_unchecked(&squares, p);
    let accretive_rhs = base + s.norm_re() * schatten_unchecked(s.im(), p);
    let dissipative_rhs = base + s.norm_im() * schatten_unchecked(s.re(), p);
    let c = s.classification(ctx);
    let rhs = if c.is_accretive || !c.is_dissipative {
        accretive_rhs
    } else {
        dissipative_rhs
    };
    let mut report = BoundReport::inequality(format!("thm25@{}", fmt_p(p)), lhs, rhs, schatten_scale(s, p), ctx)
        .detail("squares_norm", base)
        .detail("accretive_rhs", accretive_rhs)
        .detail("dissipative_rhs", dissipative_rhs);
    if c.is_accretive_dissipative() {
        let corollary = accretive_rhs.min(dissipative_rhs);
        let tol = ctx.threshold(report.scale);
        report = report
            .detail("corollary_rhs", corollary)
            .flag("corollary_holds", lhs <= corollary + tol);
    }
    Ok(gated(report, s, ctx))
}

/// `|||SS*||| ≤ ω_p(S)(2ω_p(S) + ω(S))` with `ω_p(S) = sup_θ |||ℜ(e^{iθ}S)|||`.
pub fn final_thm(s: &Operand, p: f64, ctx: &EvalContext) -> Result<BoundReport> {
    check_schatten_exponent(p)?;
    let lhs = schatten_unchecked(s.cogram_matrix(), p);
    let weighted = weighted_from_parts(s.re(), s.im(), p, &ctx.sweep);
    let omega = s.omega(ctx);
    let report = BoundReport::inequality(
        format!("final_thm@{}", fmt_p(p)),
        lhs,
        weighted * (2.0 * weighted + omega),
        schatten_scale(s, p),
        ctx,
    )
    .detail("weighted_radius", weighted)
    .detail("numerical_radius", omega);
    Ok(gated(report, s, ctx))
}

pub(crate) fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        p.to_string()
    }
}
