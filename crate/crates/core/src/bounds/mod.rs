//! Every inequality in the catalog, evaluated numerically.
//!
//! Each check produces a [`BoundReport`] with `slack ≥ 0` meaning "holds". Upper
//! bounds report `slack = rhs − lhs`; lower bounds are rearranged into the
//! same form, so `lhs` is always the side that should be smaller. Bounds with
//! class hypotheses (accretive, normal, ...) never fail on inputs outside the
//! class; they return `applicable = false` instead.

mod catalog;
mod lemmas;
mod operand;

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::tolerance;
use crate::matrix::{ComplexMatrix, C64};
use crate::radius::{off_diag_unchecked, SweepConfig};

pub use catalog::*;
pub use lemmas::{admissible_inputs, check_lemma, LemmaInputs};
pub use operand::Operand;

/// Default relative tolerance for "holds".
pub const DEFAULT_TOL_REL: f64 = 1e-7;
/// Default relative tolerance for class hypotheses.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// Numerical settings shared by every bound in a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalContext {
    pub sweep: SweepConfig,
    pub tol_rel: f64,
    pub class_tol: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            sweep: SweepConfig::default(),
            tol_rel: DEFAULT_TOL_REL,
            class_tol: DEFAULT_CLASS_TOL,
        }
    }
}

impl EvalContext {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if !(self.tol_rel >= 0.0) || !self.tol_rel.is_finite() {
            return Err(Error::BadSweep(format!(
                "tolerance {} must be nonnegative",
                self.tol_rel
            )));
        }
        if !(self.class_tol > 0.0) || !self.class_tol.is_finite() {
            return Err(Error::BadSweep(format!(
                "class tolerance {} must be positive",
                self.class_tol
            )));
        }
        Ok(())
    }

    /// Absolute slack tolerance at a given scale.
    pub fn threshold(&self, scale: f64) -> f64 {
        tolerance(self.tol_rel, scale)
    }
}

/// Outcome of evaluating one bound on one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub scale: f64,
    pub details: BTreeMap<String, f64>,
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl BoundReport {
    /// Report for `lhs ≤ rhs`.
    pub fn inequality(id: impl Into<String>, lhs: f64, rhs: f64, scale: f64, ctx: &EvalContext) -> Self {
        Self::with_slack(id, lhs, rhs, rhs - lhs, scale, ctx)
    }

    /// Report for `lhs = rhs`; slack is `−|rhs − lhs|`.
    pub fn identity(id: impl Into<String>, lhs: f64, rhs: f64, scale: f64, ctx: &EvalContext) -> Self {
        Self::with_slack(id, lhs, rhs, -(rhs - lhs).abs(), scale, ctx)
    }

    fn with_slack(id: impl Into<String>, lhs: f64, rhs: f64, slack: f64, scale: f64, ctx: &EvalContext) -> Self {
        BoundReport {
            bound_id: id.into(),
            lhs,
            rhs,
            slack,
            holds: slack >= -ctx.threshold(scale),
            scale,
            details: BTreeMap::new(),
            applicable: true,
            reason: None,
        }
    }

    pub fn detail(mut self, name: &str, value: f64) -> Self {
        self.details.insert(name.to_string(), value);
        self
    }

    pub fn flag(self, name: &str, value: bool) -> Self {
        self.detail(name, if value { 1.0 } else { 0.0 })
    }

    /// Marks the report as outside the bound's hypotheses.
    pub fn inapplicable(mut self, reason: impl Into<String>) -> Self {
        self.applicable = false;
        self.reason = Some(reason.into());
        self
    }

    /// `slack / scale`, or the raw slack when the scale vanishes.
    pub fn relative_slack(&self) -> f64 {
        if self.scale > 0.0 {
            self.slack / self.scale
        } else {
            self.slack
        }
    }

    /// An applicable report whose inequality fails.
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.holds
    }
}

macro_rules! ids {
    ($($variant:ident => $name:literal, $lemma:literal;)*) => {
        /// Stable identifiers of every bound and lemma check.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum BoundId {
            $($variant,)*
        }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[$(BoundId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(BoundId::$variant => $name,)*
                }
            }

            pub fn is_lemma(self) -> bool {
                match self {
                    $(BoundId::$variant => $lemma,)*
                }
            }
        }
    };
}

ids! {
    EquivLower => "equiv_lower", false;
    EquivUpper => "equiv_upper", false;
    Kittaneh03 => "kittaneh03", false;
    BpSpectral => "bp_spectral", false;
    Heydarbeygi => "heydarbeygi", false;
    FgGeneral => "fg_general", false;
    PowerMean => "power_mean", false;
    Thm24 => "thm24", false;
    Cor10 => "cor10", false;
    Prop4 => "prop4", false;
    Thm5 => "thm5", false;
    Eq16 => "eq16", false;
    NormalProp => "normal_prop", false;
    Thm6 => "thm6", false;
    Thm8 => "thm8", false;
    MsAccDis => "ms_acc_dis", false;
    Product3 => "product3", false;
    Eq18 => "eq18", false;
    Eq19 => "eq19", false;
    RemarkMin => "remark_min", false;
    Thm25 => "thm25", false;
    FinalThm => "final_thm", false;
    K1 => "k1", true;
    Lem2 => "lem2", true;
    Lem3 => "lem3", true;
    Lem14 => "lem14", true;
    Lem17 => "lem17", true;
    Lem22 => "lem22", true;
    Lem27 => "lem27", true;
    Lem28 => "lem28", true;
    Eq21 => "eq21", true;
    AsIneq => "as_ineq", true;
    Pomoc => "pomoc", true;
}

impl BoundId {
    pub fn bounds() -> impl Iterator<Item = BoundId> {
        Self::ALL.iter().copied().filter(|id| !id.is_lemma())
    }

    pub fn lemmas() -> impl Iterator<Item = BoundId> {
        Self::ALL.iter().copied().filter(|id| id.is_lemma())
    }

    /// Parameter used when none is given, for ids that take one.
    pub fn default_param(self) -> Option<Param> {
        use BoundId::*;
        match self {
            FgGeneral => Some(Param::Value(0.75)),
            PowerMean => Some(Param::Value(0.5)),
            Prop4 | Lem22 | Lem28 | AsIneq => Some(Param::Value(2.0)),
            Lem27 => Some(Param::Value(0.5)),
            Thm25 | FinalThm => Some(Param::Value(f64::INFINITY)),
            _ => None,
        }
    }

    /// Whether the bound reads the second operand `T`.
    pub fn uses_pair(self) -> bool {
        use BoundId::*;
        matches!(self, Thm24 | Prop4 | Thm5 | NormalProp | Product3) || self.is_lemma()
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

/// Numeric parameter of a bound (`t`, `r`, `p`), or the rational `f, g` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Value(f64),
    /// `f(t) = 1 + t`, `g(t) = t / (1 + t)`.
    Rational,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) if v.is_infinite() => f.write_str("inf"),
            Param::Value(v) => write!(f, "{v}"),
            Param::Rational => f.write_str("rational"),
        }
    }
}

/// A bound id with its parameter resolved, written `id` or `id@param`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSpec {
    pub id: BoundId,
    pub param: Option<Param>,
}

impl BoundSpec {
    pub fn new(id: BoundId) -> Self {
        BoundSpec {
            id,
            param: id.default_param(),
        }
    }

    pub fn with_value(id: BoundId, value: f64) -> Result<Self> {
        let spec = BoundSpec {
            id,
            param: Some(Param::Value(value)),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn value(&self) -> Option<f64> {
        match self.param {
            Some(Param::Value(v)) => Some(v),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        use BoundId::*;
        let bad = |v: f64| Err(Error::BadExponent(v));
        match (self.id, self.param) {
            (_, None) => Ok(()),
            (FgGeneral, Some(Param::Rational)) => Ok(()),
            (_, Some(Param::Rational)) => Err(Error::UnknownBound(self.to_string())),
            (FgGeneral | PowerMean | Lem27, Some(Param::Value(v))) if !(0.0..=1.0).contains(&v) => bad(v),
            (Prop4 | Lem28 | AsIneq, Some(Param::Value(v))) if !(v >= 1.0) || v.is_infinite() => bad(v),
            (Thm25 | FinalThm | Lem22, Some(Param::Value(v))) if !(v >= 1.0) => bad(v),
            (FgGeneral | PowerMean | Lem27 | Prop4 | Lem28 | AsIneq | Thm25 | FinalThm | Lem22, _) => Ok(()),
            _ => Err(Error::UnknownBound(self.to_string())),
        }
    }

    /// Upper bounds whose left side scales like the right side under `S → cS`.
    pub fn is_homogeneous(&self) -> bool {
        match self.id {
            BoundId::FgGeneral | BoundId::PowerMean => self.value() == Some(0.5),
            _ => true,
        }
    }

    /// The quantity an upper bound controls; `None` for lower bounds.
    pub fn target(&self) -> Option<Target> {
        use BoundId::*;
        Some(match self.id {
            EquivUpper | Kittaneh03 | BpSpectral | Cor10 => Target::Radius,
            Heydarbeygi | FgGeneral | PowerMean | Eq16 => Target::RadiusSquared,
            Thm24 | NormalProp => Target::OffDiagRadius,
            Thm5 => Target::OffDiagRadiusSquared,
            Prop4 => Target::OffDiagRadiusPower(self.value()?.to_bits()),
            Thm6 => Target::Norm,
            Eq18 | RemarkMin => Target::NormSquared,
            Eq19 => Target::NormGap,
            Product3 => Target::ProductRadius,
            Thm25 | FinalThm => Target::GramSchatten(self.value()?.to_bits()),
            _ => return None,
        })
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}@{}", self.id, p),
            None => write!(f, "{}", self.id),
        }
    }
}

impl FromStr for BoundSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((name, raw)) = s.split_once('@') else {
            return Ok(BoundSpec::new(s.parse()?));
        };
        let id: BoundId = name.parse()?;
        if id.default_param().is_none() {
            return Err(Error::UnknownBound(s.to_string()));
        }
        // accept `power_mean@t=0.5` as well as `power_mean@0.5`
        let raw = raw.rsplit_once('=').map_or(raw, |(_, v)| v).trim();
        let param = match raw {
            "rational" => Param::Rational,
            "inf" | "infinity" | "∞" => Param::Value(f64::INFINITY),
            "½" => Param::Value(0.5),
            "¼" => Param::Value(0.25),
            "¾" => Param::Value(0.75),
            _ => Param::Value(raw.parse().map_err(|_| Error::UnknownBound(s.to_string()))?),
        };
        let spec = BoundSpec { id, param: Some(param) };
        spec.validate()?;
        Ok(spec)
    }
}

/// The left-hand quantity of an upper bound; bounds with the same target are
/// comparable by their right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Radius,
    RadiusSquared,
    OffDiagRadius,
    OffDiagRadiusSquared,
    OffDiagRadiusPower(u64),
    Norm,
    NormSquared,
    NormGap,
    ProductRadius,
    GramSchatten(u64),
}

/// Checks that `tighter` and `looser` bound the same quantity.
pub fn check_comparable(tighter: &BoundSpec, looser: &BoundSpec) -> Result<Target> {
    match (tighter.target(), looser.target()) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::IncomparableBounds(tighter.to_string(), looser.to_string())),
    }
}

/// Everything a single trial feeds to the catalog.
///
/// Bounds read `s` (and `t` for pair bounds); lemma checks read `s`, `t` as
/// `A`, `B` and the vectors `x`, `y`.
#[derive(Debug)]
pub struct TrialInputs {
    pub s: Operand,
    pub t: Operand,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    off_diag: OnceCell<f64>,
}

impl TrialInputs {
    pub fn new(s: ComplexMatrix, t: ComplexMatrix, x: Vec<C64>, y: Vec<C64>) -> Result<Self> {
        let s = Operand::new(s)?;
        let t = Operand::new(t)?;
        s.matrix().check_same_shape(t.matrix())?;
        for v in [&x, &y] {
            if v.len() != s.dim() {
                return Err(Error::DimensionMismatch {
                    left: (s.dim(), 1),
                    right: (v.len(), 1),
                });
            }
        }
        Ok(TrialInputs {
            s,
            t,
            x,
            y,
            off_diag: OnceCell::new(),
        })
    }

    /// `ω([[O,S],[T*,O]])`, computed once per trial.
    pub fn off_diag_radius(&self, ctx: &EvalContext) -> f64 {
        *self
            .off_diag
            .get_or_init(|| off_diag_unchecked(self.s.matrix(), self.t.matrix(), &ctx.sweep))
    }

    /// Inputs for single-matrix bounds: `T = S*` and standard basis vectors.
    pub fn single(s: ComplexMatrix) -> Result<Self> {
        let t = s.adjoint();
        Self::pair(s, t)
    }

    pub fn pair(s: ComplexMatrix, t: ComplexMatrix) -> Result<Self> {
        let n = s.rows();
        let mut e = vec![C64::new(0.0, 0.0); n];
        if n > 0 {
            e[0] = C64::new(1.0, 0.0);
        }
        Self::new(s, t, e.clone(), e)
    }
}

/// Evaluates one bound or lemma on a trial.
pub fn evaluate(spec: &BoundSpec, inputs: &TrialInputs, ctx: &EvalContext) -> Result<BoundReport> {
    use BoundId::*;
    let (s, t) = (&inputs.s, &inputs.t);
    let value = || spec.value().ok_or_else(|| Error::UnknownBound(spec.to_string()));
    let mut report = match spec.id {
        EquivLower => equiv_lower(s, ctx),
        EquivUpper => equiv_upper(s, ctx),
        Kittaneh03 => kittaneh03(s, ctx),
        BpSpectral => bp_spectral(s, ctx),
        Heydarbeygi => heydarbeygi(s, ctx),
        FgGeneral => match spec.param {
            Some(Param::Rational) => fg_general(s, &FgPair::Rational, ctx)?,
            _ => fg_general(s, &FgPair::Power(value()?), ctx)?,
        },
        PowerMean => power_mean(s, value()?, ctx)?,
        Thm24 => catalog::thm24_given(s, t, inputs.off_diag_radius(ctx), ctx),
        Cor10 => cor10(s, ctx),
        Prop4 => {
            let r = value()?;
            if !(r >= 1.0) || !r.is_finite() {
                return Err(Error::BadExponent(r));
            }
            catalog::prop4_given(s, t, r, inputs.off_diag_radius(ctx), ctx)
        }
        Thm5 => catalog::thm5_given(s, t, inputs.off_diag_radius(ctx), ctx),
        Eq16 => eq16(s, ctx),
        NormalProp => catalog::normal_prop_given(s, t, inputs.off_diag_radius(ctx), ctx),
        Thm6 => thm6(s, ctx),
        Thm8 => thm8(s, ctx),
        MsAccDis => ms_acc_dis(s, ctx),
        Product3 => product3(s, t, ctx)?,
        Eq18 => eq18(s, ctx),
        Eq19 => eq19(s, ctx)?,
        RemarkMin => remark_min(s, ctx),
        Thm25 => thm25(s, value()?, ctx)?,
        FinalThm => final_thm(s, value()?, ctx)?,
        _ => {
            let lemma_inputs = LemmaInputs {
                a: s,
                b: t,
                x: &inputs.x,
                y: &inputs.y,
            };
            return check_lemma(spec, &lemma_inputs, ctx);
        }
    };
    report.bound_id = spec.to_string();
    Ok(report)
}

/// Parses a comma-separated list; `all` expands to every bound (lemmas
/// excluded), `lemmas` to every lemma check.
pub fn parse_bound_list(text: &str) -> Result<Vec<BoundSpec>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "all" => out.extend(BoundId::bounds().map(BoundSpec::new)),
            "lemmas" => out.extend(BoundId::lemmas().map(BoundSpec::new)),
            _ => out.push(item.parse()?),
        }
    }
    if out.is_empty() {
        return Err(Error::UnknownBound(text.to_string()));
    }
    Ok(out)
}
