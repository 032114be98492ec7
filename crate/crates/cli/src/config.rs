use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use radiuslab_core::bounds::{BoundSpec, EvalContext, DEFAULT_CLASS_TOL};
use radiuslab_core::ensembles::EnsembleKind;
use radiuslab_core::radius::SweepConfig;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::{HarnessError, Result};

/// Caps the number of worker threads when set to a positive integer.
pub const THREADS_ENV: &str = "RADIUSLAB_THREADS";

/// Inclusive range of matrix dimensions; each trial draws one uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub min: usize,
    pub max: usize,
}

impl DimRange {
    pub fn fixed(n: usize) -> Self {
        DimRange { min: n, max: n }
    }

    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max {
            return Err(HarnessError::Config(format!("dimension range {min}-{max} is empty")));
        }
        Ok(DimRange { min, max })
    }

    pub(crate) fn draw(&self, rng: &mut impl Rng) -> usize {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }
}

impl Default for DimRange {
    fn default() -> Self {
        DimRange { min: 2, max: 16 }
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}-{}", self.min, self.max)
        }
    }
}

impl FromStr for DimRange {
    type Err = HarnessError;

    /// `N` or `LO-HI`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Config(format!("bad dimension `{s}`")))
        };
        match s.split_once('-') {
            Some((lo, hi)) => DimRange::new(parse(lo)?, parse(hi)?),
            None => DimRange::new(parse(s)?, parse(s)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Everything that determines a verify, compare or sharpness run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "as_strings")]
    pub bounds: Vec<BoundSpec>,
    pub ensemble: EnsembleKind,
    /// Ensemble for the second operand of pair bounds; defaults to `ensemble`.
    pub pair_ensemble: Option<EnsembleKind>,
    pub dims: DimRange,
    pub scale: f64,
    pub trials: usize,
    pub seed: u64,
    pub tol_rel: f64,
    pub sweep: SweepConfig,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

pub(crate) fn as_strings<S: Serializer>(bounds: &[BoundSpec], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(bounds.iter().map(|b| b.to_string()))
}

impl RunConfig {
    pub fn new(bounds: Vec<BoundSpec>, ensemble: EnsembleKind) -> Self {
        RunConfig {
            bounds,
            ensemble,
            pair_ensemble: None,
            dims: DimRange::default(),
            scale: 1.0,
            trials: 100,
            seed: 0,
            tol_rel: radiuslab_core::bounds::DEFAULT_TOL_REL,
            sweep: SweepConfig::default(),
            output_path: None,
            output_format: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(HarnessError::Config("no bounds selected".into()));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be positive".into()));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(HarnessError::Config(format!("scale {} must be positive", self.scale)));
        }
        DimRange::new(self.dims.min, self.dims.max)?;
        self.context().validate()?;
        Ok(())
    }

    pub fn context(&self) -> EvalContext {
        EvalContext {
            sweep: self.sweep,
            tol_rel: self.tol_rel,
            class_tol: DEFAULT_CLASS_TOL,
        }
    }

    pub(crate) fn pair_kind(&self) -> EnsembleKind {
        self.pair_ensemble.unwrap_or(self.ensemble)
    }
}

pub(crate) fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| HarnessError::Config(format!("{THREADS_ENV}={value} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| HarnessError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_ranges_parse() {
        assert_eq!("4".parse::<DimRange>().unwrap(), DimRange::fixed(4));
        assert_eq!("2-8".parse::<DimRange>().unwrap(), DimRange { min: 2, max: 8 });
        assert!("8-2".parse::<DimRange>().is_err());
        assert!("0".parse::<DimRange>().is_err());
        assert!("x".parse::<DimRange>().is_err());
        assert_eq!(DimRange { min: 2, max: 8 }.to_string(), "2-8");
    }
}
