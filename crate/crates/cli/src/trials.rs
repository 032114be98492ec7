use radiuslab_core::bounds::{admissible_inputs, BoundId, BoundSpec, TrialInputs};
use radiuslab_core::ensembles::{random_unit_vector, sample_from, stream_rng};

use crate::{Result, RunConfig};

/// Salt separating a lemma's input stream from the ensemble stream.
fn lemma_seed(seed: u64, id: BoundId) -> u64 {
    let index = BoundId::ALL.iter().position(|&b| b == id).unwrap_or(0) as u64;
    seed ^ (index + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Ensemble draws shared by every bound in trial `trial`.
pub(crate) fn ensemble_inputs(config: &RunConfig, trial: u64) -> Result<TrialInputs> {
    let mut rng = stream_rng(config.seed, trial);
    let dim = config.dims.draw(&mut rng);
    let s = sample_from(config.ensemble, dim, config.scale, &mut rng);
    let t = sample_from(config.pair_kind(), dim, config.scale, &mut rng);
    let x = random_unit_vector(dim, &mut rng);
    let y = random_unit_vector(dim, &mut rng);
    Ok(TrialInputs::new(s, t, x, y)?)
}

/// Inputs meeting a lemma's hypotheses; the dimension follows the ensemble draw.
pub(crate) fn lemma_inputs(config: &RunConfig, id: BoundId, trial: u64, dim: usize) -> Result<TrialInputs> {
    let mut rng = stream_rng(lemma_seed(config.seed, id), trial);
    Ok(admissible_inputs(id, dim, config.scale, &mut rng)?)
}

/// Inputs a spec sees in a trial, given the trial's ensemble draw.
pub(crate) fn inputs_for<'a>(
    config: &RunConfig,
    spec: &BoundSpec,
    trial: u64,
    shared: &'a TrialInputs,
    scratch: &'a mut Option<TrialInputs>,
) -> Result<&'a TrialInputs> {
    if spec.id.is_lemma() {
        Ok(scratch.insert(lemma_inputs(config, spec.id, trial, shared.s.dim())?))
    } else {
        Ok(shared)
    }
}
