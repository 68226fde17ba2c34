//! The classical outer loop: objectives over bound circuits, the optimizer,
//! INTERP layer growth, HEA parameter donation, success-rate campaigns and
//! p = 1 landscapes.

mod campaign;
mod landscape;
mod optimizer;
mod schedule;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use campaign::{
    best_run, interp_pipeline, run_campaign, run_campaign_from, run_campaign_observed, Campaign, CampaignConfig, Donor,
    RunRecord, StageResult, EVAL_SHOTS,
};
pub use landscape::{landscape_scan, Axis, Grid, Landscape};
pub use optimizer::{minimize, MinimizeConfig, OptResult, Termination};
pub use schedule::{donate, interp_grow, qaoa_start, random_params};

use crate::ansatz::{bind, build_hea, build_qaoa_with_cost, AnsatzError, ParameterizedCircuit, Variant};
use crate::lattice_hp::Instance;
use crate::qubo::{build_qubo, diagonal, DiagonalCost, QuboError, QuboModel};
use crate::simulator::{
    expectation_diagonal, run_circuit, run_noisy, sample, Counts, NoiseModel, SimError, Statevector,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VqaError {
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error("sampled modes need at least one shot")]
    NoShots,
    #[error("donation needs a smaller source circuit: {n_small} -> {n_large}")]
    BadDonation { n_small: usize, n_large: usize },
    #[error("parameters are never transferred between {from} and {to} evaluation")]
    CrossModeDonation { from: &'static str, to: &'static str },
    #[error("instance chain must be non-empty and ordered by increasing n")]
    BadChain,
    #[error("{0} has no (beta, gamma) landscape")]
    NoLandscape(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EvalMode {
    /// `<psi|C|psi>` from the final statevector.
    Exact,
    /// Mean energy of `shots` noiseless samples.
    Sampled { shots: u64 },
    /// Mean energy of `shots` noisy trajectories.
    Noisy { model: NoiseModel, shots: u64 },
}

impl EvalMode {
    pub fn label(&self) -> &'static str {
        match self {
            EvalMode::Exact => "exact",
            EvalMode::Sampled { .. } => "sampled",
            EvalMode::Noisy { .. } => "noisy",
        }
    }

    /// Whether results may seed another run in mode `other`. Noiseless
    /// modes mix freely; noisy and noiseless never do.
    pub fn compatible(&self, other: &EvalMode) -> bool {
        matches!(self, EvalMode::Noisy { .. }) == matches!(other, EvalMode::Noisy { .. })
    }
}

#[derive(Clone, Debug)]
pub struct ObjectiveSpec {
    pub instance: Arc<Instance>,
    pub lambda: f64,
    pub variant: Variant,
    /// QAOA depth `p`; HEA layer counts come from the variant.
    pub p: usize,
    pub mode: EvalMode,
    pub seed: u64,
}

/// SplitMix64 finalizer.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seed derived from `seed` and a sequence of labels.
pub(crate) fn sub_seed(seed: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(mix(seed), |h, &l| mix(h ^ l))
}

/// The compiled objective of a spec: model, diagonal, circuit template and
/// the cached prepared state.
pub struct Objective {
    spec: ObjectiveSpec,
    model: QuboModel,
    cost: Arc<DiagonalCost>,
    circuit: ParameterizedCircuit,
    prep: Statevector,
}

impl Objective {
    pub fn new(spec: &ObjectiveSpec) -> Result<Objective, VqaError> {
        match spec.mode {
            EvalMode::Sampled { shots: 0 } | EvalMode::Noisy { shots: 0, .. } => return Err(VqaError::NoShots),
            _ => {}
        }
        let model = build_qubo(&spec.instance.contact_map, spec.instance.n_h, spec.lambda)?;
        let cost = diagonal(&model).shared();
        Objective::with_cost(spec, model, cost)
    }

    /// As [`Objective::new`] reusing a diagonal of the same model.
    pub fn with_cost(spec: &ObjectiveSpec, model: QuboModel, cost: Arc<DiagonalCost>) -> Result<Objective, VqaError> {
        let circuit = match spec.variant {
            Variant::Qaoa(v) => build_qaoa_with_cost(&model, Arc::clone(&cost), v, spec.p)?,
            Variant::Hea(layers) => build_hea(model.n, layers)?,
        };
        let prep = run_circuit(&circuit.prep_circuit(), &Statevector::zero(model.n))?;
        Ok(Objective { spec: spec.clone(), model, cost, circuit, prep })
    }

    /// The same objective at another QAOA depth, sharing the diagonal.
    pub fn at_depth(&self, p: usize) -> Result<Objective, VqaError> {
        let spec = ObjectiveSpec { p, ..self.spec.clone() };
        Objective::with_cost(&spec, self.model.clone(), Arc::clone(&self.cost))
    }

    pub fn with_mode(&self, mode: EvalMode, seed: u64) -> Result<Objective, VqaError> {
        let spec = ObjectiveSpec { mode, seed, ..self.spec.clone() };
        Objective::with_cost(&spec, self.model.clone(), Arc::clone(&self.cost))
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn model(&self) -> &QuboModel {
        &self.model
    }

    pub fn cost(&self) -> &DiagonalCost {
        &self.cost
    }

    pub fn circuit(&self) -> &ParameterizedCircuit {
        &self.circuit
    }

    pub fn num_params(&self) -> usize {
        self.circuit.num_params
    }

    /// The known solution as a basis index (bead `i` is bit `i`).
    pub fn solution_index(&self) -> Option<u64> {
        self.spec.instance.solution.as_ref().map(|s| s.mask())
    }

    /// Noiseless final state.
    pub fn state(&self, params: &[f64]) -> Result<Statevector, VqaError> {
        let body = self.circuit.bind_body(params)?;
        Ok(run_circuit(&body, &self.prep)?)
    }

    pub fn exact_value(&self, params: &[f64]) -> Result<f64, VqaError> {
        Ok(expectation_diagonal(&self.state(params)?, &self.cost)?)
    }

    /// Measurement counts in this objective's mode (noiseless sampling for
    /// exact and sampled modes).
    pub fn counts(&self, params: &[f64], shots: u64, seed: u64) -> Result<Counts, VqaError> {
        match self.spec.mode {
            EvalMode::Noisy { model, .. } => {
                let c = bind(&self.circuit, params)?;
                Ok(run_noisy(&c, &model, shots, seed)?)
            }
            _ => {
                let s = self.state(params)?;
                Ok(sample(&s, shots, &mut ChaCha8Rng::seed_from_u64(seed)))
            }
        }
    }

    pub fn mean_energy(&self, counts: &Counts) -> f64 {
        let total: u64 = counts.values().sum();
        let sum: f64 = counts.iter().map(|(&k, &c)| self.cost.value(k as usize) * c as f64).sum();
        sum / total as f64
    }

    /// The objective value. Sampled modes draw from a generator seeded by
    /// the spec seed and the exact bit patterns of `params`.
    pub fn value(&self, params: &[f64]) -> Result<f64, VqaError> {
        match self.spec.mode {
            EvalMode::Exact => self.exact_value(params),
            EvalMode::Sampled { shots } | EvalMode::Noisy { shots, .. } => {
                let bits: Vec<u64> = params.iter().map(|x| x.to_bits()).collect();
                let counts = self.counts(params, shots, sub_seed(self.spec.seed, &bits))?;
                Ok(self.mean_energy(&counts))
            }
        }
    }

    /// Minimizes [`Objective::value`] from `x0`.
    pub fn minimize(&self, x0: &[f64], cfg: &MinimizeConfig) -> Result<OptResult, VqaError> {
        if x0.len() != self.num_params() {
            return Err(AnsatzError::ArityMismatch { expected: self.num_params(), got: x0.len() }.into());
        }
        // Arity is fixed, so evaluation cannot fail.
        Ok(minimize(|x| self.value(x).expect("arity checked"), x0, cfg))
    }
}

/// One-shot evaluation of `spec` at `params`.
pub fn objective(spec: &ObjectiveSpec, params: &[f64]) -> Result<f64, VqaError> {
    Objective::new(spec)?.value(params)
}
