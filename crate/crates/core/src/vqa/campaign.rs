use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    donate, interp_grow, qaoa_start, random_params, sub_seed, EvalMode, MinimizeConfig, Objective, ObjectiveSpec,
    OptResult, VqaError,
};
use crate::ansatz::Variant;
use crate::lattice_hp::Instance;
use crate::simulator::Counts;

/// Fresh shots drawn after optimization to estimate the success rate.
pub const EVAL_SHOTS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub runs: usize,
    pub minimize: MinimizeConfig,
    pub eval_shots: u64,
    /// Reuse the best QAOA schedule of one instance on the next.
    pub qaoa_donation: bool,
    pub seed: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            runs: 10,
            minimize: MinimizeConfig::default(),
            eval_shots: EVAL_SHOTS,
            qaoa_donation: false,
            seed: 0,
        }
    }
}

/// One optimization at a fixed depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageResult {
    pub p: usize,
    pub start: Vec<f64>,
    pub result: OptResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub n: usize,
    pub n_h: usize,
    pub variant: &'static str,
    pub mode: &'static str,
    /// Depth-by-depth optimizations; a single stage unless INTERP grew
    /// the schedule.
    pub stages: Vec<StageResult>,
    pub counts: Counts,
    /// Mass on the solution: `|amplitude|^2` in exact mode, the sampled
    /// frequency otherwise.
    pub success_rate: f64,
    /// `|amplitude|^2` of the noiseless final state, where one exists.
    pub exact_success: Option<f64>,
}

impl RunRecord {
    /// The final stage's optimization.
    pub fn result(&self) -> &OptResult {
        &self.stages.last().expect("at least one stage").result
    }

    pub fn evals(&self) -> usize {
        self.stages.iter().map(|s| s.result.evals).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Campaign {
    pub n: usize,
    pub n_h: usize,
    pub variant: &'static str,
    pub mode: &'static str,
    pub runs: Vec<RunRecord>,
    pub mean: f64,
    /// Sample standard deviation of the success rates over `sqrt(runs)`.
    pub standard_error: f64,
    pub best: usize,
}

impl Campaign {
    fn from_runs(n: usize, n_h: usize, variant: Variant, mode: EvalMode, runs: Vec<RunRecord>) -> Campaign {
        let rates: Vec<f64> = runs.iter().map(|r| r.success_rate).collect();
        let (mean, standard_error) = mean_and_se(&rates);
        let best = best_run(&runs);
        Campaign { n, n_h, variant: variant.id(), mode: mode.label(), runs, mean, standard_error, best }
    }
}

pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Index of the highest success rate; ties go to the lowest index.
pub fn best_run(runs: &[RunRecord]) -> usize {
    (0..runs.len()).fold(0, |b, i| if runs[i].success_rate > runs[b].success_rate { i } else { b })
}

/// Optimized parameters handed from one campaign to the next.
#[derive(Clone, Debug, PartialEq)]
pub struct Donor {
    pub n: usize,
    pub variant: Variant,
    pub mode: EvalMode,
    pub params: Vec<f64>,
}

/// Optimizes depth 1 from `start`, then grows by INTERP and re-optimizes
/// at each depth up to `obj`'s.
pub fn interp_pipeline(obj: &Objective, start: &[f64], cfg: &MinimizeConfig) -> Result<Vec<StageResult>, VqaError> {
    let target = obj.spec().p;
    let mut x = start.to_vec();
    let mut stages = Vec::with_capacity(target);
    for p in 1..=target {
        let at;
        let o = if p == target {
            obj
        } else {
            at = obj.at_depth(p)?;
            &at
        };
        let result = o.minimize(&x, cfg)?;
        let next = if p < target { interp_grow(&result.params)? } else { Vec::new() };
        stages.push(StageResult { p, start: std::mem::replace(&mut x, next), result });
    }
    Ok(stages)
}

/// Campaigns along `chain`, one per instance, with `template` supplying
/// the variant, depth, mode and lambda.
pub fn run_campaign(
    chain: &[Arc<Instance>],
    template: &ObjectiveSpec,
    cfg: &CampaignConfig,
) -> Result<Vec<Campaign>, VqaError> {
    run_campaign_from(chain, template, cfg, None)
}

/// As [`run_campaign`] with `donor` seeding the first instance.
///
/// Donation uses the best run of the previous instance. HEA parameters
/// are always donated; QAOA schedules only with `cfg.qaoa_donation`.
pub fn run_campaign_from(
    chain: &[Arc<Instance>],
    template: &ObjectiveSpec,
    cfg: &CampaignConfig,
    donor: Option<&Donor>,
) -> Result<Vec<Campaign>, VqaError> {
    run_campaign_observed(chain, template, cfg, donor, |_| {})
}

/// As [`run_campaign_from`], calling `observe` with the campaigns finished
/// so far after each instance.
pub fn run_campaign_observed(
    chain: &[Arc<Instance>],
    template: &ObjectiveSpec,
    cfg: &CampaignConfig,
    donor: Option<&Donor>,
    mut observe: impl FnMut(&[Campaign]),
) -> Result<Vec<Campaign>, VqaError> {
    if chain.is_empty() || chain.windows(2).any(|w| w[0].n() > w[1].n()) {
        return Err(VqaError::BadChain);
    }
    if let Some(d) = donor {
        if !d.mode.compatible(&template.mode) {
            return Err(VqaError::CrossModeDonation { from: d.mode.label(), to: template.mode.label() });
        }
        if d.variant != template.variant || chain[0].n() < d.n {
            return Err(VqaError::BadChain);
        }
    }
    let mut donor = donor.cloned();
    let mut out = Vec::with_capacity(chain.len());
    for (idx, inst) in chain.iter().enumerate() {
        let spec = ObjectiveSpec { instance: Arc::clone(inst), ..template.clone() };
        let obj = Objective::new(&spec)?;
        let n = inst.n();
        let runs = (0..cfg.runs)
            .into_par_iter()
            .map(|r| run_one(&obj, cfg, donor.as_ref(), idx, r))
            .collect::<Result<Vec<_>, _>>()?;
        let campaign = Campaign::from_runs(n, inst.n_h, spec.variant, spec.mode, runs);
        donor = Some(Donor {
            n,
            variant: spec.variant,
            mode: spec.mode,
            params: campaign.runs[campaign.best].result().params.clone(),
        });
        out.push(campaign);
        observe(&out);
    }
    Ok(out)
}

fn run_one(
    obj: &Objective,
    cfg: &CampaignConfig,
    donor: Option<&Donor>,
    idx: usize,
    r: usize,
) -> Result<RunRecord, VqaError> {
    let spec = obj.spec();
    let n = spec.instance.n();
    let run_seed = sub_seed(cfg.seed, &[idx as u64, n as u64, r as u64]);
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let obj = obj.with_mode(spec.mode, sub_seed(run_seed, &[1]))?;

    let stages = match spec.variant {
        Variant::Hea(_) => {
            let start = match donor {
                Some(d) if d.n < n => donate(&d.params, d.n, n, &mut rng)?,
                Some(d) => d.params.clone(),
                None => random_params(obj.num_params(), &mut rng),
            };
            let result = obj.minimize(&start, &cfg.minimize)?;
            vec![StageResult { p: spec.variant_layers(), start, result }]
        }
        Variant::Qaoa(_) => match donor {
            Some(d) if cfg.qaoa_donation => {
                let result = obj.minimize(&d.params, &cfg.minimize)?;
                vec![StageResult { p: spec.p, start: d.params.clone(), result }]
            }
            _ => {
                let start = if r == 0 { qaoa_start() } else { random_params(2, &mut rng) };
                interp_pipeline(&obj, &start, &cfg.minimize)?
            }
        },
    };
    let params = &stages.last().expect("at least one stage").result.params;
    let counts = obj.counts(params, cfg.eval_shots, sub_seed(run_seed, &[2]))?;
    let sol = obj.solution_index();
    let sampled = sol.map_or(0.0, |k| counts.get(&k).copied().unwrap_or(0) as f64 / cfg.eval_shots as f64);
    let exact_success = match (spec.mode, sol) {
        (EvalMode::Noisy { .. }, _) | (_, None) => None,
        (_, Some(k)) => Some(obj.state(params)?.probability(k as usize)),
    };
    let success_rate = match spec.mode {
        EvalMode::Exact => exact_success.unwrap_or(0.0),
        _ => sampled,
    };
    Ok(RunRecord {
        run: r,
        seed: run_seed,
        n,
        n_h: spec.instance.n_h,
        variant: spec.variant.id(),
        mode: spec.mode.label(),
        stages,
        counts,
        success_rate,
        exact_success,
    })
}

impl ObjectiveSpec {
    fn variant_layers(&self) -> usize {
        match self.variant {
            Variant::Hea(l) => l,
            Variant::Qaoa(_) => self.p,
        }
    }
}
