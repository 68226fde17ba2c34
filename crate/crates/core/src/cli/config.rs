//! Experiment configuration files (TOML).
//!
//! ```toml
//! [instances]
//! chain = [4, 8, 10]      # chain lengths, built or bundled
//! files = []              # or instance files, in chain order
//! lambda = 1.1
//!
//! [ansatz]
//! variant = "hea-1"
//! p = 1                   # QAOA depth, grown from 1 by INTERP
//!
//! [mode]
//! kind = "exact"          # exact | sampled | noisy
//! shots = 1000
//! p1 = 3e-4
//! p2 = 3e-3
//! p_ro = 2e-2
//!
//! [optimizer]
//! max_evals = 10000
//! rho_begin = 0.5
//! rho_end = 1e-4
//!
//! [campaign]
//! runs = 10
//! seed = 0
//! eval_shots = 10000
//! qaoa_donation = false
//!
//! [output]
//! dir = "results"
//! ```
//!
//! Every key is optional.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ansatz::Variant;
use crate::qubo::DEFAULT_LAMBDA;
use crate::simulator::NoiseModel;
use crate::vqa::{CampaignConfig, EvalMode, MinimizeConfig, EVAL_SHOTS};

use super::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instances: InstancesSection,
    pub ansatz: AnsatzSection,
    pub mode: ModeSection,
    pub optimizer: OptimizerSection,
    pub campaign: CampaignSection,
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct InstancesSection {
    pub chain: Vec<usize>,
    pub files: Vec<PathBuf>,
    pub lambda: f64,
}

impl Default for InstancesSection {
    fn default() -> Self {
        InstancesSection { chain: Vec::new(), files: Vec::new(), lambda: DEFAULT_LAMBDA }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzSection {
    pub variant: String,
    pub p: usize,
}

impl Default for AnsatzSection {
    fn default() -> Self {
        AnsatzSection { variant: "hea-1".into(), p: 1 }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ModeSection {
    pub kind: String,
    pub shots: u64,
    pub p1: f64,
    pub p2: f64,
    pub p_ro: f64,
}

impl Default for ModeSection {
    fn default() -> Self {
        let nm = NoiseModel::default();
        ModeSection { kind: "exact".into(), shots: 1000, p1: nm.p1, p2: nm.p2, p_ro: nm.p_ro }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSection {
    pub max_evals: usize,
    pub rho_begin: f64,
    pub rho_end: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let d = MinimizeConfig::default();
        OptimizerSection { max_evals: d.max_evals, rho_begin: d.rho_begin, rho_end: d.rho_end }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignSection {
    pub runs: usize,
    pub seed: u64,
    pub eval_shots: u64,
    pub qaoa_donation: bool,
}

impl Default for CampaignSection {
    fn default() -> Self {
        CampaignSection { runs: 10, seed: 0, eval_shots: EVAL_SHOTS, qaoa_donation: false }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("results") }
    }
}

/// A checked configuration, ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct Validated {
    pub variant: Variant,
    pub p: usize,
    pub mode: EvalMode,
    pub lambda: f64,
    pub campaign: CampaignConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        ExperimentConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<Validated, CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let variant: Variant = self.ansatz.variant.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        if variant.is_qaoa() && self.ansatz.p == 0 {
            return bad("ansatz.p must be at least 1".into());
        }
        if self.instances.chain.is_empty() == self.instances.files.is_empty() {
            return bad("give exactly one of instances.chain and instances.files".into());
        }
        for f in &self.instances.files {
            if !f.is_file() {
                return bad(format!("instance file {} does not exist", f.display()));
            }
        }
        if !(self.instances.lambda > 0.0 && self.instances.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.instances.lambda));
        }
        let shots = self.mode.shots;
        let mode = match self.mode.kind.as_str() {
            "exact" => EvalMode::Exact,
            "sampled" if shots > 0 => EvalMode::Sampled { shots },
            "noisy" if shots > 0 => {
                let model = NoiseModel::new(self.mode.p1, self.mode.p2, self.mode.p_ro)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                EvalMode::Noisy { model, shots }
            }
            "sampled" | "noisy" => return bad("mode.shots must be at least 1".into()),
            other => return bad(format!("unknown mode `{other}`")),
        };
        let o = &self.optimizer;
        if o.max_evals == 0 || !(o.rho_begin > 0.0) || !(o.rho_end > 0.0) || o.rho_end > o.rho_begin {
            return bad("optimizer needs max_evals >= 1 and 0 < rho_end <= rho_begin".into());
        }
        if self.campaign.runs == 0 || self.campaign.eval_shots == 0 {
            return bad("campaign.runs and campaign.eval_shots must be at least 1".into());
        }
        Ok(Validated {
            variant,
            p: if variant.is_qaoa() { self.ansatz.p } else { 1 },
            mode,
            lambda: self.instances.lambda,
            campaign: CampaignConfig {
                runs: self.campaign.runs,
                minimize: MinimizeConfig { rho_begin: o.rho_begin, rho_end: o.rho_end, max_evals: o.max_evals },
                eval_shots: self.campaign.eval_shots,
                qaoa_donation: self.campaign.qaoa_donation,
                seed: self.campaign.seed,
            },
        })
    }
}
