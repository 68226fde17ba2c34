//! The `hpdesign` command line: `census`, `instance`, `run`, `depth` and
//! `landscape`.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 when a
//! request exceeds a capability bound (enumeration or qubit limits).
//! `HPDESIGN_THREADS` caps the worker threads.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::ansatz::{bind, build_hea, build_qaoa, AnsatzError, DepthReport, Variant};
use crate::lattice_hp::{
    design_census, search_instance, select_from_census, select_instance, table_composition, table_energy, Instance,
    LatticeError, SearchConfig, ENUMERATION_BOUND,
};
use crate::qubo::{build_qubo, QuboError, DEFAULT_LAMBDA};
use crate::simulator::SimError;
use crate::vqa::{run_campaign_observed, Axis, Campaign, EvalMode, Grid, ObjectiveSpec, VqaError};

pub use config::ExperimentConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Bound(_) => 2,
            _ => 1,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::BoundExceeded { .. } => CliError::Bound(e.to_string()),
            LatticeError::Io { .. } => CliError::Io(e.to_string()),
            LatticeError::BadInstanceFile { .. } => CliError::Config(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooManyQubits { .. } => CliError::Bound(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<QuboError> for CliError {
    fn from(e: QuboError) -> Self {
        match e {
            QuboError::BoundExceeded { .. } => CliError::Bound(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AnsatzError> for CliError {
    fn from(e: AnsatzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<VqaError> for CliError {
    fn from(e: VqaError) -> Self {
        match e {
            VqaError::Sim(s) => s.into(),
            VqaError::Qubo(q) => q.into(),
            VqaError::Ansatz(a) => a.into(),
            VqaError::NoLandscape(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hpdesign", version, about = "HP lattice-protein sequence design with simulated VQAs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Designability census; writes the table and the selected instance.
    Census {
        n: usize,
        /// Hydrophobic count of the instance (defaults to the table value).
        #[arg(long)]
        nh: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Builds, loads or searches for a design instance.
    Instance {
        n: Option<usize>,
        #[arg(long)]
        nh: Option<usize>,
        /// Write the instance file here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Search compact walks instead of the census or bundled files.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        max_candidates: usize,
        /// Re-verify an existing instance file.
        #[arg(long, conflicts_with = "n")]
        verify: Option<PathBuf>,
    },
    /// Runs the campaign described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_evals: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circuit depth and basis-gate counts.
    Depth {
        #[arg(long)]
        variant: String,
        /// QAOA depth or HEA layer count.
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Exact p = 1 energy on a (beta, gamma) grid.
    Landscape {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Points per axis: beta on [0, pi], gamma on [0, 2 pi).
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value = "landscape.csv")]
        out: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(t) = std::env::var("HPDESIGN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A pool may already exist when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

pub fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Census { n, nh, out } => cmd_census(*n, *nh, out),
        Command::Instance { n, nh, out, search, seed, max_candidates, verify } => {
            cmd_instance(*n, *nh, out.as_deref(), *search, *seed, *max_candidates, verify.as_deref())
        }
        Command::Run { config, variant, p, mode, shots, runs, seed, max_evals, out } => {
            let mut cfg = ExperimentConfig::load(config)?;
            // Relative instance paths are relative to the config file.
            let base = config.parent().unwrap_or(Path::new("."));
            for f in cfg.instances.files.iter_mut() {
                if f.is_relative() {
                    *f = base.join(&*f);
                }
            }
            if let Some(v) = variant {
                cfg.ansatz.variant = v.clone();
            }
            if let Some(p) = p {
                cfg.ansatz.p = *p;
            }
            if let Some(m) = mode {
                cfg.mode.kind = m.clone();
            }
            if let Some(s) = shots {
                cfg.mode.shots = *s;
            }
            if let Some(r) = runs {
                cfg.campaign.runs = *r;
            }
            if let Some(s) = seed {
                cfg.campaign.seed = *s;
            }
            if let Some(m) = max_evals {
                cfg.optimizer.max_evals = *m;
            }
            if let Some(o) = out {
                cfg.output.dir = o.clone();
            }
            cmd_run(&cfg)
        }
        Command::Depth { variant, p, n, instance } => cmd_depth(variant, *p, *n, instance.as_deref()),
        Command::Landscape { variant, n, instance, points, lambda, out } => {
            cmd_landscape(variant, *n, instance.as_deref(), *points, *lambda, out)
        }
    }
}

fn composition(n: usize, nh: Option<usize>) -> Result<usize, CliError> {
    nh.or_else(|| table_composition(n))
        .ok_or_else(|| CliError::Usage(format!("no tabulated composition for n={n}; pass --nh")))
}

/// The instance for `n` from the census or the bundled files.
fn instance_for(n: usize, nh: Option<usize>) -> Result<Instance, CliError> {
    if nh.is_none() && table_composition(n).is_none() && n > ENUMERATION_BOUND {
        return Err(LatticeError::BoundExceeded { n, bound: ENUMERATION_BOUND }.into());
    }
    Ok(select_instance(n, composition(n, nh)?)?)
}

fn instance_arg(n: Option<usize>, file: Option<&Path>) -> Result<Instance, CliError> {
    match (n, file) {
        (_, Some(f)) => Ok(Instance::load(f)?),
        (Some(n), None) => instance_for(n, None),
        (None, None) => Err(CliError::Usage("pass --n or --instance".into())),
    }
}

pub fn cmd_census(n: usize, nh: Option<usize>, out: &Path) -> Result<(), CliError> {
    if n > ENUMERATION_BOUND {
        return Err(LatticeError::BoundExceeded { n, bound: ENUMERATION_BOUND }.into());
    }
    let n_h = composition(n, nh)?;
    let census = design_census(n)?;
    let inst = select_from_census(&census, n_h)?;
    let table = out.join(format!("census_n{n}.csv"));
    let file = out.join(format!("instance_n{n}.txt"));
    output::write_atomic(&table, &output::census_csv(&census))?;
    output::write_atomic(&file, inst.to_text().as_bytes())?;
    let designable = census.designability.iter().filter(|&&d| d > 0).count();
    println!(
        "n={n} structures={} designable={designable} unique_fraction={:.5} instance={} nh={n_h} emin={} solution={}",
        census.structures.len(),
        census.unique_fraction(),
        inst.structure.moves_string(),
        inst.e_min,
        inst.solution.map_or(String::new(), |s| s.to_string()),
    );
    Ok(())
}

pub fn cmd_instance(
    n: Option<usize>,
    nh: Option<usize>,
    out: Option<&Path>,
    search: bool,
    seed: u64,
    max_candidates: usize,
    verify: Option<&Path>,
) -> Result<(), CliError> {
    let inst = if let Some(path) = verify {
        Instance::load(path)?
    } else {
        let n = n.ok_or_else(|| CliError::Usage("pass n or --verify".into()))?;
        if !search {
            instance_for(n, nh)?
        } else {
            let n_h = composition(n, nh)?;
            let e_min = table_energy(n, n_h)
                .ok_or_else(|| CliError::Usage(format!("no tabulated minimum energy for n={n}, nh={n_h}")))?;
            let cfg = SearchConfig { seed, max_candidates, ..SearchConfig::default() };
            search_instance(n, n_h, e_min, &cfg)?.ok_or_else(|| {
                CliError::Failed(format!("no instance found for n={n} within {max_candidates} candidates"))
            })?
        }
    };
    let text = inst.to_text();
    match out {
        Some(p) => {
            output::write_atomic(p, text.as_bytes())?;
            println!(
                "n={} nh={} emin={} moves={} -> {}",
                inst.n(),
                inst.n_h,
                inst.e_min,
                inst.structure.moves_string(),
                p.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

pub fn cmd_run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let v = cfg.validate()?;
    let chain: Vec<Arc<Instance>> = if cfg.instances.files.is_empty() {
        cfg.instances.chain.iter().map(|&n| instance_for(n, None).map(Arc::new)).collect::<Result<_, _>>()?
    } else {
        cfg.instances.files.iter().map(|f| Instance::load(f).map(Arc::new)).collect::<Result<_, _>>()?
    };
    if chain.windows(2).any(|w| w[0].n() > w[1].n()) {
        return Err(CliError::Config("instances must be ordered by increasing n".into()));
    }
    let dir = &cfg.output.dir;
    let template = ObjectiveSpec {
        instance: Arc::clone(&chain[0]),
        lambda: v.lambda,
        variant: v.variant,
        p: v.p,
        mode: v.mode,
        seed: v.campaign.seed,
    };
    // Results are rewritten after each instance so an interrupted chain
    // keeps its finished campaigns.
    let mut write_err = None;
    let done = run_campaign_observed(&chain, &template, &v.campaign, None, |so_far| {
        let c = so_far.last().expect("observer sees at least one campaign");
        println!(
            "n={} nh={} variant={} mode={} runs={} success={:.6} +- {:.6}",
            c.n,
            c.n_h,
            c.variant,
            c.mode,
            c.runs.len(),
            c.mean,
            c.standard_error
        );
        if write_err.is_none() {
            write_err = write_results(dir, so_far).err();
        }
    })?;
    match write_err {
        Some(e) => Err(e),
        None => write_results(dir, &done),
    }
}

fn write_results(dir: &Path, done: &[Campaign]) -> Result<(), CliError> {
    output::write_atomic(&dir.join("runs.csv"), &output::runs_csv(done))?;
    output::write_atomic(&dir.join("campaigns.csv"), &output::campaigns_csv(done))?;
    let json = serde_json::to_vec_pretty(done).map_err(|e| CliError::Io(e.to_string()))?;
    output::write_atomic(&dir.join("traces.json"), &json)
}

pub fn cmd_depth(variant: &str, p: usize, n: Option<usize>, file: Option<&Path>) -> Result<(), CliError> {
    let v: Variant = variant.parse()?;
    let (n, pc) = match v {
        Variant::Qaoa(q) => {
            if p == 0 {
                return Err(AnsatzError::BadLayers(0).into());
            }
            let inst = instance_arg(n, file)?;
            let m = build_qubo(&inst.contact_map, inst.n_h, DEFAULT_LAMBDA)?;
            (inst.n(), build_qaoa(&m, q, p)?)
        }
        Variant::Hea(layers) => {
            let n = match (n, file) {
                (_, Some(f)) => Instance::load(f)?.n(),
                (Some(n), None) => n,
                (None, None) => return Err(CliError::Usage("pass --n or --instance".into())),
            };
            (n, build_hea(n, layers)?)
        }
    };
    let c = bind(&pc, &vec![0.1; pc.num_params])?;
    let r = DepthReport::of(&c);
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!(
        "n={n} variant={} layers={} params={} depth={} two_qubit={} {}",
        v.id(),
        pc.layers,
        pc.num_params,
        r.depth,
        r.two_qubit_gates,
        counts.join(" ")
    );
    Ok(())
}

pub fn cmd_landscape(
    variant: &str,
    n: Option<usize>,
    file: Option<&Path>,
    points: usize,
    lambda: f64,
    out: &Path,
) -> Result<(), CliError> {
    let v: Variant = variant.parse()?;
    if !v.is_qaoa() {
        return Err(VqaError::NoLandscape(v.id().to_string()).into());
    }
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let inst = Arc::new(instance_arg(n, file)?);
    let spec = ObjectiveSpec { instance: inst, lambda, variant: v, p: 1, mode: EvalMode::Exact, seed: 0 };
    let grid = Grid { beta: Axis { lo: 0.0, hi: std::f64::consts::PI, points, open: false }, ..Grid::square(points) };
    let l = crate::vqa::landscape_scan(&spec, &grid)?;
    output::write_atomic(out, &output::landscape_csv(&l))?;
    let (i, j) = l.argmin();
    println!(
        "{}x{} grid -> {}; min {} at beta={} gamma={}",
        points,
        points,
        out.display(),
        l.values[i][j],
        l.betas[i],
        l.gammas[j]
    );
    Ok(())
}
