//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the report prints as it goes.

use std::collections::HashSet;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use hpdesign::ansatz::{bind, build_hea, build_qaoa, depth, QaoaVariant, Variant};
use hpdesign::lattice_hp::{
    bundled_instance, fold_verify, select_instance, table_composition, Instance, Structure, INSTANCE_TABLE,
};
use hpdesign::qubo::{build_qubo, DEFAULT_LAMBDA};
use hpdesign::simulator::{dicke_prep_circuit, run_circuit, NoiseModel, Statevector, DICKE_GATE_CONSTANT};
use hpdesign::vqa::{interp_grow, random_params, run_campaign, CampaignConfig, EvalMode, Objective, ObjectiveSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CENSUS_NS: [usize; 7] = [4, 8, 10, 11, 12, 13, 14];
const SOLVE_NS: [usize; 3] = [4, 8, 10];

struct Outcome {
    pass: bool,
    detail: String,
    /// Why a failure cannot be avoided, when it cannot.
    unattainable: Option<String>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Outcome {
        Outcome { pass, detail, unattainable: None }
    }
}

fn report(id: &str, title: &str, started: Instant, o: &Outcome) -> bool {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("{tag} {id:>2} {title} [{:.1}s] {}", started.elapsed().as_secs_f64(), o.detail);
    if let (false, Some(why)) = (o.pass, &o.unattainable) {
        println!("        expected failure: {why}");
    }
    o.pass || o.unattainable.is_some()
}

fn table_row(n: usize) -> (usize, i32) {
    let r = INSTANCE_TABLE.iter().find(|r| r.0 == n).expect("table row");
    (r.1, r.2)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Brute-force weight-`k` minimum of the HP energy, counting contacts from
/// the lattice coordinates directly.
fn oracle_minimum(s: &Structure, k: usize) -> (i32, usize) {
    let c = s.coords();
    let n = c.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if (c[i].0 - c[j].0).abs() + (c[i].1 - c[j].1).abs() == 1 {
                pairs.push((i, j));
            }
        }
    }
    let mut best = (1, 0);
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let e = -(pairs.iter().filter(|&&(i, j)| mask >> i & 1 == 1 && mask >> j & 1 == 1).count() as i32);
        if e < best.0 {
            best = (e, 1);
        } else if e == best.0 {
            best.1 += 1;
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for n in CENSUS_NS {
        let (n_h, e_min) = table_row(n);
        let inst = select_instance(n, n_h).expect("census instance");
        let (e, count) = oracle_minimum(&inst.structure, n_h);
        if inst.e_min != e_min || e != e_min || count != 1 {
            bad.push(format!("n={n}: got {} (oracle {e} x{count}), want {e_min}", inst.e_min));
        }
    }
    let mut bundled = 0;
    for &(n, n_h, e_min) in INSTANCE_TABLE.iter().filter(|r| r.0 > 14) {
        match bundled_instance(n, n_h) {
            Some(Ok(inst)) if inst.e_min == e_min => bundled += 1,
            Some(Ok(inst)) => bad.push(format!("bundled n={n}: e_min {} want {e_min}", inst.e_min)),
            Some(Err(e)) => bad.push(format!("bundled n={n}: {e}")),
            None => bad.push(format!("bundled n={n}: missing")),
        }
    }
    let detail = format!("census e_min exact for n in {CENSUS_NS:?}; {bundled} bundled files re-verified {bad:?}");
    Outcome::new(bad.is_empty(), detail)
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for n in CENSUS_NS {
        let inst = select_instance(n, table_composition(n).unwrap()).unwrap();
        let seq = inst.solution.unwrap();
        let r = fold_verify(&seq, &inst.structure, 1.0).unwrap();
        let p: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|&b| r.probability_at(b)).collect();
        if !r.unique_ground_state_is_target || !p.windows(2).all(|w| w[1] > w[0]) {
            bad.push(format!("n={n}: unique={} P={p:?}", r.unique_ground_state_is_target));
        }
    }
    Outcome::new(bad.is_empty(), format!("unique fold and rising P_beta for n in {CENSUS_NS:?} {bad:?}"))
}

fn exact_spec(inst: &Arc<Instance>, variant: Variant, p: usize) -> ObjectiveSpec {
    ObjectiveSpec { instance: Arc::clone(inst), lambda: DEFAULT_LAMBDA, variant, p, mode: EvalMode::Exact, seed: 0 }
}

fn criterion_3() -> Outcome {
    let variants = [QaoaVariant::XYFC_BI, QaoaVariant::XYFC_DI, QaoaVariant::XYRING_BI, QaoaVariant::XYRING_DI];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for n in [4, 8, 10, 11, 12] {
        let inst = Arc::new(select_instance(n, table_composition(n).unwrap()).unwrap());
        for v in variants {
            let obj = Objective::new(&exact_spec(&inst, Variant::Qaoa(v), 2)).unwrap();
            for _ in 0..100 {
                let x = random_params(obj.num_params(), &mut rng);
                worst = worst.max(obj.state(&x).unwrap().leakage(inst.n_h));
            }
        }
    }
    Outcome::new(worst < 1e-10, format!("max leakage {worst:.2e} over 100 trials per variant and n <= 12"))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut over = Vec::new();
    // Weights 0 and n are single basis states and need no circuit.
    for n in 2..=12 {
        for k in 1..n {
            let c = dicke_prep_circuit(n, k).unwrap();
            let s = run_circuit(&c, &Statevector::basis(n, (1 << k) - 1)).unwrap();
            let amp = Complex64::new(1.0 / binom(n, k).sqrt(), 0.0);
            let amps =
                (0..1usize << n).map(|b| if b.count_ones() as usize == k { amp } else { Complex64::new(0.0, 0.0) });
            let target = Statevector::from_amplitudes(amps.collect());
            worst = worst.max(1.0 - s.fidelity(&target));
            if c.gate_count() > DICKE_GATE_CONSTANT * k * n {
                over.push((n, k, c.gate_count()));
            }
        }
    }
    let detail = format!("max infidelity {worst:.2e}; gates <= {DICKE_GATE_CONSTANT}*k*n violated at {over:?}");
    Outcome::new(worst <= 1e-10 && over.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let bad: Vec<usize> = INSTANCE_TABLE
        .iter()
        .map(|r| r.0)
        .filter(|&n| build_hea(n, 1).unwrap().num_params != 4 * n || build_hea(n, 2).unwrap().num_params != 6 * n)
        .collect();
    Outcome::new(bad.is_empty(), format!("4n / 6n parameters for all {} table sizes {bad:?}", INSTANCE_TABLE.len()))
}

fn criterion_6() -> Outcome {
    let inst = select_instance(16, table_composition(16).unwrap()).unwrap();
    let m = build_qubo(&inst.contact_map, inst.n_h, DEFAULT_LAMBDA).unwrap();
    let d = |v: QaoaVariant| {
        let pc = build_qaoa(&m, v, 15).unwrap();
        depth(&bind(&pc, &vec![0.1; pc.num_params]).unwrap())
    };
    let (fc, ring, x) = (d(QaoaVariant::XYFC_DI), d(QaoaVariant::XYRING_DI), d(QaoaVariant::X_UI));
    let pc = build_hea(16, 1).unwrap();
    let hea = depth(&bind(&pc, &vec![0.1; pc.num_params]).unwrap());
    let pass = fc > ring && ring > x && fc > 2000 && 10 * hea <= x;
    Outcome::new(pass, format!("n=16 p=15: xyfc-di {fc} > xyring-di {ring} > x-ui {x}; hea-1 {hea}"))
}

/// Best noiseless parameters at n = 10, kept for the noise criterion.
struct Solved {
    inst: Arc<Instance>,
    qaoa: Vec<f64>,
    hea: Vec<f64>,
}

fn criterion_7() -> (Outcome, Solved) {
    let chain: Vec<Arc<Instance>> =
        SOLVE_NS.iter().map(|&n| Arc::new(select_instance(n, table_composition(n).unwrap()).unwrap())).collect();
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    let mut qaoa = Vec::new();
    let one = CampaignConfig { runs: 1, ..CampaignConfig::default() };
    for inst in &chain {
        let tpl = exact_spec(inst, Variant::Qaoa(QaoaVariant::XYFC_DI), 15);
        let c = run_campaign(std::slice::from_ref(inst), &tpl, &one).unwrap().remove(0);
        let target = 10.0 / binom(inst.n(), inst.n_h);
        lines.push(format!("III n={} {:.4} (need {:.4})", inst.n(), c.mean, target));
        if c.mean < target {
            failed.push(inst.n());
        }
        qaoa = c.runs[0].result().params.clone();
    }
    let tpl = exact_spec(&chain[0], Variant::Hea(1), 1);
    let campaigns = run_campaign(&chain, &tpl, &CampaignConfig::default()).unwrap();
    for c in &campaigns {
        let target = 10.0 / binom(c.n, c.n_h);
        lines.push(format!("hea-1 n={} {:.4}+-{:.4} (need {:.4})", c.n, c.mean, c.standard_error, target));
        if c.mean < target {
            failed.push(c.n);
        }
    }
    let last = campaigns.last().unwrap();
    let hea = last.runs[last.best].result().params.clone();
    failed.dedup();
    let mut o = Outcome::new(failed.is_empty(), lines.join("; "));
    if failed.iter().all(|&n| 10.0 / binom(n, table_composition(n).unwrap()) > 1.0) {
        o.unattainable = Some(format!("n in {failed:?} needs a success probability above 1"));
    }
    (o, Solved { inst: Arc::clone(chain.last().unwrap()), qaoa, hea })
}

fn criterion_8(s: &Solved) -> Outcome {
    const SHOTS: u64 = 100_000;
    let p2s = [0.0, 1e-3, 3e-3, 1e-2];
    let base = NoiseModel::default();
    let rates = |variant: Variant, p: usize, params: &[f64]| -> Vec<f64> {
        let obj = Objective::new(&exact_spec(&s.inst, variant, p)).unwrap();
        let sol = obj.solution_index().unwrap();
        p2s.iter()
            .map(|&p2| {
                let mode = EvalMode::Noisy { model: NoiseModel { p2, ..base }, shots: SHOTS };
                let c = obj.with_mode(mode, 8).unwrap().counts(params, SHOTS, 8).unwrap();
                c.get(&sol).copied().unwrap_or(0) as f64 / SHOTS as f64
            })
            .collect()
    };
    let q = rates(Variant::Qaoa(QaoaVariant::XYFC_DI), 15, &s.qaoa);
    let h = rates(Variant::Hea(1), 1, &s.hea);
    let sigma = |a: f64, b: f64| ((a * (1.0 - a) + b * (1.0 - b)) / SHOTS as f64).sqrt();
    let monotone = |r: &[f64]| r.windows(2).all(|w| w[1] <= w[0] + 5.0 * sigma(w[0], w[1]));
    let factor = |r: &[f64]| r[0] / r[2].max(1.0 / SHOTS as f64);
    let (fq, fh) = (factor(&q), factor(&h));
    let pass = monotone(&q) && monotone(&h) && fq > fh;
    let fmt = |r: &[f64]| r.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    Outcome::new(
        pass,
        format!("p2={p2s:?}: III [{}] hea-1 [{}]; factor at 3e-3 III {fq:.2} > hea-1 {fh:.2}", fmt(&q), fmt(&h)),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for p in 1..=14 {
        let (a, b, c, d): (f64, f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen(), rng.gen());
        // Constant halves stay constant; linear halves resample the same
        // line on p + 1 evenly spaced points over positions [1, p].
        let constant: Vec<f64> = std::iter::repeat_n(a, p).chain(std::iter::repeat_n(c, p)).collect();
        let grown = interp_grow(&constant).unwrap();
        let want: Vec<f64> = std::iter::repeat_n(a, p + 1).chain(std::iter::repeat_n(c, p + 1)).collect();
        worst = grown.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);

        let line = |a: f64, b: f64, t: f64| a + b * t;
        let linear: Vec<f64> =
            (1..=p).map(|i| line(a, b, i as f64)).chain((1..=p).map(|i| line(c, d, i as f64))).collect();
        let grown = interp_grow(&linear).unwrap();
        let t = |i: usize| 1.0 + (i - 1) as f64 * (p - 1) as f64 / p as f64;
        let want: Vec<f64> =
            (1..=p + 1).map(|i| line(a, b, t(i))).chain((1..=p + 1).map(|i| line(c, d, t(i)))).collect();
        worst = grown.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
    }
    Outcome::new(worst <= 1e-12, format!("max deviation {worst:.2e} for p = 1..14"))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = "[instances]\nchain = [4, 8]\n[ansatz]\nvariant = \"qaoa-xyring-di\"\np = 2\n\
                  [mode]\nkind = \"sampled\"\nshots = 500\n[optimizer]\nmax_evals = 150\n[campaign]\nruns = 3\nseed = 11\n";
    std::fs::write(dir.path().join("run.toml"), config).unwrap();
    let run = |out: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_hpdesign"))
            .args(["run", "run.toml", "--out", out])
            .current_dir(dir.path())
            .output()
            .unwrap()
            .status;
        assert!(status.success());
    };
    run("a");
    run("b");
    let read = |out: &str, f: &str| std::fs::read(dir.path().join(out).join(f)).unwrap();
    let same: HashSet<&str> =
        ["runs.csv", "campaigns.csv"].into_iter().filter(|f| read("a", f) == read("b", f)).collect();
    let rows = String::from_utf8(read("a", "runs.csv")).unwrap().lines().count() - 2;
    Outcome::new(same.len() == 2 && rows == 6, format!("two sampled runs, {rows} rows, identical files {same:?}"))
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    println!("acceptance report ({})", dir.display());
    let check = |id: &str, title: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        report(id, title, t, &f())
    };
    let mut ok = check("1", "instance reproduction", &criterion_1);
    ok &= check("2", "fold verification", &criterion_2);
    ok &= check("3", "constraint conservation", &criterion_3);
    ok &= check("4", "Dicke preparation", &criterion_4);
    ok &= check("5", "HEA parameter counts", &criterion_5);
    ok &= check("6", "depth ordering", &criterion_6);
    let t = Instant::now();
    let (o7, solved) = criterion_7();
    ok &= report("7", "noiseless solve quality", t, &o7);
    ok &= check("8", "noise degradation", &|| criterion_8(&solved));
    ok &= check("9", "INTERP self-consistency", &criterion_9);
    ok &= check("10", "determinism", &criterion_10);
    if !ok {
        std::process::exit(1);
    }
}
