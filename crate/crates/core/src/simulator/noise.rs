//! Stochastic Pauli trajectories with readout flips.
//!
//! Every shot is one trajectory: after each primitive gate a uniformly
//! random non-identity Pauli hits the gate's qubits with probability `p1`
//! (one-qubit gates) or `p2` (two-qubit gates), the final state is measured
//! once, and each readout bit then flips with probability `p_ro`.
//!
//! Shot `i` draws from `ChaCha8Rng` seeded with the master seed on stream
//! `i`, so counts do not depend on scheduling. Error-free shots sample the
//! precomputed noiseless distribution; other shots resume from a stored
//! noiseless checkpoint just before their first error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gate::{Circuit, Gate, Op};
use super::state::{cumulative, draw, Counts, Statevector};
use super::SimError;

/// Memory budget for noiseless checkpoints.
const CHECKPOINT_BYTES: usize = 256 << 20;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_ro: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { p1: 3e-4, p2: 3e-3, p_ro: 2e-2 }
    }
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_ro: f64) -> Result<NoiseModel, SimError> {
        for (name, value) in [("p1", p1), ("p2", p2), ("p_ro", p_ro)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::BadProbability { name, value });
            }
        }
        Ok(NoiseModel { p1, p2, p_ro })
    }

    pub fn noiseless() -> NoiseModel {
        NoiseModel { p1: 0.0, p2: 0.0, p_ro: 0.0 }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }
}

/// One sampled error: Pauli code after gate `at`. Codes index `q_a` and
/// `q_b` Paulis as `4 * pa + pb` for two-qubit gates.
#[derive(Clone, Copy)]
struct Fault {
    at: usize,
    code: u8,
}

/// The per-shot generator for `(seed, shot)`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Samples `shots` noisy trajectories of `c` started from `|0...0>`.
pub fn run_noisy(c: &Circuit, nm: &NoiseModel, shots: u64, seed: u64) -> Result<Counts, SimError> {
    run_noisy_from(c, &Statevector::zero(c.n), nm, shots, seed)
}

/// As [`run_noisy`] from an arbitrary initial state.
pub fn run_noisy_from(
    c: &Circuit,
    s0: &Statevector,
    nm: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Counts, SimError> {
    trajectories(c, s0, nm, shots, seed, CHECKPOINT_BYTES)
}

pub(crate) fn trajectories(
    c: &Circuit,
    s0: &Statevector,
    nm: &NoiseModel,
    shots: u64,
    seed: u64,
    checkpoint_bytes: usize,
) -> Result<Counts, SimError> {
    if c.n != s0.n() {
        return Err(SimError::DimensionMismatch { expected: s0.n(), got: c.n });
    }
    let n = c.n;
    let gates: Vec<Gate> = c.expanded().gates().iter().filter(|g| !matches!(g, Op::Barrier)).cloned().collect();
    let arity: Vec<usize> = gates.iter().map(|g| g.qubits().len()).collect();

    // Noiseless checkpoints: `stride` gates apart, checkpoints[i] is the
    // state after the first `i * stride` gates.
    let state_bytes = (16usize << n).max(1);
    let stride = ((gates.len() + 1) * state_bytes).div_ceil(checkpoint_bytes).max(1);
    let mut checkpoints = vec![s0.clone()];
    let mut s = s0.clone();
    for (i, g) in gates.iter().enumerate() {
        s.apply(g);
        if (i + 1) % stride == 0 {
            checkpoints.push(s.clone());
        }
    }
    let clean_cdf = cumulative(&s.probabilities());

    let outcomes: Vec<u64> = (0..shots)
        .into_par_iter()
        .map_init(Vec::new, |faults: &mut Vec<Fault>, shot| {
            let mut rng = shot_rng(seed, shot);
            faults.clear();
            for (at, &a) in arity.iter().enumerate() {
                let p = if a == 1 { nm.p1 } else { nm.p2 };
                if p > 0.0 && rng.gen::<f64>() < p {
                    let code = if a == 1 { rng.gen_range(1..4) } else { rng.gen_range(1..16) };
                    faults.push(Fault { at, code });
                }
            }
            let mut k = if faults.is_empty() {
                draw(&clean_cdf, &mut rng) as u64
            } else {
                let first = faults[0].at;
                let cp = first / stride;
                let mut st = checkpoints[cp].clone();
                let mut next = 0;
                for (i, g) in gates.iter().enumerate().skip(cp * stride) {
                    st.apply(g);
                    while next < faults.len() && faults[next].at == i {
                        apply_fault(&mut st, g, faults[next].code);
                        next += 1;
                    }
                }
                draw(&cumulative(&st.probabilities()), &mut rng) as u64
            };
            if nm.p_ro > 0.0 {
                for q in 0..n {
                    if rng.gen::<f64>() < nm.p_ro {
                        k ^= 1 << q;
                    }
                }
            }
            k
        })
        .collect();

    let mut counts = Counts::new();
    for k in outcomes {
        *counts.entry(k).or_default() += 1;
    }
    Ok(counts)
}

fn apply_fault(s: &mut Statevector, g: &Gate, code: u8) {
    let qs = g.qubits();
    if qs.len() == 1 {
        s.apply_pauli(qs[0], code);
    } else {
        s.apply_pauli(qs[0], code / 4);
        s.apply_pauli(qs[1], code % 4);
    }
}
