//! Dense statevector simulation with a diagonal fast path for cost layers,
//! deterministic Dicke-state preparation, sampling and Pauli-trajectory
//! noise.
//!
//! Basis index bit `q` is qubit `q`.

mod dicke;
mod gate;
mod noise;
mod state;

pub use dicke::{dicke_prep_circuit, DICKE_GATE_CONSTANT};
pub use gate::{Angle, Circuit, Gate, Op, PhaseBlock};
pub use noise::{run_noisy, run_noisy_from, shot_rng, NoiseModel};
pub use state::{
    expectation_diagonal, init_state, run_circuit, sample, sample_probabilities, Counts, InitSpec, Statevector,
    MAX_QUBITS,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gate {gate} on qubits {qubits:?} is invalid for {n} qubits")]
    BadQubits { gate: &'static str, qubits: Vec<usize>, n: usize },
    #[error("composition n_h = {n_h} is invalid for {n} qubits")]
    BadComposition { n: usize, n_h: usize },
    #[error("{n} qubits exceed the simulator bound {bound}")]
    TooManyQubits { n: usize, bound: usize },
    #[error("probability {name} = {value} is outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
}
