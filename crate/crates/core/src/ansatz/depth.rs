//! Depth in the basis {CNOT, CZ, single-qubit gates} with all-to-all
//! connectivity. Gates are rewritten by fixed decompositions and layered
//! as soon as possible; no single-qubit gates are merged and barriers are
//! ignored.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::simulator::{Circuit, Gate, Op};

/// Basis gates implementing `g`:
///
/// - `Rzz(t)`: CNOT, RZ(t), CNOT.
/// - `RxxYy(t)`: RX(pi/2) on both, CNOT(a -> b), RX_a(t) and RZ_b(t),
///   CNOT(a -> b), RX(-pi/2) on both. The outer rotations map `YY` to
///   `ZZ`; the CNOTs then map `XX + ZZ` to `X_a + Z_b`.
/// - `Cry(t)`: RY_t(t/2), CNOT, RY_t(-t/2), CNOT.
pub fn basis_decomposition(g: &Gate) -> Vec<Gate> {
    match *g {
        Op::Rzz(a, b, t) => vec![Op::Cnot(a, b), Op::Rz(b, t), Op::Cnot(a, b)],
        Op::RxxYy(a, b, t) => vec![
            Op::Rx(a, FRAC_PI_2),
            Op::Rx(b, FRAC_PI_2),
            Op::Cnot(a, b),
            Op::Rx(a, t),
            Op::Rz(b, t),
            Op::Cnot(a, b),
            Op::Rx(a, -FRAC_PI_2),
            Op::Rx(b, -FRAC_PI_2),
        ],
        Op::Cry(c, tg, t) => vec![Op::Ry(tg, t / 2.0), Op::Cnot(c, tg), Op::Ry(tg, -t / 2.0), Op::Cnot(c, tg)],
        Op::Barrier => vec![],
        Op::Phase(..) => g.primitives().iter().flat_map(basis_decomposition).collect(),
        _ => vec![g.clone()],
    }
}

/// Longest path through the basis-gate circuit.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.n];
    let mut max = 0;
    for g in c.gates() {
        for b in basis_decomposition(g) {
            let qs = b.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &qs {
                level[q] = l;
            }
            max = max.max(l);
        }
    }
    max
}

/// Basis-gate counts by name.
pub fn gate_census(c: &Circuit) -> BTreeMap<&'static str, usize> {
    let mut counts = BTreeMap::new();
    for g in c.gates() {
        for b in basis_decomposition(g) {
            *counts.entry(b.name()).or_default() += 1;
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthReport {
    pub n: usize,
    pub depth: usize,
    pub two_qubit_gates: usize,
    pub counts: BTreeMap<&'static str, usize>,
}

impl DepthReport {
    pub fn of(c: &Circuit) -> DepthReport {
        let counts = gate_census(c);
        let two_qubit_gates = counts.get("cx").copied().unwrap_or(0) + counts.get("cz").copied().unwrap_or(0);
        DepthReport { n: c.n, depth: depth(c), two_qubit_gates, counts }
    }
}
