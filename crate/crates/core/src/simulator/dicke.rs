//! Deterministic Dicke-state preparation by split-and-cyclic-shift blocks.
//!
//! The construction is usually written for qubits labelled `1..=n` with
//! the input ones on the last `k` qubits. Here label `t` is qubit `n - t`,
//! so the input is the basis state with qubits `0..k` set.

use super::gate::{Circuit, Op};
use super::SimError;

/// Bound on emitted gates per unit of `n * n_h`.
pub const DICKE_GATE_CONSTANT: usize = 8;

/// Circuit mapping `|1^k 0^(n-k)>` (qubits `0..k` set) to the weight-`k`
/// Dicke state. Emits at most `DICKE_GATE_CONSTANT * k * n` gates.
pub fn dicke_prep_circuit(n: usize, k: usize) -> Result<Circuit, SimError> {
    if k == 0 || k >= n {
        return Err(SimError::BadComposition { n, n_h: k });
    }
    let q = |label: usize| n - label;
    let mut c = Circuit::new(n);
    for l in (2..=n).rev() {
        // Two-qubit block on labels (l-1, l).
        let theta = 2.0 * (1.0 / l as f64).sqrt().acos();
        c.push(Op::Cnot(q(l - 1), q(l)));
        c.push(Op::Cry(q(l), q(l - 1), theta));
        c.push(Op::Cnot(q(l - 1), q(l)));
        // Three-qubit blocks on labels (l-j, l-j+1, l).
        for j in 2..=k.min(l - 1) {
            let theta = 2.0 * (j as f64 / l as f64).sqrt().acos();
            c.push(Op::Cnot(q(l - j), q(l)));
            push_ccry(&mut c, q(l), q(l - j + 1), q(l - j), theta);
            c.push(Op::Cnot(q(l - j), q(l)));
        }
    }
    Ok(c)
}

/// Doubly controlled `Ry(theta)` from three `Cry` and two `Cnot` gates.
fn push_ccry(c: &mut Circuit, c1: usize, c2: usize, t: usize, theta: f64) {
    c.push(Op::Cry(c2, t, theta / 2.0));
    c.push(Op::Cnot(c1, c2));
    c.push(Op::Cry(c2, t, -theta / 2.0));
    c.push(Op::Cnot(c1, c2));
    c.push(Op::Cry(c1, t, theta / 2.0));
}
