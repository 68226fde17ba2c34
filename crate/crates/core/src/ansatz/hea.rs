use super::{AnsatzError, ParameterizedCircuit, Variant};
use crate::simulator::{Angle, InitSpec, Op};

/// Hardware-efficient circuit: an RY/RZ block, then `layers` rounds of
/// (reverse-linear CNOT chain, RY/RZ block). The chain runs
/// `CNOT(n-2 -> n-1), CNOT(n-3 -> n-2), ..., CNOT(0 -> 1)`.
pub fn build_hea(n: usize, layers: usize) -> Result<ParameterizedCircuit, AnsatzError> {
    if !(1..=2).contains(&layers) {
        return Err(AnsatzError::BadLayers(layers));
    }
    if n < 2 {
        return Err(AnsatzError::BadVariant(format!("hea-{layers} needs at least 2 qubits")));
    }
    let mut ops = Vec::new();
    let mut next = 0;
    let mut rotations = |ops: &mut Vec<Op<Angle>>| {
        for q in 0..n {
            ops.push(Op::Ry(q, Angle::param(next + 2 * q)));
            ops.push(Op::Rz(q, Angle::param(next + 2 * q + 1)));
        }
        next += 2 * n;
    };
    rotations(&mut ops);
    for _ in 0..layers {
        ops.extend((0..n - 1).rev().map(|i| Op::Cnot(i, i + 1)));
        rotations(&mut ops);
    }
    Ok(ParameterizedCircuit {
        n,
        ops,
        num_params: 2 * n * (layers + 1),
        variant: Variant::Hea(layers),
        layers,
        init: InitSpec::Basis(0),
        prep_len: 0,
    })
}
