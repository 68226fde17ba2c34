use std::sync::Arc;

use super::{AnsatzError, InitKind, Mixer, ParameterizedCircuit, QaoaVariant, Variant};
use crate::qubo::{diagonal, DiagonalCost, QuboModel};
use crate::simulator::{dicke_prep_circuit, Angle, Op, PhaseBlock};

/// Mixer qubit pairs in gate order.
///
/// Ring: `(i, i+1)` for even `i`, then odd `i`, then the wrap pair
/// `(n-1, 0)` when `n > 2`. Fully connected: all `i < j` lexicographically.
pub fn mixer_pairs(mixer: Mixer, n: usize) -> Vec<(usize, usize)> {
    match mixer {
        Mixer::X => Vec::new(),
        Mixer::XyRing => {
            let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect();
            pairs.extend((1..n.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)));
            if n > 2 {
                pairs.push((n - 1, 0));
            }
            pairs
        }
        Mixer::XyFullyConnected => (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect(),
    }
}

/// QAOA circuit with `p` layers of cost then mixer.
pub fn build_qaoa(m: &QuboModel, v: QaoaVariant, p: usize) -> Result<ParameterizedCircuit, AnsatzError> {
    build_qaoa_with_cost(m, diagonal(m).shared(), v, p)
}

/// As [`build_qaoa`] with a precomputed diagonal of `m`.
pub fn build_qaoa_with_cost(
    m: &QuboModel,
    cost: Arc<DiagonalCost>,
    v: QaoaVariant,
    p: usize,
) -> Result<ParameterizedCircuit, AnsatzError> {
    if p == 0 {
        return Err(AnsatzError::BadLayers(p));
    }
    let n = m.n;
    let n_h = m.n_h;
    let mut ops = Vec::new();
    match v.init() {
        InitKind::Uniform => ops.extend((0..n).map(Op::H)),
        InitKind::Basis => ops.extend((0..n_h).map(Op::X)),
        InitKind::Dicke => {
            ops.extend((0..n_h).map(Op::X));
            // Weights 0 and n are single basis states already.
            if let Ok(prep) = dicke_prep_circuit(n, n_h) {
                ops.extend(prep.gates().iter().map(|g| g.map_angle(|&t| Angle::Fixed(t))));
            }
        }
    }
    let prep_len = ops.len();

    let block = Arc::new(PhaseBlock::from_qubo(m, cost));
    let pairs = mixer_pairs(v.mixer(), n);
    for k in 0..p {
        let beta = Angle::Param { index: k, scale: 2.0 };
        ops.push(Op::Phase(Arc::clone(&block), Angle::param(p + k)));
        match v.mixer() {
            Mixer::X => ops.extend((0..n).map(|q| Op::Rx(q, beta))),
            _ => ops.extend(pairs.iter().map(|&(a, b)| Op::RxxYy(a, b, beta))),
        }
    }
    Ok(ParameterizedCircuit {
        n,
        ops,
        num_params: 2 * p,
        variant: Variant::Qaoa(v),
        layers: p,
        init: v.init_spec(n_h),
        prep_len,
    })
}
