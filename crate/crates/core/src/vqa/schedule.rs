use std::f64::consts::PI;

use rand::Rng;

use super::VqaError;
use crate::ansatz::AnsatzError;

/// Uniform angles in `[0, 2 pi)`.
pub fn random_params<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    (0..k).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
}

/// The p = 1 starting point `(beta, gamma) = (pi, pi)`.
pub fn qaoa_start() -> Vec<f64> {
    vec![PI, PI]
}

/// Grows a depth-`p` schedule `(beta_1..beta_p, gamma_1..gamma_p)` to depth
/// `p + 1` by linear interpolation of each half:
///
/// `x'_i = (i - 1)/p * x_{i-1} + (p - i + 1)/p * x_i` for `i = 1..p+1`,
/// with `x_0 = x_{p+1} = 0`. Endpoints are kept and linear schedules stay
/// on their line.
pub fn interp_grow(params: &[f64]) -> Result<Vec<f64>, VqaError> {
    if params.is_empty() || params.len() % 2 == 1 {
        return Err(
            AnsatzError::ArityMismatch { expected: params.len().max(1).div_ceil(2) * 2, got: params.len() }.into()
        );
    }
    let p = params.len() / 2;
    let grow = |x: &[f64]| -> Vec<f64> {
        let at = |i: usize| if i == 0 || i > p { 0.0 } else { x[i - 1] };
        (1..=p + 1).map(|i| ((i - 1) as f64 / p as f64) * at(i - 1) + ((p + 1 - i) as f64 / p as f64) * at(i)).collect()
    };
    let mut out = grow(&params[..p]);
    out.extend(grow(&params[p..]));
    Ok(out)
}

/// Initial HEA parameters for `n_large` qubits from optimized ones for
/// `n_small` qubits, same layer count.
///
/// Every `2n` block keeps the `(RY, RZ)` angles of qubits `0..n_small`
/// from the matching small block; the angles of the added qubits are
/// drawn uniformly from `[0, 2 pi)`, block by block.
pub fn donate<R: Rng + ?Sized>(
    params_small: &[f64],
    n_small: usize,
    n_large: usize,
    rng: &mut R,
) -> Result<Vec<f64>, VqaError> {
    if n_small == 0 || n_small >= n_large {
        return Err(VqaError::BadDonation { n_small, n_large });
    }
    let block_small = 2 * n_small;
    if !params_small.len().is_multiple_of(block_small) || params_small.len() < 2 * block_small {
        let expected = (params_small.len() / block_small).max(2) * block_small;
        return Err(AnsatzError::ArityMismatch { expected, got: params_small.len() }.into());
    }
    let mut out = Vec::with_capacity(params_small.len() / n_small * n_large);
    for block in params_small.chunks(block_small) {
        out.extend_from_slice(block);
        out.extend(random_params(2 * (n_large - n_small), rng));
    }
    Ok(out)
}
