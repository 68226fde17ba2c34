//! Untrotterized XY mixing inside one Hamming-weight sector, for validating
//! the gate-level mixers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{mixer_pairs, AnsatzError, Mixer, QaoaVariant};
use crate::qubo::{diagonal, QuboModel};
use crate::simulator::{init_state, PhaseBlock, Statevector};

/// `exp(-i beta M)` on the weight-`n_h` sector, `M = sum (XX + YY)` over
/// the mixer pairs, by eigendecomposition of the sector matrix.
pub struct SectorMixer {
    n: usize,
    basis: Vec<usize>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SectorMixer {
    pub fn new(n: usize, n_h: usize, pairs: &[(usize, usize)]) -> SectorMixer {
        let basis: Vec<usize> = (0..1usize << n).filter(|k| k.count_ones() as usize == n_h).collect();
        let dim = basis.len();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for (col, &k) in basis.iter().enumerate() {
            for &(a, b) in pairs {
                // (XX + YY) swaps 01 and 10 on (a, b) with weight 2.
                if ((k >> a) ^ (k >> b)) & 1 == 1 {
                    let j = k ^ (1 << a) ^ (1 << b);
                    let row = basis.binary_search(&j).expect("swap stays in sector");
                    h[(row, col)] += 2.0;
                }
            }
        }
        let eig = h.symmetric_eigen();
        SectorMixer { n, basis, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors }
    }

    pub fn apply(&self, s: &mut Statevector, beta: f64) {
        assert_eq!(s.n(), self.n);
        let amps = s.amplitudes();
        let v = DVector::from_iterator(self.basis.len(), self.basis.iter().map(|&k| amps[k]));
        let vc = self.eigenvectors.map(|x| C64::new(x, 0.0));
        let mut coeffs = vc.transpose() * v;
        for (c, &l) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= C64::from_polar(1.0, -beta * l);
        }
        let out = vc * coeffs;
        let mut full = vec![C64::new(0.0, 0.0); 1 << self.n];
        for (&k, a) in self.basis.iter().zip(out.iter()) {
            full[k] = *a;
        }
        *s = Statevector::from_amplitudes(full);
    }
}

/// Final QAOA state with exact sector mixers in place of Trotter steps.
pub fn simulate_exact_mixer(m: &QuboModel, v: QaoaVariant, params: &[f64]) -> Result<Statevector, AnsatzError> {
    if v.mixer() == Mixer::X {
        return Err(AnsatzError::BadVariant("the X mixer is exact already".into()));
    }
    if params.is_empty() || params.len() % 2 == 1 {
        return Err(AnsatzError::ArityMismatch { expected: 2 * (params.len() / 2).max(1), got: params.len() });
    }
    let p = params.len() / 2;
    let mixer = SectorMixer::new(m.n, m.n_h, &mixer_pairs(v.mixer(), m.n));
    let block = PhaseBlock::from_qubo(m, diagonal(m).shared());
    let mut s = init_state(m.n, v.init_spec(m.n_h)).expect("composition valid for a QUBO");
    for k in 0..p {
        s.apply_phase_block(&block, params[p + k]);
        mixer.apply(&mut s, params[k]);
    }
    Ok(s)
}
