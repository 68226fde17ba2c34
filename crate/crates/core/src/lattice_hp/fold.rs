//! Fold verification through the Boltzmann probability of the target
//! conformation, summed exactly over all conformations.

use std::collections::BTreeMap;

use super::enumerate::for_each_canonical_walk;
use super::structure::{hp_energy, Sequence, Structure};
use super::{LatticeError, FOLD_BOUND};

#[derive(Clone, Debug)]
pub struct FoldReport {
    pub target: Structure,
    pub target_energy: i32,
    pub ground_energy: i32,
    /// Canonical ground-state structures of the sequence.
    pub ground_states: Vec<Structure>,
    pub unique_ground_state_is_target: bool,
    /// Conformation count per energy level, every lattice orientation counted.
    pub density_of_states: BTreeMap<i32, u64>,
    pub beta: f64,
    /// Probability of the single target conformation at `beta`.
    pub probability: f64,
}

impl FoldReport {
    /// Total number of conformations (no symmetry reduction).
    pub fn conformation_count(&self) -> u64 {
        self.density_of_states.values().sum()
    }

    /// Probability of the target conformation at inverse temperature `beta`.
    pub fn probability_at(&self, beta: f64) -> f64 {
        let z = self.partition_shifted(beta);
        (-beta * (self.target_energy - self.ground_energy) as f64).exp() / z
    }

    /// Probability mass of each energy level at `beta`.
    pub fn level_probabilities(&self, beta: f64) -> BTreeMap<i32, f64> {
        let z = self.partition_shifted(beta);
        self.density_of_states
            .iter()
            .map(|(&e, &g)| (e, g as f64 * (-beta * (e - self.ground_energy) as f64).exp() / z))
            .collect()
    }

    // Energies are shifted by the ground energy to keep exponents <= 0.
    fn partition_shifted(&self, beta: f64) -> f64 {
        self.density_of_states.iter().map(|(&e, &g)| g as f64 * (-beta * (e - self.ground_energy) as f64).exp()).sum()
    }
}

/// Exact fold check of `seq` against `target` at inverse temperature `beta`.
pub fn fold_verify(seq: &Sequence, target: &Structure, beta: f64) -> Result<FoldReport, LatticeError> {
    let n = target.len();
    if n > FOLD_BOUND {
        return Err(LatticeError::BoundExceeded { n, bound: FOLD_BOUND });
    }
    if seq.len() != n {
        return Err(LatticeError::LengthMismatch { expected: n, got: seq.len() });
    }
    let target_energy = hp_energy(&target.contact_map(), seq)?;
    let s = seq.mask() as u32;

    let mut dos: BTreeMap<i32, u64> = BTreeMap::new();
    let mut ground_energy = i32::MAX;
    let mut ground_states: Vec<Structure> = Vec::new();
    for_each_canonical_walk(n, |moves, masks| {
        let e = -(masks.iter().filter(|&&m| s & m == m).count() as i32);
        let straight = moves.iter().all(|&m| m == super::Move::R);
        *dos.entry(e).or_default() += if straight { 4 } else { 8 };
        if e < ground_energy {
            ground_energy = e;
            ground_states.clear();
        }
        if e == ground_energy {
            ground_states.push(Structure::from_canonical_unchecked(moves.to_vec()));
        }
    });

    let unique_ground_state_is_target = ground_states.len() == 1 && ground_states[0] == *target;
    let mut report = FoldReport {
        target: target.clone(),
        target_energy,
        ground_energy,
        ground_states,
        unique_ground_state_is_target,
        density_of_states: dos,
        beta,
        probability: 0.0,
    };
    report.probability = report.probability_at(beta);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_hp::parse_structure;

    #[test]
    fn all_p_is_uniform() {
        let target = parse_structure("RRUL").unwrap();
        let r = fold_verify(&Sequence::all_p(5), &target, 1.0).unwrap();
        assert_eq!(r.conformation_count(), 100);
        assert!((r.probability - 0.01).abs() < 1e-15);
        assert!(!r.unique_ground_state_is_target);
    }

    #[test]
    fn u_shape_folds() {
        let target = parse_structure("RUL").unwrap();
        let r = fold_verify(&"1001".parse().unwrap(), &target, 2.0).unwrap();
        assert!(r.unique_ground_state_is_target);
        assert_eq!(r.ground_energy, -1);
        // 8 U-shapes at E = -1 among 36 walks.
        let e2 = 2f64.exp();
        let expected = e2 / (8.0 * e2 + 28.0);
        assert!((r.probability - expected).abs() < 1e-14);
        let total: f64 = r.level_probabilities(2.0).values().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatch() {
        let target = parse_structure("RUL").unwrap();
        assert!(fold_verify(&"101".parse().unwrap(), &target, 1.0).is_err());
    }
}
