//! Penalized QUBO for fixed-composition sequence design.
//!
//! For contacts `w_ij` and target composition `N_H` the objective is
//!
//! ```text
//! E(s) = -sum_{i<j} w_ij s_i s_j + lambda * (sum_i s_i - N_H)^2
//! ```
//!
//! expanded into a constant, linear and upper-triangular quadratic part.
//! Bit `i` of a basis index is bead `i`.

use std::sync::Arc;

use crate::lattice_hp::{for_each_weight, hh_with_masks, ContactMap, Sequence};

pub const DEFAULT_LAMBDA: f64 = 1.1;

/// Largest qubit count whose diagonal cost is materialized as a table.
pub const MATERIALIZE_BOUND: usize = 24;

/// Largest qubit count accepted by the brute-force oracles.
pub const BRUTE_FORCE_BOUND: usize = 28;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuboError {
    #[error("penalty weight must be positive, got {0}")]
    BadLambda(f64),
    #[error("composition n_h = {n_h} is outside [0, {n}]")]
    BadComposition { n: usize, n_h: usize },
    #[error("bitstring length {got} does not match model size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} variables exceed the brute-force bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuboModel {
    pub n: usize,
    pub n_h: usize,
    pub lambda: f64,
    pub constant: f64,
    pub linear: Vec<f64>,
    /// Row-major `n x n`; only entries with `i < j` are meaningful.
    quadratic: Vec<f64>,
    pub contact_map: ContactMap,
}

/// Expands the penalized objective for `cm` at composition `n_h`.
pub fn build_qubo(cm: &ContactMap, n_h: usize, lambda: f64) -> Result<QuboModel, QuboError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(QuboError::BadLambda(lambda));
    }
    if n_h > cm.n() {
        return Err(QuboError::BadComposition { n: cm.n(), n_h });
    }
    Ok(QuboModel::expand(cm, n_h, lambda))
}

impl QuboModel {
    /// The bare contact energy `-N_HH` with no composition penalty. Its
    /// minimizer is the all-H homopolymer.
    pub fn contacts_only(cm: &ContactMap) -> QuboModel {
        QuboModel::expand(cm, 0, 0.0)
    }

    fn expand(cm: &ContactMap, n_h: usize, lambda: f64) -> QuboModel {
        let n = cm.n();
        let nh = n_h as f64;
        let mut quadratic = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                quadratic[i * n + j] = 2.0 * lambda;
            }
        }
        for &(i, j) in cm.contacts() {
            quadratic[i * n + j] -= 1.0;
        }
        QuboModel {
            n,
            n_h,
            lambda,
            constant: lambda * nh * nh,
            linear: vec![lambda * (1.0 - 2.0 * nh); n],
            quadratic,
            contact_map: cm.clone(),
        }
    }

    /// Coefficient of `s_i s_j` for `i < j`.
    pub fn quadratic(&self, i: usize, j: usize) -> f64 {
        assert!(i < j && j < self.n, "quadratic({i}, {j}) needs i < j < {}", self.n);
        self.quadratic[i * self.n + j]
    }

    /// All `(i, j, q_ij)` with `i < j` and `q_ij != 0`, lexicographic.
    pub fn quadratic_terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let q = self.quadratic[i * self.n + j];
                if q != 0.0 {
                    out.push((i, j, q));
                }
            }
        }
        out
    }

    /// Coefficient-form energy of basis index `k`.
    pub fn energy_index(&self, k: u64) -> f64 {
        let mut e = self.constant;
        let mut rest = k;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            e += self.linear[i];
            let mut above = rest;
            while above != 0 {
                let j = above.trailing_zeros() as usize;
                above &= above - 1;
                e += self.quadratic[i * self.n + j];
            }
        }
        e
    }

    /// The objective evaluated term by term from contacts and weight,
    /// without the coefficient expansion.
    pub fn direct_energy_index(&self, k: u64) -> f64 {
        let hh = self.contact_map.contacts().iter().filter(|&&(i, j)| (k >> i) & (k >> j) & 1 == 1).count();
        let d = k.count_ones() as f64 - self.n_h as f64;
        -(hh as f64) + self.lambda * d * d
    }

    /// Exact energy from an integer contact count and Hamming weight.
    fn level_energy(&self, hh: u32, weight: u32) -> f64 {
        let d = weight as f64 - self.n_h as f64;
        -(hh as f64) + self.lambda * d * d
    }
}

/// Energy of bitstring `s` (bead 0 first).
pub fn qubo_energy(m: &QuboModel, s: &Sequence) -> Result<f64, QuboError> {
    if s.len() != m.n {
        return Err(QuboError::LengthMismatch { expected: m.n, got: s.len() });
    }
    Ok(m.energy_index(s.mask()))
}

/// Exact minimum and every minimizer (ascending by basis index), over all
/// bitstrings or only those of weight `n_h`.
pub fn brute_force_min(m: &QuboModel, weight_restricted: bool) -> Result<(f64, Vec<u64>), QuboError> {
    let n = m.n;
    if n > BRUTE_FORCE_BOUND {
        return Err(QuboError::BoundExceeded { n, bound: BRUTE_FORCE_BOUND });
    }
    let forward = m.contact_map.forward_masks();
    if weight_restricted {
        let mut best = 0;
        let mut arg = Vec::new();
        for_each_weight(n, m.n_h, |k| {
            let hh = hh_with_masks(&forward, k);
            if hh > best || arg.is_empty() {
                best = hh;
                arg.clear();
            }
            if hh == best {
                arg.push(k);
            }
        });
        return Ok((m.level_energy(best, m.n_h as u32), arg));
    }

    // Gray-code sweep: track the best contact count at every weight, then
    // pick the best weight, then collect its argmins in a second pass.
    let mut adj = vec![0u64; n];
    for &(i, j) in m.contact_map.contacts() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let mut best_hh = vec![0u32; n + 1];
    let mut k = 0u64;
    let mut hh = 0u32;
    for step in 1..(1u64 << n) {
        let b = step.trailing_zeros() as usize;
        let partners = adj[b] & k;
        if (k >> b) & 1 == 1 {
            k &= !(1 << b);
            hh -= partners.count_ones();
        } else {
            k |= 1 << b;
            hh += partners.count_ones();
        }
        let w = k.count_ones() as usize;
        best_hh[w] = best_hh[w].max(hh);
    }
    let energies: Vec<f64> = (0..=n).map(|w| m.level_energy(best_hh[w], w as u32)).collect();
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut arg = Vec::new();
    for w in 0..=n {
        if energies[w] != min {
            continue;
        }
        for_each_weight(n, w, |k| {
            if hh_with_masks(&forward, k) == best_hh[w] {
                arg.push(k);
            }
        });
    }
    arg.sort_unstable();
    Ok((min, arg))
}

/// Diagonal cost over basis indices.
///
/// Every energy is determined by the pair (contact count, weight), so values
/// are stored once per level and indices map to levels. The index-to-level
/// table is materialized up to [`MATERIALIZE_BOUND`] qubits.
#[derive(Clone, Debug)]
pub struct DiagonalCost {
    n: usize,
    levels: Vec<f64>,
    table: Option<Vec<u16>>,
    forward: Vec<u64>,
}

/// Diagonal cost evaluator for `m`.
pub fn diagonal(m: &QuboModel) -> DiagonalCost {
    let n = m.n;
    let forward = m.contact_map.forward_masks();
    let max_hh = m.contact_map.len() as u32;
    let mut levels = Vec::with_capacity(((max_hh + 1) as usize) * (n + 1));
    for hh in 0..=max_hh {
        for w in 0..=n as u32 {
            levels.push(m.level_energy(hh, w));
        }
    }
    let table = (n <= MATERIALIZE_BOUND).then(|| {
        let mut hh = vec![0u8; 1 << n];
        let mut table = vec![0u16; 1 << n];
        let stride = (n + 1) as u32;
        for k in 1..(1usize << n) {
            let b = k.trailing_zeros() as usize;
            let rest = k & (k - 1);
            let gain = (forward[b] & rest as u64).count_ones() as u8;
            hh[k] = hh[rest] + gain;
            table[k] = (hh[k] as u32 * stride + k.count_ones()) as u16;
        }
        table
    });
    DiagonalCost { n, levels, table, forward }
}

impl DiagonalCost {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct energy levels; index `hh * (n + 1) + weight`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn is_materialized(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn level(&self, k: usize) -> usize {
        match &self.table {
            Some(t) => t[k] as usize,
            None => {
                let hh = hh_with_masks(&self.forward, k as u64) as usize;
                hh * (self.n + 1) + (k as u64).count_ones() as usize
            }
        }
    }

    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        self.levels[self.level(k)]
    }

    /// Shared handle, for circuits that reuse the cost across bindings.
    pub fn shared(self) -> Arc<DiagonalCost> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_hp::{parse_structure, select_instance};
    use proptest::prelude::*;

    fn u_shape() -> QuboModel {
        let cm = parse_structure("RUL").unwrap().contact_map();
        build_qubo(&cm, 2, 1.1).unwrap()
    }

    #[test]
    fn small_examples() {
        let m = u_shape();
        assert!((qubo_energy(&m, &"1001".parse().unwrap()).unwrap() + 1.0).abs() < 1e-12);
        assert!((qubo_energy(&m, &"1000".parse().unwrap()).unwrap() - 1.1).abs() < 1e-12);
        assert!((m.energy_index(0) - 1.1 * 4.0).abs() < 1e-12);
        assert!(qubo_energy(&m, &"100".parse().unwrap()).is_err());

        let empty = parse_structure("RRR").unwrap().contact_map();
        let m0 = build_qubo(&empty, 0, 1.1).unwrap();
        assert_eq!(m0.energy_index(0), 0.0);
    }

    #[test]
    fn coefficients() {
        let m = u_shape();
        assert!((m.constant - 4.4).abs() < 1e-15);
        assert!(m.linear.iter().all(|&l| (l - 1.1 * -3.0).abs() < 1e-15));
        assert!((m.quadratic(0, 3) - (2.2 - 1.0)).abs() < 1e-15);
        assert!((m.quadratic(1, 2) - 2.2).abs() < 1e-15);
        assert_eq!(m.quadratic_terms().len(), 6);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cm = parse_structure("RUL").unwrap().contact_map();
        assert!(matches!(build_qubo(&cm, 2, 0.0), Err(QuboError::BadLambda(_))));
        assert!(matches!(build_qubo(&cm, 2, -1.0), Err(QuboError::BadLambda(_))));
        assert!(matches!(build_qubo(&cm, 5, 1.1), Err(QuboError::BadComposition { .. })));
    }

    #[test]
    fn expansion_is_lossless_up_to_twelve() {
        for (n, nh) in [(4, 2), (8, 4), (10, 4), (11, 5), (12, 4)] {
            let inst = select_instance(n, nh).unwrap();
            for lambda in [0.3, 1.1, 2.0] {
                let m = build_qubo(&inst.contact_map, nh, lambda).unwrap();
                let worst =
                    (0..1u64 << n).map(|k| (m.energy_index(k) - m.direct_energy_index(k)).abs()).fold(0.0, f64::max);
                assert!(worst < 1e-12, "n={n} lambda={lambda}: {worst}");
            }
        }
    }

    #[test]
    fn oracles_on_small_instances() {
        let inst = select_instance(4, 2).unwrap();
        let m = build_qubo(&inst.contact_map, 2, 1.1).unwrap();
        let (v, arg) = brute_force_min(&m, true).unwrap();
        assert_eq!((v, arg.as_slice()), (-1.0, [0b1001u64].as_slice()));

        let inst = select_instance(10, 4).unwrap();
        let sol = inst.solution.unwrap();
        for lambda in [0.6, 1.1, 2.0] {
            let m = build_qubo(&inst.contact_map, 4, lambda).unwrap();
            let restricted = brute_force_min(&m, true).unwrap();
            assert_eq!(restricted, (-4.0, vec![sol.mask()]));
            let free = brute_force_min(&m, false).unwrap();
            // Direct exhaustive check of the Gray-code sweep.
            let all: Vec<f64> = (0..1u64 << 10).map(|k| m.energy_index(k)).collect();
            let min = all.iter().copied().fold(f64::INFINITY, f64::min);
            assert!((free.0 - min).abs() < 1e-12);
            let expected: Vec<u64> = (0..1u64 << 10).filter(|&k| (all[k as usize] - min).abs() < 1e-9).collect();
            assert_eq!(free.1, expected, "lambda={lambda}");
            if lambda >= 1.1 {
                assert_eq!(free, restricted);
            }
        }
        for k in 0..1u64 << 10 {
            if k.count_ones() == 4 && k != sol.mask() {
                assert!(build_qubo(&inst.contact_map, 4, 1.1).unwrap().energy_index(k) > -4.0);
            }
        }
    }

    #[test]
    fn homopolymer_minimizes_contacts_only() {
        let inst = select_instance(10, 4).unwrap();
        let m = QuboModel::contacts_only(&inst.contact_map);
        let (v, arg) = brute_force_min(&m, false).unwrap();
        assert_eq!(v, -(inst.contact_map.len() as f64));
        assert!(arg.contains(&((1u64 << 10) - 1)));
    }

    #[test]
    fn diagonal_matches_energy_exhaustively() {
        for (n, nh) in [(4, 2), (10, 4), (14, 8)] {
            let inst = select_instance(n, nh).unwrap();
            let m = build_qubo(&inst.contact_map, nh, 1.1).unwrap();
            let d = diagonal(&m);
            assert!(d.is_materialized());
            assert!((d.value(0) - 1.1 * (nh * nh) as f64).abs() < 1e-12);
            assert!((d.value(inst.solution.unwrap().mask() as usize) - inst.e_min as f64).abs() < 1e-12);
            for k in 0..1usize << n {
                assert!((d.value(k) - m.energy_index(k as u64)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bound() {
        let cm = ContactMap::from_pairs(30, &[]).unwrap();
        let m = build_qubo(&cm, 3, 1.1).unwrap();
        assert!(matches!(brute_force_min(&m, true), Err(QuboError::BoundExceeded { .. })));
    }

    fn n12() -> &'static (QuboModel, DiagonalCost) {
        static CELL: std::sync::OnceLock<(QuboModel, DiagonalCost)> = std::sync::OnceLock::new();
        CELL.get_or_init(|| {
            let inst = select_instance(12, 4).unwrap();
            let m = build_qubo(&inst.contact_map, 4, 1.1).unwrap();
            let d = diagonal(&m);
            (m, d)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn diagonal_random_indices(k in 0usize..(1 << 12)) {
            let (m, d) = n12();
            prop_assert!((d.value(k) - m.energy_index(k as u64)).abs() < 1e-12);
            let lazy = DiagonalCost { table: None, ..d.clone() };
            prop_assert_eq!(lazy.level(k), d.level(k));
        }
    }
}
