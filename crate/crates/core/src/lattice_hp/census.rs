//! Designability census: for every HP sequence of length `n`, find its
//! ground-state conformations over all canonical walks.

use std::collections::HashMap;

use rayon::prelude::*;

use super::enumerate::for_each_canonical_walk;
use super::structure::{Sequence, Structure};
use super::{LatticeError, ENUMERATION_BOUND};

/// Per-structure designability for one chain length.
#[derive(Clone, Debug)]
pub struct Census {
    pub n: usize,
    /// Canonical walks in lexicographic order.
    pub structures: Vec<Structure>,
    /// Number of sequences whose unique ground state is `structures[k]`.
    pub designability: Vec<u32>,
    /// The designing sequences of each structure, ascending by mask.
    pub designing: Vec<Vec<Sequence>>,
    /// Total number of sequences with a unique ground state.
    pub unique_sequences: u64,
}

impl Census {
    /// Fraction of all `2^n` sequences that have a unique ground state.
    pub fn unique_fraction(&self) -> f64 {
        self.unique_sequences as f64 / (1u64 << self.n) as f64
    }

    /// Structure indices by decreasing designability; ties keep lexicographic
    /// order of the move string.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.structures.len()).collect();
        idx.sort_by(|&a, &b| self.designability[b].cmp(&self.designability[a]).then(a.cmp(&b)));
        idx
    }

    /// Designability counting only sequences with exactly `n_h` H beads.
    pub fn designability_at_weight(&self, n_h: usize) -> Vec<u32> {
        self.designing.iter().map(|seqs| seqs.iter().filter(|s| s.weight() == n_h).count() as u32).collect()
    }

    /// Index of `s` in [`Census::structures`].
    pub fn index_of(&self, s: &Structure) -> Option<usize> {
        self.structures.binary_search_by(|probe| probe.moves().cmp(s.moves())).ok()
    }
}

/// Walks sharing a contact set are indistinguishable to every sequence.
struct ContactClass {
    start: usize,
    len: usize,
    representative: usize,
    multiplicity: u32,
}

/// Runs the full designability census at chain length `n`.
pub fn design_census(n: usize) -> Result<Census, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooShort);
    }
    if n > ENUMERATION_BOUND {
        return Err(LatticeError::BoundExceeded { n, bound: ENUMERATION_BOUND });
    }

    let mut structures = Vec::new();
    let mut by_contacts: HashMap<Vec<u32>, (usize, u32)> = HashMap::new();
    for_each_canonical_walk(n, |moves, masks| {
        let id = structures.len();
        structures.push(Structure::from_canonical_unchecked(moves.to_vec()));
        let mut key = masks.to_vec();
        key.sort_unstable();
        by_contacts.entry(key).and_modify(|e| e.1 += 1).or_insert((id, 1));
    });

    // Flatten, most contacts first so that the scan below can stop early.
    let mut keyed: Vec<(Vec<u32>, (usize, u32))> = by_contacts.into_iter().collect();
    keyed.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1 .0.cmp(&b.1 .0)));
    let mut flat = Vec::new();
    let classes: Vec<ContactClass> = keyed
        .into_iter()
        .map(|(masks, (representative, multiplicity))| {
            let start = flat.len();
            flat.extend_from_slice(&masks);
            ContactClass { start, len: masks.len(), representative, multiplicity }
        })
        .collect();

    let winners: Vec<Option<usize>> =
        (0..1u64 << n).into_par_iter().map(|seq| unique_ground_state(seq as u32, &classes, &flat)).collect();

    let mut designability = vec![0u32; structures.len()];
    let mut designing = vec![Vec::new(); structures.len()];
    let mut unique_sequences = 0;
    for (seq, w) in winners.into_iter().enumerate() {
        if let Some(k) = w {
            designability[k] += 1;
            designing[k].push(Sequence::from_mask(n, seq as u64));
            unique_sequences += 1;
        }
    }
    Ok(Census { n, structures, designability, designing, unique_sequences })
}

/// Representative structure of the unique ground state of `seq`, if any.
fn unique_ground_state(seq: u32, classes: &[ContactClass], flat: &[u32]) -> Option<usize> {
    let mut best = 0usize;
    let mut degeneracy = 0u32;
    let mut winner = None;
    for c in classes {
        if c.len < best {
            break;
        }
        let hh = flat[c.start..c.start + c.len].iter().filter(|&&m| seq & m == m).count();
        if hh > best {
            best = hh;
            degeneracy = c.multiplicity;
            winner = Some(c.representative);
        } else if hh == best {
            degeneracy += c.multiplicity;
            winner = Some(c.representative);
        }
    }
    (degeneracy == 1).then_some(winner).flatten()
}
