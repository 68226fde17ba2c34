//! Randomized search for design instances at chain lengths where a full
//! designability census is out of reach.
//!
//! Candidates are compact self-avoiding walks confined to small boxes. A
//! candidate is accepted when the weight-`n_h` problem has a unique minimizer
//! at the requested energy, when that minimizer stays the global minimum of
//! the penalized objective at the given penalty weight, and (for chain
//! lengths within [`FOLD_BOUND`]) when the minimizer folds uniquely to the
//! candidate.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fold::fold_verify;
use super::instance::Instance;
use super::structure::{Move, Structure};
use super::{LatticeError, FOLD_BOUND};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_candidates: usize,
    /// Penalty weight the instance must tolerate (unrestricted minimizer
    /// equals the restricted one); `None` skips the check.
    pub penalty: Option<f64>,
    pub require_fold: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, max_candidates: 200_000, penalty: Some(1.1), require_fold: true }
    }
}

/// Exact densest-`k` search on the contact graph by branch and bound.
///
/// Returns the best induced contact count `>= floor` and how many weight-`k`
/// masks reach it (counting stops at `cap`). A count of zero means no mask
/// reaches `floor`.
pub fn densest_at_weight(adj: &[u64], k: usize, floor: u32, cap: u32) -> (u32, u32) {
    struct Bb<'a> {
        adj: &'a [u64],
        n: usize,
        k: usize,
        best: u32,
        count: u32,
        cap: u32,
        scores: Vec<u32>,
    }
    impl Bb<'_> {
        fn go(&mut self, v: usize, chosen: u64, picked: usize, hh: u32) {
            if picked == self.k {
                if hh > self.best || (hh == self.best && self.count == 0) {
                    self.best = hh;
                    self.count = 1;
                } else if hh == self.best {
                    self.count += 1;
                }
                return;
            }
            let r = self.k - picked;
            if self.n - v < r {
                return;
            }
            let undecided = (u64::MAX >> (64 - self.n)) & !((1u64 << v) - 1);
            self.scores.clear();
            for t in v..self.n {
                let s = 2 * (self.adj[t] & chosen).count_ones() + (self.adj[t] & undecided).count_ones();
                self.scores.push(s);
            }
            self.scores.sort_unstable_by(|a, b| b.cmp(a));
            let ub = (2 * hh + self.scores[..r].iter().sum::<u32>()) / 2;
            if ub < self.best || (ub == self.best && self.count >= self.cap) {
                return;
            }
            let gain = (self.adj[v] & chosen).count_ones();
            self.go(v + 1, chosen | (1 << v), picked + 1, hh + gain);
            self.go(v + 1, chosen, picked, hh);
        }
    }
    let n = adj.len();
    if k > n {
        return (floor, 0);
    }
    let mut bb = Bb { adj, n, k, best: floor, count: 0, cap, scores: Vec::with_capacity(n) };
    bb.go(0, 0, 0, 0);
    (bb.best, bb.count)
}

fn adjacency(s: &Structure) -> Vec<u64> {
    let mut adj = vec![0u64; s.len()];
    for &(i, j) in s.contact_map().contacts() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    adj
}

/// Box shapes `(w, h)` with `w <= h` that can hold `n` beads with little slack.
fn boxes(n: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for w in 2..=n as i32 {
        for h in w..=n as i32 {
            let area = (w * h) as usize;
            if area >= n && area <= n + n / 3 + 2 {
                out.push((w, h));
            }
        }
    }
    out
}

/// Random self-avoiding walk of `n` beads inside a `w x h` box, by
/// depth-first search with shuffled move order and a step budget.
fn random_confined_walk(n: usize, w: i32, h: i32, rng: &mut ChaCha8Rng) -> Option<Vec<Move>> {
    let mut occupied = vec![false; (w * h) as usize];
    let start = (rng.gen_range(0..w), rng.gen_range(0..h));
    let cell = |p: (i32, i32)| (p.1 * w + p.0) as usize;
    occupied[cell(start)] = true;
    let mut stack: Vec<((i32, i32), Vec<Move>)> = Vec::with_capacity(n);
    let mut moves = Vec::with_capacity(n);
    let mut options = Move::ALL.to_vec();
    options.shuffle(rng);
    stack.push((start, options));
    let mut budget = 20 * n * n;
    while let Some((pos, opts)) = stack.last_mut() {
        if moves.len() + 1 == n {
            return Some(moves);
        }
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let pos = *pos;
        match opts.pop() {
            Some(m) => {
                let (dx, dy) = m.delta();
                let next = (pos.0 + dx, pos.1 + dy);
                if next.0 < 0 || next.1 < 0 || next.0 >= w || next.1 >= h || occupied[cell(next)] {
                    continue;
                }
                occupied[cell(next)] = true;
                moves.push(m);
                let mut o = Move::ALL.to_vec();
                o.shuffle(rng);
                stack.push((next, o));
            }
            None => {
                stack.pop();
                if !stack.is_empty() {
                    occupied[cell(pos)] = false;
                    moves.pop();
                }
            }
        }
    }
    None
}

/// Searches for an instance `(n, n_h)` whose unique weight-`n_h` minimizer
/// has energy `e_min`.
pub fn search_instance(n: usize, n_h: usize, e_min: i32, cfg: &SearchConfig) -> Result<Option<Instance>, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooShort);
    }
    if n > 63 {
        return Err(LatticeError::BoundExceeded { n, bound: 63 });
    }
    if n_h > n {
        return Err(LatticeError::BadComposition { n, n_h });
    }
    let target = (-e_min) as u32;
    let shapes = boxes(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = HashSet::new();
    for attempt in 0..cfg.max_candidates {
        let (w, h) = shapes[attempt % shapes.len()];
        let (w, h) = if rng.gen() { (w, h) } else { (h, w) };
        let Some(moves) = random_confined_walk(n, w, h, &mut rng) else { continue };
        let s = Structure::from_moves(&moves)?;
        if !seen.insert(s.moves_string()) {
            continue;
        }
        if (s.contact_map().len() as u32) < target {
            continue;
        }
        let adj = adjacency(&s);
        let (best, count) = densest_at_weight(&adj, n_h, target, 2);
        if best != target || count != 1 {
            continue;
        }
        if let Some(lambda) = cfg.penalty {
            if !tolerates_penalty(&adj, n_h, target, lambda) {
                continue;
            }
        }
        let inst = Instance::verified(s, n_h)?;
        debug_assert_eq!(inst.e_min, e_min);
        if cfg.require_fold && n <= FOLD_BOUND {
            let sol = inst.solution.expect("verified instance has a solution");
            if !fold_verify(&sol, &inst.structure, 1.0)?.unique_ground_state_is_target {
                continue;
            }
        }
        log::info!("n={n}: accepted candidate {} after {} attempts", inst.structure, attempt + 1);
        return Ok(Some(inst));
    }
    Ok(None)
}

/// True when no composition other than `n_h` reaches a penalized energy at
/// or below `-target` with penalty weight `lambda`.
pub fn tolerates_penalty(adj: &[u64], n_h: usize, target: u32, lambda: f64) -> bool {
    let n = adj.len();
    let total: u32 = adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2;
    for w in (n_h + 1)..=n {
        let d = (w - n_h) as f64;
        let need = (target as f64 + lambda * d * d).ceil() as u32;
        if need > total {
            break;
        }
        if densest_at_weight(adj, w, need, 1).1 > 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_hp::instance::{for_each_weight, hh_with_masks};
    use crate::lattice_hp::{enumerate_saws, parse_structure};

    #[test]
    fn branch_and_bound_matches_brute_force() {
        for s in enumerate_saws(9).unwrap().iter().step_by(7) {
            let adj = adjacency(s);
            let fwd = s.contact_map().forward_masks();
            for k in 0..=9 {
                let mut best = 0;
                let mut count = 0;
                for_each_weight(9, k, |m| {
                    let hh = hh_with_masks(&fwd, m);
                    if hh > best {
                        best = hh;
                        count = 0;
                    }
                    if hh == best {
                        count += 1;
                    }
                });
                assert_eq!(densest_at_weight(&adj, k, 0, u32::MAX), (best, count), "{s} k={k}");
            }
        }
    }

    #[test]
    fn finds_small_instance() {
        let cfg = SearchConfig { seed: 3, max_candidates: 5000, penalty: Some(1.1), require_fold: true };
        let inst = search_instance(10, 4, -4, &cfg).unwrap().expect("an n=10 instance exists");
        assert_eq!(inst.e_min, -4);
        let again = search_instance(10, 4, -4, &cfg).unwrap().unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn penalty_tolerance_detects_cheap_extra_bead() {
        // U-shape RUL, n_h = 2: adding a third H gains nothing, tolerated.
        let s = parse_structure("RUL").unwrap();
        assert!(tolerates_penalty(&adjacency(&s), 2, 1, 1.1));
        // Contacts (0,5) and (2,5): weight 3 reaches two contacts, which
        // beats one contact at weight 2 once the penalty drops below 1.
        let s = parse_structure("RUULD").unwrap();
        let adj = adjacency(&s);
        assert!(tolerates_penalty(&adj, 2, 1, 1.1));
        assert!(!tolerates_penalty(&adj, 2, 1, 0.9));
    }
}
