//! Exhaustive enumeration of canonical self-avoiding walks.
//!
//! A walk is canonical when its first step is `R` and its first turn is `U`;
//! every orbit of the square-lattice point group has exactly one canonical
//! member. Chain reversal is not quotiented out: it relabels beads, which
//! changes the energy of a fixed sequence.

use super::structure::{Move, Structure};
use super::{LatticeError, ENUMERATION_BOUND};

/// Depth-first walker over a bounded occupancy grid.
struct Walker<'f, F> {
    n: usize,
    width: i32,
    grid: Vec<u16>,
    moves: Vec<Move>,
    contacts: Vec<u32>,
    visit: &'f mut F,
}

impl<F: FnMut(&[Move], &[u32])> Walker<'_, F> {
    fn idx(&self, p: (i32, i32)) -> usize {
        ((p.1 + self.width / 2) * self.width + (p.0 + self.width / 2)) as usize
    }

    fn extend(&mut self, pos: (i32, i32), turned: bool) {
        let placed = self.moves.len() + 1;
        if placed == self.n {
            (self.visit)(&self.moves, &self.contacts);
            return;
        }
        for m in Move::ALL {
            if !turned && !matches!(m, Move::R | Move::U) {
                continue;
            }
            let (dx, dy) = m.delta();
            let next = (pos.0 + dx, pos.1 + dy);
            let cell = self.idx(next);
            if self.grid[cell] != 0 {
                continue;
            }
            let bead = placed; // index of the bead being placed
            self.grid[cell] = bead as u16 + 1;
            let mark = self.contacts.len();
            for (nx, ny) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let other = self.grid[self.idx((next.0 + nx, next.1 + ny))];
                if other != 0 && (other as usize) < bead {
                    let i = other as usize - 1;
                    self.contacts.push((1 << i) | (1 << bead));
                }
            }
            self.moves.push(m);
            self.extend(next, turned || m != Move::R);
            self.moves.pop();
            self.contacts.truncate(mark);
            self.grid[cell] = 0;
        }
    }
}

/// Calls `visit(moves, contacts)` for every canonical walk of `n` beads in
/// lexicographic order of the move string. Each contact `(i, j)` is passed as
/// the bitmask `1 << i | 1 << j`.
///
/// No size bound is applied here; the walk count grows roughly as `2.64^n`.
pub fn for_each_canonical_walk<F: FnMut(&[Move], &[u32])>(n: usize, mut visit: F) {
    assert!((2..=32).contains(&n), "walk length {n} outside 2..=32");
    let width = 2 * n as i32 + 3;
    let mut w = Walker {
        n,
        width,
        grid: vec![0; (width * width) as usize],
        moves: Vec::with_capacity(n),
        contacts: Vec::with_capacity(2 * n),
        visit: &mut visit,
    };
    let origin = w.idx((0, 0));
    w.grid[origin] = 1;
    let first = w.idx((1, 0));
    w.grid[first] = 2;
    w.moves.push(Move::R);
    w.extend((1, 0), false);
}

/// Number of canonical walks of `n` beads.
pub fn count_canonical_walks(n: usize) -> usize {
    let mut count = 0;
    for_each_canonical_walk(n, |_, _| count += 1);
    count
}

/// All canonical self-avoiding walks of `n` beads, lexicographically ordered.
pub fn enumerate_saws(n: usize) -> Result<Vec<Structure>, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooShort);
    }
    if n > ENUMERATION_BOUND {
        return Err(LatticeError::BoundExceeded { n, bound: ENUMERATION_BOUND });
    }
    let mut out = Vec::new();
    for_each_canonical_walk(n, |moves, _| out.push(Structure::from_canonical_unchecked(moves.to_vec())));
    Ok(out)
}
