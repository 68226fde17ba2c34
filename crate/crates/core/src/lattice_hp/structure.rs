use std::fmt;
use std::str::FromStr;

use super::LatticeError;

/// A unit step on the square lattice.
///
/// Variants are declared in ASCII order of their letters so that the derived
/// `Ord` matches lexicographic order of move strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    D,
    L,
    R,
    U,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::D, Move::L, Move::R, Move::U];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Move::D => (0, -1),
            Move::L => (-1, 0),
            Move::R => (1, 0),
            Move::U => (0, 1),
        }
    }

    pub fn from_delta(d: (i32, i32)) -> Option<Move> {
        match d {
            (0, -1) => Some(Move::D),
            (-1, 0) => Some(Move::L),
            (1, 0) => Some(Move::R),
            (0, 1) => Some(Move::U),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Move::D => 'D',
            Move::L => 'L',
            Move::R => 'R',
            Move::U => 'U',
        }
    }

    pub fn from_char(c: char) -> Option<Move> {
        match c {
            'D' => Some(Move::D),
            'L' => Some(Move::L),
            'R' => Some(Move::R),
            'U' => Some(Move::U),
            _ => None,
        }
    }

    pub fn opposite(self) -> Move {
        match self {
            Move::D => Move::U,
            Move::L => Move::R,
            Move::R => Move::L,
            Move::U => Move::D,
        }
    }

    /// Image of this step under element `op` (0..8) of the square-lattice
    /// point group: `op & 3` quarter turns, preceded by a reflection in the
    /// x-axis when `op & 4` is set.
    pub fn transformed(self, op: u8) -> Move {
        let (mut x, mut y) = self.delta();
        if op & 4 != 0 {
            y = -y;
        }
        for _ in 0..(op & 3) {
            (x, y) = (-y, x);
        }
        Move::from_delta((x, y)).expect("point group maps unit steps to unit steps")
    }
}

/// Apply a point-group element to every step of a walk.
pub fn transform_moves(moves: &[Move], op: u8) -> Vec<Move> {
    moves.iter().map(|m| m.transformed(op)).collect()
}

/// Returns the point-group element that brings `moves` to canonical form
/// (first step R, first turn U).
fn canonicalizing_op(moves: &[Move]) -> u8 {
    let first = moves[0];
    let turn = moves.iter().copied().find(|&m| m != first);
    (0..8u8)
        .find(|&op| first.transformed(op) == Move::R && turn.is_none_or(|t| t.transformed(op) == Move::U))
        .expect("some point-group element canonicalizes every walk")
}

/// A self-avoiding walk of `N` beads on the square lattice, stored in
/// canonical orientation.
#[derive(Clone, Debug)]
pub struct Structure {
    moves: Vec<Move>,
    coords: Vec<(i32, i32)>,
    original: String,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.moves == other.moves
    }
}

impl Eq for Structure {}

impl std::hash::Hash for Structure {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.moves.hash(state);
    }
}

fn walk_coords(moves: &[Move]) -> Result<Vec<(i32, i32)>, LatticeError> {
    let mut coords = Vec::with_capacity(moves.len() + 1);
    let mut seen = std::collections::HashSet::with_capacity(moves.len() + 1);
    let mut p = (0, 0);
    coords.push(p);
    seen.insert(p);
    for (step, m) in moves.iter().enumerate() {
        let (dx, dy) = m.delta();
        p = (p.0 + dx, p.1 + dy);
        if !seen.insert(p) {
            return Err(LatticeError::SelfIntersection { step: step + 1 });
        }
        coords.push(p);
    }
    Ok(coords)
}

impl Structure {
    /// Builds a structure from a walk, canonicalizing its orientation.
    pub fn from_moves(moves: &[Move]) -> Result<Structure, LatticeError> {
        if moves.is_empty() {
            return Err(LatticeError::TooShort);
        }
        let original: String = moves.iter().map(|m| m.as_char()).collect();
        walk_coords(moves)?;
        let canon = transform_moves(moves, canonicalizing_op(moves));
        let coords = walk_coords(&canon)?;
        Ok(Structure { moves: canon, coords, original })
    }

    /// Trusted constructor for walks already known to be canonical and
    /// self-avoiding (enumeration output).
    pub(crate) fn from_canonical_unchecked(moves: Vec<Move>) -> Structure {
        let coords = walk_coords(&moves).expect("enumerated walks are self-avoiding");
        let original = moves.iter().map(|m| m.as_char()).collect();
        Structure { moves, coords, original }
    }

    /// Number of beads.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn coords(&self) -> &[(i32, i32)] {
        &self.coords
    }

    /// Canonical move string.
    pub fn moves_string(&self) -> String {
        self.moves.iter().map(|m| m.as_char()).collect()
    }

    /// The move string this structure was parsed from, before canonicalization.
    pub fn original(&self) -> &str {
        &self.original
    }

    /// Size of the orbit of this walk under the square-lattice point group.
    pub fn orbit_size(&self) -> usize {
        if self.moves.iter().all(|&m| m == Move::R) {
            4
        } else {
            8
        }
    }

    /// The same conformation traversed from the other end, canonicalized.
    pub fn reversed(&self) -> Structure {
        let rev: Vec<Move> = self.moves.iter().rev().map(|m| m.opposite()).collect();
        Structure::from_moves(&rev).expect("reversal preserves self-avoidance")
    }

    pub fn contact_map(&self) -> ContactMap {
        ContactMap::from_structure(self)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.moves_string())
    }
}

impl FromStr for Structure {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_structure(s)
    }
}

/// Parses a move string over {R, L, U, D}; the result is canonicalized and
/// keeps the input as [`Structure::original`].
pub fn parse_structure(text: &str) -> Result<Structure, LatticeError> {
    let moves = text
        .chars()
        .enumerate()
        .map(|(pos, c)| Move::from_char(c).ok_or(LatticeError::BadToken { pos, token: c }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut s = Structure::from_moves(&moves)?;
    s.original = text.to_string();
    Ok(s)
}

/// Non-bonded nearest-neighbour pairs `(i, j)`, `i + 2 <= j`, of a structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContactMap {
    n: usize,
    contacts: Vec<(usize, usize)>,
}

impl ContactMap {
    pub fn from_structure(s: &Structure) -> ContactMap {
        let c = s.coords();
        let mut contacts = Vec::new();
        for i in 0..c.len() {
            for j in (i + 2)..c.len() {
                if (c[i].0 - c[j].0).abs() + (c[i].1 - c[j].1).abs() == 1 {
                    contacts.push((i, j));
                }
            }
        }
        ContactMap { n: c.len(), contacts }
    }

    /// Builds a map from explicit pairs; pairs are normalized to `i < j` and
    /// must satisfy `j >= i + 2`, `j < n`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<ContactMap, LatticeError> {
        let mut contacts: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        for &(i, j) in &contacts {
            if j >= n || j < i + 2 {
                return Err(LatticeError::BadContact { i, j, n });
            }
        }
        contacts.sort_unstable();
        contacts.dedup();
        Ok(ContactMap { n, contacts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contacts(&self) -> &[(usize, usize)] {
        &self.contacts
    }

    pub fn len(&self) -> usize {
        self.contacts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contacts.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.contacts.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    /// For each bead `i`, a bitmask of contact partners `j > i`.
    pub fn forward_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for &(i, j) in &self.contacts {
            masks[i] |= 1 << j;
        }
        masks
    }

    /// Number of contacts with both beads set in `mask`.
    pub fn hh_count(&self, mask: u64) -> u32 {
        self.contacts.iter().filter(|&&(i, j)| (mask >> i) & (mask >> j) & 1 == 1).count() as u32
    }

    /// Contact map of the reversed chain.
    pub fn reversed(&self) -> ContactMap {
        let n = self.n;
        let pairs: Vec<_> = self.contacts.iter().map(|&(i, j)| (n - 1 - j, n - 1 - i)).collect();
        ContactMap::from_pairs(n, &pairs).expect("reversal keeps pairs valid")
    }
}

/// An HP sequence: bit `i` set means bead `i` is hydrophobic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence {
    n: usize,
    mask: u64,
}

impl Sequence {
    pub fn from_mask(n: usize, mask: u64) -> Sequence {
        debug_assert!(n <= 64 && (n == 64 || mask >> n == 0));
        Sequence { n, mask }
    }

    pub fn all_p(n: usize) -> Sequence {
        Sequence { n, mask: 0 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn is_h(&self, i: usize) -> bool {
        (self.mask >> i) & 1 == 1
    }

    /// Number of H beads.
    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn reversed(&self) -> Sequence {
        let mut mask = 0;
        for i in 0..self.n {
            if self.is_h(i) {
                mask |= 1 << (self.n - 1 - i);
            }
        }
        Sequence { n: self.n, mask }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.is_h(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Sequence {
    type Err = LatticeError;

    /// Bitstring in bead order, bead 0 first.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > 64 {
            return Err(LatticeError::BoundExceeded { n: s.len(), bound: 64 });
        }
        let mut mask = 0u64;
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => mask |= 1 << pos,
                token => return Err(LatticeError::BadToken { pos, token }),
            }
        }
        Ok(Sequence { n: s.chars().count(), mask })
    }
}

/// `E_HP = -N_HH` of `seq` on the contacts `cm`.
pub fn hp_energy(cm: &ContactMap, seq: &Sequence) -> Result<i32, LatticeError> {
    if seq.len() != cm.n() {
        return Err(LatticeError::LengthMismatch { expected: cm.n(), got: seq.len() });
    }
    Ok(-(cm.hh_count(seq.mask()) as i32))
}
