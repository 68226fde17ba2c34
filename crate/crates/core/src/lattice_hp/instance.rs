//! Design instances: a target structure, a composition and its unique
//! energy-minimizing sequence.

use std::fmt::Write as _;
use std::path::Path;

use super::census::{design_census, Census};
use super::structure::{parse_structure, ContactMap, Sequence, Structure};
use super::{LatticeError, ENUMERATION_BOUND};

/// `(N, N_H, E_min)` of the benchmark instances.
pub const INSTANCE_TABLE: [(usize, usize, i32); 21] = [
    (4, 2, -1),
    (8, 4, -3),
    (10, 4, -4),
    (11, 5, -4),
    (12, 4, -4),
    (13, 8, -6),
    (14, 8, -7),
    (15, 8, -7),
    (16, 6, -6),
    (17, 6, -6),
    (18, 8, -8),
    (19, 8, -8),
    (20, 8, -8),
    (21, 10, -10),
    (22, 10, -11),
    (23, 10, -10),
    (24, 10, -11),
    (25, 13, -13),
    (26, 14, -14),
    (27, 13, -13),
    (28, 13, -13),
];

/// Default composition for chain length `n`.
pub fn table_composition(n: usize) -> Option<usize> {
    INSTANCE_TABLE.iter().find(|r| r.0 == n).map(|r| r.1)
}

/// Known minimum energy for `(n, n_h)`.
pub fn table_energy(n: usize, n_h: usize) -> Option<i32> {
    INSTANCE_TABLE.iter().find(|r| r.0 == n && r.1 == n_h).map(|r| r.2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub structure: Structure,
    pub contact_map: ContactMap,
    pub n_h: usize,
    pub e_min: i32,
    pub solution: Option<Sequence>,
}

impl Instance {
    /// Builds an instance after checking that minimizing `E_HP` at weight
    /// `n_h` has a unique solution.
    pub fn verified(structure: Structure, n_h: usize) -> Result<Instance, LatticeError> {
        let n = structure.len();
        if n_h > n {
            return Err(LatticeError::BadComposition { n, n_h });
        }
        let contact_map = structure.contact_map();
        let (e_min, minimizers) = weight_restricted_minimizers(&contact_map, n_h);
        if minimizers.len() != 1 {
            return Err(LatticeError::NotUnique { count: minimizers.len() });
        }
        Ok(Instance { structure, contact_map, n_h, e_min, solution: Some(minimizers[0]) })
    }

    pub fn n(&self) -> usize {
        self.structure.len()
    }

    /// Serializes to the line-oriented instance format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "version 1").unwrap();
        writeln!(out, "n {}", self.n()).unwrap();
        writeln!(out, "nh {}", self.n_h).unwrap();
        writeln!(out, "emin {}", self.e_min).unwrap();
        writeln!(out, "moves {}", self.structure.moves_string()).unwrap();
        if let Some(s) = &self.solution {
            writeln!(out, "solution {s}").unwrap();
        }
        out
    }

    /// Parses the instance format and re-verifies uniqueness, minimum energy
    /// and (when given) the solution. Blank lines and `#` comments are
    /// ignored.
    pub fn from_text(text: &str) -> Result<Instance, LatticeError> {
        let mut version = None;
        let mut n = None;
        let mut nh = None;
        let mut emin = None;
        let mut moves = None;
        let mut solution = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || LatticeError::BadInstanceFile { line: lineno + 1, reason: line.to_string() };
            let (key, value) = line.split_once(' ').ok_or_else(bad)?;
            let value = value.trim();
            match key {
                "version" => version = Some(value.parse::<u32>().map_err(|_| bad())?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "nh" => nh = Some(value.parse::<usize>().map_err(|_| bad())?),
                "emin" => emin = Some(value.parse::<i32>().map_err(|_| bad())?),
                "moves" => moves = Some(parse_structure(value)?),
                "solution" => solution = Some(value.parse::<Sequence>()?),
                _ => return Err(bad()),
            }
        }
        let missing = |field: &str| LatticeError::BadInstanceFile { line: 0, reason: format!("missing `{field}`") };
        if version.ok_or_else(|| missing("version"))? != 1 {
            return Err(LatticeError::BadInstanceFile { line: 1, reason: "unsupported version".into() });
        }
        let n = n.ok_or_else(|| missing("n"))?;
        let nh = nh.ok_or_else(|| missing("nh"))?;
        let emin = emin.ok_or_else(|| missing("emin"))?;
        let structure = moves.ok_or_else(|| missing("moves"))?;
        if structure.len() != n {
            return Err(LatticeError::LengthMismatch { expected: n, got: structure.len() });
        }
        let inst = Instance::verified(structure, nh)?;
        if inst.e_min != emin {
            return Err(LatticeError::EnergyMismatch { expected: emin, got: inst.e_min });
        }
        if let Some(s) = solution {
            if Some(s) != inst.solution {
                return Err(LatticeError::SolutionMismatch);
            }
        }
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Instance, LatticeError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LatticeError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Instance::from_text(&text)
    }
}

/// Iterates all `n`-bit masks with exactly `k` bits set, ascending.
pub(crate) fn for_each_weight<F: FnMut(u64)>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut v: u64 = (1u64 << k) - 1;
    loop {
        f(v);
        // Gosper's hack: next larger integer with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        if r > limit || r == 0 {
            break;
        }
        v = (((r ^ v) >> 2) / c) | r;
        if v > limit {
            break;
        }
    }
}

/// `N_HH` of `mask` using per-bead forward contact masks.
#[inline]
pub(crate) fn hh_with_masks(forward: &[u64], mask: u64) -> u32 {
    let mut rest = mask;
    let mut hh = 0;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        hh += (forward[i] & mask).count_ones();
        rest &= rest - 1;
    }
    hh
}

/// Exact minimum of `E_HP` over sequences with `n_h` H beads, with all
/// minimizers in ascending mask order.
pub fn weight_restricted_minimizers(cm: &ContactMap, n_h: usize) -> (i32, Vec<Sequence>) {
    let n = cm.n();
    let forward = cm.forward_masks();
    let mut best = 0u32;
    let mut arg = Vec::new();
    for_each_weight(n, n_h, |m| {
        let hh = hh_with_masks(&forward, m);
        if hh > best {
            best = hh;
            arg.clear();
        }
        if hh == best {
            arg.push(Sequence::from_mask(n, m));
        }
    });
    (-(best as i32), arg)
}

/// Picks the most designable structure for which the weight-`n_h` problem
/// has a unique solution that also designs the structure.
pub fn select_from_census(census: &Census, n_h: usize) -> Result<Instance, LatticeError> {
    let n = census.n;
    if n_h > n {
        return Err(LatticeError::BadComposition { n, n_h });
    }
    let ranking = census.ranking();
    let mut chosen: Option<Instance> = None;
    for &k in &ranking {
        if census.designability[k] == 0 {
            break;
        }
        if let Some(c) = &chosen {
            let ck = census.index_of(&c.structure).expect("chosen structure is enumerated");
            if census.designability[k] == census.designability[ck] {
                log::info!(
                    "designability tie at n={n}: {} and {} both design {} sequences; keeping the former",
                    c.structure,
                    census.structures[k],
                    census.designability[k]
                );
            }
            break;
        }
        let Ok(inst) = Instance::verified(census.structures[k].clone(), n_h) else {
            continue;
        };
        let sol = inst.solution.expect("verified instances carry a solution");
        if census.designing[k].binary_search(&sol).is_ok() {
            chosen = Some(inst);
        }
    }
    chosen.ok_or(LatticeError::NoValidInstance { n, n_h })
}

/// Builds the design instance for `(n, n_h)`: by census for `n` within the
/// enumeration bound, otherwise from the bundled instance files.
pub fn select_instance(n: usize, n_h: usize) -> Result<Instance, LatticeError> {
    if n <= ENUMERATION_BOUND {
        let census = design_census(n)?;
        return select_from_census(&census, n_h);
    }
    match bundled_instance(n, n_h) {
        Some(inst) => inst,
        None => Err(LatticeError::BoundExceeded { n, bound: ENUMERATION_BOUND }),
    }
}

macro_rules! bundled {
    ($($n:literal),*) => {
        &[$(($n, include_str!(concat!("../../instances/n", stringify!($n), ".txt")))),*]
    };
}

/// Pre-derived instance files for chain lengths beyond the census bound.
pub const BUNDLED_INSTANCES: &[(usize, &str)] = bundled!(15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28);

/// Loads (and re-verifies) the bundled instance for `(n, n_h)`, if one exists.
pub fn bundled_instance(n: usize, n_h: usize) -> Option<Result<Instance, LatticeError>> {
    BUNDLED_INSTANCES
        .iter()
        .filter(|(bn, _)| *bn == n)
        .map(|(_, text)| Instance::from_text(text))
        .find(|r| r.as_ref().map_or(true, |i| i.n_h == n_h))
}
