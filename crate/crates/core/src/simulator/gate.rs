use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::SimError;
use crate::qubo::{DiagonalCost, QuboModel};

/// Angle slot of a circuit template: a fixed value or `scale * params[index]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { index: usize, scale: f64 },
}

impl Angle {
    pub fn param(index: usize) -> Angle {
        Angle::Param { index, scale: 1.0 }
    }

    pub fn bind(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(v) => v,
            Angle::Param { index, scale } => scale * params[index],
        }
    }
}

/// Product of `RZ` and `RZZ` rotations sharing one scale angle `gamma`:
/// `RZ_q(c_q * gamma)` for every `(q, c_q)` in `z`, then
/// `RZZ_ab(c_ab * gamma)` for every `(a, b, c_ab)` in `zz`.
///
/// The product is diagonal with phase `exp(-i * gamma * v(k))` where
/// `v(k) = cost(k) - offset`, which lets simulation apply it in a single
/// pass instead of gate by gate.
#[derive(Debug)]
pub struct PhaseBlock {
    pub n: usize,
    pub z: Vec<(usize, f64)>,
    pub zz: Vec<(usize, usize, f64)>,
    pub cost: Arc<DiagonalCost>,
    pub offset: f64,
}

impl PhaseBlock {
    /// The cost layer `exp(-i gamma C)` of a QUBO, up to the global phase
    /// `exp(-i gamma offset)`.
    ///
    /// With `s_i = (1 - Z_i) / 2`, `C = offset + sum_i a_i Z_i + sum_{i<j}
    /// b_ij Z_i Z_j` where `a_i = -h_i/2 - sum_j J_ij/4` and `b_ij = J_ij/4`,
    /// so the gate angles are `2 a_i gamma` and `2 b_ij gamma`.
    pub fn from_qubo(m: &QuboModel, cost: Arc<DiagonalCost>) -> PhaseBlock {
        let n = m.n;
        let terms = m.quadratic_terms();
        let mut a: Vec<f64> = m.linear.iter().map(|h| -h / 2.0).collect();
        let mut offset = m.constant + m.linear.iter().sum::<f64>() / 2.0;
        let mut zz = Vec::with_capacity(terms.len());
        for &(i, j, q) in &terms {
            a[i] -= q / 4.0;
            a[j] -= q / 4.0;
            offset += q / 4.0;
            zz.push((i, j, 2.0 * q / 4.0));
        }
        let z = a.iter().enumerate().map(|(q, &ai)| (q, 2.0 * ai)).collect();
        PhaseBlock { n, z, zz, cost, offset }
    }

    /// Phase table for one angle: `exp(-i gamma (level - offset))` per level.
    pub fn level_phases(&self, gamma: f64) -> Vec<num_complex::Complex64> {
        self.cost
            .levels()
            .iter()
            .map(|&e| num_complex::Complex64::from_polar(1.0, -gamma * (e - self.offset)))
            .collect()
    }

    /// The block as individual gates at angle `gamma`.
    pub fn expand(&self, gamma: f64) -> Vec<Gate> {
        let mut out: Vec<Gate> = self.z.iter().map(|&(q, c)| Op::Rz(q, c * gamma)).collect();
        out.extend(self.zz.iter().map(|&(a, b, c)| Op::Rzz(a, b, c * gamma)));
        out
    }

    pub fn gate_count(&self) -> usize {
        self.z.len() + self.zz.len()
    }
}

/// A circuit operation with angles of type `A`.
///
/// Conventions: `Rx(q, t) = exp(-i t X/2)` (likewise `Ry`, `Rz`),
/// `Rzz(a, b, t) = exp(-i t Z_a Z_b/2)`,
/// `RxxYy(a, b, t) = exp(-i t (X_a X_b + Y_a Y_b)/2)`, and
/// `Cry(c, t, theta)` applies `Ry(theta)` to `t` when `c` is one.
#[derive(Clone, Debug)]
pub enum Op<A> {
    Rx(usize, A),
    Ry(usize, A),
    Rz(usize, A),
    X(usize),
    H(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Rzz(usize, usize, A),
    RxxYy(usize, usize, A),
    Cry(usize, usize, A),
    Barrier,
    Phase(Arc<PhaseBlock>, A),
}

pub type Gate = Op<f64>;

impl<A> Op<A> {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Rx(..) => "rx",
            Op::Ry(..) => "ry",
            Op::Rz(..) => "rz",
            Op::X(..) => "x",
            Op::H(..) => "h",
            Op::Cnot(..) => "cx",
            Op::Cz(..) => "cz",
            Op::Rzz(..) => "rzz",
            Op::RxxYy(..) => "xx_plus_yy",
            Op::Cry(..) => "cry",
            Op::Barrier => "barrier",
            Op::Phase(..) => "phase_block",
        }
    }

    /// Qubits touched; for a phase block, every qubit of the register.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Op::Rx(q, _) | Op::Ry(q, _) | Op::Rz(q, _) | Op::X(q) | Op::H(q) => vec![q],
            Op::Cnot(a, b) | Op::Cz(a, b) | Op::Rzz(a, b, _) | Op::RxxYy(a, b, _) | Op::Cry(a, b, _) => vec![a, b],
            Op::Barrier => vec![],
            Op::Phase(ref blk, _) => (0..blk.n).collect(),
        }
    }

    pub fn map_angle<B>(&self, f: impl Fn(&A) -> B) -> Op<B> {
        match self {
            Op::Rx(q, a) => Op::Rx(*q, f(a)),
            Op::Ry(q, a) => Op::Ry(*q, f(a)),
            Op::Rz(q, a) => Op::Rz(*q, f(a)),
            Op::X(q) => Op::X(*q),
            Op::H(q) => Op::H(*q),
            Op::Cnot(a, b) => Op::Cnot(*a, *b),
            Op::Cz(a, b) => Op::Cz(*a, *b),
            Op::Rzz(a, b, t) => Op::Rzz(*a, *b, f(t)),
            Op::RxxYy(a, b, t) => Op::RxxYy(*a, *b, f(t)),
            Op::Cry(a, b, t) => Op::Cry(*a, *b, f(t)),
            Op::Barrier => Op::Barrier,
            Op::Phase(blk, t) => Op::Phase(Arc::clone(blk), f(t)),
        }
    }

    fn check(&self, n: usize) -> Result<(), SimError> {
        let qs = self.qubits();
        if let Op::Phase(blk, _) = self {
            if blk.n != n {
                return Err(SimError::DimensionMismatch { expected: n, got: blk.n });
            }
        }
        for (k, &q) in qs.iter().enumerate() {
            if q >= n || qs[..k].contains(&q) {
                return Err(SimError::BadQubits { gate: self.name(), qubits: qs.clone(), n });
            }
        }
        Ok(())
    }
}

impl Gate {
    /// The gate with phase blocks replaced by their constituent rotations.
    pub fn primitives(&self) -> Vec<Gate> {
        match self {
            Op::Phase(blk, gamma) => blk.expand(*gamma),
            g => vec![g.clone()],
        }
    }

    pub fn to_json(&self) -> Value {
        let qs = self.qubits();
        match self {
            Op::Rx(_, t) | Op::Ry(_, t) | Op::Rz(_, t) | Op::Rzz(_, _, t) | Op::RxxYy(_, _, t) | Op::Cry(_, _, t) => {
                json!({"gate": self.name(), "qubits": qs, "angle": t})
            }
            Op::Phase(..) => Value::Array(self.primitives().iter().map(Gate::to_json).collect()),
            _ => json!({"gate": self.name(), "qubits": qs}),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Rx(q, t) | Op::Ry(q, t) | Op::Rz(q, t) => write!(f, "{}({t}) q{q}", self.name()),
            Op::Rzz(a, b, t) | Op::RxxYy(a, b, t) | Op::Cry(a, b, t) => write!(f, "{}({t}) q{a},q{b}", self.name()),
            Op::Phase(blk, t) => write!(f, "phase_block({t}) [{} gates]", blk.gate_count()),
            g => {
                let qs: Vec<String> = g.qubits().iter().map(|q| format!("q{q}")).collect();
                write!(f, "{} {}", g.name(), qs.join(","))
            }
        }
    }
}

/// A bound gate list over `n` qubits.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Circuit, SimError> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.try_push(g)?;
        }
        Ok(c)
    }

    pub fn try_push(&mut self, g: Gate) -> Result<(), SimError> {
        g.check(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    /// Appends `g`; panics on bad qubit indices.
    pub fn push(&mut self, g: Gate) {
        if let Err(e) = self.try_push(g) {
            panic!("{e}");
        }
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n, other.n);
        self.gates.extend(other.gates.iter().cloned());
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of primitive gates (phase blocks expanded, barriers excluded).
    pub fn gate_count(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g {
                Op::Barrier => 0,
                Op::Phase(blk, _) => blk.gate_count(),
                _ => 1,
            })
            .sum()
    }

    /// The same circuit with every phase block expanded into gates.
    pub fn expanded(&self) -> Circuit {
        Circuit { n: self.n, gates: self.gates.iter().flat_map(Gate::primitives).collect() }
    }

    pub fn to_json(&self) -> Value {
        let mut gates = Vec::new();
        for g in &self.gates {
            match g.to_json() {
                Value::Array(v) => gates.extend(v),
                v => gates.push(v),
            }
        }
        json!({"qubits": self.n, "gates": gates})
    }
}
