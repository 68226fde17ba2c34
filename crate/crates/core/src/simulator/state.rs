use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use super::gate::{Circuit, Gate, Op, PhaseBlock};
use super::SimError;
use crate::qubo::DiagonalCost;

/// Registers at or above this size split kernels across threads.
const PARALLEL_QUBITS: usize = 18;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 28;

/// Measurement outcomes keyed by basis index.
pub type Counts = BTreeMap<u64, u64>;

/// Initial-state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitSpec {
    /// Uniform superposition over all basis states.
    Uniform,
    /// The basis state with qubits `0..n_h` set.
    Basis(usize),
    /// Uniform superposition over weight-`n_h` basis states.
    Dicke(usize),
}

impl InitSpec {
    pub fn label(&self) -> &'static str {
        match self {
            InitSpec::Uniform => "UI",
            InitSpec::Basis(_) => "BI",
            InitSpec::Dicke(_) => "DI",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn zero(n: usize) -> Statevector {
        Statevector::basis(n, 0)
    }

    pub fn basis(n: usize, k: usize) -> Statevector {
        assert!(n <= MAX_QUBITS, "{n} qubits exceed the simulator bound {MAX_QUBITS}");
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[k] = C64::new(1.0, 0.0);
        Statevector { n, amps }
    }

    /// Normalizes and wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Statevector {
        assert!(amps.len().is_power_of_two());
        let n = amps.len().trailing_zeros() as usize;
        let mut s = Statevector { n, amps };
        let norm = s.norm();
        s.amps.iter_mut().for_each(|a| *a /= norm);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.amps[k].norm_sqr()
    }

    pub fn inner(&self, other: &Statevector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Probability mass on basis states whose weight differs from `w`.
    pub fn leakage(&self, w: usize) -> f64 {
        self.amps.iter().enumerate().filter(|(k, _)| k.count_ones() as usize != w).map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, g: &Gate) {
        match *g {
            Op::Rx(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let m = [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]];
                self.apply_1q(q, m);
            }
            Op::Ry(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let m = [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]];
                self.apply_1q(q, m);
            }
            Op::Rz(q, t) => {
                let p0 = C64::from_polar(1.0, -t / 2.0);
                self.apply_diag_1q(q, p0, p0.conj());
            }
            Op::X(q) => self.pairs(q, std::mem::swap),
            Op::H(q) => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                self.pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * r;
                    *b = (x - y) * r;
                });
            }
            Op::Cnot(c, t) => self.quads(c, t, |_, _, a10, a11| std::mem::swap(a10, a11)),
            Op::Cz(a, b) => self.quads(a, b, |_, _, _, a11| *a11 = -*a11),
            Op::Rzz(a, b, t) => {
                let p = C64::from_polar(1.0, -t / 2.0);
                let pc = p.conj();
                self.quads(a, b, |a00, a01, a10, a11| {
                    *a00 *= p;
                    *a11 *= p;
                    *a01 *= pc;
                    *a10 *= pc;
                });
            }
            Op::RxxYy(a, b, t) => {
                let (c, s) = (t.cos(), t.sin());
                let ms = C64::new(0.0, -s);
                self.quads(a, b, |_, a01, a10, _| {
                    let (x, y) = (*a01, *a10);
                    *a01 = x * c + y * ms;
                    *a10 = x * ms + y * c;
                });
            }
            Op::Cry(ctrl, tgt, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                // quads(ctrl, tgt): a10 has ctrl = 1, tgt = 0.
                self.quads(ctrl, tgt, |_, _, a10, a11| {
                    let (x, y) = (*a10, *a11);
                    *a10 = x * c - y * s;
                    *a11 = x * s + y * c;
                });
            }
            Op::Barrier => {}
            Op::Phase(ref blk, gamma) => self.apply_phase_block(blk, gamma),
        }
    }

    /// Applies `exp(-i gamma (cost(k) - offset))` to every amplitude.
    pub fn apply_phase_block(&mut self, blk: &PhaseBlock, gamma: f64) {
        assert_eq!(blk.n, self.n);
        let phases = blk.level_phases(gamma);
        let cost = &blk.cost;
        let body = |(k, a): (usize, &mut C64)| *a *= phases[cost.level(k)];
        if self.n >= PARALLEL_QUBITS {
            self.amps.par_iter_mut().enumerate().for_each(body);
        } else {
            self.amps.iter_mut().enumerate().for_each(body);
        }
    }

    /// Single-qubit Pauli: 1 = X, 2 = Y, 3 = Z.
    pub fn apply_pauli(&mut self, q: usize, p: u8) {
        match p {
            0 => {}
            1 => self.pairs(q, std::mem::swap),
            2 => self.pairs(q, |a, b| {
                let (x, y) = (*a, *b);
                *a = C64::new(y.im, -y.re);
                *b = C64::new(-x.im, x.re);
            }),
            3 => self.pairs(q, |_, b| *b = -*b),
            _ => panic!("Pauli index {p} out of range"),
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[C64; 2]; 2]) {
        self.pairs(q, |a, b| {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        });
    }

    fn apply_diag_1q(&mut self, q: usize, p0: C64, p1: C64) {
        self.pairs(q, |a, b| {
            *a *= p0;
            *b *= p1;
        });
    }

    /// Calls `f(a0, a1)` on every amplitude pair differing in bit `q`.
    fn pairs<F: Fn(&mut C64, &mut C64) + Sync>(&mut self, q: usize, f: F) {
        let half = 1usize << q;
        let body = |chunk: &mut [C64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a, b);
            }
        };
        if self.n >= PARALLEL_QUBITS {
            self.amps.par_chunks_mut(2 * half).for_each(body);
        } else {
            self.amps.chunks_mut(2 * half).for_each(body);
        }
    }

    /// Calls `f(a00, a01, a10, a11)` on every amplitude quadruple over
    /// qubits `(q1, q2)`; in `aXY`, `X` is the bit of `q1` and `Y` of `q2`.
    fn quads<F: Fn(&mut C64, &mut C64, &mut C64, &mut C64) + Sync>(&mut self, q1: usize, q2: usize, f: F) {
        debug_assert_ne!(q1, q2);
        let (lo, hi) = (q1.min(q2), q1.max(q2));
        let q1_high = q1 == hi;
        let body = |block: &mut [C64]| {
            let (h0, h1) = block.split_at_mut(1 << hi);
            for (c0, c1) in h0.chunks_mut(2 << lo).zip(h1.chunks_mut(2 << lo)) {
                let (x00, x01) = c0.split_at_mut(1 << lo);
                let (x10, x11) = c1.split_at_mut(1 << lo);
                // xAB: A is the high qubit's bit, B the low qubit's.
                for (((a, b), c), d) in x00.iter_mut().zip(x01.iter_mut()).zip(x10.iter_mut()).zip(x11.iter_mut()) {
                    if q1_high {
                        f(a, b, c, d);
                    } else {
                        f(a, c, b, d);
                    }
                }
            }
        };
        if self.n >= PARALLEL_QUBITS {
            self.amps.par_chunks_mut(2 << hi).for_each(body);
        } else {
            self.amps.chunks_mut(2 << hi).for_each(body);
        }
    }
}

/// Prepares an initial state directly (no circuit).
pub fn init_state(n: usize, spec: InitSpec) -> Result<Statevector, SimError> {
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits { n, bound: MAX_QUBITS });
    }
    match spec {
        InitSpec::Uniform => {
            let a = C64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
            Ok(Statevector { n, amps: vec![a; 1 << n] })
        }
        InitSpec::Basis(k) => {
            if k > n {
                return Err(SimError::BadComposition { n, n_h: k });
            }
            Ok(Statevector::basis(n, (1usize << k) - 1))
        }
        InitSpec::Dicke(k) => {
            if k > n {
                return Err(SimError::BadComposition { n, n_h: k });
            }
            let count = (0..1usize << n).filter(|x| x.count_ones() as usize == k).count();
            let a = C64::new(1.0 / (count as f64).sqrt(), 0.0);
            let amps =
                (0..1usize << n).map(|x| if x.count_ones() as usize == k { a } else { C64::new(0.0, 0.0) }).collect();
            Ok(Statevector { n, amps })
        }
    }
}

pub fn run_circuit(c: &Circuit, s0: &Statevector) -> Result<Statevector, SimError> {
    if c.n != s0.n {
        return Err(SimError::DimensionMismatch { expected: s0.n, got: c.n });
    }
    let mut s = s0.clone();
    for g in c.gates() {
        s.apply(g);
    }
    Ok(s)
}

/// `sum_k |amp_k|^2 d(k)`.
pub fn expectation_diagonal(s: &Statevector, d: &DiagonalCost) -> Result<f64, SimError> {
    if d.n() != s.n {
        return Err(SimError::DimensionMismatch { expected: s.n, got: d.n() });
    }
    // Accumulate per level, then weight: fewer multiplications and the
    // summation order does not depend on thread count.
    let mut mass = vec![0.0; d.levels().len()];
    for (k, a) in s.amps.iter().enumerate() {
        mass[d.level(k)] += a.norm_sqr();
    }
    Ok(mass.iter().zip(d.levels()).map(|(m, e)| m * e).sum())
}

/// Multinomial sample of `shots` outcomes from `|amp|^2`.
pub fn sample<R: Rng + ?Sized>(s: &Statevector, shots: u64, rng: &mut R) -> Counts {
    sample_probabilities(&s.probabilities(), shots, rng)
}

/// Multinomial sample from an explicit distribution (need not be exactly
/// normalized).
pub fn sample_probabilities<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Counts {
    let cdf = cumulative(probs);
    let mut counts = Counts::new();
    for _ in 0..shots {
        *counts.entry(draw(&cdf, rng) as u64).or_default() += 1;
    }
    counts
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

pub(crate) fn draw<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let total = *cdf.last().expect("non-empty distribution");
    let u = rng.gen::<f64>() * total;
    let k = cdf.partition_point(|&c| c <= u);
    // Skip zero-probability tail entries that rounding could land on.
    k.min(cdf.len() - 1)
}
