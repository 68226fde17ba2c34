use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{EvalMode, Objective, ObjectiveSpec, VqaError};
use crate::ansatz::Variant;

/// Evenly spaced points on `[lo, hi]`, or on `[lo, hi)` when `open`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub open: bool,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let k = self.points;
        let div = if self.open { k } else { k.saturating_sub(1) }.max(1);
        (0..k).map(|i| self.lo + (self.hi - self.lo) * i as f64 / div as f64).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub beta: Axis,
    pub gamma: Axis,
}

impl Grid {
    /// `points x points` over `beta in [0, pi]`, `gamma in [0, 2 pi)`.
    pub fn square(points: usize) -> Grid {
        Grid {
            beta: Axis { lo: 0.0, hi: PI, points, open: false },
            gamma: Axis { lo: 0.0, hi: 2.0 * PI, points, open: true },
        }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::square(64)
    }
}

/// Exact p = 1 energies; `values[i][j]` is at `(betas[i], gammas[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Landscape {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Landscape {
    /// Grid position of the lowest value (first in row-major order).
    pub fn argmin(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < self.values[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Fraction of grid values strictly below `v`.
    pub fn fraction_below(&self, v: f64) -> f64 {
        let all: Vec<f64> = self.values.iter().flatten().copied().collect();
        all.iter().filter(|&&x| x < v).count() as f64 / all.len() as f64
    }
}

/// Scans the exact p = 1 objective of `spec` (mode and depth ignored).
pub fn landscape_scan(spec: &ObjectiveSpec, grid: &Grid) -> Result<Landscape, VqaError> {
    if !matches!(spec.variant, Variant::Qaoa(_)) {
        return Err(VqaError::NoLandscape(spec.variant.id().to_string()));
    }
    let spec = ObjectiveSpec { p: 1, mode: EvalMode::Exact, ..spec.clone() };
    let obj = Objective::new(&spec)?;
    let betas = grid.beta.values();
    let gammas = grid.gamma.values();
    let values = betas
        .par_iter()
        .map(|&b| gammas.iter().map(|&g| obj.exact_value(&[b, g])).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Landscape { betas, gammas, values })
}
