//! Derivative-free minimization with linear models on a simplex and a
//! shrinking trust region, in the manner of COBYLA without constraints.
//!
//! The simplex holds `n + 1` evaluated points; the best one is the pivot.
//! Each iteration fits the linear interpolant, steps a distance `rho`
//! along its steepest descent and swaps the trial into the simplex. When
//! a step fails to achieve a tenth of the predicted decrease the simplex
//! geometry is repaired first and `rho` is halved only once the geometry
//! is acceptable.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizeConfig {
    pub rho_begin: f64,
    /// Stop once the trust-region radius falls below this.
    pub rho_end: f64,
    /// Budget of objective evaluations.
    pub max_evals: usize,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig { rho_begin: 0.5, rho_end: 1e-4, max_evals: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxEvals,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptResult {
    pub params: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// `(evaluation index, value)` for every evaluation, in order.
    pub trace: Vec<(usize, f64)>,
    pub terminated_by: Termination,
}

// Accept a step that achieves this fraction of the predicted decrease.
const ACCEPT: f64 = 0.1;
// A vertex further than `FAR * rho` from the pivot, or nearer than
// `FLAT * rho` to the opposite face, spoils the model.
const FAR: f64 = 2.1;
const FLAT: f64 = 0.25;

struct Search<'a, F> {
    f: &'a mut F,
    cfg: MinimizeConfig,
    trace: Vec<(usize, f64)>,
    // `points[0]` is the pivot (lowest value seen).
    points: Vec<DVector<f64>>,
    values: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Search<'_, F> {
    fn eval(&mut self, x: &DVector<f64>) -> f64 {
        let v = (self.f)(x.as_slice());
        self.trace.push((self.trace.len(), v));
        v
    }

    fn exhausted(&self) -> bool {
        self.trace.len() >= self.cfg.max_evals
    }

    fn rebuild(&mut self, rho: f64) {
        let n = self.points[0].len();
        let base = self.points[0].clone();
        let fb = self.values[0];
        self.points.truncate(1);
        self.values.truncate(1);
        for i in 0..n {
            if self.exhausted() {
                break;
            }
            let mut x = base.clone();
            x[i] += rho;
            let v = self.eval(&x);
            self.points.push(x);
            self.values.push(v);
        }
        if self.values.iter().any(|&v| v < fb) {
            self.repivot();
        }
    }

    fn repivot(&mut self) {
        let best = (0..self.values.len()).fold(0, |b, i| if self.values[i] < self.values[b] { i } else { b });
        self.points.swap(0, best);
        self.values.swap(0, best);
    }

    /// Edge matrix inverse: column `j` is normal to the face opposite
    /// vertex `j + 1` with `(x_{j+1} - x_0) . w_j = 1`.
    fn inverse(&self) -> Option<DMatrix<f64>> {
        let n = self.points[0].len();
        let d = DMatrix::from_fn(n, n, |r, c| self.points[r + 1][c] - self.points[0][c]);
        d.try_inverse()
    }

    fn insert(&mut self, x: DVector<f64>, v: f64, w: &DMatrix<f64>) {
        let step = &x - &self.points[0];
        let j = (0..w.ncols())
            .fold(0, |b, j| if w.column(j).dot(&step).abs() > w.column(b).dot(&step).abs() { j } else { b });
        self.points[j + 1] = x;
        self.values[j + 1] = v;
        if v < self.values[0] {
            self.points.swap(0, j + 1);
            self.values.swap(0, j + 1);
        }
    }

    fn run(&mut self) -> Termination {
        let n = self.points[0].len();
        let mut rho = self.cfg.rho_begin;
        if n == 0 {
            return Termination::Converged;
        }
        self.rebuild(rho);
        loop {
            if self.exhausted() {
                return Termination::MaxEvals;
            }
            let Some(w) = self.inverse() else {
                self.rebuild(rho);
                continue;
            };
            let df = DVector::from_fn(n, |i, _| self.values[i + 1] - self.values[0]);
            // Gradient of the interpolant: g = D^{-1} df.
            let g = &w * df;
            let gn = g.norm();
            let mut improved = false;
            if gn > 0.0 && gn.is_finite() {
                let trial = &self.points[0] - &g * (rho / gn);
                let pred = rho * gn;
                let v = self.eval(&trial);
                let actual = self.values[0] - v;
                self.insert(trial, v, &w);
                improved = actual > ACCEPT * pred;
            }
            if improved {
                continue;
            }
            if self.exhausted() {
                return Termination::MaxEvals;
            }
            let Some(w) = self.inverse() else {
                self.rebuild(rho);
                continue;
            };
            if let Some(j) = self.worst_vertex(&w, rho) {
                // Replace vertex j + 1 by a point at distance rho along the
                // normal of its opposite face, downhill per the model.
                let normal = w.column(j).normalize();
                let df = DVector::from_fn(n, |i, _| self.values[i + 1] - self.values[0]);
                let g = &w * df;
                let sign = if g.dot(&normal) > 0.0 { -1.0 } else { 1.0 };
                let x = &self.points[0] + normal * (sign * rho);
                let v = self.eval(&x);
                self.points[j + 1] = x;
                self.values[j + 1] = v;
                if v < self.values[0] {
                    self.points.swap(0, j + 1);
                    self.values.swap(0, j + 1);
                }
                continue;
            }
            rho *= 0.5;
            if rho < self.cfg.rho_end {
                return Termination::Converged;
            }
        }
    }

    fn worst_vertex(&self, w: &DMatrix<f64>, rho: f64) -> Option<usize> {
        let mut worst = None;
        let mut score = 1.0;
        for j in 0..w.ncols() {
            let eta = (&self.points[j + 1] - &self.points[0]).norm() / (FAR * rho);
            let sigma = FLAT * rho * w.column(j).norm();
            let s = eta.max(sigma);
            if s > score {
                score = s;
                worst = Some(j);
            }
        }
        worst
    }
}

/// Minimizes `f` from `x0`. Always returns the best point evaluated.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &MinimizeConfig) -> OptResult {
    let cfg = MinimizeConfig { max_evals: cfg.max_evals.max(1), ..*cfg };
    let mut search = Search { f: &mut f, cfg, trace: Vec::new(), points: Vec::new(), values: Vec::new() };
    let x = DVector::from_column_slice(x0);
    let v = search.eval(&x);
    search.points.push(x);
    search.values.push(v);
    let terminated_by = if search.exhausted() { Termination::MaxEvals } else { search.run() };
    // NaN values never become the pivot, but guard the first point too.
    let best = (0..search.values.len()).filter(|&i| !search.values[i].is_nan()).fold(0, |b, i| {
        if search.values[i] < search.values[b] || search.values[b].is_nan() {
            i
        } else {
            b
        }
    });
    OptResult {
        params: search.points[best].as_slice().to_vec(),
        value: search.values[best],
        evals: search.trace.len(),
        trace: search.trace,
        terminated_by,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_dimensional_quadratic() {
        let r = minimize(|x| (x[0] - 2.0).powi(2), &[0.0], &MinimizeConfig::default());
        assert!((r.params[0] - 2.0).abs() < 1e-3, "{:?}", r.params);
        assert_eq!(r.terminated_by, Termination::Converged);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        // Linear models crawl along the curved valley; the budget still
        // gets close to the minimum.
        let r = minimize(f, &[-1.2, 1.0], &MinimizeConfig { rho_end: 1e-7, ..Default::default() });
        assert!(r.value < 1e-3, "{} at {:?}", r.value, r.params);
    }

    #[test]
    fn periodic_landscape_in_several_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, &t)| -(t - i as f64 * 0.3).cos()).sum::<f64>();
        let r = minimize(f, &[0.5; 6], &MinimizeConfig::default());
        assert!((r.value + 6.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn budget_is_respected() {
        let r = minimize(
            |x| x.iter().map(|t| t * t).sum(),
            &[3.0; 4],
            &MinimizeConfig { max_evals: 7, ..Default::default() },
        );
        assert_eq!(r.evals, 7);
        assert_eq!(r.trace.len(), 7);
        assert_eq!(r.terminated_by, Termination::MaxEvals);
        let one = minimize(|x| x[0], &[1.0], &MinimizeConfig { max_evals: 0, ..Default::default() });
        assert_eq!(one.evals, 1);
    }

    #[test]
    fn nan_values_are_not_chosen() {
        let r =
            minimize(|x| if x[0] > 0.2 { f64::NAN } else { (x[0] + 1.0).powi(2) }, &[0.0], &MinimizeConfig::default());
        assert!((r.params[0] + 1.0).abs() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn final_value_is_trace_minimum(x0 in prop::collection::vec(-3.0f64..3.0, 1..5), seed in 0u64..1000) {
            let a = (seed % 7) as f64 * 0.5;
            let f = |x: &[f64]| x.iter().map(|t| (t - a).sin() + 0.1 * t * t).sum::<f64>();
            let r = minimize(f, &x0, &MinimizeConfig { max_evals: 300, ..Default::default() });
            let min = r.trace.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(r.value, min);
            prop_assert!(r.value <= r.trace[0].1);
            prop_assert_eq!(r.evals, r.trace.len());
            prop_assert!(r.trace.iter().enumerate().all(|(i, t)| t.0 == i));
        }
    }
}
