//! Derivative-free minimization with linear interpolation models on a
//! simplex and a shrinking trust radius, in the spirit of COBYLA
//! (unconstrained case).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub rho_begin: f64,
    pub rho_end: f64,
    pub max_evaluations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            rho_begin: 0.5,
            rho_end: 1e-6,
            max_evaluations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    /// Trust radius reached `rho_end` before the budget ran out.
    pub converged: bool,
}

struct Budget<F> {
    f: F,
    used: usize,
    max: usize,
    best: (Vec<f64>, f64),
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.used >= self.max {
            return None;
        }
        self.used += 1;
        let v = (self.f)(x);
        if v < self.best.1 || self.best.1.is_nan() {
            self.best = (x.to_vec(), v);
        }
        Some(v)
    }
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    fresh: bool,
}

impl Simplex {
    fn best(&self) -> usize {
        (0..self.values.len())
            .min_by(|&a, &b| self.values[a].total_cmp(&self.values[b]))
            .unwrap_or(0)
    }

    /// Gradient of the interpolating linear model.
    fn gradient(&self) -> Option<DVector<f64>> {
        let b = self.best();
        let n = self.points[b].len();
        let others: Vec<usize> = (0..self.points.len()).filter(|&i| i != b).collect();
        let d = DMatrix::from_fn(n, n, |r, c| self.points[others[r]][c] - self.points[b][c]);
        let rhs = DVector::from_fn(n, |r, _| self.values[others[r]] - self.values[b]);
        let svd = d.svd(true, true);
        let (max, min) = (svd.singular_values.max(), svd.singular_values.min());
        if min <= 1e-10 * max {
            return None;
        }
        svd.solve(&rhs, 0.0).ok()
    }

    fn spread(&self) -> f64 {
        let b = &self.points[self.best()];
        self.points.iter().map(|p| distance(p, b)).fold(0.0, f64::max)
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn build<F: FnMut(&[f64]) -> f64>(budget: &mut Budget<F>, centre: &[f64], fc: f64, rho: f64) -> Option<Simplex> {
    let mut points = vec![centre.to_vec()];
    let mut values = vec![fc];
    for i in 0..centre.len() {
        let mut p = centre.to_vec();
        p[i] += rho;
        values.push(budget.eval(&p)?);
        points.push(p);
    }
    Some(Simplex {
        points,
        values,
        fresh: true,
    })
}

/// Minimize `f` from `x0`. Running out of evaluations returns the best point
/// seen with `converged = false`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], config: &OptimizerConfig) -> OptimizeResult {
    let mut budget = Budget {
        f,
        used: 0,
        max: config.max_evaluations.max(1),
        best: (x0.to_vec(), f64::NAN),
    };
    let converged = run(&mut budget, x0, config);
    OptimizeResult {
        x: budget.best.0,
        fx: budget.best.1,
        evaluations: budget.used,
        converged,
    }
}

fn run<F: FnMut(&[f64]) -> f64>(budget: &mut Budget<F>, x0: &[f64], config: &OptimizerConfig) -> bool {
    let Some(f0) = budget.eval(x0) else { return false };
    if x0.is_empty() {
        return true;
    }
    let rho_end = config.rho_end.min(config.rho_begin);
    let mut rho = config.rho_begin;
    let Some(mut simplex) = build(budget, x0, f0, rho) else { return false };
    loop {
        let b = simplex.best();
        let xb = simplex.points[b].clone();
        let fb = simplex.values[b];
        let step = simplex.gradient().filter(|g| g.norm() > 0.0);
        let improved = match step {
            Some(g) => {
                let trial: Vec<f64> = xb.iter().zip(g.iter()).map(|(x, gi)| x - rho * gi / g.norm()).collect();
                let Some(ft) = budget.eval(&trial) else { return false };
                if ft < fb {
                    // drop the vertex farthest from the new point
                    let far = (0..simplex.points.len())
                        .max_by(|&i, &j| distance(&simplex.points[i], &trial).total_cmp(&distance(&simplex.points[j], &trial)))
                        .unwrap_or(0);
                    simplex.points[far] = trial;
                    simplex.values[far] = ft;
                    simplex.fresh = false;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if improved && simplex.gradient().is_some() && simplex.spread() <= 2.0 * rho {
            continue;
        }
        let b = simplex.best();
        let (xb, fb) = (simplex.points[b].clone(), simplex.values[b]);
        if !improved && simplex.fresh {
            if rho <= rho_end {
                return true;
            }
            rho *= 0.5;
            if rho <= 1.5 * rho_end {
                rho = rho_end;
            }
        }
        let Some(s) = build(budget, &xb, fb, rho) else { return false };
        simplex = s;
    }
}
