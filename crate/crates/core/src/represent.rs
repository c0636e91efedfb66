//! Minimisation of the J-type norm over representations of a fixed vector.
//!
//! Both plus-minus norms have the same shape once a finite index set is
//! fixed: minimise `F(x) = max_j sup_ε ‖Σ_k ε_k c_{j,k} x_k‖_{A_j}` subject to
//! `Σ_k μ_k x_k = a`. `F` is a maximum of norms of linear maps, hence convex.
//! The constraint is eliminated by solving for one pivot term, and the free
//! terms follow a normalised subgradient with step `step0 · scale / √iter`.
//! Every iterate is feasible and evaluated exactly, so the best one seen is a
//! sound upper bound no matter how far the descent got.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::banach::Couple;
use crate::error::Result;
use crate::signs::{maximize_signs, EnumOptions};

/// Settings for the representation search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverCfg {
    /// Discrete representations use indices `-window..=window`.
    pub window: u64,
    pub iters: usize,
    pub step0: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverCfg {
    fn default() -> Self {
        SolverCfg {
            window: 4,
            iters: 2000,
            step0: 0.5,
            restarts: 4,
            seed: 0,
        }
    }
}

pub(crate) struct Problem<'a> {
    pub couple: &'a Couple,
    /// `coeffs[j][k]` scales term `k` inside the `A_j` supremum.
    pub coeffs: [Vec<f64>; 2],
    /// Constraint weights `μ_k > 0`.
    pub masses: Vec<f64>,
    pub target: &'a [f64],
    pub pivot: usize,
    pub opts: EnumOptions,
}

pub(crate) struct Evaluation {
    pub value: f64,
    space: usize,
    signs: Vec<i8>,
    z: Vec<f64>,
}

pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub value: f64,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.couple.dim()
    }

    fn terms(&self) -> usize {
        self.masses.len()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        let d = self.dim();
        let mut best: Option<Evaluation> = None;
        for j in 0..2 {
            let columns: Vec<f64> = x
                .chunks(d)
                .zip(&self.coeffs[j])
                .flat_map(|(xk, c)| xk.iter().map(move |v| c * v))
                .collect();
            let found = maximize_signs(self.couple.space(j), &columns, &self.opts)?;
            if best.as_ref().is_none_or(|b| found.value > b.value) {
                let mut z = vec![0.0; d];
                for (col, &s) in columns.chunks(d).zip(&found.signs) {
                    for i in 0..d {
                        z[i] += f64::from(s) * col[i];
                    }
                }
                best = Some(Evaluation {
                    value: found.value,
                    space: j,
                    signs: found.signs,
                    z,
                });
            }
        }
        Ok(best.expect("two spaces evaluated"))
    }

    /// Re-solves the pivot term so that `Σ μ_k x_k = a` holds.
    pub fn restore_pivot(&self, x: &mut [f64]) {
        let d = self.dim();
        let p = self.pivot;
        let mut rest = self.target.to_vec();
        for k in (0..self.terms()).filter(|&k| k != p) {
            for i in 0..d {
                rest[i] -= self.masses[k] * x[k * d + i];
            }
        }
        for i in 0..d {
            x[p * d + i] = rest[i] / self.masses[p];
        }
    }

    fn reduced_subgradient(&self, eval: &Evaluation) -> Vec<f64> {
        let d = self.dim();
        let p = self.pivot;
        let g = self.couple.space(eval.space).dual_vector(&eval.z);
        let c = &self.coeffs[eval.space];
        let pivot_factor = f64::from(eval.signs[p]) * c[p] / self.masses[p];
        let mut out = vec![0.0; self.terms() * d];
        for k in (0..self.terms()).filter(|&k| k != p) {
            let factor = f64::from(eval.signs[k]) * c[k] - self.masses[k] * pivot_factor;
            for i in 0..d {
                out[k * d + i] = factor * g[i];
            }
        }
        out
    }

    fn descend(&self, start: Vec<f64>, cfg: &SolverCfg, scale: f64) -> Result<Solution> {
        let mut x = start;
        self.restore_pivot(&mut x);
        let mut eval = self.evaluate(&x)?;
        let mut best = Solution {
            x: x.clone(),
            value: eval.value,
        };
        for iter in 1..=cfg.iters {
            let g = self.reduced_subgradient(&eval);
            let len = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if len == 0.0 {
                break;
            }
            let step = cfg.step0 * scale / (iter as f64).sqrt() / len;
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= step * gi;
            }
            self.restore_pivot(&mut x);
            eval = self.evaluate(&x)?;
            if eval.value < best.value {
                best = Solution {
                    x: x.clone(),
                    value: eval.value,
                };
            }
        }
        Ok(best)
    }

    /// Runs `cfg.restarts` descents from the given starts (cycled, with seeded
    /// perturbations after the first pass) plus an optional warm start, and
    /// keeps the lowest exact value; ties go to the earliest start.
    pub fn solve(&self, starts: &[Vec<f64>], warm: Option<Vec<f64>>, cfg: &SolverCfg) -> Result<Solution> {
        let d = self.dim();
        let scale = self.target.iter().map(|v| v * v).sum::<f64>().sqrt() / self.masses[self.pivot];
        if scale == 0.0 {
            return Ok(Solution {
                x: vec![0.0; self.terms() * d],
                value: 0.0,
            });
        }
        let mut initial: Vec<Vec<f64>> = Vec::new();
        if let Some(w) = warm {
            initial.push(w);
        }
        for r in 0..cfg.restarts.max(1) {
            let base = starts[r % starts.len()].clone();
            if r < starts.len() {
                initial.push(base);
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                let noisy = base
                    .iter()
                    .map(|v| v + 0.25 * scale * rng.random_range(-1.0..1.0))
                    .collect();
                initial.push(noisy);
            }
        }
        let results: Vec<Result<Solution>> = initial
            .into_par_iter()
            .map(|start| self.descend(start, cfg, scale))
            .collect();
        let mut best: Option<Solution> = None;
        for r in results {
            let r = r?;
            if best.as_ref().is_none_or(|b| r.value < b.value) {
                best = Some(r);
            }
        }
        Ok(best.expect("at least one start"))
    }
}
