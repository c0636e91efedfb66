//! The continuous plus-minus construction on step functions.
//!
//! For a step function `u` with value `u_k` on `[t_{k-1}, t_k)`, any admissible
//! multiplier `φ` with `|φ| ≤ 1` contributes `∫_cell e^{(j-θ)t} φ(t) dt · u_k`
//! per cell, and that scalar ranges over exactly `[-W_{j,k}, W_{j,k}]` with
//! `W_{j,k} = ∫_cell e^{(j-θ)t} dt`. The supremum over `φ` is therefore a
//! maximum over the box `Π_k [-W_{j,k}, W_{j,k}]`, attained at a vertex.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::banach::{check_vector, sum_norm, Couple, Vector};
use crate::check::BoundCheck;
use crate::discrete::{check_theta, pm_lower_bound};
use crate::error::{Error, Result};
use crate::estimate::{Bracket, Certificate, EstimateKind, NormEstimate};
use crate::represent::{Problem, SolverCfg};
use crate::signs::EnumOptions;
use crate::uc::labelled_supremum;

#[derive(Serialize, Deserialize)]
struct StepFunctionRepr {
    #[serde(default)]
    breakpoints: Vec<f64>,
    #[serde(default)]
    values: Vec<Vector>,
}

/// Compactly supported, piecewise constant `u: ℝ → ℝ^d`: value `values[k]`
/// on `[breakpoints[k], breakpoints[k+1])`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionRepr", into = "StepFunctionRepr")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<Vector>,
}

impl TryFrom<StepFunctionRepr> for StepFunction {
    type Error = Error;

    fn try_from(repr: StepFunctionRepr) -> Result<Self> {
        StepFunction::new(repr.breakpoints, repr.values)
    }
}

impl From<StepFunction> for StepFunctionRepr {
    fn from(u: StepFunction) -> Self {
        StepFunctionRepr {
            breakpoints: u.breakpoints,
            values: u.values,
        }
    }
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Vector>) -> Result<Self> {
        if values.is_empty() {
            if breakpoints.len() > 1 {
                return Err(Error::InvalidStepFunction(
                    "breakpoints given without cell values".into(),
                ));
            }
            return Ok(StepFunction::zero());
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidStepFunction(format!(
                "{} cells need {} breakpoints, got {}",
                values.len(),
                values.len() + 1,
                breakpoints.len()
            )));
        }
        if breakpoints.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let d = values[0].dim();
        for v in &values {
            check_vector(d, v)?;
        }
        Ok(StepFunction { breakpoints, values })
    }

    pub fn zero() -> Self {
        StepFunction {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    /// `v · χ_{[lo, hi)}`
    pub fn indicator(lo: f64, hi: f64, v: Vector) -> Result<Self> {
        StepFunction::new(vec![lo, hi], vec![v])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.values.first().map(Vector::dim)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch { expected: dim, found: d }),
            _ => Ok(()),
        }
    }

    /// `(left, right, value)` per cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, &Vector)> {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[0], w[1], v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Vector::is_zero)
    }

    /// Smallest `R` with support inside `[-R, R]`.
    pub fn support_radius(&self) -> f64 {
        match (self.breakpoints.first(), self.breakpoints.last()) {
            (Some(a), Some(b)) if !self.values.is_empty() => a.abs().max(b.abs()),
            _ => 0.0,
        }
    }

    /// `∫ u` over `[lo, hi)`.
    pub fn integral_over(&self, lo: f64, hi: f64, dim: usize) -> Vector {
        let mut total = Vector::zeros(dim);
        for (a, b, v) in self.cells() {
            let overlap = b.min(hi) - a.max(lo);
            if overlap > 0.0 {
                if a >= lo && b <= hi {
                    total.add_scaled(b - a, v);
                } else {
                    total.add_scaled(overlap, v);
                }
            }
        }
        total
    }

    /// `∫_ℝ u = Σ_k (t_k - t_{k-1}) u_k`.
    pub fn integral(&self, dim: usize) -> Vector {
        self.integral_over(f64::NEG_INFINITY, f64::INFINITY, dim)
    }

    /// The same function on a partition that also breaks at each of `points`
    /// lying strictly inside a cell.
    pub fn refined(&self, points: &[f64]) -> StepFunction {
        if self.values.is_empty() {
            return self.clone();
        }
        let mut breakpoints = Vec::with_capacity(self.breakpoints.len() + points.len());
        let mut values = Vec::with_capacity(self.values.len() + points.len());
        let mut cuts: Vec<f64> = points.iter().copied().filter(|t| t.is_finite()).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for (a, b, v) in self.cells() {
            breakpoints.push(a);
            values.push(v.clone());
            for &t in cuts.iter().filter(|&&t| t > a && t < b) {
                breakpoints.push(t);
                values.push(v.clone());
            }
        }
        breakpoints.push(*self.breakpoints.last().expect("nonempty"));
        StepFunction { breakpoints, values }
    }

    /// Zeroes every cell whose index is not in `keep`.
    pub fn restricted(&self, keep: &BTreeSet<usize>) -> StepFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| if keep.contains(&k) { v.clone() } else { Vector::zeros(v.dim()) })
            .collect();
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values,
        }
    }
}

/// `∫_a^b e^{αt} dt`, via `expm1` so that short cells keep full precision.
pub(crate) fn exp_integral(alpha: f64, a: f64, b: f64) -> f64 {
    (alpha * a).exp() * (alpha * (b - a)).exp_m1() / alpha
}

/// `W_{j,k} = ∫_{t_{k-1}}^{t_k} e^{(j-θ)t} dt` for every cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellWeights {
    pub weights: [Vec<f64>; 2],
}

pub fn cell_weights(theta: f64, u: &StepFunction) -> Result<CellWeights> {
    check_theta(theta)?;
    let weights = [0usize, 1].map(|j| {
        let alpha = j as f64 - theta;
        u.cells().map(|(a, b, _)| exp_integral(alpha, a, b)).collect()
    });
    Ok(CellWeights { weights })
}

fn per_space(
    c: &Couple,
    theta: f64,
    u: &StepFunction,
    keep: Option<&BTreeSet<usize>>,
    opts: &EnumOptions,
) -> Result<[NormEstimate; 2]> {
    u.check_dim(c.dim())?;
    let w = cell_weights(theta, u)?;
    let estimate = |j: usize| -> Result<NormEstimate> {
        let terms = u
            .values
            .iter()
            .enumerate()
            .filter(|(k, _)| keep.is_none_or(|s| s.contains(k)))
            .map(|(k, v)| (k as i64, w.weights[j][k], v.as_slice()));
        let (value, kind, pattern) = labelled_supremum(c.space(j), terms, opts)?;
        Ok(NormEstimate {
            value,
            kind,
            certificate: Certificate::Signs {
                space: Some(j as u8),
                pattern,
            },
        })
    };
    Ok([estimate(0)?, estimate(1)?])
}

/// `‖u‖_J = max_j sup_φ ‖∫ e^{(j-θ)t} φ(t) u(t) dt‖_{A_j}`, with the integral
/// restricted to the cells in `cell_subset` when given.
pub fn j_seminorm_continuous(
    c: &Couple,
    theta: f64,
    u: &StepFunction,
    cell_subset: Option<&BTreeSet<usize>>,
) -> Result<NormEstimate> {
    j_seminorm_continuous_with(c, theta, u, cell_subset, &EnumOptions::default())
}

pub fn j_seminorm_continuous_with(
    c: &Couple,
    theta: f64,
    u: &StepFunction,
    cell_subset: Option<&BTreeSet<usize>>,
    opts: &EnumOptions,
) -> Result<NormEstimate> {
    let [e0, e1] = per_space(c, theta, u, cell_subset, opts)?;
    let kind = if e0.kind == EstimateKind::Exact && e1.kind == EstimateKind::Exact {
        EstimateKind::Exact
    } else {
        EstimateKind::CertifiedLower
    };
    let mut best = if e1.value > e0.value { e1 } else { e0 };
    best.kind = kind;
    Ok(best)
}

/// Per-space suprema over `{|t| ≥ R}`; cells are split at `±R` first.
pub fn tail_supremum(c: &Couple, theta: f64, u: &StepFunction, radius: f64) -> Result<[f64; 2]> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be nonnegative, got {radius}")));
    }
    let split = u.refined(&[-radius, radius]);
    let keep: BTreeSet<usize> = split
        .cells()
        .enumerate()
        .filter(|(_, (a, b, _))| *b <= -radius || *a >= radius)
        .map(|(k, _)| k)
        .collect();
    let [e0, e1] = per_space(c, theta, &split, Some(&keep), &EnumOptions::default())?;
    Ok([e0.value, e1.value])
}

/// `∫u` and its half-line pieces, with the three bounds
/// `‖∫_{-∞}^0 u‖_0 ≤ ‖u‖_J`, `‖∫_0^∞ u‖_1 ≤ ‖u‖_J`, `‖∫u‖_{A0+A1} ≤ 2‖u‖_J`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub total: Vector,
    pub negative: Vector,
    pub positive: Vector,
    pub seminorm: f64,
    pub negative_bound: BoundCheck,
    pub positive_bound: BoundCheck,
    pub total_bound: BoundCheck,
}

impl IntegralReport {
    pub fn holds(&self) -> bool {
        self.negative_bound.holds && self.positive_bound.holds && self.total_bound.holds
    }
}

pub fn integral_full(c: &Couple, theta: f64, u: &StepFunction) -> Result<IntegralReport> {
    u.check_dim(c.dim())?;
    let d = c.dim();
    let negative = u.integral_over(f64::NEG_INFINITY, 0.0, d);
    let positive = u.integral_over(0.0, f64::INFINITY, d);
    let total = u.integral(d);
    let seminorm = j_seminorm_continuous(c, theta, u, None)?.value;
    let negative_bound = BoundCheck::certified(c.n0().eval(&negative)?, seminorm);
    let positive_bound = BoundCheck::certified(c.n1().eval(&positive)?, seminorm);
    let total_bound = BoundCheck::certified(sum_norm(c, &total)?.upper, 2.0 * seminorm);
    Ok(IntegralReport {
        total,
        negative,
        positive,
        seminorm,
        negative_bound,
        positive_bound,
        total_bound,
    })
}

/// Uniform partition of `[-support_r, support_r)` used by the continuous solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContinuousGrid {
    pub support_r: f64,
    pub cells_per_unit: u32,
}

impl Default for ContinuousGrid {
    fn default() -> Self {
        ContinuousGrid {
            support_r: 2.0,
            cells_per_unit: 2,
        }
    }
}

impl ContinuousGrid {
    /// `⌈2R · cells_per_unit⌉` equal cells spanning `[-R, R)`.
    pub fn breakpoints(&self) -> Result<Vec<f64>> {
        if !(self.support_r > 0.0 && self.support_r.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "support radius must be positive, got {}",
                self.support_r
            )));
        }
        if self.cells_per_unit == 0 {
            return Err(Error::InvalidArgument("cells_per_unit must be at least 1".into()));
        }
        let r = self.support_r;
        let cells = (2.0 * r * f64::from(self.cells_per_unit)).ceil().max(1.0) as usize;
        let h = 2.0 * r / cells as f64;
        let mut t: Vec<f64> = (0..=cells).map(|k| -r + k as f64 * h).collect();
        t[cells] = r;
        if cells % 2 == 0 {
            t[cells / 2] = 0.0;
        }
        Ok(t)
    }
}

/// Carries `warm` onto `grid` when every breakpoint of `warm` is (up to
/// rounding) a grid point, so the embedded function is identical.
fn embed_on_grid(warm: &StepFunction, grid: &[f64], d: usize) -> Option<Vec<f64>> {
    let tol = 1e-12 * grid.iter().fold(1.0_f64, |m, t| m.max(t.abs()));
    let on_grid = |t: f64| grid.iter().any(|g| (g - t).abs() <= tol);
    if !warm.breakpoints().iter().all(|&t| on_grid(t)) {
        return None;
    }
    let mut x = vec![0.0; (grid.len() - 1) * d];
    for (k, w) in grid.windows(2).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        if let Some((_, _, v)) = warm.cells().find(|(a, b, _)| *a <= mid && mid < *b) {
            x[k * d..(k + 1) * d].copy_from_slice(v);
        }
    }
    Some(x)
}

/// Upper bound from the best step function found on `grid` with `∫u = a`,
/// lower bound as for the discrete norm.
pub fn pm_norm_continuous(
    c: &Couple,
    theta: f64,
    a: &[f64],
    grid: &ContinuousGrid,
    cfg: &SolverCfg,
) -> Result<Bracket> {
    pm_norm_continuous_warm(c, theta, a, grid, cfg, None)
}

/// As [`pm_norm_continuous`], also starting from `warm`; the upper value
/// never exceeds the exact seminorm of `warm`.
pub fn pm_norm_continuous_warm(
    c: &Couple,
    theta: f64,
    a: &[f64],
    grid: &ContinuousGrid,
    cfg: &SolverCfg,
    warm: Option<&StepFunction>,
) -> Result<Bracket> {
    check_theta(theta)?;
    check_vector(c.dim(), a)?;
    let d = c.dim();
    let t = grid.breakpoints()?;
    let m = t.len() - 1;
    let lower = pm_lower_bound(c, theta, a)?;
    let pivot = t.iter().rposition(|&x| x <= 0.0).unwrap_or(0).min(m - 1);
    let widths: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let coeffs = [0usize, 1].map(|j| {
        let alpha = j as f64 - theta;
        t.windows(2).map(|w| exp_integral(alpha, w[0], w[1])).collect::<Vec<_>>()
    });
    let problem = Problem {
        couple: c,
        coeffs,
        masses: widths.clone(),
        target: a,
        pivot,
        opts: EnumOptions::default(),
    };

    let mut single = vec![0.0; m * d];
    for i in 0..d {
        single[pivot * d + i] = a[i] / widths[pivot];
    }
    let decay: Vec<f64> = t.windows(2).map(|w| (-(0.5 * (w[0] + w[1])).abs()).exp()).collect();
    let mass: f64 = decay.iter().zip(&widths).map(|(e, h)| e * h).sum();
    let geometric: Vec<f64> = decay
        .iter()
        .flat_map(|e| a.iter().map(move |v| e * v / mass))
        .collect();

    if let Some(w) = warm {
        w.check_dim(d)?;
    }
    let warm_flat = warm.and_then(|w| embed_on_grid(w, &t, d));
    let solution = problem.solve(&[single, geometric], warm_flat, cfg)?;
    let values = solution.x.chunks(d).map(|v| Vector::from(v.to_vec())).collect();
    let certificate = StepFunction::new(t, values)?;
    let mut upper = NormEstimate {
        value: j_seminorm_continuous(c, theta, &certificate, None)?.value,
        kind: EstimateKind::CertifiedUpper,
        certificate: Certificate::Step(certificate),
    };
    if let Some(w) = warm {
        let warm_value = j_seminorm_continuous(c, theta, w, None)?.value;
        if warm_value <= upper.value {
            upper.value = warm_value;
            upper.certificate = Certificate::Step(w.clone());
        }
    }
    let lower = NormEstimate {
        value: lower.value.min(upper.value),
        ..lower
    };
    Ok(Bracket { upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{Exponent, NormSpec};

    fn abs_couple() -> Couple {
        let n = NormSpec::new(Exponent::Finite(1.0), vec![1.0]).unwrap();
        Couple::new(n.clone(), n).unwrap()
    }

    #[test]
    fn unit_cell_example() {
        let u = StepFunction::indicator(0.0, 1.0, Vector::from(vec![1.0])).unwrap();
        let est = j_seminorm_continuous(&abs_couple(), 0.5, &u, None).unwrap();
        let expected = 2.0 * (0.5f64.exp() - 1.0);
        assert!((est.value - expected).abs() < 1e-14);
        assert!(expected > 2.0 * (1.0 - (-0.5f64).exp()));
        assert_eq!(est.signs().unwrap().1, Some(1));
    }

    #[test]
    fn zero_function() {
        let est = j_seminorm_continuous(&abs_couple(), 0.5, &StepFunction::zero(), None).unwrap();
        assert_eq!(est.value, 0.0);
        let report = integral_full(&abs_couple(), 0.5, &StepFunction::zero()).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn splitting_a_cell_keeps_the_value() {
        let n = NormSpec::new(Exponent::Finite(2.0), vec![1.0, 3.0]).unwrap();
        let c = Couple::new(n.clone(), NormSpec::new(Exponent::Finite(2.0), vec![2.0, 0.5]).unwrap()).unwrap();
        let u = StepFunction::new(
            vec![-1.0, 0.5, 2.0],
            vec![Vector::from(vec![1.0, -1.0]), Vector::from(vec![0.3, 2.0])],
        )
        .unwrap();
        let coarse = j_seminorm_continuous(&c, 0.3, &u, None).unwrap().value;
        let fine = j_seminorm_continuous(&c, 0.3, &u.refined(&[-0.2, 1.0, 1.7]), None).unwrap().value;
        assert!((coarse - fine).abs() <= 1e-12 * coarse);
    }

    #[test]
    fn integral_examples() {
        let v = Vector::from(vec![2.0]);
        let u = StepFunction::indicator(0.0, 1.0, v.clone()).unwrap();
        let report = integral_full(&abs_couple(), 0.5, &u).unwrap();
        assert_eq!(report.total, v);
        assert!(report.holds());

        let u = StepFunction::new(vec![-1.0, 0.0, 1.0], vec![v.clone(), v.scaled(-1.0)]).unwrap();
        let report = integral_full(&abs_couple(), 0.5, &u).unwrap();
        assert!(report.total.is_zero());
        assert_eq!(report.negative, v);
        assert_eq!(report.positive, v.scaled(-1.0));
    }

    #[test]
    fn tail_supremum_endpoints() {
        let c = abs_couple();
        let u = StepFunction::new(
            vec![-1.5, 0.0, 0.5, 2.0],
            vec![Vector::from(vec![1.0]), Vector::from(vec![-2.0]), Vector::from(vec![0.5])],
        )
        .unwrap();
        let full = per_space(&c, 0.4, &u, None, &EnumOptions::default()).unwrap();
        let at_zero = tail_supremum(&c, 0.4, &u, 0.0).unwrap();
        assert!((at_zero[0] - full[0].value).abs() <= 1e-14 * full[0].value);
        assert!((at_zero[1] - full[1].value).abs() <= 1e-14 * full[1].value);
        assert_eq!(tail_supremum(&c, 0.4, &u, 2.0).unwrap(), [0.0, 0.0]);
        assert_eq!(tail_supremum(&c, 0.4, &u, 7.5).unwrap(), [0.0, 0.0]);
        assert!(tail_supremum(&c, 0.4, &u, -1.0).is_err());
    }

    #[test]
    fn invalid_step_functions() {
        let v = Vector::from(vec![1.0]);
        assert!(StepFunction::new(vec![0.0, 0.0], vec![v.clone()]).is_err());
        assert!(StepFunction::new(vec![0.0], vec![v.clone()]).is_err());
        assert!(StepFunction::new(vec![1.0, 0.0], vec![v.clone()]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0, 2.0], vec![v, Vector::from(vec![1.0, 2.0])]).is_err());
        assert!(j_seminorm_continuous(&abs_couple(), 1.0, &StepFunction::zero(), None).is_err());
    }

    #[test]
    fn grid_shapes() {
        let g = ContinuousGrid {
            support_r: 1.0,
            cells_per_unit: 2,
        };
        assert_eq!(g.breakpoints().unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(ContinuousGrid {
            support_r: 0.0,
            cells_per_unit: 1
        }
        .breakpoints()
        .is_err());
    }

    #[test]
    fn pm_continuous_examples() {
        let n = NormSpec::new(Exponent::Finite(2.0), vec![1.0, 2.0]).unwrap();
        let c = Couple::new(n.clone(), n.clone()).unwrap();
        let cfg = SolverCfg {
            iters: 200,
            ..SolverCfg::default()
        };
        let grid = ContinuousGrid::default();
        let a = [0.5, -1.0];
        let b = pm_norm_continuous(&c, 0.5, &a, &grid, &cfg).unwrap();
        let norm_a = n.eval(&a).unwrap();
        // `a·χ_[0,1)` lies on the grid and has seminorm `2(e^{1/2} - 1)‖a‖`;
        // narrow cells at the origin approach `‖a‖` from above.
        let on_grid = 2.0 * (0.5f64.exp() - 1.0) * norm_a;
        assert!(b.upper.value <= on_grid, "{} vs {}", b.upper.value, on_grid);
        assert!(b.upper.value >= norm_a);
        assert!(b.lower.value >= norm_a / 2.0 * (1.0 - 1e-9));
        let u = b.step_function().unwrap();
        let total = u.integral(2);
        assert!(total.iter().zip(a).all(|(x, y)| (x - y).abs() < 1e-12));

        let zero = pm_norm_continuous(&c, 0.5, &[0.0, 0.0], &grid, &cfg).unwrap();
        assert_eq!((zero.upper.value, zero.lower.value), (0.0, 0.0));

        let c = Couple::new(
            NormSpec::new(Exponent::Finite(1.0), vec![1.0]).unwrap(),
            NormSpec::new(Exponent::Finite(1.0), vec![4.0]).unwrap(),
        )
        .unwrap();
        let b = pm_norm_continuous(&c, 0.5, &[1.0], &grid, &cfg).unwrap();
        assert!(b.lower.value >= 2.0 - 1e-15);
        assert!(b.upper.value >= b.lower.value);
    }
}
