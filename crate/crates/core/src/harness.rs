//! Transfers between sequences and step functions, and the checks built on
//! them: per-certificate sandwich bounds between the discrete and continuous
//! plus-minus norms, the small-`r` limit scan, and comparison with the
//! complex reference norm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::banach::{check_vector, complex_reference_norm, Couple, Vector};
use crate::check::BoundCheck;
use crate::continuous::{j_seminorm_continuous, pm_norm_continuous, pm_norm_continuous_warm, ContinuousGrid, StepFunction};
use crate::discrete::{j_norm_discrete, j_norm_discrete_with, pm_norm_discrete, pm_norm_discrete_warm, ThetaR};
use crate::error::{Error, Result};
use crate::estimate::Bracket;
use crate::represent::SolverCfg;
use crate::seq::FiniteSeq;
use crate::signs::EnumOptions;

/// Tolerance on exact-arithmetic identities (mass, round trip).
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Settings shared by the harness operations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessCfg {
    pub solver: SolverCfg,
    pub grid: ContinuousGrid,
    /// Discrete windows swept by [`embedding_check`].
    pub windows: Vec<u64>,
}

impl Default for HarnessCfg {
    fn default() -> Self {
        HarnessCfg {
            solver: SolverCfg::default(),
            grid: ContinuousGrid::default(),
            windows: vec![2, 4, 8],
        }
    }
}

/// `r·n`, the left end of grid cell `n`.
fn grid_point(r: f64, n: i64) -> f64 {
    r * n as f64
}

/// Index `n` with `r·n ≤ t < r·(n+1)`, using the same products as [`grid_point`].
fn grid_cell(r: f64, t: f64) -> i64 {
    let mut n = (t / r).floor() as i64;
    while grid_point(r, n + 1) <= t {
        n += 1;
    }
    while grid_point(r, n) > t {
        n -= 1;
    }
    n
}

/// `u = (1/r) Σ_n χ_{[rn, r(n+1))} a_n`.
pub fn discretize_to_continuous(tr: &ThetaR, s: &FiniteSeq) -> Result<StepFunction> {
    let r = tr.r();
    let support = s.support();
    let (Some(&lo), Some(&hi)) = (support.first(), support.last()) else {
        return Ok(StepFunction::zero());
    };
    let d = s.dim().expect("nonzero sequence has a dimension");
    let breakpoints = (lo..=hi + 1).map(|n| grid_point(r, n)).collect();
    let values = (lo..=hi).map(|n| s.term_or_zero(n, d).scaled(1.0 / r)).collect();
    StepFunction::new(breakpoints, values)
}

/// `a_n = ∫_{rn}^{r(n+1)} u`, after splitting the cells of `u` on the grid.
pub fn continuize_to_discrete(tr: &ThetaR, u: &StepFunction) -> Result<FiniteSeq> {
    let r = tr.r();
    let Some(d) = u.dim() else {
        return Ok(FiniteSeq::zero(0));
    };
    let bp = u.breakpoints();
    let first = grid_cell(r, bp[0]);
    let last = grid_cell(r, bp[bp.len() - 1]);
    let cuts: Vec<f64> = (first..=last + 1).map(|n| grid_point(r, n)).collect();
    let split = u.refined(&cuts);
    let mut terms: BTreeMap<i64, Vector> = BTreeMap::new();
    for (a, b, v) in split.cells() {
        terms
            .entry(grid_cell(r, a))
            .or_insert_with(|| Vector::zeros(d))
            .add_scaled(b - a, v);
    }
    FiniteSeq::from_terms(terms)
}

/// `‖image‖ ≤ constant · ‖source‖` for one concrete transfer, with the mass
/// discrepancy `max_i |Σ source − Σ image|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferCheck {
    pub source_norm: f64,
    pub image_norm: f64,
    pub constant: f64,
    pub bound: BoundCheck,
    pub mass_error: f64,
}

impl TransferCheck {
    fn new(source_norm: f64, image_norm: f64, constant: f64, mass_error: f64) -> Self {
        TransferCheck {
            source_norm,
            image_norm,
            constant,
            bound: BoundCheck::certified(image_norm, constant * source_norm),
            mass_error,
        }
    }

    /// Measured `‖image‖ / ‖source‖`.
    pub fn ratio(&self) -> f64 {
        if self.source_norm == 0.0 {
            0.0
        } else {
            self.image_norm / self.source_norm
        }
    }

    pub fn holds(&self, scale: f64) -> bool {
        self.bound.holds && self.mass_error <= IDENTITY_TOLERANCE * scale.max(1.0)
    }
}

fn max_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

/// `‖discretize(s)‖_J ≤ e^{(1-θ)r} ‖s‖_{J(θ,r)}`.
pub fn check_discretize(c: &Couple, tr: &ThetaR, s: &FiniteSeq) -> Result<(StepFunction, TransferCheck)> {
    s.check_dim(c.dim())?;
    let u = discretize_to_continuous(tr, s)?;
    let source = j_norm_discrete(c, tr, s)?.value;
    let image = j_seminorm_continuous(c, tr.theta(), &u, None)?.value;
    let mass = max_diff(&s.sum(c.dim()), &u.integral(c.dim()));
    let constant = ((1.0 - tr.theta()) * tr.r()).exp();
    Ok((u, TransferCheck::new(source, image, constant, mass)))
}

/// `‖continuize(u)‖_{J(θ,r)} ≤ e^{rθ} ‖u‖_J`.
pub fn check_continuize(c: &Couple, tr: &ThetaR, u: &StepFunction) -> Result<(FiniteSeq, TransferCheck)> {
    u.check_dim(c.dim())?;
    let s = continuize_to_discrete(tr, u)?;
    let source = j_seminorm_continuous(c, tr.theta(), u, None)?.value;
    let image = j_norm_discrete(c, tr, &s)?.value;
    let mass = max_diff(&u.integral(c.dim()), &s.sum(c.dim()));
    let constant = (tr.r() * tr.theta()).exp();
    Ok((s, TransferCheck::new(source, image, constant, mass)))
}

/// `e^{-rθ}` and `e^{(1-θ)r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichConstants {
    pub lower: f64,
    pub upper: f64,
}

impl SandwichConstants {
    pub fn new(theta: f64, r: f64) -> Self {
        SandwichConstants {
            lower: (-r * theta).exp(),
            upper: ((1.0 - theta) * r).exp(),
        }
    }

    /// `e^{(1-θ)r} - e^{-rθ}`
    pub fn width_factor(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRatios {
    /// `U_0 / U_r`
    pub continuous_over_discrete: f64,
    /// `‖discretize(s)‖_J / ‖s‖_J` for the final discrete certificate.
    pub discretize: f64,
    /// `‖continuize(u)‖_J / ‖u‖_J` for the final continuous certificate.
    pub continuize: f64,
}

/// Both plus-minus norms of one vector and the transfers between their
/// certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub theta: f64,
    pub r: f64,
    #[serde(rename = "U_r")]
    pub u_r: f64,
    #[serde(rename = "U_0")]
    pub u_0: f64,
    pub lower_r: f64,
    pub lower_0: f64,
    pub constants: SandwichConstants,
    pub ratios: EquivalenceRatios,
    pub discretize: TransferCheck,
    pub continuize: TransferCheck,
    /// `e^{-rθ} U_r ≤ U_0`
    pub sandwich_lower: BoundCheck,
    /// `U_0 ≤ e^{(1-θ)r} U_r`
    pub sandwich_upper: BoundCheck,
    /// Certificate exchanges performed before both transfers stopped improving.
    pub rounds: usize,
    pub pass: bool,
}

const MAX_EXCHANGE_ROUNDS: usize = 8;

/// Solves both problems, then repeatedly transfers each certificate to the
/// other side, keeping whichever representation is smaller. Once neither
/// transfer improves, the per-certificate bounds on the final pair give both
/// sides of the sandwich.
pub fn verify_equivalence(c: &Couple, theta: f64, r: f64, a: &[f64], cfg: &HarnessCfg) -> Result<EquivalenceReport> {
    let tr = ThetaR::new(theta, r)?;
    check_vector(c.dim(), a)?;
    let discrete = pm_norm_discrete(c, &tr, a, &cfg.solver)?;
    let continuous = pm_norm_continuous(c, theta, a, &cfg.grid, &cfg.solver)?;
    let mut s_best = discrete.sequence().cloned().unwrap_or_else(|| FiniteSeq::zero(0));
    let mut u_best = continuous.step_function().cloned().unwrap_or_else(StepFunction::zero);
    let mut u_r = discrete.upper.value;
    let mut u_0 = continuous.upper.value;

    let mut rounds = 0;
    let (down, up) = loop {
        rounds += 1;
        let (u, down) = check_discretize(c, &tr, &s_best)?;
        let (s, up) = check_continuize(c, &tr, &u_best)?;
        let mut improved = false;
        if down.image_norm < u_0 {
            u_0 = down.image_norm;
            u_best = u;
            improved = true;
        }
        if up.image_norm < u_r {
            u_r = up.image_norm;
            s_best = s;
            improved = true;
        }
        if !improved || rounds >= MAX_EXCHANGE_ROUNDS {
            if improved {
                break (check_discretize(c, &tr, &s_best)?.1, check_continuize(c, &tr, &u_best)?.1);
            }
            break (down, up);
        }
    };

    let constants = SandwichConstants::new(theta, r);
    let sandwich_lower = BoundCheck::certified(constants.lower * u_r, u_0);
    let sandwich_upper = BoundCheck::certified(u_0, constants.upper * u_r);
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pass = down.holds(scale) && up.holds(scale) && sandwich_lower.holds && sandwich_upper.holds;
    Ok(EquivalenceReport {
        theta,
        r,
        u_r,
        u_0,
        lower_r: discrete.lower.value,
        lower_0: continuous.lower.value,
        constants,
        ratios: EquivalenceRatios {
            continuous_over_discrete: if u_r == 0.0 { 0.0 } else { u_0 / u_r },
            discretize: down.ratio(),
            continuize: up.ratio(),
        },
        discretize: down,
        continuize: up,
        sandwich_lower,
        sandwich_upper,
        rounds,
        pass,
    })
}

/// One row of [`limit_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub r: f64,
    #[serde(rename = "U_r")]
    pub u_r: f64,
    /// `‖discretize(s*_r)‖_J`, a continuous estimate built from the discrete certificate.
    pub transferred: f64,
    /// `e^{-rθ} U_r`
    pub lo: f64,
    /// `e^{(1-θ)r} U_r`
    pub hi: f64,
    pub width: f64,
    pub width_factor: f64,
    /// `e^{-rθ} ‖continuize(u*)‖_{J(θ,r)}`, below the continuous upper value.
    pub continuous_floor: f64,
    pub contained: bool,
}

/// Continuous upper value and one row per `r`; each row brackets the
/// transferred estimate by `[e^{-rθ}U_r, e^{(1-θ)r}U_r]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitScan {
    pub theta: f64,
    pub continuous_upper: f64,
    pub rows: Vec<LimitRow>,
}

impl LimitScan {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|row| row.contained)
    }
}

pub fn limit_scan(c: &Couple, theta: f64, a: &[f64], r_values: &[f64], cfg: &HarnessCfg) -> Result<LimitScan> {
    check_vector(c.dim(), a)?;
    if r_values.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument("r values must be strictly decreasing".into()));
    }
    let continuous: Bracket = pm_norm_continuous(c, theta, a, &cfg.grid, &cfg.solver)?;
    let u_star = continuous.step_function().cloned().unwrap_or_else(StepFunction::zero);
    let fallback = EnumOptions {
        sampling_fallback: true,
        ..EnumOptions::default()
    };
    let rows = r_values
        .iter()
        .map(|&r| {
            let tr = ThetaR::new(theta, r)?;
            let discrete = pm_norm_discrete(c, &tr, a, &cfg.solver)?;
            let s_star = discrete.sequence().cloned().unwrap_or_else(|| FiniteSeq::zero(0));
            let u_r = discrete.upper.value;
            let (_, down) = check_discretize(c, &tr, &s_star)?;
            // Only a lower value of the continuized norm is needed here, so
            // long grids may fall back to vertex ascent.
            let image = continuize_to_discrete(&tr, &u_star)?;
            let image_norm = j_norm_discrete_with(c, &tr, &image, None, &fallback)?.value;
            let constants = SandwichConstants::new(theta, r);
            let lo = constants.lower * u_r;
            let hi = constants.upper * u_r;
            let continuous_floor = constants.lower * image_norm;
            let contained = BoundCheck::certified(lo, down.image_norm).holds
                && BoundCheck::certified(down.image_norm, hi).holds
                && BoundCheck::certified(continuous_floor, continuous.upper.value).holds;
            Ok(LimitRow {
                r,
                u_r,
                transferred: down.image_norm,
                lo,
                hi,
                width: hi - lo,
                width_factor: constants.width_factor(),
                continuous_floor,
                contained,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitScan {
        theta,
        continuous_upper: continuous.upper.value,
        rows,
    })
}

/// One plus-minus upper value against the complex reference norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingStep {
    /// Discrete window, or cells per unit for the continuous norm.
    pub size: u64,
    pub upper: f64,
    pub ratio: f64,
    pub bound: BoundCheck,
}

/// Plus-minus upper values along a sequence of growing windows (or refining
/// grids when `r = 0`), compared with the complex reference norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub theta: f64,
    pub r: f64,
    pub reference: f64,
    /// Whether reference ≤ plus-minus norm is a theorem for this couple over
    /// the reals; otherwise the comparison is only reported.
    pub guaranteed: bool,
    pub trend: Vec<EmbeddingStep>,
    /// Continuous upper value on `cfg.grid` when `r > 0`.
    pub continuous: Option<EmbeddingStep>,
    pub trend_nonincreasing: bool,
    pub pass: bool,
}

/// Slack allowed on the ratio trend.
pub const TREND_TOLERANCE: f64 = 1e-6;

pub fn embedding_check(c: &Couple, theta: f64, r: f64, a: &[f64], cfg: &HarnessCfg) -> Result<EmbeddingReport> {
    if !c.equal_exponents() {
        return Err(Error::UnequalExponents {
            p0: c.n0().p().to_string(),
            p1: c.n1().p().to_string(),
        });
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::NonPositiveR(r));
    }
    let reference = complex_reference_norm(c, theta, a)?;
    let step = |size: u64, upper: f64| EmbeddingStep {
        size,
        upper,
        ratio: if reference == 0.0 { if upper == 0.0 { 1.0 } else { f64::INFINITY } } else { upper / reference },
        bound: BoundCheck::certified(reference, upper),
    };
    if cfg.windows.is_empty() {
        return Err(Error::InvalidArgument("at least one window is required".into()));
    }

    let mut trend = Vec::new();
    let mut continuous = None;
    if r > 0.0 {
        let tr = ThetaR::new(theta, r)?;
        let mut warm: Option<FiniteSeq> = None;
        for &window in &cfg.windows {
            let solver = SolverCfg { window, ..cfg.solver.clone() };
            let b = pm_norm_discrete_warm(c, &tr, a, &solver, warm.as_ref())?;
            trend.push(step(window, b.upper.value));
            warm = b.sequence().cloned();
        }
        let b = pm_norm_continuous(c, theta, a, &cfg.grid, &cfg.solver)?;
        continuous = Some(step(u64::from(cfg.grid.cells_per_unit), b.upper.value));
    } else {
        let mut warm: Option<StepFunction> = None;
        for k in 0..cfg.windows.len() {
            let grid = ContinuousGrid {
                cells_per_unit: cfg.grid.cells_per_unit << k,
                ..cfg.grid.clone()
            };
            let b = pm_norm_continuous_warm(c, theta, a, &grid, &cfg.solver, warm.as_ref())?;
            trend.push(step(u64::from(grid.cells_per_unit), b.upper.value));
            warm = b.step_function().cloned();
        }
    }

    let trend_nonincreasing = trend
        .windows(2)
        .all(|w| w[1].ratio <= w[0].ratio + TREND_TOLERANCE);
    let bounds_hold = trend.iter().chain(&continuous).all(|s| s.bound.holds);
    Ok(EmbeddingReport {
        theta,
        r,
        reference,
        guaranteed: c.reference_bounds_real_norms(),
        pass: trend_nonincreasing && (bounds_hold || !c.reference_bounds_real_norms()),
        trend,
        continuous,
        trend_nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{Exponent, NormSpec};

    fn seq(terms: &[(i64, &[f64])]) -> FiniteSeq {
        FiniteSeq::from_terms(terms.iter().map(|(n, v)| (*n, Vector::from(v.to_vec())))).unwrap()
    }

    fn spec(p: f64, w: &[f64]) -> NormSpec {
        NormSpec::new(Exponent::new(p).unwrap(), w.to_vec()).unwrap()
    }

    fn light() -> HarnessCfg {
        HarnessCfg {
            solver: SolverCfg {
                iters: 150,
                restarts: 2,
                ..SolverCfg::default()
            },
            ..HarnessCfg::default()
        }
    }

    #[test]
    fn discretize_single_term() {
        let tr = ThetaR::new(0.5, 1.0).unwrap();
        let v = Vector::from(vec![2.0, -1.0]);
        let u = discretize_to_continuous(&tr, &seq(&[(0, &[2.0, -1.0])])).unwrap();
        assert_eq!(u, StepFunction::indicator(0.0, 1.0, v).unwrap());
        assert_eq!(discretize_to_continuous(&tr, &FiniteSeq::zero(3)).unwrap(), StepFunction::zero());
    }

    #[test]
    fn continuize_unit_cell() {
        let tr = ThetaR::new(0.5, 1.0).unwrap();
        let u = StepFunction::indicator(0.0, 1.0, Vector::from(vec![3.0])).unwrap();
        assert_eq!(continuize_to_discrete(&tr, &u).unwrap(), seq(&[(0, &[3.0])]));
    }

    #[test]
    fn grid_cell_at_breakpoints() {
        for r in [0.1, 0.3, 0.7, 1.3] {
            for n in -40..40 {
                assert_eq!(grid_cell(r, grid_point(r, n)), n);
            }
        }
    }

    #[test]
    fn round_trip_and_constants() {
        let c = Couple::new(spec(2.0, &[1.0, 2.0]), spec(1.0, &[0.5, 3.0])).unwrap();
        let tr = ThetaR::new(0.3, 0.7).unwrap();
        let s = seq(&[
            (-3, &[0.5, 1.0]),
            (-2, &[-1.0, 0.2]),
            (-1, &[0.3, 0.3]),
            (0, &[2.0, -1.0]),
            (1, &[0.0, 0.7]),
            (2, &[-0.4, 0.1]),
            (3, &[1.1, -0.9]),
        ]);
        let (u, down) = check_discretize(&c, &tr, &s).unwrap();
        assert!(down.holds(2.0), "{down:?}");
        assert!(down.ratio() <= 0.49f64.exp() * (1.0 + 1e-9));
        let back = continuize_to_discrete(&tr, &u).unwrap();
        assert!(back.max_deviation(&s) <= 1e-12);

        let tr = ThetaR::new(0.5, 1.0).unwrap();
        let u = StepFunction::new(
            vec![-1.3, -0.2, 0.4, 1.9],
            vec![Vector::from(vec![1.0, 0.5]), Vector::from(vec![-0.3, 2.0]), Vector::from(vec![0.8, -0.1])],
        )
        .unwrap();
        let (_, up) = check_continuize(&c, &tr, &u).unwrap();
        assert!(up.holds(2.0), "{up:?}");
        assert!(up.ratio() <= 0.5f64.exp() * (1.0 + 1e-9));
    }

    #[test]
    fn equivalence_zero_vector() {
        let c = Couple::new(spec(2.0, &[1.0, 2.0]), spec(2.0, &[3.0, 1.0])).unwrap();
        let report = verify_equivalence(&c, 0.5, 0.5, &[0.0, 0.0], &light()).unwrap();
        assert!(report.pass);
        assert_eq!((report.u_r, report.u_0), (0.0, 0.0));
        assert_eq!(report.constants, SandwichConstants::new(0.5, 0.5));
    }

    #[test]
    fn equivalence_example() {
        let c = Couple::new(spec(2.0, &[1.0, 2.0]), spec(1.5, &[3.0, 0.5])).unwrap();
        let report = verify_equivalence(&c, 0.3, 1.0, &[1.0, -0.5], &light()).unwrap();
        assert!(report.pass, "{report:?}");
        assert!((report.constants.lower - (-0.3f64).exp()).abs() < 1e-15);
        assert!((report.constants.upper - 0.7f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn width_factor_arithmetic() {
        let w = SandwichConstants::new(0.5, 0.25).width_factor();
        assert!((w - 0.25065).abs() < 1e-5);
    }

    #[test]
    fn limit_scan_brackets() {
        let c = Couple::new(spec(1.0, &[1.0]), spec(1.0, &[4.0])).unwrap();
        let scan = limit_scan(&c, 0.5, &[1.0], &[1.0, 0.5, 0.25, 0.125], &light()).unwrap();
        assert_eq!(scan.rows.len(), 4);
        assert!(scan.pass(), "{scan:?}");
        assert!(scan.rows.windows(2).all(|w| w[1].width_factor < w[0].width_factor));
        let zero = limit_scan(&c, 0.5, &[0.0], &[1.0, 0.5], &light()).unwrap();
        assert!(zero.rows.iter().all(|row| row.u_r == 0.0 && row.hi == 0.0 && row.transferred == 0.0));
        assert!(limit_scan(&c, 0.5, &[1.0], &[0.5, 1.0], &light()).is_err());
    }

    #[test]
    fn embedding_examples() {
        let c = Couple::new(spec(1.0, &[1.0]), spec(1.0, &[4.0])).unwrap();
        let report = embedding_check(&c, 0.5, 0.5, &[1.0], &light()).unwrap();
        assert!((report.reference - 2.0).abs() < 1e-15);
        assert!(report.guaranteed && report.pass, "{report:?}");

        let n = spec(f64::INFINITY, &[1.0, 2.0]);
        let c = Couple::new(n.clone(), n.clone()).unwrap();
        let report = embedding_check(&c, 0.4, 0.0, &[0.5, -1.0], &light()).unwrap();
        assert!((report.reference - n.eval(&[0.5, -1.0]).unwrap()).abs() < 1e-15);
        assert!(report.pass, "{report:?}");

        let c = Couple::new(spec(1.0, &[1.0]), spec(2.0, &[1.0])).unwrap();
        assert!(matches!(
            embedding_check(&c, 0.5, 1.0, &[1.0], &light()),
            Err(Error::UnequalExponents { .. })
        ));
    }

    /// Over the reals the complex reference norm is not a lower bound once
    /// `p < ∞` and `d ≥ 2`: this representation of `(1, 1)` beats it.
    #[test]
    fn reference_can_exceed_real_plus_minus_norm() {
        let c = Couple::new(spec(1.0, &[1.0, 2.0]), spec(1.0, &[3.0, 0.5])).unwrap();
        let tr = ThetaR::new(0.5, 0.5).unwrap();
        let s = seq(&[
            (-3, &[0.4028927936611259, -0.2014463968305633]),
            (-2, &[0.22631036570119992, 0.11315518285059999]),
            (-1, &[0.3621283739170195, 0.18106418695850973]),
            (2, &[0.07993648561211547, 0.47961891367268833]),
            (3, &[-0.07126801889146082, 0.42760811334876525]),
        ]);
        let total = s.sum(2);
        assert!(max_diff(&total, &[1.0, 1.0]) < 1e-12);
        let j = j_norm_discrete(&c, &tr, &s).unwrap().value;
        let reference = complex_reference_norm(&c, 0.5, &[1.0, 1.0]).unwrap();
        assert!(j < reference - 0.05, "{j} vs {reference}");
        assert!(!c.reference_bounds_real_norms());
        let report = embedding_check(&c, 0.5, 0.5, &[1.0, 1.0], &light()).unwrap();
        assert!(!report.guaranteed);
    }
}
