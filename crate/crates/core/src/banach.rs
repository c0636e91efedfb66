//! Weighted ℓ^p spaces on ℝ^d and couples of them.
//!
//! A [`NormSpec`] is the norm `(Σ_i (w_i |v_i|)^p)^{1/p}` (or `max_i w_i |v_i|`
//! for `p = ∞`). A [`Couple`] pairs two such norms over the same coordinates;
//! since the dimension is finite every vector lies in both spaces, so the sum
//! and intersection spaces differ from the summands only in their norms.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::estimate::EstimateKind;

/// Exponent of a weighted ℓ^p norm. `∞` is its own variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidNorm(format!("exponent must be >= 1 or inf, got {p}")))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(p) => Exponent::new(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
                other => other
                    .parse::<f64>()
                    .map_err(|_| serde::de::Error::custom(format!("unrecognised exponent {s:?}")))
                    .and_then(|p| Exponent::new(p).map_err(serde::de::Error::custom)),
            },
        }
    }
}

/// A point of ℝ^d.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|x| c * x).collect())
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: f64, other: &[f64]) {
        debug_assert_eq!(self.0.len(), other.len());
        for (x, y) in self.0.iter_mut().zip(other) {
            *x += c * y;
        }
    }

    pub fn sub(&self, other: &[f64]) -> Vector {
        Vector(self.0.iter().zip(other).map(|(x, y)| x - y).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(entries: Vec<f64>) -> Self {
        Vector(entries)
    }
}

impl FromIterator<f64> for Vector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

/// Checks length and finiteness of `v` against a dimension.
pub fn check_vector(dim: usize, v: &[f64]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
struct NormSpecRepr {
    dim: usize,
    p: Exponent,
    weights: Vec<f64>,
}

/// Weighted ℓ^p norm on ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpecRepr", into = "NormSpecRepr")]
pub struct NormSpec {
    p: Exponent,
    weights: Vec<f64>,
}

impl TryFrom<NormSpecRepr> for NormSpec {
    type Error = Error;

    fn try_from(repr: NormSpecRepr) -> Result<Self> {
        if repr.weights.len() != repr.dim {
            return Err(Error::DimensionMismatch {
                expected: repr.dim,
                found: repr.weights.len(),
            });
        }
        NormSpec::new(repr.p, repr.weights)
    }
}

impl From<NormSpec> for NormSpecRepr {
    fn from(n: NormSpec) -> Self {
        NormSpecRepr {
            dim: n.weights.len(),
            p: n.p,
            weights: n.weights,
        }
    }
}

impl NormSpec {
    pub fn new(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidNorm("dimension must be at least 1".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidNorm(format!("weights must be finite and positive, got {w}")));
        }
        if let Exponent::Finite(q) = p {
            Exponent::new(q)?;
        }
        Ok(NormSpec { p, weights })
    }

    /// Unweighted ℓ^p on ℝ^dim.
    pub fn unweighted(p: Exponent, dim: usize) -> Result<Self> {
        NormSpec::new(p, vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The norm factors through `max_i w_i |·|` over coordinates, so sign
    /// suprema separate coordinatewise.
    pub fn is_separable(&self) -> bool {
        self.p.is_infinite() || self.dim() == 1
    }

    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        check_vector(self.dim(), v)?;
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[f64]) -> f64 {
        self.from_power_sum(self.power_sum(v))
    }

    /// Monotone surrogate of the norm: `Σ (w|v|)^p` for finite `p`, the norm
    /// itself for `p = ∞`. Comparisons in sign searches use this to skip the root.
    pub(crate) fn power_sum(&self, v: &[f64]) -> f64 {
        let w = &self.weights;
        match self.p {
            Exponent::Infinity => v.iter().zip(w).fold(0.0, |m, (x, w)| m.max(w * x.abs())),
            Exponent::Finite(p) if p == 1.0 => v.iter().zip(w).map(|(x, w)| w * x.abs()).sum(),
            Exponent::Finite(p) if p == 2.0 => v.iter().zip(w).map(|(x, w)| (w * x) * (w * x)).sum(),
            Exponent::Finite(p) => v.iter().zip(w).map(|(x, w)| (w * x.abs()).powf(p)).sum(),
        }
    }

    pub(crate) fn from_power_sum(&self, s: f64) -> f64 {
        match self.p {
            Exponent::Infinity => s,
            Exponent::Finite(p) if p == 1.0 => s,
            Exponent::Finite(p) if p == 2.0 => s.sqrt(),
            Exponent::Finite(p) => s.powf(1.0 / p),
        }
    }

    /// Dual norm `sup{g·v : ‖v‖ ≤ 1} = ‖(g_i / w_i)‖_q`.
    pub fn dual_norm(&self, g: &[f64]) -> f64 {
        let scaled: Vec<f64> = g.iter().zip(&self.weights).map(|(g, w)| g / w).collect();
        match self.p.conjugate() {
            Exponent::Infinity => scaled.iter().fold(0.0, |m, x| m.max(x.abs())),
            Exponent::Finite(q) if q == 1.0 => scaled.iter().map(|x| x.abs()).sum(),
            Exponent::Finite(q) => scaled.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q),
        }
    }

    /// A norming functional for `z`: `g` with dual norm 1 and `g·z = ‖z‖`
    /// (hence a subgradient of the norm at `z`). Returns the zero functional
    /// at `z = 0`, which is also a subgradient there.
    pub fn dual_vector(&self, z: &[f64]) -> Vec<f64> {
        let w = &self.weights;
        let norm = self.eval_unchecked(z);
        if norm == 0.0 {
            return vec![0.0; z.len()];
        }
        match self.p {
            Exponent::Infinity => {
                let mut best = 0;
                for i in 1..z.len() {
                    if w[i] * z[i].abs() > w[best] * z[best].abs() {
                        best = i;
                    }
                }
                let mut g = vec![0.0; z.len()];
                g[best] = w[best] * z[best].signum();
                g
            }
            Exponent::Finite(p) if p == 1.0 => z
                .iter()
                .zip(w)
                .map(|(x, w)| if *x == 0.0 { 0.0 } else { w * x.signum() })
                .collect(),
            Exponent::Finite(p) => z
                .iter()
                .zip(w)
                .map(|(x, w)| {
                    if *x == 0.0 {
                        0.0
                    } else {
                        w * x.signum() * (w * x.abs() / norm).powf(p - 1.0)
                    }
                })
                .collect(),
        }
    }
}

#[derive(Deserialize)]
struct CoupleRepr {
    n0: NormSpec,
    n1: NormSpec,
}

/// Two norms on the same ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoupleRepr")]
pub struct Couple {
    n0: NormSpec,
    n1: NormSpec,
}

impl TryFrom<CoupleRepr> for Couple {
    type Error = Error;

    fn try_from(repr: CoupleRepr) -> Result<Self> {
        Couple::new(repr.n0, repr.n1)
    }
}

impl Couple {
    pub fn new(n0: NormSpec, n1: NormSpec) -> Result<Self> {
        if n0.dim() != n1.dim() {
            return Err(Error::DimensionMismatch {
                expected: n0.dim(),
                found: n1.dim(),
            });
        }
        Ok(Couple { n0, n1 })
    }

    pub fn dim(&self) -> usize {
        self.n0.dim()
    }

    pub fn n0(&self) -> &NormSpec {
        &self.n0
    }

    pub fn n1(&self) -> &NormSpec {
        &self.n1
    }

    /// `A_0` for `j = 0`, `A_1` otherwise.
    pub fn space(&self, j: usize) -> &NormSpec {
        if j == 0 {
            &self.n0
        } else {
            &self.n1
        }
    }

    pub fn equal_exponents(&self) -> bool {
        self.n0.p == self.n1.p
    }

    /// Whether the closed-form reference norm is provably dominated by the
    /// real-scalar plus-minus norms. With real signs this holds when the
    /// sign suprema separate over coordinates (`p = ∞`, or `d = 1`); for
    /// finite `p` in dimension ≥ 2 the real norm can dip below it.
    pub fn reference_bounds_real_norms(&self) -> bool {
        self.equal_exponents() && (self.n0.p.is_infinite() || self.dim() == 1)
    }
}

pub fn norm_eval(n: &NormSpec, v: &[f64]) -> Result<f64> {
    n.eval(v)
}

pub fn intersection_norm(c: &Couple, v: &[f64]) -> Result<f64> {
    check_vector(c.dim(), v)?;
    Ok(c.n0.eval_unchecked(v).max(c.n1.eval_unchecked(v)))
}

/// Relative gap target for the iterative sum-norm split.
pub const SUM_NORM_GAP: f64 = 1e-6;

/// Bracket on `‖v‖_{A0+A1}` together with the decomposition that attains `upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumNorm {
    pub upper: f64,
    pub lower: f64,
    pub kind: EstimateKind,
    pub v0: Vector,
    pub v1: Vector,
}

impl SumNorm {
    pub fn value(&self) -> f64 {
        self.upper
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `inf{‖v0‖_0 + ‖v1‖_1 : v0 + v1 = v}`.
///
/// Both norms are lattice norms, so an optimal split keeps the signs of `v`
/// and shrinks coordinates: `v0 = s∘v` with `s ∈ [0,1]^d`. For `p ∈ {1, ∞}` on
/// both sides the problem collapses to a one-parameter piecewise-linear
/// minimisation solved at its breakpoints; otherwise a projected descent over
/// `s` gives the upper value and sampled norming functionals give the lower one.
pub fn sum_norm(c: &Couple, v: &[f64]) -> Result<SumNorm> {
    check_vector(c.dim(), v)?;
    let d = c.dim();
    if v.iter().all(|&x| x == 0.0) {
        return Ok(SumNorm {
            upper: 0.0,
            lower: 0.0,
            kind: EstimateKind::Exact,
            v0: Vector::zeros(d),
            v1: Vector::zeros(d),
        });
    }
    let closed = match (c.n0.p, c.n1.p) {
        (Exponent::Finite(p0), Exponent::Finite(p1)) if p0 == 1.0 && p1 == 1.0 => Some(split_l1_l1(c, v)),
        (Exponent::Finite(p0), Exponent::Infinity) if p0 == 1.0 => Some(split_l1_linf(c, v, false)),
        (Exponent::Infinity, Exponent::Finite(p1)) if p1 == 1.0 => Some(split_l1_linf(c, v, true)),
        (Exponent::Infinity, Exponent::Infinity) => Some(split_linf_linf(c, v)),
        _ => None,
    };
    if let Some(s) = closed {
        let (v0, v1) = apply_split(v, &s);
        let value = c.n0.eval_unchecked(&v0) + c.n1.eval_unchecked(&v1);
        return Ok(SumNorm {
            upper: value,
            lower: value,
            kind: EstimateKind::Exact,
            v0,
            v1,
        });
    }
    Ok(split_descent(c, v))
}

fn apply_split(v: &[f64], s: &[f64]) -> (Vector, Vector) {
    let v0: Vector = v.iter().zip(s).map(|(x, s)| s * x).collect();
    let v1 = Vector::from(v.to_vec()).sub(&v0);
    (v0, v1)
}

fn split_l1_l1(c: &Couple, v: &[f64]) -> Vec<f64> {
    let (w0, w1) = (c.n0.weights(), c.n1.weights());
    (0..v.len()).map(|i| if w0[i] <= w1[i] { 1.0 } else { 0.0 }).collect()
}

/// One side ℓ^1 (cost `Σ a_i x_i`), the other ℓ^∞ (cost `max_i b_i y_i`),
/// with `x_i + y_i = 1`. Fixing the ℓ^∞ level `t` forces `x_i = (1 - t/b_i)_+`,
/// leaving `t + Σ a_i (1 - t/b_i)_+`, convex and piecewise linear with kinks at
/// the `b_i`. Returns the ℓ^1 fraction `s` for `A_0` (flipped when `A_0` is ℓ^∞).
fn split_l1_linf(c: &Couple, v: &[f64], linf_first: bool) -> Vec<f64> {
    let (l1, linf) = if linf_first { (&c.n1, &c.n0) } else { (&c.n0, &c.n1) };
    let a: Vec<f64> = v.iter().zip(l1.weights()).map(|(x, w)| w * x.abs()).collect();
    let b: Vec<f64> = v.iter().zip(linf.weights()).map(|(x, w)| w * x.abs()).collect();
    let l1_fraction = |t: f64| -> Vec<f64> {
        b.iter().map(|&bi| if bi > 0.0 { (1.0 - t / bi).max(0.0) } else { 0.0 }).collect()
    };
    let cost = |t: f64| -> f64 { t + l1_fraction(t).iter().zip(&a).map(|(x, a)| a * x).sum::<f64>() };
    let mut best = (cost(0.0), 0.0);
    for &t in &b {
        let value = cost(t);
        if value < best.0 {
            best = (value, t);
        }
    }
    let x = l1_fraction(best.1);
    if linf_first {
        x.iter().map(|x| 1.0 - x).collect()
    } else {
        x
    }
}

/// Both sides ℓ^∞: with `A_1` level `t`, the `A_0` part is
/// `max_i a_i (1 - t/b_i)_+`. The total is convex piecewise linear in `t`; its
/// kinks sit at `t = b_i` and at crossings of two lines, all of which are tried.
fn split_linf_linf(c: &Couple, v: &[f64]) -> Vec<f64> {
    let a: Vec<f64> = v.iter().zip(c.n0.weights()).map(|(x, w)| w * x.abs()).collect();
    let b: Vec<f64> = v.iter().zip(c.n1.weights()).map(|(x, w)| w * x.abs()).collect();
    let fraction = |t: f64| -> Vec<f64> {
        b.iter().map(|&bi| if bi > 0.0 { (1.0 - t / bi).max(0.0) } else { 0.0 }).collect()
    };
    let cost = |t: f64| -> f64 { t + fraction(t).iter().zip(&a).fold(0.0_f64, |m, (x, a)| m.max(a * x)) };
    let t_max = b.iter().fold(0.0_f64, |m, x| m.max(*x));
    let mut candidates = vec![0.0, t_max];
    candidates.extend(b.iter().copied());
    for i in 0..a.len() {
        for k in (i + 1)..a.len() {
            if b[i] == 0.0 || b[k] == 0.0 {
                continue;
            }
            let slope = a[i] / b[i] - a[k] / b[k];
            if slope != 0.0 {
                let t = (a[i] - a[k]) / slope;
                if t > 0.0 && t < t_max {
                    candidates.push(t);
                }
            }
        }
    }
    let mut best = (f64::INFINITY, 0.0);
    for t in candidates {
        let value = cost(t);
        if value < best.0 {
            best = (value, t);
        }
    }
    fraction(best.1)
}

fn split_cost(c: &Couple, v: &[f64], s: &[f64]) -> f64 {
    let (v0, v1) = apply_split(v, s);
    c.n0.eval_unchecked(&v0) + c.n1.eval_unchecked(&v1)
}

fn split_gradient(c: &Couple, v: &[f64], s: &[f64]) -> Vec<f64> {
    let (v0, v1) = apply_split(v, s);
    let g0 = c.n0.dual_vector(&v0);
    let g1 = c.n1.dual_vector(&v1);
    (0..v.len()).map(|i| v[i] * (g0[i] - g1[i])).collect()
}

/// Best lower bound `g·v / max(‖g‖_0*, ‖g‖_1*)` over a few candidate functionals.
fn dual_lower_bound(c: &Couple, v: &[f64], s: &[f64]) -> f64 {
    let (v0, v1) = apply_split(v, s);
    let anchors = [
        c.n0.dual_vector(&v0),
        c.n1.dual_vector(&v1),
        c.n0.dual_vector(v),
        c.n1.dual_vector(v),
    ];
    let mut best = 0.0_f64;
    let mut try_functional = |g: &[f64]| {
        let scale = c.n0.dual_norm(g).max(c.n1.dual_norm(g));
        if scale > 0.0 {
            let value: f64 = g.iter().zip(v).map(|(g, x)| g * x).sum();
            best = best.max(value / scale);
        }
    };
    for g in &anchors {
        try_functional(g);
    }
    const MIXES: usize = 32;
    for (ga, gb) in [(&anchors[0], &anchors[1]), (&anchors[2], &anchors[3])] {
        for k in 1..MIXES {
            let lambda = k as f64 / MIXES as f64;
            let g: Vec<f64> = ga.iter().zip(gb.iter()).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
            try_functional(&g);
        }
    }
    best
}

fn split_descent(c: &Couple, v: &[f64]) -> SumNorm {
    let d = v.len();
    let (w0, w1) = (c.n0.weights(), c.n1.weights());
    let starts = [
        vec![0.0; d],
        vec![1.0; d],
        vec![0.5; d],
        (0..d).map(|i| if w0[i] <= w1[i] { 1.0 } else { 0.0 }).collect::<Vec<_>>(),
    ];
    let mut best_s = starts[0].clone();
    let mut best = split_cost(c, v, &best_s);
    for start in starts {
        let s = descend_split(c, v, start);
        let value = split_cost(c, v, &s);
        if value < best {
            best = value;
            best_s = s;
        }
    }
    let lower = dual_lower_bound(c, v, &best_s).min(best);
    let (v0, v1) = apply_split(v, &best_s);
    let kind = if best - lower <= SUM_NORM_GAP * best.max(f64::MIN_POSITIVE) {
        EstimateKind::Exact
    } else {
        EstimateKind::CertifiedUpper
    };
    SumNorm {
        upper: best,
        lower,
        kind,
        v0,
        v1,
    }
}

/// Projected gradient with backtracking on the box, then coordinatewise
/// golden-section polishing (the objective is convex in each coordinate).
fn descend_split(c: &Couple, v: &[f64], mut s: Vec<f64>) -> Vec<f64> {
    let mut value = split_cost(c, v, &s);
    let mut step = 1.0 / c.n0.eval_unchecked(v).max(c.n1.eval_unchecked(v)).max(1e-300);
    for _ in 0..400 {
        let g = split_gradient(c, v, &s);
        if g.iter().all(|x| *x == 0.0) {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let trial: Vec<f64> = s.iter().zip(&g).map(|(s, g)| (s - step * g).clamp(0.0, 1.0)).collect();
            let trial_value = split_cost(c, v, &trial);
            if trial_value < value {
                s = trial;
                value = trial_value;
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    for _ in 0..8 {
        let before = value;
        for i in 0..s.len() {
            let mut f = |x: f64| {
                let old = s[i];
                s[i] = x;
                let val = split_cost(c, v, &s);
                s[i] = old;
                val
            };
            let x = golden_min(&mut f, 0.0, 1.0, 80);
            let fx = f(x);
            if fx < value {
                s[i] = x;
                value = fx;
            }
        }
        if before - value <= 1e-15 * before {
            break;
        }
    }
    s
}

fn golden_min(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let ends = [(f(0.0), 0.0), (f(1.0), 1.0), (f(mid), mid)];
    ends.iter().fold(ends[2], |b, e| if e.0 < b.0 { *e } else { b }).1
}

/// Weighted ℓ^p with weights `w0^{1-θ} w1^θ`.
pub fn reference_spec(c: &Couple, theta: f64) -> Result<NormSpec> {
    if !c.equal_exponents() {
        return Err(Error::UnequalExponents {
            p0: c.n0.p.to_string(),
            p1: c.n1.p.to_string(),
        });
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let weights = c
        .n0
        .weights()
        .iter()
        .zip(c.n1.weights())
        .map(|(w0, w1)| w0.powf(1.0 - theta) * w1.powf(theta))
        .collect();
    NormSpec::new(c.n0.p, weights)
}

/// Closed-form complex interpolation norm of an equal-exponent weighted couple.
pub fn complex_reference_norm(c: &Couple, theta: f64, v: &[f64]) -> Result<f64> {
    check_vector(c.dim(), v)?;
    Ok(reference_spec(c, theta)?.eval_unchecked(v))
}
