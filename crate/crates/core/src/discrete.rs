//! The sequence space `J(θ, r)` and the discrete plus-minus norm
//! `‖a‖_{θ,(r)} = inf{ ‖{a_n}‖_{J(θ,r)} : Σ a_n = a }`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::banach::{check_vector, complex_reference_norm, sum_norm, Couple, SumNorm, Vector};
use crate::check::BoundCheck;
use crate::error::{Error, Result};
use crate::estimate::{BoundSource, Bracket, Certificate, EstimateKind, NormEstimate};
use crate::represent::{Problem, SolverCfg};
use crate::seq::FiniteSeq;
use crate::signs::EnumOptions;
use crate::uc::labelled_supremum;

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

#[derive(Deserialize)]
struct ThetaRRepr {
    theta: f64,
    r: f64,
}

/// Interpolation parameter `θ ∈ (0,1)` and discretisation step `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThetaRRepr")]
pub struct ThetaR {
    theta: f64,
    r: f64,
}

impl TryFrom<ThetaRRepr> for ThetaR {
    type Error = Error;

    fn try_from(repr: ThetaRRepr) -> Result<Self> {
        ThetaR::new(repr.theta, repr.r)
    }
}

impl ThetaR {
    pub fn new(theta: f64, r: f64) -> Result<Self> {
        check_theta(theta)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::NonPositiveR(r));
        }
        Ok(ThetaR { theta, r })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `e^{(j-θ) r n}`
    pub fn weight(&self, j: usize, n: i64) -> f64 {
        ((j as f64 - self.theta) * self.r * n as f64).exp()
    }
}

/// `‖{a_n}‖_{J(θ,r)} = max_j sup_λ ‖Σ λ_n e^{(j-θ)rn} a_n‖_{A_j}`.
pub fn j_norm_discrete(c: &Couple, tr: &ThetaR, s: &FiniteSeq) -> Result<NormEstimate> {
    j_norm_discrete_with(c, tr, s, None, &EnumOptions::default())
}

/// As [`j_norm_discrete`], with the sums restricted to indices in `subset`.
pub fn j_norm_discrete_with(
    c: &Couple,
    tr: &ThetaR,
    s: &FiniteSeq,
    subset: Option<&BTreeSet<i64>>,
    opts: &EnumOptions,
) -> Result<NormEstimate> {
    s.check_dim(c.dim())?;
    let mut best: Option<NormEstimate> = None;
    let mut kind = EstimateKind::Exact;
    for j in 0..2 {
        let terms = s
            .terms()
            .iter()
            .filter(|(n, _)| subset.is_none_or(|u| u.contains(n)))
            .map(|(&n, v)| (n, tr.weight(j, n), v.as_slice()));
        let (value, k, pattern) = labelled_supremum(c.space(j), terms, opts)?;
        if k != EstimateKind::Exact {
            kind = k;
        }
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(NormEstimate {
                value,
                kind,
                certificate: Certificate::Signs {
                    space: Some(j as u8),
                    pattern,
                },
            });
        }
    }
    let mut best = best.expect("two spaces evaluated");
    best.kind = kind;
    Ok(best)
}

/// Lower bounds shared by both plus-minus norms: half the sum norm, and the
/// complex reference norm where it provably applies to real scalars.
pub(crate) fn pm_lower_bound(c: &Couple, theta: f64, a: &[f64]) -> Result<NormEstimate> {
    let mut best = NormEstimate {
        value: 0.0,
        kind: EstimateKind::CertifiedLower,
        certificate: Certificate::Bound(BoundSource::Zero),
    };
    let half_sum = sum_norm(c, a)?.lower / 2.0;
    if half_sum > best.value {
        best.value = half_sum;
        best.certificate = Certificate::Bound(BoundSource::SumNorm);
    }
    if c.reference_bounds_real_norms() {
        let reference = complex_reference_norm(c, theta, a)?;
        if reference > best.value {
            best.value = reference;
            best.certificate = Certificate::Bound(BoundSource::ComplexReference);
        }
    }
    Ok(best)
}

/// Upper bound from the best representation found on `-window..=window`,
/// lower bound from [`pm_lower_bound`].
pub fn pm_norm_discrete(c: &Couple, tr: &ThetaR, a: &[f64], cfg: &SolverCfg) -> Result<Bracket> {
    pm_norm_discrete_warm(c, tr, a, cfg, None)
}

/// As [`pm_norm_discrete`], additionally starting from `warm` (a
/// representation of `a`, e.g. the certificate of a smaller window). The
/// returned upper value never exceeds the exact J-norm of `warm`.
pub fn pm_norm_discrete_warm(
    c: &Couple,
    tr: &ThetaR,
    a: &[f64],
    cfg: &SolverCfg,
    warm: Option<&FiniteSeq>,
) -> Result<Bracket> {
    check_vector(c.dim(), a)?;
    let d = c.dim();
    let lower = pm_lower_bound(c, tr.theta(), a)?;
    let n = cfg.window as i64;
    let indices: Vec<i64> = (-n..=n).collect();
    let m = indices.len();
    let pivot = n as usize;

    let problem = Problem {
        couple: c,
        coeffs: [
            indices.iter().map(|&k| tr.weight(0, k)).collect(),
            indices.iter().map(|&k| tr.weight(1, k)).collect(),
        ],
        masses: vec![1.0; m],
        target: a,
        pivot,
        opts: EnumOptions::default(),
    };

    let mut single = vec![0.0; m * d];
    single[pivot * d..(pivot + 1) * d].copy_from_slice(a);
    let total: f64 = indices.iter().map(|k| (-(k.abs() as f64)).exp()).sum();
    let geometric: Vec<f64> = indices
        .iter()
        .flat_map(|k| {
            let share = (-(k.abs() as f64)).exp() / total;
            a.iter().map(move |v| share * v)
        })
        .collect();

    let warm_flat = match warm {
        Some(w) => {
            w.check_dim(d)?;
            if w.window() > cfg.window {
                None
            } else {
                let mut x = vec![0.0; m * d];
                for (&k, v) in w.terms() {
                    let slot = (k + n) as usize;
                    x[slot * d..(slot + 1) * d].copy_from_slice(v);
                }
                Some(x)
            }
        }
        None => None,
    };

    let solution = problem.solve(&[single, geometric], warm_flat, cfg)?;
    let certificate = FiniteSeq::new(
        cfg.window,
        indices
            .iter()
            .zip(solution.x.chunks(d))
            .filter(|(_, v)| v.iter().any(|&x| x != 0.0))
            .map(|(&k, v)| (k, Vector::from(v.to_vec())))
            .collect(),
    )?;
    let mut upper = NormEstimate {
        value: j_norm_discrete(c, tr, &certificate)?.value,
        kind: EstimateKind::CertifiedUpper,
        certificate: Certificate::Sequence(certificate),
    };
    if let Some(w) = warm {
        let warm_value = j_norm_discrete(c, tr, w)?.value;
        if warm_value <= upper.value {
            upper.value = warm_value;
            upper.certificate = Certificate::Sequence(w.padded(cfg.window));
        }
    }
    let lower = NormEstimate {
        value: lower.value.min(upper.value),
        ..lower
    };
    Ok(Bracket { upper, lower })
}

/// `Σ a_n` together with the check `‖Σ a_n‖_{A0+A1} ≤ 2 ‖{a_n}‖_{J(θ,r)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationSum {
    pub sum: Vector,
    pub sum_norm: SumNorm,
    pub j_norm: f64,
    /// Certified upper value of the sum norm against `2 · j_norm`.
    pub bound: BoundCheck,
}

pub fn sum_of_representation(c: &Couple, tr: &ThetaR, s: &FiniteSeq) -> Result<RepresentationSum> {
    s.check_dim(c.dim())?;
    let sum = s.sum(c.dim());
    let sum_norm = sum_norm(c, &sum)?;
    let j_norm = j_norm_discrete(c, tr, s)?.value;
    let bound = BoundCheck::certified(sum_norm.upper, 2.0 * j_norm);
    Ok(RepresentationSum {
        sum,
        sum_norm,
        j_norm,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{intersection_norm, Exponent, NormSpec};

    fn spec(p: f64, w: &[f64]) -> NormSpec {
        NormSpec::new(Exponent::new(p).unwrap(), w.to_vec()).unwrap()
    }

    fn seq(terms: &[(i64, &[f64])]) -> FiniteSeq {
        FiniteSeq::from_terms(terms.iter().map(|(n, v)| (*n, Vector::from(v.to_vec())))).unwrap()
    }

    #[test]
    fn theta_r_validation() {
        assert_eq!(ThetaR::new(0.0, 1.0), Err(Error::ThetaOutOfRange(0.0)));
        assert_eq!(ThetaR::new(1.2, 1.0), Err(Error::ThetaOutOfRange(1.2)));
        assert_eq!(ThetaR::new(0.5, 0.0), Err(Error::NonPositiveR(0.0)));
        assert_eq!(ThetaR::new(0.5, -1.0), Err(Error::NonPositiveR(-1.0)));
        assert!(serde_json::from_str::<ThetaR>(r#"{"theta":0.5,"r":-1}"#).is_err());
    }

    #[test]
    fn single_term_gives_intersection_norm() {
        let c = Couple::new(spec(1.0, &[2.0]), spec(1.0, &[3.0])).unwrap();
        let tr = ThetaR::new(0.4, 0.8).unwrap();
        let s = seq(&[(0, &[1.0])]);
        assert_eq!(j_norm_discrete(&c, &tr, &s).unwrap().value, 3.0);
        assert_eq!(intersection_norm(&c, &[1.0]).unwrap(), 3.0);
    }

    #[test]
    fn ln2_example() {
        let c = Couple::new(spec(1.0, &[1.0]), spec(1.0, &[1.0])).unwrap();
        let tr = ThetaR::new(0.5, std::f64::consts::LN_2).unwrap();
        let s = seq(&[(0, &[1.0]), (1, &[1.0])]);
        let est = j_norm_discrete(&c, &tr, &s).unwrap();
        assert!((est.value - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(est.signs().unwrap().1, Some(1));
    }

    #[test]
    fn homogeneity() {
        let c = Couple::new(spec(2.0, &[1.0, 3.0]), spec(3.0, &[0.5, 1.0])).unwrap();
        let tr = ThetaR::new(0.3, 0.7).unwrap();
        let s = seq(&[(-1, &[1.0, -0.5]), (0, &[0.2, 0.4]), (2, &[-1.0, 1.0])]);
        let base = j_norm_discrete(&c, &tr, &s).unwrap().value;
        for k in [-2.5, 0.0, 0.5, 3.0] {
            let scaled = j_norm_discrete(&c, &tr, &s.scaled(k)).unwrap().value;
            assert!((scaled - k.abs() * base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn pm_bracket_examples() {
        let n = spec(2.0, &[1.0, 1.0]);
        let c = Couple::new(n.clone(), n).unwrap();
        let tr = ThetaR::new(0.5, 1.0).unwrap();
        let cfg = SolverCfg {
            iters: 200,
            ..SolverCfg::default()
        };
        let b = pm_norm_discrete(&c, &tr, &[3.0, 4.0], &cfg).unwrap();
        assert!(b.upper.value <= 5.0);
        assert!(b.lower.value >= 2.5 * (1.0 - 1e-12), "{}", b.lower.value);
        assert!(b.lower.value <= b.upper.value);

        let b = pm_norm_discrete(&c, &tr, &[0.0, 0.0], &cfg).unwrap();
        assert_eq!((b.upper.value, b.lower.value), (0.0, 0.0));

        let c = Couple::new(spec(1.0, &[1.0]), spec(1.0, &[4.0])).unwrap();
        let tr = ThetaR::new(0.5, 0.5).unwrap();
        let b = pm_norm_discrete(&c, &tr, &[1.0], &cfg).unwrap();
        assert!(b.lower.value >= 2.0 - 1e-15);
        assert_eq!(b.lower.certificate, Certificate::Bound(BoundSource::ComplexReference));
        assert!(b.lower.value <= b.upper.value);
    }

    #[test]
    fn certificate_reproduces_upper_value() {
        let c = Couple::new(spec(1.5, &[1.0, 2.0]), spec(1.5, &[2.0, 0.5])).unwrap();
        let tr = ThetaR::new(0.4, 0.6).unwrap();
        let a = [1.0, -0.7];
        let cfg = SolverCfg {
            iters: 300,
            window: 2,
            ..SolverCfg::default()
        };
        let b = pm_norm_discrete(&c, &tr, &a, &cfg).unwrap();
        let s = b.sequence().unwrap();
        let again = j_norm_discrete(&c, &tr, s).unwrap().value;
        assert!((again - b.upper.value).abs() <= 1e-9 * again);
        let total = s.sum(2);
        assert!(total.iter().zip(a).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn representation_sum_examples() {
        let c = Couple::new(spec(2.0, &[1.0, 2.0]), spec(1.0, &[3.0, 0.5])).unwrap();
        let tr = ThetaR::new(0.5, 1.0).unwrap();
        let v: &[f64] = &[1.0, -2.0];
        let r = sum_of_representation(&c, &tr, &seq(&[(0, v)])).unwrap();
        assert_eq!(r.sum.as_slice(), v);
        assert!(r.bound.holds);
        assert!(r.sum_norm.upper <= 2.0 * intersection_norm(&c, v).unwrap());

        let minus: Vec<f64> = v.iter().map(|x| -x).collect();
        let r = sum_of_representation(&c, &tr, &seq(&[(0, v), (1, &minus)])).unwrap();
        assert!(r.sum.is_zero());
        assert_eq!(r.sum_norm.upper, 0.0);
    }
}
