//! Seeded batch runs of the harness checks with JSON and CSV reports.
//!
//! Instance `i` draws its data from a ChaCha8 stream `i` under the suite
//! seed, so instances are independent of each other and of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::banach::{Couple, Exponent, NormSpec, Vector};
use crate::error::{Error, Result};
use crate::harness::{
    embedding_check, limit_scan, verify_equivalence, EmbeddingReport, EquivalenceReport, HarnessCfg, LimitScan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Equivalence,
    LimitScan,
    Embed,
}

/// How instances obtain a couple when none is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomCouples {
    pub dim: usize,
    /// Exponents are drawn from this list.
    pub exponents: Vec<Exponent>,
    /// Draw one exponent for both norms.
    pub equal_exponents: bool,
    /// Weights are drawn uniformly from `[weight_min, weight_max]`.
    pub weight_min: f64,
    pub weight_max: f64,
}

impl Default for RandomCouples {
    fn default() -> Self {
        RandomCouples {
            dim: 2,
            exponents: vec![Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity],
            equal_exponents: false,
            weight_min: 0.25,
            weight_max: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Fixed couple for every instance; random couples otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couple: Option<Couple>,
    #[serde(default)]
    pub random_couples: RandomCouples,
    pub thetas: Vec<f64>,
    pub r_values: Vec<f64>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub harness: HarnessCfg,
}

fn default_instances() -> usize {
    1
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.thetas.is_empty() {
            return Err(Error::InvalidArgument("at least one theta is required".into()));
        }
        if self.r_values.is_empty() {
            return Err(Error::InvalidArgument("at least one r is required".into()));
        }
        if self.couple.is_none() {
            let rc = &self.random_couples;
            if rc.dim == 0 || rc.exponents.is_empty() {
                return Err(Error::InvalidArgument("random couples need dim ≥ 1 and an exponent".into()));
            }
            if !(rc.weight_min > 0.0 && rc.weight_min <= rc.weight_max && rc.weight_max.is_finite()) {
                return Err(Error::InvalidArgument("weight range must satisfy 0 < min ≤ max".into()));
            }
        }
        Ok(())
    }

    /// The `(θ, r)` pair used by instance `index` in the equivalence and
    /// embed suites: pairs are enumerated θ-major and cycled.
    pub fn pair(&self, index: usize) -> (f64, f64) {
        let k = index % (self.thetas.len() * self.r_values.len());
        (self.thetas[k / self.r_values.len()], self.r_values[k % self.r_values.len()])
    }

    fn draw(&self, index: usize) -> Result<(Couple, Vector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let couple = match &self.couple {
            Some(c) => c.clone(),
            None => random_couple(&self.random_couples, &mut rng)?,
        };
        let a = (0..couple.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Ok((couple, a))
    }
}

fn random_couple(rc: &RandomCouples, rng: &mut ChaCha8Rng) -> Result<Couple> {
    let pick = |rng: &mut ChaCha8Rng| rc.exponents[rng.random_range(0..rc.exponents.len())];
    let p0 = pick(rng);
    let p1 = if rc.equal_exponents { p0 } else { pick(rng) };
    let weights = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..rc.dim)
            .map(|_| {
                if rc.weight_min == rc.weight_max {
                    rc.weight_min
                } else {
                    rng.random_range(rc.weight_min..=rc.weight_max)
                }
            })
            .collect()
    };
    let w0 = weights(rng);
    let w1 = weights(rng);
    Couple::new(NormSpec::new(p0, w0)?, NormSpec::new(p1, w1)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum Outcome {
    Equivalence(EquivalenceReport),
    LimitScan(LimitScan),
    Embed(EmbeddingReport),
}

impl Outcome {
    pub fn pass(&self) -> bool {
        match self {
            Outcome::Equivalence(r) => r.pass,
            Outcome::LimitScan(s) => s.pass(),
            Outcome::Embed(r) => r.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub couple: Couple,
    pub a: Vector,
    pub pass: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: usize,
    pub total: usize,
    pub instances: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

fn run_instance(cfg: &SuiteConfig, index: usize) -> Result<InstanceRecord> {
    let (couple, a) = cfg.draw(index)?;
    let outcome = match cfg.suite {
        Suite::Equivalence => {
            let (theta, r) = cfg.pair(index);
            Outcome::Equivalence(verify_equivalence(&couple, theta, r, &a, &cfg.harness)?)
        }
        Suite::LimitScan => {
            let theta = cfg.thetas[index % cfg.thetas.len()];
            Outcome::LimitScan(limit_scan(&couple, theta, &a, &cfg.r_values, &cfg.harness)?)
        }
        Suite::Embed => {
            let (theta, r) = cfg.pair(index);
            Outcome::Embed(embedding_check(&couple, theta, r, &a, &cfg.harness)?)
        }
    };
    Ok(InstanceRecord {
        index,
        couple,
        a,
        pass: outcome.pass(),
        outcome,
    })
}

/// Runs every instance in parallel; the report lists them by index.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let instances = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        config: cfg.clone(),
        passed: instances.iter().filter(|r| r.pass).count(),
        total: instances.len(),
        instances,
    })
}

#[derive(Serialize)]
struct EquivalenceRow {
    index: usize,
    theta: f64,
    r: f64,
    #[serde(rename = "U_r")]
    u_r: f64,
    #[serde(rename = "U_0")]
    u_0: f64,
    lower_r: f64,
    lower_0: f64,
    const_lower: f64,
    const_upper: f64,
    ratio_continuous_over_discrete: f64,
    ratio_discretize: f64,
    ratio_continuize: f64,
    pass: bool,
}

#[derive(Serialize)]
struct LimitCsvRow {
    index: usize,
    theta: f64,
    r: f64,
    #[serde(rename = "U_r")]
    u_r: f64,
    transferred: f64,
    lo: f64,
    hi: f64,
    width: f64,
    width_factor: f64,
    continuous_upper: f64,
    continuous_floor: f64,
    contained: bool,
}

#[derive(Serialize)]
struct EmbedRow {
    index: usize,
    theta: f64,
    r: f64,
    reference: f64,
    guaranteed: bool,
    first_ratio: f64,
    last_ratio: f64,
    continuous_ratio: Option<f64>,
    trend_nonincreasing: bool,
    pass: bool,
}

/// One CSV row per instance, or per `(instance, r)` for limit scans.
pub fn to_csv(report: &SuiteReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    for rec in &report.instances {
        match &rec.outcome {
            Outcome::Equivalence(e) => w
                .serialize(EquivalenceRow {
                    index: rec.index,
                    theta: e.theta,
                    r: e.r,
                    u_r: e.u_r,
                    u_0: e.u_0,
                    lower_r: e.lower_r,
                    lower_0: e.lower_0,
                    const_lower: e.constants.lower,
                    const_upper: e.constants.upper,
                    ratio_continuous_over_discrete: e.ratios.continuous_over_discrete,
                    ratio_discretize: e.ratios.discretize,
                    ratio_continuize: e.ratios.continuize,
                    pass: e.pass,
                })
                .map_err(csv_err)?,
            Outcome::LimitScan(s) => {
                for row in &s.rows {
                    w.serialize(LimitCsvRow {
                        index: rec.index,
                        theta: s.theta,
                        r: row.r,
                        u_r: row.u_r,
                        transferred: row.transferred,
                        lo: row.lo,
                        hi: row.hi,
                        width: row.width,
                        width_factor: row.width_factor,
                        continuous_upper: s.continuous_upper,
                        continuous_floor: row.continuous_floor,
                        contained: row.contained,
                    })
                    .map_err(csv_err)?;
                }
            }
            Outcome::Embed(e) => w
                .serialize(EmbedRow {
                    index: rec.index,
                    theta: e.theta,
                    r: e.r,
                    reference: e.reference,
                    guaranteed: e.guaranteed,
                    first_ratio: e.trend.first().map_or(f64::NAN, |s| s.ratio),
                    last_ratio: e.trend.last().map_or(f64::NAN, |s| s.ratio),
                    continuous_ratio: e.continuous.as_ref().map(|s| s.ratio),
                    trend_nonincreasing: e.trend_nonincreasing,
                    pass: e.pass,
                })
                .map_err(csv_err)?,
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::represent::SolverCfg;

    fn light(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            suite,
            couple: None,
            random_couples: RandomCouples::default(),
            thetas: vec![0.3, 0.5],
            r_values: vec![1.0, 0.5],
            instances: 4,
            seed: 7,
            harness: HarnessCfg {
                solver: SolverCfg {
                    iters: 60,
                    restarts: 2,
                    ..SolverCfg::default()
                },
                ..HarnessCfg::default()
            },
        }
    }

    #[test]
    fn pairs_cycle_theta_major() {
        let cfg = light(Suite::Equivalence);
        let pairs: Vec<_> = (0..5).map(|i| cfg.pair(i)).collect();
        assert_eq!(pairs, vec![(0.3, 1.0), (0.3, 0.5), (0.5, 1.0), (0.5, 0.5), (0.3, 1.0)]);
    }

    #[test]
    fn equivalence_suite_is_deterministic() {
        let cfg = light(Suite::Equivalence);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.total, 4);
        assert!(a.all_passed());
        let csv = to_csv(&a).unwrap();
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn limit_scan_csv_has_a_row_per_r() {
        let mut cfg = light(Suite::LimitScan);
        cfg.instances = 1;
        cfg.r_values = vec![1.0, 0.5, 0.25, 0.125];
        let report = run_suite(&cfg).unwrap();
        assert_eq!(to_csv(&report).unwrap().lines().count(), 5);
    }

    #[test]
    fn embed_suite_rejects_unequal_exponents() {
        let mut cfg = light(Suite::Embed);
        cfg.couple = Some(
            Couple::new(
                NormSpec::new(Exponent::Finite(1.0), vec![1.0]).unwrap(),
                NormSpec::new(Exponent::Finite(2.0), vec![1.0]).unwrap(),
            )
            .unwrap(),
        );
        assert!(matches!(run_suite(&cfg), Err(Error::UnequalExponents { .. })));
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = light(Suite::Embed);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: SuiteConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let minimal: SuiteConfig =
            serde_json::from_str(r#"{"suite":"limit-scan","thetas":[0.5],"r_values":[1.0]}"#).unwrap();
        assert_eq!(minimal.instances, 1);
    }
}
