//! Numerical plus-minus interpolation norms for couples of weighted ℓ^p norms
//! on ℝ^d: discrete and continuous constructions, exact sign suprema, and
//! certified transfer checks between them.

pub mod banach;
pub mod check;
pub mod continuous;
pub mod discrete;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod harness;
pub mod represent;
pub mod seq;
pub mod signs;
pub mod uc;

pub use banach::{
    complex_reference_norm, intersection_norm, norm_eval, reference_spec, sum_norm, Couple, Exponent,
    NormSpec, SumNorm, Vector,
};
pub use check::{BoundCheck, CERTIFICATE_TOLERANCE};
pub use continuous::{
    cell_weights, integral_full, j_seminorm_continuous, j_seminorm_continuous_with, pm_norm_continuous,
    pm_norm_continuous_warm, tail_supremum, CellWeights, ContinuousGrid, IntegralReport, StepFunction,
};
pub use discrete::{
    j_norm_discrete, j_norm_discrete_with, pm_norm_discrete, pm_norm_discrete_warm, sum_of_representation,
    RepresentationSum, ThetaR,
};
pub use error::{Error, Result};
pub use estimate::{BoundSource, Bracket, Certificate, EstimateKind, NormEstimate, SignPattern};
pub use experiment::{run_suite, to_csv, InstanceRecord, Outcome, RandomCouples, Suite, SuiteConfig, SuiteReport};
pub use harness::{
    check_continuize, check_discretize, continuize_to_discrete, discretize_to_continuous, embedding_check,
    limit_scan, verify_equivalence, EmbeddingReport, EquivalenceReport, HarnessCfg, LimitRow, LimitScan,
    SandwichConstants, TransferCheck,
};
pub use represent::SolverCfg;
pub use seq::FiniteSeq;
pub use signs::{maximize_signs, EnumOptions, DEFAULT_ENUMERATION_CAP};
pub use uc::{tail_functional, tail_functional_with, uc_norm, uc_norm_with};
