use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::banach::Vector;
use crate::continuous::StepFunction;
use crate::seq::FiniteSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    Exact,
    CertifiedUpper,
    CertifiedLower,
}

/// `±1` per index. Keys are sequence indices for series and cell indices
/// for step functions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignPattern(pub BTreeMap<i64, i8>);

impl SignPattern {
    pub fn get(&self, index: i64) -> Option<i8> {
        self.0.get(&index).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Where a lower bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Half the certified lower value of the sum norm.
    SumNorm,
    /// The closed-form complex interpolation norm.
    ComplexReference,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "kebab-case")]
pub enum Certificate {
    /// Maximising signs; `space` is the `j` of `A_j` when the supremum ranges over both.
    Signs { space: Option<u8>, pattern: SignPattern },
    Sequence(FiniteSeq),
    Step(StepFunction),
    Decomposition { v0: Vector, v1: Vector },
    Bound(BoundSource),
}

/// A computed norm value and the object that witnesses it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub certificate: Certificate,
}

impl NormEstimate {
    pub fn signs(&self) -> Option<(&SignPattern, Option<u8>)> {
        match &self.certificate {
            Certificate::Signs { space, pattern } => Some((pattern, *space)),
            _ => None,
        }
    }
}

/// Upper and lower estimates of an infimal norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub upper: NormEstimate,
    pub lower: NormEstimate,
}

impl Bracket {
    /// Representation attaining the upper value, when it is a sequence.
    pub fn sequence(&self) -> Option<&FiniteSeq> {
        match &self.upper.certificate {
            Certificate::Sequence(s) => Some(s),
            _ => None,
        }
    }

    pub fn step_function(&self) -> Option<&StepFunction> {
        match &self.upper.certificate {
            Certificate::Step(u) => Some(u),
            _ => None,
        }
    }
}
