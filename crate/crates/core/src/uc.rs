//! Norms of unconditionally convergent series: `sup_λ ‖Σ λ_n a_n‖` over
//! `|λ_n| ≤ 1`, optionally restricted to an index set, and the tail
//! functional `(Ta)_N` built from it.

use std::collections::BTreeSet;

use crate::banach::NormSpec;
use crate::error::{Error, Result};
use crate::estimate::{Certificate, EstimateKind, NormEstimate, SignPattern};
use crate::seq::FiniteSeq;
use crate::signs::{maximize_signs, EnumOptions};

/// `sup_ε ‖Σ_i ε_i c_i y_i‖` over labelled, scaled terms `(label, c_i, y_i)`.
pub(crate) fn labelled_supremum<'a>(
    norm: &NormSpec,
    terms: impl IntoIterator<Item = (i64, f64, &'a [f64])>,
    opts: &EnumOptions,
) -> Result<(f64, EstimateKind, SignPattern)> {
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for (label, scale, y) in terms {
        if scale == 0.0 || y.iter().all(|&x| x == 0.0) {
            continue;
        }
        labels.push(label);
        columns.extend(y.iter().map(|x| scale * x));
    }
    let best = maximize_signs(norm, &columns, opts)?;
    let pattern = SignPattern(labels.into_iter().zip(best.signs).collect());
    Ok((best.value, best.kind, pattern))
}

fn check_subset(s: &FiniteSeq, subset: Option<&BTreeSet<i64>>) -> Result<()> {
    if let Some(subset) = subset {
        if let Some(n) = subset.iter().find(|n| n.unsigned_abs() > s.window()) {
            return Err(Error::InvalidArgument(format!(
                "subset index {n} outside window {}",
                s.window()
            )));
        }
    }
    Ok(())
}

/// `‖{a_n}‖_{UC(A)}`, restricted to `subset` when given.
pub fn uc_norm(n: &NormSpec, s: &FiniteSeq, subset: Option<&BTreeSet<i64>>) -> Result<NormEstimate> {
    uc_norm_with(n, s, subset, &EnumOptions::default())
}

pub fn uc_norm_with(
    n: &NormSpec,
    s: &FiniteSeq,
    subset: Option<&BTreeSet<i64>>,
    opts: &EnumOptions,
) -> Result<NormEstimate> {
    s.check_dim(n.dim())?;
    check_subset(s, subset)?;
    let terms = s
        .terms()
        .iter()
        .filter(|(k, _)| subset.is_none_or(|u| u.contains(k)))
        .map(|(&k, v)| (k, 1.0, v.as_slice()));
    let (value, kind, pattern) = labelled_supremum(n, terms, opts)?;
    Ok(NormEstimate {
        value,
        kind,
        certificate: Certificate::Signs { space: None, pattern },
    })
}

/// `(Ta)_N = sup_λ ‖Σ_{|n| ≥ N} λ_n a_n‖` for `N = 0, …, window + 1`.
pub fn tail_functional(n: &NormSpec, s: &FiniteSeq) -> Result<Vec<f64>> {
    tail_functional_with(n, s, &EnumOptions::default())
}

pub fn tail_functional_with(n: &NormSpec, s: &FiniteSeq, opts: &EnumOptions) -> Result<Vec<f64>> {
    s.check_dim(n.dim())?;
    (0..=s.window() + 1)
        .map(|cut| {
            let terms = s
                .terms()
                .iter()
                .filter(|(k, _)| k.unsigned_abs() >= cut)
                .map(|(&k, v)| (k, 1.0, v.as_slice()));
            labelled_supremum(n, terms, opts).map(|(value, _, _)| value)
        })
        .collect()
}
