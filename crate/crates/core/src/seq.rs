use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::banach::{check_vector, Vector};
use crate::error::{Error, Result};

/// Sequence index as a map key; JSON object keys arrive as strings, and
/// buffered (tagged or flattened) input may keep them that way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
struct Index(i64);

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct IndexVisitor;

        impl serde::de::Visitor<'_> for IndexVisitor {
            type Value = Index;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer index")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Index, E> {
                Ok(Index(v))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Index, E> {
                i64::try_from(v).map(Index).map_err(E::custom)
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Index, E> {
                v.trim().parse().map(Index).map_err(E::custom)
            }
        }

        d.deserialize_any(IndexVisitor)
    }
}

#[derive(Serialize, Deserialize)]
struct FiniteSeqRepr {
    /// Defaults to the largest `|n|` among the terms.
    #[serde(default)]
    window: Option<u64>,
    #[serde(default)]
    terms: BTreeMap<Index, Vector>,
}

/// A two-sided sequence supported in `[-window, window]`; absent indices are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiniteSeqRepr", into = "FiniteSeqRepr")]
pub struct FiniteSeq {
    window: u64,
    terms: BTreeMap<i64, Vector>,
}

impl TryFrom<FiniteSeqRepr> for FiniteSeq {
    type Error = Error;

    fn try_from(repr: FiniteSeqRepr) -> Result<Self> {
        let terms: BTreeMap<i64, Vector> = repr.terms.into_iter().map(|(k, v)| (k.0, v)).collect();
        match repr.window {
            Some(w) => FiniteSeq::new(w, terms),
            None => FiniteSeq::from_terms(terms),
        }
    }
}

impl From<FiniteSeq> for FiniteSeqRepr {
    fn from(s: FiniteSeq) -> Self {
        FiniteSeqRepr {
            window: Some(s.window),
            terms: s.terms.into_iter().map(|(k, v)| (Index(k), v)).collect(),
        }
    }
}

impl FiniteSeq {
    pub fn new(window: u64, terms: BTreeMap<i64, Vector>) -> Result<Self> {
        let mut dim = None;
        for (&n, v) in &terms {
            if n.unsigned_abs() > window {
                return Err(Error::InvalidSequence(format!("index {n} outside window {window}")));
            }
            let d = *dim.get_or_insert(v.dim());
            check_vector(d, v)?;
        }
        Ok(FiniteSeq { window, terms })
    }

    /// Window set to the largest `|n|` present.
    pub fn from_terms<I: IntoIterator<Item = (i64, Vector)>>(terms: I) -> Result<Self> {
        let terms: BTreeMap<i64, Vector> = terms.into_iter().collect();
        let window = terms.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0);
        FiniteSeq::new(window, terms)
    }

    pub fn zero(window: u64) -> Self {
        FiniteSeq {
            window,
            terms: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vector> {
        &self.terms
    }

    pub fn get(&self, n: i64) -> Option<&Vector> {
        self.terms.get(&n)
    }

    pub fn dim(&self) -> Option<usize> {
        self.terms.values().next().map(Vector::dim)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch { expected: dim, found: d }),
            _ => Ok(()),
        }
    }

    /// Indices carrying a nonzero vector.
    pub fn support(&self) -> BTreeSet<i64> {
        self.terms
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&n, _)| n)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Vector::is_zero)
    }

    pub fn sum(&self, dim: usize) -> Vector {
        let mut total = Vector::zeros(dim);
        for v in self.terms.values() {
            total.add_scaled(1.0, v);
        }
        total
    }

    pub fn scaled(&self, c: f64) -> FiniteSeq {
        FiniteSeq {
            window: self.window,
            terms: self.terms.iter().map(|(&n, v)| (n, v.scaled(c))).collect(),
        }
    }

    /// Termwise difference; the window is the larger of the two.
    pub fn sub(&self, other: &FiniteSeq) -> Result<FiniteSeq> {
        if let (Some(a), Some(b)) = (self.dim(), other.dim()) {
            if a != b {
                return Err(Error::DimensionMismatch { expected: a, found: b });
            }
        }
        let mut terms = self.terms.clone();
        for (&n, v) in &other.terms {
            match terms.get_mut(&n) {
                Some(t) => t.add_scaled(-1.0, v),
                None => {
                    terms.insert(n, v.scaled(-1.0));
                }
            }
        }
        Ok(FiniteSeq {
            window: self.window.max(other.window),
            terms,
        })
    }

    /// Keeps the terms whose index lies in `keep`.
    pub fn restricted(&self, keep: &BTreeSet<i64>) -> FiniteSeq {
        FiniteSeq {
            window: self.window,
            terms: self
                .terms
                .iter()
                .filter(|(n, _)| keep.contains(n))
                .map(|(&n, v)| (n, v.clone()))
                .collect(),
        }
    }

    /// Same terms viewed in a window at least as large.
    pub fn padded(&self, window: u64) -> FiniteSeq {
        FiniteSeq {
            window: self.window.max(window),
            terms: self.terms.clone(),
        }
    }

    pub fn term_or_zero(&self, n: i64, dim: usize) -> Vector {
        self.terms.get(&n).cloned().unwrap_or_else(|| Vector::zeros(dim))
    }

    /// Largest termwise gap in max-norm, absent terms read as zero.
    pub fn max_deviation(&self, other: &FiniteSeq) -> f64 {
        let keys: BTreeSet<i64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        let mut worst = 0.0_f64;
        for n in keys {
            let gap = match (self.terms.get(&n), other.terms.get(&n)) {
                (Some(a), Some(b)) => a.sub(b).max_abs(),
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            };
            worst = worst.max(gap);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_string_indices() {
        let s: FiniteSeq = serde_json::from_str(r#"{"window":1,"terms":{"-1":[1.0],"0":[-2.0],"1":[3.0]}}"#).unwrap();
        assert_eq!(s.get(-1).unwrap().as_slice(), &[1.0]);
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"window":1,"terms":{"-1":[1.0],"0":[-2.0],"1":[3.0]}}"#);
    }

    #[test]
    fn rejects_out_of_window_and_mixed_dims() {
        assert!(serde_json::from_str::<FiniteSeq>(r#"{"window":0,"terms":{"1":[1.0]}}"#).is_err());
        assert!(serde_json::from_str::<FiniteSeq>(r#"{"window":1,"terms":{"0":[1.0],"1":[1.0,2.0]}}"#).is_err());
    }

    #[test]
    fn support_skips_zero_terms() {
        let s = FiniteSeq::from_terms([(0, Vector::from(vec![0.0])), (2, Vector::from(vec![1.0]))]).unwrap();
        assert_eq!(s.window(), 2);
        assert_eq!(s.support().into_iter().collect::<Vec<_>>(), vec![2]);
    }
}
