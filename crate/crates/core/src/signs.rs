//! Exact maximisation of `ε ↦ ‖Σ_k ε_k y_k‖` over sign vectors.
//!
//! The map `λ ↦ ‖Σ λ_k y_k‖` is convex on the box `[-1,1]^m`, so its maximum
//! is attained at a vertex. Vertices are enumerated in fixed chunks (high bits
//! fixed, low bits walked in Gray-code order with one rank-one update per
//! step). Chunks run on the rayon pool and are merged in chunk order, so the
//! winner never depends on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::banach::NormSpec;
use crate::error::{Error, Result};
use crate::estimate::EstimateKind;

pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// Relative tolerance under which two sign patterns count as tied.
const TIE: f64 = 1e-12;

/// Bits walked sequentially inside one chunk.
const CHUNK_BITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumOptions {
    /// Largest number of active terms enumerated exhaustively.
    pub cap: usize,
    /// Above the cap, run vertex coordinate ascent instead of failing.
    pub sampling_fallback: bool,
    pub seed: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            sampling_fallback: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignMaximum {
    pub value: f64,
    /// One sign per input column; zero columns get `+1`.
    pub signs: Vec<i8>,
    pub kind: EstimateKind,
}

/// Maximises `‖Σ_k ε_k y_k‖` over `ε ∈ {±1}^m`, where column `k` is
/// `columns[k*d..(k+1)*d]`.
///
/// Among tied patterns the lexicographically smallest is reported, ordering
/// `+1 < -1` index by index; in particular the first active sign is `+1`.
pub fn maximize_signs(norm: &NormSpec, columns: &[f64], opts: &EnumOptions) -> Result<SignMaximum> {
    let d = norm.dim();
    if columns.len() % d != 0 {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: columns.len() % d,
        });
    }
    let m = columns.len() / d;
    let column = |k: usize| &columns[k * d..(k + 1) * d];
    let active: Vec<usize> = (0..m).filter(|&k| column(k).iter().any(|&x| x != 0.0)).collect();
    let mut signs = vec![1i8; m];
    if active.is_empty() {
        return Ok(SignMaximum {
            value: 0.0,
            signs,
            kind: EstimateKind::Exact,
        });
    }

    let kind = if norm.is_separable() {
        separable_signs(norm, columns, &active, &mut signs);
        EstimateKind::Exact
    } else if active.len() <= opts.cap {
        enumerate_signs(norm, columns, &active, &mut signs);
        EstimateKind::Exact
    } else if opts.sampling_fallback {
        ascent_signs(norm, columns, &active, opts.seed, &mut signs);
        EstimateKind::CertifiedLower
    } else {
        return Err(Error::EnumerationCap {
            support: active.len(),
            cap: opts.cap,
        });
    };

    let value = evaluate_signs(norm, columns, &signs);
    Ok(SignMaximum { value, signs, kind })
}

/// `‖Σ_k ε_k y_k‖` evaluated from scratch.
pub fn evaluate_signs(norm: &NormSpec, columns: &[f64], signs: &[i8]) -> f64 {
    let d = norm.dim();
    let mut z = vec![0.0; d];
    for (k, &s) in signs.iter().enumerate() {
        let y = &columns[k * d..(k + 1) * d];
        let s = f64::from(s);
        for i in 0..d {
            z[i] += s * y[i];
        }
    }
    norm.eval_unchecked(&z)
}

/// For `p = ∞` (or `d = 1`) the supremum is `max_i w_i Σ_k |y_k(i)|`; the
/// signs of the winning coordinate attain it.
fn separable_signs(norm: &NormSpec, columns: &[f64], active: &[usize], signs: &mut [i8]) {
    let d = norm.dim();
    let w = norm.weights();
    let mut best = (f64::NEG_INFINITY, 0);
    for i in 0..d {
        let total: f64 = active.iter().map(|&k| columns[k * d + i].abs()).sum::<f64>() * w[i];
        if total > best.0 {
            best = (total, i);
        }
    }
    let i = best.1;
    let mut flip = 1i8;
    for (pos, &k) in active.iter().enumerate() {
        let y = columns[k * d + i];
        let s = if y < 0.0 { -1 } else { 1 };
        if pos == 0 {
            flip = s;
        }
        signs[k] = s * flip;
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    score: f64,
    rank: u64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.score > other.score * (1.0 + TIE) {
            return true;
        }
        self.score >= other.score * (1.0 - TIE) && self.rank < other.rank
    }
}

fn enumerate_signs(norm: &NormSpec, columns: &[f64], active: &[usize], signs: &mut [i8]) {
    let d = norm.dim();
    let free = active.len() - 1;
    let low = free.min(CHUNK_BITS);
    let high = free - low;
    let first = &columns[active[0] * d..(active[0] + 1) * d];
    // Position q (0-based over the free terms) carries rank bit free-1-q.
    let free_col = |q: usize| {
        let k = active[q + 1];
        &columns[k * d..(k + 1) * d]
    };

    let chunk_best = |chunk: u64| -> Candidate {
        let mut eps = vec![1.0f64; free];
        for q in 0..high {
            if chunk >> (high - 1 - q) & 1 == 1 {
                eps[q] = -1.0;
            }
        }
        let mut z = first.to_vec();
        for (q, e) in eps.iter().enumerate() {
            let y = free_col(q);
            for i in 0..d {
                z[i] += e * y[i];
            }
        }
        let mut rank = chunk << low;
        let mut best = Candidate {
            score: norm.power_sum(&z),
            rank,
        };
        for step in 1u64..(1u64 << low) {
            let bit = step.trailing_zeros() as usize;
            let q = free - 1 - bit;
            let y = free_col(q);
            let e = eps[q];
            for i in 0..d {
                z[i] -= 2.0 * e * y[i];
            }
            eps[q] = -e;
            rank ^= 1 << bit;
            let candidate = Candidate {
                score: norm.power_sum(&z),
                rank,
            };
            if candidate.beats(&best) {
                best = candidate;
            }
        }
        best
    };

    let chunks = 1u64 << high;
    let per_chunk: Vec<Candidate> = if chunks == 1 {
        vec![chunk_best(0)]
    } else {
        (0..chunks).into_par_iter().map(chunk_best).collect()
    };
    let mut best = per_chunk[0];
    for c in &per_chunk[1..] {
        if c.beats(&best) {
            best = *c;
        }
    }

    signs[active[0]] = 1;
    for q in 0..free {
        signs[active[q + 1]] = if best.rank >> (free - 1 - q) & 1 == 1 { -1 } else { 1 };
    }
}

/// Multi-start single-flip ascent over vertices. Every local maximum found
/// is a genuine vertex value, hence a lower bound on the supremum.
fn ascent_signs(norm: &NormSpec, columns: &[f64], active: &[usize], seed: u64, signs: &mut [i8]) {
    let d = norm.dim();
    let col = |k: usize| &columns[k * d..(k + 1) * d];
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0; active.len()]];
    for i in 0..d {
        starts.push(active.iter().map(|&k| if col(k)[i] < 0.0 { -1.0 } else { 1.0 }).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        starts.push(active.iter().map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect());
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for mut eps in starts {
        let mut z = vec![0.0; d];
        for (e, &k) in eps.iter().zip(active) {
            for i in 0..d {
                z[i] += e * col(k)[i];
            }
        }
        let mut score = norm.power_sum(&z);
        loop {
            let mut improved = false;
            for (pos, &k) in active.iter().enumerate() {
                let trial: Vec<f64> = (0..d).map(|i| z[i] - 2.0 * eps[pos] * col(k)[i]).collect();
                let s = norm.power_sum(&trial);
                if s > score * (1.0 + TIE) {
                    z = trial;
                    score = s;
                    eps[pos] = -eps[pos];
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if eps[0] < 0.0 {
            eps.iter_mut().for_each(|e| *e = -*e);
        }
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, eps));
        }
    }
    let (_, eps) = best.expect("at least one start");
    for (e, &k) in eps.iter().zip(active) {
        signs[k] = if *e < 0.0 { -1 } else { 1 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::Exponent;

    fn brute_force(norm: &NormSpec, columns: &[f64]) -> f64 {
        let d = norm.dim();
        let m = columns.len() / d;
        let mut best = 0.0_f64;
        for mask in 0u64..(1 << m) {
            let mut z = vec![0.0; d];
            for k in 0..m {
                let s = if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
                for i in 0..d {
                    z[i] += s * columns[k * d + i];
                }
            }
            best = best.max(norm.eval(&z).unwrap());
        }
        best
    }

    #[test]
    fn matches_brute_force_across_chunking() {
        let norm = NormSpec::new(Exponent::Finite(1.5), vec![1.0, 0.5, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // 17 columns forces more than one chunk.
        let columns: Vec<f64> = (0..17 * 3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got = maximize_signs(&norm, &columns, &EnumOptions::default()).unwrap();
        let want = brute_force(&norm, &columns);
        assert!((got.value - want).abs() <= 1e-12 * want);
        assert_eq!(got.kind, EstimateKind::Exact);
        assert_eq!(got.signs[0], 1);
    }

    #[test]
    fn ties_resolve_to_lexicographically_smallest() {
        // Orthogonal columns under ℓ^2: every pattern has the same norm.
        let norm = NormSpec::new(Exponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let columns = [1.0, 0.0, 0.0, 1.0];
        let got = maximize_signs(&norm, &columns, &EnumOptions::default()).unwrap();
        assert_eq!(got.signs, vec![1, 1]);
    }

    #[test]
    fn zero_columns_are_skipped() {
        let norm = NormSpec::new(Exponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let columns = [0.0, 0.0, 3.0, 4.0, 0.0, 0.0];
        let got = maximize_signs(&norm, &columns, &EnumOptions::default()).unwrap();
        assert_eq!(got.value, 5.0);
        assert_eq!(got.signs, vec![1, 1, 1]);
    }

    #[test]
    fn separable_path_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let norm = NormSpec::new(
                Exponent::Infinity,
                (0..3).map(|_| rng.random_range(0.2..2.0)).collect(),
            )
            .unwrap();
            let columns: Vec<f64> = (0..8 * 3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let got = maximize_signs(&norm, &columns, &EnumOptions::default()).unwrap();
            let want = brute_force(&norm, &columns);
            assert!((got.value - want).abs() <= 1e-12 * want);
            assert!((evaluate_signs(&norm, &columns, &got.signs) - got.value).abs() == 0.0);
        }
    }

    #[test]
    fn cap_and_fallback() {
        let norm = NormSpec::new(Exponent::Finite(2.0), vec![1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let columns: Vec<f64> = (0..10 * 2).map(|_| rng.random_range(-1.0..1.0)).collect();
        let opts = EnumOptions {
            cap: 6,
            ..EnumOptions::default()
        };
        assert_eq!(
            maximize_signs(&norm, &columns, &opts),
            Err(Error::EnumerationCap { support: 10, cap: 6 })
        );
        let opts = EnumOptions {
            cap: 6,
            sampling_fallback: true,
            seed: 1,
        };
        let lower = maximize_signs(&norm, &columns, &opts).unwrap();
        assert_eq!(lower.kind, EstimateKind::CertifiedLower);
        assert!(lower.value <= brute_force(&norm, &columns) * (1.0 + 1e-12));
    }
}
