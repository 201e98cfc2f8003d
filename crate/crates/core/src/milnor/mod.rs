//! Milnor μ̄-invariants of link diagrams.
//!
//! `μ̄(i₁ … i_k)` is the coefficient of `X_{i₁} ⋯ X_{i_{k−1}}` in the Magnus
//! expansion of the longitude of component `i_k`, written in meridians.
//! Its indeterminacy `Δ` is the gcd of the same coefficients over every
//! cyclic permutation of every proper subsequence of length at least 2.

mod wirtinger;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::LinkDiagram;
use crate::series::{SeriesError, TruncatedSeries, MAX_LENGTH};

pub use wirtinger::{wirtinger, Relation, WirtingerPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error")]
pub enum MilnorError {
    #[error("index sequence of length {len} is too short (need at least 2)")]
    IndexTooShort { len: usize },
    #[error("component index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("component {index} repeats in a link-homotopy index")]
    RepeatedIndex { index: usize },
    #[error("length {k} needs 2 <= k <= {n}")]
    BadLength { k: usize, n: usize },
    #[error("invariants of length {needed} exceed the supported truncation {available}")]
    TruncationInsufficient { needed: usize, available: usize },
    #[error("{n} components exceed the supported 15")]
    TooManyComponents { n: usize },
    #[error("value {value} does not fit in 64 bits")]
    ValueOverflow { value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMode {
    /// Full Magnus expansion; repeated indices allowed.
    Plain,
    /// Repeat-free expansion; indices must be distinct.
    LinkHomotopy,
}

/// `value` is reduced modulo `delta` when `delta > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuValue {
    pub value: i64,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuEntry {
    pub index: Vec<usize>,
    pub value: i64,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuReport {
    pub length: usize,
    /// Sorted lexicographically by index.
    pub entries: Vec<MuEntry>,
}

impl MuReport {
    pub fn get(&self, index: &[usize]) -> Option<&MuEntry> {
        self.entries
            .binary_search_by(|e| e.index.as_slice().cmp(index))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.value == 0)
    }

    /// Canonical compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        format!("{value}\n")
    }
}

fn check_index(d: &LinkDiagram, index: &[usize], mode: MuMode) -> Result<(), MilnorError> {
    let n = d.n_components();
    if index.len() < 2 {
        return Err(MilnorError::IndexTooShort { len: index.len() });
    }
    if index.len() > MAX_LENGTH {
        return Err(MilnorError::TruncationInsufficient {
            needed: index.len(),
            available: MAX_LENGTH,
        });
    }
    let mut seen = BTreeSet::new();
    for &i in index {
        if i == 0 || i > n {
            return Err(MilnorError::IndexOutOfRange { index: i, n });
        }
        if !seen.insert(i) && mode == MuMode::LinkHomotopy {
            return Err(MilnorError::RepeatedIndex { index: i });
        }
    }
    Ok(())
}

/// Coefficient of `index[..k−1]` in the longitude of `index[k−1]`.
fn raw(longitudes: &[TruncatedSeries], index: &[usize]) -> i128 {
    let (&last, body) = index.split_last().expect("non-empty index");
    longitudes[last - 1].coefficient(body)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Milnor's indeterminacy: gcd of raw values over cyclic permutations of
/// proper subsequences of length at least 2.
fn delta(longitudes: &[TruncatedSeries], index: &[usize]) -> u128 {
    let k = index.len();
    let mut g = 0u128;
    for subset in 1u32..(1 << k) - 1 {
        if subset.count_ones() < 2 {
            continue;
        }
        let sub: Vec<usize> = (0..k)
            .filter(|&t| subset & (1 << t) != 0)
            .map(|t| index[t])
            .collect();
        for shift in 0..sub.len() {
            let rotated: Vec<usize> = sub[shift..].iter().chain(&sub[..shift]).copied().collect();
            g = gcd(g, raw(longitudes, &rotated).unsigned_abs());
            if g == 1 {
                return 1;
            }
        }
    }
    g
}

fn finish(raw_value: i128, delta: u128) -> Result<MuValue, MilnorError> {
    let value = if delta > 0 {
        raw_value.rem_euclid(delta as i128)
    } else {
        raw_value
    };
    let too_big = || MilnorError::ValueOverflow {
        value: value.to_string(),
    };
    Ok(MuValue {
        value: i64::try_from(value).map_err(|_| too_big())?,
        delta: u64::try_from(delta).map_err(|_| too_big())?,
    })
}

/// `μ̄(index)` computed from the full Magnus expansion.
pub fn mu_bar(d: &LinkDiagram, index: &[usize]) -> Result<MuValue, MilnorError> {
    mu_bar_with(d, index, MuMode::Plain)
}

pub fn mu_bar_with(d: &LinkDiagram, index: &[usize], mode: MuMode) -> Result<MuValue, MilnorError> {
    check_index(d, index, mode)?;
    let mut active = vec![false; d.n_components()];
    for &i in index {
        active[i - 1] = true;
    }
    let w = wirtinger(d);
    let longitudes =
        wirtinger::longitude_series(&w, index.len(), mode == MuMode::LinkHomotopy, &active)?;
    finish(raw(&longitudes, index), delta(&longitudes, index))
}

/// `μ̄(I)` for every sequence `I` of `k` distinct components, in
/// link-homotopy mode.
pub fn mu_vector(d: &LinkDiagram, k: usize) -> Result<MuReport, MilnorError> {
    let n = d.n_components();
    if k < 2 || k > n {
        return Err(MilnorError::BadLength { k, n });
    }
    if k > MAX_LENGTH {
        return Err(MilnorError::TruncationInsufficient {
            needed: k,
            available: MAX_LENGTH,
        });
    }
    let w = wirtinger(d);
    let longitudes = wirtinger::longitude_series(&w, k, true, &vec![true; n])?;
    let indices = permutations(n, k);
    let entries = indices
        .into_par_iter()
        .map(|index| {
            let v = finish(raw(&longitudes, &index), delta(&longitudes, &index))?;
            Ok(MuEntry {
                index,
                value: v.value,
                delta: v.delta,
            })
        })
        .collect::<Result<Vec<_>, MilnorError>>()?;
    Ok(MuReport { length: k, entries })
}

/// All sequences of `k` distinct elements of `1..=n`, in lexicographic order.
pub fn permutations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 1..=n {
            if !cur.contains(&i) {
                cur.push(i);
                extend(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
