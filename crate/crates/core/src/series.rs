//! Truncated non-commutative power series over the integers.
//!
//! A series in variables `X_1 … X_15` keeps every monomial of degree below
//! its truncation length `L`. Monomials are packed into a `u64`, four bits
//! per factor, first factor in the lowest nibble. In repeat-free mode every
//! monomial with a repeated variable is discarded as soon as it appears,
//! which realizes the quotient used for link homotopy.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

/// Largest usable generator index.
pub const MAX_GENERATOR: usize = 15;
/// Largest supported truncation length.
pub const MAX_LENGTH: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error")]
pub enum SeriesError {
    #[error("generator {generator} outside 1..={MAX_GENERATOR}")]
    GeneratorOutOfRange { generator: i64 },
    #[error("truncation length {length} outside 1..={MAX_LENGTH}")]
    BadLength { length: usize },
    #[error("coefficient overflow")]
    Overflow,
    #[error("series with different truncation or mode")]
    ShapeMismatch,
}

type Mono = u64;

fn encode(word: &[usize]) -> Mono {
    word.iter().rev().fold(0, |acc, &g| (acc << 4) | g as Mono)
}

fn decode(mut m: Mono) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push((m & 0xf) as usize);
        m >>= 4;
    }
    out
}

fn mask(mut m: Mono) -> u16 {
    let mut bits = 0u16;
    while m != 0 {
        bits |= 1 << (m & 0xf);
        m >>= 4;
    }
    bits
}

fn add_into(map: &mut HashMap<Mono, i128>, m: Mono, c: i128) -> Result<(), SeriesError> {
    let slot = map.entry(m).or_insert(0);
    *slot = slot.checked_add(c).ok_or(SeriesError::Overflow)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    length: usize,
    repeat_free: bool,
    /// `by_degree[d]` holds the nonzero coefficients of degree `d`.
    by_degree: Vec<HashMap<Mono, i128>>,
}

impl TruncatedSeries {
    fn zero(length: usize, repeat_free: bool) -> TruncatedSeries {
        TruncatedSeries {
            length,
            repeat_free,
            by_degree: vec![HashMap::new(); length],
        }
    }

    pub fn one(length: usize, repeat_free: bool) -> Result<TruncatedSeries, SeriesError> {
        if length == 0 || length > MAX_LENGTH {
            return Err(SeriesError::BadLength { length });
        }
        let mut s = TruncatedSeries::zero(length, repeat_free);
        s.by_degree[0].insert(0, 1);
        Ok(s)
    }

    /// The expansion of `x_g^e`.
    pub fn generator_power(
        g: usize,
        e: i64,
        length: usize,
        repeat_free: bool,
    ) -> Result<TruncatedSeries, SeriesError> {
        TruncatedSeries::one(length, repeat_free)?.mul_generator_power(g, e)
    }

    /// Truncation length `L`: monomials of degree `< L` are kept.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn repeat_free(&self) -> bool {
        self.repeat_free
    }

    /// Coefficient of `X_{w_1} ⋯ X_{w_m}`; zero beyond the truncation.
    pub fn coefficient(&self, word: &[usize]) -> i128 {
        if word.len() >= self.length || word.iter().any(|&g| g == 0 || g > MAX_GENERATOR) {
            return 0;
        }
        self.by_degree[word.len()]
            .get(&encode(word))
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero terms ordered by degree, then lexicographically.
    pub fn terms(&self) -> Vec<(Vec<usize>, i128)> {
        let mut out = Vec::new();
        for level in &self.by_degree {
            let mut terms: Vec<(Vec<usize>, i128)> =
                level.iter().map(|(&m, &c)| (decode(m), c)).collect();
            terms.sort();
            out.extend(terms);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.by_degree[0].get(&0) == Some(&1)
            && self.by_degree[0].len() == 1
            && self.by_degree[1..].iter().all(HashMap::is_empty)
    }

    fn check_shape(&self, other: &TruncatedSeries) -> Result<(), SeriesError> {
        if self.length != other.length || self.repeat_free != other.repeat_free {
            return Err(SeriesError::ShapeMismatch);
        }
        Ok(())
    }

    fn tidy(mut self) -> TruncatedSeries {
        for level in &mut self.by_degree {
            level.retain(|_, c| *c != 0);
        }
        self
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.check_shape(other)?;
        let flat = |s: &TruncatedSeries| -> Vec<Vec<(Mono, u16, i128)>> {
            s.by_degree
                .iter()
                .map(|lvl| lvl.iter().map(|(&m, &c)| (m, mask(m), c)).collect())
                .collect()
        };
        let (a, b) = (flat(self), flat(other));
        let mut out = TruncatedSeries::zero(self.length, self.repeat_free);
        for (da, terms_a) in a.iter().enumerate() {
            for (db, terms_b) in b.iter().enumerate().take(self.length - da) {
                let target = &mut out.by_degree[da + db];
                for &(ma, ka, ca) in terms_a {
                    for &(mb, kb, cb) in terms_b {
                        if self.repeat_free && ka & kb != 0 {
                            continue;
                        }
                        let c = ca.checked_mul(cb).ok_or(SeriesError::Overflow)?;
                        add_into(target, ma | (mb << (4 * da)), c)?;
                    }
                }
            }
        }
        Ok(out.tidy())
    }

    /// Right multiplication by the expansion of `x_g^e`.
    pub fn mul_generator_power(&self, g: usize, e: i64) -> Result<TruncatedSeries, SeriesError> {
        if g == 0 || g > MAX_GENERATOR {
            return Err(SeriesError::GeneratorOutOfRange {
                generator: g as i64,
            });
        }
        if e == 0 {
            return Ok(self.clone());
        }
        let max_power = if self.repeat_free { 1 } else { self.length - 1 };
        let coeffs = power_coefficients(e, max_power)?;
        let gbit = 1u16 << g;
        let mut out = TruncatedSeries::zero(self.length, self.repeat_free);
        for (d, level) in self.by_degree.iter().enumerate() {
            for (&m, &c) in level {
                let blocked = self.repeat_free && mask(m) & gbit != 0;
                let mut mono = m;
                for (p, &k) in coeffs.iter().enumerate() {
                    if d + p >= self.length || (blocked && p > 0) {
                        break;
                    }
                    let term = c.checked_mul(k).ok_or(SeriesError::Overflow)?;
                    add_into(&mut out.by_degree[d + p], mono, term)?;
                    mono |= (g as Mono) << (4 * (d + p));
                }
            }
        }
        Ok(out.tidy())
    }

    /// The multiplicative inverse `Σ (1 − s)^m`; requires constant term 1.
    pub fn inverse(&self) -> Result<TruncatedSeries, SeriesError> {
        debug_assert_eq!(self.by_degree[0].get(&0), Some(&1));
        let mut neg_tail = self.clone();
        neg_tail.by_degree[0].clear();
        for level in &mut neg_tail.by_degree {
            for c in level.values_mut() {
                *c = c.checked_neg().ok_or(SeriesError::Overflow)?;
            }
        }
        let mut result = TruncatedSeries::one(self.length, self.repeat_free)?;
        let mut power = result.clone();
        for _ in 1..self.length {
            power = power.mul(&neg_tail)?;
            result = result.add(&power)?;
        }
        Ok(result)
    }

    fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (d, level) in other.by_degree.iter().enumerate() {
            for (&m, &c) in level {
                add_into(&mut out.by_degree[d], m, c)?;
            }
        }
        Ok(out.tidy())
    }
}

/// Coefficients of `(1 + X)^e` up to `X^max_power`.
fn power_coefficients(e: i64, max_power: usize) -> Result<Vec<i128>, SeriesError> {
    let mut out = vec![1i128];
    let mut c = 1i128;
    for p in 1..=max_power as i128 {
        // C(e, p) = C(e, p - 1) * (e - p + 1) / p, valid for negative e too
        c = c
            .checked_mul(e as i128 - p + 1)
            .ok_or(SeriesError::Overflow)?
            / p;
        if c == 0 {
            break;
        }
        out.push(c);
    }
    Ok(out)
}

/// The Magnus expansion `x_g ↦ 1 + X_g` of a free group word. Letters are
/// nonzero integers, `-g` standing for `x_g⁻¹`.
pub fn magnus_expand(
    word: &[i32],
    length: usize,
    repeat_free: bool,
) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::one(length, repeat_free)?;
    let mut i = 0;
    while i < word.len() {
        let g = word[i].unsigned_abs() as usize;
        if g == 0 || g > MAX_GENERATOR {
            return Err(SeriesError::GeneratorOutOfRange {
                generator: word[i] as i64,
            });
        }
        let mut e = 0i64;
        while i < word.len() && word[i].unsigned_abs() as usize == g {
            e += word[i].signum() as i64;
            i += 1;
        }
        s = s.mul_generator_power(g, e)?;
    }
    Ok(s)
}
