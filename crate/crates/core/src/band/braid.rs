//! Pure braid words and their closures.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::BandError;
use crate::diagram::{ArcId, ArcUnion, Crossing, LinkDiagram, Sign};

/// The pure braid generator `A_{ij}` (strand `j` looping once around strand
/// `i`, `i < j`) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub exp: i8,
}

impl Letter {
    /// `A_{ab}^{exp}` with the pair taken in increasing order.
    pub fn new(a: usize, b: usize, exp: i8) -> Letter {
        debug_assert!(a != b && (exp == 1 || exp == -1));
        Letter {
            i: a.min(b),
            j: a.max(b),
            exp,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            exp: -self.exp,
            ..self
        }
    }

    /// True when the two generators commute by a defining relation of the
    /// pure braid group: equal pairs, or disjoint pairs that are separated
    /// or nested (neither interleaved).
    pub fn commutes_with(self, other: Letter) -> bool {
        if (self.i, self.j) == (other.i, other.j) {
            return true;
        }
        let (a, b) = (self, other);
        if a.i == b.i || a.i == b.j || a.j == b.i || a.j == b.j {
            return false;
        }
        let separated = a.j < b.i || b.j < a.i;
        let nested = (a.i < b.i && b.j < a.j) || (b.i < a.i && a.j < b.j);
        separated || nested
    }

    /// The generator as a word in the Artin generators `σ_1 … σ_{n−1}`,
    /// each entry `(k, ±1)` standing for `σ_k^{±1}`.
    pub fn artin(self) -> Vec<(usize, i8)> {
        let (i, j) = (self.i, self.j);
        let mut core = Vec::with_capacity(2 * (j - i));
        for k in (i + 1..j).rev() {
            core.push((k, 1));
        }
        core.push((i, 1));
        core.push((i, 1));
        for k in i + 1..j {
            core.push((k, -1));
        }
        if self.exp == 1 {
            core
        } else {
            core.into_iter().rev().map(|(k, e)| (k, -e)).collect()
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "A{},{}", self.i, self.j)
        } else {
            write!(f, "A{},{}^-1", self.i, self.j)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureBraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl PureBraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<PureBraidWord, BandError> {
        for l in &letters {
            if l.i == 0 || l.i >= l.j || l.j > strands || (l.exp != 1 && l.exp != -1) {
                return Err(BandError::BadLetter {
                    i: l.i,
                    j: l.j,
                    strands,
                });
            }
        }
        Ok(PureBraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> PureBraidWord {
        PureBraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> PureBraidWord {
        PureBraidWord {
            strands: self.strands,
            letters: inverse_letters(&self.letters),
        }
    }

    pub fn concat(&self, other: &PureBraidWord) -> PureBraidWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        PureBraidWord {
            strands: self.strands.max(other.strands),
            letters,
        }
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> PureBraidWord {
        PureBraidWord {
            strands: self.strands,
            letters: free_reduce(&self.letters),
        }
    }

    /// The braid closure. Strand `p` becomes component `p`; strands that
    /// never cross anything become free loops.
    pub fn closure(&self) -> LinkDiagram {
        let n = self.strands;
        let mut current: Vec<ArcId> = (1..=n as ArcId).collect();
        let mut strand_at: Vec<usize> = (1..=n).collect();
        let mut components: BTreeMap<ArcId, usize> = (1..=n).map(|p| (p as ArcId, p)).collect();
        let mut next = n as ArcId + 1;
        let mut crossings = Vec::new();
        for (k, e) in self.letters.iter().flat_map(|l| l.artin()) {
            let (l_in, r_in) = (current[k - 1], current[k]);
            let (l_out, r_out) = (next, next + 1);
            next += 2;
            components.insert(l_out, strand_at[k - 1]);
            components.insert(r_out, strand_at[k]);
            crossings.push(if e == 1 {
                Crossing::new([r_in, l_out, r_out, l_in], Sign::Positive)
            } else {
                Crossing::new([l_in, r_in, l_out, r_out], Sign::Negative)
            });
            current[k - 1] = r_out;
            current[k] = l_out;
            strand_at.swap(k - 1, k);
        }
        debug_assert!(strand_at.iter().enumerate().all(|(p, &s)| s == p + 1));
        let mut union = ArcUnion::default();
        for (p, &top) in current.iter().enumerate() {
            union.union(p as ArcId + 1, top);
        }
        LinkDiagram::assemble(crossings, &mut union, &components, n).canonicalize()
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub(crate) fn inverse_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

pub(crate) fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}
