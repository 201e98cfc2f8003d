//! Nested commutator syllables and the escalation rewrite.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use super::braid::{inverse_letters, Letter, PureBraidWord};
use super::BandError;

/// A pure braid generator or a nested commutator `[a, b] = a b a⁻¹ b⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    Letter(Letter),
    Comm(Box<Syllable>, Box<Syllable>),
}

impl Syllable {
    pub fn comm(a: Syllable, b: Syllable) -> Syllable {
        Syllable::Comm(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Syllable::Letter(_) => 1,
            Syllable::Comm(a, b) => a.degree() + b.degree(),
        }
    }

    /// Components touched by the syllable.
    pub fn index(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit_letters(&mut |l| {
            out.insert(l.i);
            out.insert(l.j);
        });
        out
    }

    /// The generators appearing in the syllable tree, one per leaf.
    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.visit_letters(&mut |l| out.push(l));
        out
    }

    fn visit_letters(&self, f: &mut impl FnMut(Letter)) {
        match self {
            Syllable::Letter(l) => f(*l),
            Syllable::Comm(a, b) => {
                a.visit_letters(f);
                b.visit_letters(f);
            }
        }
    }

    /// True when the syllable has exactly one more component than its
    /// degree. Syllables with fewer components are trivial up to link
    /// homotopy.
    pub fn is_distinct_type(&self) -> bool {
        self.index().len() == self.degree() + 1
    }

    /// The inverse, again as a syllable: `[a, b]⁻¹ = [b, a]`.
    pub fn inverse(&self) -> Syllable {
        match self {
            Syllable::Letter(l) => Syllable::Letter(l.inverse()),
            Syllable::Comm(a, b) => Syllable::Comm(b.clone(), a.clone()),
        }
    }

    pub fn expand(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.expand_into(&mut out);
        out
    }

    fn expand_into(&self, out: &mut Vec<Letter>) {
        match self {
            Syllable::Letter(l) => out.push(*l),
            Syllable::Comm(a, b) => {
                let (ea, eb) = (a.expand(), b.expand());
                out.extend_from_slice(&ea);
                out.extend_from_slice(&eb);
                out.extend(inverse_letters(&ea));
                out.extend(inverse_letters(&eb));
            }
        }
    }

    /// Reads `letters` as a single nested commutator, if possible.
    pub fn parse(letters: &[Letter]) -> Option<Syllable> {
        match letters.len() {
            0 => None,
            1 => Some(Syllable::Letter(letters[0])),
            len if len % 2 == 1 => None,
            len => {
                let half = len / 2;
                (1..half).find_map(|p| {
                    let q = half - p;
                    let (a, b) = (&letters[..p], &letters[p..p + q]);
                    if letters[half..half + p] != inverse_letters(a)[..]
                        || letters[half + p..] != inverse_letters(b)[..]
                    {
                        return None;
                    }
                    Some(Syllable::comm(Syllable::parse(a)?, Syllable::parse(b)?))
                })
            }
        }
    }

    /// True when every generator of `self` commutes with `x`, so that `x`
    /// commutes with the whole syllable.
    pub fn commutes_with(&self, x: Letter) -> bool {
        self.leaves().into_iter().all(|l| l.commutes_with(x))
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syllable::Letter(l) => write!(f, "{l}"),
            Syllable::Comm(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// Result of moving one generator across an adjacent syllable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escalation {
    pub word: PureBraidWord,
    /// The higher-degree commutator inserted between the two, if any.
    pub correction: Option<Syllable>,
    /// Letter positions of the correction inside `word`.
    pub correction_range: Range<usize>,
}

/// Moves the generator at `position` across the syllable occupying
/// `syllable`, which must sit immediately after or before it.
///
/// With `x` the generator and `s` the syllable, `x s` is rewritten to
/// `s [s⁻¹, x] x` and `s x` to `x [x⁻¹, s] s`. Both are identities in the
/// free group on the generators. When `x` commutes with every generator of
/// `s`, the two are simply transposed.
pub fn escalate(
    w: &PureBraidWord,
    position: usize,
    syllable: Range<usize>,
) -> Result<Escalation, BandError> {
    let letters = w.letters();
    let Range { start, end } = syllable;
    if start >= end || end > letters.len() {
        return Err(BandError::MalformedSyllable { start, end });
    }
    let x_first = position + 1 == start;
    if position >= letters.len() || !(x_first || position == end) {
        return Err(BandError::NotAdjacent {
            position,
            start,
            end,
        });
    }
    let s =
        Syllable::parse(&letters[start..end]).ok_or(BandError::MalformedSyllable { start, end })?;
    let x = letters[position];
    let block_start = start.min(position);
    let block_end = end.max(position + 1);

    let s_letters = s.expand();
    let correction = if s.commutes_with(x) {
        None
    } else if x_first {
        Some(Syllable::comm(s.inverse(), Syllable::Letter(x)))
    } else {
        Some(Syllable::comm(Syllable::Letter(x.inverse()), s.clone()))
    };
    let c_letters = correction
        .as_ref()
        .map(Syllable::expand)
        .unwrap_or_default();

    let mut out = letters[..block_start].to_vec();
    let correction_range;
    if x_first {
        out.extend_from_slice(&s_letters);
        let c0 = out.len();
        out.extend_from_slice(&c_letters);
        correction_range = c0..out.len();
        out.push(x);
    } else {
        out.push(x);
        let c0 = out.len();
        out.extend_from_slice(&c_letters);
        correction_range = c0..out.len();
        out.extend_from_slice(&s_letters);
    }
    out.extend_from_slice(&letters[block_end..]);
    Ok(Escalation {
        word: PureBraidWord::new(w.strands(), out)?,
        correction,
        correction_range,
    })
}

#[cfg(test)]
mod tests {
    use super::super::braid::{artin_action::action, free_reduce};
    use super::*;

    fn a(i: usize, j: usize) -> Letter {
        Letter::new(i, j, 1)
    }

    #[test]
    fn parse_round_trips_nested_commutators() {
        let s = Syllable::comm(
            Syllable::Letter(a(1, 4)),
            Syllable::comm(Syllable::Letter(a(2, 4)), Syllable::Letter(a(3, 4))),
        );
        let letters = s.expand();
        assert_eq!(letters.len(), 10);
        assert_eq!(Syllable::parse(&letters).unwrap().expand(), letters);
        assert_eq!(s.degree(), 3);
        assert_eq!(s.index(), BTreeSet::from([1, 2, 3, 4]));
        assert!(s.is_distinct_type());
        assert!(Syllable::parse(&[a(1, 2), a(1, 3)]).is_none());
    }

    #[test]
    fn inverse_syllable_expands_to_inverse_word() {
        let s = Syllable::comm(Syllable::Letter(a(1, 3)), Syllable::Letter(a(2, 3)));
        assert_eq!(s.inverse().expand(), inverse_letters(&s.expand()));
    }

    #[test]
    fn moving_a23_across_a12_a13() {
        let s = Syllable::comm(Syllable::Letter(a(1, 2)), Syllable::Letter(a(1, 3)));
        let mut letters = vec![a(2, 3)];
        letters.extend(s.expand());
        let w = PureBraidWord::new(3, letters).unwrap();
        let e = escalate(&w, 0, 1..5).unwrap();
        let c = e.correction.unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.index(), BTreeSet::from([1, 2, 3]));
        assert_eq!(free_reduce(e.word.letters()), free_reduce(w.letters()));
        assert_eq!(&e.word.letters()[e.correction_range], &c.expand()[..]);
    }

    #[test]
    fn commuting_generator_is_transposed() {
        let s = Syllable::comm(Syllable::Letter(a(1, 2)), Syllable::Letter(a(1, 5)));
        let mut letters = s.expand();
        letters.push(a(3, 4));
        let w = PureBraidWord::new(5, letters).unwrap();
        let e = escalate(&w, 4, 0..4).unwrap();
        assert_eq!(e.correction, None);
        assert_eq!(e.word.letters()[0], a(3, 4));
        assert_eq!(action(5, e.word.letters()), action(5, w.letters()));
    }

    #[test]
    fn escalate_errors() {
        let w = PureBraidWord::new(3, vec![a(1, 2), a(1, 3), a(2, 3)]).unwrap();
        assert_eq!(
            escalate(&w, 0, 2..3),
            Err(BandError::NotAdjacent {
                position: 0,
                start: 2,
                end: 3
            })
        );
        assert_eq!(
            escalate(&w, 0, 1..3),
            Err(BandError::MalformedSyllable { start: 1, end: 3 })
        );
    }
}
