//! Band-sum presentations of links built from one-branched chords.
//!
//! A chord with branch `i₀` and leaves `(i₁, …, i_k)` is realized as the
//! iterated pure braid commutator `[A_{i₀i₁}, [A_{i₀i₂}, [… , A_{i₀i_k}]]]`,
//! inverted when the sign is negative. A presentation on `n` components is
//! the closure of the concatenated chord words.

mod braid;
mod syllable;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{LinkDiagram, Sign};

pub use braid::{Letter, PureBraidWord};
pub use syllable::{escalate, Escalation, Syllable};

#[cfg(test)]
pub(crate) use braid::artin_action;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error")]
pub enum BandError {
    #[error("need at least 2 components, got {n}")]
    NTooSmall { n: usize },
    #[error("component index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("component {index} occurs twice in a chord")]
    RepeatedIndex { index: usize },
    #[error("chord has no leaves")]
    EmptyLeaves,
    #[error("position {position} out of range for {len} chords")]
    BadPosition { position: usize, len: usize },
    #[error("letters {start}..{end} do not form a nested commutator")]
    MalformedSyllable { start: usize, end: usize },
    #[error("letter {position} is not adjacent to letters {start}..{end}")]
    NotAdjacent {
        position: usize,
        start: usize,
        end: usize,
    },
    #[error("bad generator A{i},{j} on {strands} strands")]
    BadLetter { i: usize, j: usize, strands: usize },
}

/// A one-branched chord of degree `leaves.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChordSpec {
    pub branch: usize,
    pub leaves: Vec<usize>,
    #[serde(with = "sign_as_int")]
    pub sign: Sign,
}

mod sign_as_int {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::diagram::Sign;

    pub fn serialize<S: Serializer>(sign: &Sign, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(sign.value())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v)
            .ok_or_else(|| de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

impl ChordSpec {
    pub fn new(branch: usize, leaves: Vec<usize>, sign: Sign) -> ChordSpec {
        ChordSpec {
            branch,
            leaves,
            sign,
        }
    }

    pub fn degree(&self) -> usize {
        self.leaves.len()
    }

    /// Checks the chord against an ambient component count `n`.
    pub fn validate(&self, n: usize) -> Result<(), BandError> {
        if self.leaves.is_empty() {
            return Err(BandError::EmptyLeaves);
        }
        let mut seen = BTreeSet::new();
        for &i in std::iter::once(&self.branch).chain(&self.leaves) {
            if i == 0 || i > n {
                return Err(BandError::IndexOutOfRange { index: i, n });
            }
            if !seen.insert(i) {
                return Err(BandError::RepeatedIndex { index: i });
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> ChordSpec {
        ChordSpec {
            sign: self.sign.flip(),
            ..self.clone()
        }
    }

    /// The chord as a nested commutator syllable (before applying the sign).
    pub fn syllable(&self) -> Syllable {
        let mut iter = self.leaves.iter().rev();
        let last = *iter.next().expect("chord has leaves");
        let mut s = Syllable::Letter(Letter::new(self.branch, last, 1));
        for &leaf in iter {
            s = Syllable::comm(Syllable::Letter(Letter::new(self.branch, leaf, 1)), s);
        }
        match self.sign {
            Sign::Positive => s,
            Sign::Negative => s.inverse(),
        }
    }
}

/// `{i₀, i₁, …, i_k}`.
pub fn chord_index(c: &ChordSpec) -> BTreeSet<usize> {
    std::iter::once(c.branch)
        .chain(c.leaves.iter().copied())
        .collect()
}

/// The pure braid word of a chord; it has `3·2^{k−1} − 2` letters.
pub fn chord_word(c: &ChordSpec, strands: usize) -> Result<PureBraidWord, BandError> {
    c.validate(strands)?;
    PureBraidWord::new(strands, c.syllable().expand())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSumPresentation {
    pub n: usize,
    pub chords: Vec<ChordSpec>,
}

impl BandSumPresentation {
    pub fn empty(n: usize) -> BandSumPresentation {
        BandSumPresentation {
            n,
            chords: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), BandError> {
        self.chords.iter().try_for_each(|c| c.validate(self.n))
    }

    /// Every chord has degree `n − 1`, so its index is all of `{1, …, n}`.
    pub fn is_normal_form(&self) -> bool {
        self.chords.iter().all(|c| c.degree() + 1 == self.n)
    }

    /// The concatenated chord words.
    pub fn word(&self) -> Result<PureBraidWord, BandError> {
        let mut letters = Vec::new();
        for c in &self.chords {
            letters.extend(chord_word(c, self.n)?.letters());
        }
        PureBraidWord::new(self.n, letters)
    }

    /// Canonical compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("presentation serializes");
        format!("{value}\n")
    }
}

/// The Milnor link on `n` components: a single chord of degree `n − 1`
/// with branch `n` and leaves `(1, …, n − 1)`.
pub fn milnor_link(n: usize) -> Result<BandSumPresentation, BandError> {
    if n < 2 {
        return Err(BandError::NTooSmall { n });
    }
    Ok(BandSumPresentation {
        n,
        chords: vec![ChordSpec::new(n, (1..n).collect(), Sign::Positive)],
    })
}

/// The closure of the presentation's braid word; components follow strands.
pub fn realize(p: &BandSumPresentation) -> Result<LinkDiagram, BandError> {
    Ok(p.word()?.closure())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// A C_k-move.
    Ck,
    /// A C_k-move whose index has exactly k + 1 elements.
    DCk,
    /// A d-C_k-move given by a single one-branched chord.
    OneBranchedDCk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveOp {
    Insert,
    Delete,
}

/// One chord insertion or deletion, viewed as a local move on the link.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveRecord {
    pub op: MoveOp,
    pub kind: MoveKind,
    pub degree: usize,
    pub index: BTreeSet<usize>,
    pub position: usize,
    pub chord: ChordSpec,
}

impl MoveRecord {
    fn for_chord(op: MoveOp, chord: &ChordSpec, position: usize) -> MoveRecord {
        MoveRecord {
            op,
            kind: MoveKind::OneBranchedDCk,
            degree: chord.degree(),
            index: chord_index(chord),
            position,
            chord: chord.clone(),
        }
    }

    /// Applies the recorded operation, checking that a deletion removes the
    /// recorded chord.
    pub fn apply(&self, p: &BandSumPresentation) -> Result<BandSumPresentation, BandError> {
        match self.op {
            MoveOp::Insert => insert_chord(p, &self.chord, self.position).map(|(q, _)| q),
            MoveOp::Delete => {
                if p.chords.get(self.position) != Some(&self.chord) {
                    return Err(BandError::BadPosition {
                        position: self.position,
                        len: p.chords.len(),
                    });
                }
                delete_chord(p, self.position).map(|(q, _)| q)
            }
        }
    }
}

pub fn insert_chord(
    p: &BandSumPresentation,
    c: &ChordSpec,
    position: usize,
) -> Result<(BandSumPresentation, MoveRecord), BandError> {
    if position > p.chords.len() {
        return Err(BandError::BadPosition {
            position,
            len: p.chords.len(),
        });
    }
    c.validate(p.n)?;
    let mut q = p.clone();
    q.chords.insert(position, c.clone());
    Ok((q, MoveRecord::for_chord(MoveOp::Insert, c, position)))
}

pub fn delete_chord(
    p: &BandSumPresentation,
    position: usize,
) -> Result<(BandSumPresentation, MoveRecord), BandError> {
    if position >= p.chords.len() {
        return Err(BandError::BadPosition {
            position,
            len: p.chords.len(),
        });
    }
    let mut q = p.clone();
    let c = q.chords.remove(position);
    let record = MoveRecord::for_chord(MoveOp::Delete, &c, position);
    Ok((q, record))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn milnor_link_shapes() {
        let p = milnor_link(3).unwrap();
        assert_eq!(p.chords.len(), 1);
        assert_eq!(p.chords[0].degree(), 2);
        assert_eq!(chord_index(&p.chords[0]), BTreeSet::from([1, 2, 3]));
        assert_eq!(milnor_link(1), Err(BandError::NTooSmall { n: 1 }));
        assert!(milnor_link(5).unwrap().is_normal_form());
    }

    #[test]
    fn chord_words() {
        let c = ChordSpec::new(2, vec![1], Sign::Positive);
        assert_eq!(
            chord_word(&c, 2).unwrap().letters(),
            &[Letter::new(1, 2, 1)]
        );

        let c = ChordSpec::new(3, vec![1, 2], Sign::Positive);
        let w = chord_word(&c, 3).unwrap();
        let (a13, a23) = (Letter::new(1, 3, 1), Letter::new(2, 3, 1));
        assert_eq!(w.letters(), &[a13, a23, a13.inverse(), a23.inverse()]);
        assert_eq!(chord_word(&c.inverse(), 3).unwrap(), w.inverse());

        for k in 1..=5 {
            let c = ChordSpec::new(k + 1, (1..=k).collect(), Sign::Positive);
            assert_eq!(chord_word(&c, k + 1).unwrap().len(), 3 * (1 << (k - 1)) - 2);
        }
    }

    #[test]
    fn chord_validation() {
        let c = ChordSpec::new(4, vec![2], Sign::Positive);
        assert_eq!(chord_index(&c), BTreeSet::from([2, 4]));
        assert_eq!(
            chord_word(&c, 3),
            Err(BandError::IndexOutOfRange { index: 4, n: 3 })
        );
        let c = ChordSpec::new(2, vec![1, 2], Sign::Positive);
        assert_eq!(c.validate(3), Err(BandError::RepeatedIndex { index: 2 }));
        assert_eq!(
            ChordSpec::new(2, vec![], Sign::Positive).validate(3),
            Err(BandError::EmptyLeaves)
        );
    }

    #[test]
    fn json_is_canonical() {
        let p = milnor_link(3).unwrap();
        let text = p.to_json();
        assert_eq!(
            text,
            "{\"chords\":[{\"branch\":3,\"leaves\":[1,2],\"sign\":1}],\"n\":3}\n"
        );
        let back: BandSumPresentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<BandSumPresentation>(
            "{\"chords\":[{\"branch\":3,\"leaves\":[1,2],\"sign\":2}],\"n\":3}"
        )
        .is_err());
    }

    #[test]
    fn realize_basics() {
        assert_eq!(
            realize(&BandSumPresentation::empty(3)).unwrap(),
            LinkDiagram::trivial(3)
        );
        let hopf = realize(&milnor_link(2).unwrap()).unwrap();
        assert_eq!(hopf.linking_number(1, 2), Ok(1));
        let borromean = realize(&milnor_link(3).unwrap()).unwrap();
        assert_eq!(borromean.n_components(), 3);
        assert!(borromean.linking_matrix().values().all(|&v| v == 0));
    }

    #[test]
    fn insert_delete() {
        let p = milnor_link(3).unwrap();
        let c = ChordSpec::new(3, vec![2, 1], Sign::Negative);
        let (q, rec) = insert_chord(&p, &c, 0).unwrap();
        assert_eq!(rec.kind, MoveKind::OneBranchedDCk);
        assert_eq!(rec.index, BTreeSet::from([1, 2, 3]));
        assert_eq!(rec.apply(&p).unwrap(), q);
        let (back, rec) = delete_chord(&q, 0).unwrap();
        assert_eq!(back, p);
        assert_eq!(rec.apply(&q).unwrap(), p);
        let (empty, rec) = delete_chord(&p, 0).unwrap();
        assert_eq!(empty, BandSumPresentation::empty(3));
        assert_eq!(rec.degree, 2);
        assert_eq!(
            delete_chord(&empty, 0),
            Err(BandError::BadPosition {
                position: 0,
                len: 0
            })
        );
        assert_eq!(
            insert_chord(&p, &c, 2).map(|_| ()),
            Err(BandError::BadPosition {
                position: 2,
                len: 1
            })
        );
    }

    #[test]
    fn deletion_removes_exactly_one_chord_word() {
        let mut p = milnor_link(4).unwrap();
        p.chords.push(ChordSpec::new(2, vec![1], Sign::Negative));
        p.chords
            .push(ChordSpec::new(4, vec![3, 1, 2], Sign::Positive));
        for pos in 0..p.chords.len() {
            let (q, _) = delete_chord(&p, pos).unwrap();
            let full = p.word().unwrap();
            let cut = q.word().unwrap();
            let chord = chord_word(&p.chords[pos], p.n).unwrap();
            let offset: usize = p.chords[..pos]
                .iter()
                .map(|c| chord_word(c, p.n).unwrap().len())
                .sum();
            let mut rebuilt = cut.letters()[..offset].to_vec();
            rebuilt.extend_from_slice(chord.letters());
            rebuilt.extend_from_slice(&cut.letters()[offset..]);
            assert_eq!(rebuilt, full.letters());
        }
    }
}
