//! Brunnian-ness, trivialization certificates and C_n / C_2 verdicts.
//!
//! For Brunnian links, C_n-equivalence coincides with link homotopy, which
//! is decided by comparing the length-`n` distinct-index μ̄-invariants.
//! Triviality of sublinks is established by bounded simplification, so
//! verdicts are three-valued.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::{
    delete_chord, realize, BandError, BandSumPresentation, ChordSpec, Letter, MoveKind, MoveRecord,
    Syllable,
};
use crate::diagram::{reidemeister_simplify, LinkDiagram, Sign};
use crate::milnor::{mu_vector, permutations, MilnorError, MuReport};

/// Rewriting steps allowed in the first stage of [`normalize`].
pub const DEFAULT_NORMALIZE_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two components of a proper sublink link each other.
    LinkingNumber {
        sublink: Vec<usize>,
        pair: [usize; 2],
        value: i64,
    },
    /// A μ̄-invariant of a proper sublink is nonzero.
    Mu {
        sublink: Vec<usize>,
        index: Vec<usize>,
        value: i64,
        delta: u64,
    },
    /// A proper sublink did not simplify to the trivial diagram.
    Stalled {
        sublink: Vec<usize>,
        crossings: usize,
    },
    MuDiffers {
        index: Vec<usize>,
        left: i64,
        right: i64,
    },
    LinkingDiffers {
        pair: [usize; 2],
        left: i64,
        right: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes() -> Verdict {
        Verdict {
            status: Status::Yes,
            witness: None,
        }
    }

    fn with(status: Status, witness: Witness) -> Verdict {
        Verdict {
            status,
            witness: Some(witness),
        }
    }

    /// Canonical compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("verdict serializes");
        format!("{value}\n")
    }
}

/// Chord deletions taking a presentation to the trivial one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub moves: Vec<MoveRecord>,
}

impl MoveCertificate {
    /// Applies every recorded move in order.
    pub fn replay(&self, start: &BandSumPresentation) -> Result<BandSumPresentation, BandError> {
        self.moves
            .iter()
            .try_fold(start.clone(), |p, m| m.apply(&p))
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        format!("{value}\n")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error")]
pub enum ClassifierError {
    #[error("chord {position} has degree {degree}, expected {expected}")]
    NotNormalForm {
        position: usize,
        degree: usize,
        expected: usize,
    },
    #[error("diagram {diagram} is not Brunnian")]
    NotBrunnian { diagram: usize, witness: Witness },
    #[error("component counts differ: {left} vs {right}")]
    ComponentCountMismatch { left: usize, right: usize },
    #[error("normalization stopped after {steps} steps with {remaining} syllables")]
    NormalizationStalled {
        steps: usize,
        remaining: usize,
        partial: Vec<String>,
    },
    #[error("normalization changed the link-homotopy invariants")]
    InvariantMismatch,
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
}

/// Decides whether every proper sublink of `d` is trivial.
///
/// μ̄-invariants with index inside a sublink are the sublink's own
/// invariants, so every distinct-index invariant of length below `n` is
/// checked on `d` directly; a nonzero one is a certified obstruction.
/// Otherwise each sublink missing one component is simplified; those
/// contain every smaller sublink.
pub fn is_brunnian(d: &LinkDiagram, budget: usize) -> Verdict {
    let n = d.n_components();
    if n < 2 {
        return Verdict::yes();
    }
    for (&(i, j), &v) in &d.linking_matrix() {
        if n > 2 && i < j && v != 0 {
            return Verdict::with(
                Status::No,
                Witness::LinkingNumber {
                    sublink: vec![i, j],
                    pair: [i, j],
                    value: v,
                },
            );
        }
    }
    for k in 3..n {
        let report = mu_vector(d, k).expect("length within range");
        if let Some(e) = report.entries.iter().find(|e| e.value != 0) {
            let sublink: BTreeSet<usize> = e.index.iter().copied().collect();
            return Verdict::with(
                Status::No,
                Witness::Mu {
                    sublink: sublink.into_iter().collect(),
                    index: e.index.clone(),
                    value: e.value,
                    delta: e.delta,
                },
            );
        }
    }
    let stalled: Vec<Option<Witness>> = (1..=n)
        .into_par_iter()
        .map(|drop| {
            let keep: BTreeSet<usize> = (1..=n).filter(|&c| c != drop).collect();
            let sub = d.sublink(&keep).expect("valid selection");
            let (out, _) = reidemeister_simplify(&sub, budget);
            (out.crossing_count() > 0).then(|| Witness::Stalled {
                sublink: keep.into_iter().collect(),
                crossings: out.crossing_count(),
            })
        })
        .collect();
    match stalled.into_iter().flatten().next() {
        Some(w) => Verdict::with(Status::Inconclusive, w),
        None => Verdict::yes(),
    }
}

/// Deletes the chords of a normal-form presentation from last to first.
pub fn trivialize(p: &BandSumPresentation) -> Result<MoveCertificate, ClassifierError> {
    p.validate()?;
    if let Some((position, c)) = p
        .chords
        .iter()
        .enumerate()
        .find(|(_, c)| c.degree() + 1 != p.n)
    {
        return Err(ClassifierError::NotNormalForm {
            position,
            degree: c.degree(),
            expected: p.n.saturating_sub(1),
        });
    }
    let mut cur = p.clone();
    let mut moves = Vec::with_capacity(p.chords.len());
    while !cur.chords.is_empty() {
        let (next, record) = delete_chord(&cur, cur.chords.len() - 1)?;
        debug_assert_eq!(record.kind, MoveKind::OneBranchedDCk);
        moves.push(record);
        cur = next;
    }
    Ok(MoveCertificate { moves })
}

pub fn normalize(p: &BandSumPresentation) -> Result<BandSumPresentation, ClassifierError> {
    normalize_with_budget(p, DEFAULT_NORMALIZE_BUDGET)
}

/// Rewrites a presentation of a Brunnian link into full-index chords with
/// the same link-homotopy class.
///
/// First the chord syllables are collected: adjacent inverse syllables
/// cancel, a syllable of smaller index is carried towards its inverse with
/// `a b = b [b⁻¹, a] a`, and commutators whose index has at most as many
/// components as their degree are dropped, being trivial up to link
/// homotopy. If chords of smaller index survive, the result is rebuilt
/// from the μ̄-invariants `μ̄(π, n−1, n)` in the basis of chords with branch
/// `n` and leaves `(π, n−1)`.
pub fn normalize_with_budget(
    p: &BandSumPresentation,
    budget: usize,
) -> Result<BandSumPresentation, ClassifierError> {
    p.validate()?;
    if p.is_normal_form() {
        return Ok(p.clone());
    }
    let n = p.n;
    let target = mu_vector(&realize(p)?, n)?;
    let items = collect(p, budget)?;
    let full: BTreeSet<usize> = (1..=n).collect();
    let chords: Option<Vec<ChordSpec>> = items
        .iter()
        .map(|s| (s.index() == full).then(|| as_chord(s)).flatten())
        .collect();
    let out = match chords {
        Some(chords) => BandSumPresentation { n, chords },
        None => from_invariants(n, &target)?,
    };
    if mu_vector(&realize(&out)?, n)? != target {
        return Err(ClassifierError::InvariantMismatch);
    }
    Ok(out)
}

fn collect(p: &BandSumPresentation, budget: usize) -> Result<Vec<Syllable>, ClassifierError> {
    let full: BTreeSet<usize> = (1..=p.n).collect();
    let mut items: Vec<Syllable> = p.chords.iter().map(ChordSpec::syllable).collect();
    let mut steps = 0;
    loop {
        items.retain(Syllable::is_distinct_type);
        let inverse_words: Vec<Vec<Letter>> = items.iter().map(|s| s.inverse().expand()).collect();
        let words: Vec<Vec<Letter>> = items.iter().map(Syllable::expand).collect();
        if let Some(i) =
            (0..items.len().saturating_sub(1)).find(|&i| words[i + 1] == inverse_words[i])
        {
            items.drain(i..i + 2);
            continue;
        }
        let mover = (0..items.len()).find(|&i| {
            items[i].index() != full && (i + 2..items.len()).any(|j| words[j] == inverse_words[i])
        });
        let Some(i) = mover else {
            return Ok(items);
        };
        if steps >= budget {
            return Err(ClassifierError::NormalizationStalled {
                steps,
                remaining: items.len(),
                partial: items.iter().map(|s| s.to_string()).collect(),
            });
        }
        steps += 1;
        let a = items[i].clone();
        let b = items[i + 1].clone();
        let commute = a
            .leaves()
            .iter()
            .all(|&x| b.leaves().iter().all(|&y| x.commutes_with(y)));
        let replacement = if commute {
            vec![b, a]
        } else {
            let correction = Syllable::comm(b.inverse(), a.clone());
            vec![b, correction, a]
        };
        items.splice(i..i + 2, replacement);
    }
}

/// Reads a syllable back as a one-branched chord, if it has that shape.
fn as_chord(s: &Syllable) -> Option<ChordSpec> {
    let leaves = s.leaves();
    let common = |l: &Letter| [l.i, l.j];
    let first = common(leaves.first()?);
    let branch = first
        .into_iter()
        .find(|b| leaves.iter().all(|l| l.i == *b || l.j == *b))?;
    let other = |l: &Letter| if l.i == branch { l.j } else { l.i };
    let order: Vec<usize> = leaves.iter().map(other).collect();
    let mut candidates = vec![ChordSpec::new(branch, order.clone(), Sign::Positive)];
    if order.len() > 1 {
        let mut rotated = vec![order[order.len() - 1]];
        rotated.extend_from_slice(&order[..order.len() - 1]);
        candidates.push(ChordSpec::new(branch, rotated, Sign::Negative));
    } else if leaves[0].exp < 0 {
        candidates = vec![ChordSpec::new(branch, order, Sign::Negative)];
    }
    let word = s.expand();
    candidates
        .into_iter()
        .find(|c| c.syllable().expand() == word)
}

/// The chord with branch `n` and leaves `(π, n − 1)`.
fn basis_chord(n: usize, pi: &[usize], sign: Sign) -> ChordSpec {
    let mut leaves = pi.to_vec();
    leaves.push(n - 1);
    ChordSpec::new(n, leaves, sign)
}

fn from_invariants(n: usize, target: &MuReport) -> Result<BandSumPresentation, ClassifierError> {
    let perms = if n >= 3 {
        permutations(n - 2, n - 2)
    } else {
        vec![vec![]]
    };
    let key = |pi: &[usize]| -> Vec<usize> {
        let mut k = pi.to_vec();
        k.extend([n - 1, n]);
        k
    };
    let mut matrix = Vec::with_capacity(perms.len());
    for pi in &perms {
        let single = BandSumPresentation {
            n,
            chords: vec![basis_chord(n, pi, Sign::Positive)],
        };
        let report = mu_vector(&realize(&single)?, n)?;
        matrix.push(
            perms
                .iter()
                .map(|sigma| report.get(&key(sigma)).map_or(0, |e| e.value as i128))
                .collect::<Vec<i128>>(),
        );
    }
    let rhs: Vec<i128> = perms
        .iter()
        .map(|sigma| target.get(&key(sigma)).map_or(0, |e| e.value as i128))
        .collect();
    // matrix[π][σ] holds μ̄(σ, n−1, n) of B_π; solve Σ_π c_π matrix[π][σ] = rhs[σ]
    let transposed: Vec<Vec<i128>> = (0..perms.len())
        .map(|s| (0..perms.len()).map(|p| matrix[p][s]).collect())
        .collect();
    let coeffs = solve_integer(transposed, rhs).ok_or(ClassifierError::InvariantMismatch)?;
    let mut chords = Vec::new();
    for (pi, c) in perms.iter().zip(coeffs) {
        let sign = if c > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        for _ in 0..c.unsigned_abs() {
            chords.push(basis_chord(n, pi, sign));
        }
    }
    Ok(BandSumPresentation { n, chords })
}

/// Exact solution of a square system over the rationals, if it is integral.
fn solve_integer(a: Vec<Vec<i128>>, b: Vec<i128>) -> Option<Vec<i128>> {
    let m = b.len();
    // fraction-free Gauss-Jordan elimination on the augmented matrix
    let mut rows: Vec<Vec<i128>> = a
        .into_iter()
        .zip(b)
        .map(|(mut r, v)| {
            r.push(v);
            r
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| rows[r][col] != 0)?;
        rows.swap(col, pivot);
        for r in 0..m {
            if r == col || rows[r][col] == 0 {
                continue;
            }
            let (p, q) = (rows[col][col], rows[r][col]);
            let pivot_row = rows[col].clone();
            for (x, &y) in rows[r].iter_mut().zip(&pivot_row) {
                *x = x.checked_mul(p)?.checked_sub(y.checked_mul(q)?)?;
            }
            let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                rows[r].iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    (0..m)
        .map(|r| (rows[r][m] % rows[r][r] == 0).then(|| rows[r][m] / rows[r][r]))
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decides C_n-equivalence of two Brunnian `n`-component links.
pub fn cn_equivalent(
    d1: &LinkDiagram,
    d2: &LinkDiagram,
    budget: usize,
) -> Result<Verdict, ClassifierError> {
    let n = d1.n_components();
    if n != d2.n_components() {
        return Err(ClassifierError::ComponentCountMismatch {
            left: n,
            right: d2.n_components(),
        });
    }
    let verdicts = [is_brunnian(d1, budget), is_brunnian(d2, budget)];
    for (i, v) in verdicts.iter().enumerate() {
        if v.status == Status::No {
            return Err(ClassifierError::NotBrunnian {
                diagram: i + 1,
                witness: v.witness.clone().expect("no verdicts carry a witness"),
            });
        }
    }
    if let Some(v) = verdicts.iter().find(|v| v.status == Status::Inconclusive) {
        return Ok(v.clone());
    }
    if n < 2 {
        return Ok(Verdict::yes());
    }
    let (m1, m2) = (mu_vector(d1, n)?, mu_vector(d2, n)?);
    for (a, b) in m1.entries.iter().zip(&m2.entries) {
        if a.value != b.value {
            return Ok(Verdict::with(
                Status::No,
                Witness::MuDiffers {
                    index: a.index.clone(),
                    left: a.value,
                    right: b.value,
                },
            ));
        }
    }
    Ok(Verdict::yes())
}

/// Decides C_2-equivalence by comparing linking matrices.
pub fn c2_classify(d1: &LinkDiagram, d2: &LinkDiagram) -> Result<Verdict, ClassifierError> {
    if d1.n_components() != d2.n_components() {
        return Err(ClassifierError::ComponentCountMismatch {
            left: d1.n_components(),
            right: d2.n_components(),
        });
    }
    let (l1, l2) = (d1.linking_matrix(), d2.linking_matrix());
    for (&(i, j), &a) in &l1 {
        let b = l2[&(i, j)];
        if i < j && a != b {
            return Ok(Verdict::with(
                Status::No,
                Witness::LinkingDiffers {
                    pair: [i, j],
                    left: a,
                    right: b,
                },
            ));
        }
    }
    Ok(Verdict::yes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{insert_chord, milnor_link, PureBraidWord};
    use crate::diagram::{random_reidemeister, DEFAULT_BUDGET};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hopf_plus_unknot() -> LinkDiagram {
        PureBraidWord::new(3, vec![Letter::new(1, 2, 1)])
            .unwrap()
            .closure()
    }

    #[test]
    fn milnor_links_are_brunnian() {
        for n in 2..=4 {
            let d = realize(&milnor_link(n).unwrap()).unwrap();
            assert_eq!(is_brunnian(&d, DEFAULT_BUDGET), Verdict::yes(), "n = {n}");
        }
        assert_eq!(
            is_brunnian(&LinkDiagram::trivial(3), DEFAULT_BUDGET),
            Verdict::yes()
        );
    }

    #[test]
    fn split_hopf_is_not_brunnian() {
        let v = is_brunnian(&hopf_plus_unknot(), DEFAULT_BUDGET);
        assert_eq!(v.status, Status::No);
        assert_eq!(
            v.witness,
            Some(Witness::LinkingNumber {
                sublink: vec![1, 2],
                pair: [1, 2],
                value: 1
            })
        );
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let d = realize(&milnor_link(3).unwrap()).unwrap();
        let v = is_brunnian(&d, 0);
        assert_eq!(v.status, Status::Inconclusive);
        assert!(matches!(v.witness, Some(Witness::Stalled { .. })));
    }

    #[test]
    fn certificates_replay() {
        let mut p = milnor_link(4).unwrap();
        p.chords
            .push(ChordSpec::new(2, vec![4, 1, 3], Sign::Negative));
        p.chords
            .push(ChordSpec::new(1, vec![2, 3, 4], Sign::Positive));
        let cert = trivialize(&p).unwrap();
        assert_eq!(cert.moves.len(), 3);
        assert_eq!(cert.replay(&p).unwrap(), BandSumPresentation::empty(4));
        assert!(cert
            .moves
            .iter()
            .all(|m| m.kind == MoveKind::OneBranchedDCk && m.index == (1..=4).collect()));
        assert_eq!(trivialize(&milnor_link(3).unwrap()).unwrap().moves.len(), 1);
    }

    #[test]
    fn trivialize_rejects_low_degree_chords() {
        let mut p = milnor_link(3).unwrap();
        p.chords.push(ChordSpec::new(2, vec![1], Sign::Positive));
        assert_eq!(
            trivialize(&p),
            Err(ClassifierError::NotNormalForm {
                position: 1,
                degree: 1,
                expected: 2
            })
        );
    }

    #[test]
    fn normalize_keeps_normal_input() {
        let p = milnor_link(4).unwrap();
        assert_eq!(normalize(&p).unwrap(), p);
    }

    #[test]
    fn normalize_cancels_interleaved_pair() {
        let x = ChordSpec::new(3, vec![2], Sign::Positive);
        let body = ChordSpec::new(1, vec![2, 3], Sign::Positive);
        let p = BandSumPresentation {
            n: 3,
            chords: vec![x.clone(), body.clone(), x.inverse()],
        };
        let q = normalize(&p).unwrap();
        assert!(q.is_normal_form());
        assert_eq!(q.chords, vec![body]);
        assert_eq!(
            mu_vector(&realize(&q).unwrap(), 3).unwrap(),
            mu_vector(&realize(&p).unwrap(), 3).unwrap()
        );
    }

    #[test]
    fn normalize_rebuilds_from_invariants() {
        // a full-index chord wrapped in a conjugation by a lower chord that
        // has no adjacent partner: [x, c] is left after collection
        let x = ChordSpec::new(4, vec![1], Sign::Positive);
        let c = ChordSpec::new(4, vec![2, 3, 1], Sign::Positive);
        let p = BandSumPresentation {
            n: 4,
            chords: vec![x.clone(), c.clone(), c.clone(), x.inverse()],
        };
        let q = normalize(&p).unwrap();
        assert!(q.is_normal_form());
        assert_eq!(
            mu_vector(&realize(&q).unwrap(), 4).unwrap(),
            mu_vector(&realize(&p).unwrap(), 4).unwrap()
        );
    }

    #[test]
    fn cn_and_c2_verdicts() {
        let one = milnor_link(3).unwrap();
        let (two, _) = insert_chord(&one, &one.chords[0].clone(), 1).unwrap();
        let d1 = realize(&one).unwrap();
        let d2 = realize(&two).unwrap();
        let v = cn_equivalent(&d1, &d2, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::No);
        let Some(Witness::MuDiffers { left, right, .. }) = v.witness else {
            panic!("expected a μ witness");
        };
        assert_eq!((left.abs(), right.abs()), (1, 2));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noisy = random_reidemeister(&d1, 15, &mut rng);
        assert_eq!(
            cn_equivalent(&d1, &noisy, DEFAULT_BUDGET).unwrap(),
            Verdict::yes()
        );

        let trivial = LinkDiagram::trivial(3);
        assert_eq!(c2_classify(&d1, &trivial).unwrap(), Verdict::yes());
        assert_eq!(
            cn_equivalent(&d1, &trivial, DEFAULT_BUDGET).unwrap().status,
            Status::No
        );

        assert!(matches!(
            cn_equivalent(&hopf_plus_unknot(), &trivial, DEFAULT_BUDGET),
            Err(ClassifierError::NotBrunnian { diagram: 1, .. })
        ));
        assert!(matches!(
            c2_classify(&d1, &LinkDiagram::trivial(2)),
            Err(ClassifierError::ComponentCountMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn changed_hopf_is_c2_distinct() {
        let hopf = realize(&milnor_link(2).unwrap()).unwrap();
        let (changed, _) = hopf.crossing_change(0).unwrap();
        let v = c2_classify(&hopf, &changed).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::LinkingDiffers {
                pair: [1, 2],
                left: 1,
                right: 0
            })
        );
        assert_eq!(c2_classify(&hopf, &hopf).unwrap(), Verdict::yes());
    }

    #[test]
    fn verdict_json() {
        assert_eq!(
            Verdict::yes().to_json(),
            "{\"status\":\"yes\",\"witness\":null}\n"
        );
    }
}
