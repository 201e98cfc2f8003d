#![allow(dead_code)]

use brunnian::band::{BandSumPresentation, ChordSpec, Letter};
use brunnian::diagram::Sign;
use rand::seq::SliceRandom;
use rand::Rng;

/// Free-group word on `x_1 … x_n`, `-g` standing for `x_g^{-1}`.
pub type FreeWord = Vec<i32>;

fn reduce(w: FreeWord) -> FreeWord {
    let mut out = Vec::with_capacity(w.len());
    for g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

fn invert(w: &FreeWord) -> FreeWord {
    w.iter().rev().map(|g| -g).collect()
}

/// `A_{ij}` as Artin generators: strand `j` passes in front of strands
/// `j−1 … i+1`, goes fully around strand `i`, and returns.
fn sigmas(l: Letter) -> Vec<(usize, bool)> {
    let mut w: Vec<(usize, bool)> = (l.i + 1..l.j).rev().map(|k| (k, true)).collect();
    w.extend([(l.i, true), (l.i, true)]);
    w.extend((l.i + 1..l.j).map(|k| (k, false)));
    if l.exp < 0 {
        w.reverse();
        w.iter_mut().for_each(|s| s.1 = !s.1);
    }
    w
}

/// Images of the free generators under the Artin representation of the
/// braid, which is faithful; equal images mean equal braids.
pub fn artin_images(n: usize, letters: &[Letter]) -> Vec<FreeWord> {
    let mut imgs: Vec<FreeWord> = (1..=n as i32).map(|g| vec![g]).collect();
    for (k, positive) in letters.iter().flat_map(|&l| sigmas(l)) {
        let (a, b) = (imgs[k - 1].clone(), imgs[k].clone());
        if positive {
            imgs[k - 1] = reduce([a.clone(), b, invert(&a)].concat());
            imgs[k] = a;
        } else {
            imgs[k] = reduce([invert(&b), a, b.clone()].concat());
            imgs[k - 1] = b;
        }
    }
    imgs
}

/// True when `x` commutes in the braid group with every letter of `ls`,
/// so that `x` can be transposed past any word in them.
pub fn commutes_with_all(n: usize, x: Letter, ls: &[Letter]) -> bool {
    ls.iter()
        .all(|&l| artin_images(n, &[x, l]) == artin_images(n, &[l, x]))
}

pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
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

pub fn random_letter<R: Rng>(n: usize, rng: &mut R) -> Letter {
    let i = rng.gen_range(1..n);
    let j = rng.gen_range(i + 1..=n);
    Letter::new(i, j, if rng.gen_bool(0.5) { 1 } else { -1 })
}

pub fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// A chord touching every one of the `n` components.
pub fn random_full_chord<R: Rng>(n: usize, rng: &mut R) -> ChordSpec {
    let branch = rng.gen_range(1..=n);
    let mut leaves: Vec<usize> = (1..=n).filter(|&c| c != branch).collect();
    leaves.shuffle(rng);
    ChordSpec::new(branch, leaves, random_sign(rng))
}

/// A chord on a random subset of at least two of the `n` components.
pub fn random_chord<R: Rng>(n: usize, rng: &mut R) -> ChordSpec {
    let size = rng.gen_range(2..=n);
    let mut comps: Vec<usize> = (1..=n).collect();
    comps.shuffle(rng);
    comps.truncate(size);
    let branch = comps.pop().unwrap();
    ChordSpec::new(branch, comps, random_sign(rng))
}

pub fn random_normal_form<R: Rng>(n: usize, max_chords: usize, rng: &mut R) -> BandSumPresentation {
    let count = rng.gen_range(0..=max_chords);
    BandSumPresentation {
        n,
        chords: (0..count).map(|_| random_full_chord(n, rng)).collect(),
    }
}
