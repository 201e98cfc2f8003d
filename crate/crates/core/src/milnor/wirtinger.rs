//! Wirtinger data of a diagram and the Magnus series of its longitudes.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::MilnorError;
use crate::diagram::{ArcId, ArcTable, ArcUnion, LinkDiagram};
use crate::series::{TruncatedSeries, MAX_GENERATOR};

/// The relation at one crossing: `outgoing = over^{-sign} · incoming · over^{sign}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub crossing: usize,
    pub incoming: usize,
    pub outgoing: usize,
    pub over: usize,
    pub sign: i64,
}

/// Generators are overpasses (maximal strands running from one
/// undercrossing to the next) plus one per free loop, numbered from 0
/// component by component in orientation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerPresentation {
    pub n_generators: usize,
    /// Component carrying each generator.
    pub generator_component: Vec<usize>,
    pub relations: Vec<Relation>,
    /// Meridian generator of each component, in component order.
    pub meridians: Vec<usize>,
    /// Longitude of each component as `(generator, ±1)` letters, read
    /// along the component from its meridian.
    pub longitudes: Vec<Vec<(usize, i64)>>,
    /// Exponent of the meridian appended to each longitude so that it has
    /// zero linking with its own component.
    pub framing: Vec<i64>,
    /// Undercrossing steps of each component: the relation index taken when
    /// leaving each overpass, in orientation order.
    pub(crate) walks: Vec<Vec<usize>>,
}

pub fn wirtinger(d: &LinkDiagram) -> WirtingerPresentation {
    let table = ArcTable::build(d.crossings()).expect("valid diagram");
    let mut union = ArcUnion::default();
    for c in d.crossings() {
        union.union(c.over_in(), c.over_out());
    }
    let n = d.n_components();
    let mut generator_of: HashMap<ArcId, usize> = HashMap::new();
    let mut generator_component = Vec::new();
    let mut meridians = Vec::with_capacity(n);
    let mut arcs_of = Vec::with_capacity(n);
    for comp in 1..=n {
        let arcs = d.component_arcs_with(&table, comp);
        meridians.push(generator_component.len());
        if arcs.is_empty() {
            generator_component.push(comp);
        }
        for &a in &arcs {
            let root = union.find(a);
            generator_of.entry(root).or_insert_with(|| {
                generator_component.push(comp);
                generator_component.len() - 1
            });
        }
        arcs_of.push(arcs);
    }
    let mut gen = |a: ArcId| generator_of[&union.find(a)];

    let mut relations = Vec::new();
    let mut relation_at: HashMap<ArcId, usize> = HashMap::new();
    for (x, c) in d.crossings().iter().enumerate() {
        relation_at.insert(c.under_in(), relations.len());
        relations.push(Relation {
            crossing: x,
            incoming: gen(c.under_in()),
            outgoing: gen(c.under_out()),
            over: gen(c.over_in()),
            sign: c.sign().value(),
        });
    }

    let mut longitudes = Vec::with_capacity(n);
    let mut framing = Vec::with_capacity(n);
    let mut walks = Vec::with_capacity(n);
    for (ci, arcs) in arcs_of.iter().enumerate() {
        let walk: Vec<usize> = arcs
            .iter()
            .filter_map(|a| relation_at.get(a).copied())
            .collect();
        let word: Vec<(usize, i64)> = walk
            .iter()
            .map(|&r| (relations[r].over, relations[r].sign))
            .collect();
        let self_linking: i64 = word
            .iter()
            .filter(|(g, _)| generator_component[*g] == ci + 1)
            .map(|(_, s)| s)
            .sum();
        longitudes.push(word);
        framing.push(-self_linking);
        walks.push(walk);
    }

    WirtingerPresentation {
        n_generators: generator_component.len(),
        generator_component,
        relations,
        meridians,
        longitudes,
        framing,
        walks,
    }
}

/// Magnus series of every longitude, truncated at `length`, with the
/// meridian of component `c` sent to `1 + X_c`. Components outside
/// `active` are sent to 1.
///
/// Overpass generators start as their component's meridian and are refined
/// by walking every component through its undercrossings; each sweep makes
/// the approximation exact one degree higher, and `length` sweeps are run.
pub(crate) fn longitude_series(
    w: &WirtingerPresentation,
    length: usize,
    repeat_free: bool,
    active: &[bool],
) -> Result<Vec<TruncatedSeries>, MilnorError> {
    let n = w.meridians.len();
    if n > MAX_GENERATOR {
        return Err(MilnorError::TooManyComponents { n });
    }
    let one = TruncatedSeries::one(length, repeat_free)?;
    let meridian = |comp: usize| -> Result<TruncatedSeries, MilnorError> {
        if active[comp - 1] {
            Ok(one.mul_generator_power(comp, 1)?)
        } else {
            Ok(one.clone())
        }
    };
    let mut values = w
        .generator_component
        .iter()
        .map(|&c| meridian(c))
        .collect::<Result<Vec<_>, _>>()?;

    for _ in 0..length {
        let inverses = values
            .par_iter()
            .map(|s| s.inverse())
            .collect::<Result<Vec<_>, _>>()?;
        let updates = (0..n)
            .into_par_iter()
            .map(|ci| -> Result<Vec<(usize, TruncatedSeries)>, MilnorError> {
                let walk = &w.walks[ci];
                let mut out = Vec::with_capacity(walk.len());
                let mut cur = meridian(ci + 1)?;
                for &r in walk.iter().take(walk.len().saturating_sub(1)) {
                    let rel = w.relations[r];
                    let (o, o_inv) = (&values[rel.over], &inverses[rel.over]);
                    cur = if rel.sign > 0 {
                        o_inv.mul(&cur)?.mul(o)?
                    } else {
                        o.mul(&cur)?.mul(o_inv)?
                    };
                    out.push((rel.outgoing, cur.clone()));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (g, s) in updates.into_iter().flatten() {
            values[g] = s;
        }
    }

    let inverses = values
        .par_iter()
        .map(|s| s.inverse())
        .collect::<Result<Vec<_>, _>>()?;
    (0..n)
        .into_par_iter()
        .map(|ci| {
            let mut s = one.clone();
            for &(g, e) in &w.longitudes[ci] {
                s = s.mul(if e > 0 { &values[g] } else { &inverses[g] })?;
            }
            if active[ci] {
                s = s.mul_generator_power(ci + 1, w.framing[ci])?;
            }
            Ok(s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn hopf() -> LinkDiagram {
        let comps = BTreeMap::from([(1, 1), (2, 1), (3, 2), (4, 2)]);
        LinkDiagram::from_pd(&[[1, 4, 2, 3], [4, 1, 3, 2]], comps, 2, 0).unwrap()
    }

    #[test]
    fn trivial_link_presentation() {
        let w = wirtinger(&LinkDiagram::trivial(3));
        assert_eq!(w.n_generators, 3);
        assert!(w.relations.is_empty());
        assert_eq!(w.meridians, vec![0, 1, 2]);
        assert!(w.longitudes.iter().all(Vec::is_empty));
    }

    #[test]
    fn hopf_presentation() {
        let w = wirtinger(&hopf());
        assert_eq!(w.n_generators, 2);
        assert_eq!(w.relations.len(), 2);
        assert_eq!(w.longitudes[0], vec![(1, 1)]);
        assert_eq!(w.longitudes[1], vec![(0, 1)]);
        assert_eq!(w.framing, vec![0, 0]);
    }

    #[test]
    fn kink_framing_cancels_writhe() {
        let comps = BTreeMap::from([(1, 1), (2, 1)]);
        let kink = LinkDiagram::from_pd(&[[2, 1, 1, 2]], comps, 1, 0).unwrap();
        let w = wirtinger(&kink);
        let total: i64 = w.longitudes[0].iter().map(|(_, e)| e).sum::<i64>() + w.framing[0];
        assert_eq!(total, 0);
    }
}
