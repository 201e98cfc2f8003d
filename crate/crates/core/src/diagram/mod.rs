//! Oriented, ordered link diagrams in planar-diagram (PD) form.
//!
//! A crossing lists its four incident arcs counterclockwise, starting from
//! the incoming under-arc. Slot 0 is the incoming under-arc, slot 2 the
//! outgoing under-arc, and slots 1 and 3 carry the over-strand. A positive
//! crossing has its incoming over-arc in slot 3, a negative one in slot 1.
//!
//! Components that have no crossings at all are stored as a count of free
//! loops; they are exactly the component indices that label no arc.

mod moves;
mod pd;
mod simplify;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{apply_random_move, faces, random_inflate, random_reidemeister, ReidemeisterKind};
pub use pd::{parse_pd, PdError};
pub use simplify::{reidemeister_simplify, SimplifyVerdict, DEFAULT_BUDGET, PLATEAU_BREADTH};

pub type ArcId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    arcs: [ArcId; 4],
    sign: Sign,
}

impl Crossing {
    pub(crate) fn new(arcs: [ArcId; 4], sign: Sign) -> Self {
        Crossing { arcs, sign }
    }

    pub fn arcs(&self) -> [ArcId; 4] {
        self.arcs
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Slot holding the incoming over-arc.
    pub fn over_in_slot(&self) -> usize {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in_slot()
    }

    pub fn under_in(&self) -> ArcId {
        self.arcs[0]
    }

    pub fn under_out(&self) -> ArcId {
        self.arcs[2]
    }

    pub fn over_in(&self) -> ArcId {
        self.arcs[self.over_in_slot()]
    }

    pub fn over_out(&self) -> ArcId {
        self.arcs[self.over_in_slot() ^ 2]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arc {arc} occurs {count} times (expected 2)")]
    DanglingArc { arc: ArcId, count: usize },
    #[error("arc {arc} has no component label")]
    UnlabeledArc { arc: ArcId },
    #[error("arc {arc} is not entered once and left once (crossing {crossing})")]
    OrientationConflict { arc: ArcId, crossing: usize },
    #[error("component label changes from {from} to {to} through crossing {crossing}")]
    ComponentMismatch {
        crossing: usize,
        from: usize,
        to: usize,
    },
    #[error("arcs of component {component} do not form a single closed cycle")]
    SplitComponent { component: usize },
    #[error("component index {index} outside 1..={n}")]
    BadComponentRange { index: usize, n: usize },
    #[error("{labelled} labelled components plus {free_loops} free loops != {n} components")]
    ComponentCount {
        labelled: usize,
        free_loops: usize,
        n: usize,
    },
    #[error("empty component selection")]
    EmptySelection,
    #[error("crossing index {index} out of range ({len} crossings)")]
    BadCrossingIndex { index: usize, len: usize },
    #[error("linking number needs two distinct components, got {0} twice")]
    SameComponent(usize),
}

/// Where each arc starts and ends.
pub(crate) struct ArcTable {
    /// (crossing, slot) where the arc is incoming.
    pub head: HashMap<ArcId, (usize, usize)>,
    /// (crossing, slot) where the arc is outgoing.
    pub tail: HashMap<ArcId, (usize, usize)>,
}

impl ArcTable {
    pub fn build(crossings: &[Crossing]) -> Result<ArcTable, DiagramError> {
        let mut head = HashMap::new();
        let mut tail = HashMap::new();
        let mut count: HashMap<ArcId, usize> = HashMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (slot, &arc) in c.arcs.iter().enumerate() {
                *count.entry(arc).or_default() += 1;
                let side = if c.is_incoming(slot) {
                    &mut head
                } else {
                    &mut tail
                };
                if side.insert(arc, (x, slot)).is_some() {
                    return Err(DiagramError::OrientationConflict { arc, crossing: x });
                }
            }
        }
        let mut bad: Vec<_> = count.into_iter().filter(|&(_, c)| c != 2).collect();
        bad.sort_unstable();
        if let Some(&(arc, count)) = bad.first() {
            return Err(DiagramError::DanglingArc { arc, count });
        }
        Ok(ArcTable { head, tail })
    }

    /// The arc following `arc` along its strand.
    pub fn successor(&self, crossings: &[Crossing], arc: ArcId) -> ArcId {
        let (x, slot) = self.head[&arc];
        crossings[x].arcs[(slot + 2) % 4]
    }
}

/// Minimal union-find over arc ids; the representative of a class is its
/// smallest member.
#[derive(Default)]
pub(crate) struct ArcUnion {
    parent: HashMap<ArcId, ArcId>,
}

impl ArcUnion {
    pub fn find(&mut self, a: ArcId) -> ArcId {
        let p = *self.parent.get(&a).unwrap_or(&a);
        if p == a {
            return a;
        }
        let root = self.find(p);
        self.parent.insert(a, root);
        root
    }

    pub fn union(&mut self, a: ArcId, b: ArcId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    arc_component: BTreeMap<ArcId, usize>,
    n_components: usize,
    free_loops: usize,
}

impl LinkDiagram {
    /// The crossing-free diagram of the trivial `n`-component link.
    pub fn trivial(n: usize) -> LinkDiagram {
        LinkDiagram {
            crossings: Vec::new(),
            arc_component: BTreeMap::new(),
            n_components: n,
            free_loops: n,
        }
    }

    /// Builds a diagram from raw PD tuples, recovering the orientation of
    /// every over-strand from the under-strand data.
    ///
    /// A component that never passes under anything has no orientation
    /// recorded in its tuples. For such a component, the over-strand at the
    /// first crossing (in list order) where it appears is taken to run from
    /// its smaller arc id to its larger one.
    pub fn from_pd(
        tuples: &[[ArcId; 4]],
        arc_component: BTreeMap<ArcId, usize>,
        n_components: usize,
        free_loops: usize,
    ) -> Result<LinkDiagram, DiagramError> {
        let signs = orient(tuples)?;
        let crossings = tuples
            .iter()
            .zip(signs)
            .map(|(&arcs, sign)| Crossing { arcs, sign })
            .collect();
        LinkDiagram::from_crossings(crossings, arc_component, n_components, free_loops)
    }

    /// Builds a diagram from crossings whose signs are already known.
    pub fn from_crossings(
        crossings: Vec<Crossing>,
        arc_component: BTreeMap<ArcId, usize>,
        n_components: usize,
        free_loops: usize,
    ) -> Result<LinkDiagram, DiagramError> {
        let d = LinkDiagram {
            crossings,
            arc_component,
            n_components,
            free_loops,
        };
        d.validate()?;
        Ok(d)
    }

    /// Assembles a diagram from crossings after merging arcs through `union`.
    /// Free loops are recounted from the components still carrying arcs.
    pub(crate) fn assemble(
        crossings: Vec<Crossing>,
        union: &mut ArcUnion,
        old_components: &BTreeMap<ArcId, usize>,
        n_components: usize,
    ) -> LinkDiagram {
        let crossings: Vec<Crossing> = crossings
            .into_iter()
            .map(|c| Crossing {
                arcs: c.arcs.map(|a| union.find(a)),
                sign: c.sign,
            })
            .collect();
        let mut arc_component = BTreeMap::new();
        for c in &crossings {
            for a in c.arcs {
                arc_component.insert(a, old_components[&a]);
            }
        }
        let labelled: BTreeSet<usize> = arc_component.values().copied().collect();
        let d = LinkDiagram {
            crossings,
            arc_component,
            n_components,
            free_loops: n_components - labelled.len(),
        };
        debug_assert_eq!(d.validate(), Ok(()));
        d
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_component(&self) -> &BTreeMap<ArcId, usize> {
        &self.arc_component
    }

    pub fn component_of(&self, arc: ArcId) -> usize {
        self.arc_component[&arc]
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub(crate) fn next_arc_id(&self) -> ArcId {
        self.arc_component.keys().next_back().map_or(1, |a| a + 1)
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let n = self.n_components;
        for &comp in self.arc_component.values() {
            if comp == 0 || comp > n {
                return Err(DiagramError::BadComponentRange { index: comp, n });
            }
        }
        for c in &self.crossings {
            for arc in c.arcs {
                if !self.arc_component.contains_key(&arc) {
                    return Err(DiagramError::UnlabeledArc { arc });
                }
            }
        }
        let table = ArcTable::build(&self.crossings)?;
        for &arc in self.arc_component.keys() {
            if !table.head.contains_key(&arc) && !table.tail.contains_key(&arc) {
                return Err(DiagramError::DanglingArc { arc, count: 0 });
            }
        }
        for (x, c) in self.crossings.iter().enumerate() {
            for (i, o) in [(c.under_in(), c.under_out()), (c.over_in(), c.over_out())] {
                let (from, to) = (self.arc_component[&i], self.arc_component[&o]);
                if from != to {
                    return Err(DiagramError::ComponentMismatch {
                        crossing: x,
                        from,
                        to,
                    });
                }
            }
        }
        let mut per_component: BTreeMap<usize, usize> = BTreeMap::new();
        for &comp in self.arc_component.values() {
            *per_component.entry(comp).or_default() += 1;
        }
        for (&comp, &size) in &per_component {
            let start = *self
                .arc_component
                .iter()
                .find(|(_, &c)| c == comp)
                .map(|(a, _)| a)
                .expect("component has arcs");
            let mut len = 1;
            let mut arc = table.successor(&self.crossings, start);
            while arc != start {
                len += 1;
                if len > size {
                    break;
                }
                arc = table.successor(&self.crossings, arc);
            }
            if len != size {
                return Err(DiagramError::SplitComponent { component: comp });
            }
        }
        if per_component.len() + self.free_loops != n {
            return Err(DiagramError::ComponentCount {
                labelled: per_component.len(),
                free_loops: self.free_loops,
                n,
            });
        }
        Ok(())
    }

    /// Component indices that carry no crossings.
    pub fn free_components(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.arc_component.values().copied().collect();
        (1..=self.n_components)
            .filter(|c| !used.contains(c))
            .collect()
    }

    /// Arcs of `component` in orientation order, starting from the incoming
    /// arc at the first crossing the component meets. Empty for free loops.
    pub fn component_arcs(&self, component: usize) -> Vec<ArcId> {
        let table = ArcTable::build(&self.crossings).expect("valid diagram");
        self.component_arcs_with(&table, component)
    }

    pub(crate) fn component_arcs_with(&self, table: &ArcTable, component: usize) -> Vec<ArcId> {
        let Some(start) = self.start_arc(component) else {
            return Vec::new();
        };
        let mut arcs = vec![start];
        let mut arc = table.successor(&self.crossings, start);
        while arc != start {
            arcs.push(arc);
            arc = table.successor(&self.crossings, arc);
        }
        arcs
    }

    fn start_arc(&self, component: usize) -> Option<ArcId> {
        self.crossings.iter().find_map(|c| {
            if self.arc_component[&c.under_in()] == component {
                Some(c.under_in())
            } else if self.arc_component[&c.over_in()] == component {
                Some(c.over_in())
            } else {
                None
            }
        })
    }

    /// Relabels arcs `1, 2, …` component by component along each
    /// component's orientation. Crossing order is kept.
    pub fn canonicalize(&self) -> LinkDiagram {
        let table = ArcTable::build(&self.crossings).expect("valid diagram");
        let mut relabel = HashMap::new();
        let mut next: ArcId = 1;
        for comp in 1..=self.n_components {
            for arc in self.component_arcs_with(&table, comp) {
                relabel.insert(arc, next);
                next += 1;
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                arcs: c.arcs.map(|a| relabel[&a]),
                sign: c.sign,
            })
            .collect();
        let arc_component = self
            .arc_component
            .iter()
            .map(|(a, &comp)| (relabel[a], comp))
            .collect();
        LinkDiagram {
            crossings,
            arc_component,
            n_components: self.n_components,
            free_loops: self.free_loops,
        }
    }

    /// Components meeting crossing `x`: (under, over).
    pub fn crossing_components(&self, x: usize) -> (usize, usize) {
        let c = &self.crossings[x];
        (
            self.arc_component[&c.under_in()],
            self.arc_component[&c.over_in()],
        )
    }

    /// Deletes every component outside `keep`. Crossings between a kept and
    /// a deleted strand are smoothed by merging the kept strand's two arcs
    /// into the smaller id. Kept components are renumbered in order.
    pub fn sublink(&self, keep: &BTreeSet<usize>) -> Result<LinkDiagram, DiagramError> {
        if keep.is_empty() {
            return Err(DiagramError::EmptySelection);
        }
        let n = self.n_components;
        if let Some(&bad) = keep.iter().find(|&&k| k == 0 || k > n) {
            return Err(DiagramError::BadComponentRange { index: bad, n });
        }
        let renumber: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect();
        let mut union = ArcUnion::default();
        let mut kept = Vec::new();
        for c in &self.crossings {
            let under = keep.contains(&self.arc_component[&c.under_in()]);
            let over = keep.contains(&self.arc_component[&c.over_in()]);
            match (under, over) {
                (true, true) => kept.push(*c),
                (true, false) => union.union(c.under_in(), c.under_out()),
                (false, true) => union.union(c.over_in(), c.over_out()),
                (false, false) => {}
            }
        }
        let components: BTreeMap<ArcId, usize> = self
            .arc_component
            .iter()
            .filter_map(|(&a, c)| renumber.get(c).map(|&r| (a, r)))
            .collect();
        Ok(LinkDiagram::assemble(
            kept,
            &mut union,
            &components,
            keep.len(),
        ))
    }

    /// Exchanges the over- and under-strand at crossing `index`. Returns the
    /// new diagram and the index of the move (the components it touches).
    pub fn crossing_change(
        &self,
        index: usize,
    ) -> Result<(LinkDiagram, BTreeSet<usize>), DiagramError> {
        let len = self.crossings.len();
        let c = *self
            .crossings
            .get(index)
            .ok_or(DiagramError::BadCrossingIndex { index, len })?;
        let [a, b, cc, d] = c.arcs;
        let changed = match c.sign {
            Sign::Positive => Crossing::new([d, a, b, cc], Sign::Negative),
            Sign::Negative => Crossing::new([b, cc, d, a], Sign::Positive),
        };
        let mut out = self.clone();
        out.crossings[index] = changed;
        let (u, o) = self.crossing_components(index);
        Ok((out, BTreeSet::from([u, o])))
    }

    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64, DiagramError> {
        let n = self.n_components;
        for k in [i, j] {
            if k == 0 || k > n {
                return Err(DiagramError::BadComponentRange { index: k, n });
            }
        }
        if i == j {
            return Err(DiagramError::SameComponent(i));
        }
        let total: i64 = (0..self.crossings.len())
            .filter(|&x| {
                let (u, o) = self.crossing_components(x);
                (u == i && o == j) || (u == j && o == i)
            })
            .map(|x| self.crossings[x].sign.value())
            .sum();
        Ok(total / 2)
    }

    /// All pairwise linking numbers `(i, j)` with `i < j`.
    pub fn linking_matrix(&self) -> BTreeMap<(usize, usize), i64> {
        let n = self.n_components;
        let mut out = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.insert((i, j), 0);
            }
        }
        for x in 0..self.crossings.len() {
            let (u, o) = self.crossing_components(x);
            if u != o {
                let key = (u.min(o), u.max(o));
                *out.get_mut(&key).expect("pair in range") += self.crossings[x].sign.value();
            }
        }
        for v in out.values_mut() {
            *v /= 2;
        }
        out
    }

    pub fn to_pd_string(&self) -> String {
        pd::write_pd(self)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

impl std::str::FromStr for LinkDiagram {
    type Err = PdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

/// Recovers crossing signs from raw PD tuples by propagating arc directions.
fn orient(tuples: &[[ArcId; 4]]) -> Result<Vec<Sign>, DiagramError> {
    let mut occurrences: HashMap<ArcId, Vec<(usize, usize)>> = HashMap::new();
    for (x, arcs) in tuples.iter().enumerate() {
        for (slot, &arc) in arcs.iter().enumerate() {
            occurrences.entry(arc).or_default().push((x, slot));
        }
    }
    let mut bad: Vec<_> = occurrences
        .iter()
        .filter(|(_, occ)| occ.len() != 2)
        .map(|(&arc, occ)| (arc, occ.len()))
        .collect();
    bad.sort_unstable();
    if let Some(&(arc, count)) = bad.first() {
        return Err(DiagramError::DanglingArc { arc, count });
    }

    // incoming[x][slot]
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; tuples.len()];
    let mut queue = Vec::new();
    let assign = |incoming: &mut Vec<[Option<bool>; 4]>,
                  queue: &mut Vec<(usize, usize)>,
                  x: usize,
                  slot: usize,
                  value: bool|
     -> Result<(), DiagramError> {
        match incoming[x][slot] {
            Some(v) if v != value => Err(DiagramError::OrientationConflict {
                arc: tuples[x][slot],
                crossing: x,
            }),
            Some(_) => Ok(()),
            None => {
                incoming[x][slot] = Some(value);
                queue.push((x, slot));
                Ok(())
            }
        }
    };
    for x in 0..tuples.len() {
        assign(&mut incoming, &mut queue, x, 0, true)?;
        assign(&mut incoming, &mut queue, x, 2, false)?;
    }
    let mut next_unresolved = 0;
    loop {
        while let Some((x, slot)) = queue.pop() {
            let value = incoming[x][slot].expect("queued slots are assigned");
            let arc = tuples[x][slot];
            let &other = occurrences[&arc]
                .iter()
                .find(|&&o| o != (x, slot))
                .expect("arc occurs twice");
            assign(&mut incoming, &mut queue, other.0, other.1, !value)?;
            if slot % 2 == 1 {
                assign(&mut incoming, &mut queue, x, slot ^ 2, !value)?;
            }
        }
        while next_unresolved < tuples.len() && incoming[next_unresolved][1].is_some() {
            next_unresolved += 1;
        }
        if next_unresolved == tuples.len() {
            break;
        }
        let x = next_unresolved;
        let slot = if tuples[x][1] <= tuples[x][3] { 1 } else { 3 };
        assign(&mut incoming, &mut queue, x, slot, true)?;
    }
    Ok(incoming
        .iter()
        .map(|slots| {
            if slots[3] == Some(true) {
                Sign::Positive
            } else {
                Sign::Negative
            }
        })
        .collect())
}
