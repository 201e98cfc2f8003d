//! Bounded Reidemeister simplification.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::moves::{apply_r3, r1_removals, r2_removals, r3_moves, remove_r1, remove_r2};
use super::{ArcId, ArcUnion, Crossing, LinkDiagram};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Maximum number of distinct diagrams visited on one crossing-count plateau.
pub const PLATEAU_BREADTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplifyVerdict {
    MinimalReached,
    BudgetExhausted,
}

/// Greedily removes crossings with R1 and R2 moves, lifting off any
/// component that lies entirely above or entirely below the rest. When
/// stuck, searches the R3 neighbourhood breadth-first for a diagram that
/// admits a reduction again. `budget` bounds the number of elementary
/// moves, each crossing removed by a lift counting as one.
pub fn reidemeister_simplify(d: &LinkDiagram, budget: usize) -> (LinkDiagram, SimplifyVerdict) {
    let mut cur = d.clone();
    let mut used = 0usize;
    loop {
        if let Some((next, cost)) = reduce_step(&cur) {
            if used + cost > budget {
                return (cur.canonicalize(), SimplifyVerdict::BudgetExhausted);
            }
            used += cost;
            cur = next;
            continue;
        }
        match plateau_search(&cur, &mut used, budget) {
            Plateau::Reducible(next) => cur = next,
            Plateau::Stuck => return (cur.canonicalize(), SimplifyVerdict::MinimalReached),
            Plateau::OutOfBudget => return (cur.canonicalize(), SimplifyVerdict::BudgetExhausted),
        }
    }
}

fn reduce_step(d: &LinkDiagram) -> Option<(LinkDiagram, usize)> {
    if let Some(&spot) = r1_removals(d).first() {
        return Some((remove_r1(d, spot), 1));
    }
    if let Some(&bigon) = r2_removals(d).first() {
        return Some((remove_r2(d, bigon), 1));
    }
    lift_layer(d)
}

fn reducible(d: &LinkDiagram) -> bool {
    !r1_removals(d).is_empty() || !r2_removals(d).is_empty() || lift_layer(d).is_some()
}

/// Removes a component with no self-crossings that passes over (or under)
/// every strand it meets; it becomes a free loop.
fn lift_layer(d: &LinkDiagram) -> Option<(LinkDiagram, usize)> {
    for comp in 1..=d.n_components {
        let mut over = 0;
        let mut under = 0;
        let mut touched = Vec::new();
        for (x, _) in d.crossings.iter().enumerate() {
            let (u, o) = d.crossing_components(x);
            if u == comp && o == comp {
                over = usize::MAX / 2;
                under = usize::MAX / 2;
                break;
            }
            if o == comp {
                over += 1;
                touched.push(x);
            } else if u == comp {
                under += 1;
                touched.push(x);
            }
        }
        if touched.is_empty() || (over > 0 && under > 0) {
            continue;
        }
        let mut union = ArcUnion::default();
        for &x in &touched {
            let c = d.crossings[x];
            if over > 0 {
                union.union(c.under_in(), c.under_out());
            } else {
                union.union(c.over_in(), c.over_out());
            }
        }
        let kept: Vec<Crossing> = d
            .crossings
            .iter()
            .enumerate()
            .filter(|(x, _)| !touched.contains(x))
            .map(|(_, c)| *c)
            .collect();
        let next = LinkDiagram::assemble(kept, &mut union, &d.arc_component, d.n_components);
        return Some((next, touched.len()));
    }
    None
}

enum Plateau {
    Reducible(LinkDiagram),
    Stuck,
    OutOfBudget,
}

type StateKey = Vec<([ArcId; 4], i64)>;

fn state_key(d: &LinkDiagram) -> StateKey {
    let mut key: StateKey = d
        .canonicalize()
        .crossings
        .iter()
        .map(|c| (c.arcs, c.sign.value()))
        .collect();
    key.sort_unstable();
    key
}

fn plateau_search(start: &LinkDiagram, used: &mut usize, budget: usize) -> Plateau {
    let mut seen: HashSet<StateKey> = HashSet::from([state_key(start)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(d) = queue.pop_front() {
        for tri in r3_moves(&d) {
            if *used >= budget {
                return Plateau::OutOfBudget;
            }
            *used += 1;
            let next = apply_r3(&d, tri);
            if !seen.insert(state_key(&next)) {
                continue;
            }
            if reducible(&next) {
                return Plateau::Reducible(next);
            }
            if seen.len() >= PLATEAU_BREADTH {
                return Plateau::Stuck;
            }
            queue.push_back(next);
        }
    }
    Plateau::Stuck
}
