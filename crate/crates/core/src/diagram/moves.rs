//! Reidemeister moves on PD diagrams.
//!
//! Moves are located through the face structure of the diagram. A dart is a
//! (crossing, slot) pair; a face is traced by leaving along a dart, arriving
//! at the far end of its arc, and turning to the clockwise-next slot, which
//! keeps the face on the left.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ArcId, ArcUnion, Crossing, LinkDiagram, Sign};

pub(crate) type Dart = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReidemeisterKind {
    AddR1,
    AddR2,
    R3,
    RemoveR1,
    RemoveR2,
}

pub(crate) struct Darts {
    other: Vec<[Dart; 4]>,
}

impl Darts {
    pub fn build(d: &LinkDiagram) -> Darts {
        let mut seen: BTreeMap<ArcId, Dart> = BTreeMap::new();
        let mut other = vec![[(0, 0); 4]; d.crossings.len()];
        for (x, c) in d.crossings.iter().enumerate() {
            for (s, &arc) in c.arcs.iter().enumerate() {
                if let Some(first) = seen.remove(&arc) {
                    other[x][s] = first;
                    other[first.0][first.1] = (x, s);
                } else {
                    seen.insert(arc, (x, s));
                }
            }
        }
        debug_assert!(seen.is_empty());
        Darts { other }
    }

    pub fn other(&self, (x, s): Dart) -> Dart {
        self.other[x][s]
    }

    /// The dart that follows `dart` around the face on its left.
    pub fn face_next(&self, dart: Dart) -> Dart {
        let (y, t) = self.other(dart);
        (y, (t + 3) % 4)
    }
}

/// Face boundaries, each a cyclic list of departing darts.
pub fn faces(d: &LinkDiagram) -> Vec<Vec<(usize, usize)>> {
    let darts = Darts::build(d);
    faces_with(d, &darts)
}

fn faces_with(d: &LinkDiagram, darts: &Darts) -> Vec<Vec<Dart>> {
    let mut visited = vec![[false; 4]; d.crossings.len()];
    let mut out = Vec::new();
    for x in 0..d.crossings.len() {
        for s in 0..4 {
            if visited[x][s] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = (x, s);
            while !visited[cur.0][cur.1] {
                visited[cur.0][cur.1] = true;
                face.push(cur);
                cur = darts.face_next(cur);
            }
            out.push(face);
        }
    }
    out
}

/// True when the arc leaves the crossing of `dart` in its own direction.
fn runs_forward(d: &LinkDiagram, (x, s): Dart) -> bool {
    !d.crossings[x].is_incoming(s)
}

#[derive(Clone, Copy)]
struct End {
    arc: ArcId,
    incoming: bool,
    strand: u8,
}

impl End {
    /// `along` is the direction relative to the traversal used while
    /// building the local picture; `forward` says whether that traversal
    /// agrees with the strand's orientation.
    fn new(arc: ArcId, along: bool, forward: bool, strand: u8) -> End {
        End {
            arc,
            incoming: along == forward,
            strand,
        }
    }
}

/// Builds a crossing from its four ends in counterclockwise order.
fn make_crossing(ccw: [End; 4], under: u8) -> Crossing {
    let k = (0..4)
        .find(|&i| ccw[i].strand == under && ccw[i].incoming)
        .expect("under strand has an incoming end");
    debug_assert_eq!(ccw[(k + 2) % 4].strand, under);
    debug_assert_ne!(ccw[(k + 1) % 4].incoming, ccw[(k + 3) % 4].incoming);
    let arcs = [0, 1, 2, 3].map(|i| ccw[(k + i) % 4].arc);
    let sign = if ccw[(k + 3) % 4].incoming {
        Sign::Positive
    } else {
        Sign::Negative
    };
    Crossing::new(arcs, sign)
}

struct Fresh(ArcId);

impl Fresh {
    fn take(&mut self) -> ArcId {
        let id = self.0;
        self.0 += 1;
        id
    }
}

/// (crossing, slot) pairs where slots `s` and `s + 1` hold the same arc.
pub(crate) fn r1_removals(d: &LinkDiagram) -> Vec<Dart> {
    let mut out = Vec::new();
    for (x, c) in d.crossings.iter().enumerate() {
        if let Some(s) = (0..4).find(|&s| c.arcs[s] == c.arcs[(s + 1) % 4]) {
            out.push((x, s));
        }
    }
    out
}

pub(crate) fn remove_r1(d: &LinkDiagram, (x, s): Dart) -> LinkDiagram {
    let c = d.crossings[x];
    let mut union = ArcUnion::default();
    union.union(c.arcs[(s + 2) % 4], c.arcs[(s + 3) % 4]);
    let kept = without(d, &[x]);
    LinkDiagram::assemble(kept, &mut union, &d.arc_component, d.n_components)
}

/// A removable bigon: darts `(x, s)` and its far end `(y, t)` carry one side
/// of the bigon at the same level at both crossings.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bigon {
    x: usize,
    s: usize,
    y: usize,
    t: usize,
}

pub(crate) fn r2_removals(d: &LinkDiagram) -> Vec<Bigon> {
    let darts = Darts::build(d);
    let mut out = Vec::new();
    for face in faces_with(d, &darts) {
        if face.len() != 2 {
            continue;
        }
        let (x, s) = face[0];
        let (y, t) = darts.other((x, s));
        if x != y && s % 2 == t % 2 && face[1] == (y, (t + 3) % 4) {
            out.push(Bigon { x, s, y, t });
        }
    }
    out
}

pub(crate) fn remove_r2(d: &LinkDiagram, b: Bigon) -> LinkDiagram {
    let cx = d.crossings[b.x].arcs;
    let cy = d.crossings[b.y].arcs;
    let mut union = ArcUnion::default();
    union.union(cx[(b.s + 2) % 4], cy[(b.t + 2) % 4]);
    union.union(cx[(b.s + 3) % 4], cy[(b.t + 1) % 4]);
    let kept = without(d, &[b.x, b.y]);
    LinkDiagram::assemble(kept, &mut union, &d.arc_component, d.n_components)
}

fn without(d: &LinkDiagram, removed: &[usize]) -> Vec<Crossing> {
    d.crossings
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, c)| *c)
        .collect()
}

/// A triangular face whose first side lies on a strand that is over at both
/// of its crossings or under at both.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Triangle {
    start: Dart,
}

pub(crate) fn r3_moves(d: &LinkDiagram) -> Vec<Triangle> {
    let darts = Darts::build(d);
    let mut out = Vec::new();
    for face in faces_with(d, &darts) {
        if face.len() != 3 {
            continue;
        }
        let [a, b, c] = [face[0].0, face[1].0, face[2].0];
        if a == b || b == c || a == c {
            continue;
        }
        for &(x, s) in &face {
            let (_, t) = darts.other((x, s));
            if s % 2 == t % 2 {
                out.push(Triangle { start: (x, s) });
            }
        }
    }
    out
}

pub(crate) fn apply_r3(d: &LinkDiagram, tri: Triangle) -> LinkDiagram {
    let darts = Darts::build(d);
    let (x, a) = tri.start;
    let (y, a2) = darts.other((x, a));
    let b = (a2 + 3) % 4;
    let (z, b2) = darts.other((y, b));
    let c = (b2 + 3) % 4;
    debug_assert_eq!(darts.face_next((z, c)), (x, a));

    let cx = d.crossings[x].arcs;
    let cy = d.crossings[y].arcs;
    let cz = d.crossings[z].arcs;
    let (e1, e2, e3) = (cx[a], cy[b], cz[c]);
    let p = cx[(a + 2) % 4];
    let r_out = cx[(a + 3) % 4];
    let q = cy[(a2 + 1) % 4];
    let p_out = cy[(a2 + 2) % 4];
    let r = cz[(b2 + 1) % 4];
    let q_out = cz[(b2 + 2) % 4];

    let o1 = runs_forward(d, (x, a));
    let o2 = runs_forward(d, (y, b));
    let o3 = runs_forward(d, (z, c));
    let s1_over = a % 2 == 1;
    let s2_over_s3 = b2 % 2 == 1;

    let mut fresh = Fresh(d.next_arc_id());
    let (f1, g1, h1) = (fresh.take(), fresh.take(), fresh.take());
    let mut components = d.arc_component.clone();
    components.insert(f1, d.arc_component[&e1]);
    components.insert(g1, d.arc_component[&e2]);
    components.insert(h1, d.arc_component[&e3]);

    // strands: 1 carries e1, 2 carries e2, 3 carries e3
    let new_y = make_crossing(
        [
            End::new(f1, false, o1, 1),
            End::new(q_out, false, o2, 2),
            End::new(p, true, o1, 1),
            End::new(g1, true, o2, 2),
        ],
        if s1_over { 2 } else { 1 },
    );
    let new_x = make_crossing(
        [
            End::new(p_out, false, o1, 1),
            End::new(r, true, o3, 3),
            End::new(f1, true, o1, 1),
            End::new(h1, false, o3, 3),
        ],
        if s1_over { 3 } else { 1 },
    );
    let new_z = make_crossing(
        [
            End::new(h1, true, o3, 3),
            End::new(g1, false, o2, 2),
            End::new(r_out, false, o3, 3),
            End::new(q, true, o2, 2),
        ],
        if s2_over_s3 { 3 } else { 2 },
    );
    let mut crossings = d.crossings.clone();
    crossings[x] = new_x;
    crossings[y] = new_y;
    crossings[z] = new_z;
    LinkDiagram::assemble(
        crossings,
        &mut ArcUnion::default(),
        &components,
        d.n_components,
    )
}

/// Adds a curl on the arc leaving `dart`. `loop_left` picks the side of the
/// curl, `first_under` which of its two passes goes under.
pub(crate) fn add_r1(
    d: &LinkDiagram,
    dart: Dart,
    loop_left: bool,
    first_under: bool,
) -> LinkDiagram {
    let darts = Darts::build(d);
    let far = darts.other(dart);
    let e = d.crossings[dart.0].arcs[dart.1];
    let forward = runs_forward(d, dart);
    let mut fresh = Fresh(d.next_arc_id());
    let (e1, e2, l) = (fresh.take(), fresh.take(), fresh.take());
    let mut crossings = d.crossings.clone();
    crossings[dart.0].arcs[dart.1] = e1;
    crossings[far.0].arcs[far.1] = e2;
    let ends = if loop_left {
        [
            End::new(l, false, forward, 0),
            End::new(l, true, forward, 1),
            End::new(e1, true, forward, 0),
            End::new(e2, false, forward, 1),
        ]
    } else {
        [
            End::new(l, false, forward, 0),
            End::new(e2, false, forward, 1),
            End::new(e1, true, forward, 0),
            End::new(l, true, forward, 1),
        ]
    };
    crossings.push(make_crossing(ends, if first_under { 0 } else { 1 }));
    let comp = d.arc_component[&e];
    let mut components = d.arc_component.clone();
    for a in [e1, e2, l] {
        components.insert(a, comp);
    }
    LinkDiagram::assemble(
        crossings,
        &mut ArcUnion::default(),
        &components,
        d.n_components,
    )
}

/// Turns free loop `component` into a one-crossing curl.
pub(crate) fn add_r1_free(d: &LinkDiagram, component: usize, first_under: bool) -> LinkDiagram {
    let mut fresh = Fresh(d.next_arc_id());
    let (l1, l2) = (fresh.take(), fresh.take());
    let ends = [
        End::new(l1, false, true, 0),
        End::new(l1, true, true, 1),
        End::new(l2, true, true, 0),
        End::new(l2, false, true, 1),
    ];
    let mut crossings = d.crossings.clone();
    crossings.push(make_crossing(ends, if first_under { 0 } else { 1 }));
    let mut components = d.arc_component.clone();
    components.insert(l1, component);
    components.insert(l2, component);
    LinkDiagram::assemble(
        crossings,
        &mut ArcUnion::default(),
        &components,
        d.n_components,
    )
}

/// Pushes a finger of the arc leaving `pushed` across the arc leaving
/// `target`; both darts must border the same face.
pub(crate) fn add_r2(
    d: &LinkDiagram,
    target: Dart,
    pushed: Dart,
    pushed_over: bool,
) -> LinkDiagram {
    let darts = Darts::build(d);
    let target_far = darts.other(target);
    let pushed_far = darts.other(pushed);
    let e = d.crossings[target.0].arcs[target.1];
    let f = d.crossings[pushed.0].arcs[pushed.1];
    debug_assert_ne!(e, f);
    let oe = runs_forward(d, target);
    let of = runs_forward(d, pushed);
    let mut fresh = Fresh(d.next_arc_id());
    let [e1, e2, e3, f1, f2, f3] = [0; 6].map(|_| fresh.take());

    let mut crossings = d.crossings.clone();
    crossings[target.0].arcs[target.1] = e1;
    crossings[target_far.0].arcs[target_far.1] = e3;
    crossings[pushed.0].arcs[pushed.1] = f1;
    crossings[pushed_far.0].arcs[pushed_far.1] = f3;

    // strand 0 is the target arc, strand 1 the finger
    let under = if pushed_over { 0 } else { 1 };
    crossings.push(make_crossing(
        [
            End::new(e2, false, oe, 0),
            End::new(f3, false, of, 1),
            End::new(e1, true, oe, 0),
            End::new(f2, true, of, 1),
        ],
        under,
    ));
    crossings.push(make_crossing(
        [
            End::new(e3, false, oe, 0),
            End::new(f1, true, of, 1),
            End::new(e2, true, oe, 0),
            End::new(f2, false, of, 1),
        ],
        under,
    ));
    let mut components = d.arc_component.clone();
    for a in [e1, e2, e3] {
        components.insert(a, d.arc_component[&e]);
    }
    for a in [f1, f2, f3] {
        components.insert(a, d.arc_component[&f]);
    }
    LinkDiagram::assemble(
        crossings,
        &mut ArcUnion::default(),
        &components,
        d.n_components,
    )
}

/// Applies one uniformly chosen move of one of the `kinds` that is
/// available on `d`. Returns `None` when no such move exists.
pub fn apply_random_move<R: Rng + ?Sized>(
    d: &LinkDiagram,
    kinds: &[ReidemeisterKind],
    rng: &mut R,
) -> Option<(LinkDiagram, ReidemeisterKind)> {
    let darts = Darts::build(d);
    let face_list = faces_with(d, &darts);
    let r2_faces: Vec<&Vec<Dart>> = face_list
        .iter()
        .filter(|f| {
            f.iter()
                .any(|&(x, s)| d.crossings[x].arcs[s] != d.crossings[f[0].0].arcs[f[0].1])
        })
        .collect();
    let r1_rm = r1_removals(d);
    let r2_rm = r2_removals(d);
    let r3 = r3_moves(d);
    let free = d.free_components();

    let available: Vec<ReidemeisterKind> = kinds
        .iter()
        .copied()
        .filter(|k| match k {
            ReidemeisterKind::AddR1 => !d.crossings.is_empty() || !free.is_empty(),
            ReidemeisterKind::AddR2 => !r2_faces.is_empty(),
            ReidemeisterKind::R3 => !r3.is_empty(),
            ReidemeisterKind::RemoveR1 => !r1_rm.is_empty(),
            ReidemeisterKind::RemoveR2 => !r2_rm.is_empty(),
        })
        .collect();
    let kind = *available.choose(rng)?;
    let next = match kind {
        ReidemeisterKind::AddR1 => {
            let total = 4 * d.crossings.len() + free.len();
            let pick = rng.gen_range(0..total);
            let (left, under) = (rng.gen(), rng.gen());
            if pick < 4 * d.crossings.len() {
                add_r1(d, (pick / 4, pick % 4), left, under)
            } else {
                add_r1_free(d, free[pick - 4 * d.crossings.len()], under)
            }
        }
        ReidemeisterKind::AddR2 => {
            let face = r2_faces.choose(rng).expect("non-empty");
            loop {
                let i = *face.choose(rng).expect("non-empty face");
                let j = *face.choose(rng).expect("non-empty face");
                if d.crossings[i.0].arcs[i.1] != d.crossings[j.0].arcs[j.1] {
                    break add_r2(d, i, j, rng.gen());
                }
            }
        }
        ReidemeisterKind::R3 => apply_r3(d, *r3.choose(rng).expect("non-empty")),
        ReidemeisterKind::RemoveR1 => remove_r1(d, *r1_rm.choose(rng).expect("non-empty")),
        ReidemeisterKind::RemoveR2 => remove_r2(d, *r2_rm.choose(rng).expect("non-empty")),
    };
    Some((next, kind))
}

const ALL_KINDS: [ReidemeisterKind; 5] = [
    ReidemeisterKind::AddR1,
    ReidemeisterKind::AddR2,
    ReidemeisterKind::R3,
    ReidemeisterKind::RemoveR1,
    ReidemeisterKind::RemoveR2,
];

/// Applies up to `moves` random Reidemeister moves of every kind.
pub fn random_reidemeister<R: Rng + ?Sized>(
    d: &LinkDiagram,
    moves: usize,
    rng: &mut R,
) -> LinkDiagram {
    run_moves(d, moves, &ALL_KINDS, rng)
}

/// Applies `moves` random moves that never lower the crossing number.
pub fn random_inflate<R: Rng + ?Sized>(d: &LinkDiagram, moves: usize, rng: &mut R) -> LinkDiagram {
    run_moves(
        d,
        moves,
        &[
            ReidemeisterKind::AddR1,
            ReidemeisterKind::AddR2,
            ReidemeisterKind::R3,
        ],
        rng,
    )
}

fn run_moves<R: Rng + ?Sized>(
    d: &LinkDiagram,
    moves: usize,
    kinds: &[ReidemeisterKind],
    rng: &mut R,
) -> LinkDiagram {
    let mut cur = d.clone();
    for _ in 0..moves {
        match apply_random_move(&cur, kinds, rng) {
            Some((next, _)) => cur = next,
            None => break,
        }
    }
    cur.canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hopf() -> LinkDiagram {
        let comps = BTreeMap::from([(1, 1), (2, 1), (3, 2), (4, 2)]);
        LinkDiagram::from_pd(&[[1, 4, 2, 3], [4, 1, 3, 2]], comps, 2, 0).unwrap()
    }

    /// V - E + F = 2 per connected piece of a planar diagram.
    fn euler_ok(d: &LinkDiagram) -> bool {
        let v = d.crossings.len() as i64;
        if v == 0 {
            return true;
        }
        let f = faces(d).len() as i64;
        let pieces = connected_pieces(d) as i64;
        v - 2 * v + f == 2 * pieces
    }

    fn connected_pieces(d: &LinkDiagram) -> usize {
        let mut union = ArcUnion::default();
        for c in &d.crossings {
            for a in &c.arcs[1..] {
                union.union(c.arcs[0], *a);
            }
        }
        let mut roots: Vec<ArcId> = d.arc_component.keys().map(|&a| union.find(a)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    #[test]
    fn hopf_has_four_bigon_faces() {
        let f = faces(&hopf());
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|face| face.len() == 2));
        assert!(r2_removals(&hopf()).is_empty());
    }

    #[test]
    fn curl_then_uncurl() {
        let d = hopf();
        for dart in [(0, 0), (0, 1), (1, 2), (1, 3)] {
            for left in [false, true] {
                for under in [false, true] {
                    let k = add_r1(&d, dart, left, under);
                    assert_eq!(k.validate(), Ok(()));
                    assert_eq!(k.crossing_count(), 3);
                    assert!(euler_ok(&k));
                    assert_eq!(k.linking_number(1, 2), Ok(1));
                    let spots = r1_removals(&k);
                    assert_eq!(spots.len(), 1);
                    let back = remove_r1(&k, spots[0]);
                    assert_eq!(back.canonicalize(), d.canonicalize());
                }
            }
        }
    }

    #[test]
    fn free_loop_curl_removes_back_to_free_loop() {
        let d = LinkDiagram::trivial(2);
        let k = add_r1_free(&d, 2, true);
        assert_eq!(k.validate(), Ok(()));
        assert_eq!(k.free_components(), vec![1]);
        let spots = r1_removals(&k);
        let back = remove_r1(&k, spots[0]);
        assert_eq!(back, d);
    }

    #[test]
    fn finger_moves_are_planar_and_removable() {
        let d = hopf();
        let darts = Darts::build(&d);
        for face in faces_with(&d, &darts) {
            for &i in &face {
                for &j in &face {
                    if d.crossings[i.0].arcs[i.1] == d.crossings[j.0].arcs[j.1] {
                        continue;
                    }
                    for over in [false, true] {
                        let r = add_r2(&d, i, j, over);
                        assert_eq!(r.validate(), Ok(()));
                        assert!(euler_ok(&r), "finger {i:?} {j:?} {over}");
                        assert_eq!(r.linking_number(1, 2), Ok(1));
                        let bigons = r2_removals(&r);
                        assert!(!bigons.is_empty());
                        let back = remove_r2(&r, bigons[0]);
                        assert_eq!(back.crossing_count(), 2);
                        assert_eq!(back.linking_number(1, 2), Ok(1));
                    }
                }
            }
        }
    }

    #[test]
    fn random_moves_keep_diagrams_planar_and_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut d = hopf();
        let mut seen_r3 = 0;
        for _ in 0..400 {
            let (next, kind) = apply_random_move(&d, &ALL_KINDS, &mut rng).unwrap();
            assert_eq!(next.validate(), Ok(()));
            assert!(euler_ok(&next), "{kind:?}");
            assert_eq!(next.linking_number(1, 2), Ok(1), "{kind:?}");
            if kind == ReidemeisterKind::R3 {
                seen_r3 += 1;
            }
            d = if next.crossing_count() > 40 {
                hopf()
            } else {
                next
            };
        }
        assert!(seen_r3 > 0);
    }

    #[test]
    fn r3_is_undone_by_r3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        for _ in 0..200 {
            let d = random_inflate(&hopf(), 6, &mut rng);
            for tri in r3_moves(&d) {
                let moved = apply_r3(&d, tri);
                assert!(euler_ok(&moved));
                assert_eq!(moved.crossing_count(), d.crossing_count());
                let key = d.canonicalize();
                let back = r3_moves(&moved)
                    .into_iter()
                    .map(|t| apply_r3(&moved, t).canonicalize())
                    .any(|b| {
                        b.crossings.iter().map(|c| c.sign).collect::<Vec<_>>()
                            == key.crossings.iter().map(|c| c.sign).collect::<Vec<_>>()
                            && faces(&b).len() == faces(&key).len()
                    });
                assert!(back);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}
