//! Diagram rewriting moves and the fuzzing walk that drives the invariance
//! property suites.
//!
//! Kink insertion (classical and pseudo) and strand pokes are implemented
//! for arbitrary sites; slide-style moves are exercised through curated
//! fixture pairs instead of a general triangle detector.

use std::collections::BTreeMap;

use crate::braid::{braid_closure, pseudo_sigma, sigma, sigma_inv, BraidGen};
use crate::diagram::{ArcId, Crossing, CrossingKind, DiagramError, PseudoDiagram, SlotDir};

/// Moves the random walk can apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    R1Plus,
    R1Minus,
    P1,
    R2,
}

/// Which side of the strand the inserted kink loop sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Split-mix generator; deterministic walks under a fixed seed.
#[derive(Clone, Debug)]
pub struct WalkRng(u64);

impl WalkRng {
    pub fn new(seed: u64) -> Self {
        WalkRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

fn fresh_arc(d: &PseudoDiagram) -> ArcId {
    d.arcs().max().map_or(1, |a| a + 1)
}

/// Crossing-free circles may be stored as multi-arc successor cycles; merge
/// such a cycle down to one arc so kink and poke surgery can reuse its id.
fn coalesce_circle(d: &PseudoDiagram, arc: ArcId) -> Result<(PseudoDiagram, ArcId), DiagramError> {
    if !d.crossing_free_arcs().contains(&arc) {
        return Ok((d.clone(), arc));
    }
    let mut successor = d.successor().clone();
    let mut cur = d.succ(arc);
    while cur != arc {
        let next = successor[&cur];
        successor.remove(&cur);
        cur = next;
    }
    successor.insert(arc, arc);
    Ok((PseudoDiagram::new(d.crossings().to_vec(), successor)?, arc))
}

/// Occurrence of `arc`'s head among crossing slots, if any.
fn head_occurrence(d: &PseudoDiagram, arc: ArcId) -> Option<(usize, usize)> {
    for (ci, c) in d.crossings().iter().enumerate() {
        for (si, &a) in c.arcs.iter().enumerate() {
            if a == arc && d.slot_dir(ci, si) == SlotDir::In {
                return Some((ci, si));
            }
        }
    }
    None
}

struct KinkSplit {
    crossings: Vec<Crossing>,
    successor: BTreeMap<ArcId, ArcId>,
    loop_arc: ArcId,
    tail_arc: ArcId,
}

/// Split arc `x` for a one-crossing insertion: the strand becomes
/// `x -> loop_arc -> tail_arc` where `tail_arc` takes over `x`'s old head.
/// On a crossing-free circle the tail arc is `x` itself.
fn split_for_kink(d: &PseudoDiagram, x: ArcId) -> Result<KinkSplit, DiagramError> {
    if !d.successor().contains_key(&x) {
        return Err(DiagramError::UnknownArc(x));
    }
    let (d, x) = coalesce_circle(d, x)?;
    let loop_arc = fresh_arc(&d);
    let mut crossings = d.crossings().to_vec();
    let mut successor = d.successor().clone();
    let tail_arc = if let Some((ci, si)) = head_occurrence(&d, x) {
        let tail = loop_arc + 1;
        crossings[ci].arcs[si] = tail;
        let old_next = successor[&x];
        successor.insert(x, loop_arc);
        successor.insert(loop_arc, tail);
        successor.insert(tail, old_next);
        tail
    } else {
        successor.insert(x, loop_arc);
        successor.insert(loop_arc, x);
        x
    };
    Ok(KinkSplit {
        crossings,
        successor,
        loop_arc,
        tail_arc,
    })
}

/// Insert a classical kink of the given chirality on `arc`. The writhe
/// changes by the chirality sign; the normalized bracket is unchanged.
pub fn r1_insert(
    d: &PseudoDiagram,
    arc: ArcId,
    positive: bool,
    side: Side,
) -> Result<PseudoDiagram, DiagramError> {
    insert_kink(d, arc, positive, side, CrossingKind::Classical)
}

/// Insert a pseudo kink on `arc`; both raw and normalized brackets are
/// unchanged because `V*d + H = 1`.
pub fn p1_insert(d: &PseudoDiagram, arc: ArcId, side: Side) -> Result<PseudoDiagram, DiagramError> {
    insert_kink(d, arc, true, side, CrossingKind::Pseudo)
}

fn insert_kink(
    d: &PseudoDiagram,
    arc: ArcId,
    positive: bool,
    side: Side,
    kind: CrossingKind,
) -> Result<PseudoDiagram, DiagramError> {
    let KinkSplit {
        mut crossings,
        successor,
        loop_arc: n,
        tail_arc: m,
    } = split_for_kink(d, arc)?;
    let x = arc;
    let arcs = match (side, positive) {
        (Side::Left, true) => [x, m, n, n],
        (Side::Left, false) => [x, n, n, m],
        (Side::Right, true) => [n, n, m, x],
        (Side::Right, false) => [n, x, m, n],
    };
    crossings.push(Crossing { kind, arcs });
    PseudoDiagram::new(crossings, successor)
}

/// Remove the kink at crossing `i` (inverse of [`r1_insert`] / [`p1_insert`]).
/// The crossing must have its loop arc on two cyclically adjacent slots.
pub fn kink_remove(d: &PseudoDiagram, i: usize) -> Result<PseudoDiagram, DiagramError> {
    let c = *d
        .crossings()
        .get(i)
        .ok_or(DiagramError::BadIndex(i))?;
    let a = c.arcs;
    let loop_slot = (0..4)
        .find(|&s| a[s] == a[(s + 1) % 4])
        .ok_or_else(|| DiagramError::Validation(format!("crossing {i} is not a kink")))?;
    let n = a[loop_slot];
    // The two remaining slots hold the incoming arc x and outgoing arc m.
    let s2 = (loop_slot + 2) % 4;
    let s3 = (loop_slot + 3) % 4;
    let (x, m) = match (d.slot_dir(i, s2), d.slot_dir(i, s3)) {
        (SlotDir::In, SlotDir::Out) => (a[s2], a[s3]),
        (SlotDir::Out, SlotDir::In) => (a[s3], a[s2]),
        _ => {
            return Err(DiagramError::Validation(format!(
                "crossing {i} is not a kink"
            )))
        }
    };
    let mut crossings = d.crossings().to_vec();
    crossings.remove(i);
    let mut successor = d.successor().clone();
    if x == m {
        // Unkinking a one-crossing circle leaves a free loop.
        successor.remove(&n);
        successor.insert(x, x);
    } else {
        let after_m = successor[&m];
        successor.remove(&n);
        successor.remove(&m);
        successor.insert(x, if after_m == m { x } else { after_m });
        for c in crossings.iter_mut() {
            for arc in c.arcs.iter_mut() {
                if *arc == m {
                    *arc = x;
                }
            }
        }
        let redirect: Vec<ArcId> = successor
            .iter()
            .filter(|(_, v)| **v == m)
            .map(|(k, _)| *k)
            .collect();
        for k in redirect {
            successor.insert(k, x);
        }
    }
    PseudoDiagram::new(crossings, successor)
}

/// How a poke site was located: the darts of the two arcs on a shared face,
/// each recording whether the boundary travels the arc tail-to-head.
#[derive(Clone, Copy, Debug)]
struct PokeSite {
    arc1: ArcId,
    arc2: ArcId,
    forward1: bool,
    forward2: bool,
}

fn find_poke_site(
    d: &PseudoDiagram,
    arc1: ArcId,
    arc2: ArcId,
) -> Result<PokeSite, DiagramError> {
    if arc1 == arc2 {
        return Err(DiagramError::NotSameFace(arc1, arc2));
    }
    for arc in [arc1, arc2] {
        if !d.successor().contains_key(&arc) {
            return Err(DiagramError::UnknownArc(arc));
        }
    }
    let faces = d.faces()?;
    for face in &faces {
        let darts = face.arc_darts(d);
        let d1 = darts.iter().find(|(a, _)| *a == arc1);
        let d2 = darts.iter().find(|(a, _)| *a == arc2);
        if let (Some(&(_, f1)), Some(&(_, f2))) = (d1, d2) {
            return Ok(PokeSite {
                arc1,
                arc2,
                forward1: f1,
                forward2: f2,
            });
        }
    }
    Err(DiagramError::NotSameFace(arc1, arc2))
}

/// Poke `arc1` across `arc2` through a face they co-bound, adding two
/// classical crossings of opposite sign. `over_first` selects which strand
/// runs on top at both crossings. Writhe and bracket are unchanged.
pub fn r2_insert(
    d: &PseudoDiagram,
    arc1: ArcId,
    arc2: ArcId,
    over_first: bool,
) -> Result<PseudoDiagram, DiagramError> {
    let site = find_poke_site(d, arc1, arc2)?;
    poke_at(d, site, over_first)
}

fn split_for_poke(
    base: &PseudoDiagram,
    crossings: &mut [Crossing],
    successor: &mut BTreeMap<ArcId, ArcId>,
    arc: ArcId,
    loop_arc: ArcId,
    tail_candidate: ArcId,
) -> ArcId {
    let head = (0..crossings.len()).find_map(|ci| {
        (0..4).find_map(|si| {
            (crossings[ci].arcs[si] == arc && base.slot_dir(ci, si) == SlotDir::In)
                .then_some((ci, si))
        })
    });
    if let Some((ci, si)) = head {
        crossings[ci].arcs[si] = tail_candidate;
        let old_next = successor[&arc];
        successor.insert(arc, loop_arc);
        successor.insert(loop_arc, tail_candidate);
        successor.insert(tail_candidate, old_next);
        tail_candidate
    } else {
        successor.insert(arc, loop_arc);
        successor.insert(loop_arc, arc);
        arc
    }
}

fn poke_at(d: &PseudoDiagram, site: PokeSite, over_first: bool) -> Result<PseudoDiagram, DiagramError> {
    // Normalize so the first arc is the boundary-forward one when the darts
    // disagree; the tuple tables below assume that reading.
    let (site, over_first) = if !site.forward1 && site.forward2 {
        (
            PokeSite {
                arc1: site.arc2,
                arc2: site.arc1,
                forward1: site.forward2,
                forward2: site.forward1,
            },
            !over_first,
        )
    } else {
        (site, over_first)
    };
    let (d, x) = coalesce_circle(d, site.arc1)?;
    let (d, y) = coalesce_circle(&d, site.arc2)?;

    // Split both arcs: x -> n1 -> m1 and y -> n2 -> m2.
    let base = fresh_arc(&d);
    let mut crossings = d.crossings().to_vec();
    let mut successor = d.successor().clone();
    let n1 = base;
    let m1 = split_for_poke(&d, &mut crossings, &mut successor, x, n1, base + 1);
    let n2 = base + 2;
    let m2 = split_for_poke(&d, &mut crossings, &mut successor, y, n2, base + 3);

    // Crossing tuples by how the shared face boundary travels the two arcs.
    // Both forward: the strands run antiparallel in the plane; forward and
    // backward: parallel; both backward: the mirror of the antiparallel
    // picture (tuples rotation-reversed).
    let (c1, c2) = match (site.forward1, site.forward2, over_first) {
        (true, true, true) => ([n2, x, m2, n1], [y, m1, n2, n1]),
        (true, true, false) => ([x, m2, n1, n2], [n1, y, m1, n2]),
        (true, false, true) => ([y, n1, n2, x], [n2, n1, m2, m1]),
        (true, false, false) => ([x, y, n1, n2], [n1, m2, m1, n2]),
        (false, false, true) => ([n2, n1, m2, x], [y, n1, n2, m1]),
        (false, false, false) => ([x, n2, n1, m2], [n1, n2, m1, y]),
        (false, true, _) => unreachable!("normalized above"),
    };
    crossings.push(Crossing {
        kind: CrossingKind::Classical,
        arcs: c1,
    });
    crossings.push(Crossing {
        kind: CrossingKind::Classical,
        arcs: c2,
    });
    PseudoDiagram::new(crossings, successor)
}

/// A before/after pair of diagrams differing by exactly one slide move.
#[derive(Clone, Debug)]
pub struct MovePair {
    pub name: String,
    pub before: PseudoDiagram,
    pub after: PseudoDiagram,
}

fn ambient_contexts() -> Vec<(String, Vec<BraidGen>, Vec<BraidGen>)> {
    vec![
        ("bare".into(), vec![], vec![]),
        ("s1".into(), vec![sigma(1)], vec![]),
        ("s2i-s1".into(), vec![sigma_inv(2)], vec![sigma(1)]),
        ("s1s2-s2".into(), vec![sigma(1), sigma(2)], vec![sigma(2)]),
        (
            "s2s1s2i-s1i".into(),
            vec![sigma(2), sigma(1), sigma_inv(2)],
            vec![sigma_inv(1)],
        ),
    ]
}

fn pair_family(name: &str, before_core: &[BraidGen], after_core: &[BraidGen]) -> Vec<MovePair> {
    let mut out = Vec::new();
    for (ambient, prefix, suffix) in ambient_contexts() {
        let mut before = prefix.clone();
        before.extend_from_slice(before_core);
        before.extend_from_slice(&suffix);
        let mut after = prefix;
        after.extend_from_slice(after_core);
        after.extend_from_slice(&suffix);
        out.push(MovePair {
            name: format!("{name}-{ambient}"),
            before: braid_closure(3, &before).expect("fixture braid closes"),
            after: braid_closure(3, &after).expect("fixture braid closes"),
        });
    }
    out
}

/// Slide a strand across a classical crossing: both sides classical.
pub fn r3_fixture_pairs() -> Vec<MovePair> {
    pair_family(
        "r3",
        &[sigma(1), sigma(2), sigma(1)],
        &[sigma(2), sigma(1), sigma(2)],
    )
}

/// Slide a pseudo crossing past a classical crossing, entering from below.
pub fn p2_fixture_pairs() -> Vec<MovePair> {
    pair_family(
        "p2",
        &[pseudo_sigma(1), sigma(2), sigma(1)],
        &[sigma(2), sigma(1), pseudo_sigma(2)],
    )
}

/// Slide a pseudo crossing past a classical crossing, entering from above.
pub fn p3_fixture_pairs() -> Vec<MovePair> {
    pair_family(
        "p3",
        &[sigma(1), sigma(2), pseudo_sigma(1)],
        &[pseudo_sigma(2), sigma(1), sigma(2)],
    )
}

/// Apply `n_steps` random applicable moves, returning every intermediate
/// diagram (the first entry is the input). Deterministic per seed.
pub fn random_move_walk_trace(
    d: &PseudoDiagram,
    seed: u64,
    n_steps: usize,
    allowed: &[MoveKind],
) -> Vec<PseudoDiagram> {
    let mut rng = WalkRng::new(seed);
    let mut trace = vec![d.clone()];
    let mut cur = d.clone();
    for _ in 0..n_steps {
        if allowed.is_empty() {
            break;
        }
        let kind = allowed[rng.below(allowed.len())];
        let next = apply_random_move(&cur, kind, &mut rng);
        if let Some(next) = next {
            cur = next;
        }
        trace.push(cur.clone());
    }
    trace
}

/// Final diagram of [`random_move_walk_trace`].
pub fn random_move_walk(
    d: &PseudoDiagram,
    seed: u64,
    n_steps: usize,
    allowed: &[MoveKind],
) -> PseudoDiagram {
    random_move_walk_trace(d, seed, n_steps, allowed)
        .pop()
        .expect("trace is nonempty")
}

fn apply_random_move(d: &PseudoDiagram, kind: MoveKind, rng: &mut WalkRng) -> Option<PseudoDiagram> {
    match kind {
        MoveKind::R1Plus | MoveKind::R1Minus | MoveKind::P1 => {
            let arcs: Vec<ArcId> = d.arcs().collect();
            if arcs.is_empty() {
                return None;
            }
            let arc = arcs[rng.below(arcs.len())];
            let side = if rng.coin() { Side::Left } else { Side::Right };
            match kind {
                MoveKind::R1Plus => r1_insert(d, arc, true, side).ok(),
                MoveKind::R1Minus => r1_insert(d, arc, false, side).ok(),
                MoveKind::P1 => p1_insert(d, arc, side).ok(),
                MoveKind::R2 => unreachable!(),
            }
        }
        MoveKind::R2 => {
            let faces = d.faces().ok()?;
            let mut sites: Vec<PokeSite> = Vec::new();
            for face in &faces {
                let darts = face.arc_darts(d);
                for i in 0..darts.len() {
                    for j in (i + 1)..darts.len() {
                        if darts[i].0 != darts[j].0 {
                            sites.push(PokeSite {
                                arc1: darts[i].0,
                                arc2: darts[j].0,
                                forward1: darts[i].1,
                                forward2: darts[j].1,
                            });
                        }
                    }
                }
            }
            if sites.is_empty() {
                return None;
            }
            let site = sites[rng.below(sites.len())];
            poke_at(d, site, rng.coin()).ok()
        }
    }
}

/// Parse a move list like `r1,p1,r2` for the fuzz command.
pub fn parse_move_tokens(s: &str) -> Result<Vec<MoveKind>, String> {
    let mut out = Vec::new();
    for token in s.split(',') {
        match token.trim().to_ascii_lowercase().as_str() {
            "r1" => {
                out.push(MoveKind::R1Plus);
                out.push(MoveKind::R1Minus);
            }
            "p1" => out.push(MoveKind::P1),
            "r2" => out.push(MoveKind::R2),
            other => return Err(format!("unknown move `{other}` (expected r1, p1, r2)")),
        }
    }
    if out.is_empty() {
        return Err("empty move list".into());
    }
    Ok(out)
}
