//! Oriented pseudo link diagrams as extended PD codes.
//!
//! A crossing lists its four incident arcs counterclockwise starting at the
//! incoming under-arc `a`, so the under-strand runs `a -> c` and the
//! over-strand occupies slots `b` and `d`. A crossing is either classical
//! (with over/under information) or pseudo (drawn as a solid square; the
//! "under" slot is bookkeeping only). The successor map sends each arc to
//! the next arc along the same oriented component; its cycles are exactly
//! the components.
//!
//! Sign convention, pinned by the positive trefoil fixture: the incoming
//! over-arc is whichever of `{b, d}` has its successor equal to the other;
//! the crossing is positive when the over-strand runs `d -> b` and negative
//! when it runs `b -> d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ArcId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingKind {
    #[serde(rename = "X")]
    Classical,
    #[serde(rename = "P")]
    Pseudo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub arcs: [ArcId; 4],
}

/// Whether an arc occurrence at a crossing slot is the arc's head (the strand
/// runs into the crossing there) or its tail (the strand leaves there).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotDir {
    In,
    Out,
}

/// One of the two crossingless reconnections of a crossing.
///
/// `Vertical` is the orientation-compatible smoothing (each joined pair of
/// slots has one incoming and one outgoing arc); `Horizontal` is the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("crossing {0} is not classical")]
    NotClassical(usize),
    #[error("crossing {0} has ambiguous over-strand orientation")]
    AmbiguousOrientation(usize),
    #[error("unknown arc {0}")]
    UnknownArc(ArcId),
    #[error("arcs {0} and {1} do not co-bound a face")]
    NotSameFace(ArcId, ArcId),
    #[error("crossing index {0} out of range")]
    BadIndex(usize),
}

/// A validated oriented pseudo link diagram.
///
/// Invariants established at construction: every arc id occurs exactly twice
/// across all crossing slots or not at all (arcs with no occurrences form
/// whole zero-crossing components); the successor map is a permutation of
/// the arc ids; each crossing's strand transitions agree with the successor
/// map, with classical under-strands running slot `a` to slot `c`; and every
/// two-occurrence arc has exactly one head and one tail among its slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDiagram {
    crossings: Vec<Crossing>,
    successor: BTreeMap<ArcId, ArcId>,
    slot_dirs: Vec<[SlotDir; 4]>,
    n_components: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonCrossing {
    kind: CrossingKind,
    arcs: [ArcId; 4],
}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    crossings: Vec<JsonCrossing>,
    successor: BTreeMap<String, ArcId>,
}

impl PseudoDiagram {
    pub fn new(
        crossings: Vec<Crossing>,
        successor: BTreeMap<ArcId, ArcId>,
    ) -> Result<Self, DiagramError> {
        let slot_dirs = resolve_orientations(&crossings, &successor)?;
        let n_components = count_cycles(&successor);
        let d = PseudoDiagram {
            crossings,
            successor,
            slot_dirs,
            n_components,
        };
        d.check_component_homogeneity()?;
        Ok(d)
    }

    // Zero-occurrence arcs must form whole successor cycles: a component
    // either meets crossings at every arc junction or at none.
    fn check_component_homogeneity(&self) -> Result<(), DiagramError> {
        let mut occ_count: BTreeMap<ArcId, usize> = BTreeMap::new();
        for c in &self.crossings {
            for a in c.arcs {
                *occ_count.entry(a).or_insert(0) += 1;
            }
        }
        for (&arc, &next) in &self.successor {
            let a = occ_count.get(&arc).copied().unwrap_or(0);
            let b = occ_count.get(&next).copied().unwrap_or(0);
            if (a == 0) != (b == 0) {
                return Err(DiagramError::Validation(format!(
                    "arc {arc} and its successor {next} mix crossing-free and crossing-bound arcs"
                )));
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn successor(&self) -> &BTreeMap<ArcId, ArcId> {
        &self.successor
    }

    pub fn succ(&self, arc: ArcId) -> ArcId {
        self.successor[&arc]
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn pseudo_count(&self) -> usize {
        self.crossings
            .iter()
            .filter(|c| c.kind == CrossingKind::Pseudo)
            .count()
    }

    pub fn is_classical(&self) -> bool {
        self.pseudo_count() == 0
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.successor.keys().copied()
    }

    pub fn slot_dir(&self, crossing: usize, slot: usize) -> SlotDir {
        self.slot_dirs[crossing][slot]
    }

    /// Arcs whose head is not at any crossing, i.e. the arcs of zero-crossing
    /// components; the junction to their successor is a plain point.
    pub fn crossing_free_arcs(&self) -> BTreeSet<ArcId> {
        let mut seen: BTreeSet<ArcId> = BTreeSet::new();
        for c in &self.crossings {
            seen.extend(c.arcs);
        }
        self.arcs().filter(|a| !seen.contains(a)).collect()
    }

    /// Number of components that meet no crossing at all.
    pub fn zero_crossing_components(&self) -> usize {
        let free = self.crossing_free_arcs();
        let mut visited: BTreeSet<ArcId> = BTreeSet::new();
        let mut n = 0;
        for &start in &free {
            if visited.contains(&start) {
                continue;
            }
            n += 1;
            let mut a = start;
            loop {
                visited.insert(a);
                a = self.succ(a);
                if a == start {
                    break;
                }
            }
        }
        n
    }

    /// Sign of a classical crossing: `+1` when the over-strand runs `d -> b`,
    /// `-1` when it runs `b -> d`.
    pub fn crossing_sign(&self, i: usize) -> Result<i8, DiagramError> {
        let c = self.crossings.get(i).ok_or(DiagramError::BadIndex(i))?;
        if c.kind != CrossingKind::Classical {
            return Err(DiagramError::NotClassical(i));
        }
        match (self.slot_dirs[i][1], self.slot_dirs[i][3]) {
            (SlotDir::Out, SlotDir::In) => Ok(1),
            (SlotDir::In, SlotDir::Out) => Ok(-1),
            _ => Err(DiagramError::AmbiguousOrientation(i)),
        }
    }

    /// Sum of signs over classical crossings; pseudo crossings contribute 0.
    pub fn writhe(&self) -> i64 {
        (0..self.crossings.len())
            .filter_map(|i| self.crossing_sign(i).ok())
            .map(i64::from)
            .sum()
    }

    /// Copy with crossing `i` turned into a pseudo crossing.
    pub fn make_pseudo(&self, i: usize) -> Result<Self, DiagramError> {
        let c = self.crossings.get(i).ok_or(DiagramError::BadIndex(i))?;
        if c.kind != CrossingKind::Classical {
            return Err(DiagramError::NotClassical(i));
        }
        let mut crossings = self.crossings.clone();
        crossings[i].kind = CrossingKind::Pseudo;
        Self::new(crossings, self.successor.clone())
    }

    /// Copy with over and under swapped at crossing `i`. The arc tuple is
    /// rotated so the old over-strand's incoming arc becomes the new slot
    /// `a`; the crossing sign flips and switching twice restores the
    /// original tuple.
    pub fn switch_crossing(&self, i: usize) -> Result<Self, DiagramError> {
        let sign = self.crossing_sign(i)?;
        let [a, b, c, d] = self.crossings[i].arcs;
        let rotated = if sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
        let mut crossings = self.crossings.clone();
        crossings[i].arcs = rotated;
        Self::new(crossings, self.successor.clone())
    }

    /// Mirror image: reverse every crossing's rotation, keeping slot `a`.
    /// Over/under trades places with the planar reflection, so every
    /// classical sign flips and brackets transform by `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                kind: c.kind,
                arcs: [c.arcs[0], c.arcs[3], c.arcs[2], c.arcs[1]],
            })
            .collect();
        Self::new(crossings, self.successor.clone()).expect("mirror of a valid diagram is valid")
    }

    /// Rename arcs by a bijection. Used to check that verdicts and brackets
    /// do not depend on labels.
    pub fn relabel(&self, map: &BTreeMap<ArcId, ArcId>) -> Result<Self, DiagramError> {
        let get = |a: ArcId| -> Result<ArcId, DiagramError> {
            map.get(&a).copied().ok_or(DiagramError::UnknownArc(a))
        };
        let mut crossings = Vec::with_capacity(self.crossings.len());
        for c in &self.crossings {
            crossings.push(Crossing {
                kind: c.kind,
                arcs: [
                    get(c.arcs[0])?,
                    get(c.arcs[1])?,
                    get(c.arcs[2])?,
                    get(c.arcs[3])?,
                ],
            });
        }
        let mut successor = BTreeMap::new();
        for (&a, &b) in &self.successor {
            successor.insert(get(a)?, get(b)?);
        }
        Self::new(crossings, successor)
    }

    /// The two slot pairs joined by the given smoothing of crossing `i`.
    ///
    /// The vertical smoothing is the unique pairing of adjacent slots in
    /// which every pair joins an incoming arc to an outgoing one; this makes
    /// the choice invariant under rotating a pseudo crossing's tuple.
    pub fn smoothing_pairs(&self, i: usize, s: Smoothing) -> [(usize, usize); 2] {
        let dirs = &self.slot_dirs[i];
        let adjacent_compatible = dirs[0] != dirs[1];
        match (s, adjacent_compatible) {
            (Smoothing::Vertical, true) | (Smoothing::Horizontal, false) => [(0, 1), (2, 3)],
            (Smoothing::Vertical, false) | (Smoothing::Horizontal, true) => [(0, 3), (1, 2)],
        }
    }

    /// Replace crossing `i` by one of its smoothings, reconnecting and (for
    /// the horizontal smoothing) reversing a strand segment as needed.
    pub fn smooth_crossing(&self, i: usize, s: Smoothing) -> Result<Self, DiagramError> {
        if i >= self.crossings.len() {
            return Err(DiagramError::BadIndex(i));
        }
        let pairs = self.smoothing_pairs(i, s);
        let arcs = self.crossings[i].arcs;
        let dirs = self.slot_dirs[i];

        let mut crossings: Vec<Crossing> = self.crossings.clone();
        crossings.remove(i);
        let mut successor = self.successor.clone();

        // Rename chain so later merges see earlier ones.
        let mut renames: BTreeMap<ArcId, ArcId> = BTreeMap::new();
        fn resolve(renames: &BTreeMap<ArcId, ArcId>, mut a: ArcId) -> ArcId {
            while let Some(&next) = renames.get(&a) {
                a = next;
            }
            a
        }
        // Merge `from` into `into`: the joined pair becomes one arc named
        // `into`. When `take_succ` is set, `into` continues where `from`
        // left off (head-side merges); otherwise `into` keeps its own
        // successor (tail-side merges).
        let merge = |successor: &mut BTreeMap<ArcId, ArcId>,
                         crossings: &mut Vec<Crossing>,
                         renames: &mut BTreeMap<ArcId, ArcId>,
                         into: ArcId,
                         from: ArcId,
                         take_succ: bool| {
            let into = resolve(renames, into);
            let from = resolve(renames, from);
            if into == from {
                // An arc joined to itself closes into a free circle.
                successor.insert(into, into);
                return;
            }
            let next = successor.remove(&from).unwrap_or(from);
            if take_succ {
                successor.insert(into, if next == from { into } else { next });
            }
            let redirect: Vec<ArcId> = successor
                .iter()
                .filter(|(_, v)| **v == from)
                .map(|(k, _)| *k)
                .collect();
            for k in redirect {
                successor.insert(k, into);
            }
            for c in crossings.iter_mut() {
                for a in c.arcs.iter_mut() {
                    if *a == from {
                        *a = into;
                    }
                }
            }
            renames.insert(from, into);
        };

        let mut head_head: Option<(ArcId, ArcId)> = None;
        let mut head_tail: Vec<(ArcId, ArcId)> = Vec::new();
        for &(s1, s2) in &pairs {
            let (x, dx) = (arcs[s1], dirs[s1]);
            let (y, dy) = (arcs[s2], dirs[s2]);
            match (dx, dy) {
                (SlotDir::In, SlotDir::Out) => head_tail.push((x, y)),
                (SlotDir::Out, SlotDir::In) => head_tail.push((y, x)),
                (SlotDir::In, SlotDir::In) => head_head = Some((x, y)),
                (SlotDir::Out, SlotDir::Out) => {}
            }
        }

        if let Some((x, y)) = head_head {
            // Disoriented smoothing: the strand segment that ends at y gets
            // reversed. It runs from one of the crossing's outgoing arcs up
            // to y; walk backwards from y to find it.
            let out_x = successor[&x];
            let out_y = successor[&y];
            let pred: BTreeMap<ArcId, ArcId> =
                successor.iter().map(|(k, v)| (*v, *k)).collect();
            let mut segment = vec![y];
            while segment[0] != out_x && segment[0] != out_y {
                let p = pred[&segment[0]];
                segment.insert(0, p);
                if segment.len() > successor.len() {
                    return Err(DiagramError::Validation(
                        "smoothing reversal did not close".into(),
                    ));
                }
            }
            let seg_start = segment[0];
            let other_out = if seg_start == out_x { out_y } else { out_x };

            // Classical crossings whose under-strand transition lies inside
            // the segment must have their tuple rotated by two so slot `a`
            // stays the incoming under-arc after the reversal.
            let interior: BTreeSet<(ArcId, ArcId)> =
                segment.windows(2).map(|w| (w[0], w[1])).collect();
            for c in crossings.iter_mut() {
                if c.kind == CrossingKind::Classical
                    && interior.contains(&(c.arcs[0], c.arcs[2]))
                {
                    c.arcs = [c.arcs[2], c.arcs[3], c.arcs[0], c.arcs[1]];
                }
            }
            // Flip the successor links inside the segment, then route the
            // strand in at x and out at the tail-tail join.
            for w in segment.windows(2) {
                successor.insert(w[1], w[0]);
            }
            successor.insert(seg_start, other_out);
            merge(&mut successor, &mut crossings, &mut renames, x, y, true);
            merge(
                &mut successor,
                &mut crossings,
                &mut renames,
                other_out,
                seg_start,
                false,
            );
        } else {
            for (p, q) in head_tail {
                merge(&mut successor, &mut crossings, &mut renames, p, q, true);
            }
        }

        Self::new(crossings, successor)
    }

    pub fn render_json(&self) -> String {
        let doc = JsonDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| JsonCrossing {
                    kind: c.kind,
                    arcs: c.arcs,
                })
                .collect(),
            successor: self
                .successor
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("diagram serializes")
    }

    /// Render in the text PD format. Requires standard knot numbering: a
    /// single component whose arcs are exactly `1..=2n` with
    /// `successor(x) = x + 1` cyclically.
    pub fn render_text(&self) -> Result<String, DiagramError> {
        let n = self.crossings.len() as u32;
        if self.n_components != 1 {
            return Err(DiagramError::Validation(
                "text PD format supports knots only".into(),
            ));
        }
        for x in 1..=(2 * n) {
            let want = if x == 2 * n { 1 } else { x + 1 };
            if self.successor.get(&x) != Some(&want) {
                return Err(DiagramError::Validation(
                    "text PD format requires arcs 1..2n with successor(x) = x+1".into(),
                ));
            }
        }
        let mut out = String::new();
        for (idx, c) in self.crossings.iter().enumerate() {
            if idx > 0 {
                out.push(' ');
            }
            let tag = match c.kind {
                CrossingKind::Classical => 'X',
                CrossingKind::Pseudo => 'P',
            };
            let [a, b, cc, d] = c.arcs;
            write!(out, "{tag}({a},{b},{cc},{d})").expect("write to string");
        }
        Ok(out)
    }

    /// Relabel a knot diagram's arcs to the standard traversal numbering
    /// `1..=2n`, making it renderable in the text format.
    pub fn canonical_numbering(&self) -> Result<Self, DiagramError> {
        if self.n_components != 1 {
            return Err(DiagramError::Validation(
                "canonical numbering requires a single component".into(),
            ));
        }
        let start = self
            .arcs()
            .next()
            .ok_or_else(|| DiagramError::Validation("empty diagram".into()))?;
        let mut map = BTreeMap::new();
        let mut a = start;
        let mut next_id: ArcId = 1;
        loop {
            map.insert(a, next_id);
            next_id += 1;
            a = self.succ(a);
            if a == start {
                break;
            }
        }
        self.relabel(&map)
    }
}

fn count_cycles(successor: &BTreeMap<ArcId, ArcId>) -> usize {
    let mut visited: BTreeSet<ArcId> = BTreeSet::new();
    let mut n = 0;
    for &start in successor.keys() {
        if visited.contains(&start) {
            continue;
        }
        n += 1;
        let mut a = start;
        loop {
            visited.insert(a);
            a = successor[&a];
            if a == start {
                break;
            }
        }
    }
    n
}

// Orientation resolution: decide, for every crossing slot, whether the arc
// there runs into or out of the crossing. Each crossing carries two strands
// (slots 0-2 and slots 1-3); a strand direction is viable when the successor
// map agrees with it, and classical under-strands are pinned to run 0 -> 2.
// Directions are propagated through the constraint that a two-occurrence arc
// has exactly one head and one tail.
fn resolve_orientations(
    crossings: &[Crossing],
    successor: &BTreeMap<ArcId, ArcId>,
) -> Result<Vec<[SlotDir; 4]>, DiagramError> {
    let mut occurrences: BTreeMap<ArcId, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in crossings.iter().enumerate() {
        for (si, &a) in c.arcs.iter().enumerate() {
            occurrences.entry(a).or_default().push((ci, si));
        }
    }
    for (&arc, occ) in &occurrences {
        if occ.len() != 2 {
            return Err(DiagramError::Validation(format!(
                "arc {arc} appears {} time(s) across crossing slots, expected 2",
                occ.len()
            )));
        }
        if !successor.contains_key(&arc) {
            return Err(DiagramError::Validation(format!(
                "arc {arc} missing from successor map"
            )));
        }
    }
    // successor must be a permutation of its key set.
    {
        let keys: BTreeSet<ArcId> = successor.keys().copied().collect();
        let values: BTreeSet<ArcId> = successor.values().copied().collect();
        if keys != values || values.len() != successor.len() {
            return Err(DiagramError::Validation(
                "successor map is not a permutation of the arc ids".into(),
            ));
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Dir {
        Forward,  // strand runs first slot -> second slot
        Backward, // strand runs second slot -> first slot
    }
    struct Pair {
        crossing: usize,
        slots: (usize, usize),
        arcs: (ArcId, ArcId),
        classical_under: bool,
        fixed: Option<Dir>,
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for (ci, c) in crossings.iter().enumerate() {
        for (k, slots) in [(0usize, (0usize, 2usize)), (1, (1, 3))] {
            pairs.push(Pair {
                crossing: ci,
                slots,
                arcs: (c.arcs[slots.0], c.arcs[slots.1]),
                classical_under: k == 0 && c.kind == CrossingKind::Classical,
                fixed: None,
            });
        }
    }

    // role[(crossing, slot)] = In/Out once known; per-arc head/tail budget.
    let mut roles: BTreeMap<(usize, usize), SlotDir> = BTreeMap::new();
    let mut head_of: BTreeMap<ArcId, (usize, usize)> = BTreeMap::new();
    let mut tail_of: BTreeMap<ArcId, (usize, usize)> = BTreeMap::new();

    let succ_ok = |u: ArcId, w: ArcId| successor.get(&u) == Some(&w);

    let fix = |pair: &mut Pair,
                   dir: Dir,
                   roles: &mut BTreeMap<(usize, usize), SlotDir>,
                   head_of: &mut BTreeMap<ArcId, (usize, usize)>,
                   tail_of: &mut BTreeMap<ArcId, (usize, usize)>|
     -> Result<(), DiagramError> {
        let (s_in, s_out, a_in, a_out) = match dir {
            Dir::Forward => (pair.slots.0, pair.slots.1, pair.arcs.0, pair.arcs.1),
            Dir::Backward => (pair.slots.1, pair.slots.0, pair.arcs.1, pair.arcs.0),
        };
        let in_key = (pair.crossing, s_in);
        let out_key = (pair.crossing, s_out);
        for (key, want) in [(in_key, SlotDir::In), (out_key, SlotDir::Out)] {
            if let Some(prev) = roles.get(&key) {
                if *prev != want {
                    return Err(DiagramError::Validation(format!(
                        "conflicting strand orientation at crossing {}",
                        pair.crossing
                    )));
                }
            }
            roles.insert(key, want);
        }
        if let Some(prev) = head_of.get(&a_in) {
            if *prev != in_key {
                return Err(DiagramError::Validation(format!(
                    "arc {a_in} would have two heads"
                )));
            }
        }
        head_of.insert(a_in, in_key);
        if let Some(prev) = tail_of.get(&a_out) {
            if *prev != out_key {
                return Err(DiagramError::Validation(format!(
                    "arc {a_out} would have two tails"
                )));
            }
        }
        tail_of.insert(a_out, out_key);
        pair.fixed = Some(dir);
        Ok(())
    };

    // A direction is viable if the successor map supports it and it does not
    // claim a head or tail some other occurrence already owns.
    let viable = |pair: &Pair,
                  dir: Dir,
                  roles: &BTreeMap<(usize, usize), SlotDir>,
                  head_of: &BTreeMap<ArcId, (usize, usize)>,
                  tail_of: &BTreeMap<ArcId, (usize, usize)>|
     -> bool {
        let (s_in, s_out, a_in, a_out) = match dir {
            Dir::Forward => (pair.slots.0, pair.slots.1, pair.arcs.0, pair.arcs.1),
            Dir::Backward => (pair.slots.1, pair.slots.0, pair.arcs.1, pair.arcs.0),
        };
        if !succ_ok(a_in, a_out) {
            return false;
        }
        if pair.classical_under && dir != Dir::Forward {
            return false;
        }
        let in_key = (pair.crossing, s_in);
        let out_key = (pair.crossing, s_out);
        if roles.get(&in_key).is_some_and(|r| *r != SlotDir::In) {
            return false;
        }
        if roles.get(&out_key).is_some_and(|r| *r != SlotDir::Out) {
            return false;
        }
        if head_of.get(&a_in).is_some_and(|k| *k != in_key) {
            return false;
        }
        if tail_of.get(&a_out).is_some_and(|k| *k != out_key) {
            return false;
        }
        true
    };

    loop {
        let mut progress = false;
        let mut all_fixed = true;
        #[allow(clippy::needless_range_loop)]
        for idx in 0..pairs.len() {
            if pairs[idx].fixed.is_some() {
                continue;
            }
            let f = viable(&pairs[idx], Dir::Forward, &roles, &head_of, &tail_of);
            let b = viable(&pairs[idx], Dir::Backward, &roles, &head_of, &tail_of);
            match (f, b) {
                (false, false) => {
                    let ci = pairs[idx].crossing;
                    return Err(if pairs[idx].classical_under {
                        DiagramError::Validation(format!(
                            "crossing {ci}: under-strand does not run a -> c"
                        ))
                    } else {
                        DiagramError::Validation(format!(
                            "crossing {ci}: no consistent over-strand orientation"
                        ))
                    });
                }
                (true, false) => {
                    fix(&mut pairs[idx], Dir::Forward, &mut roles, &mut head_of, &mut tail_of)?;
                    progress = true;
                }
                (false, true) => {
                    fix(&mut pairs[idx], Dir::Backward, &mut roles, &mut head_of, &mut tail_of)?;
                    progress = true;
                }
                (true, true) => {
                    all_fixed = false;
                }
            }
        }
        if all_fixed && pairs.iter().all(|p| p.fixed.is_some()) {
            break;
        }
        if !progress {
            // Genuinely ambiguous leftover: a component whose strand-through
            // transitions all ride over-strands or pseudo crossings admits
            // two consistent orientations (e.g. a two-arc component meeting
            // two such crossings). Canonical convention: the smallest
            // ambiguous arc id takes its head at its earliest (crossing,
            // slot) occurrence. Sequential arc numberings, including braid
            // closures, satisfy this reading.
            let mut best: Option<(ArcId, usize, usize, usize, Dir)> = None;
            for (idx, p) in pairs.iter().enumerate() {
                if p.fixed.is_some() {
                    continue;
                }
                let candidates = [
                    (p.arcs.0, p.crossing, p.slots.0, Dir::Forward),
                    (p.arcs.1, p.crossing, p.slots.1, Dir::Backward),
                ];
                for (arc, ci, si, dir) in candidates {
                    if !viable(p, dir, &roles, &head_of, &tail_of) {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((ba, bc, bs, _, _)) => (arc, ci, si) < (ba, bc, bs),
                    };
                    if better {
                        best = Some((arc, ci, si, idx, dir));
                    }
                }
            }
            let (_, _, _, idx, dir) = best.expect("stuck pair has a viable direction");
            fix(&mut pairs[idx], dir, &mut roles, &mut head_of, &mut tail_of)?;
        }
    }

    // Final verification: every two-occurrence arc has one head and one tail.
    for (&arc, occ) in &occurrences {
        if occ.len() == 2 && (!head_of.contains_key(&arc) || !tail_of.contains_key(&arc)) {
            return Err(DiagramError::Validation(format!(
                "arc {arc} lacks a consistent head/tail assignment"
            )));
        }
    }

    let mut slot_dirs = vec![[SlotDir::In; 4]; crossings.len()];
    for ((ci, si), dir) in roles {
        slot_dirs[ci][si] = dir;
    }
    Ok(slot_dirs)
}

/// Parse the whitespace-separated text PD format: terms `X(a,b,c,d)` and
/// `P(a,b,c,d)`, arcs numbered `1..=2n` along a single component with
/// `successor(x) = x + 1` cyclically. `#` starts a comment line.
pub fn parse_pd_text(input: &str) -> Result<PseudoDiagram, DiagramError> {
    let mut crossings = Vec::new();
    for line in input.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            crossings.push(parse_term(token)?);
        }
    }
    if crossings.is_empty() {
        return Err(DiagramError::Parse("no crossings in text PD input".into()));
    }
    let n = crossings.len() as u32;
    let arcs: BTreeSet<ArcId> = crossings.iter().flat_map(|c| c.arcs).collect();
    let expected: BTreeSet<ArcId> = (1..=2 * n).collect();
    if arcs != expected {
        return Err(DiagramError::Validation(format!(
            "text PD arcs must be exactly 1..={}",
            2 * n
        )));
    }
    let successor: BTreeMap<ArcId, ArcId> = (1..=2 * n)
        .map(|x| (x, if x == 2 * n { 1 } else { x + 1 }))
        .collect();
    PseudoDiagram::new(crossings, successor)
}

fn parse_term(token: &str) -> Result<Crossing, DiagramError> {
    let (kind, rest) = if let Some(rest) = token.strip_prefix("X(") {
        (CrossingKind::Classical, rest)
    } else if let Some(rest) = token.strip_prefix("P(") {
        (CrossingKind::Pseudo, rest)
    } else {
        return Err(DiagramError::Parse(format!(
            "expected X(...) or P(...), found `{token}`"
        )));
    };
    let rest = rest
        .strip_suffix(')')
        .ok_or_else(|| DiagramError::Parse(format!("unterminated term `{token}`")))?;
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 4 {
        return Err(DiagramError::Parse(format!(
            "term `{token}` must list four arcs"
        )));
    }
    let mut arcs = [0u32; 4];
    for (i, p) in parts.iter().enumerate() {
        arcs[i] = p
            .trim()
            .parse()
            .map_err(|_| DiagramError::Parse(format!("bad arc id `{p}` in `{token}`")))?;
    }
    Ok(Crossing { kind, arcs })
}

/// Parse the JSON diagram format with explicit crossings and successor map;
/// supports multi-component links and zero-crossing components.
pub fn parse_pd_json(input: &str) -> Result<PseudoDiagram, DiagramError> {
    let doc: JsonDiagram =
        serde_json::from_str(input).map_err(|e| DiagramError::Parse(e.to_string()))?;
    let crossings = doc
        .crossings
        .into_iter()
        .map(|c| Crossing {
            kind: c.kind,
            arcs: c.arcs,
        })
        .collect();
    let mut successor = BTreeMap::new();
    for (k, v) in doc.successor {
        let arc: ArcId = k
            .parse()
            .map_err(|_| DiagramError::Parse(format!("bad arc id `{k}` in successor map")))?;
        successor.insert(arc, v);
    }
    PseudoDiagram::new(crossings, successor)
}

/// One face of the underlying 4-valent plane graph, as the cycle of
/// departure darts `(crossing, slot)` visited while tracing its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<FaceDart>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceDart {
    pub crossing: usize,
    pub slot: usize,
}

impl Face {
    /// Arcs on this face's boundary with traversal direction: `true` when
    /// the boundary travels the arc from tail to head.
    pub fn arc_darts(&self, d: &PseudoDiagram) -> Vec<(ArcId, bool)> {
        self.darts
            .iter()
            .map(|fd| {
                let arc = d.crossings()[fd.crossing].arcs[fd.slot];
                let forward = d.slot_dir(fd.crossing, fd.slot) == SlotDir::Out;
                (arc, forward)
            })
            .collect()
    }
}

impl PseudoDiagram {
    /// Faces of the underlying 4-valent plane graph, traced from the
    /// rotation system implied by each crossing's counterclockwise arc
    /// order. Checks Euler's formula `V - E + F = 2` on every connected
    /// component with crossings; zero-crossing circles satisfy it trivially
    /// and contribute no faces here.
    pub fn faces(&self) -> Result<Vec<Face>, DiagramError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        // other_end[(c, s)] = the matching occurrence of the same arc.
        let mut occurrences: BTreeMap<ArcId, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (si, &a) in c.arcs.iter().enumerate() {
                occurrences.entry(a).or_default().push((ci, si));
            }
        }
        let other_end = |ci: usize, si: usize| -> (usize, usize) {
            let arc = self.crossings[ci].arcs[si];
            let occ = &occurrences[&arc];
            if occ[0] == (ci, si) {
                occ[1]
            } else {
                occ[0]
            }
        };

        let mut visited = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for start_c in 0..n {
            for start_s in 0..4 {
                if visited[start_c][start_s] {
                    continue;
                }
                let mut darts = Vec::new();
                let (mut ci, mut si) = (start_c, start_s);
                loop {
                    visited[ci][si] = true;
                    darts.push(FaceDart {
                        crossing: ci,
                        slot: si,
                    });
                    let (tc, ts) = other_end(ci, si);
                    ci = tc;
                    si = (ts + 1) % 4;
                    if (ci, si) == (start_c, start_s) {
                        break;
                    }
                }
                faces.push(Face { darts });
            }
        }

        // Euler check per connected component of the crossing graph.
        let mut comp = (0..n).collect::<Vec<usize>>();
        fn find(comp: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while comp[r] != r {
                comp[r] = comp[comp[r]];
                r = comp[r];
            }
            r
        }
        for occ in occurrences.values() {
            let a = find(&mut comp, occ[0].0);
            let b = find(&mut comp, occ[1].0);
            if a != b {
                comp[a] = b;
            }
        }
        let mut v_count: BTreeMap<usize, i64> = BTreeMap::new();
        for ci in 0..n {
            *v_count.entry(find(&mut comp, ci)).or_insert(0) += 1;
        }
        let mut f_count: BTreeMap<usize, i64> = BTreeMap::new();
        for face in &faces {
            let root = find(&mut comp, face.darts[0].crossing);
            *f_count.entry(root).or_insert(0) += 1;
        }
        for (root, v) in v_count {
            let e = 2 * v; // 4-valent
            let f = f_count.get(&root).copied().unwrap_or(0);
            if v - e + f != 2 {
                return Err(DiagramError::Validation(format!(
                    "Euler check failed: V={v}, E={e}, F={f}"
                )));
            }
        }
        Ok(faces)
    }
}
