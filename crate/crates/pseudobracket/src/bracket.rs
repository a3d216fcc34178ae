//! The pseudo bracket polynomial by state-sum expansion.
//!
//! Every crossing is replaced by one of two smoothings. Classical crossings
//! weight the orientation-compatible (vertical) smoothing by `A` when the
//! crossing is positive and by `A^-1` when it is negative, with the inverse
//! weight on the horizontal smoothing; pseudo crossings weight them by `V`
//! and `H = 1 - V*d`. A state with `L` resulting closed curves contributes
//! its weight times `d^(L-1)`, where `d = -A^2 - A^-2`.
//!
//! Two engines compute the same sum: [`bracket_naive`] enumerates all `2^n`
//! states and is the reference oracle; [`bracket_contract`] sweeps the
//! crossings in a low-boundary-width order, memoizing partial sums keyed by
//! how the open strand ends are paired through the processed region.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::diagram::{ArcId, CrossingKind, PseudoDiagram, Smoothing};
use crate::polynomial::{LaurentPoly, PseudoPoly};

/// Crossing cap for the naive engine; overridable per call.
pub const DEFAULT_STATE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("diagram has {crossings} crossings, naive engine limit is {limit}")]
    TooLarge { crossings: usize, limit: usize },
}

/// Which engine evaluates the state sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Naive,
    #[default]
    Contract,
}

/// One smoothing choice per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingState(pub Vec<Smoothing>);

impl SmoothingState {
    pub fn from_bits(bits: u64, n: usize) -> Self {
        SmoothingState(
            (0..n)
                .map(|i| {
                    if bits >> i & 1 == 0 {
                        Smoothing::Vertical
                    } else {
                        Smoothing::Horizontal
                    }
                })
                .collect(),
        )
    }
}

/// Everything a single state contributes before the loop factor `d^(L-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateWeight {
    /// Product of the classical `A^(+-1)` choices; always a monomial `A^k`
    /// with coefficient one.
    pub classical_factor: LaurentPoly,
    /// Product of the pseudo `V` / `H` choices.
    pub pseudo_factor: PseudoPoly,
    pub loops: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            self.parent[r] = self.parent[self.parent[r]];
            r = self.parent[r];
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
    }
}

fn arc_index(d: &PseudoDiagram) -> BTreeMap<ArcId, usize> {
    d.arcs().enumerate().map(|(i, a)| (a, i)).collect()
}

/// Count the closed curves left after replacing every crossing by the
/// state's chosen smoothing.
pub fn smooth_and_count(d: &PseudoDiagram, state: &SmoothingState) -> usize {
    assert_eq!(state.0.len(), d.crossing_count(), "state length mismatch");
    let idx = arc_index(d);
    let mut uf = UnionFind::new(idx.len());
    for (ci, choice) in state.0.iter().enumerate() {
        let arcs = d.crossings()[ci].arcs;
        for (s1, s2) in d.smoothing_pairs(ci, *choice) {
            uf.union(idx[&arcs[s1]], idx[&arcs[s2]]);
        }
    }
    // Arcs of zero-crossing components meet their successors at plain
    // points rather than smoothed crossings.
    for arc in d.crossing_free_arcs() {
        uf.union(idx[&arc], idx[&d.succ(arc)]);
    }
    let mut roots = BTreeSet::new();
    for i in 0..idx.len() {
        roots.insert(uf.find(i));
    }
    roots.len()
}

/// Smoothing weights of crossing `i` as `(vertical, horizontal)`.
fn crossing_weights(d: &PseudoDiagram, i: usize) -> (PseudoPoly, PseudoPoly) {
    match d.crossings()[i].kind {
        CrossingKind::Classical => {
            let sign = d
                .crossing_sign(i)
                .expect("classical crossing has a sign") as i64;
            (
                PseudoPoly::from_laurent(LaurentPoly::a(sign)),
                PseudoPoly::from_laurent(LaurentPoly::a(-sign)),
            )
        }
        CrossingKind::Pseudo => (PseudoPoly::v(), PseudoPoly::h()),
    }
}

/// The weight data of one state: classical monomial, pseudo factor, loops.
pub fn state_weight(d: &PseudoDiagram, state: &SmoothingState) -> StateWeight {
    let mut a_exp: i64 = 0;
    let mut pseudo_factor = PseudoPoly::one();
    for (ci, choice) in state.0.iter().enumerate() {
        match d.crossings()[ci].kind {
            CrossingKind::Classical => {
                let sign = d.crossing_sign(ci).expect("classical") as i64;
                a_exp += match choice {
                    Smoothing::Vertical => sign,
                    Smoothing::Horizontal => -sign,
                };
            }
            CrossingKind::Pseudo => {
                let w = match choice {
                    Smoothing::Vertical => PseudoPoly::v(),
                    Smoothing::Horizontal => PseudoPoly::h(),
                };
                pseudo_factor = &pseudo_factor * &w;
            }
        }
    }
    StateWeight {
        classical_factor: LaurentPoly::a(a_exp),
        pseudo_factor,
        loops: smooth_and_count(d, state),
    }
}

pub fn bracket_naive(d: &PseudoDiagram) -> Result<PseudoPoly, BracketError> {
    bracket_naive_with_limit(d, DEFAULT_STATE_LIMIT)
}

/// Sum `weight * d^(loops-1)` over all `2^n` smoothing states. The empty
/// diagram evaluates to one so disjoint unions stay multiplicative up to a
/// factor of `d`.
pub fn bracket_naive_with_limit(
    d: &PseudoDiagram,
    limit: usize,
) -> Result<PseudoPoly, BracketError> {
    let n = d.crossing_count();
    if n > limit {
        return Err(BracketError::TooLarge {
            crossings: n,
            limit,
        });
    }
    if d.successor().is_empty() {
        return Ok(PseudoPoly::one());
    }
    let d_poly = LaurentPoly::loop_value();
    // d^(L-1) and H^k tables; loop counts are bounded by the arc count.
    let mut d_powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    let mut h_powers: Vec<PseudoPoly> = vec![PseudoPoly::one()];
    let mut total = PseudoPoly::zero();
    for bits in 0u64..(1u64 << n) {
        let state = SmoothingState::from_bits(bits, n);
        let mut a_exp: i64 = 0;
        let mut v_count = 0usize;
        let mut h_count = 0usize;
        for (ci, choice) in state.0.iter().enumerate() {
            match d.crossings()[ci].kind {
                CrossingKind::Classical => {
                    let sign = d.crossing_sign(ci).expect("classical") as i64;
                    a_exp += match choice {
                        Smoothing::Vertical => sign,
                        Smoothing::Horizontal => -sign,
                    };
                }
                CrossingKind::Pseudo => match choice {
                    Smoothing::Vertical => v_count += 1,
                    Smoothing::Horizontal => h_count += 1,
                },
            }
        }
        let loops = smooth_and_count(d, &state);
        while d_powers.len() < loops {
            let next = &d_powers[d_powers.len() - 1] * &d_poly;
            d_powers.push(next);
        }
        while h_powers.len() <= h_count {
            let next = &h_powers[h_powers.len() - 1] * &PseudoPoly::h();
            h_powers.push(next);
        }
        let mut term = h_powers[h_count].scale(&d_powers[loops - 1].shifted(a_exp));
        if v_count > 0 {
            term = &term * &PseudoPoly::v().pow(v_count);
        }
        total = &total + &term;
    }
    Ok(total)
}

// Contraction engine internals: the processed region's boundary state is a
// perfect matching of the open arcs (arcs with exactly one endpoint
// processed), mapping each to the open arc its strand connects to through
// the region's smoothings.

type Matching = Vec<(ArcId, ArcId)>;

fn canonical(pairs: &BTreeMap<ArcId, ArcId>) -> Matching {
    let mut v: Matching = pairs
        .iter()
        .filter(|(a, b)| a <= b)
        .map(|(a, b)| (*a, *b))
        .collect();
    v.sort_unstable();
    v
}

/// Pick a crossing order that keeps the open-arc boundary small: greedily
/// take the crossing minimizing the boundary after processing it.
fn contraction_order(d: &PseudoDiagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut occurrences: BTreeMap<ArcId, Vec<usize>> = BTreeMap::new();
    for (ci, c) in d.crossings().iter().enumerate() {
        for a in c.arcs {
            occurrences.entry(a).or_default().push(ci);
        }
    }
    let mut processed = vec![false; n];
    let mut open: BTreeSet<ArcId> = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(i64, usize)> = None;
        for (ci, done) in processed.iter().enumerate() {
            if *done {
                continue;
            }
            let mut width = open.len() as i64;
            let mut counts: BTreeMap<ArcId, usize> = BTreeMap::new();
            for a in d.crossings()[ci].arcs {
                *counts.entry(a).or_insert(0) += 1;
            }
            for (a, k) in counts {
                if k == 2 {
                    continue; // both ends here: opens and closes at once
                }
                if open.contains(&a) {
                    width -= 1;
                } else {
                    width += 1;
                }
            }
            if best.is_none_or(|(w, _)| width < w) {
                best = Some((width, ci));
            }
        }
        let (_, ci) = best.expect("unprocessed crossing exists");
        processed[ci] = true;
        order.push(ci);
        let mut counts: BTreeMap<ArcId, usize> = BTreeMap::new();
        for a in d.crossings()[ci].arcs {
            *counts.entry(a).or_insert(0) += 1;
        }
        for (a, k) in counts {
            if k == 2 {
                open.remove(&a);
                continue;
            }
            if !open.insert(a) {
                open.remove(&a);
            }
        }
    }
    order
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outside {
    /// The strand re-enters the current crossing at this slot, consuming
    /// the named matching entry when it travelled through the region.
    Port(usize, Option<ArcId>),
    /// The strand runs off toward unprocessed crossings, ending at this arc;
    /// the second field names a consumed matching entry, if any.
    Dangle(ArcId, Option<ArcId>),
}

/// Evaluate the bracket by tangle contraction. Always agrees with
/// [`bracket_naive`]; no crossing-count limit.
pub fn bracket_contract(d: &PseudoDiagram) -> PseudoPoly {
    if d.successor().is_empty() {
        return PseudoPoly::one();
    }
    let n = d.crossing_count();
    let d_poly = LaurentPoly::loop_value();
    let free_circles = d.zero_crossing_components();
    if n == 0 {
        return PseudoPoly::from_laurent(d_poly.pow(free_circles - 1));
    }

    let mut occurrences: BTreeMap<ArcId, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in d.crossings().iter().enumerate() {
        for (si, &a) in c.arcs.iter().enumerate() {
            occurrences.entry(a).or_default().push((ci, si));
        }
    }

    let order = contraction_order(d);
    let mut processed = vec![false; n];
    let mut states: HashMap<Matching, PseudoPoly> = HashMap::new();
    states.insert(Vec::new(), PseudoPoly::one());
    let d_pow = [LaurentPoly::one(), d_poly.clone(), &d_poly * &d_poly];

    for &ci in &order {
        let arcs = d.crossings()[ci].arcs;
        let (w_vertical, w_horizontal) = crossing_weights(d, ci);
        let choices = [
            (Smoothing::Vertical, w_vertical),
            (Smoothing::Horizontal, w_horizontal),
        ];
        let mut next_states: HashMap<Matching, PseudoPoly> = HashMap::new();
        for (matching, poly) in &states {
            let pairs: BTreeMap<ArcId, ArcId> = matching
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect();
            for (choice, weight) in &choices {
                let join = d.smoothing_pairs(ci, *choice);
                let mut alpha = [0usize; 4];
                for (s1, s2) in join {
                    alpha[s1] = s2;
                    alpha[s2] = s1;
                }
                // Outside connection of each slot, looking through the
                // already-processed region via the matching.
                let mut beta = [Outside::Port(0, None); 4];
                for si in 0..4 {
                    let arc = arcs[si];
                    let occ = &occurrences[&arc];
                    let other = if occ[0] == (ci, si) { occ[1] } else { occ[0] };
                    beta[si] = if other.0 == ci {
                        Outside::Port(other.1, None)
                    } else if processed[other.0] {
                        let partner = pairs[&arc];
                        let p_occ = &occurrences[&partner];
                        let free = if processed[p_occ[0].0] { p_occ[1] } else { p_occ[0] };
                        if free.0 == ci {
                            Outside::Port(free.1, Some(arc))
                        } else {
                            Outside::Dangle(partner, Some(arc))
                        }
                    } else {
                        Outside::Dangle(arc, None)
                    };
                }

                let mut new_pairs = pairs.clone();
                fn consume(p: &mut BTreeMap<ArcId, ArcId>, entry: Option<ArcId>) {
                    if let Some(x) = entry {
                        if let Some(z) = p.remove(&x) {
                            p.remove(&z);
                        }
                    }
                }
                let mut visited = [false; 4];
                let mut closed_loops = 0usize;
                // Strands through the crossing that end in dangles become
                // entries of the new matching.
                for s in 0..4 {
                    if visited[s] {
                        continue;
                    }
                    let Outside::Dangle(start_arc, start_entry) = beta[s] else {
                        continue;
                    };
                    visited[s] = true;
                    consume(&mut new_pairs, start_entry);
                    let mut cur = alpha[s];
                    let end_arc = loop {
                        visited[cur] = true;
                        match beta[cur] {
                            Outside::Dangle(arc, entry) => {
                                consume(&mut new_pairs, entry);
                                break arc;
                            }
                            Outside::Port(t, entry) => {
                                consume(&mut new_pairs, entry);
                                visited[t] = true;
                                cur = alpha[t];
                            }
                        }
                    };
                    new_pairs.insert(start_arc, end_arc);
                    new_pairs.insert(end_arc, start_arc);
                }
                // Remaining unvisited slots lie on closed loops.
                for s in 0..4 {
                    if visited[s] {
                        continue;
                    }
                    let mut cur = s;
                    loop {
                        visited[cur] = true;
                        let Outside::Port(t, entry) = beta[cur] else {
                            unreachable!("loop slot cannot dangle")
                        };
                        consume(&mut new_pairs, entry);
                        visited[t] = true;
                        cur = alpha[t];
                        if cur == s {
                            break;
                        }
                    }
                    closed_loops += 1;
                }

                let contribution = &poly.scale(&d_pow[closed_loops]) * weight;
                let entry = next_states.entry(canonical(&new_pairs)).or_default();
                *entry = &*entry + &contribution;
            }
        }
        states = next_states;
        processed[ci] = true;
    }

    let mut total = PseudoPoly::zero();
    for (matching, poly) in states {
        debug_assert!(matching.is_empty(), "unconsumed boundary matching");
        total = &total + &poly;
    }
    // Contributions carry d^loops; the bracket wants d^(loops-1), with any
    // zero-crossing circles multiplying back in.
    let divided = divide_by_loop_value(&total);
    if free_circles == 0 {
        divided
    } else {
        divided.scale(&d_poly.pow(free_circles))
    }
}

/// Exact division of every coefficient by `d`; the contraction total is a
/// multiple of `d` by construction.
fn divide_by_loop_value(p: &PseudoPoly) -> PseudoPoly {
    let d_poly = LaurentPoly::loop_value();
    let mut out = PseudoPoly::zero();
    for (deg, c) in p.coeffs() {
        let q = c
            .exact_div(&d_poly)
            .expect("contraction total is divisible by the loop value");
        out = &out + &PseudoPoly::v().pow(deg as usize).scale(&q);
    }
    out
}

/// Bracket with a caller-chosen engine.
pub fn bracket(d: &PseudoDiagram, engine: Engine) -> Result<PseudoPoly, BracketError> {
    match engine {
        Engine::Naive => bracket_naive(d),
        Engine::Contract => Ok(bracket_contract(d)),
    }
}

/// `(-A^-3)^writhe * bracket`; the invariant of oriented pseudo links.
pub fn normalized_bracket(d: &PseudoDiagram, engine: Engine) -> Result<PseudoPoly, BracketError> {
    Ok(bracket(d, engine)?.scale(&LaurentPoly::writhe_monomial(d.writhe())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, pseudo_sigma, sigma, sigma_inv};
    use crate::diagram::{parse_pd_json, parse_pd_text};

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p = p + LaurentPoly::monomial(e, c);
        }
        p
    }

    fn positive_trefoil() -> PseudoDiagram {
        parse_pd_text("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap()
    }

    fn trefoil_bracket() -> PseudoPoly {
        PseudoPoly::from_laurent(lp(&[(-7, 1), (-3, -1), (5, -1)]))
    }

    fn pt_bracket() -> PseudoPoly {
        // A^-6 + V*A^-8 - V*A^4; the sign of the A^-8 term is pinned by the
        // normalized value A^-12 + V*A^-14 - V*A^-2 through the writhe-two
        // monomial A^-6.
        PseudoPoly::from_laurent(LaurentPoly::a(-6))
            + PseudoPoly::v().scale(&lp(&[(-8, 1), (4, -1)]))
    }

    #[test]
    fn zero_crossing_unknot_is_one() {
        let d = parse_pd_json(r#"{"crossings": [], "successor": {"1": 1}}"#).unwrap();
        assert_eq!(bracket_naive(&d).unwrap(), PseudoPoly::one());
        assert_eq!(bracket_contract(&d), PseudoPoly::one());
    }

    #[test]
    fn two_unknots_give_loop_value() {
        let d = parse_pd_json(r#"{"crossings": [], "successor": {"1": 1, "2": 2}}"#).unwrap();
        let expected = PseudoPoly::from_laurent(LaurentPoly::loop_value());
        assert_eq!(bracket_naive(&d).unwrap(), expected);
        assert_eq!(bracket_contract(&d), expected);
    }

    #[test]
    fn kink_values() {
        let pos = parse_pd_text("X(1,1,2,2)").unwrap();
        assert_eq!(
            bracket_naive(&pos).unwrap(),
            PseudoPoly::from_laurent(LaurentPoly::monomial(3, -1))
        );
        let neg = parse_pd_text("X(1,2,2,1)").unwrap();
        assert_eq!(
            bracket_naive(&neg).unwrap(),
            PseudoPoly::from_laurent(LaurentPoly::monomial(-3, -1))
        );
        assert_eq!(
            normalized_bracket(&pos, Engine::Naive).unwrap(),
            PseudoPoly::one()
        );
    }

    #[test]
    fn trefoil_dual_engines() {
        let d = positive_trefoil();
        assert_eq!(bracket_naive(&d).unwrap(), trefoil_bracket());
        assert_eq!(bracket_contract(&d), trefoil_bracket());
    }

    #[test]
    fn trefoil_from_braid() {
        let d = braid_closure(2, &[sigma(1), sigma(1), sigma(1)]).unwrap();
        assert_eq!(bracket_contract(&d), trefoil_bracket());
    }

    #[test]
    fn left_trefoil_is_mirror() {
        let d = parse_pd_text("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(bracket_naive(&d).unwrap(), trefoil_bracket().mirror_a());
    }

    #[test]
    fn hopf_bracket() {
        let d = braid_closure(2, &[sigma(1), sigma(1)]).unwrap();
        let expected = PseudoPoly::from_laurent(lp(&[(4, -1), (-4, -1)]));
        assert_eq!(bracket_naive(&d).unwrap(), expected);
        assert_eq!(bracket_contract(&d), expected);
    }

    #[test]
    fn pseudo_trefoil_bracket() {
        let d = positive_trefoil().make_pseudo(0).unwrap();
        assert_eq!(bracket_naive(&d).unwrap(), pt_bracket());
        assert_eq!(bracket_contract(&d), pt_bracket());
    }

    #[test]
    fn pseudo_trefoil_normalized() {
        let d = positive_trefoil().make_pseudo(0).unwrap();
        let expected = PseudoPoly::from_laurent(LaurentPoly::a(-12))
            + PseudoPoly::v().scale(&lp(&[(-14, 1), (-2, -1)]));
        assert_eq!(normalized_bracket(&d, Engine::Contract).unwrap(), expected);
    }

    #[test]
    fn pseudo_tuple_rotation_does_not_change_bracket() {
        // The pseudo trefoil with the pseudo crossing's tuple rotated by one
        // slot; pseudo crossings have no preferred starting slot.
        let base = parse_pd_text("P(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        let rotated = parse_pd_text("P(5,2,4,1) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert_eq!(
            bracket_naive(&base).unwrap(),
            bracket_naive(&rotated).unwrap()
        );
        assert_eq!(bracket_contract(&rotated), bracket_naive(&base).unwrap());
    }

    #[test]
    fn figure_eight_bracket_is_symmetric() {
        let d = braid_closure(3, &[sigma(1), sigma_inv(2), sigma(1), sigma_inv(2)]).unwrap();
        let b = bracket_contract(&d);
        assert_eq!(bracket_naive(&d).unwrap(), b);
        assert_eq!(b.mirror_a(), b);
        assert_eq!(
            b,
            PseudoPoly::from_laurent(lp(&[(-8, 1), (-4, -1), (0, 1), (4, -1), (8, 1)]))
        );
    }

    #[test]
    fn state_weight_example() {
        let d = positive_trefoil();
        let all_vertical = SmoothingState::from_bits(0, 3);
        let w = state_weight(&d, &all_vertical);
        assert_eq!(w.classical_factor, LaurentPoly::a(3));
        assert_eq!(w.pseudo_factor, PseudoPoly::one());
        assert_eq!(w.loops, 2);
        let all_horizontal = SmoothingState::from_bits(0b111, 3);
        assert_eq!(smooth_and_count(&d, &all_horizontal), 3);
    }

    #[test]
    fn naive_matches_per_state_definition() {
        let d = positive_trefoil().make_pseudo(1).unwrap();
        let n = d.crossing_count();
        let dp = LaurentPoly::loop_value();
        let mut total = PseudoPoly::zero();
        for bits in 0..(1u64 << n) {
            let st = SmoothingState::from_bits(bits, n);
            let w = state_weight(&d, &st);
            let term = w
                .pseudo_factor
                .scale(&(&w.classical_factor * &dp.pow(w.loops - 1)));
            total = &total + &term;
        }
        assert_eq!(bracket_naive(&d).unwrap(), total);
    }

    #[test]
    fn naive_limit_errors() {
        let d = positive_trefoil();
        assert_eq!(
            bracket_naive_with_limit(&d, 2),
            Err(BracketError::TooLarge {
                crossings: 3,
                limit: 2
            })
        );
    }

    #[test]
    fn mirror_property() {
        let d = braid_closure(2, &[sigma(1), sigma(1), pseudo_sigma(1)]).unwrap();
        let m = d.mirror();
        assert_eq!(
            bracket_naive(&m).unwrap(),
            bracket_naive(&d).unwrap().mirror_a()
        );
    }

    #[test]
    fn v_degree_bounded_by_pseudo_count() {
        let d = braid_closure(2, &[pseudo_sigma(1), pseudo_sigma(1), sigma(1)]).unwrap();
        let b = bracket_naive(&d).unwrap();
        assert!(b.v_degree().unwrap_or(0) <= d.pseudo_count() as u32);
    }
}
