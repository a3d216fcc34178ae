//! Property suites for the skein relations, diagram surgeries, and moves on
//! seeded random corpora.

mod common;

use common::{load_fixture, random_classical_knot, random_mixed_diagram};
use pseudobracket::bracket::{
    bracket_contract, bracket_naive, normalized_bracket, Engine,
};
use pseudobracket::diagram::{parse_pd_json, CrossingKind, Smoothing};
use pseudobracket::moves::{random_move_walk, MoveKind, WalkRng};
use pseudobracket::polynomial::{LaurentPoly, PseudoPoly};

#[test]
fn engines_agree_on_random_mixed_diagrams() {
    let mut rng = WalkRng::new(0xC0FFEE);
    for _ in 0..60 {
        let d = random_mixed_diagram(&mut rng, 10);
        assert_eq!(
            bracket_naive(&d).unwrap(),
            bracket_contract(&d),
            "engine mismatch on {}",
            d.render_json()
        );
    }
}

#[test]
fn skein_identity_at_classical_crossings() {
    // <D> = A^s <D_V> + A^-s <D_H> at a crossing of sign s, with the
    // smoothed diagrams built explicitly.
    let mut rng = WalkRng::new(11);
    for _ in 0..25 {
        let d = random_classical_knot(&mut rng, 7);
        let i = rng.below(d.crossing_count());
        let sign = d.crossing_sign(i).unwrap() as i64;
        let vertical = d.smooth_crossing(i, Smoothing::Vertical).unwrap();
        let horizontal = d.smooth_crossing(i, Smoothing::Horizontal).unwrap();
        let lhs = bracket_naive(&d).unwrap();
        let rhs = bracket_naive(&vertical)
            .unwrap()
            .scale(&LaurentPoly::a(sign))
            + bracket_naive(&horizontal)
                .unwrap()
                .scale(&LaurentPoly::a(-sign));
        assert_eq!(lhs, rhs, "skein identity at crossing {i}");
    }
}

#[test]
fn crossing_difference_identity() {
    // <D+> - <D-> = (A - A^-1)(<K_V> - <K_H>)
    let mut rng = WalkRng::new(12);
    for _ in 0..25 {
        let d = random_classical_knot(&mut rng, 7);
        let i = rng.below(d.crossing_count());
        let (plus, minus) = if d.crossing_sign(i).unwrap() > 0 {
            (d.clone(), d.switch_crossing(i).unwrap())
        } else {
            (d.switch_crossing(i).unwrap(), d.clone())
        };
        let k_v = d.smooth_crossing(i, Smoothing::Vertical).unwrap();
        let k_h = d.smooth_crossing(i, Smoothing::Horizontal).unwrap();
        let lhs = bracket_naive(&plus).unwrap() - bracket_naive(&minus).unwrap();
        let factor = LaurentPoly::a(1) - LaurentPoly::a(-1);
        let rhs = (bracket_naive(&k_v).unwrap() - bracket_naive(&k_h).unwrap()).scale(&factor);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn pseudo_expansion_identity() {
    // <make_pseudo(D, i)> = V <K_V> + (1 - V d) <K_H>
    let mut rng = WalkRng::new(13);
    for _ in 0..25 {
        let d = random_classical_knot(&mut rng, 7);
        let i = rng.below(d.crossing_count());
        let square = d.make_pseudo(i).unwrap();
        let k_v = d.smooth_crossing(i, Smoothing::Vertical).unwrap();
        let k_h = d.smooth_crossing(i, Smoothing::Horizontal).unwrap();
        let rhs = &PseudoPoly::v() * &bracket_naive(&k_v).unwrap()
            + &PseudoPoly::h() * &bracket_naive(&k_h).unwrap();
        assert_eq!(bracket_naive(&square).unwrap(), rhs);
    }
}

#[test]
fn mirror_property_random() {
    let mut rng = WalkRng::new(14);
    for _ in 0..20 {
        let d = random_mixed_diagram(&mut rng, 9);
        assert_eq!(
            bracket_naive(&d.mirror()).unwrap(),
            bracket_naive(&d).unwrap().mirror_a()
        );
    }
}

#[test]
fn writhe_surgery_identities() {
    let mut rng = WalkRng::new(15);
    for _ in 0..30 {
        let d = random_classical_knot(&mut rng, 8);
        let i = rng.below(d.crossing_count());
        let sign = d.crossing_sign(i).unwrap() as i64;
        assert_eq!(d.make_pseudo(i).unwrap().writhe(), d.writhe() - sign);
        assert_eq!(
            d.switch_crossing(i).unwrap().writhe(),
            d.writhe() - 2 * sign
        );
    }
}

#[test]
fn v_degree_bounded_by_pseudo_count() {
    let mut rng = WalkRng::new(16);
    for _ in 0..30 {
        let d = random_mixed_diagram(&mut rng, 10);
        let b = bracket_contract(&d);
        assert!(b.v_degree().unwrap_or(0) as usize <= d.pseudo_count());
    }
}

#[test]
fn json_round_trip_random() {
    let mut rng = WalkRng::new(17);
    for _ in 0..30 {
        let d = random_mixed_diagram(&mut rng, 10);
        assert_eq!(parse_pd_json(&d.render_json()).unwrap(), d);
    }
}

#[test]
fn text_round_trip_canonical_knots() {
    let mut rng = WalkRng::new(18);
    for _ in 0..20 {
        let d = random_classical_knot(&mut rng, 8);
        let canonical = d.canonical_numbering().unwrap();
        let text = canonical.render_text().unwrap();
        let reparsed = pseudobracket::diagram::parse_pd_text(&text).unwrap();
        assert_eq!(reparsed, canonical);
        assert_eq!(
            bracket_contract(&reparsed),
            bracket_contract(&d),
            "renumbering must not change the bracket"
        );
    }
}

#[test]
fn faces_euler_on_random_corpus() {
    let mut rng = WalkRng::new(19);
    for _ in 0..40 {
        let d = random_mixed_diagram(&mut rng, 10);
        d.faces().expect("generated diagrams are planar");
    }
}

#[test]
fn pseudo_rotation_invariance_random() {
    // Rotating a pseudo crossing's tuple is bookkeeping only.
    let mut rng = WalkRng::new(20);
    let mut checked = 0;
    while checked < 15 {
        let d = random_mixed_diagram(&mut rng, 9);
        let Some(pi) = d
            .crossings()
            .iter()
            .position(|c| c.kind == CrossingKind::Pseudo)
        else {
            continue;
        };
        let mut crossings = d.crossings().to_vec();
        let [a, b, c, dd] = crossings[pi].arcs;
        crossings[pi].arcs = [b, c, dd, a];
        let Ok(rotated) =
            pseudobracket::diagram::PseudoDiagram::new(crossings, d.successor().clone())
        else {
            continue;
        };
        assert_eq!(bracket_naive(&rotated).unwrap(), bracket_naive(&d).unwrap());
        checked += 1;
    }
}

#[test]
fn insert_move_walks_preserve_normalized_bracket() {
    let bases = ["trefoil.pd", "pt.pd", "fig8.pd", "doublekink.pd"];
    let allowed = [
        MoveKind::R1Plus,
        MoveKind::R1Minus,
        MoveKind::P1,
        MoveKind::R2,
    ];
    for (i, base) in bases.iter().enumerate() {
        let d = load_fixture(base);
        let reference = normalized_bracket(&d, Engine::Contract).unwrap();
        let walked = random_move_walk(&d, 100 + i as u64, 12, &allowed);
        assert_eq!(
            normalized_bracket(&walked, Engine::Contract).unwrap(),
            reference,
            "walk from {base}"
        );
    }
}

#[test]
fn obstruction_soundness_small_corpus() {
    // Wherever switching a crossing preserves the normalized bracket, the
    // pseudo-crossing bracket must be V-free and satisfy both unit
    // relations.
    let mut rng = WalkRng::new(21);
    let mut equal_cases = 0;
    for _ in 0..25 {
        let d = random_classical_knot(&mut rng, 7);
        if d.n_components() != 1 {
            continue;
        }
        for i in 0..d.crossing_count() {
            let switched = d.switch_crossing(i).unwrap();
            if normalized_bracket(&d, Engine::Contract).unwrap()
                != normalized_bracket(&switched, Engine::Contract).unwrap()
            {
                continue;
            }
            equal_cases += 1;
            let report =
                pseudobracket::obstruction::obstruct(&d, i, Engine::Contract).unwrap();
            assert!(report.v_part.is_zero(), "soundness violated at crossing {i}");
            assert!(report.relation_plus_ok && report.relation_minus_ok);
        }
    }
    assert!(equal_cases >= 5, "corpus too thin: {equal_cases} equal cases");
}

#[test]
fn fixture_brackets() {
    let unknot = load_fixture("unknot.json");
    assert_eq!(bracket_contract(&unknot), PseudoPoly::one());
    let hopf = load_fixture("hopf.json");
    assert_eq!(
        bracket_contract(&hopf).to_string(),
        "-A^-4 - A^4"
    );
    let fig8 = load_fixture("fig8.pd");
    assert_eq!(
        normalized_bracket(&fig8, Engine::Contract).unwrap().to_string(),
        "A^-8 - A^-4 + 1 - A^4 + A^8"
    );
}

#[test]
fn contraction_handles_fourteen_crossings_fast() {
    use pseudobracket::braid::{braid_closure, sigma, sigma_inv};
    use std::time::Instant;
    let d = braid_closure(
        4,
        &[
            sigma(1), sigma(2), sigma_inv(3), sigma(1), sigma(2), sigma(3),
            sigma_inv(1), sigma(2), sigma(1), sigma_inv(2), sigma(3), sigma(2),
            sigma(1), sigma(2),
        ],
    )
    .unwrap();
    assert_eq!(d.crossing_count(), 14);
    let start = Instant::now();
    let b = bracket_contract(&d);
    assert!(!b.is_zero());
    assert!(start.elapsed().as_secs() < 5, "contraction too slow");
}
