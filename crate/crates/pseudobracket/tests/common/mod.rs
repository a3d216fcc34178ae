//! Shared helpers for the integration suites: fixture paths and seeded
//! random diagram corpora.
#![allow(dead_code)] // not every suite uses every helper

use std::path::PathBuf;

use pseudobracket::braid::{braid_closure, BraidGen};
use pseudobracket::diagram::PseudoDiagram;
use pseudobracket::moves::{p1_insert, r1_insert, Side, WalkRng};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load_fixture(name: &str) -> PseudoDiagram {
    let path = fixtures_dir().join(name);
    let content = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {}: {e}", path.display()));
    let parsed = if name.ends_with(".json") {
        pseudobracket::diagram::parse_pd_json(&content)
    } else {
        pseudobracket::diagram::parse_pd_text(&content)
    };
    parsed.unwrap_or_else(|e| panic!("fixture {}: {e}", path.display()))
}

fn random_braid_word(rng: &mut WalkRng, strands: usize, letters: usize, pseudo: bool) -> Vec<BraidGen> {
    (0..letters)
        .map(|_| {
            let pos = 1 + rng.below(strands - 1);
            if pseudo && rng.below(4) == 0 {
                BraidGen::PseudoSigma { pos }
            } else {
                BraidGen::Sigma {
                    pos,
                    positive: rng.coin(),
                }
            }
        })
        .collect()
}

/// A random single-component classical diagram with at most `max_crossings`
/// crossings: a braid-closure knot decorated with a few kinks, so switched
/// crossings with equal normalized brackets occur at a useful rate.
pub fn random_classical_knot(rng: &mut WalkRng, max_crossings: usize) -> PseudoDiagram {
    loop {
        let strands = 2 + rng.below(2);
        let base_len = 2 + rng.below(max_crossings.saturating_sub(3).max(1));
        let word = random_braid_word(rng, strands, base_len, false);
        let Ok(mut d) = braid_closure(strands, &word) else {
            continue;
        };
        if d.n_components() != 1 {
            continue;
        }
        let kinks = rng.below(3);
        for _ in 0..kinks {
            if d.crossing_count() >= max_crossings {
                break;
            }
            let arcs: Vec<_> = d.arcs().collect();
            let arc = arcs[rng.below(arcs.len())];
            let side = if rng.coin() { Side::Left } else { Side::Right };
            if let Ok(next) = r1_insert(&d, arc, rng.coin(), side) {
                d = next;
            }
        }
        if d.crossing_count() <= max_crossings && d.crossing_count() > 0 {
            return d;
        }
    }
}

/// A random diagram mixing classical and pseudo crossings, possibly a link.
pub fn random_mixed_diagram(rng: &mut WalkRng, max_crossings: usize) -> PseudoDiagram {
    loop {
        let strands = 2 + rng.below(3);
        let letters = 1 + rng.below(max_crossings.saturating_sub(1).max(1));
        let word = random_braid_word(rng, strands, letters, true);
        let Ok(mut d) = braid_closure(strands, &word) else {
            continue;
        };
        for _ in 0..rng.below(3) {
            if d.crossing_count() >= max_crossings {
                break;
            }
            let arcs: Vec<_> = d.arcs().collect();
            let arc = arcs[rng.below(arcs.len())];
            let side = if rng.coin() { Side::Left } else { Side::Right };
            let next = if rng.coin() {
                r1_insert(&d, arc, rng.coin(), side)
            } else {
                p1_insert(&d, arc, side)
            };
            if let Ok(next) = next {
                d = next;
            }
        }
        if d.crossing_count() <= max_crossings && d.crossing_count() > 0 {
            return d;
        }
    }
}
