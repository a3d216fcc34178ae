//! The slide-move fixture pairs are shipped as JSON PD files under
//! `fixtures/moves/`; this suite keeps them in lockstep with the
//! programmatic generators.
//!
//! Regenerate after changing the generators:
//!
//!   PSEUDOBRACKET_REGEN_FIXTURES=1 cargo test -p pseudobracket \
//!       --test fixtures_sync -- --ignored regenerate

use std::path::PathBuf;

use pseudobracket::diagram::parse_pd_json;
use pseudobracket::moves::{p2_fixture_pairs, p3_fixture_pairs, r3_fixture_pairs, MovePair};

fn moves_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/moves")
}

fn all_pairs() -> Vec<MovePair> {
    r3_fixture_pairs()
        .into_iter()
        .chain(p2_fixture_pairs())
        .chain(p3_fixture_pairs())
        .collect()
}

#[test]
fn fixture_files_match_generators() {
    for pair in all_pairs() {
        for (suffix, diagram) in [("a", &pair.before), ("b", &pair.after)] {
            let path = moves_dir().join(format!("{}_{suffix}.json", pair.name));
            let content = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
            let parsed = parse_pd_json(&content)
                .unwrap_or_else(|e| panic!("bad fixture {}: {e}", path.display()));
            assert_eq!(
                &parsed,
                diagram,
                "fixture {} differs from its generator",
                path.display()
            );
        }
    }
}

#[test]
#[ignore]
fn regenerate() {
    if std::env::var("PSEUDOBRACKET_REGEN_FIXTURES").is_err() {
        eprintln!("set PSEUDOBRACKET_REGEN_FIXTURES=1 to rewrite fixtures");
        return;
    }
    std::fs::create_dir_all(moves_dir()).unwrap();
    for pair in all_pairs() {
        for (suffix, diagram) in [("a", &pair.before), ("b", &pair.after)] {
            let path = moves_dir().join(format!("{}_{suffix}.json", pair.name));
            std::fs::write(&path, diagram.render_json() + "\n").unwrap();
        }
    }
}
