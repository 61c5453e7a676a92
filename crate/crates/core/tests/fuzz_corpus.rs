//! Replays the checked-in fuzz corpus through the fuzz targets' invariants.

use std::path::PathBuf;

use swkb_core::scenario::{parse, parse_scenario, ScenarioFile};
use swkb_core::systems::parse_rational;

fn corpus(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn scenario_parse_seeds_round_trip() {
    for text in corpus("scenario_parse") {
        if let Ok(ScenarioFile::Single(s)) = parse(&text) {
            assert_eq!(parse(&s.to_text()).unwrap(), ScenarioFile::Single(s));
        }
    }
}

#[test]
fn scenario_validate_seeds() {
    let mut rejected = 0;
    for text in corpus("scenario_validate") {
        if let Ok(s) = parse_scenario(&text) {
            rejected += usize::from(s.validate().is_err());
        }
    }
    assert!(rejected >= 2);
}

#[test]
fn rational_seeds_round_trip() {
    for text in corpus("rational_parse") {
        if let Some(r) = parse_rational(&text) {
            assert_eq!(parse_rational(&r.to_string()), Some(r));
        }
    }
}
