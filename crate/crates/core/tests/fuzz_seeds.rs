//! Replays the checked-in fuzz corpora through the same round trips the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use qatl_core::formula::parse;
use qatl_core::hardness::parse_tm;
use qatl_core::model::load_model;
use qatl_core::parity::{dump_game, parse_game_dump};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn formula_seeds() {
    for (name, text) in seeds("formula") {
        let f = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{name}");
    }
}

#[test]
fn model_seeds() {
    for (name, text) in seeds("model") {
        let m = load_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = m.to_text();
        assert_eq!(load_model(&printed).unwrap().to_text(), printed, "{name}");
    }
}

#[test]
fn game_dump_seeds() {
    for (name, text) in seeds("game_dump") {
        let g = parse_game_dump(&text).unwrap_or_else(|e| panic!("{name}: {e}")).game;
        let printed = dump_game(&g);
        assert_eq!(dump_game(&parse_game_dump(&printed).unwrap().game), printed, "{name}");
    }
}

#[test]
fn turing_machine_seeds() {
    for (name, text) in seeds("turing_machine") {
        let tm = parse_tm(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_tm(&tm.to_string()).unwrap().to_string(), tm.to_string(), "{name}");
    }
}
