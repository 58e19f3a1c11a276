#![no_main]

use libfuzzer_sys::fuzz_target;
use qatl_core::formula::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse(text) {
        // printing and reparsing must give the same tree
        let again = parse(&f.to_string()).expect("printed formulas parse");
        assert_eq!(f, again);
    }
});
