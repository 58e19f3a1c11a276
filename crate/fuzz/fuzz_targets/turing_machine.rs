#![no_main]

use libfuzzer_sys::fuzz_target;
use qatl_core::hardness::parse_tm;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tm) = parse_tm(text) {
        let again = parse_tm(&tm.to_string()).expect("printed machines parse");
        assert_eq!(again.to_string(), tm.to_string());
    }
});
