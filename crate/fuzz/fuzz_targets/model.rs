#![no_main]

use libfuzzer_sys::fuzz_target;
use qatl_core::model::load_model;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = load_model(text) {
        let printed = m.to_text();
        let again = load_model(&printed).expect("printed models load");
        assert_eq!(again.to_text(), printed);
    }
});
