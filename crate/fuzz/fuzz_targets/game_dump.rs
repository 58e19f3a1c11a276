#![no_main]

use libfuzzer_sys::fuzz_target;
use qatl_core::parity::{dump_game, parse_game_dump};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = parse_game_dump(text) {
        let printed = dump_game(&parsed.game);
        let again = parse_game_dump(&printed).expect("dumps parse");
        assert_eq!(dump_game(&again.game), printed);
    }
});
