#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::io::{gifs_to_json, parse_gifs_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_gifs_json(s) {
        assert_eq!(parse_gifs_json(&gifs_to_json(&g)).expect("emitted GIFS parses"), g);
    }
});
