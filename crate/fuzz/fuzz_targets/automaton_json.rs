#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::io::{automaton_to_json, parse_automaton_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((m, prov)) = parse_automaton_json(s) {
        let again = parse_automaton_json(&automaton_to_json(&m, prov.as_ref())).expect("emitted automaton parses");
        assert_eq!(again, (m, prov));
    }
});
