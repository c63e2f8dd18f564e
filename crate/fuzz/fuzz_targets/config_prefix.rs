#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::mta::{is_dead_prefix, ConfigPrefix, MultiTapeAutomaton};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let m = MultiTapeAutomaton::from_spec(
        &[&["0", "1"], &["0", "1"]],
        &["q"],
        &[("q", "q", &["0", "0"]), ("q", "q", &["0", "1"]), ("q", "q", &["1", "0"])],
    )
    .unwrap();
    if let Ok(p) = ConfigPrefix::parse(&m, s) {
        assert_eq!(ConfigPrefix::parse(&m, &p.render(&m)).expect("rendered prefix parses"), p);
        if p.len() <= 16 {
            is_dead_prefix(&m, 0, &p);
        }
    }
});
