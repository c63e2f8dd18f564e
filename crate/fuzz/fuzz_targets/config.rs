#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::io::{format_config, parse_config};
use mtafrac::mta::{accepts_up, MultiTapeAutomaton};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let m = MultiTapeAutomaton::from_spec(
        &[&["0", "1"], &["0", "1", "2"]],
        &["X", "Y"],
        &[
            ("X", "X", &["0", "22"]),
            ("X", "Y", &["10", "11"]),
            ("Y", "Y", &["1", "001"]),
            ("Y", "Y", &["1", "20"]),
            ("Y", "X", &["110", "2"]),
        ],
    )
    .unwrap();
    if let Ok(c) = parse_config(&m, s) {
        assert_eq!(parse_config(&m, &format_config(&m, &c)).expect("formatted config parses"), c);
        // acceptance is total on valid configurations
        accepts_up(&m, 0, &c).expect("valid configuration");
    }
});
