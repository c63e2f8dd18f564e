#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::io::{parse_pcp_json, pcp_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_pcp_json(s) {
        let again = parse_pcp_json(&pcp_to_json(&inst)).expect("emitted PCP JSON parses");
        assert_eq!(again, inst);
    }
});
