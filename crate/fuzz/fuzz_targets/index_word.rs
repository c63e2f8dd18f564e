#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::pcp::IndexWord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = IndexWord::parse(s) {
        assert!(!w.is_empty());
    }
});
