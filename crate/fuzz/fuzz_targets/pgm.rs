#![no_main]

use libfuzzer_sys::fuzz_target;
use mtafrac::io::parse_pgm;

fuzz_target!(|data: &[u8]| {
    if let Ok(bm) = parse_pgm(data) {
        assert_eq!(bm.bits.len(), bm.width * bm.height);
    }
});
