#![no_main]

use libfuzzer_sys::fuzz_target;
use srscl::formats::{parse_llrs, write_llrs};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(llrs) = parse_llrs(text) {
        assert!(llrs.iter().all(|v| v.is_finite()));
        assert_eq!(parse_llrs(&write_llrs(&llrs)).unwrap(), llrs);
    }
});
