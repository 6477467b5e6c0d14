#![no_main]

use libfuzzer_sys::fuzz_target;
use srscl::formats::{parse_profile_csv, write_profile_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(profile) = parse_profile_csv(text) {
        assert!(profile.len().is_power_of_two());
        let again = parse_profile_csv(&write_profile_csv(&profile)).expect("written profile parses");
        assert_eq!(again.tau, profile.tau);
    }
});
