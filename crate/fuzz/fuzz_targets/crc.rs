#![no_main]

use libfuzzer_sys::fuzz_target;
use srscl::crc::{crc_append, crc_check, CrcConfig};

fuzz_target!(|data: &[u8]| {
    let cfg = CrcConfig::default();
    let payload: Vec<u8> = data.iter().map(|b| b & 1).collect();
    let frame = crc_append(&payload, &cfg);
    if payload.is_empty() {
        assert!(crc_check(&frame, &cfg).is_err());
        return;
    }
    assert!(crc_check(&frame, &cfg).unwrap());
    if let Some(&flip) = data.first() {
        let mut bad = frame.clone();
        let i = usize::from(flip) % bad.len();
        bad[i] ^= 1;
        assert!(!crc_check(&bad, &cfg).unwrap());
    }
});
