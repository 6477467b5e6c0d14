#![no_main]

use libfuzzer_sys::fuzz_target;
use srscl::simulator::SimConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = SimConfig::from_json(text) {
        let again = SimConfig::from_json(&cfg.to_json()).expect("written config parses");
        assert_eq!(again.to_json(), cfg.to_json());
    }
});
