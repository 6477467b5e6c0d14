#![no_main]

// First byte: n (mod 6) and list size; next 2^n bits: frozen mask; then one
// byte per LLR.
use libfuzzer_sys::fuzz_target;
use srscl::construction::reliability_profile;
use srscl::decoders::{esr_scl_decode, ml_decode, sc_decode, scl_decode, sr_scl_decode};
use srscl::polar::PolarCode;

fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let n = u32::from(head % 6);
    let list = usize::from(head >> 4) + 1;
    let len = 1usize << n;
    let mask_bytes = len.div_ceil(8);
    if rest.len() < mask_bytes + len {
        return;
    }
    let mask: Vec<bool> = (0..len).map(|i| rest[i / 8] >> (i % 8) & 1 == 1).collect();
    let llrs: Vec<f64> = rest[mask_bytes..mask_bytes + len]
        .iter()
        .map(|&b| f64::from(b as i8) / 8.0)
        .collect();
    let Ok(code) = PolarCode::new(mask) else { return };
    let profile = reliability_profile(n, 0.5).unwrap();

    let sc = sc_decode(&llrs, &code).unwrap();
    let scl = scl_decode(&llrs, &code, list).unwrap();
    let sr = sr_scl_decode(&llrs, &code, &profile, list, 3).unwrap();
    let esr = esr_scl_decode(&llrs, &code, &profile, list, 3).unwrap();
    for r in [&sc, &scl, &sr, &esr] {
        assert_eq!(code.encode_info(&r.info_bits).unwrap(), r.codeword);
    }
    if code.dimension() <= 12 {
        let ml = ml_decode(&llrs, &code).unwrap();
        for r in [&sc, &scl, &sr, &esr] {
            assert!(r.selected_metric <= ml.selected_metric + 1e-9);
        }
    }
});
