//! Witness JSON parsing must never panic, and accepted witnesses must be
//! internally consistent and survive a render → reparse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(witness) = minwit::parse_witness_json(text) else {
        return;
    };
    witness.validate().expect("accepted witnesses validate");
    let rendered = minwit::witness_to_json(&witness);
    let reparsed = minwit::parse_witness_json(&rendered).expect("rendered JSON reparses");
    assert_eq!(reparsed, witness);
});
