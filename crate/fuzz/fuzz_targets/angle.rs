//! Angle parsing (`pi` fractions and plain floats) must never panic and may
//! only accept finite values.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(angle) = minwit::parse_angle(text) {
        assert!(angle.is_finite(), "accepted non-finite angle {angle} from {text:?}");
    }
});
