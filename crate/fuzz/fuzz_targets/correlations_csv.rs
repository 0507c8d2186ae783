//! Correlation CSV parsing must never panic, and anything it accepts must
//! survive a render → reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(corrs) = minwit::parse_correlations_csv(text) else {
        return;
    };
    let rendered = minwit::correlations_to_csv(&corrs, &[]);
    let reparsed = minwit::parse_correlations_csv(&rendered).expect("rendered CSV reparses");
    assert_eq!(reparsed.len(), corrs.len());
    for (op, value, stderr) in corrs.iter() {
        let (v, s) = reparsed.get(&op).expect("operator survives round trip");
        assert_eq!(v.to_bits(), value.to_bits());
        assert_eq!(s.to_bits(), stderr.to_bits());
    }
});
