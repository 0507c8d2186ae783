//! Counts JSON parsing must never panic; accepted records round trip and
//! always yield in-range correlation estimates.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(records) = minwit::parse_counts_json(text) else {
        return;
    };
    let rendered = minwit::counts_to_json(&records);
    let reparsed = minwit::parse_counts_json(&rendered).expect("rendered JSON reparses");
    assert_eq!(reparsed.len(), records.len());
    for (a, b) in records.iter().zip(&reparsed) {
        assert_eq!(a.setting(), b.setting());
        assert_eq!(a.shots(), b.shots());
        assert_eq!(a.counts(), b.counts());
    }

    // Estimation from accepted records must not panic, and every estimate
    // must be a valid correlation.
    if let Ok(corrs) = minwit::correlations_from_counts(&records) {
        for (_, value, stderr) in corrs.iter() {
            assert!(value.abs() <= 1.0);
            assert!(stderr.is_finite() && stderr >= 0.0);
        }
    }
});
