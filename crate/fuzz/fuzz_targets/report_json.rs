//! Evaluation-report JSON parsing must never panic, and accepted reports
//! must survive a render → reparse round trip including the non-finite
//! significance sentinels.

#![no_main]

use libfuzzer_sys::fuzz_target;

fn same_f64(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(report) = minwit::parse_report_json(text) else {
        return;
    };
    let rendered = minwit::report_to_json(&report);
    let reparsed = minwit::parse_report_json(&rendered).expect("rendered JSON reparses");
    assert!(same_f64(reparsed.value, report.value));
    assert!(same_f64(reparsed.stderr, report.stderr));
    assert!(same_f64(reparsed.significance, report.significance));
    assert_eq!(reparsed.verdict, report.verdict);
    assert_eq!(reparsed.per_cut.len(), report.per_cut.len());
});
