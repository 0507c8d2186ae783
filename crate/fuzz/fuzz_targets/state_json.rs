//! State JSON parsing must never panic; accepted states are normalized and
//! reparse to the same vector up to renormalization round-off.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(state) = minwit::parse_state_json(text) else {
        return;
    };
    let norm: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-9, "accepted state has norm² {norm}");

    let rendered = minwit::state_to_json(&state);
    let reparsed = minwit::parse_state_json(&rendered).expect("rendered JSON reparses");
    assert_eq!(reparsed.n_qubits(), state.n_qubits());
    for (a, b) in state.amplitudes().iter().zip(reparsed.amplitudes()) {
        assert!((a - b).norm() < 1e-12);
    }
});
