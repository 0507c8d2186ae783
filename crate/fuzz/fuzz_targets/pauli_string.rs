//! Pauli-string parsing must never panic; accepted strings round trip
//! through Display and expose consistent digit accessors.

#![no_main]

use libfuzzer_sys::fuzz_target;
use minwit::PauliString;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(op) = text.parse::<PauliString>() else {
        return;
    };
    let printed = op.to_string();
    let reparsed: PauliString = printed.parse().expect("printed form reparses");
    assert_eq!(reparsed, op);
    assert_eq!(printed.len(), op.n_qubits());
    for site in 1..=op.n_qubits() {
        assert!(op.digit(site) <= 3);
    }
    assert_eq!(op.is_identity(), (1..=op.n_qubits()).all(|s| op.digit(s) == 0));
});
