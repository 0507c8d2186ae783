//! Measurement-setting parsing must never panic; accepted settings have no
//! identity digits and round trip through Display.

#![no_main]

use libfuzzer_sys::fuzz_target;
use minwit::MeasurementSetting;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(setting) = text.parse::<MeasurementSetting>() else {
        return;
    };
    let reparsed: MeasurementSetting = setting.to_string().parse().expect("printed form reparses");
    assert_eq!(reparsed, setting);
    for site in 1..=setting.n_qubits() {
        assert!((1..=3).contains(&setting.local(site)));
    }
});
