//! Bipartition parsing must never panic for any register size; accepted cuts
//! partition the register and round trip through Display.

#![no_main]

use libfuzzer_sys::fuzz_target;
use minwit::Bipartition;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else {
        return;
    };
    let n = first as usize;
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(cut) = Bipartition::parse(text, n) else {
        return;
    };
    assert!((2..=26).contains(&n), "accepted out-of-range register size {n}");
    let reparsed = Bipartition::parse(&cut.to_string(), n).expect("printed form reparses");
    assert_eq!(reparsed, cut);
    let full = (1u32 << n) - 1;
    assert_eq!(cut.side_a_mask() & cut.side_b_mask(), 0);
    assert_eq!(cut.side_a_mask() | cut.side_b_mask(), full);
    assert_ne!(cut.side_a_mask(), 0);
    assert_ne!(cut.side_b_mask(), 0);
});
