#![no_main]

use f2sketch::gf2::{BitVector, ParityMatrix};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = ParityMatrix::from_json(text) else { return };
    assert_eq!(ParityMatrix::from_json(&m.to_json()).unwrap(), m);
    let bits = m.apply(&BitVector::ones(m.n())).expect("n matches");
    assert_eq!(bits.len(), m.k());
});
