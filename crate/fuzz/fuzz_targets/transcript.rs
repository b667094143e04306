#![no_main]

use f2sketch::protocol::Transcript;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(t) = serde_json::from_slice::<Transcript>(data) else { return };
    let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(back.message_bits(), t.message_bits());
});
