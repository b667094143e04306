#![no_main]

use f2sketch::gf2::BitVector;
use f2sketch::valuations::FunctionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = FunctionSpec::from_json(text) else { return };
    let again = FunctionSpec::from_json(&spec.to_json()).expect("serialized spec parses");
    assert_eq!(again.to_json(), spec.to_json());
    let _ = spec.eval(&BitVector::zeros(spec.n()));
    let _ = spec.eval(&BitVector::ones(spec.n()));
});
