#![no_main]

use f2sketch::gf2::BitVector;
use f2sketch::sketch::{estimate, SketchPlan};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(plan) = SketchPlan::from_json(text) else { return };
    // a plan that loads must decode any k bits without panicking
    let _ = estimate(&plan, &BitVector::zeros(plan.k()));
    let _ = estimate(&plan, &BitVector::ones(plan.k()));
    let x = BitVector::ones(plan.n());
    let _ = estimate(&plan, &plan.sketch(&x).unwrap());
    assert_eq!(SketchPlan::from_json(&plan.to_json()).unwrap(), plan);
});
