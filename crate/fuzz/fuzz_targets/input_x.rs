#![no_main]

use f2sketch::input::{format_input, parse_input};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = n as usize;
    if let Ok(x) = parse_input(text, n) {
        assert_eq!(x.len(), n);
        assert_eq!(parse_input(&format_input(&x), n).unwrap(), x);
    }
});
