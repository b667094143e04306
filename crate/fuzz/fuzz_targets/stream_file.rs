#![no_main]

use f2sketch::stream::{fold_stream, StreamReader};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let coords: Vec<usize> = StreamReader::new(data).map_while(Result::ok).collect();
    if let Some(&max) = coords.iter().max() {
        if max < 1 << 16 {
            let x = fold_stream(max + 1, coords.iter().copied()).unwrap();
            assert!(x.count_ones() <= coords.len());
        }
    }
});
