#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::rat::{format_rat, parse_rat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // avoid pathological multi-megabyte integers
    if text.len() > 4096 {
        return;
    }
    if let Ok(r) = parse_rat(text) {
        let printed = format_rat(&r);
        assert_eq!(parse_rat(&printed).unwrap(), r);
    }
});
