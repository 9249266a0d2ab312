#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::quiver::Quiver;
use necklace_bv::superlin::parse_dims_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let quiver = Quiver::parse("vertices: v w\narrow a v w\narrow b w w\n").unwrap();
    let _ = parse_dims_spec(&quiver, Some(text));
});
