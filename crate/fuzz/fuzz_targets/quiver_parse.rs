#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::quiver::Quiver;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must never panic, and accepted quivers must round-trip
    // bit-exactly through the emitter
    if let Ok(q) = Quiver::parse(text) {
        let emitted = q.emit();
        let q2 = Quiver::parse(&emitted).expect("emitted text reparses");
        assert_eq!(q, q2);
        assert_eq!(q2.emit(), emitted);
    }
});
