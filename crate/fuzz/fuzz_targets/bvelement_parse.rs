#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::grading::Parity;
use necklace_bv::necklace::NecklaceOps;
use necklace_bv::quiver::Quiver;
use necklace_bv::symbv::SymBv;

// Input layout: quiver text, a line `---`, then an element expression
// `c * (w1) (w2) + ...`.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((quiver_text, expr)) = text.split_once("\n---\n") else {
        return;
    };
    let Ok(quiver) = Quiver::parse(quiver_text) else {
        return;
    };
    for p in [Parity::EVEN, Parity::ODD] {
        let dq = quiver.clone().double(p);
        let sym = SymBv::new(NecklaceOps::new(&dq));
        if let Ok(e) = sym.parse_element(expr) {
            let printed = sym.format_element(&e);
            let reparsed = sym.parse_element(&printed).expect("printed element reparses");
            assert_eq!(e, reparsed);
        }
    }
});
