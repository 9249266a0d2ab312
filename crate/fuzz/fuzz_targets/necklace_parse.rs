#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::grading::Parity;
use necklace_bv::necklace::NecklaceOps;
use necklace_bv::quiver::Quiver;

// Input layout: quiver text, a line `---`, then a necklace-sum
// expression. Accepted sums must survive a print/parse round trip.
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
        let ops = NecklaceOps::new(&dq);
        if let Ok(sum) = ops.parse_sum(expr) {
            let printed = ops.format_sum(&sum);
            let reparsed = ops.parse_sum(&printed).expect("printed sum reparses");
            assert_eq!(sum, reparsed);
        }
    }
});
