#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_bv::grading::Parity;
use necklace_bv::quiver::Quiver;
use necklace_bv::superlin::{parse_dims_spec, IotaData};

// Input layout: a dims spec line, a line `---`, then the iota matrix
// file contents. Accepted data must satisfy the iota invariants.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((dims_line, iota_text)) = text.split_once("\n---\n") else {
        return;
    };
    let quiver = Quiver::parse("vertices: v w\narrow a v w\n").unwrap();
    let Ok(space) = parse_dims_spec(&quiver, Some(dims_line)) else {
        return;
    };
    // keep matrices small so the fuzzer spends time on the parser
    if (0..2).any(|i| space.dim(necklace_bv::quiver::VertexId(i)) > 6) {
        return;
    }
    for p in [Parity::EVEN, Parity::ODD] {
        let dq = quiver.clone().double(p);
        if let Ok(iota) = IotaData::parse_file(iota_text, &dq, &space, p) {
            // validated data really does square to lambda at each vertex
            for (i, m) in iota.maps.iter().enumerate() {
                let sq = m.then(m);
                for r in 0..space.dim(necklace_bv::quiver::VertexId(i)) {
                    assert_eq!(sq.entries[r][r], iota.lambda);
                }
            }
        }
    }
});
