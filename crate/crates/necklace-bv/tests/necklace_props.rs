//! Property-based invariants for canonicalization, the sign cocycle, the
//! polynomial ring, and the text formats.

use necklace_bv::grading::Parity;
use necklace_bv::necklace::{Canon, NecklaceOps, Path};
use necklace_bv::quiver::{ArrowId, DArrow, Quiver};
use necklace_bv::rat::rat;
use necklace_bv::repbv::{poly_scale, poly_var, RepAlgebra, VarId};
use necklace_bv::superlin::{IotaData, SuperSpace};
use proptest::prelude::*;

fn two_loop(p: Parity) -> necklace_bv::quiver::DoubledQuiver {
    Quiver::parse("vertices: v\narrow a v v\narrow b v v\n")
        .unwrap()
        .double(p)
}

/// Arbitrary loop words on the 2-loop quiver: always composable and
/// closed, so every strategy value is a valid input.
fn loop_word(max_len: usize) -> impl Strategy<Value = Vec<DArrow>> {
    prop::collection::vec((0usize..2, any::<bool>()), 1..=max_len).prop_map(|v| {
        v.into_iter()
            .map(|(base, bar)| DArrow {
                base: ArrowId(base),
                bar,
            })
            .collect()
    })
}

fn parity() -> impl Strategy<Value = Parity> {
    any::<bool>().prop_map(Parity)
}

proptest! {
    #[test]
    fn canonical_form_is_minimal_and_idempotent(w in loop_word(7), p in parity()) {
        let q = two_loop(p);
        let ops = NecklaceOps::new(&q);
        if let Canon::NonZero { necklace, .. } = ops.canonicalize(&Path::Word(w.clone())).unwrap() {
            let canon = necklace.word().to_vec();
            // minimality among all rotations
            for k in 0..w.len() {
                let mut rot = w.clone();
                rot.rotate_left(k);
                prop_assert!(canon <= rot);
            }
            // canonicalizing the canonical word is the identity with sign +1
            match ops.canonicalize(&Path::Word(canon.clone())).unwrap() {
                Canon::NonZero { necklace: n2, negative } => {
                    prop_assert_eq!(n2.word(), &canon[..]);
                    prop_assert!(!negative);
                }
                Canon::Zero => prop_assert!(false, "canonical form vanished"),
            }
        }
    }

    #[test]
    fn rotations_differ_by_epsilon_sign(w in loop_word(7), k in 0usize..7, p in parity()) {
        let q = two_loop(p);
        let ops = NecklaceOps::new(&q);
        let k = k % w.len();
        let mut rot = w.clone();
        rot.rotate_left(k);
        let eps = ops.epsilon(&w, 0, k).unwrap();
        let c0 = ops.canonicalize(&Path::Word(w.clone())).unwrap();
        let ck = ops.canonicalize(&Path::Word(rot)).unwrap();
        match (c0, ck) {
            (Canon::Zero, Canon::Zero) => {}
            (
                Canon::NonZero { necklace: n0, negative: s0 },
                Canon::NonZero { necklace: nk, negative: sk },
            ) => {
                prop_assert_eq!(n0, nk);
                prop_assert_eq!(s0 ^ sk, eps.is_odd());
            }
            _ => prop_assert!(false, "zero-ness must be rotation invariant"),
        }
    }

    #[test]
    fn epsilon_cocycle(w in loop_word(7), k in 0usize..7, m in 0usize..7, l in 0usize..7, p in parity()) {
        let q = two_loop(p);
        let ops = NecklaceOps::new(&q);
        let n = w.len();
        let (k, m, l) = (k % n, m % n, l % n);
        let lhs = ops.epsilon(&w, k, l).unwrap();
        let rhs = ops.epsilon(&w, k, m).unwrap() + ops.epsilon(&w, m, l).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_antisymmetry_shifted_sign(wa in loop_word(5), wb in loop_word(5), p in parity()) {
        let q = two_loop(p);
        let ops = NecklaceOps::new(&q);
        let (Canon::NonZero { necklace: x, .. }, Canon::NonZero { necklace: y, .. }) = (
            ops.canonicalize(&Path::Word(wa)).unwrap(),
            ops.canonicalize(&Path::Word(wb)).unwrap(),
        ) else {
            return Ok(());
        };
        let sign = (ops.degree(&x) * ops.degree(&y) + p + Parity::ODD).sign();
        let lhs = ops.bracket_basis(&x, &y).unwrap();
        let rhs = necklace_bv::necklace::sum_scale(&ops.bracket_basis(&y, &x).unwrap(), &sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sum_print_parse_round_trip(words in prop::collection::vec((loop_word(5), -4i64..=4), 1..4), p in parity()) {
        let q = two_loop(p);
        let ops = NecklaceOps::new(&q);
        let mut sum = necklace_bv::necklace::NecklaceSum::new();
        for (w, c) in words {
            if c == 0 {
                continue;
            }
            if let Canon::NonZero { necklace, negative } = ops.canonicalize(&Path::Word(w)).unwrap() {
                let coeff = if negative { rat(-c) } else { rat(c) };
                necklace_bv::necklace::sum_insert(&mut sum, necklace, coeff);
            }
        }
        let printed = ops.format_sum(&sum);
        prop_assert_eq!(ops.parse_sum(&printed).unwrap(), sum);
    }

    #[test]
    fn quiver_text_round_trip(n_extra in 0usize..3, loops in 1usize..3) {
        let mut vertices = vec!["v".to_string()];
        for i in 0..n_extra {
            vertices.push(format!("w{i}"));
        }
        let mut arrows = Vec::new();
        for l in 0..loops {
            arrows.push((format!("a{l}"), "v".to_string(), vertices[l % vertices.len()].clone()));
        }
        let q = Quiver::new(vertices, arrows).unwrap();
        let text = q.emit();
        let q2 = Quiver::parse(&text).unwrap();
        prop_assert_eq!(&q, &q2);
        prop_assert_eq!(q2.emit(), text);
    }
}

fn small_alg() -> (necklace_bv::quiver::DoubledQuiver, SuperSpace, IotaData) {
    let q = two_loop(Parity::EVEN);
    let space = SuperSpace::uniform(1, 1, 1);
    let iota =
        IotaData::default_p0(&space, |v| q.base().vertex_name(v).into(), rat(1)).unwrap();
    (q, space, iota)
}

proptest! {
    #[test]
    fn polynomial_ring_supercommutes(vars in prop::collection::vec(0u32..8, 1..5), swap_at in 0usize..4) {
        let (q, space, iota) = small_alg();
        let alg = RepAlgebra::new(&q, &space, &iota).unwrap();
        prop_assume!(alg.var_count() == 8);
        let polys: Vec<_> = vars.iter().map(|v| poly_var(VarId(*v))).collect();
        // associativity: fold left == fold right
        let left = polys
            .iter()
            .fold(necklace_bv::repbv::poly_const(rat(1)), |acc, p| alg.poly_mul(&acc, p));
        let right = polys
            .iter()
            .rev()
            .fold(necklace_bv::repbv::poly_const(rat(1)), |acc, p| alg.poly_mul(p, &acc));
        prop_assert_eq!(&left, &right);
        // supercommutativity of an adjacent swap
        if polys.len() >= 2 {
            let i = swap_at % (polys.len() - 1);
            let u = &polys[i];
            let v = &polys[i + 1];
            let uv = alg.poly_mul(u, v);
            let vu = alg.poly_mul(v, u);
            let sign = (alg.parity_of(VarId(vars[i])) * alg.parity_of(VarId(vars[i + 1]))).sign();
            prop_assert_eq!(uv, poly_scale(&vu, &sign));
        }
    }
}
