//! Randomized verifier suites for every identity the library is built
//! around. All sampling is driven by a seeded deterministic PRNG; each
//! identity derives its own stream, so reports are byte-stable.

use crate::grading::Parity;
use crate::necklace::{
    sum_add, sum_insert, sum_scale, tensor_insert, Canon, Necklace, NecklaceOps, NecklaceSum,
    NecklaceTensor, Path,
};
use crate::quiver::{DArrow, VertexId};
use crate::rat::{frac, rat, Rat};
use crate::report::{IdentityReport, Recorder};
use crate::repbv::{poly_add, poly_scale, poly_sub, poly_zero};
use crate::rng::SplitMix64;
use crate::superlin::{
    b_iota, gram_matrix, intertwiner_basis, invert, rref, snake_apply, t_closed_form,
    t_from_inversion, SuperMatrix,
};
use crate::symbv::{
    ad_on_tensor, bracket_part_sign, bv_add, bv_scale, graded_flip, BVElement, HbarParam, SymBv,
};
use crate::tracemap::TraceContext;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("lambda/hbar mismatch: iota squares to {actual} but the theorem requires {expected}")]
    LambdaMismatch { actual: String, expected: String },
    #[error("for p=1 the theorem requires iota = hbar^(-1/2) id at every vertex")]
    IotaNotScalar,
}

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_len: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, trials: u64, max_len: usize) -> Self {
        SampleConfig {
            seed,
            trials,
            max_len,
        }
    }
}

// ---------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------

/// A random closed word of length between 1 and `max_len` (rejection
/// sampling over random walks, with an out-and-back walk as a guaranteed
/// fallback). `None` on quivers without arrows.
pub fn random_closed_word(
    ops: &NecklaceOps,
    rng: &mut SplitMix64,
    max_len: usize,
) -> Option<Vec<DArrow>> {
    let q = ops.quiver;
    if q.darrow_count() == 0 || q.vertex_count() == 0 {
        return None;
    }
    for _ in 0..400 {
        let len = rng.range(1, max_len.max(1));
        let start = VertexId(rng.below(q.vertex_count()));
        let mut at = start;
        let mut word = Vec::with_capacity(len);
        let mut stuck = false;
        for _ in 0..len {
            let outs = q.darrows_from(at);
            if outs.is_empty() {
                stuck = true;
                break;
            }
            let d = *rng.pick(&outs);
            at = q.target(d);
            word.push(d);
        }
        if !stuck && at == start && !word.is_empty() {
            return Some(word);
        }
    }
    // out-and-back fallback, always closed
    let base = crate::quiver::ArrowId(rng.below(q.darrow_count() / 2));
    let d = DArrow::original(base);
    Some(vec![d, d.barred()])
}

/// A random nonzero necklace; occasionally (or on arrowless quivers,
/// always) a constant path. Requires at least one vertex.
pub fn random_necklace(ops: &NecklaceOps, rng: &mut SplitMix64, max_len: usize) -> Necklace {
    assert!(
        ops.quiver.vertex_count() > 0,
        "sampling needs a nonempty vertex set"
    );
    let constant = |rng: &mut SplitMix64| {
        Necklace::Constant(VertexId(rng.below(ops.quiver.vertex_count().max(1))))
    };
    if rng.below(8) == 0 {
        return constant(rng);
    }
    for _ in 0..200 {
        let Some(w) = random_closed_word(ops, rng, max_len) else {
            return constant(rng);
        };
        if let Canon::NonZero { necklace, .. } = ops.canonicalize(&Path::Word(w)).unwrap() {
            return necklace;
        }
    }
    constant(rng)
}

/// A random monomial with up to `max_factors` necklace factors, as a
/// normalized element (possibly with sign folded in).
pub fn random_monomial(
    sym: &SymBv,
    rng: &mut SplitMix64,
    max_len: usize,
    max_factors: usize,
) -> BVElement {
    for _ in 0..100 {
        let k = rng.range(0, max_factors);
        let factors: Vec<Necklace> = (0..k)
            .map(|_| random_necklace(&sym.ops, rng, max_len))
            .collect();
        if let Some((m, neg)) = sym.sym_normalize(&factors) {
            return BVElement::from([(m, if neg { rat(-1) } else { rat(1) })]);
        }
    }
    crate::symbv::bv_unit()
}

/// A random element with a few monomials and small rational coefficients.
pub fn random_element(
    sym: &SymBv,
    rng: &mut SplitMix64,
    max_len: usize,
    max_factors: usize,
) -> BVElement {
    let coeffs = [rat(1), rat(-1), rat(2), frac(1, 2), frac(-3, 2)];
    let mut out = BVElement::new();
    for _ in 0..rng.range(1, 3) {
        let m = random_monomial(sym, rng, max_len, max_factors);
        let c = rng.pick(&coeffs).clone();
        out = bv_add(&out, &bv_scale(&m, &c));
    }
    out
}

// ---------------------------------------------------------------------
// Necklace-side suites
// ---------------------------------------------------------------------

type Triple = BTreeMap<(Necklace, Necklace, Necklace), Rat>;

fn triple_insert(t: &mut Triple, key: (Necklace, Necklace, Necklace), c: Rat) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&key) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                t.remove(&key);
            }
        }
        None => {
            t.insert(key, c);
        }
    }
}

/// Items (1)-(6) of the graded involutive Lie bialgebra definition, the
/// rotation-descent checks, degree homogeneity, and the seven-term
/// identity for the BV operator.
pub fn verify_axioms(
    sym: &SymBv,
    params: &HbarParam,
    cfg: &SampleConfig,
) -> Vec<IdentityReport> {
    let ops = &sym.ops;
    let p = sym.p;
    let mut out = Vec::new();

    // (1) bracket symmetry
    let mut rec = Recorder::new("axioms", "bracket_antisymmetry", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "bracket_antisymmetry");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let y = random_necklace(ops, &mut rng, cfg.max_len);
        let lhs = ops.bracket_basis(&x, &y).unwrap();
        let sign = (ops.degree(&x) * ops.degree(&y) + p + Parity::ODD).sign();
        let rhs = sum_scale(&ops.bracket_basis(&y, &x).unwrap(), &sign);
        rec.record(lhs == rhs, || {
            format!(
                "x = {}, y = {}",
                ops.format_necklace(&x),
                ops.format_necklace(&y)
            )
        });
    }
    out.push(rec.finish());

    // (2) cobracket image symmetry
    let mut rec = Recorder::new("axioms", "cobracket_image_symmetry", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "cobracket_image_symmetry");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let d = ops.cobracket_basis(&x).unwrap();
        let flipped = graded_flip(ops, &d);
        let expect = scale_tensor(&d, &(p + Parity::ODD).sign());
        rec.record(flipped == expect, || {
            format!("x = {}", ops.format_necklace(&x))
        });
    }
    out.push(rec.finish());

    // (3) Jacobi
    let mut rec = Recorder::new("axioms", "jacobi", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "jacobi");
    for _ in 0..cfg.trials {
        let xs = [
            random_necklace(ops, &mut rng, cfg.max_len),
            random_necklace(ops, &mut rng, cfg.max_len),
            random_necklace(ops, &mut rng, cfg.max_len),
        ];
        let degs: Vec<Parity> = xs.iter().map(|n| ops.degree(n)).collect();
        let mut acc = NecklaceSum::new();
        for (r, neg) in crate::symbv::cyclic_symmetrizer(3, &degs) {
            let rotated = [&xs[r % 3], &xs[(r + 1) % 3], &xs[(r + 2) % 3]];
            let inner = ops.bracket_basis(rotated[0], rotated[1]).unwrap();
            let mut outer = NecklaceSum::new();
            for (n, c) in &inner {
                for (m, c2) in ops.bracket_basis(n, rotated[2]).unwrap() {
                    sum_insert(&mut outer, m, c2 * c);
                }
            }
            let signed = if neg {
                sum_scale(&outer, &rat(-1))
            } else {
                outer
            };
            acc = sum_add(&acc, &signed);
        }
        rec.record(acc.is_empty(), || {
            format!(
                "x = {}, y = {}, z = {}",
                ops.format_necklace(&xs[0]),
                ops.format_necklace(&xs[1]),
                ops.format_necklace(&xs[2])
            )
        });
    }
    out.push(rec.finish());

    // (4) co-Jacobi
    let mut rec = Recorder::new("axioms", "co_jacobi", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "co_jacobi");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let d = ops.cobracket_basis(&x).unwrap();
        let mut triple = Triple::new();
        for ((u, v), c) in &d {
            for ((r, s), c2) in ops.cobracket_basis(u).unwrap() {
                triple_insert(&mut triple, (r, s, v.clone()), c2 * c);
            }
        }
        // apply the cyclic symmetriser and sum
        let mut acc = Triple::new();
        for ((a, b, c), coeff) in &triple {
            let degs = [ops.degree(a), ops.degree(b), ops.degree(c)];
            let items = [a, b, c];
            for (r, neg) in crate::symbv::cyclic_symmetrizer(3, &degs) {
                let key = (
                    items[r % 3].clone(),
                    items[(r + 1) % 3].clone(),
                    items[(r + 2) % 3].clone(),
                );
                let val = if neg { -coeff.clone() } else { coeff.clone() };
                triple_insert(&mut acc, key, val);
            }
        }
        rec.record(acc.is_empty(), || format!("x = {}", ops.format_necklace(&x)));
    }
    out.push(rec.finish());

    // (5) involutivity
    let mut rec = Recorder::new("axioms", "involutivity", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "involutivity");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let d = ops.cobracket_basis(&x).unwrap();
        let mut acc = NecklaceSum::new();
        for ((u, v), c) in &d {
            for (n, c2) in ops.bracket_basis(u, v).unwrap() {
                sum_insert(&mut acc, n, c2 * c);
            }
        }
        rec.record(acc.is_empty(), || format!("x = {}", ops.format_necklace(&x)));
    }
    out.push(rec.finish());

    // (6) cocycle condition
    let mut rec = Recorder::new("axioms", "cocycle", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "cocycle");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let y = random_necklace(ops, &mut rng, cfg.max_len);
        let br = ops.bracket_basis(&x, &y).unwrap();
        let mut lhs = NecklaceTensor::new();
        for (n, c) in &br {
            for (key, c2) in ops.cobracket_basis(n).unwrap() {
                tensor_insert(&mut lhs, key, c2 * c);
            }
        }
        let dx = ops.degree(&x);
        let dy = ops.degree(&y);
        let s1 = ((dx + p) * p).sign();
        let s2 = ((dx + p) * dy + Parity::ODD).sign();
        let t1 = ad_on_tensor(ops, p, &x, &ops.cobracket_basis(&y).unwrap()).unwrap();
        let t2 = ad_on_tensor(ops, p, &y, &ops.cobracket_basis(&x).unwrap()).unwrap();
        let rhs = add_tensors(&scale_tensor(&t1, &s1), &scale_tensor(&t2, &s2));
        rec.record(lhs == rhs, || {
            format!(
                "x = {}, y = {}",
                ops.format_necklace(&x),
                ops.format_necklace(&y)
            )
        });
    }
    out.push(rec.finish());

    // rotation well-definedness of both operations
    let mut rec = Recorder::new("axioms", "rotation_descent", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "rotation_descent");
    for _ in 0..cfg.trials {
        let Some(w) = random_closed_word(ops, &mut rng, cfg.max_len) else {
            break;
        };
        let k = rng.below(w.len());
        let mut rot = w.clone();
        rot.rotate_left(k);
        let eps = ops.epsilon(&w, 0, k).unwrap();
        let y = random_necklace(ops, &mut rng, cfg.max_len);
        let br0 = bracket_of_word(ops, &w, &y);
        let brk = bracket_of_word(ops, &rot, &y);
        let ok_br = br0 == sum_scale(&brk, &eps.sign());
        let co0 = cobracket_of_word(ops, &w);
        let cok = cobracket_of_word(ops, &rot);
        let ok_co = co0 == scale_tensor(&cok, &eps.sign());
        rec.record(ok_br && ok_co, || {
            format!(
                "word = {}, rotation = {k}",
                ops.format_necklace(&Necklace::Word(w.clone()))
            )
        });
    }
    out.push(rec.finish());

    // degree homogeneity of the operations
    let mut rec = Recorder::new("axioms", "degree_homogeneity", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "degree_homogeneity");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let y = random_necklace(ops, &mut rng, cfg.max_len);
        let want = ops.degree(&x) + ops.degree(&y) + p;
        let ok_br = ops
            .bracket_basis(&x, &y)
            .unwrap()
            .keys()
            .all(|n| ops.degree(n) == want);
        let want_co = ops.degree(&x) + p;
        let ok_co = ops
            .cobracket_basis(&x)
            .unwrap()
            .keys()
            .all(|(u, v)| ops.degree(u) + ops.degree(v) == want_co);
        rec.record(ok_br && ok_co, || {
            format!(
                "x = {}, y = {}",
                ops.format_necklace(&x),
                ops.format_necklace(&y)
            )
        });
    }
    out.push(rec.finish());

    // seven-term identity for the BV operator
    let mut rec = Recorder::new("axioms", "seven_term", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "seven_term");
    for _ in 0..cfg.trials {
        let x = random_monomial(sym, &mut rng, cfg.max_len, 2);
        let y = random_monomial(sym, &mut rng, cfg.max_len, 2);
        let z = random_monomial(sym, &mut rng, cfg.max_len, 2);
        let ok = seven_term_holds(sym, params, &x, &y, &z);
        rec.record(ok, || {
            format!(
                "x = {}, y = {}, z = {}",
                sym.format_element(&x),
                sym.format_element(&y),
                sym.format_element(&z)
            )
        });
    }
    out.push(rec.finish());

    out
}

fn bracket_of_word(ops: &NecklaceOps, w: &[DArrow], y: &Necklace) -> NecklaceSum {
    ops.bracket_basis(&Necklace::Word(w.to_vec()), y).unwrap()
}

fn cobracket_of_word(ops: &NecklaceOps, w: &[DArrow]) -> NecklaceTensor {
    ops.cobracket_basis(&Necklace::Word(w.to_vec())).unwrap()
}

fn scale_tensor(t: &NecklaceTensor, c: &Rat) -> NecklaceTensor {
    if c.is_zero() {
        return NecklaceTensor::new();
    }
    t.iter().map(|(k, v)| (k.clone(), v * c)).collect()
}

fn add_tensors(a: &NecklaceTensor, b: &NecklaceTensor) -> NecklaceTensor {
    let mut out = a.clone();
    for (k, v) in b {
        tensor_insert(&mut out, k.clone(), v.clone());
    }
    out
}

fn mono_parity(sym: &SymBv, e: &BVElement) -> Parity {
    e.keys()
        .next()
        .map(|m| sym.monomial_degree(m))
        .unwrap_or(Parity::EVEN)
}

/// The seven-term identity for the BV operator on homogeneous monomial
/// elements.
pub fn seven_term_holds(
    sym: &SymBv,
    params: &HbarParam,
    x: &BVElement,
    y: &BVElement,
    z: &BVElement,
) -> bool {
    let d = |e: &BVElement| sym.bv_delta(e, params).unwrap();
    let (px, py, pz) = (mono_parity(sym, x), mono_parity(sym, y), mono_parity(sym, z));
    let xy = sym.mul(x, y);
    let yz = sym.mul(y, z);
    let zx = sym.mul(z, x);
    let xyz = sym.mul(&xy, z);
    let s_x_yz = (px * (py + pz)).sign();
    let s_z_xy = (pz * (px + py)).sign();
    let mut acc = d(&xyz);
    acc = bv_add(&acc, &bv_scale(&sym.mul(&d(&xy), z), &rat(-1)));
    acc = bv_add(&acc, &bv_scale(&sym.mul(&d(&yz), x), &(-s_x_yz.clone())));
    acc = bv_add(&acc, &bv_scale(&sym.mul(&d(&zx), y), &(-s_z_xy.clone())));
    acc = bv_add(&acc, &sym.mul(&d(x), &yz));
    acc = bv_add(&acc, &bv_scale(&sym.mul(&d(y), &zx), &s_x_yz));
    acc = bv_add(&acc, &bv_scale(&sym.mul(&d(z), &xy), &s_z_xy));
    acc.is_empty()
}

/// BV nilpotence on the necklace side: the square of the operator on
/// sampled monomials of polynomial degree at most 3.
pub fn verify_bv_square_necklace(
    sym: &SymBv,
    params: &HbarParam,
    cfg: &SampleConfig,
) -> Vec<IdentityReport> {
    let mut rec = Recorder::new("bvsquare", "bv_delta_squared_necklace", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "bv_delta_squared_necklace");
    for _ in 0..cfg.trials {
        let e = random_monomial(sym, &mut rng, cfg.max_len, 3);
        let d1 = sym.bv_delta(&e, params).unwrap();
        let d2 = sym.bv_delta(&d1, params).unwrap();
        rec.record(d2.is_empty(), || sym.format_element(&e));
    }
    vec![rec.finish()]
}

// ---------------------------------------------------------------------
// Representation-variety suites
// ---------------------------------------------------------------------

/// Pairing non-degeneracy, the t cross-oracle, the snake identity, and
/// the B_iota image characterization. Deterministic per arrow.
pub fn verify_pairing(ctx: &TraceContext, cfg: &SampleConfig) -> Vec<IdentityReport> {
    let q = ctx.quiver;
    let mut out = Vec::new();

    let mut rec = Recorder::new("pairing", "pairing_nondegenerate", cfg.seed);
    for a in q.darrows() {
        let ba = intertwiner_basis(q, &ctx.space, &ctx.iota, a);
        let bb = intertwiner_basis(q, &ctx.space, &ctx.iota, a.barred());
        let g = gram_matrix(&ctx.space, &ctx.iota, &ba, &bb).unwrap();
        rec.record(invert(&g).is_some(), || {
            format!("arrow = {}", q.darrow_name(a))
        });
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("pairing", "t_cross_oracle", cfg.seed);
    for a in q.darrows() {
        let ba = intertwiner_basis(q, &ctx.space, &ctx.iota, a);
        let bb = intertwiner_basis(q, &ctx.space, &ctx.iota, a.barred());
        let closed = t_closed_form(q, &ctx.space, &ctx.iota, a);
        let inverted = t_from_inversion(q, &ctx.space, &ctx.iota, &ba, &bb).unwrap();
        rec.record(closed == inverted, || {
            format!("arrow = {}", q.darrow_name(a))
        });
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("pairing", "snake_identity", cfg.seed);
    for a in q.darrows() {
        let bb = intertwiner_basis(q, &ctx.space, &ctx.iota, a.barred());
        let closed = t_closed_form(q, &ctx.space, &ctx.iota, a);
        let mut ok = true;
        for psi in &bb.vectors {
            let back = snake_apply(q, &ctx.space, &ctx.iota, a, &closed, psi).unwrap();
            if &back != psi {
                ok = false;
                break;
            }
        }
        rec.record(ok, || format!("arrow = {}", q.darrow_name(a)));
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("pairing", "b_iota_image", cfg.seed);
    for a in q.darrows() {
        let basis = intertwiner_basis(q, &ctx.space, &ctx.iota, a);
        let s = q.source(a);
        let t = q.target(a);
        let mut image_rows: Vec<Vec<Rat>> = Vec::new();
        for mu in 0..ctx.space.dim(s) {
            for nu in 0..ctx.space.dim(t) {
                let h = SuperMatrix::basis(&ctx.space, s, t, mu, nu);
                image_rows.push(b_iota(&ctx.iota, &h).flatten());
            }
        }
        let basis_rows: Vec<Vec<Rat>> = basis.vectors.iter().map(|f| f.flatten()).collect();
        let rank = |rows: &[Vec<Rat>]| {
            let mut m = rows.to_vec();
            rref(&mut m).len()
        };
        let ri = rank(&image_rows);
        let rb = rank(&basis_rows);
        let mut both = image_rows;
        both.extend(basis_rows);
        let ok = ri == rb && rank(&both) == rb;
        rec.record(ok, || format!("arrow = {}", q.darrow_name(a)));
    }
    out.push(rec.finish());

    out
}

/// Commutation of the iota matrix with arrow matrices and idempotents,
/// the coordinate relations, trace rotation invariance, and the p = 0
/// plain-trace vanishing.
pub fn verify_commute(ctx: &TraceContext, cfg: &SampleConfig) -> Vec<IdentityReport> {
    let q = ctx.quiver;
    let ops = NecklaceOps::new(q);
    let mut out = Vec::new();

    let mut rec = Recorder::new("commute", "m_iota_commutes_arrows", cfg.seed);
    for a in q.darrows() {
        let ma = ctx.m_of_arrow(a);
        let mn = ctx.mul(&ctx.m_iota_at(q.source(a)), &ma);
        let nm = ctx.mul(&ma, &ctx.m_iota_at(q.target(a)));
        let sign = (ctx.iota.degree * ma.degree + Parity::ODD).sign();
        let comm = ctx.add(&mn, &ctx.scale(&nm, &sign));
        rec.record(ctx.is_zero_matrix(&comm), || {
            format!("arrow = {}", q.darrow_name(a))
        });
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("commute", "m_iota_commutes_idempotents", cfg.seed);
    for v in 0..q.vertex_count() {
        let v = VertexId(v);
        let comm = ctx.commutator(&ctx.m_iota_at(v), &ctx.m_of_vertex(v));
        rec.record(ctx.is_zero_matrix(&comm), || {
            format!("vertex = {}", q.base().vertex_name(v))
        });
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("commute", "coordinate_relations", cfg.seed);
    for a in q.darrows() {
        let mut ok = true;
        for mu in 0..ctx.space.dim(q.source(a)) {
            for nu in 0..ctx.space.dim(q.target(a)) {
                let rel =
                    crate::repbv::y_relation(&ctx.alg, q, &ctx.space, &ctx.iota, a, mu, nu);
                if !rel.is_empty() {
                    ok = false;
                }
            }
        }
        rec.record(ok, || format!("arrow = {}", q.darrow_name(a)));
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("commute", "phi_rotation_invariance", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "phi_rotation_invariance");
    for _ in 0..cfg.trials {
        let Some(w) = random_closed_word(&ops, &mut rng, cfg.max_len) else {
            break;
        };
        let k = rng.below(w.len());
        let mut rot = w.clone();
        rot.rotate_left(k);
        let base = ctx.phi_path(&Path::Word(w.clone())).unwrap();
        let rotated = ctx.phi_path(&Path::Word(rot)).unwrap();
        let sign = ops.epsilon(&w, 0, k).unwrap().sign();
        rec.record(rotated == poly_scale(&base, &sign), || {
            format!(
                "word = {}, rotation = {k}",
                ops.format_necklace(&Necklace::Word(w.clone()))
            )
        });
    }
    out.push(rec.finish());

    if !q.p().is_odd() {
        let mut rec = Recorder::new("commute", "p0_trace_vanishing", cfg.seed);
        let mut rng = SplitMix64::derive(cfg.seed, "p0_trace_vanishing");
        for _ in 0..cfg.trials {
            let Some(w) = random_closed_word(&ops, &mut rng, cfg.max_len) else {
                break;
            };
            let m = ctx.m_of_path(&Path::Word(w.clone())).unwrap();
            rec.record(ctx.str_block(&m).is_empty(), || {
                format!("word = {}", ops.format_necklace(&Necklace::Word(w.clone())))
            });
        }
        out.push(rec.finish());
    }

    out
}

/// BV nilpotence on the representation side.
pub fn verify_bv_square_rep(ctx: &TraceContext, cfg: &SampleConfig) -> Vec<IdentityReport> {
    let mut rec = Recorder::new("bvsquare", "bv_delta_squared_rep", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "bv_delta_squared_rep");
    let nv = ctx.alg.var_count();
    for _ in 0..cfg.trials {
        // random polynomial of degree <= 3
        let mut poly = poly_zero();
        for _ in 0..rng.range(1, 3) {
            let deg = if nv == 0 { 0 } else { rng.range(0, 3) };
            let mut term = crate::repbv::poly_const(rat(1));
            for _ in 0..deg {
                let v = crate::repbv::VarId(rng.below(nv) as u32);
                term = ctx.alg.poly_mul(&term, &crate::repbv::poly_var(v));
            }
            let coeffs = [rat(1), rat(-1), frac(1, 2), rat(3)];
            poly = poly_add(&poly, &poly_scale(&term, rng.pick(&coeffs)));
        }
        let d2 = ctx.alg.bv_tilde(&ctx.alg.bv_tilde(&poly));
        rec.record(d2.is_empty(), || ctx.alg.format_poly(ctx.quiver, &poly));
    }
    // quartic spot check
    let mut rng = SplitMix64::derive(cfg.seed, "bv_delta_squared_rep_quartic");
    for _ in 0..cfg.trials.min(10) {
        if nv == 0 {
            break;
        }
        let mut term = crate::repbv::poly_const(rat(1));
        for _ in 0..4 {
            let v = crate::repbv::VarId(rng.below(nv) as u32);
            term = ctx.alg.poly_mul(&term, &crate::repbv::poly_var(v));
        }
        let d2 = ctx.alg.bv_tilde(&ctx.alg.bv_tilde(&term));
        rec.record(d2.is_empty(), || ctx.alg.format_poly(ctx.quiver, &term));
    }
    vec![rec.finish()]
}

/// The parameter constraints of the comparison theorem.
pub fn check_theorem_params(ctx: &TraceContext, params: &HbarParam) -> Result<(), ConfigError> {
    let expected = params.lambda();
    if ctx.iota.lambda != expected {
        return Err(ConfigError::LambdaMismatch {
            actual: crate::rat::format_rat(&ctx.iota.lambda),
            expected: crate::rat::format_rat(&expected),
        });
    }
    if params.p.is_odd() {
        let Ok(scalar) = params.iota_scalar() else {
            return Err(ConfigError::IotaNotScalar);
        };
        for (i, m) in ctx.iota.maps.iter().enumerate() {
            let want = SuperMatrix::identity(&ctx.space, VertexId(i)).scale(&scalar);
            if m.entries != want.entries {
                return Err(ConfigError::IotaNotScalar);
            }
        }
    }
    Ok(())
}

/// The three intertwining identities: bracket against the odd Poisson
/// bracket, rescaled cobracket against the BV operator, and the full
/// BV-morphism equation on low-degree elements.
pub fn verify_theorem(
    ctx: &TraceContext,
    sym: &SymBv,
    params: &HbarParam,
    cfg: &SampleConfig,
) -> Result<Vec<IdentityReport>, ConfigError> {
    check_theorem_params(ctx, params)?;
    let ops = &sym.ops;
    let beta = bracket_part_sign(sym.p);
    let mut out = Vec::new();

    let mut rec = Recorder::new("theorem", "bracket_intertwine", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "bracket_intertwine");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let y = random_necklace(ops, &mut rng, cfg.max_len);
        let br = ops.bracket_basis(&x, &y).unwrap();
        let lhs = poly_scale(&ctx.phi_sum(&br).unwrap(), &beta);
        let rhs = ctx
            .alg
            .poisson_tilde(&ctx.phi(&x).unwrap(), &ctx.phi(&y).unwrap());
        rec.record(lhs == rhs, || {
            format!(
                "x = {}, y = {}",
                ops.format_necklace(&x),
                ops.format_necklace(&y)
            )
        });
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("theorem", "cobracket_intertwine", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "cobracket_intertwine");
    for _ in 0..cfg.trials {
        let x = random_necklace(ops, &mut rng, cfg.max_len);
        let cs = sym.cobracket_sym(&x).unwrap();
        let lhs = poly_scale(&ctx.phi_sym(&cs).unwrap(), &params.hbar);
        let rhs = ctx.alg.bv_tilde(&ctx.phi(&x).unwrap());
        rec.record(lhs == rhs, || format!("x = {}", ops.format_necklace(&x)));
    }
    out.push(rec.finish());

    let mut rec = Recorder::new("theorem", "main_theorem", cfg.seed);
    let mut rng = SplitMix64::derive(cfg.seed, "main_theorem");
    for _ in 0..cfg.trials {
        let e = random_element(sym, &mut rng, cfg.max_len, 2);
        let lhs = ctx.phi_sym(&sym.bv_delta(&e, params).unwrap()).unwrap();
        let rhs = ctx.alg.bv_tilde(&ctx.phi_sym(&e).unwrap());
        rec.record(poly_sub(&lhs, &rhs) == poly_zero(), || sym.format_element(&e));
    }
    out.push(rec.finish());

    Ok(out)
}
