//! A direct, list-based, non-canonicalizing evaluator of the necklace
//! operations and of the BV operator, kept independent of the engine's
//! canonical-form code paths. Signs are recomputed here by explicit
//! letter counting; only final results are normalized for comparison.

use necklace_bv::grading::Parity;
use necklace_bv::necklace::{Canon, Necklace, NecklaceOps, NecklaceSum, Path};
use necklace_bv::quiver::{DArrow, DoubledQuiver, VertexId};
use necklace_bv::rat::{frac, rat, Rat};
use necklace_bv::symbv::{bracket_part_sign, BVElement, HbarParam, SymBv};

/// A term of the free path algebra: a rooted word or a constant path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawPath {
    Constant(VertexId),
    Word(Vec<DArrow>),
}

fn degree_of_letter(q: &DoubledQuiver, d: DArrow) -> usize {
    if d.bar && q.p().is_odd() {
        1
    } else {
        0
    }
}

fn word_degree(q: &DoubledQuiver, w: &[DArrow]) -> usize {
    w.iter().map(|d| degree_of_letter(q, *d)).sum::<usize>() % 2
}

fn raw_degree(q: &DoubledQuiver, p: &RawPath) -> usize {
    match p {
        RawPath::Constant(_) => 0,
        RawPath::Word(w) => word_degree(q, w),
    }
}

/// Indicator pairing: 0 unless b = bar(a); 1 for original a;
/// (-1)^(p+1) for doubled a.
fn indicator(q: &DoubledQuiver, a: DArrow, b: DArrow) -> i64 {
    if b != a.barred() {
        0
    } else if !a.bar {
        1
    } else if q.p().is_odd() {
        1
    } else {
        -1
    }
}

/// eps_{kl} by direct segment counting on a rooted word.
fn eps(q: &DoubledQuiver, w: &[DArrow], k: usize, l: usize) -> usize {
    let n = w.len();
    let mut d1 = 0usize;
    let mut i = k;
    while i != l {
        d1 += degree_of_letter(q, w[i]);
        i = (i + 1) % n;
    }
    let mut d2 = 0usize;
    let mut i = l;
    while i != k {
        d2 += degree_of_letter(q, w[i]);
        i = (i + 1) % n;
    }
    (d1 % 2) * (d2 % 2)
}

/// The open segment a_{i+1} .. a_{j-1} of a rooted word, constant at
/// t(a_i) when j follows i.
fn segment(q: &DoubledQuiver, w: &[DArrow], i: usize, j: usize) -> RawPath {
    let n = w.len();
    let len = (j + n - i - 1) % n;
    if len == 0 {
        return RawPath::Constant(q.target(w[i]));
    }
    let mut out = Vec::with_capacity(len);
    let mut pos = (i + 1) % n;
    for _ in 0..len {
        out.push(w[pos]);
        pos = (pos + 1) % n;
    }
    RawPath::Word(out)
}

fn concat(a: &RawPath, b: &RawPath) -> RawPath {
    match (a, b) {
        (RawPath::Constant(_), RawPath::Constant(v)) => RawPath::Constant(*v),
        (RawPath::Constant(_), p) | (p, RawPath::Constant(_)) => p.clone(),
        (RawPath::Word(u), RawPath::Word(v)) => {
            let mut w = u.clone();
            w.extend_from_slice(v);
            RawPath::Word(w)
        }
    }
}

/// The bracket double sum on rooted words, with no canonicalization.
pub fn naive_bracket(
    q: &DoubledQuiver,
    a: &[DArrow],
    b: &[DArrow],
) -> Vec<(Rat, RawPath)> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let ind = indicator(q, a[i], b[j]);
            if ind == 0 {
                continue;
            }
            let aii = segment(q, a, i, i);
            let bjj = segment(q, b, j, j);
            let exp =
                (eps(q, a, 0, i) + eps(q, b, 0, j) + raw_degree(q, &aii) * degree_of_letter(q, b[j]))
                    % 2;
            let sign = if exp == 1 { -1 } else { 1 };
            out.push((rat(sign * ind), concat(&aii, &bjj)));
        }
    }
    out
}

/// The half-weighted cobracket double sum on a rooted word.
pub fn naive_cobracket(q: &DoubledQuiver, a: &[DArrow]) -> Vec<(Rat, RawPath, RawPath)> {
    let mut out = Vec::new();
    if a.len() < 2 {
        return out;
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            let ind = indicator(q, a[i], a[j]);
            if ind == 0 {
                continue;
            }
            let aij = segment(q, a, i, j);
            let aji = segment(q, a, j, i);
            let exp = (eps(q, a, 0, i) + raw_degree(q, &aij) * degree_of_letter(q, a[j])) % 2;
            let sign = if exp == 1 { -1 } else { 1 };
            out.push((frac(sign * ind, 2), aij, aji));
        }
    }
    out
}

/// Normalize a list of raw terms into a canonical sum using the engine's
/// canonicalizer (the comparison target lives in canonical space).
pub fn normalize_terms(ops: &NecklaceOps, terms: &[(Rat, RawPath)]) -> NecklaceSum {
    let mut out = NecklaceSum::new();
    for (c, p) in terms {
        let path = match p {
            RawPath::Constant(v) => Path::Constant(*v),
            RawPath::Word(w) => Path::Word(w.clone()),
        };
        match ops.canonicalize(&path).unwrap() {
            Canon::Zero => {}
            Canon::NonZero { necklace, negative } => {
                let coeff = if negative { -c.clone() } else { c.clone() };
                necklace_bv::necklace::sum_insert(&mut out, necklace, coeff);
            }
        }
    }
    out
}

fn raw_to_path(p: &RawPath) -> Path {
    match p {
        RawPath::Constant(v) => Path::Constant(*v),
        RawPath::Word(w) => Path::Word(w.clone()),
    }
}

/// Normalize tensor terms into canonical ordered pairs.
pub fn normalize_tensor(
    ops: &NecklaceOps,
    terms: &[(Rat, RawPath, RawPath)],
) -> necklace_bv::necklace::NecklaceTensor {
    let mut out = necklace_bv::necklace::NecklaceTensor::new();
    for (c, l, r) in terms {
        let cl = ops.canonicalize(&raw_to_path(l)).unwrap();
        let cr = ops.canonicalize(&raw_to_path(r)).unwrap();
        if let (
            Canon::NonZero {
                necklace: nl,
                negative: sl,
            },
            Canon::NonZero {
                necklace: nr,
                negative: sr,
            },
        ) = (cl, cr)
        {
            let coeff = if sl ^ sr { -c.clone() } else { c.clone() };
            necklace_bv::necklace::tensor_insert(&mut out, (nl, nr), coeff);
        }
    }
    out
}

/// Shifted degree of a raw monomial factor.
fn raw_shifted(q: &DoubledQuiver, p: &RawPath) -> usize {
    (raw_degree(q, p) + usize::from(q.p().is_odd()) + 1) % 2
}

/// The BV operator evaluated directly on a list of rooted-word factors,
/// without any canonical sorting: returns raw monomial terms.
pub fn naive_bv_delta(
    q: &DoubledQuiver,
    factors: &[RawPath],
    hbar: &Rat,
) -> Vec<(Rat, Vec<RawPath>)> {
    let beta: i64 = if q.p().is_odd() { 1 } else { -1 };
    let mut out = Vec::new();
    let shifted: Vec<usize> = factors.iter().map(|f| raw_shifted(q, f)).collect();
    // bracket part over factor pairs
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            let (RawPath::Word(wi), RawPath::Word(wj)) = (&factors[i], &factors[j]) else {
                continue; // bracket vanishes on constants
            };
            let mut exp = 0usize;
            exp += shifted[i] * shifted[..i].iter().sum::<usize>();
            exp += shifted[j] * (shifted[..j].iter().sum::<usize>() - shifted[i]);
            let extract_neg = exp % 2 == 1;
            let rest: Vec<RawPath> = factors
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, f)| f.clone())
                .collect();
            for (c, glued) in naive_bracket(q, wi, wj) {
                let mut mono = Vec::with_capacity(rest.len() + 1);
                mono.push(glued);
                mono.extend(rest.iter().cloned());
                let coeff = rat(beta) * if extract_neg { -c } else { c };
                out.push((coeff, mono));
            }
        }
    }
    // cobracket part over single factors
    for i in 0..factors.len() {
        let RawPath::Word(wi) = &factors[i] else {
            continue;
        };
        let extract_neg = (shifted[i] * shifted[..i].iter().sum::<usize>()) % 2 == 1;
        let rest: Vec<RawPath> = factors
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, f)| f.clone())
            .collect();
        for (c, l, r) in naive_cobracket(q, wi) {
            let mut mono = Vec::with_capacity(rest.len() + 2);
            mono.push(l);
            mono.push(r);
            mono.extend(rest.iter().cloned());
            let coeff = hbar * if extract_neg { -c } else { c };
            out.push((coeff, mono));
        }
    }
    out
}

/// Normalize raw monomial terms into a canonical element.
pub fn normalize_element(sym: &SymBv, terms: &[(Rat, Vec<RawPath>)]) -> BVElement {
    let mut out = BVElement::new();
    for (c, mono) in terms {
        let mut coeff = c.clone();
        let mut factors: Vec<Necklace> = Vec::with_capacity(mono.len());
        let mut dead = false;
        for raw in mono {
            match sym.ops.canonicalize(&raw_to_path(raw)).unwrap() {
                Canon::Zero => {
                    dead = true;
                    break;
                }
                Canon::NonZero { necklace, negative } => {
                    if negative {
                        coeff = -coeff;
                    }
                    factors.push(necklace);
                }
            }
        }
        if dead {
            continue;
        }
        if let Some((m, neg)) = sym.sym_normalize(&factors) {
            necklace_bv::symbv::bv_insert(&mut out, m, if neg { -coeff } else { coeff });
        }
    }
    out
}

/// Engine-side reference: the BV operator applied to the canonical image
/// of the same raw factors (signs folded into the coefficient).
pub fn engine_bv_delta(
    sym: &SymBv,
    params: &HbarParam,
    factors: &[RawPath],
) -> Option<BVElement> {
    let mut coeff = rat(1);
    let mut canon: Vec<Necklace> = Vec::with_capacity(factors.len());
    for raw in factors {
        match sym.ops.canonicalize(&raw_to_path(raw)).unwrap() {
            Canon::Zero => return Some(BVElement::new()),
            Canon::NonZero { necklace, negative } => {
                if negative {
                    coeff = -coeff;
                }
                canon.push(necklace);
            }
        }
    }
    let (mono, neg) = sym.sym_normalize(&canon)?;
    if neg {
        coeff = -coeff;
    }
    let e = BVElement::from([(mono, coeff)]);
    Some(sym.bv_delta(&e, params).unwrap())
}

/// Sanity constant shared with the engine.
pub fn beta_matches(p: Parity) -> bool {
    bracket_part_sign(p) == rat(if p.is_odd() { 1 } else { -1 })
}
