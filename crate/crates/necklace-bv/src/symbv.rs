//! The graded symmetric algebra on shifted necklaces, the BV operator
//! built from the bracket and cobracket, cyclic symmetrisers, and the
//! executable Lie-bialgebra / BV axiom verifiers.
//!
//! Each necklace factor carries the shifted degree `|x| + p + 1`; the
//! Koszul signs of monomial reordering and of operator extension are all
//! computed in shifted degrees.

use crate::grading::{cyclic_rotation_sign, extract_one_sign, extract_two_sign, Parity};
use crate::necklace::{
    Necklace, NecklaceError, NecklaceOps, NecklaceTensor,
};
use crate::rat::{format_rat, parse_rat, rat, rat_sqrt, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Sign of the bracket component of the BV operator relative to the
/// tensor-level necklace bracket. The shifted-to-symmetric normalization
/// is underdetermined by the component transformation rules alone; this
/// constant is the unique choice under which the BV operator intertwines
/// with the representation-variety operator at both parities.
pub fn bracket_part_sign(p: Parity) -> Rat {
    (p + Parity::ODD).sign()
}

/// A monomial of the symmetric algebra: necklace factors sorted by the
/// global necklace order. The empty monomial is the unit.
pub type BVMonomial = Vec<Necklace>;

/// A finite rational combination of monomials. No zero coefficients.
pub type BVElement = BTreeMap<BVMonomial, Rat>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("hbar must be nonzero")]
    ZeroHbar,
    #[error("for p=1, hbar must be the square of a rational, got {0}")]
    NotASquare(String),
}

/// The scalar parameters of the BV operator and of the compatible
/// representation-variety data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbarParam {
    pub hbar: Rat,
    pub p: Parity,
}

impl HbarParam {
    /// The BV operator itself only needs a nonzero scalar; the square
    /// condition at p = 1 belongs to the representation side, where
    /// `iota_scalar` enforces it.
    pub fn new(hbar: Rat, p: Parity) -> Result<Self, ParamError> {
        if hbar.is_zero() {
            return Err(ParamError::ZeroHbar);
        }
        Ok(HbarParam { hbar, p })
    }

    /// The scalar `lambda` with `iota^2 = lambda id`: `1/(2 hbar)` for
    /// p = 0 and `1/hbar` for p = 1.
    pub fn lambda(&self) -> Rat {
        if self.p.is_odd() {
            rat(1) / &self.hbar
        } else {
            rat(1) / (rat(2) * &self.hbar)
        }
    }

    /// For p = 1: the scalar `hbar^{-1/2}` defining `iota`. Errors when
    /// `hbar` has no rational square root.
    pub fn iota_scalar(&self) -> Result<Rat, ParamError> {
        rat_sqrt(&self.hbar)
            .map(|q| rat(1) / q)
            .ok_or_else(|| ParamError::NotASquare(format_rat(&self.hbar)))
    }
}

pub fn bv_insert(e: &mut BVElement, m: BVMonomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    match e.get_mut(&m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                e.remove(&m);
            }
        }
        None => {
            e.insert(m, c);
        }
    }
}

pub fn bv_add(a: &BVElement, b: &BVElement) -> BVElement {
    let mut out = a.clone();
    for (m, c) in b {
        bv_insert(&mut out, m.clone(), c.clone());
    }
    out
}

pub fn bv_scale(a: &BVElement, c: &Rat) -> BVElement {
    if c.is_zero() {
        return BVElement::new();
    }
    a.iter().map(|(m, v)| (m.clone(), v * c)).collect()
}

pub fn bv_single(n: Necklace) -> BVElement {
    BVElement::from([(vec![n], rat(1))])
}

pub fn bv_unit() -> BVElement {
    BVElement::from([(Vec::new(), rat(1))])
}

/// Operations on the symmetric algebra over a fixed quiver and parity.
#[derive(Clone, Debug)]
pub struct SymBv<'q> {
    pub ops: NecklaceOps<'q>,
    pub p: Parity,
}

impl<'q> SymBv<'q> {
    pub fn new(ops: NecklaceOps<'q>) -> Self {
        let p = ops.quiver.p();
        SymBv { ops, p }
    }

    /// Shifted degree of a necklace: `|x| + p + 1`.
    pub fn shifted_degree(&self, n: &Necklace) -> Parity {
        self.ops.degree(n) + self.p + Parity::ODD
    }

    fn shifted_degrees(&self, m: &[Necklace]) -> Vec<Parity> {
        m.iter().map(|n| self.shifted_degree(n)).collect()
    }

    pub fn monomial_degree(&self, m: &[Necklace]) -> Parity {
        m.iter()
            .fold(Parity::EVEN, |acc, n| acc + self.shifted_degree(n))
    }

    /// Sort factors into the canonical monomial, accumulating the Koszul
    /// sign in shifted degrees. Returns `None` when a factor of odd
    /// shifted degree repeats.
    pub fn sym_normalize(&self, factors: &[Necklace]) -> Option<(BVMonomial, bool)> {
        let mut sorted: Vec<Necklace> = Vec::with_capacity(factors.len());
        let mut negative = false;
        for f in factors {
            let fd = self.shifted_degree(f);
            // insertion sort; crossing each larger factor already placed
            let mut pos = sorted.len();
            while pos > 0 && &sorted[pos - 1] > f {
                if fd.is_odd() && self.shifted_degree(&sorted[pos - 1]).is_odd() {
                    negative = !negative;
                }
                pos -= 1;
            }
            if fd.is_odd() && sorted[..pos].iter().any(|g| g == f) {
                return None;
            }
            sorted.insert(pos, f.clone());
        }
        Some((sorted, negative))
    }

    /// Multiply two elements in the symmetric algebra.
    pub fn mul(&self, a: &BVElement, b: &BVElement) -> BVElement {
        let mut out = BVElement::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut joined = ma.clone();
                joined.extend(mb.iter().cloned());
                if let Some((m, neg)) = self.sym_normalize(&joined) {
                    let c = ca * cb;
                    bv_insert(&mut out, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Insert normalized factors scaled by `coeff` into `out`.
    fn push_term(&self, out: &mut BVElement, factors: &[Necklace], coeff: Rat) {
        if let Some((m, neg)) = self.sym_normalize(factors) {
            bv_insert(out, m, if neg { -coeff } else { coeff });
        }
    }

    /// The symmetric-square projection of the cobracket: multiply the two
    /// tensor legs. The half-weight of the cobracket collapses against the
    /// two orderings of each unordered pair.
    pub fn cobracket_sym(&self, x: &Necklace) -> Result<BVElement, NecklaceError> {
        let tensor = self.ops.cobracket_basis(x)?;
        let mut out = BVElement::new();
        for ((l, r), c) in tensor {
            self.push_term(&mut out, &[l, r], c);
        }
        Ok(out)
    }

    /// The BV operator: bracket part summed over factor pairs plus
    /// `hbar` times the cobracket part summed over single factors, with
    /// Koszul extraction signs in shifted degrees.
    pub fn bv_delta(&self, e: &BVElement, params: &HbarParam) -> Result<BVElement, NecklaceError> {
        assert_eq!(params.p, self.p, "parameter parity must match the quiver");
        let beta = bracket_part_sign(self.p);
        let mut out = BVElement::new();
        for (mono, coeff) in e {
            let degs = self.shifted_degrees(mono);
            // second-order part: the bracket on each factor pair
            for i in 0..mono.len() {
                for j in (i + 1)..mono.len() {
                    let neg = extract_two_sign(&degs, i, j);
                    let br = self.ops.bracket_basis(&mono[i], &mono[j])?;
                    let rest: Vec<Necklace> = mono
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, n)| n.clone())
                        .collect();
                    for (n, c) in br {
                        let mut factors = Vec::with_capacity(rest.len() + 1);
                        factors.push(n);
                        factors.extend(rest.iter().cloned());
                        let c = coeff * c * &beta;
                        self.push_term(&mut out, &factors, if neg { -c } else { c });
                    }
                }
            }
            // derivation part: the symmetrized cobracket on each factor
            for i in 0..mono.len() {
                let neg = extract_one_sign(&degs, i);
                let cs = self.cobracket_sym(&mono[i])?;
                let rest: Vec<Necklace> = mono
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, n)| n.clone())
                    .collect();
                for (m, c) in cs {
                    let mut factors = m.clone();
                    factors.extend(rest.iter().cloned());
                    let c = coeff * c * &params.hbar;
                    self.push_term(&mut out, &factors, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Text syntax for elements: `c * (w1) (w2) + ...`, with `1` for the
    /// unit monomial.
    pub fn parse_element(&self, s: &str) -> Result<BVElement, NecklaceError> {
        let s = s.trim();
        let mut out = BVElement::new();
        if s == "0" {
            return Ok(out);
        }
        for (neg, term) in crate::necklace::split_signed_terms(s) {
            let (coeff, rest) = match term.split_once('*') {
                Some((c, w)) => (
                    parse_rat(c).map_err(|e| NecklaceError::Parse(c.trim().into(), e))?,
                    w.trim(),
                ),
                None => (rat(1), term),
            };
            let coeff = if neg { -coeff } else { coeff };
            if rest == "1" {
                bv_insert(&mut out, Vec::new(), coeff);
                continue;
            }
            let mut factors: Option<Vec<Necklace>> = Some(Vec::new());
            let mut sign = false;
            let mut cur = rest;
            while !cur.trim_start().is_empty() {
                cur = cur.trim_start();
                if !cur.starts_with('(') {
                    return Err(NecklaceError::Parse(cur.into(), "expected `(word)`".into()));
                }
                let inner_end = cur
                    .find(')')
                    .ok_or_else(|| NecklaceError::Parse(cur.into(), "unclosed `(`".into()))?;
                let path = self.ops.parse_word(&cur[1..inner_end])?;
                if let Some(fs) = factors.as_mut() {
                    match self.ops.canonicalize(&path)? {
                        crate::necklace::Canon::Zero => factors = None,
                        crate::necklace::Canon::NonZero { necklace, negative } => {
                            sign ^= negative;
                            fs.push(necklace);
                        }
                    }
                }
                cur = &cur[inner_end + 1..];
            }
            if let Some(fs) = factors {
                if fs.is_empty() {
                    return Err(NecklaceError::Parse(rest.into(), "empty monomial".into()));
                }
                let coeff = if sign { -coeff } else { coeff };
                self.push_term(&mut out, &fs, coeff);
            }
        }
        Ok(out)
    }

    pub fn format_element(&self, e: &BVElement) -> String {
        if e.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in e.iter().enumerate() {
            let neg = c < &rat(0);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let _ = write!(s, "{} * ", format_rat(&mag));
            if m.is_empty() {
                s.push('1');
            } else {
                for (k, n) in m.iter().enumerate() {
                    if k > 0 {
                        s.push(' ');
                    }
                    let _ = write!(s, "({})", self.ops.format_necklace(n));
                }
            }
        }
        s
    }
}

/// The cyclic symmetriser on `n` graded slots: all cyclic rotations with
/// their Koszul signs. Returns `(rotation offset, negative)` pairs.
pub fn cyclic_symmetrizer(n: usize, degrees: &[Parity]) -> Vec<(usize, bool)> {
    assert_eq!(degrees.len(), n);
    (0..n)
        .map(|r| (r, cyclic_rotation_sign(degrees, r)))
        .collect()
}

/// Graded flip of a tensor: `u (x) v -> (-1)^{|u||v|} v (x) u`.
pub fn graded_flip(ops: &NecklaceOps, t: &NecklaceTensor) -> NecklaceTensor {
    let mut out = NecklaceTensor::new();
    for ((l, r), c) in t {
        let sign = (ops.degree(l) * ops.degree(r)).sign();
        crate::necklace::tensor_insert(&mut out, (r.clone(), l.clone()), c * sign);
    }
    out
}

/// `ad_x` on a tensor: `br(x, -) (x) 1 + 1 (x) br(x, -)` with the Koszul
/// sign of moving the degree `|x| - p` operator past the first leg.
pub fn ad_on_tensor(
    ops: &NecklaceOps,
    p: Parity,
    x: &Necklace,
    t: &NecklaceTensor,
) -> Result<NecklaceTensor, NecklaceError> {
    let mut out = NecklaceTensor::new();
    let op_degree = ops.degree(x) + p;
    for ((l, r), c) in t {
        // ad_x (x) 1
        for (n, bc) in ops.bracket_basis(x, l)? {
            crate::necklace::tensor_insert(&mut out, (n, r.clone()), &bc * c);
        }
        // 1 (x) ad_x, crossing the first leg
        let cross = (op_degree * ops.degree(l)).sign();
        for (n, bc) in ops.bracket_basis(x, r)? {
            crate::necklace::tensor_insert(&mut out, (l.clone(), n), &bc * c * &cross);
        }
    }
    Ok(out)
}
