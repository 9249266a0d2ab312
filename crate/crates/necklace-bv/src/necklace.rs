//! Graded cyclic words (necklaces) modulo the graded cyclic relation,
//! canonicalization with sign tracking, the necklace bracket, and the
//! cobracket.
//!
//! A closed path `a_1 .. a_n` is identified with its rotations up to the
//! sign `(-1)^{eps}` where `eps` is the product of the degrees of the two
//! complementary segments. A word equal to minus itself under some
//! rotation is zero and is never stored.

use crate::grading::Parity;
use crate::quiver::{DArrow, DoubledQuiver, VertexId};
use crate::rat::{format_rat, parse_rat, rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// A composable (not necessarily closed) path in the doubled quiver,
/// or the constant path at a vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Path {
    Constant(VertexId),
    Word(Vec<DArrow>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("open path: ends at a different vertex than it starts")]
    OpenPath,
    #[error("non-composable path at step {0}")]
    NotComposable(usize),
    #[error("empty word")]
    EmptyWord,
    #[error("index {0} out of range for path of length {1}")]
    IndexOutOfRange(usize, usize),
    #[error("arrow does not belong to this quiver")]
    MismatchedQuiver,
    #[error("parse error at `{0}`: {1}")]
    Parse(String, String),
    #[error("path length {0} exceeds the configured maximum {1}")]
    TooLong(usize, usize),
}

/// Enforce a maximum word length over a sum (the configurable truncation
/// of the infinite-dimensional necklace space).
pub fn check_max_len(sum: &NecklaceSum, max_len: usize) -> Result<(), NecklaceError> {
    for n in sum.keys() {
        if n.len() > max_len {
            return Err(NecklaceError::TooLong(n.len(), max_len));
        }
    }
    Ok(())
}

/// A necklace in canonical form: the lexicographically minimal rotation
/// of a closed word, or a constant path. The zero necklace is represented
/// by absence from sums, never by a value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Necklace {
    Constant(VertexId),
    Word(Vec<DArrow>),
}

impl Necklace {
    pub fn len(&self) -> usize {
        match self {
            Necklace::Constant(_) => 0,
            Necklace::Word(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn word(&self) -> &[DArrow] {
        match self {
            Necklace::Constant(_) => &[],
            Necklace::Word(w) => w,
        }
    }
}

/// A finite rational linear combination of necklaces. No zero
/// coefficients are stored.
pub type NecklaceSum = BTreeMap<Necklace, Rat>;

/// A finite sum of ordered tensor pairs of necklaces.
pub type NecklaceTensor = BTreeMap<(Necklace, Necklace), Rat>;

pub fn sum_insert(sum: &mut NecklaceSum, n: Necklace, c: Rat) {
    if c.is_zero() {
        return;
    }
    match sum.get_mut(&n) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                sum.remove(&n);
            }
        }
        None => {
            sum.insert(n, c);
        }
    }
}

pub fn tensor_insert(t: &mut NecklaceTensor, key: (Necklace, Necklace), c: Rat) {
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

pub fn sum_scale(sum: &NecklaceSum, c: &Rat) -> NecklaceSum {
    if c.is_zero() {
        return NecklaceSum::new();
    }
    sum.iter().map(|(k, v)| (k.clone(), v * c)).collect()
}

pub fn sum_add(a: &NecklaceSum, b: &NecklaceSum) -> NecklaceSum {
    let mut out = a.clone();
    for (k, v) in b {
        sum_insert(&mut out, k.clone(), v.clone());
    }
    out
}

/// Result of canonicalizing a closed path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canon {
    Zero,
    NonZero { necklace: Necklace, negative: bool },
}

/// Operations on necklaces over a fixed doubled quiver. All values are
/// immutable and all operations are pure.
#[derive(Clone, Debug)]
pub struct NecklaceOps<'q> {
    pub quiver: &'q DoubledQuiver,
}

impl<'q> NecklaceOps<'q> {
    pub fn new(quiver: &'q DoubledQuiver) -> Self {
        NecklaceOps { quiver }
    }

    fn check_arrows(&self, w: &[DArrow]) -> Result<(), NecklaceError> {
        if w.iter().all(|d| self.quiver.contains(*d)) {
            Ok(())
        } else {
            Err(NecklaceError::MismatchedQuiver)
        }
    }

    /// Validate composability and closedness of a word.
    pub fn validate_closed(&self, w: &[DArrow]) -> Result<(), NecklaceError> {
        if w.is_empty() {
            return Err(NecklaceError::EmptyWord);
        }
        self.check_arrows(w)?;
        for i in 0..w.len() - 1 {
            if self.quiver.target(w[i]) != self.quiver.source(w[i + 1]) {
                return Err(NecklaceError::NotComposable(i));
            }
        }
        if self.quiver.target(w[w.len() - 1]) != self.quiver.source(w[0]) {
            return Err(NecklaceError::OpenPath);
        }
        Ok(())
    }

    pub fn degree(&self, n: &Necklace) -> Parity {
        self.word_degree(n.word())
    }

    pub fn word_degree(&self, w: &[DArrow]) -> Parity {
        w.iter()
            .fold(Parity::EVEN, |acc, d| acc + self.quiver.degree(*d))
    }

    /// The relative rotation sign exponent `eps_{kl}` of a closed word:
    /// the product of the degrees of `a_k .. a_{l-1}` and `a_l .. a_{k-1}`
    /// (cyclically, 0-based).
    pub fn epsilon(&self, w: &[DArrow], k: usize, l: usize) -> Result<Parity, NecklaceError> {
        let n = w.len();
        if k >= n || l >= n {
            return Err(NecklaceError::IndexOutOfRange(k.max(l), n));
        }
        let seg = |from: usize, to: usize| -> Parity {
            // degree of a_from .. a_{to-1} cyclically
            let mut d = Parity::EVEN;
            let mut i = from;
            while i != to {
                d += self.quiver.degree(w[i]);
                i = (i + 1) % n;
            }
            d
        };
        Ok(seg(k, l) * seg(l, k))
    }

    /// `A_{ij}`: the path `a_{i+1} .. a_{j-1}` of the closed word, or the
    /// constant path at `t(a_i)` when `j = i+1 mod n`.
    pub fn segment(&self, w: &[DArrow], i: usize, j: usize) -> Result<Path, NecklaceError> {
        let n = w.len();
        if i >= n || j >= n {
            return Err(NecklaceError::IndexOutOfRange(i.max(j), n));
        }
        let len = (j + n - i - 1) % n;
        if len == 0 {
            return Ok(Path::Constant(self.quiver.target(w[i])));
        }
        let mut out = Vec::with_capacity(len);
        let mut pos = (i + 1) % n;
        for _ in 0..len {
            out.push(w[pos]);
            pos = (pos + 1) % n;
        }
        Ok(Path::Word(out))
    }

    /// Canonicalize a closed path: minimal rotation under the arrow order,
    /// earliest position on ties, accumulated rotation sign. Returns
    /// `Zero` exactly when some rotation fixes the word with sign -1.
    pub fn canonicalize(&self, path: &Path) -> Result<Canon, NecklaceError> {
        let w = match path {
            Path::Constant(v) => {
                return Ok(Canon::NonZero {
                    necklace: Necklace::Constant(*v),
                    negative: false,
                })
            }
            Path::Word(w) => w,
        };
        self.validate_closed(w)?;
        let n = w.len();
        let rotation = |k: usize| -> Vec<DArrow> {
            let mut r = Vec::with_capacity(n);
            r.extend_from_slice(&w[k..]);
            r.extend_from_slice(&w[..k]);
            r
        };
        let mut best = 0usize;
        let mut best_word = rotation(0);
        for k in 1..n {
            let cand = rotation(k);
            if cand < best_word {
                best_word = cand;
                best = k;
            }
        }
        // Zero detection: any other rotation equal to the minimal word
        // whose relative sign to it is -1 kills the necklace.
        for k in 0..n {
            if k == best {
                continue;
            }
            if rotation(k) == best_word && self.epsilon(w, best, k)?.is_odd() {
                return Ok(Canon::Zero);
            }
        }
        let negative = self.epsilon(w, 0, best)?.is_odd();
        Ok(Canon::NonZero {
            necklace: Necklace::Word(best_word),
            negative,
        })
    }

    /// Canonicalize and fold a signed coefficient into a sum.
    fn accumulate(&self, sum: &mut NecklaceSum, path: &Path, coeff: Rat) -> Result<(), NecklaceError> {
        match self.canonicalize(path)? {
            Canon::Zero => Ok(()),
            Canon::NonZero { necklace, negative } => {
                let c = if negative { -coeff } else { coeff };
                sum_insert(sum, necklace, c);
                Ok(())
            }
        }
    }

    /// Concatenate two segment paths at matching endpoints. Constant
    /// paths act as local units.
    fn concat(&self, a: &Path, b: &Path) -> Path {
        match (a, b) {
            (Path::Constant(_), Path::Constant(v)) => Path::Constant(*v),
            (Path::Constant(_), p) | (p, Path::Constant(_)) => p.clone(),
            (Path::Word(u), Path::Word(v)) => {
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                Path::Word(w)
            }
        }
    }

    /// The necklace bracket of two necklace representatives: glue at every
    /// pair of arrows in involution with the indicator sign. Words are
    /// consumed as given (rooted at their first letter); rotating an input
    /// rescales the result by the relative rotation sign.
    pub fn bracket_basis(&self, x: &Necklace, y: &Necklace) -> Result<NecklaceSum, NecklaceError> {
        let mut out = NecklaceSum::new();
        let (a, b) = match (x, y) {
            (Necklace::Word(a), Necklace::Word(b)) => (a, b),
            _ => return Ok(out), // zero if either has length 0
        };
        self.check_arrows(a)?;
        self.check_arrows(b)?;
        for i in 0..a.len() {
            for j in 0..b.len() {
                let ind = self.quiver.indicator(a[i], b[j]);
                if ind.is_zero() {
                    continue;
                }
                let aii = self.segment(a, i, i)?;
                let bjj = self.segment(b, j, j)?;
                let mut exp = self.epsilon(a, 0, i)? + self.epsilon(b, 0, j)?;
                exp += self.path_degree(&aii) * self.quiver.degree(b[j]);
                let coeff = exp.sign() * ind;
                let glued = self.concat(&aii, &bjj);
                self.accumulate(&mut out, &glued, coeff)?;
            }
        }
        Ok(out)
    }

    fn path_degree(&self, p: &Path) -> Parity {
        match p {
            Path::Constant(_) => Parity::EVEN,
            Path::Word(w) => self.word_degree(w),
        }
    }

    /// Bilinear extension of the bracket to sums.
    pub fn bracket(&self, x: &NecklaceSum, y: &NecklaceSum) -> Result<NecklaceSum, NecklaceError> {
        let mut out = NecklaceSum::new();
        for (nx, cx) in x {
            for (ny, cy) in y {
                let term = self.bracket_basis(nx, ny)?;
                for (n, c) in term {
                    sum_insert(&mut out, n, c * cx * cy);
                }
            }
        }
        Ok(out)
    }

    /// The cobracket of a necklace representative (word consumed as given):
    /// the half-weighted double sum over ordered pairs of arrows in
    /// involution, splitting the word in two. Both tensor legs are
    /// canonicalized.
    pub fn cobracket_basis(&self, x: &Necklace) -> Result<NecklaceTensor, NecklaceError> {
        let mut out = NecklaceTensor::new();
        let w = match x {
            Necklace::Word(w) if w.len() >= 2 => w,
            _ => return Ok(out), // zero if length <= 1
        };
        self.check_arrows(w)?;
        let half = crate::rat::frac(1, 2);
        for i in 0..w.len() {
            for j in 0..w.len() {
                if i == j {
                    continue;
                }
                let ind = self.quiver.indicator(w[i], w[j]);
                if ind.is_zero() {
                    continue;
                }
                let aij = self.segment(w, i, j)?;
                let aji = self.segment(w, j, i)?;
                let mut exp = self.epsilon(w, 0, i)?;
                exp += self.path_degree(&aij) * self.quiver.degree(w[j]);
                let coeff = &half * exp.sign() * ind;
                let (cl, cr) = (self.canonicalize(&aij)?, self.canonicalize(&aji)?);
                if let (
                    Canon::NonZero { necklace: nl, negative: sl },
                    Canon::NonZero { necklace: nr, negative: sr },
                ) = (cl, cr)
                {
                    let c = if sl ^ sr { -coeff } else { coeff };
                    tensor_insert(&mut out, (nl, nr), c);
                }
            }
        }
        Ok(out)
    }

    /// Linear extension of the cobracket.
    pub fn cobracket(&self, x: &NecklaceSum) -> Result<NecklaceTensor, NecklaceError> {
        let mut out = NecklaceTensor::new();
        for (n, c) in x {
            for (key, v) in self.cobracket_basis(n)? {
                tensor_insert(&mut out, key, v * c);
            }
        }
        Ok(out)
    }

    // ------------------------------------------------------------------
    // Text syntax: words as whitespace-separated arrow names with `~` for
    // doubles and `e(v)` for constants; sums as `c1 * w1 + c2 * w2`.
    // ------------------------------------------------------------------

    /// Parse a single word (one necklace term) and canonicalize it.
    pub fn parse_word(&self, s: &str) -> Result<Path, NecklaceError> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.is_empty() {
            return Err(NecklaceError::Parse(s.into(), "empty word".into()));
        }
        if toks.len() == 1 {
            if let Some(v) = parse_constant(self.quiver, toks[0]) {
                return Ok(Path::Constant(v?));
            }
        }
        let mut arrows = Vec::with_capacity(toks.len());
        for t in &toks {
            if parse_constant(self.quiver, t).is_some() {
                return Err(NecklaceError::Parse(
                    (*t).into(),
                    "constant paths cannot appear inside a word".into(),
                ));
            }
            let d = self
                .quiver
                .darrow_by_name(t)
                .ok_or_else(|| NecklaceError::Parse((*t).into(), "unknown arrow".into()))?;
            arrows.push(d);
        }
        Ok(Path::Word(arrows))
    }

    /// Parse a sum `c1 * w1 + c2 * w2 - ...`; `0` is the empty sum.
    pub fn parse_sum(&self, s: &str) -> Result<NecklaceSum, NecklaceError> {
        let mut out = NecklaceSum::new();
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for (sign, term) in split_signed_terms(s) {
            let (coeff, word) = match term.split_once('*') {
                Some((c, w)) => (
                    parse_rat(c).map_err(|e| NecklaceError::Parse(c.trim().into(), e))?,
                    w,
                ),
                None => (rat(1), term),
            };
            let coeff = if sign { -coeff } else { coeff };
            let path = self.parse_word(word)?;
            self.accumulate(&mut out, &path, coeff)?;
        }
        Ok(out)
    }

    pub fn format_necklace(&self, n: &Necklace) -> String {
        match n {
            Necklace::Constant(v) => format!("e({})", self.quiver.base().vertex_name(*v)),
            Necklace::Word(w) => {
                let mut s = String::new();
                for (i, d) in w.iter().enumerate() {
                    if i > 0 {
                        s.push(' ');
                    }
                    s.push_str(&self.quiver.darrow_name(*d));
                }
                s
            }
        }
    }

    pub fn format_sum(&self, sum: &NecklaceSum) -> String {
        if sum.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (n, c)) in sum.iter().enumerate() {
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
            let _ = write!(s, "{} * {}", format_rat(&mag), self.format_necklace(n));
        }
        s
    }

    pub fn format_tensor(&self, t: &NecklaceTensor) -> String {
        if t.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, ((l, r), c)) in t.iter().enumerate() {
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
            let _ = write!(
                s,
                "{} * ({}) @ ({})",
                format_rat(&mag),
                self.format_necklace(l),
                self.format_necklace(r)
            );
        }
        s
    }
}

fn parse_constant(
    quiver: &DoubledQuiver,
    tok: &str,
) -> Option<Result<VertexId, NecklaceError>> {
    let inner = tok.strip_prefix("e(")?.strip_suffix(')')?;
    Some(
        quiver
            .base()
            .vertex_id(inner.trim())
            .ok_or_else(|| NecklaceError::Parse(tok.into(), "unknown vertex".into())),
    )
}

/// Split `a + b - c` into signed top-level terms (sign: true = negative).
/// A leading `-` negates the first term; `*` coefficients keep their own
/// internal sign.
pub(crate) fn split_signed_terms(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut start = 0usize;
    let mut neg = false;
    let mut i = 0usize;
    // a '+'/'-' splits terms only when surrounded by whitespace, so that
    // negative coefficients like `-3/2 * w` survive inside a term.
    while i < bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-')
            && i > start
            && i + 1 < bytes.len()
            && bytes[i - 1].is_ascii_whitespace()
            && bytes[i + 1].is_ascii_whitespace()
        {
            out.push((neg, s[start..i].trim()));
            neg = c == '-';
            start = i + 1;
        }
        i += 1;
    }
    out.push((neg, s[start..].trim()));
    out
}
