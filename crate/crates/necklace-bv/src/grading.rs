//! Z2 degrees and Koszul sign bookkeeping.

use crate::rat::{rat, Rat};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

/// A Z2 degree. `EVEN` is 0, `ODD` is 1; addition is XOR, product is AND.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Parity(pub bool);

impl Parity {
    pub const EVEN: Parity = Parity(false);
    pub const ODD: Parity = Parity(true);

    pub fn from_usize(n: usize) -> Parity {
        Parity(n % 2 == 1)
    }

    pub fn is_odd(self) -> bool {
        self.0
    }

    /// `(-1)^self` as an exact rational.
    pub fn sign(self) -> Rat {
        if self.0 {
            rat(-1)
        } else {
            rat(1)
        }
    }

    /// Flip a running sign by `(-1)^self`.
    pub fn negate_if_odd(self, acc: &mut bool) {
        if self.0 {
            *acc = !*acc;
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity(self.0 ^ rhs.0)
    }
}

impl AddAssign for Parity {
    fn add_assign(&mut self, rhs: Parity) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        Parity(self.0 & rhs.0)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { 1 } else { 0 })
    }
}

/// Koszul sign (as a bool: true = negative) for extracting the element at
/// position `i` of a graded word to the front, given the parities of all
/// letters. The letter crosses everything before it.
pub fn extract_one_sign(parities: &[Parity], i: usize) -> bool {
    if !parities[i].is_odd() {
        return false;
    }
    parities[..i].iter().filter(|p| p.is_odd()).count() % 2 == 1
}

/// Koszul sign for extracting positions `i < j` to the front, in order
/// `(x_i, x_j)`, with the rest kept in place.
pub fn extract_two_sign(parities: &[Parity], i: usize, j: usize) -> bool {
    debug_assert!(i < j);
    let mut neg = extract_one_sign(parities, i);
    if parities[j].is_odd() {
        let crossed = parities[..j]
            .iter()
            .enumerate()
            .filter(|(k, p)| *k != i && p.is_odd())
            .count();
        if crossed % 2 == 1 {
            neg = !neg;
        }
    }
    neg
}

/// Koszul sign of the left rotation x_1 ... x_n -> x_2 ... x_n x_1,
/// iterated `steps` times.
pub fn cyclic_rotation_sign(parities: &[Parity], steps: usize) -> bool {
    let n = parities.len();
    let mut neg = false;
    let mut ps: Vec<Parity> = parities.to_vec();
    for _ in 0..steps % n.max(1) {
        let first = ps[0];
        let rest_odd = ps[1..].iter().filter(|p| p.is_odd()).count() % 2 == 1;
        if first.is_odd() && rest_odd {
            neg = !neg;
        }
        ps.rotate_left(1);
    }
    neg
}
