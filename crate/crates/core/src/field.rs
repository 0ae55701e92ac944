//! Ground fields: prime fields `F_p` and the rationals.

use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A field together with its element type.
///
/// Fields are runtime descriptors (a prime field knows its characteristic),
/// so every arithmetic operation goes through `&self`.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, value: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `num / den` as a field element, `None` when `den` vanishes in the field.
    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;

    /// Number of elements, `None` for infinite fields.
    fn order(&self) -> Option<u64>;

    /// Element with index `k` in a fixed enumeration of the field
    /// (all of it for finite fields, small integers otherwise).
    fn enumerate(&self, k: u64) -> Self::Elem;

    fn sign(&self, odd: bool) -> Self::Elem {
        if odd {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, Error> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(p as u64));
        }
        Ok(Fp { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let mut r = v % &p;
        if r.is_negative() {
            r += &p;
        }
        let (_, digits) = r.to_u32_digits();
        digits.first().copied().unwrap_or(0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for Fp {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // a^(p-2)
        let p = self.p as u64;
        let mut base = *a as u64;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(acc as u32)
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<u32> {
        let d = self.reduce_big(den);
        let n = self.reduce_big(num);
        Some(self.mul(&n, &self.inv(&d)?))
    }

    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }

    fn enumerate(&self, k: u64) -> u32 {
        (k % self.p as u64) as u32
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, value: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(value))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn enumerate(&self, k: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let half = k.div_ceil(2) as i64;
        self.from_i64(if k % 2 == 1 { half } else { -half })
    }
}
