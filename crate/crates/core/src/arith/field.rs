//! Field abstraction shared by every exact algorithm in the crate.
//!
//! Fields are passed around as context objects; elements carry no reference
//! to their field. Every implementation keeps elements in a canonical form so
//! that `==` on elements is field equality.

use core::fmt::Debug;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rng::AlgRng;

pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// `None` when the denominator is not invertible (positive characteristic).
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// 0 for fields of characteristic zero.
    fn characteristic(&self) -> u64;
    /// Number of elements for finite fields.
    fn order(&self) -> Option<BigUint>;
    /// Some element, used for randomized splitting and generic shifts.
    fn random_elem(&self, rng: &mut AlgRng) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
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
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<BigUint> {
        None
    }
    fn random_elem(&self, rng: &mut AlgRng) -> BigRational {
        BigRational::from_integer(BigInt::from(rng.below(41) as i64 - 20))
    }
}

/// The prime field F_p for an odd or even word-sized prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime; primality is the caller's responsibility.
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "prime field needs p >= 2");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn reduce_big(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            let t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            let t = s0 - q * s1;
            s0 = s1;
            s1 = t;
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(s0))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce_big(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_big(q.denom());
        let n = self.reduce_big(q.numer());
        self.inv(&d).map(|di| self.mul_raw(n, di))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<BigUint> {
        Some(BigUint::from(self.p))
    }
    fn random_elem(&self, rng: &mut AlgRng) -> u64 {
        rng.below(self.p)
    }
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// True when the rational `q` is the square of a rational.
pub fn is_rational_square(q: &BigRational) -> bool {
    if q.is_zero() {
        return true;
    }
    q.numer().sign() == Sign::Plus && exact_isqrt(q.numer()).is_some() && exact_isqrt(q.denom()).is_some()
}

/// Squarefree representative of the class of a nonzero rational in Q*/Q*^2.
pub fn square_class(q: &BigRational) -> BigInt {
    assert!(!q.is_zero(), "square class of zero");
    let prod = q.numer() * q.denom();
    let sign = if prod.is_negative() { -1 } else { 1 };
    let n = prod.abs().to_biguint().expect("positive");
    let mut out = BigUint::one();
    for (p, e) in super::intfac::factorize(&n) {
        if e % 2 == 1 {
            out *= &p;
        }
    }
    BigInt::from(sign) * BigInt::from(out)
}
