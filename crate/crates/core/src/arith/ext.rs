//! Simple algebraic extensions `F[t]/(h(t))` with `h` monic irreducible.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::field::Field;
use super::rng::AlgRng;
use super::upoly::UPoly;

struct ExtData<F: Field> {
    base: F,
    modulus: UPoly<F::Elem>,
}

/// Elements are reduced polynomials of degree `< deg h`.
pub struct AlgExt<F: Field> {
    d: Arc<ExtData<F>>,
}

impl<F: Field> Clone for AlgExt<F> {
    fn clone(&self) -> Self {
        AlgExt { d: self.d.clone() }
    }
}

impl<F: Field> fmt::Debug for AlgExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgExt").field("modulus", &self.d.modulus).finish()
    }
}

impl<F: Field + PartialEq> PartialEq for AlgExt<F> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.d, &o.d) || (self.d.base == o.d.base && self.d.modulus == o.d.modulus)
    }
}

impl<F: Field> AlgExt<F> {
    /// `h` must be irreducible over `base`; it is made monic here.
    pub fn new(base: F, h: UPoly<F::Elem>) -> Self {
        assert!(h.degree().is_some_and(|d| d >= 1), "extension modulus must have positive degree");
        let modulus = h.monic(&base);
        AlgExt { d: Arc::new(ExtData { base, modulus }) }
    }

    pub fn base(&self) -> &F {
        &self.d.base
    }

    pub fn modulus(&self) -> &UPoly<F::Elem> {
        &self.d.modulus
    }

    pub fn degree(&self) -> usize {
        self.d.modulus.degree().unwrap()
    }

    pub fn generator(&self) -> UPoly<F::Elem> {
        self.reduce(UPoly::x(&self.d.base))
    }

    pub fn embed(&self, a: &F::Elem) -> UPoly<F::Elem> {
        UPoly::constant(&self.d.base, a.clone())
    }

    pub fn reduce(&self, p: UPoly<F::Elem>) -> UPoly<F::Elem> {
        if p.degree().is_some_and(|d| d >= self.degree()) {
            p.rem(&self.d.modulus, &self.d.base)
        } else {
            p
        }
    }

    /// Base-field element if `a` lies in the base field.
    pub fn as_base(&self, a: &UPoly<F::Elem>) -> Option<F::Elem> {
        match a.degree() {
            None => Some(self.d.base.zero()),
            Some(0) => Some(a.coeffs()[0].clone()),
            _ => None,
        }
    }

    /// Coefficient vector of length `deg h`.
    pub fn to_vec(&self, a: &UPoly<F::Elem>) -> Vec<F::Elem> {
        (0..self.degree()).map(|i| a.coeff(&self.d.base, i)).collect()
    }

    pub fn from_vec(&self, v: Vec<F::Elem>) -> UPoly<F::Elem> {
        self.reduce(UPoly::from_coeffs(&self.d.base, v))
    }

    /// Matrix of multiplication by `a` in the power basis (row `i` is `a * t^i`).
    pub fn mul_matrix(&self, a: &UPoly<F::Elem>) -> Vec<Vec<F::Elem>> {
        let t = self.generator();
        let mut cur = a.clone();
        let mut rows = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            rows.push(self.to_vec(&cur));
            cur = self.mul(&cur, &t);
        }
        rows
    }
}

impl<F: Field> Field for AlgExt<F> {
    type Elem = UPoly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        UPoly::zero()
    }
    fn one(&self) -> Self::Elem {
        UPoly::one(&self.d.base)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b, &self.d.base)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.sub(b, &self.d.base)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.d.base)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(a.mul(b, &self.d.base))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_zero() {
            return None;
        }
        let (g, s, _) = a.xgcd(&self.d.modulus, &self.d.base);
        assert!(g.degree() == Some(0), "extension modulus is reducible");
        Some(self.reduce(s))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        UPoly::constant(&self.d.base, self.d.base.from_int(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        self.d.base.from_rational(q).map(|c| UPoly::constant(&self.d.base, c))
    }
    fn characteristic(&self) -> u64 {
        self.d.base.characteristic()
    }
    fn order(&self) -> Option<BigUint> {
        self.d.base.order().map(|q| num_traits::pow(q, self.degree()))
    }
    fn random_elem(&self, rng: &mut AlgRng) -> Self::Elem {
        let v = (0..self.degree()).map(|_| self.d.base.random_elem(rng)).collect();
        self.from_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals};
    use alloc::vec;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sqrt2_arithmetic() {
        let k = AlgExt::new(Rationals, UPoly::from_coeffs(&Rationals, vec![q(-2), q(0), q(1)]));
        let a = k.generator();
        assert_eq!(k.mul(&a, &a), k.from_i64(2));
        let b = k.add(&a, &k.one());
        let bi = k.inv(&b).unwrap();
        assert_eq!(k.mul(&b, &bi), k.one());
    }

    #[test]
    fn f9_has_order_nine_and_inverses() {
        let f3 = PrimeField::new(3);
        let k = AlgExt::new(f3, UPoly::from_coeffs(&f3, vec![1, 0, 1]));
        assert_eq!(k.order().unwrap(), BigUint::from(9u32));
        let mut count = 0;
        for a0 in 0..3 {
            for a1 in 0..3 {
                let a = k.from_vec(vec![a0, a1]);
                if let Some(ai) = k.inv(&a) {
                    assert!(k.is_one(&k.mul(&a, &ai)));
                    count += 1;
                }
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn tower_over_extension() {
        let k = AlgExt::new(Rationals, UPoly::from_coeffs(&Rationals, vec![q(-2), q(0), q(1)]));
        // K(sqrt(sqrt 2)) = K[u]/(u^2 - sqrt2)
        let s2 = k.generator();
        let l = AlgExt::new(k.clone(), UPoly::from_coeffs(&k, vec![k.neg(&s2), k.zero(), k.one()]));
        let u = l.generator();
        let u4 = l.pow(&u, 4);
        assert_eq!(u4, l.from_i64(2));
    }
}
