//! Truncated power series `c_0 + c_1 u + ... + O(u^n)` as coefficient vectors.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::upoly::UPoly;

pub fn truncate<F: Field>(a: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    let mut v: Vec<F::Elem> = a.iter().take(n).cloned().collect();
    v.resize(n, k.zero());
    v
}

pub fn add<F: Field>(a: &[F::Elem], b: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    let (a, b) = (truncate(a, n, k), truncate(b, n, k));
    a.iter().zip(&b).map(|(x, y)| k.add(x, y)).collect()
}

pub fn sub<F: Field>(a: &[F::Elem], b: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    let (a, b) = (truncate(a, n, k), truncate(b, n, k));
    a.iter().zip(&b).map(|(x, y)| k.sub(x, y)).collect()
}

pub fn scale<F: Field>(a: &[F::Elem], c: &F::Elem, k: &F) -> Vec<F::Elem> {
    a.iter().map(|x| k.mul(x, c)).collect()
}

pub fn mul<F: Field>(a: &[F::Elem], b: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    let mut out = vec![k.zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

/// `1 / a`; `None` if `a(0) = 0`.
pub fn inv<F: Field>(a: &[F::Elem], n: usize, k: &F) -> Option<Vec<F::Elem>> {
    let a0 = k.inv(a.first()?)?;
    let mut out = vec![k.zero(); n];
    if n == 0 {
        return Some(out);
    }
    out[0] = a0.clone();
    for i in 1..n {
        let mut s = k.zero();
        for j in 1..=i.min(a.len() - 1) {
            s = k.add(&s, &k.mul(&a[j], &out[i - j]));
        }
        out[i] = k.neg(&k.mul(&s, &a0));
    }
    Some(out)
}

/// `p(s(u))` by Horner's rule.
pub fn compose_poly<F: Field>(p: &UPoly<F::Elem>, s: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    let mut acc = vec![k.zero(); n];
    for c in p.coeffs().iter().rev() {
        acc = mul(&acc, s, n, k);
        if n > 0 {
            acc[0] = k.add(&acc[0], c);
        }
    }
    acc
}

/// `a(s(u))` for a series `s` without constant term.
pub fn compose<F: Field>(a: &[F::Elem], s: &[F::Elem], n: usize, k: &F) -> Vec<F::Elem> {
    debug_assert!(s.first().is_none_or(|c| k.is_zero(c)));
    let p = UPoly::from_coeffs(k, truncate(a, n, k));
    compose_poly(&p, s, n, k)
}

/// Compositional inverse of `s` with `s(0) = 0`, `s'(0) != 0`.
pub fn revert<F: Field>(s: &[F::Elem], n: usize, k: &F) -> Option<Vec<F::Elem>> {
    if !s.first().is_none_or(|c| k.is_zero(c)) {
        return None;
    }
    let s1 = k.inv(s.get(1)?)?;
    let mut r = vec![k.zero(); n];
    if n < 2 {
        return Some(r);
    }
    r[1] = s1.clone();
    for i in 2..n {
        let e = compose(s, &r, i + 1, k);
        r[i] = k.neg(&k.mul(&e[i], &s1));
    }
    Some(r)
}

/// Index of the first nonzero coefficient.
pub fn order<F: Field>(a: &[F::Elem], k: &F) -> Option<usize> {
    a.iter().position(|c| !k.is_zero(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Rationals;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn inverse_of_one_minus_u() {
        let k = Rationals;
        let a = vec![q(1), q(-1)];
        assert_eq!(inv(&a, 5, &k).unwrap(), vec![q(1); 5]);
    }

    #[test]
    fn reversion_round_trip() {
        let k = Rationals;
        let s = vec![q(0), q(2), q(3), q(-1), q(5)];
        let r = revert(&s, 6, &k).unwrap();
        let id = compose(&s, &r, 6, &k);
        assert_eq!(id, vec![q(0), q(1), q(0), q(0), q(0), q(0)]);
        let id2 = compose(&r, &s, 6, &k);
        assert_eq!(id2, id);
    }

    #[test]
    fn order_and_products() {
        let k = Rationals;
        let a = vec![q(0), q(0), q(3)];
        let b = vec![q(0), q(1), q(1)];
        let c = mul(&a, &b, 6, &k);
        assert_eq!(order(&c, &k), Some(3));
        assert_eq!(order(&vec![q(0); 4], &k), None);
    }
}
