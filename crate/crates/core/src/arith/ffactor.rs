//! Polynomial factorization over finite fields of odd characteristic
//! (squarefree, distinct-degree and Cantor–Zassenhaus equal-degree splitting).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::field::Field;
use super::rng::AlgRng;
use super::upoly::UPoly;

/// `b^e mod m`.
pub fn powmod<F: Field>(b: &UPoly<F::Elem>, e: &BigUint, m: &UPoly<F::Elem>, k: &F) -> UPoly<F::Elem> {
    let b = b.rem(m, k);
    let mut acc = UPoly::one(k).rem(m, k);
    for i in (0..e.bits()).rev() {
        acc = acc.square(k).rem(m, k);
        if e.bit(i) {
            acc = acc.mul(&b, k).rem(m, k);
        }
    }
    acc
}

fn field_order<F: Field>(k: &F) -> BigUint {
    k.order().expect("finite field required")
}

/// `a^(1/p)` in a finite field of characteristic `p`, i.e. `a^(q/p)`.
fn pth_root<F: Field>(a: &F::Elem, k: &F) -> F::Elem {
    let q = field_order(k);
    let p = BigUint::from(k.characteristic());
    k.pow_big(a, &(q / p))
}

/// Squarefree factorization in positive characteristic: pairs `(g, e)` with
/// monic squarefree `g` (not necessarily coprime across distinct `e`, but the
/// product of `g^e` is the monic part of `f`).
pub fn squarefree_ff<F: Field>(f: &UPoly<F::Elem>, k: &F) -> Vec<(UPoly<F::Elem>, u32)> {
    let p = k.characteristic() as usize;
    let mut out = Vec::new();
    sqf_rec(&f.monic(k), 1, p, k, &mut out);
    out
}

fn sqf_rec<F: Field>(f: &UPoly<F::Elem>, mult: u32, p: usize, k: &F, out: &mut Vec<(UPoly<F::Elem>, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let fp = f.derivative(k);
    if fp.is_zero() {
        // f = g(x^p)
        let c: Vec<F::Elem> = f.coeffs().iter().step_by(p).map(|a| pth_root(a, k)).collect();
        let g = UPoly::from_coeffs(k, c);
        sqf_rec(&g, mult * p as u32, p, k, out);
        return;
    }
    let mut c = f.gcd(&fp, k);
    let mut w = f.div_exact(&c, k).unwrap();
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c, k);
        let z = w.div_exact(&y, k).unwrap();
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i * mult));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, k).unwrap();
    }
    if c.degree().unwrap_or(0) > 0 {
        let cc: Vec<F::Elem> = c.coeffs().iter().step_by(p).map(|a| pth_root(a, k)).collect();
        let g = UPoly::from_coeffs(k, cc);
        sqf_rec(&g, mult * p as u32, p, k, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(g_d, d)` where `g_d` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree<F: Field>(f: &UPoly<F::Elem>, k: &F) -> Vec<(UPoly<F::Elem>, usize)> {
    let q = field_order(k);
    let mut out = Vec::new();
    let mut f = f.monic(k);
    let x = UPoly::x(k);
    let mut h = x.rem(&f, k);
    let mut d = 0;
    while f.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, &q, &f, k);
        let g = f.gcd(&h.sub(&x, k), k);
        if g.degree().unwrap_or(0) > 0 {
            f = f.div_exact(&g, k).unwrap();
            h = h.rem(&f, k);
            out.push((g, d));
        }
    }
    if let Some(df) = f.degree() {
        if df > 0 {
            out.push((f, df));
        }
    }
    out
}

/// Split a monic squarefree product of irreducibles of equal degree `d`.
pub fn equal_degree<F: Field>(f: &UPoly<F::Elem>, d: usize, k: &F, rng: &mut AlgRng) -> Vec<UPoly<F::Elem>> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    assert!(k.characteristic() % 2 == 1, "equal-degree splitting needs odd characteristic");
    let q = field_order(k);
    let e = (num_traits::pow(q, d) - BigUint::one()) >> 1;
    loop {
        let a_coeffs: Vec<F::Elem> = (0..n).map(|_| k.random_elem(rng)).collect();
        let a = UPoly::from_coeffs(k, a_coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = f.gcd(&a, k);
        if g.degree().unwrap_or(0) > 0 && g.degree() != f.degree() {
            let mut out = equal_degree(&g, d, k, rng);
            out.extend(equal_degree(&f.div_exact(&g, k).unwrap(), d, k, rng));
            return out;
        }
        let b = powmod(&a, &e, f, k).sub(&UPoly::one(k), k);
        let g = f.gcd(&b, k);
        if g.degree().unwrap_or(0) > 0 && g.degree() != f.degree() {
            let mut out = equal_degree(&g, d, k, rng);
            out.extend(equal_degree(&f.div_exact(&g, k).unwrap(), d, k, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients.
pub fn factor_ff<F: Field>(f: &UPoly<F::Elem>, k: &F) -> Vec<(UPoly<F::Elem>, u32)>
where
    F::Elem: Ord,
{
    assert!(!f.is_zero(), "factor of zero polynomial");
    let mut rng = AlgRng::new(0x5eed_f1e1d);
    let mut out = Vec::new();
    for (g, e) in squarefree_ff(f, k) {
        for (h, d) in distinct_degree(&g, k) {
            for irr in equal_degree(&h, d, k, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    // merge duplicates (squarefree parts at different multiplicities are coprime,
    // but recursion through p-th roots can repeat a factor)
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let mut merged: Vec<(UPoly<F::Elem>, u32)> = Vec::new();
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    merged
}

/// Roots in the field itself (distinct), via the degree-1 part of the factorization.
pub fn roots_ff<F: Field>(f: &UPoly<F::Elem>, k: &F) -> Vec<F::Elem>
where
    F::Elem: Ord,
{
    let mut rng = AlgRng::new(0x2007);
    let mut out = Vec::new();
    for (g, _) in squarefree_ff(f, k) {
        for (h, d) in distinct_degree(&g, k) {
            if d == 1 {
                for lin in equal_degree(&h, 1, k, &mut rng) {
                    out.push(k.neg(&lin.coeffs()[0]));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn is_irreducible_ff<F: Field>(f: &UPoly<F::Elem>, k: &F) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let f = f.monic(k);
    if f.gcd(&f.derivative(k), k).degree() != Some(0) {
        return false;
    }
    let dd = distinct_degree(&f, k);
    dd.len() == 1 && dd[0].1 == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::PrimeField;

    fn poly(k: &PrimeField, c: &[u64]) -> UPoly<u64> {
        UPoly::from_coeffs(k, c.to_vec())
    }

    #[test]
    fn factors_multiply_back() {
        let k = PrimeField::new(7);
        let mut rng = AlgRng::new(3);
        for _ in 0..40 {
            let n = 1 + rng.below(12) as usize;
            let mut c: Vec<u64> = (0..n).map(|_| rng.below(7)).collect();
            c.push(1);
            let f = poly(&k, &c);
            let fac = factor_ff(&f, &k);
            let mut prod = UPoly::one(&k);
            for (g, e) in &fac {
                assert!(is_irreducible_ff(g, &k));
                prod = prod.mul(&g.pow(*e, &k), &k);
            }
            assert_eq!(prod, f);
        }
    }

    #[test]
    fn pth_power_input() {
        let k = PrimeField::new(3);
        // (x+1)^3 * (x^2+1)^6 = (x^3+1) * (x^6+1)^2
        let a = poly(&k, &[1, 1]).pow(3, &k);
        let b = poly(&k, &[1, 0, 1]).pow(6, &k);
        let f = a.mul(&b, &k);
        let fac = factor_ff(&f, &k);
        assert_eq!(fac, vec![(poly(&k, &[1, 1]), 3), (poly(&k, &[1, 0, 1]), 6)]);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let k = PrimeField::new(11);
        let f = poly(&k, &[10, 0, 1]).mul(&poly(&k, &[8, 1]), &k); // (x^2-1)(x-3)
        assert_eq!(roots_ff(&f, &k), vec![1, 3, 10]);
    }
}
