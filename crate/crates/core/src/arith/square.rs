//! Squares in `k̄[t]`: a polynomial is a constant times a square exactly when
//! every multiplicity in its squarefree factorization is even.

use alloc::vec::Vec;

use super::ffactor::squarefree_ff;
use super::field::Field;
use super::mpoly::MPoly;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `p = c * s^2` with `s` monic over the base field; `sqrt(c)` may need a
/// quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareWitness<E> {
    pub c: E,
    pub s: UPoly<E>,
}

fn squarefree_parts<F: Field>(p: &UPoly<F::Elem>, k: &F) -> Vec<(UPoly<F::Elem>, u32)> {
    if k.characteristic() == 0 {
        p.squarefree_decomposition(k).1
    } else {
        squarefree_ff(p, k)
    }
}

pub fn is_square_in_closure<F: Field>(p: &UPoly<F::Elem>, k: &F) -> Result<Option<SquareWitness<F::Elem>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = p.lc().unwrap().clone();
    if p.degree() == Some(0) {
        return Ok(Some(SquareWitness { c, s: UPoly::one(k) }));
    }
    let parts = squarefree_parts(p, k);
    if parts.iter().any(|(_, e)| e % 2 == 1) {
        return Ok(None);
    }
    let s = parts.iter().fold(UPoly::one(k), |acc, (g, e)| acc.mul(&g.pow(e / 2, k), k));
    Ok(Some(SquareWitness { c, s }))
}

/// Same test for a polynomial in which at most one variable occurs.
pub fn is_square_in_closure_mpoly<F: Field>(p: &MPoly<F::Elem>, k: &F) -> Result<Option<(usize, SquareWitness<F::Elem>)>> {
    let sup = p.support_vars();
    if sup.len() > 1 {
        return Err(Error::Invalid(alloc::string::String::from("polynomial is not univariate")));
    }
    let var = sup.first().copied().unwrap_or(0);
    let u = p.to_upoly(var, k).unwrap();
    Ok(is_square_in_closure(&u, k)?.map(|w| (var, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn qp(c: &[i64]) -> UPoly<BigRational> {
        UPoly::from_coeffs(&Rationals, c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn documented_examples() {
        let k = Rationals;
        let y2p1 = qp(&[1, 0, 1]);
        let a = y2p1.square(&k);
        assert!(is_square_in_closure(&a, &k).unwrap().is_some());
        let b = qp(&[0, 1]).mul(&a, &k);
        assert!(is_square_in_closure(&b, &k).unwrap().is_none());
        let c = qp(&[2]).mul(&qp(&[1, 1]).square(&k), &k).mul(&qp(&[2, 0, 1]).square(&k), &k);
        let w = is_square_in_closure(&c, &k).unwrap().unwrap();
        assert_eq!(w.c, BigRational::from_integer(2.into()));
        assert_eq!(w.s.square(&k).scale(&w.c, &k), c);
        assert_eq!(is_square_in_closure(&UPoly::zero(), &k), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn characteristic_p() {
        let k = PrimeField::new(5);
        let g = UPoly::from_coeffs(&k, alloc::vec![1, 2, 0, 1]);
        let sq = g.square(&k).scale(&3, &k);
        let w = is_square_in_closure(&sq, &k).unwrap().unwrap();
        assert_eq!(w.s.square(&k).scale(&w.c, &k), sq);
        // x^5 is not a square even though its derivative vanishes
        let x5 = UPoly::monomial(&k, 1, 5);
        assert!(is_square_in_closure(&x5, &k).unwrap().is_none());
    }
}
