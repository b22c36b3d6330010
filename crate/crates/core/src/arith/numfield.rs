//! Number fields `Q[t]/(m(t))` presented by a single primitive element.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ext::AlgExt;
use super::field::{Field, PrimeField, Rationals};
use super::rng::AlgRng;
use super::upoly::UPoly;
use super::zpoly::is_irreducible_q;
use crate::error::{Error, Result};

pub type QPoly = UPoly<BigRational>;
/// Element of a number field: reduced polynomial in the generator.
pub type NfElem = UPoly<BigRational>;

/// One adjunction in the construction history of a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStep {
    /// Relative polynomial over the previous field, in the variable `y`
    /// with the previous generator printed as `alpha`.
    pub relative: String,
    /// New generator is `y + shift * alpha`.
    pub shift: i64,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    ext: AlgExt<Rationals>,
    trace: Arc<Vec<TowerStep>>,
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.ext.modulus() == o.ext.modulus()
    }
}

impl Eq for NumberField {}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl NumberField {
    /// The rational numbers as the degree-1 field `Q[t]/(t)`.
    pub fn rationals() -> Self {
        NumberField {
            ext: AlgExt::new(Rationals, UPoly::x(&Rationals)),
            trace: Arc::new(Vec::new()),
        }
    }

    /// Field defined by `minpoly`, which must be irreducible over Q.
    pub fn new(minpoly: &QPoly) -> Result<Self> {
        match minpoly.degree() {
            None | Some(0) => return Err(Error::ConstantModulus),
            _ => {}
        }
        if !is_irreducible_q(minpoly) {
            return Err(Error::Reducible(qpoly_to_string(minpoly, "t")));
        }
        Ok(Self::new_unchecked(minpoly.monic(&Rationals), Vec::new()))
    }

    /// Field defined by `minpoly` carrying a recorded construction history.
    pub fn with_trace(minpoly: &QPoly, trace: Vec<TowerStep>) -> Result<Self> {
        let k = Self::new(minpoly)?;
        Ok(Self::new_unchecked(k.ext.modulus().clone(), trace))
    }

    pub(crate) fn new_unchecked(minpoly: QPoly, trace: Vec<TowerStep>) -> Self {
        NumberField { ext: AlgExt::new(Rationals, minpoly), trace: Arc::new(trace) }
    }

    pub fn degree(&self) -> usize {
        self.ext.degree()
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn minpoly(&self) -> &QPoly {
        self.ext.modulus()
    }

    pub fn tower_trace(&self) -> &[TowerStep] {
        &self.trace
    }

    pub fn generator(&self) -> NfElem {
        self.ext.generator()
    }

    pub fn as_ext(&self) -> &AlgExt<Rationals> {
        &self.ext
    }

    pub fn embed_rational(&self, a: &BigRational) -> NfElem {
        UPoly::constant(&Rationals, a.clone())
    }

    pub fn as_rational(&self, a: &NfElem) -> Option<BigRational> {
        self.ext.as_base(a)
    }

    pub fn from_poly(&self, p: QPoly) -> NfElem {
        self.ext.reduce(p)
    }

    /// Common denominator of the coefficients of `a`.
    pub fn denominator(&self, a: &NfElem) -> BigInt {
        use num_integer::Integer;
        a.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Roots of the defining polynomial modulo `p` (degree-1 primes above `p`).
    pub fn roots_mod(&self, p: u64) -> Vec<u64> {
        let kf = PrimeField::new(p);
        let m = match self.minpoly().try_map(&kf, |c| kf.from_rational(c)) {
            Some(m) if m.degree() == self.minpoly().degree() => m,
            _ => return vec![],
        };
        super::ffactor::roots_ff(&m, &kf)
    }

    /// Image of `a` under the reduction `generator -> r (mod p)`.
    pub fn reduce_at(&self, a: &NfElem, p: u64, r: u64) -> Option<u64> {
        let kf = PrimeField::new(p);
        let c = a.try_map(&kf, |x| kf.from_rational(x))?;
        Some(c.eval(&r, &kf))
    }

    /// Trace of `a` down to Q.
    pub fn trace(&self, a: &NfElem) -> BigRational {
        let m = self.ext.mul_matrix(a);
        (0..self.degree()).fold(BigRational::zero(), |s, i| s + &m[i][i])
    }

    /// Norm of `a` down to Q.
    pub fn norm(&self, a: &NfElem) -> BigRational {
        if a.is_zero() {
            return BigRational::zero();
        }
        // Res(m, a) = prod a(roots) since m is monic
        self.minpoly().resultant(a, &Rationals)
    }

    pub fn elem_to_string(&self, a: &NfElem) -> String {
        qpoly_to_string(a, "alpha")
    }
}

impl Field for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        UPoly::zero()
    }
    fn one(&self) -> NfElem {
        self.ext.one()
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.ext.add(a, b)
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.ext.sub(a, b)
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        self.ext.neg(a)
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        if self.degree() == 1 {
            return match (a.coeffs().first(), b.coeffs().first()) {
                (Some(x), Some(y)) => UPoly::constant(&Rationals, x * y),
                _ => UPoly::zero(),
            };
        }
        self.ext.mul(a, b)
    }
    fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if self.degree() == 1 {
            return a.coeffs().first().map(|x| UPoly::constant(&Rationals, x.recip()));
        }
        self.ext.inv(a)
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> NfElem {
        self.ext.from_int(n)
    }
    fn from_rational(&self, r: &BigRational) -> Option<NfElem> {
        self.ext.from_rational(r)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<BigUint> {
        None
    }
    fn random_elem(&self, rng: &mut AlgRng) -> NfElem {
        let v = (0..self.degree()).map(|_| q(rng.small_int(5))).collect();
        self.ext.from_vec(v)
    }
}

/// Field homomorphism `src -> dst` determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub src: NumberField,
    pub dst: NumberField,
    pub image: NfElem,
}

impl Embedding {
    pub fn identity(k: &NumberField) -> Self {
        Embedding { src: k.clone(), dst: k.clone(), image: k.generator() }
    }

    /// The unique embedding of Q.
    pub fn from_rationals(dst: &NumberField) -> Self {
        let src = NumberField::rationals();
        Embedding { src, dst: dst.clone(), image: UPoly::zero() }
    }

    pub fn apply(&self, a: &NfElem) -> NfElem {
        if self.src.is_rationals() {
            return match self.src.as_rational(a) {
                Some(r) => self.dst.embed_rational(&r),
                None => unreachable!(),
            };
        }
        let mut acc = self.dst.zero();
        for c in a.coeffs().iter().rev() {
            acc = self.dst.add(&self.dst.mul(&acc, &self.image), &self.dst.embed_rational(c));
        }
        acc
    }

    pub fn apply_poly(&self, p: &UPoly<NfElem>) -> UPoly<NfElem> {
        p.map(&self.dst, |c| self.apply(c))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Embedding) -> Embedding {
        assert!(self.dst == other.src, "embedding composition mismatch");
        let image = if self.src.is_rationals() { UPoly::zero() } else { other.apply(&self.image) };
        Embedding { src: self.src.clone(), dst: other.dst.clone(), image }
    }

    /// Checks that the image is a root of the source minimal polynomial.
    pub fn is_valid(&self) -> bool {
        if self.src.is_rationals() {
            return true;
        }
        let m = self.src.minpoly().map(&self.dst, |c| self.dst.embed_rational(c));
        self.dst.is_zero(&m.eval(&self.image, &self.dst))
    }
}

pub fn rational_to_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

/// Human-readable rational polynomial, highest degree first, e.g. `t^2 - 2`.
pub fn qpoly_to_string(p: &QPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coeff_one = a.is_one();
        if i == 0 || !coeff_one {
            s.push_str(&rational_to_string(&a));
            if i > 0 {
                s.push('*');
            }
        }
        if i >= 1 {
            s.push_str(var);
        }
        if i >= 2 {
            let _ = write!(s, "^{i}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> QPoly {
        UPoly::from_coeffs(&Rationals, c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn rejects_reducible() {
        assert!(matches!(NumberField::new(&qp(&[-4, 0, 1])), Err(Error::Reducible(_))));
        assert!(NumberField::new(&qp(&[-2, 0, 1])).is_ok());
    }

    #[test]
    fn norm_and_trace() {
        let k = NumberField::new(&qp(&[-2, 0, 1])).unwrap();
        let a = k.add(&k.generator(), &k.one()); // 1 + sqrt2
        assert_eq!(k.norm(&a), q(-1));
        assert_eq!(k.trace(&a), q(2));
    }

    #[test]
    fn conjugation_embedding() {
        let k = NumberField::new(&qp(&[-2, 0, 1])).unwrap();
        let e = Embedding { src: k.clone(), dst: k.clone(), image: k.neg(&k.generator()) };
        assert!(e.is_valid());
        let a = k.add(&k.generator(), &k.from_i64(3));
        assert_eq!(e.apply(&a), k.sub(&k.from_i64(3), &k.generator()));
    }

    #[test]
    fn printing() {
        assert_eq!(qpoly_to_string(&qp(&[-2, 0, 1]), "t"), "t^2 - 2");
        assert_eq!(qpoly_to_string(&qp(&[1, -1]), "x"), "-x + 1");
    }
}
