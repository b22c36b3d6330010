//! Finite fields `F_q`, `q = p^n` with odd `p`.
//!
//! Elements are integer codes `sum a_i p^i` of their coefficient vectors
//! against a fixed primitive defining polynomial (the lexicographically first
//! one). For `q <= 2^24` exponent, logarithm and Zech tables are built once and
//! shared, so multiplication, addition in the log domain and the quadratic
//! character are table lookups.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::ext::AlgExt;
use super::ffactor::{is_irreducible_ff, powmod};
use super::field::{Field, PrimeField};
use super::intfac::{factorize_u64, is_prime_u64};
use super::rng::AlgRng;
use super::upoly::UPoly;
use crate::error::{Error, Result};

pub const TABLE_LIMIT: u64 = 1 << 24;
/// Logarithm of zero in log-domain arithmetic.
pub const LOG_ZERO: u32 = u32::MAX;

pub struct Tables {
    /// `exp[k]` = code of `g^k`, `0 <= k < q - 1`.
    pub exp: Vec<u32>,
    /// `log[code]` = `k` with `g^k = code`; `log[0] = LOG_ZERO`.
    pub log: Vec<u32>,
    /// `zech[k]` = `log(1 + g^k)`.
    pub zech: Vec<u32>,
}

struct FqData {
    p: u64,
    n: u32,
    q: u64,
    /// Monic defining polynomial, coefficients low to high, length `n + 1`.
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

#[derive(Clone)]
pub struct FiniteField {
    d: Arc<FqData>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.d.p, self.d.n)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, o: &Self) -> bool {
        self.d.p == o.d.p && self.d.n == o.d.n
    }
}

fn is_primitive(m: &UPoly<u64>, kf: &PrimeField, q: u64) -> bool {
    if !is_irreducible_ff(m, kf) {
        return false;
    }
    let x = UPoly::x(kf);
    let one = UPoly::one(kf);
    factorize_u64(q - 1)
        .into_iter()
        .all(|(r, _)| powmod(&x, &BigUint::from((q - 1) / r), m, kf) != one)
}

fn first_primitive_poly(p: u64, n: u32) -> Vec<u64> {
    let kf = PrimeField::new(p);
    let q = p.pow(n);
    if n == 1 {
        // x - g for the least primitive root g
        for g in 2..p.max(3) {
            let m = UPoly::from_coeffs(&kf, vec![kf.neg(&(g % p)), 1]);
            if is_primitive(&m, &kf, q) {
                return vec![kf.neg(&(g % p)), 1];
            }
        }
        return vec![p - 1, 1];
    }
    let count = p.pow(n);
    for code in 0..count {
        let mut c: Vec<u64> = (0..n).map(|i| (code / p.pow(i)) % p).collect();
        if c[0] == 0 {
            continue;
        }
        c.push(1);
        let m = UPoly::from_coeffs(&kf, c.clone());
        if is_primitive(&m, &kf, q) {
            return c;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime_u64(p) || n == 0 {
            return Err(Error::Invalid(alloc::format!("F_{p}^{n} is not a finite field")));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q < (1u64 << 40))
            .ok_or_else(|| Error::Invalid(alloc::format!("field F_{p}^{n} too large")))?;
        let modulus = first_primitive_poly(p, n);
        let mut d = FqData { p, n, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            d.tables = Some(build_tables(&d));
        }
        Ok(FiniteField { d: Arc::new(d) })
    }

    pub fn p(&self) -> u64 {
        self.d.p
    }
    pub fn n(&self) -> u32 {
        self.d.n
    }
    pub fn q(&self) -> u64 {
        self.d.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.d.modulus
    }
    pub fn tables(&self) -> Option<&Tables> {
        self.d.tables.as_ref()
    }

    pub fn decode(&self, a: u64) -> Vec<u64> {
        decode(&self.d, a)
    }

    pub fn encode(&self, v: &[u64]) -> u64 {
        encode(&self.d, v)
    }

    /// The primitive element (class of `x`).
    pub fn generator(&self) -> u64 {
        if self.d.n == 1 {
            self.d.p - self.d.modulus[0]
        } else {
            self.d.p
        }
    }

    pub fn log(&self, a: u64) -> u32 {
        match &self.d.tables {
            Some(t) => t.log[a as usize],
            None => {
                assert!(a < self.d.q);
                if a == 0 {
                    return LOG_ZERO;
                }
                // baby-step giant-step would do; only used in tests above the table limit
                let g = self.generator();
                let mut cur = 1u64;
                for k in 0..self.d.q - 1 {
                    if cur == a {
                        return k as u32;
                    }
                    cur = self.mul(&cur, &g);
                }
                unreachable!()
            }
        }
    }

    pub fn exp(&self, k: u64) -> u64 {
        let k = k % (self.d.q - 1);
        match &self.d.tables {
            Some(t) => t.exp[k as usize] as u64,
            None => self.pow(&self.generator(), k),
        }
    }

    /// Quadratic character with `chi(0) = 0`.
    pub fn chi(&self, a: u64) -> i8 {
        if a == 0 {
            return 0;
        }
        match &self.d.tables {
            Some(t) => {
                if t.log[a as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.pow(&a, (self.d.q - 1) / 2) == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Embed `F_p` residues.
    pub fn from_prime(&self, a: u64) -> u64 {
        a % self.d.p
    }

    /// Vector representation as an extension of `F_p`.
    pub fn as_ext(&self) -> AlgExt<PrimeField> {
        let kf = PrimeField::new(self.d.p);
        AlgExt::new(kf, UPoly::from_coeffs(&kf, self.d.modulus.clone()))
    }

    pub fn to_ext_elem(&self, a: u64) -> UPoly<u64> {
        let kf = PrimeField::new(self.d.p);
        UPoly::from_coeffs(&kf, self.decode(a))
    }

    pub fn from_ext_elem(&self, e: &UPoly<u64>) -> u64 {
        let kf = PrimeField::new(self.d.p);
        let v: Vec<u64> = (0..self.d.n as usize).map(|i| e.coeff(&kf, i)).collect();
        self.encode(&v)
    }
}

fn decode(d: &FqData, mut a: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(d.n as usize);
    for _ in 0..d.n {
        v.push(a % d.p);
        a /= d.p;
    }
    v
}

fn encode(d: &FqData, v: &[u64]) -> u64 {
    v.iter().rev().fold(0, |acc, &c| acc * d.p + c)
}

fn vec_mul(d: &FqData, a: u64, b: u64) -> u64 {
    if d.n == 1 {
        return ((a as u128 * b as u128) % d.p as u128) as u64;
    }
    let kf = PrimeField::new(d.p);
    let pa = UPoly::from_coeffs(&kf, decode(d, a));
    let pb = UPoly::from_coeffs(&kf, decode(d, b));
    let m = UPoly::from_coeffs(&kf, d.modulus.clone());
    let r = pa.mul(&pb, &kf).rem(&m, &kf);
    let v: Vec<u64> = (0..d.n as usize).map(|i| r.coeff(&kf, i)).collect();
    encode(d, &v)
}

fn vec_add(d: &FqData, a: u64, b: u64) -> u64 {
    if d.n == 1 {
        let s = a + b;
        return if s >= d.p { s - d.p } else { s };
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..d.n {
        let s = (a % d.p + b % d.p) % d.p;
        out += s * scale;
        scale *= d.p;
        a /= d.p;
        b /= d.p;
    }
    out
}

fn vec_neg(d: &FqData, a: u64) -> u64 {
    if d.n == 1 {
        return if a == 0 { 0 } else { d.p - a };
    }
    let v: Vec<u64> = decode(d, a).into_iter().map(|c| if c == 0 { 0 } else { d.p - c }).collect();
    encode(d, &v)
}

fn mul_by_x(d: &FqData, a: u64) -> u64 {
    let n = d.n as usize;
    let v = decode(d, a);
    let top = v[n - 1];
    let mut w = vec![0u64; n];
    for i in (1..n).rev() {
        w[i] = v[i - 1];
    }
    for i in 0..n {
        // subtract top * m_i
        let t = (top as u128 * d.modulus[i] as u128 % d.p as u128) as u64;
        w[i] = (w[i] + d.p - t) % d.p;
    }
    encode(d, &w)
}

fn build_tables(d: &FqData) -> Tables {
    let q = d.q as usize;
    let mut exp = vec![0u32; q - 1];
    let mut log = vec![LOG_ZERO; q];
    let mut cur = 1u64;
    for (k, e) in exp.iter_mut().enumerate() {
        *e = cur as u32;
        debug_assert_eq!(log[cur as usize], LOG_ZERO, "generator is not primitive");
        log[cur as usize] = k as u32;
        cur = mul_by_x(d, cur);
    }
    let mut zech = vec![0u32; q - 1];
    for k in 0..q - 1 {
        let s = vec_add(d, 1, exp[k] as u64);
        zech[k] = log[s as usize];
    }
    Tables { exp, log, zech }
}

impl Field for FiniteField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        vec_add(&self.d, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        vec_add(&self.d, *a, vec_neg(&self.d, *b))
    }
    fn neg(&self, a: &u64) -> u64 {
        vec_neg(&self.d, *a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        match &self.d.tables {
            Some(t) => {
                let s = t.log[*a as usize] as u64 + t.log[*b as usize] as u64;
                t.exp[(s % (self.d.q - 1)) as usize] as u64
            }
            None => vec_mul(&self.d, *a, *b),
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        match &self.d.tables {
            Some(t) => {
                let l = t.log[*a as usize] as u64;
                Some(t.exp[((self.d.q - 1 - l) % (self.d.q - 1)) as usize] as u64)
            }
            None => Some(self.pow(a, self.d.q - 2)),
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        PrimeField::new(self.d.p).reduce_big(n)
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        PrimeField::new(self.d.p).from_rational(r)
    }
    fn characteristic(&self) -> u64 {
        self.d.p
    }
    fn order(&self) -> Option<BigUint> {
        Some(BigUint::from(self.d.q))
    }
    fn random_elem(&self, rng: &mut AlgRng) -> u64 {
        rng.below(self.d.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two() {
        assert!(matches!(FiniteField::new(2, 3), Err(Error::CharacteristicTwo)));
    }

    #[test]
    fn tables_agree_with_vector_arithmetic() {
        for (p, n) in [(3u64, 1u32), (3, 2), (3, 3), (5, 2), (7, 1), (3, 4)] {
            let f = FiniteField::new(p, n).unwrap();
            let ext = f.as_ext();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.from_ext_elem(&f.to_ext_elem(a)), a);
                if a != 0 {
                    assert_eq!(f.exp(f.log(a) as u64), a);
                }
                for b in (0..q).step_by(((q / 7) as usize).max(1)) {
                    let m = f.mul(&a, &b);
                    let mv = ext.mul(&f.to_ext_elem(a), &f.to_ext_elem(b));
                    assert_eq!(m, f.from_ext_elem(&mv));
                }
            }
        }
    }

    #[test]
    fn quadratic_character_counts() {
        let f = FiniteField::new(3, 3).unwrap();
        let squares = (1..27).filter(|&a| f.chi(a) == 1).count();
        assert_eq!(squares, 13);
        for a in 1..27u64 {
            let s = f.mul(&a, &a);
            assert_eq!(f.chi(s), 1);
        }
    }

    #[test]
    fn zech_logarithms() {
        let f = FiniteField::new(5, 2).unwrap();
        let t = f.tables().unwrap();
        for k in 0..24u64 {
            let s = f.add(&1, &f.exp(k));
            assert_eq!(t.zech[k as usize], f.log(s));
        }
    }
}
