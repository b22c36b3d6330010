//! Independent reference computations shared by integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use picard_core::arith::ext::AlgExt;
use picard_core::arith::ffactor::is_irreducible_ff;
use picard_core::arith::mpoly::MPoly;
use picard_core::arith::{Field, PrimeField, UPoly};

/// Some monic irreducible polynomial of degree `n` over `F_p`, found by brute force.
pub fn irreducible(p: u64, n: u32) -> UPoly<u64> {
    let k = PrimeField::new(p);
    for code in 0..p.pow(n) {
        let mut c: Vec<u64> = (0..n).map(|i| (code / p.pow(i)) % p).collect();
        c.push(1);
        let g = UPoly::from_coeffs(&k, c);
        if is_irreducible_ff(&g, &k) {
            return g;
        }
    }
    unreachable!()
}

/// `#X(F_{p^n})` by enumerating `(x, y, z, w)` in `P(1,1,1,3)` with vector arithmetic.
pub fn brute_force_count(f: &MPoly<u64>, p: u64, n: u32) -> u64 {
    let kp = PrimeField::new(p);
    let k = AlgExt::new(kp, irreducible(p, n));
    let q = p.pow(n);
    let elems: Vec<UPoly<u64>> = (0..q)
        .map(|c| k.from_vec((0..n).map(|i| (c / p.pow(i)) % p).collect()))
        .collect();
    let mut sq: HashMap<UPoly<u64>, u64> = HashMap::new();
    for w in &elems {
        *sq.entry(k.mul(w, w)).or_default() += 1;
    }
    let terms: Vec<(Vec<u32>, UPoly<u64>)> = f.terms().map(|(m, c)| (m.clone(), k.embed(c))).collect();
    let mut total = 0u64;
    for x in &elems {
        for y in &elems {
            for z in &elems {
                if k.is_zero(x) && k.is_zero(y) && k.is_zero(z) {
                    continue;
                }
                let mut v = k.zero();
                for (m, c) in &terms {
                    let t = k.mul(c, &k.mul(&k.pow(x, m[0] as u64), &k.mul(&k.pow(y, m[1] as u64), &k.pow(z, m[2] as u64))));
                    v = k.add(&v, &t);
                }
                total += sq.get(&v).copied().unwrap_or(0);
            }
        }
    }
    // weighted scaling orbits have size q - 1
    total / (q - 1)
}

/// Elements `a + b w` of `Z[w]`, `w = exp(i pi / 3)`, `w^2 = w - 1`.
#[derive(Clone, Debug, PartialEq)]
struct Eis(BigInt, BigInt);

impl Eis {
    fn mul(&self, o: &Eis) -> Eis {
        let bd = &self.1 * &o.1;
        Eis(&self.0 * &o.0 - &bd, &self.0 * &o.1 + &self.1 * &o.0 + bd)
    }
    fn add(&self, o: &Eis) -> Eis {
        Eis(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn pow(&self, n: u32) -> Eis {
        (0..n).fold(Eis(1.into(), 0.into()), |a, _| a.mul(self))
    }
    fn unit(k: u32) -> Eis {
        let w = Eis(0.into(), 1.into());
        w.pow(k % 6)
    }
}

/// `#X(F_{7^n})` for `w^2 = x^6 + y^6 + z^6` from Jacobi sums over `F_7`
/// lifted by Hasse-Davenport.
pub fn fermat_counts_p7(n_max: u32) -> Vec<u64> {
    let p = 7u64;
    // discrete logs to base 3
    let mut log = [0u32; 7];
    let mut g = 1u64;
    for k in 0..6 {
        log[g as usize] = k;
        g = g * 3 % p;
    }
    let chi = |j: u32, a: u64| -> Option<Eis> {
        if a % p == 0 {
            None
        } else {
            Some(Eis::unit(j * log[(a % p) as usize]))
        }
    };
    // P = 7 J(chi_a, chi_b, chi_c) over character triples with a + b + c + 3 = 0 mod 6
    let mut prods = Vec::new();
    for a in 1..6u32 {
        for b in 1..6u32 {
            for c in 1..6u32 {
                if (a + b + c + 3) % 6 != 0 {
                    continue;
                }
                let mut j = Eis(0.into(), 0.into());
                for u in 0..p {
                    for v in 0..p {
                        let t = (1 + 2 * p - u - v) % p;
                        if let (Some(x), Some(y), Some(z)) = (chi(a, u), chi(b, v), chi(c, t)) {
                            j = j.add(&x.mul(&y).mul(&z));
                        }
                    }
                }
                prods.push(j.mul(&Eis(7.into(), 0.into())));
            }
        }
    }
    (1..=n_max)
        .map(|n| {
            let q = BigInt::from(p).pow(n);
            let s = prods.iter().fold(Eis(0.into(), 0.into()), |acc, pr| acc.add(&pr.pow(n)));
            assert_eq!(s.1, BigInt::from(0), "character sum must be rational");
            let aff = q.pow(3) + (&q - 1u32) * s.0 / &q;
            let c: BigInt = (aff - 1u32) / (&q - 1u32);
            u64::try_from(c).unwrap()
        })
        .collect()
}
