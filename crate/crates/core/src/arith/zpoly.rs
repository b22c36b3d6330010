//! Integer polynomials: content, modular gcd and Zassenhaus factorization
//! (mod-p factoring, quadratic Hensel lifting, subset recombination).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ffactor::factor_ff;
use super::field::{Field, PrimeField, Rationals};
use super::intfac::is_prime_u64;
use super::upoly::UPoly;

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        ZPoly(self.0.iter().map(|x| x / &c).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly(vec![]);
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::new(c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.0.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Exact division over ℤ, `None` if the quotient is not integral.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.0.len() < d.0.len() {
            return None;
        }
        let dl = d.0.len();
        let lc = d.lc().clone();
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&lc);
            if !rr.is_zero() {
                return None;
            }
            for j in 0..dl {
                let t = &qq * &d.0[j];
                r[i + j] -= t;
            }
            q[i] = qq;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(ZPoly::new(q))
        } else {
            None
        }
    }

    pub fn to_q(&self) -> UPoly<BigRational> {
        UPoly::from_coeffs(&Rationals, self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// `q = c * self` with `self` primitive, positive leading coefficient.
    pub fn from_q(q: &UPoly<BigRational>) -> (BigRational, ZPoly) {
        if q.is_zero() {
            return (BigRational::zero(), ZPoly(vec![]));
        }
        let den = q.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = q.coeffs().iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let z = ZPoly::new(ints);
        let p = z.primitive();
        let c = BigRational::new(z.lc().clone(), den) / BigRational::from_integer(p.lc().clone());
        (c, p)
    }

    pub fn reduce(&self, k: &PrimeField) -> UPoly<u64> {
        UPoly::from_coeffs(k, self.0.iter().map(|c| k.reduce_big(c)).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn max_norm(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

fn symmetric(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

fn crt_lift(poly: &mut Vec<BigInt>, modulus: &BigInt, img: &[u64], p: u64) {
    // combine poly (mod modulus) with img (mod p) coefficientwise
    let pb = BigInt::from(p);
    let mm = modulus.mod_floor(&pb).to_u64().unwrap();
    let kf = PrimeField::new(p);
    let inv = kf.inv(&mm).expect("coprime moduli");
    for (i, c) in poly.iter_mut().enumerate() {
        let cur = kf.reduce_big(c);
        let diff = kf.sub(&img[i], &cur);
        let t = kf.mul(&diff, &inv);
        *c += modulus * BigInt::from(t);
    }
}

/// Word-sized primes descending from just below 2^62, used for modular algorithms.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 57 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}

/// Primitive gcd of two integer polynomials (positive leading coefficient).
pub fn gcd_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let a = a.primitive();
    let b = b.primitive();
    if a.degree() == Some(0) || b.degree() == Some(0) {
        return ZPoly::from_i64(&[1]);
    }
    let gamma = a.lc().gcd(b.lc());
    let mut best_deg = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last_candidate: Option<ZPoly> = None;
    for p in PrimeStream::new() {
        let kf = PrimeField::new(p);
        if kf.reduce_big(&gamma) == 0 {
            continue;
        }
        let ap = a.reduce(&kf);
        let bp = b.reduce(&kf);
        let g = ap.gcd(&bp, &kf);
        let d = g.degree().unwrap();
        if d == 0 {
            return ZPoly::from_i64(&[1]);
        }
        if d > best_deg {
            continue;
        }
        let gp = g.scale(&kf.reduce_big(&gamma), &kf);
        let img: Vec<u64> = (0..=d).map(|i| gp.coeff(&kf, i)).collect();
        if d < best_deg {
            best_deg = d;
            acc = img.iter().map(|&c| BigInt::from(c)).collect();
            modulus = BigInt::from(p);
            last_candidate = None;
        } else {
            crt_lift(&mut acc, &modulus, &img, p);
            modulus *= BigInt::from(p);
        }
        let cand = ZPoly::new(acc.iter().map(|c| symmetric(c, &modulus)).collect()).primitive();
        if last_candidate.as_ref() == Some(&cand) {
            if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return cand;
            }
        }
        last_candidate = Some(cand);
    }
    unreachable!()
}

/// Monic gcd over ℚ via the modular integer gcd.
pub fn gcd_q(a: &UPoly<BigRational>, b: &UPoly<BigRational>) -> UPoly<BigRational> {
    if a.is_zero() && b.is_zero() {
        return UPoly::zero();
    }
    let (_, za) = ZPoly::from_q(a);
    let (_, zb) = ZPoly::from_q(b);
    gcd_z(&za, &zb).to_q().monic(&Rationals)
}

// ---- arithmetic modulo m for Hensel lifting ----

fn mnorm(mut a: Vec<BigInt>, m: &BigInt) -> Vec<BigInt> {
    for c in a.iter_mut() {
        *c = c.mod_floor(m);
    }
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn mmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    mnorm(c, m)
}

fn madd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    mnorm(c, m)
}

fn msub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    mnorm(c, m)
}

/// Division by a monic polynomial modulo m.
fn mdivrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let bl = b.len();
    debug_assert!(b.last().is_some_and(|x| x.is_one()));
    if a.len() < bl {
        return (vec![], a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - bl + 1];
    for i in (0..q.len()).rev() {
        let f = r[i + bl - 1].mod_floor(m);
        if f.is_zero() {
            continue;
        }
        for j in 0..bl {
            r[i + j] -= &f * &b[j];
        }
        q[i] = f;
    }
    r.truncate(bl - 1);
    (mnorm(q, m), mnorm(r, m))
}

fn to_big(p: &UPoly<u64>) -> Vec<BigInt> {
    p.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

struct LiftNode {
    g: Vec<BigInt>,
    h: Vec<BigInt>,
    s: Vec<BigInt>,
    t: Vec<BigInt>,
}

/// One quadratic Hensel step: `f ≡ g h (mod m)` and `s g + t h ≡ 1 (mod m)`
/// become the same relations modulo `m^2`.
fn hensel_step(f: &[BigInt], n: &mut LiftNode, m: &BigInt) {
    let m2 = m * m;
    let e = msub(f, &mmul(&n.g, &n.h, &m2), &m2);
    let (q, r) = mdivrem(&mmul(&n.s, &e, &m2), &n.h, &m2);
    let g2 = madd(&madd(&n.g, &mmul(&n.t, &e, &m2), &m2), &mmul(&q, &n.g, &m2), &m2);
    let h2 = madd(&n.h, &r, &m2);
    let b = msub(&madd(&mmul(&n.s, &g2, &m2), &mmul(&n.t, &h2, &m2), &m2), &[BigInt::one()], &m2);
    let (c, d) = mdivrem(&mmul(&n.s, &b, &m2), &h2, &m2);
    let s2 = msub(&n.s, &d, &m2);
    let t2 = msub(&msub(&n.t, &mmul(&n.t, &b, &m2), &m2), &mmul(&c, &g2, &m2), &m2);
    n.g = g2;
    n.h = h2;
    n.s = s2;
    n.t = t2;
}

/// Lift the factorization of the monic (mod p) polynomial `f` into monic
/// factors `fs` from `p` to `p^(2^steps)`.
fn multifactor_lift(f: &[BigInt], fs: &[UPoly<u64>], kf: &PrimeField, steps: u32) -> (Vec<Vec<BigInt>>, BigInt) {
    let p = BigInt::from(kf.modulus());
    let mut final_m = p.clone();
    for _ in 0..steps {
        final_m = &final_m * &final_m;
    }
    if fs.len() == 1 {
        return (vec![mnorm(f.to_vec(), &final_m)], final_m);
    }
    let mid = fs.len() / 2;
    let gp = fs[..mid].iter().fold(UPoly::one(kf), |a, b| a.mul(b, kf));
    let hp = fs[mid..].iter().fold(UPoly::one(kf), |a, b| a.mul(b, kf));
    let (one, s, t) = gp.xgcd(&hp, kf);
    debug_assert!(one.degree() == Some(0));
    let mut node = LiftNode { g: to_big(&gp), h: to_big(&hp), s: to_big(&s), t: to_big(&t) };
    let mut m = p.clone();
    for _ in 0..steps {
        hensel_step(f, &mut node, &m);
        m = &m * &m;
    }
    let (mut left, _) = multifactor_lift(&node.g, &fs[..mid], kf, steps);
    let (right, _) = multifactor_lift(&node.h, &fs[mid..], kf, steps);
    left.extend(right);
    (left, final_m)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Factor a primitive squarefree integer polynomial with positive leading
/// coefficient and nonzero constant term into irreducible primitive factors.
fn factor_squarefree_z(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    // choose the prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<UPoly<u64>>)> = None;
    let mut tried = 0;
    let mut p = 5u64;
    while tried < 8 {
        p += 2;
        if !is_prime_u64(p) {
            continue;
        }
        let kf = PrimeField::new(p);
        if kf.reduce_big(f.lc()) == 0 {
            continue;
        }
        let fp = f.reduce(&kf);
        if fp.gcd(&fp.derivative(&kf), &kf).degree() != Some(0) {
            continue;
        }
        tried += 1;
        let facs: Vec<UPoly<u64>> = factor_ff(&fp, &kf).into_iter().map(|(g, _)| g).collect();
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.unwrap();
    let kf = PrimeField::new(p);

    let lc = f.lc().clone();
    let bound = {
        let norm = f.max_norm() * BigInt::from(n as u64 + 1);
        BigInt::from(2u32) * lc.abs() * (BigInt::one() << n) * norm
    };
    let pb = BigInt::from(p);
    let mut steps = 0u32;
    let mut m = pb.clone();
    while m <= bound {
        m = &m * &m;
        steps += 1;
    }
    // make f monic modulo p^(2^steps)
    let lc_inv = {
        let e = lc.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        e.x.mod_floor(&m)
    };
    let fmonic = mnorm(f.0.iter().map(|c| c * &lc_inv).collect(), &m);
    let (lifted, m) = multifactor_lift(&fmonic, &facs, &kf, steps);

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut g = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        let r = remaining.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lcg = g.lc().clone();
            // constant-term filter
            let c0 = idx.iter().fold(lcg.clone(), |acc, &i| (acc * &remaining[i][0]).mod_floor(&m));
            let c0 = symmetric(&c0, &m);
            let g0 = &g.0[0] * &lcg;
            if !c0.is_zero() && (&g0 % &c0).is_zero() {
                let prod = idx.iter().fold(vec![lcg.clone()], |acc, &i| mmul(&acc, &remaining[i], &m));
                let cand = ZPoly::new(prod.iter().map(|c| symmetric(c, &m)).collect()).primitive();
                if let Some(q) = g.div_exact(&cand) {
                    out.push(cand);
                    g = q.primitive();
                    let mut keep = Vec::new();
                    for (i, fac) in remaining.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            keep.push(fac);
                        }
                    }
                    remaining = keep;
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        s += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        out.push(g);
    }
    out
}

/// Factorization of a nonzero integer polynomial as `content * prod g_i^e_i`
/// with primitive irreducible `g_i` of positive leading coefficient.
pub fn factor_z(f: &ZPoly) -> (BigInt, Vec<(ZPoly, u32)>) {
    assert!(!f.is_zero(), "factor of zero polynomial");
    let mut content = f.content();
    if f.lc().is_negative() {
        content = -content;
    }
    let mut g = f.primitive();
    let mut out: Vec<(ZPoly, u32)> = Vec::new();
    // powers of x
    let mut xe = 0;
    while g.0[0].is_zero() {
        g = ZPoly::new(g.0[1..].to_vec());
        xe += 1;
    }
    if xe > 0 {
        out.push((ZPoly::from_i64(&[0, 1]), xe));
    }
    if g.degree().unwrap() > 0 {
        let (_, parts) = g.to_q().squarefree_decomposition(&Rationals);
        for (h, e) in parts {
            let (_, hz) = ZPoly::from_q(&h);
            for irr in factor_squarefree_z(&hz) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0 .0.cmp(&b.0 .0)));
    (content, out)
}

/// Monic irreducible factorization over ℚ: `f = unit * prod g_i^e_i`.
pub fn factor_q(f: &UPoly<BigRational>) -> (BigRational, Vec<(UPoly<BigRational>, u32)>) {
    let (_, z) = ZPoly::from_q(f);
    let (_, facs) = factor_z(&z);
    let unit = f.lc().unwrap().clone();
    let out = facs.into_iter().map(|(g, e)| (g.to_q().monic(&Rationals), e)).collect();
    (unit, out)
}

pub fn is_irreducible_q(f: &UPoly<BigRational>) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let (_, facs) = factor_q(f);
            facs.len() == 1 && facs[0].1 == 1
        }
    }
}

/// Rational roots (distinct) of a rational polynomial.
pub fn rational_roots(f: &UPoly<BigRational>) -> Vec<BigRational> {
    let (_, facs) = factor_q(f);
    let mut out: Vec<BigRational> = facs
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeffs()[0].clone())
        .collect();
    out.sort();
    out
}
