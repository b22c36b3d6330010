//! Point counts over finite fields and the van Luijk upper bound for the
//! geometric Picard number.
//!
//! For `X : w^2 = f` the count is `#X(F_q) = q^2 + q + 1 + sum chi(f(P))`
//! over `P` in `P^2(F_q)`. The traces `t_n = #X(F_{p^n}) - 1 - p^{2n}` are the
//! power sums of the Frobenius eigenvalues on `H^2`, which determine the
//! characteristic polynomial together with its functional equation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::ffield::{FiniteField, LOG_ZERO};
use crate::arith::field::{square_class, Field, PrimeField, Rationals};
use crate::arith::intfac::euler_phi;
use crate::arith::mpoly::MPoly;
use crate::arith::upoly::UPoly;
use crate::arith::zpoly::factor_q;
use crate::error::{Error, Result};
use crate::surface::{reduce_poly, smooth_mod_p, DoubleSexticSurface};

/// Default enumeration budget: `q^2 <= 2^35` points.
pub const DEFAULT_MAX_POINTS: u64 = 1 << 35;
pub const DEFAULT_PRIMES: [u64; 3] = [3, 5, 7];
/// Dimension of `H^2` of a K3 surface.
pub const H2_DIM: usize = 22;
pub const MAX_RHO: u32 = 20;

/// Largest `n` with `p^{2n}` within `max_points`.
pub fn max_feasible_n(p: u64, max_points: u64) -> u32 {
    let mut n = 0;
    let mut q2: u128 = 1;
    loop {
        let next = q2 * (p as u128) * (p as u128);
        if next > max_points as u128 {
            return n;
        }
        q2 = next;
        n += 1;
    }
}

/// Sextic over `F_q` split by powers of `x` and `y` in the chart `z = 1`.
pub struct CountKernel {
    field: FiniteField,
    /// `a[i][j]` = coefficient of `x^i y^j z^{6-i-j}`.
    a: [[u64; 7]; 7],
}

impl CountKernel {
    /// `f` must be a ternary sextic over `F_p`.
    pub fn new(f: &MPoly<u64>, p: u64, n: u32) -> Result<Self> {
        let field = FiniteField::new(p, n)?;
        if f.nvars() != 3 || !f.is_homogeneous_of(6) {
            return Err(Error::NotHomogeneous);
        }
        let mut a = [[0u64; 7]; 7];
        for (m, c) in f.terms() {
            a[m[0] as usize][m[1] as usize] = field.from_prime(*c);
        }
        Ok(CountKernel { field, a })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Number of rows (values of `y` in the chart `z = 1`).
    pub fn rows(&self) -> u64 {
        self.field.q()
    }

    fn coeffs_at(&self, y: u64) -> [u64; 7] {
        let k = &self.field;
        let mut c = [0u64; 7];
        for (i, ci) in c.iter_mut().enumerate() {
            let mut acc = 0u64;
            for j in (0..=6 - i).rev() {
                acc = k.add(&k.mul(&acc, &y), &self.a[i][j]);
            }
            *ci = acc;
        }
        c
    }

    /// `sum_x chi(f(x, y, 1))` for the field element with code `y`.
    pub fn row_sum(&self, y: u64) -> i64 {
        let c = self.coeffs_at(y);
        match self.field.tables() {
            Some(t) => {
                let logs: [u32; 7] = core::array::from_fn(|i| t.log[c[i] as usize]);
                row_sum_log(&logs, &t.zech, self.field.q() as u32 - 1)
            }
            None => self.row_sum_generic(&c),
        }
    }

    fn row_sum_generic(&self, c: &[u64; 7]) -> i64 {
        let k = &self.field;
        let mut s = 0i64;
        for x in 0..k.q() {
            let v = c.iter().rev().fold(0u64, |acc, ci| k.add(&k.mul(&acc, &x), ci));
            s += k.chi(v) as i64;
        }
        s
    }

    /// Contribution of the line `z = 0`.
    pub fn infinity_sum(&self) -> i64 {
        let k = &self.field;
        // (x : 1 : 0)
        let mut s = 0i64;
        for x in 0..k.q() {
            let mut v = 0u64;
            for i in (0..=6).rev() {
                v = k.add(&k.mul(&v, &x), &self.a[i][6 - i]);
            }
            s += k.chi(v) as i64;
        }
        s + k.chi(self.a[6][0]) as i64
    }

    /// `#X(F_q)` from the total character sum.
    pub fn total(&self, chi_sum: i64) -> u64 {
        let q = self.field.q() as i128;
        (q * q + q + 1 + chi_sum as i128) as u64
    }
}

#[inline]
fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= m as u64 {
        (s - m as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
fn zech_add(a: u32, b: u32, zech: &[u32], m: u32) -> u32 {
    if a == LOG_ZERO {
        return b;
    }
    if b == LOG_ZERO {
        return a;
    }
    let d = if b >= a { b - a } else { b + m - a };
    let z = zech[d as usize];
    if z == LOG_ZERO {
        LOG_ZERO
    } else {
        add_mod(a, z, m)
    }
}

fn row_sum_log(c: &[u32; 7], zech: &[u32], m: u32) -> i64 {
    let chi = |l: u32| -> i64 {
        if l == LOG_ZERO {
            0
        } else {
            1 - 2 * (l & 1) as i64
        }
    };
    let top = match (0..7).rev().find(|&i| c[i] != LOG_ZERO) {
        Some(t) => t,
        None => return 0,
    };
    let mut s = chi(c[0]);
    // x = g^k
    for k in 0..m {
        let mut acc = c[top];
        for i in (0..top).rev() {
            if acc != LOG_ZERO {
                acc = add_mod(acc, k, m);
            }
            acc = zech_add(acc, c[i], zech, m);
        }
        s += chi(acc);
    }
    s
}

/// `#X(F_{p^n})` for a sextic `f` over `F_p`.
pub fn count_points(f: &MPoly<u64>, p: u64, n: u32, max_points: u64) -> Result<u64> {
    let max_n = max_feasible_n(p, max_points);
    if n > max_n {
        return Err(Error::BudgetExceeded { max_n });
    }
    let kern = CountKernel::new(f, p, n)?;
    let mut s = kern.infinity_sum();
    for y in 0..kern.rows() {
        s += kern.row_sum(y);
    }
    Ok(kern.total(s))
}

/// Reduction of a surface over Q modulo a good prime.
pub fn reduce_surface(x: &DoubleSexticSurface, p: u64) -> Result<MPoly<u64>> {
    if !x.field.is_rationals() {
        return Err(Error::Invalid(String::from("reduction is only supported over Q")));
    }
    if !smooth_mod_p(&x.f, &x.field, p) {
        return Err(Error::Invalid(alloc::format!("{p} is not a prime of good reduction")));
    }
    Ok(reduce_poly(&x.f, &x.field, p, 0).unwrap())
}

/// Candidate characteristic polynomial of Frobenius on `H^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCandidate {
    /// Sign of the functional equation.
    pub sign: i8,
    /// Coefficients low to high; monic of degree 22.
    pub coeffs: Vec<BigInt>,
    pub tate_count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub p: u64,
    pub counts: Vec<u64>,
    pub candidates: Vec<FrobeniusCandidate>,
}

/// `t_n` from `#X(F_{p^n})`, `n = 1, 2, ...`.
pub fn traces(counts: &[u64], p: u64) -> Vec<BigInt> {
    let p = BigInt::from(p);
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| BigInt::from(c) - 1 - p.pow(2 * (i as u32 + 1)))
        .collect()
}

/// Power sums `s_1..s_n` of the roots of a monic polynomial given by
/// `c[k]` = coefficient of `T^{d-k}`.
fn power_sums(c: &[BigInt], n: usize) -> Vec<BigInt> {
    let d = c.len() - 1;
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut v = BigInt::zero();
        for i in 1..m.min(d + 1) {
            v += &c[i] * &s[m - i - 1];
        }
        if m <= d {
            v += &c[m] * BigInt::from(m);
        }
        s.push(-v);
    }
    s
}

/// Elementary symmetric functions from power sums; `None` if not integral.
fn elementary(s: &[BigInt], k: usize) -> Option<Vec<BigInt>> {
    let mut e = vec![BigInt::one()];
    for m in 1..=k {
        let mut v = BigInt::zero();
        for i in 1..=m {
            let t = &e[m - i] * &s[i - 1];
            if i % 2 == 1 {
                v += t;
            } else {
                v -= t;
            }
        }
        let (q, r) = v.div_rem(&BigInt::from(m));
        if !r.is_zero() {
            return None;
        }
        e.push(q);
    }
    Some(e)
}

fn eval_desc(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().fold(BigInt::zero(), |acc, ci| acc * x + ci)
}

pub fn candidate_poly(c: &FrobeniusCandidate) -> UPoly<BigRational> {
    UPoly::from_coeffs(&Rationals, c.coeffs.iter().map(|a| BigRational::from_integer(a.clone())).collect())
}

/// `Q(T) = P(pT) / p^22`, all of whose roots should lie on the unit circle.
fn normalized(coeffs: &[BigInt], p: u64) -> UPoly<BigRational> {
    let d = coeffs.len() - 1;
    let p = BigInt::from(p);
    let v = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| BigRational::new(a * p.pow(i as u32), p.pow(d as u32)))
        .collect();
    UPoly::from_coeffs(&Rationals, v)
}

pub fn cyclotomic(m: u64) -> UPoly<BigRational> {
    let k = Rationals;
    let one = BigRational::one();
    let mut num = UPoly::monomial(&k, one.clone(), m as usize).sub(&UPoly::one(&k), &k);
    for d in 1..m {
        if m % d == 0 {
            num = num.div_exact(&cyclotomic(d), &k).unwrap();
        }
    }
    num
}

fn is_cyclotomic(g: &UPoly<BigRational>) -> bool {
    let d = g.degree().unwrap_or(0) as u64;
    if d == 0 {
        return false;
    }
    let g = g.monic(&Rationals);
    (1..=8 * d + 8).filter(|&m| euler_phi(m) == d).any(|m| cyclotomic(m) == g)
}

/// Roots of a real polynomial (low-first coefficients) by Aberth iteration.
pub fn complex_roots(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    if d == 0 {
        return vec![];
    }
    let lc = c[d];
    let a: Vec<f64> = c.iter().map(|x| x / lc).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ai in a[..d].iter().rev() {
            dp = dp * z + p;
            p = p * z + ai;
        }
        (p, dp)
    };
    let radius = 1.0 + a[..d].iter().fold(0.0f64, |m, x| m.max(x.abs())).min(1.0);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.9, 2.0 * core::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[k] -= w;
            moved = moved.max(w.norm() / z[k].norm().max(1e-300));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Every root of `P` has absolute value `p` within `tol` relative error.
fn roots_on_circle(coeffs: &[BigInt], p: u64, tol: f64) -> bool {
    let (_, facs) = factor_q(&normalized(coeffs, p));
    facs.iter().all(|(g, _)| {
        if is_cyclotomic(g) {
            return true;
        }
        let c: Vec<f64> = g.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        complex_roots(&c).iter().all(|r| (r.norm() - 1.0).abs() <= tol)
    })
}

/// Number of roots of the form `p * zeta`, `zeta` a root of unity.
pub fn tate_bound(coeffs: &[BigInt], p: u64) -> u32 {
    let (_, facs) = factor_q(&normalized(coeffs, p));
    facs.iter().filter(|(g, _)| is_cyclotomic(g)).map(|(g, e)| g.degree().unwrap() as u32 * e).sum()
}

pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Characteristic polynomials of Frobenius on `H^2` compatible with
/// `counts[n-1] = #X(F_{p^n})`. Needs at least 10 counts.
pub fn frobenius_candidates(counts: &[u64], p: u64) -> Result<Vec<FrobeniusCandidate>> {
    let n = counts.len();
    if n < 10 {
        return Err(Error::Invalid(alloc::format!(
            "{n} counts leave more than one middle coefficient undetermined; at least 10 are needed"
        )));
    }
    let d = H2_DIM;
    let s = traces(counts, p);
    let known = n.min(11);
    let Some(e) = elementary(&s, known) else { return Err(Error::InconsistentCounts) };
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for sign in [1i8, -1] {
        // c[k] = coefficient of T^{22-k}
        let mut c = vec![BigInt::zero(); d + 1];
        for k in 0..=known {
            c[k] = if k % 2 == 0 { e[k].clone() } else { -&e[k] };
        }
        for k in 0..11 {
            let v = &c[k] * pb.pow((d - 2 * k) as u32);
            c[d - k] = if sign > 0 { v } else { -v };
        }
        if known == 11 {
            if sign < 0 && !c[11].is_zero() {
                continue;
            }
        } else if sign < 0 {
            c[11] = BigInt::zero();
        } else {
            // fix the middle coefficient by P(p) = 0
            c[11] = BigInt::zero();
            let rest = eval_desc(&c, &pb);
            let w = pb.pow(11);
            if !(&rest % &w).is_zero() {
                continue;
            }
            c[11] = -rest / w;
        }
        if !eval_desc(&c, &pb).is_zero() {
            continue;
        }
        let ps = power_sums(&c, n);
        if ps != s {
            continue;
        }
        let coeffs: Vec<BigInt> = c.iter().rev().cloned().collect();
        if !roots_on_circle(&coeffs, p, ROOT_TOLERANCE) {
            continue;
        }
        let tate_count = tate_bound(&coeffs, p);
        out.push(FrobeniusCandidate { sign, coeffs, tate_count });
    }
    if out.is_empty() {
        return Err(Error::InconsistentCounts);
    }
    Ok(out)
}

/// Multiplier `sign * p^power` applied before reducing modulo squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareClassNormalization {
    pub sign: i8,
    pub p_power: u32,
}

fn lcm_of_cyclotomic_orders(coeffs: &[BigInt], p: u64) -> u64 {
    let (_, facs) = factor_q(&normalized(coeffs, p));
    let mut l = 1u64;
    for (g, _) in facs {
        let d = g.degree().unwrap() as u64;
        let g = g.monic(&Rationals);
        if let Some(m) = (1..=8 * d + 8).filter(|&m| euler_phi(m) == d).find(|&m| cyclotomic(m) == g) {
            l = l.lcm(&m);
        }
    }
    l
}

/// `L = lim_{T -> q} P_m(T) / (T - q)^b` where `P_m` is the polynomial of `m`-th
/// powers of the roots, `q = p^m` and `m` makes every `p * zeta` root equal to
/// `q`; `b` is the Tate count.
pub fn leading_residue(cand: &FrobeniusCandidate, p: u64) -> BigRational {
    let m = lcm_of_cyclotomic_orders(&cand.coeffs, p) as usize;
    let desc: Vec<BigInt> = cand.coeffs.iter().rev().cloned().collect();
    let d = desc.len() - 1;
    let s = power_sums(&desc, d * m);
    let sm: Vec<BigInt> = (1..=d).map(|k| s[k * m - 1].clone()).collect();
    let e = elementary(&sm, d).expect("powers of algebraic integers");
    let mut pm: Vec<BigRational> =
        (0..=d).map(|k| BigRational::from_integer(if k % 2 == 0 { e[k].clone() } else { -&e[k] })).collect();
    pm.reverse();
    let k = Rationals;
    let mut poly = UPoly::from_coeffs(&k, pm);
    let q = BigRational::from_integer(BigInt::from(p).pow(m as u32));
    let lin = UPoly::linear_root(&k, &q);
    for _ in 0..cand.tate_count {
        poly = poly.div_exact(&lin, &k).expect("root of multiplicity at least the Tate count");
    }
    poly.eval(&q, &k)
}

pub fn normalized_square_class(cand: &FrobeniusCandidate, p: u64, norm: SquareClassNormalization) -> Option<BigInt> {
    let l = leading_residue(cand, p);
    if l.is_zero() {
        return None;
    }
    let mult = BigRational::from_integer(BigInt::from(norm.sign) * BigInt::from(p).pow(norm.p_power));
    Some(square_class(&(l * mult)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauProvenance {
    UserOverride,
    TrivialCap,
    Counting { per_prime: Vec<(u64, u32)>, refined: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBound {
    pub value: u32,
    pub provenance: TauProvenance,
}

impl UpperBound {
    pub fn user_override(tau: u32) -> Result<Self> {
        if !(1..=MAX_RHO).contains(&tau) {
            return Err(Error::Invalid(alloc::format!("tau override {tau} outside 1..=20")));
        }
        Ok(UpperBound { value: tau, provenance: TauProvenance::UserOverride })
    }

    pub fn trivial() -> Self {
        UpperBound { value: MAX_RHO, provenance: TauProvenance::TrivialCap }
    }
}

/// Bound from one prime: the largest Tate count among surviving candidates,
/// capped at 20.
pub fn per_prime_bound(data: &FrobeniusData) -> u32 {
    data.candidates.iter().map(|c| c.tate_count).max().unwrap_or(H2_DIM as u32).min(MAX_RHO)
}

fn unique_class(data: &FrobeniusData, bound: u32, norm: SquareClassNormalization) -> Option<BigInt> {
    let mut cls: Option<BigInt> = None;
    for c in &data.candidates {
        if c.tate_count.min(MAX_RHO) != bound {
            continue;
        }
        let k = normalized_square_class(c, data.p, norm)?;
        match &cls {
            None => cls = Some(k),
            Some(prev) if *prev == k => {}
            Some(_) => return None,
        }
    }
    cls
}

/// Combines per-prime data. The square-class refinement runs only when a
/// calibrated normalization is supplied.
pub fn combine_bounds(data: &[FrobeniusData], norm: Option<SquareClassNormalization>) -> UpperBound {
    let usable: Vec<&FrobeniusData> = data.iter().filter(|d| !d.candidates.is_empty()).collect();
    if usable.is_empty() {
        return UpperBound::trivial();
    }
    let per_prime: Vec<(u64, u32)> = usable.iter().map(|d| (d.p, per_prime_bound(d))).collect();
    let mut tau = per_prime.iter().map(|x| x.1).min().unwrap();
    let mut refined = false;
    if let Some(norm) = norm {
        for i in 0..usable.len() {
            for j in i + 1..usable.len() {
                let (bi, bj) = (per_prime[i].1, per_prime[j].1);
                if bi != bj || bi % 2 != 0 || bi == 0 || bi - 1 >= tau {
                    continue;
                }
                // the -1 step is valid only when both bounds are honest Tate counts
                if usable[i].candidates.iter().chain(usable[j].candidates.iter()).any(|c| c.tate_count > MAX_RHO) {
                    continue;
                }
                let (Some(ci), Some(cj)) = (unique_class(usable[i], bi, norm), unique_class(usable[j], bj, norm)) else {
                    continue;
                };
                if ci != cj {
                    tau = bi - 1;
                    refined = true;
                }
            }
        }
    }
    UpperBound { value: tau.max(1), provenance: TauProvenance::Counting { per_prime, refined } }
}

/// Sequential van Luijk bound: counts at each good prime up to the largest
/// feasible `n <= max_n`.
pub fn vanluijk_upper_bound(
    x: &DoubleSexticSurface,
    primes: &[u64],
    max_n: u32,
    max_points: u64,
    norm: Option<SquareClassNormalization>,
) -> (UpperBound, Vec<FrobeniusData>) {
    let mut data = Vec::new();
    if !x.field.is_rationals() {
        return (UpperBound::trivial(), data);
    }
    for &p in primes {
        let Ok(fp) = reduce_surface(x, p) else { continue };
        let n_max = max_n.min(max_feasible_n(p, max_points));
        let mut counts = Vec::new();
        for n in 1..=n_max {
            match count_points(&fp, p, n, max_points) {
                Ok(c) => counts.push(c),
                Err(_) => break,
            }
        }
        let candidates = frobenius_candidates(&counts, p).unwrap_or_default();
        data.push(FrobeniusData { p, counts, candidates });
    }
    (combine_bounds(&data, norm), data)
}

/// Reduces a rational sextic given by integer coefficients.
pub fn reduce_mod(f: &MPoly<BigRational>, p: u64) -> Option<MPoly<u64>> {
    let kf = PrimeField::new(p);
    f.try_map(&kf, |c| kf.from_rational(c))
}
