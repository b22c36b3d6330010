//! The lattice spanned by the divisors: basis, discriminant group, saturation.
//!
//! Vectors are rows; an isometry `S` acts by `x -> x S` and satisfies `S M S^T = M`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::intfac::{factorize, is_squarefree};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// Rank of the K3 lattice.
pub const K3_RANK: usize = 22;
/// Largest possible geometric Picard number in characteristic zero.
pub const MAX_PICARD: usize = 20;
/// Largest number of classes enumerated in one `Lambda_p`.
pub const LAMBDA_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    /// Gram matrix of the generators.
    pub generators: IntMatrix,
    /// Rows are basis vectors in generator coordinates.
    pub basis: IntMatrix,
    /// Gram matrix of the basis, `basis * generators * basis^T`.
    pub gram: IntMatrix,
    pub det: BigInt,
    /// Smith diagonal of `gram`.
    pub elementary_divisors: Vec<BigInt>,
    /// `(positive, negative)` inertia.
    pub signature: (usize, usize),
}

impl GramLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// A lattice given directly by a nondegenerate even basis Gram matrix.
    pub fn from_gram(m: &IntMatrix) -> Result<GramLattice> {
        check_even_symmetric(m)?;
        let det = linalg::det(m);
        if det.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(GramLattice {
            generators: m.clone(),
            basis: linalg::identity(m.len()),
            gram: m.clone(),
            elementary_divisors: smith_diagonal(m),
            signature: signature(m),
            det,
        })
    }

    /// Coordinates of every generator in the basis, as rows.
    pub fn generator_coordinates(&self) -> Option<IntMatrix> {
        let gu = linalg::mul(&self.generators, &linalg::transpose(&self.basis));
        gu.iter()
            .map(|row| {
                let (x, d) = linalg::solve_left(&self.gram, row)?;
                d.is_one().then_some(x)
            })
            .collect()
    }

    /// The isometry induced by a permutation of the generators, if it preserves the generator Gram matrix.
    pub fn induced_isometry(&self, perm: &[usize]) -> Option<IntMatrix> {
        let n = self.generators.len();
        if perm.len() != n || (0..n).any(|i| (0..n).any(|j| self.generators[perm[i]][perm[j]] != self.generators[i][j])) {
            return None;
        }
        let c = self.generator_coordinates()?;
        let s: IntMatrix = self
            .basis
            .iter()
            .map(|row| {
                (0..self.rank()).map(|k| (0..n).fold(BigInt::zero(), |acc, j| acc + &row[j] * &c[perm[j]][k])).collect()
            })
            .collect();
        is_isometry(&s, &self.gram).then_some(s)
    }
}

fn check_even_symmetric(g: &IntMatrix) -> Result<()> {
    let n = g.len();
    if g.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(String::from("Gram matrix is not square")));
    }
    for i in 0..n {
        for j in 0..i {
            if g[i][j] != g[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
        if g[i][i].is_odd() {
            return Err(Error::OddDiagonal(i));
        }
    }
    Ok(())
}

fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = linalg::smith(m);
    (0..m.len()).map(|i| s[i][i].clone()).collect()
}

/// Inertia of a symmetric matrix by congruence diagonalization over `Q`.
pub fn signature(m: &IntMatrix) -> (usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                // all active diagonal entries vanish; make one nonzero by e_i += e_j
                let found = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = found else {
                    break;
                };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = &a[i][p] / &d;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let v = &f * &a[p][k];
                a[i][k] -= v;
            }
            for k in 0..n {
                let v = &f * &a[k][p];
                a[k][i] -= v;
            }
        }
    }
    (pos, neg)
}

/// Basis, Gram matrix and invariants of the lattice spanned by generators with Gram matrix `g`.
pub fn rank_and_relations(g: &IntMatrix, hyperplane: Option<usize>) -> Result<GramLattice> {
    check_even_symmetric(g)?;
    let h = hyperplane.ok_or(Error::MissingHyperplane)?;
    if h >= g.len() || g[h][h] != BigInt::from(2) {
        return Err(Error::MissingHyperplane);
    }
    let (ech, u) = linalg::hermite(g);
    // rows of U with nonzero echelon rows complement the (saturated) kernel
    let basis: IntMatrix = ech.iter().zip(u).filter(|(r, _)| r.iter().any(|x| !x.is_zero())).map(|(_, b)| b).collect();
    let gram = linalg::mul(&linalg::mul(&basis, g), &linalg::transpose(&basis));
    let det = linalg::det(&gram);
    if det.is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let sig = signature(&gram);
    let r = gram.len();
    if sig != (1, r - 1) {
        return Err(Error::Invalid(format!("signature ({}, {}) is not hyperbolic", sig.0, sig.1)));
    }
    if r > MAX_PICARD {
        return Err(Error::Invalid(format!("rank {r} exceeds {MAX_PICARD}")));
    }
    Ok(GramLattice {
        generators: g.clone(),
        basis,
        elementary_divisors: smith_diagonal(&gram),
        gram,
        det,
        signature: sig,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors different from 1, increasing under divisibility.
    pub invariant_factors: Vec<BigInt>,
    pub length: usize,
    pub order: BigInt,
}

pub fn discriminant_group(l: &GramLattice) -> DiscriminantGroup {
    let inv: Vec<BigInt> = l.elementary_divisors.iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect();
    DiscriminantGroup { length: inv.len(), order: l.det.abs(), invariant_factors: inv }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstCheck {
    Saturated,
    NeedsMoreDivisors,
    Undecided,
}

pub fn saturation_first_checks(l: &GramLattice, tau: usize) -> Result<FirstCheck> {
    let r = l.rank();
    if r < tau {
        return Err(Error::RankBelowBound { rank: r, tau });
    }
    if r > tau {
        return Err(Error::Invalid(format!("rank {r} exceeds the upper bound {tau}")));
    }
    if is_squarefree(l.det.magnitude()) {
        return Ok(FirstCheck::Saturated);
    }
    if discriminant_group(l).length > K3_RANK - r {
        return Ok(FirstCheck::NeedsMoreDivisors);
    }
    Ok(FirstCheck::Undecided)
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Basis of `{x : x M = 0 mod p}` as vectors with entries in `[0, p)`.
pub fn kernel_mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let pp = p as u128;
    let inv = |a: u64| -> u64 {
        let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
        mod_p(&e.x, p)
    };
    // reduce M^T to row echelon form and read off the nullspace
    let mut a: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| mod_p(&m[j][i], p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let iv = inv(a[r][c]);
        for j in 0..n {
            a[r][j] = ((a[r][j] as u128 * iv as u128) % pp) as u64;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c] as u128;
                for j in 0..n {
                    let sub = (f * a[r][j] as u128) % pp;
                    a[i][j] = ((a[i][j] as u128 + pp - sub) % pp) as u64;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = ((pp - a[row][fc] as u128) % pp) as u64;
            }
            v
        })
        .collect()
}

/// `x^2` for an integer vector.
pub fn norm(m: &IntMatrix, x: &[BigInt]) -> BigInt {
    let n = m.len();
    let mut s = BigInt::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let row = (0..n).fold(BigInt::zero(), |acc, j| acc + &m[i][j] * &x[j]);
        s += &x[i] * row;
    }
    s
}

/// Whether a lift `x` of a class in the kernel mod `p` satisfies `x^2 = 0 mod 2 p^2`.
pub fn in_lambda_p(m: &IntMatrix, x: &[BigInt], p: u64) -> bool {
    let q = BigInt::from(2u64) * BigInt::from(p) * BigInt::from(p);
    norm(m, x).is_multiple_of(&q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaP {
    pub p: u64,
    pub kernel: Vec<Vec<u64>>,
    /// Nonzero classes of `Lambda_p`, entries in `[0, p)`.
    pub classes: Vec<Vec<u64>>,
    /// Set when the enumeration cap was hit; `classes` is then empty.
    pub capped: bool,
}

pub fn compute_lambda_p(l: &GramLattice, p: u64) -> LambdaP {
    lambda_p_of(&l.gram, p, LAMBDA_CAP)
}

pub fn lambda_p_of(m: &IntMatrix, p: u64, cap: u64) -> LambdaP {
    let kernel = kernel_mod_p(m, p);
    let dim = kernel.len() as u32;
    let total = (p as u128).checked_pow(dim);
    if total.is_none_or(|t| t > cap as u128) {
        return LambdaP { p, kernel, classes: Vec::new(), capped: true };
    }
    let total = total.unwrap() as u64;
    let n = m.len();
    let mut classes = Vec::new();
    for code in 1..total {
        let mut c = code;
        let mut v = vec![0u64; n];
        for b in &kernel {
            let a = c % p;
            c /= p;
            for j in 0..n {
                v[j] = ((v[j] as u128 + a as u128 * b[j] as u128) % p as u128) as u64;
            }
        }
        let x: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
        if in_lambda_p(m, &x, p) {
            classes.push(v);
        }
    }
    LambdaP { p, kernel, classes, capped: false }
}

pub fn is_isometry(s: &IntMatrix, m: &IntMatrix) -> bool {
    s.len() == m.len() && linalg::mul(&linalg::mul(s, m), &linalg::transpose(s)) == *m
}

fn apply_mod(x: &[u64], s: &IntMatrix, p: u64) -> Vec<u64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            let v = (0..n).fold(BigInt::zero(), |acc, i| acc + BigInt::from(x[i]) * &s[i][j]);
            mod_p(&v, p)
        })
        .collect()
}

/// Dimension of the `F_p`-span of the orbit of `x`.
pub fn orbit_span_dim(x: &[u64], isometries: &[IntMatrix], p: u64) -> usize {
    let mut queue = vec![x.to_vec()];
    let mut span = SpanModP::new(p);
    while let Some(v) = queue.pop() {
        if !span.insert(&v) {
            continue;
        }
        for s in isometries {
            queue.push(apply_mod(&v, s, p));
        }
    }
    span.rows.len()
}

/// Incremental row echelon basis over `F_p`.
struct SpanModP {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl SpanModP {
    fn new(p: u64) -> Self {
        SpanModP { p, rows: Vec::new() }
    }

    fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p as u128;
        let mut v = v.to_vec();
        for (piv, r) in &self.rows {
            let f = v[*piv] as u128;
            if f != 0 {
                for j in 0..v.len() {
                    v[j] = ((v[j] as u128 + p - (f * r[j] as u128) % p) % p) as u64;
                }
            }
        }
        let Some(piv) = v.iter().position(|&a| a != 0) else {
            return false;
        };
        let e = BigInt::from(v[piv]).extended_gcd(&BigInt::from(self.p));
        let iv = mod_p(&e.x, self.p) as u128;
        for a in &mut v {
            *a = ((*a as u128 * iv) % p) as u64;
        }
        // keep rows reduced at every pivot
        for (_, r) in &mut self.rows {
            let f = r[piv] as u128;
            if f != 0 {
                for j in 0..r.len() {
                    r[j] = ((r[j] as u128 + p - (f * v[j] as u128) % p) % p) as u64;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

/// Classes of `lambda` that survive `p^{2e} | det M`, with `e` the dimension of the orbit span.
pub fn orbit_filter(l: &GramLattice, lambda: &LambdaP, isometries: &[IntMatrix]) -> Result<Vec<Vec<u64>>> {
    for (i, s) in isometries.iter().enumerate() {
        if !is_isometry(s, &l.gram) {
            return Err(Error::NonIsometry(i));
        }
    }
    let p = BigInt::from(lambda.p);
    Ok(lambda
        .classes
        .iter()
        .filter(|x| {
            let e = orbit_span_dim(x, isometries, lambda.p) as u32;
            l.det.is_multiple_of(&p.pow(2 * e))
        })
        .cloned()
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Saturated,
    NeedsMoreDivisors,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReasonCode {
    SquarefreeDeterminant,
    LongDiscriminantGroup,
    AllPrimesFiltered,
    SurvivingClasses,
    EnumerationCap,
    PrimeTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub code: ReasonCode,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    pub p: BigUint,
    pub lambda: Option<LambdaP>,
    pub survivors: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    pub verdict: Verdict,
    pub first_check: FirstCheck,
    pub primes: Vec<PrimeReport>,
    pub reasons: Vec<Reason>,
}

pub fn saturation_verdict(l: &GramLattice, tau: usize, isometries: &[IntMatrix]) -> Result<SaturationReport> {
    let first = saturation_first_checks(l, tau)?;
    let reason = |code, text: String| Reason { code, text };
    match first {
        FirstCheck::Saturated => {
            return Ok(SaturationReport {
                verdict: Verdict::Saturated,
                first_check: first,
                primes: Vec::new(),
                reasons: vec![reason(ReasonCode::SquarefreeDeterminant, format!("det {} is square-free", l.det))],
            })
        }
        FirstCheck::NeedsMoreDivisors => {
            let dg = discriminant_group(l);
            return Ok(SaturationReport {
                verdict: Verdict::NeedsMoreDivisors,
                first_check: first,
                primes: Vec::new(),
                reasons: vec![reason(
                    ReasonCode::LongDiscriminantGroup,
                    format!("discriminant group has length {} > {}", dg.length, K3_RANK - l.rank()),
                )],
            });
        }
        FirstCheck::Undecided => {}
    }
    let mut primes = Vec::new();
    let mut reasons = Vec::new();
    let mut verdict = Verdict::Saturated;
    for (p, e) in factorize(l.det.magnitude()) {
        if e < 2 {
            continue;
        }
        let Some(pu) = p.to_u64().filter(|&x| x <= LAMBDA_CAP) else {
            reasons.push(reason(ReasonCode::PrimeTooLarge, format!("p = {p} is too large to enumerate")));
            primes.push(PrimeReport { p, lambda: None, survivors: Vec::new() });
            verdict = Verdict::Inconclusive;
            continue;
        };
        let lam = compute_lambda_p(l, pu);
        if lam.capped {
            reasons.push(reason(ReasonCode::EnumerationCap, format!("Lambda_{pu} has kernel dimension {}", lam.kernel.len())));
            verdict = Verdict::Inconclusive;
            primes.push(PrimeReport { p, lambda: Some(lam), survivors: Vec::new() });
            continue;
        }
        let survivors = orbit_filter(l, &lam, isometries)?;
        if !survivors.is_empty() {
            reasons.push(reason(ReasonCode::SurvivingClasses, format!("{} classes of Lambda_{pu} survive the orbit filter", survivors.len())));
            verdict = Verdict::Inconclusive;
        }
        primes.push(PrimeReport { p, lambda: Some(lam), survivors });
    }
    if verdict == Verdict::Saturated {
        reasons.push(reason(ReasonCode::AllPrimesFiltered, String::from("every Lambda_p is empty after filtering")));
    }
    Ok(SaturationReport { verdict, first_check: first, primes, reasons })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedLattice {
    U,
    A(usize),
    D(usize),
    E(usize),
}

impl NamedLattice {
    pub fn rank(&self) -> usize {
        match *self {
            NamedLattice::U => 2,
            NamedLattice::A(n) | NamedLattice::D(n) | NamedLattice::E(n) => n,
        }
    }

    /// Gram matrix at scale 1 (root lattices positive definite).
    pub fn gram(&self) -> IntMatrix {
        let n = self.rank();
        let mut m = linalg::zeros(n, n);
        let edge = |m: &mut IntMatrix, i: usize, j: usize| {
            m[i][j] = BigInt::from(-1);
            m[j][i] = BigInt::from(-1);
        };
        match *self {
            NamedLattice::U => {
                m[0][1] = BigInt::one();
                m[1][0] = BigInt::one();
                return m;
            }
            NamedLattice::A(_) => {
                for i in 0..n.saturating_sub(1) {
                    edge(&mut m, i, i + 1);
                }
            }
            NamedLattice::D(_) => {
                for i in 0..n - 2 {
                    edge(&mut m, i, i + 1);
                }
                edge(&mut m, n - 3, n - 1);
            }
            NamedLattice::E(_) => {
                // chain 0..n-2 with node n-1 attached to node 2
                for i in 0..n - 2 {
                    edge(&mut m, i, i + 1);
                }
                edge(&mut m, 2, n - 1);
            }
        }
        for i in 0..n {
            m[i][i] = BigInt::from(2);
        }
        m
    }

    fn signature(&self, scale: i64) -> (usize, usize) {
        match self {
            NamedLattice::U => (1, 1),
            _ if scale > 0 => (self.rank(), 0),
            _ => (0, self.rank()),
        }
    }
}

impl core::fmt::Display for NamedLattice {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NamedLattice::U => write!(f, "U"),
            NamedLattice::A(n) => write!(f, "A{n}"),
            NamedLattice::D(n) => write!(f, "D{n}"),
            NamedLattice::E(n) => write!(f, "E{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedDecomposition {
    pub parts: Vec<(NamedLattice, i64)>,
    /// Block diagonal Gram matrix of the named sum.
    pub gram: IntMatrix,
}

/// Prime-power cyclic factors of the discriminant group of `m`, sorted.
fn primary_parts(m: &IntMatrix) -> Vec<BigUint> {
    let mut out = Vec::new();
    for d in smith_diagonal(m) {
        let d = d.magnitude().clone();
        if d.is_zero() || d.is_one() {
            continue;
        }
        for (p, e) in factorize(&d) {
            out.push(p.pow(e));
        }
    }
    out.sort();
    out
}

fn scaled(m: &IntMatrix, s: i64) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|x| x * BigInt::from(s)).collect()).collect()
}

fn block_sum(parts: &[(NamedLattice, i64)]) -> IntMatrix {
    let n: usize = parts.iter().map(|(l, _)| l.rank()).sum();
    let mut m = linalg::zeros(n, n);
    let mut off = 0;
    for (l, s) in parts {
        let g = scaled(&l.gram(), *s);
        for i in 0..g.len() {
            for j in 0..g.len() {
                m[off + i][off + j] = g[i][j].clone();
            }
        }
        off += g.len();
    }
    m
}

/// Search budget in visited nodes.
const NAMED_SEARCH_NODES: usize = 200_000;

struct Piece {
    lat: NamedLattice,
    scale: i64,
    sig: (usize, usize),
    det: BigUint,
    primary: Vec<BigUint>,
}

/// A sum of scaled `U` and ADE lattices with the rank, signature, parity and discriminant group of `l`.
pub fn decompose_named(l: &GramLattice) -> Option<NamedDecomposition> {
    let r = l.rank();
    let dg = discriminant_group(l);
    // rank-1 lattices are determined by their determinant
    if r < dg.length + 2 && r != 1 {
        return None;
    }
    let target = primary_parts(&l.gram);
    let mut lats = vec![NamedLattice::U, NamedLattice::E(8), NamedLattice::E(7), NamedLattice::E(6)];
    for n in (4..=MAX_PICARD).rev() {
        lats.push(NamedLattice::D(n));
    }
    for n in (1..=MAX_PICARD).rev() {
        lats.push(NamedLattice::A(n));
    }
    let mut pieces = Vec::new();
    for lat in lats {
        if lat.rank() > r {
            continue;
        }
        let scales: &[i64] = if lat == NamedLattice::U { &[1, 2, 3] } else { &[-1, 1, -2, 2, -3, 3] };
        for &s in scales {
            let g = scaled(&lat.gram(), s);
            pieces.push(Piece { lat, scale: s, sig: lat.signature(s), det: linalg::det(&g).magnitude().clone(), primary: primary_parts(&g) });
        }
    }
    let mut chosen = Vec::new();
    let mut nodes = 0;
    let found = search(&pieces, 0, r, l.signature, l.det.magnitude(), &target, &mut chosen, &mut nodes);
    if !found {
        return None;
    }
    let parts: Vec<(NamedLattice, i64)> = chosen.iter().map(|&i| (pieces[i].lat, pieces[i].scale)).collect();
    let gram = block_sum(&parts);
    Some(NamedDecomposition { parts, gram })
}

#[allow(clippy::too_many_arguments)]
fn search(
    pieces: &[Piece],
    start: usize,
    rank_left: usize,
    sig_left: (usize, usize),
    det_left: &BigUint,
    target: &[BigUint],
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
) -> bool {
    *nodes += 1;
    if *nodes > NAMED_SEARCH_NODES {
        return false;
    }
    if rank_left == 0 {
        if !det_left.is_one() {
            return false;
        }
        let mut got: Vec<BigUint> = chosen.iter().flat_map(|&i| pieces[i].primary.iter().cloned()).collect();
        got.sort();
        return got == target;
    }
    for i in start..pieces.len() {
        let pc = &pieces[i];
        if pc.lat.rank() > rank_left || pc.sig.0 > sig_left.0 || pc.sig.1 > sig_left.1 || !det_left.is_multiple_of(&pc.det) {
            continue;
        }
        chosen.push(i);
        let d = det_left / &pc.det;
        if search(pieces, i, rank_left - pc.lat.rank(), (sig_left.0 - pc.sig.0, sig_left.1 - pc.sig.1), &d, target, chosen, nodes) {
            return true;
        }
        chosen.pop();
        if *nodes > NAMED_SEARCH_NODES {
            return false;
        }
    }
    false
}
