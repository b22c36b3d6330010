//! Sparse multivariate polynomials over a [`Field`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::field::Field;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Ordered variable names with optional weights (default 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
}

impl Vars {
    pub fn new(names: &[&str]) -> Arc<Vars> {
        Arc::new(Vars { names: names.iter().map(|s| s.to_string()).collect(), weights: vec![1; names.len()] })
    }

    pub fn weighted(names: &[&str], weights: &[u32]) -> Arc<Vars> {
        assert_eq!(names.len(), weights.len());
        Arc::new(Vars { names: names.iter().map(|s| s.to_string()).collect(), weights: weights.to_vec() })
    }

    /// `x, y, z`.
    pub fn xyz() -> Arc<Vars> {
        Self::new(&["x", "y", "z"])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrLex,
    DegRevLex,
    /// The first `n` variables form an eliminated block compared first;
    /// degrevlex within each block.
    Block(usize),
}

fn degrevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
            MonomialOrder::DegRevLex => degrevlex_cmp(a, b),
            MonomialOrder::Block(n) => {
                let n = (*n).min(a.len());
                degrevlex_cmp(&a[..n], &b[..n]).then_with(|| degrevlex_cmp(&a[n..], &b[n..]))
            }
        }
    }
}

/// Terms keyed by exponent vector; zero coefficients are never stored, so
/// equal polynomials are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<E> {
    vars: Arc<Vars>,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq + Eq + core::fmt::Debug> MPoly<E> {
    pub fn zero(vars: &Arc<Vars>) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant<F: Field<Elem = E>>(vars: &Arc<Vars>, c: E, k: &F) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c, k)
    }

    pub fn one<F: Field<Elem = E>>(vars: &Arc<Vars>, k: &F) -> Self {
        Self::constant(vars, k.one(), k)
    }

    pub fn monomial<F: Field<Elem = E>>(vars: &Arc<Vars>, m: Monomial, c: E, k: &F) -> Self {
        assert_eq!(m.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !k.is_zero(&c) {
            terms.insert(m, c);
        }
        MPoly { vars: vars.clone(), terms }
    }

    pub fn var<F: Field<Elem = E>>(vars: &Arc<Vars>, i: usize, k: &F) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        Self::monomial(vars, m, k.one(), k)
    }

    pub fn from_terms<F: Field<Elem = E>>(vars: &Arc<Vars>, ts: impl IntoIterator<Item = (Monomial, E)>, k: &F) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in ts {
            p.add_term(m, c, k);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, m: &[u32], k: &F) -> E {
        self.terms.get(m).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, m: Monomial, c: E, k: &F) {
        if k.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = k.add(v, &c);
                if k.is_zero(v) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_vars(&self, o: &Self) {
        assert!(Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars, "polynomials over different variable sets");
    }

    pub fn add<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        self.check_vars(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone(), k);
        }
        r
    }

    pub fn sub<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        self.check_vars(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), k.neg(c), k);
        }
        r
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, a: &E, k: &F) -> Self {
        if k.is_zero(a) {
            return Self::zero(&self.vars);
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), k.mul(c, a))).collect() }
    }

    pub fn mul_term<F: Field<Elem = E>>(&self, m: &[u32], c: &E, k: &F) -> Self {
        if k.is_zero(c) {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, cc)| (mm.iter().zip(m).map(|(a, b)| a + b).collect(), k.mul(cc, c)))
            .collect();
        MPoly { vars: self.vars.clone(), terms }
    }

    pub fn mul<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        self.check_vars(o);
        let mut r = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, k.mul(c1, c2), k);
            }
        }
        r
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: u32, k: &F) -> Self {
        let mut acc = Self::one(&self.vars, k);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, k);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, k);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn weighted_degree_of(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.vars.weights).map(|(e, w)| e * w).sum()
    }

    /// Weighted homogeneity of the given degree (the zero polynomial qualifies).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.weighted_degree_of(m) == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| self.weighted_degree_of(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).max()
    }

    /// True when every exponent of `var` is even.
    pub fn only_even_powers_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m[var] % 2 == 0)
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|m| m[i] > 0)).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value<F: Field<Elem = E>>(&self, k: &F) -> Option<E> {
        if self.is_constant() {
            Some(self.coeff(&vec![0; self.nvars()], k))
        } else {
            None
        }
    }

    /// Leading term under `order`.
    pub fn leading<'a>(&'a self, order: &MonomialOrder) -> Option<(&'a Monomial, &'a E)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn derivative<F: Field<Elem = E>>(&self, var: usize, k: &F) -> Self {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[var] -= 1;
            r.add_term(mm, k.mul(c, &k.from_i64(m[var] as i64)), k);
        }
        r
    }

    pub fn eval<F: Field<Elem = E>>(&self, pt: &[E], k: &F) -> E {
        assert_eq!(pt.len(), self.nvars());
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = k.mul(&t, &k.pow(&pt[i], e as u64));
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }

    /// Substitute univariate polynomials for every variable.
    pub fn eval_upoly<F: Field<Elem = E>>(&self, subs: &[UPoly<E>], k: &F) -> UPoly<E> {
        assert_eq!(subs.len(), self.nvars());
        let mut cache: Vec<Vec<UPoly<E>>> = subs.iter().map(|s| vec![UPoly::one(k), s.clone()]).collect();
        let mut acc = UPoly::zero();
        for (m, c) in &self.terms {
            let mut t = UPoly::constant(k, c.clone());
            for (i, &e) in m.iter().enumerate() {
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(&subs[i], k);
                    cache[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&cache[i][e], k);
                }
            }
            acc = acc.add(&t, k);
        }
        acc
    }

    /// Substitute polynomials (over a possibly different variable set) for every variable.
    pub fn compose<F: Field<Elem = E>>(&self, subs: &[MPoly<E>], k: &F) -> MPoly<E> {
        assert_eq!(subs.len(), self.nvars());
        let target = subs[0].vars.clone();
        let mut cache: Vec<Vec<MPoly<E>>> = subs.iter().map(|s| vec![MPoly::one(&target, k), s.clone()]).collect();
        let mut acc = MPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&target, c.clone(), k);
            for (i, &e) in m.iter().enumerate() {
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(&subs[i], k);
                    cache[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&cache[i][e], k);
                }
            }
            acc = acc.add(&t, k);
        }
        acc
    }

    /// Evaluate one variable at a field element.
    pub fn specialize<F: Field<Elem = E>>(&self, var: usize, val: &E, k: &F) -> Self {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let e = mm[var];
            mm[var] = 0;
            r.add_term(mm, k.mul(c, &k.pow(val, e as u64)), k);
        }
        r
    }

    /// Coefficients with respect to `var` (lowest first); each coefficient is
    /// free of `var` but lives in the same ring.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let e = mm[var] as usize;
            mm[var] = 0;
            out[e].terms.insert(mm, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Inverse of [`coefficients_in`].
    pub fn from_coefficients_in<F: Field<Elem = E>>(vars: &Arc<Vars>, var: usize, cs: &[Self], k: &F) -> Self {
        let mut r = Self::zero(vars);
        for (e, c) in cs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut mm = m.clone();
                mm[var] += e as u32;
                r.add_term(mm, a.clone(), k);
            }
        }
        r
    }

    /// Univariate polynomial if only `var` occurs.
    pub fn to_upoly<F: Field<Elem = E>>(&self, var: usize, k: &F) -> Option<UPoly<E>> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut c = vec![k.zero(); d + 1];
        for (m, a) in &self.terms {
            if m.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            c[m[var] as usize] = a.clone();
        }
        Some(UPoly::from_coeffs(k, c))
    }

    pub fn from_upoly<F: Field<Elem = E>>(vars: &Arc<Vars>, var: usize, p: &UPoly<E>, k: &F) -> Self {
        let mut r = Self::zero(vars);
        for (i, c) in p.coeffs().iter().enumerate() {
            let mut m = vec![0; vars.len()];
            m[var] = i as u32;
            r.add_term(m, c.clone(), k);
        }
        r
    }

    /// Map coefficients into another field.
    pub fn map<F2: Field, G: Fn(&E) -> F2::Elem>(&self, k2: &F2, g: G) -> MPoly<F2::Elem> {
        let mut r = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), g(c), k2);
        }
        r
    }

    pub fn try_map<F2: Field, G: Fn(&E) -> Option<F2::Elem>>(&self, k2: &F2, g: G) -> Option<MPoly<F2::Elem>> {
        let mut r = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), g(c)?, k2);
        }
        Some(r)
    }

    /// Same polynomial over a different (compatible) variable set.
    pub fn with_vars(&self, vars: &Arc<Vars>, index_map: &[usize]) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = vec![0; vars.len()];
            for (i, &e) in m.iter().enumerate() {
                mm[index_map[i]] += e;
            }
            terms.insert(mm, c.clone());
        }
        MPoly { vars: vars.clone(), terms }
    }

    /// Make the leading coefficient (largest monomial in lex) equal to one.
    pub fn monic_lex<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => {
                let ci = k.inv(c).unwrap();
                self.scale(&ci, k)
            }
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.terms.iter().next_back().unwrap();
        let dci = k.inv(dc).unwrap();
        let mut r = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((m, c)) = r.terms.iter().next_back() {
            if m.iter().zip(dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(dm).map(|(a, b)| a - b).collect();
            let qc = k.mul(c, &dci);
            r = r.sub(&d.mul_term(&qm, &qc, k), k);
            q.add_term(qm, qc, k);
        }
        Some(q)
    }
}

/// Pseudo-remainder of `a` by `b` as dense coefficient lists over a ring of polynomials.
fn prem<E, F>(a: &[MPoly<E>], b: &[MPoly<E>], k: &F) -> Vec<MPoly<E>>
where
    E: Clone + PartialEq + Eq + core::fmt::Debug,
    F: Field<Elem = E>,
{
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MPoly<E>> = a.to_vec();
    let mut e = (a.len() - b.len() + 1) as i64;
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb, k);
        }
        for (j, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr, k);
            let idx = dr - db + j;
            r[idx] = r[idx].sub(&t, k);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32, k);
        for c in r.iter_mut() {
            *c = c.mul(&f, k);
        }
    }
    r
}

/// `Res_var(p, q)` with the Sylvester convention `Res(a, b) = lc(a)^deg b * prod b(roots of a)`,
/// computed by the subresultant algorithm over the ring of the remaining variables.
pub fn resultant_eliminate<E, F>(p: &MPoly<E>, q: &MPoly<E>, var: usize, k: &F) -> Result<MPoly<E>>
where
    E: Clone + PartialEq + Eq + core::fmt::Debug,
    F: Field<Elem = E>,
{
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vars = p.vars().clone();
    let dp = p.degree_in(var).unwrap();
    let dq = q.degree_in(var).unwrap();
    if dp == 0 && dq == 0 {
        return Err(Error::DegenerateResultant);
    }
    if dp == 0 {
        return Ok(p.pow(dq, k));
    }
    if dq == 0 {
        return Ok(q.pow(dp, k));
    }
    let mut a = p.coefficients_in(var);
    let mut b = q.coefficients_in(var);
    let mut sign = false;
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
        if (dp * dq) % 2 == 1 {
            sign = true;
        }
    }
    let one = MPoly::one(&vars, k);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b, k);
        if r.is_empty() {
            return Ok(MPoly::zero(&vars));
        }
        let denom = g.mul(&h.pow(delta, k), k);
        let r: Vec<MPoly<E>> = r.iter().map(|c| c.div_exact(&denom, k).expect("subresultant division is exact")).collect();
        a = b;
        b = r;
        g = a.last().unwrap().clone();
        // h = g^delta / h^(delta-1)
        h = if delta == 0 {
            h
        } else {
            g.pow(delta, k).div_exact(&h.pow(delta - 1, k), k).expect("exact")
        };
        if b.len() == 1 {
            let da = (a.len() - 1) as u32;
            let lb = &b[0];
            let num = lb.pow(da, k);
            let res = if da == 0 { num } else { num.div_exact(&h.pow(da - 1, k), k).expect("exact") };
            return Ok(if sign { res.neg(k) } else { res });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn xy() -> Arc<Vars> {
        Vars::new(&["x", "y"])
    }

    fn p(vars: &Arc<Vars>, ts: &[(&[u32], i64)]) -> MPoly<BigRational> {
        MPoly::from_terms(vars, ts.iter().map(|(m, c)| (m.to_vec(), q(*c))), &Rationals)
    }

    #[test]
    fn resultant_examples() {
        let v = xy();
        let k = Rationals;
        // Res_y(y - x, y^2 - x) = x^2 - x
        let a = p(&v, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let b = p(&v, &[(&[0, 2], 1), (&[1, 0], -1)]);
        let r = resultant_eliminate(&a, &b, 1, &k).unwrap();
        assert_eq!(r, p(&v, &[(&[2, 0], 1), (&[1, 0], -1)]));
        // Res_y(y, y) = 0
        let y = p(&v, &[(&[0, 1], 1)]);
        assert!(resultant_eliminate(&y, &y, 1, &k).unwrap().is_zero());
        // Res_y(y - 1, y + 1) = 2
        let a = p(&v, &[(&[0, 1], 1), (&[0, 0], -1)]);
        let b = p(&v, &[(&[0, 1], 1), (&[0, 0], 1)]);
        assert_eq!(resultant_eliminate(&a, &b, 1, &k).unwrap(), p(&v, &[(&[0, 0], 2)]));
        // degenerate
        let c = p(&v, &[(&[1, 0], 1)]);
        assert_eq!(resultant_eliminate(&c, &c, 1, &k), Err(Error::DegenerateResultant));
    }

    #[test]
    fn resultant_matches_upoly_on_specialization() {
        let v = xy();
        let k = Rationals;
        let a = p(&v, &[(&[0, 3], 2), (&[1, 1], 3), (&[2, 0], -1), (&[0, 0], 5)]);
        let b = p(&v, &[(&[0, 2], 1), (&[1, 1], -2), (&[0, 0], 7), (&[3, 0], 1)]);
        let r = resultant_eliminate(&a, &b, 1, &k).unwrap();
        for x0 in -3..4 {
            let x0 = q(x0);
            let ua = a.specialize(0, &x0, &k).to_upoly(1, &k).unwrap();
            let ub = b.specialize(0, &x0, &k).to_upoly(1, &k).unwrap();
            let expect = ua.resultant(&ub, &k);
            assert_eq!(r.eval(&[x0.clone(), q(0)], &k), expect);
        }
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let k = Rationals;
        let a = p(&v, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(&v, &[(&[1, 0], 1), (&[0, 1], -1), (&[0, 0], 3)]);
        let ab = a.mul(&b, &k);
        assert_eq!(ab.div_exact(&a, &k), Some(b.clone()));
        assert_eq!(ab.add(&MPoly::one(&v, &k), &k).div_exact(&a, &k), None);
    }

    #[test]
    fn orders() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        let b = MonomialOrder::Block(1);
        assert_eq!(b.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
    }
}
