//! Dense univariate polynomials over an arbitrary [`Field`].

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial is the empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly<E> {
    c: Vec<E>,
}

impl<E: Clone + PartialEq> UPoly<E> {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(k: &F, mut c: Vec<E>) -> Self {
        while c.last().is_some_and(|x| k.is_zero(x)) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, a: E) -> Self {
        Self::from_coeffs(k, vec![a])
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self::constant(k, k.one())
    }

    /// `a * x^d`.
    pub fn monomial<F: Field<Elem = E>>(k: &F, a: E, d: usize) -> Self {
        if k.is_zero(&a) {
            return Self::zero();
        }
        let mut c = vec![k.zero(); d + 1];
        c[d] = a;
        UPoly { c }
    }

    pub fn x<F: Field<Elem = E>>(k: &F) -> Self {
        Self::monomial(k, k.one(), 1)
    }

    /// `x - a`.
    pub fn linear_root<F: Field<Elem = E>>(k: &F, a: &E) -> Self {
        Self::from_coeffs(k, vec![k.neg(a), k.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1` convention folded into `isize`.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.c.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn lc(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(k, c)
    }

    pub fn sub<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => k.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => k.neg(b),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(k, c)
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        UPoly { c: self.c.iter().map(|a| k.neg(a)).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, a: &E, k: &F) -> Self {
        if k.is_zero(a) {
            return Self::zero();
        }
        UPoly { c: self.c.iter().map(|x| k.mul(x, a)).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                let t = k.mul(a, b);
                c[i + j] = k.add(&c[i + j], &t);
            }
        }
        Self::from_coeffs(k, c)
    }

    pub fn square<F: Field<Elem = E>>(&self, k: &F) -> Self {
        self.mul(self, k)
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: u32, k: &F) -> Self {
        let mut acc = Self::one(k);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(k);
            }
        }
        acc
    }

    /// `x^d * self`.
    pub fn shift<F: Field<Elem = E>>(&self, d: usize, k: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); d];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }

    /// Euclidean division over the field.
    pub fn divrem<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let dl = d.c.len();
        let inv_lc = k.inv(d.lc().unwrap()).expect("nonzero lc");
        let mut r = self.c.clone();
        let mut q = vec![k.zero(); self.c.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dl - 1];
            if k.is_zero(top) {
                continue;
            }
            let f = k.mul(top, &inv_lc);
            for j in 0..dl {
                let t = k.mul(&f, &d.c[j]);
                r[i + j] = k.sub(&r[i + j], &t);
            }
            q[i] = f;
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(k, q), Self::from_coeffs(k, r))
    }

    pub fn rem<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> Self {
        self.divrem(d, k).1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> Option<Self> {
        let (q, r) = self.divrem(d, k);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) => {
                let li = k.inv(l).unwrap();
                self.scale(&li, k)
            }
        }
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.lc().is_some_and(|l| k.is_one(l))
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, k);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, k);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1, k), k);
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1, k), k);
            t0 = t1;
            t1 = t;
        }
        match r0.lc().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = k.inv(&l).unwrap();
                (r0.scale(&li, k), s0.scale(&li, k), t0.scale(&li, k))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        let c = (1..self.c.len())
            .map(|i| k.mul(&self.c[i], &k.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(k, c)
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, k: &F) -> E {
        let mut acc = k.zero();
        for a in self.c.iter().rev() {
            acc = k.add(&k.mul(&acc, x), a);
        }
        acc
    }

    /// `self(g)`.
    pub fn compose<F: Field<Elem = E>>(&self, g: &Self, k: &F) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g, k).add(&Self::constant(k, a.clone()), k);
        }
        acc
    }

    /// `self(x + a)`.
    pub fn taylor_shift<F: Field<Elem = E>>(&self, a: &E, k: &F) -> Self {
        let g = Self::from_coeffs(k, vec![a.clone(), k.one()]);
        self.compose(&g, k)
    }

    /// `x^deg * self(1/x)` with respect to the nominal degree `n`.
    pub fn reverse<F: Field<Elem = E>>(&self, n: usize, k: &F) -> Self {
        let mut c = vec![k.zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            assert!(i <= n, "nominal degree too small for reverse");
            c[n - i] = a.clone();
        }
        Self::from_coeffs(k, c)
    }

    pub fn map<F2: Field, G: Fn(&E) -> F2::Elem>(&self, k2: &F2, g: G) -> UPoly<F2::Elem> {
        UPoly::from_coeffs(k2, self.c.iter().map(g).collect())
    }

    /// Fallible coefficient map (e.g. reduction modulo a prime).
    pub fn try_map<F2: Field, G: Fn(&E) -> Option<F2::Elem>>(&self, k2: &F2, g: G) -> Option<UPoly<F2::Elem>> {
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            c.push(g(a)?);
        }
        Some(UPoly::from_coeffs(k2, c))
    }

    /// Resultant over the field, with `Res(a, b) = lc(a)^deg b * prod b(roots of a)`.
    pub fn resultant<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> E {
        if self.is_zero() || o.is_zero() {
            return k.zero();
        }
        let mut a = self.clone();
        let mut b = o.clone();
        let mut acc = k.one();
        loop {
            let da = a.degree().unwrap();
            let db = match b.degree() {
                None => return k.zero(),
                Some(d) => d,
            };
            if db == 0 {
                return k.mul(&acc, &k.pow(&b.c[0], da as u64));
            }
            if da == 0 {
                return k.mul(&acc, &k.pow(&a.c[0], db as u64));
            }
            if da < db {
                // Res(a,b) = (-1)^(da db) Res(b,a)
                if (da * db) % 2 == 1 {
                    acc = k.neg(&acc);
                }
                core::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b, k);
            if r.is_zero() {
                return k.zero();
            }
            let dr = r.degree().unwrap();
            // Res(a,b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
            let f = k.pow(b.lc().unwrap(), (da - dr) as u64);
            acc = k.mul(&acc, &f);
            if (da * db) % 2 == 1 {
                acc = k.neg(&acc);
            }
            a = b;
            b = r;
        }
    }

    /// Squarefree decomposition (Yun); valid in characteristic zero or when
    /// the degree is below the characteristic. Returns `(unit, [(g_i, i)])`
    /// with `self = unit * prod g_i^i`, each `g_i` monic squarefree, pairwise coprime.
    pub fn squarefree_decomposition<F: Field<Elem = E>>(&self, k: &F) -> (E, Vec<(Self, u32)>) {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let unit = self.lc().unwrap().clone();
        let f = self.monic(k);
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return (unit, out);
        }
        let fp = f.derivative(k);
        let a = f.gcd(&fp, k);
        let mut b = f.div_exact(&a, k).unwrap();
        let mut c = fp.div_exact(&a, k).unwrap();
        let mut d = c.sub(&b.derivative(k), k);
        let mut i = 1u32;
        loop {
            let g = b.gcd(&d, k);
            if g.degree() != Some(0) {
                out.push((g.clone(), i));
            }
            b = b.div_exact(&g, k).unwrap();
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&g, k).unwrap();
            d = c.sub(&b.derivative(k), k);
            i += 1;
        }
        (unit, out)
    }

    /// Squarefree part (product of distinct monic irreducible factors).
    pub fn squarefree_part<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let (_, parts) = self.squarefree_decomposition(k);
        parts.iter().fold(Self::one(k), |acc, (g, _)| acc.mul(g, k))
    }
}

/// Lagrange-free Newton interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate<F: Field>(xs: &[F::Elem], ys: &[F::Elem], k: &F) -> UPoly<F::Elem> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    // divided differences
    let mut dd: Vec<F::Elem> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = k.sub(&dd[i], &dd[i - 1]);
            let den = k.sub(&xs[i], &xs[i - j]);
            dd[i] = k.div(&num, &den).expect("interpolation nodes must be distinct");
        }
    }
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        acc = acc
            .mul(&UPoly::linear_root(k, &xs[i]), k)
            .add(&UPoly::constant(k, dd[i].clone()), k);
    }
    acc
}
