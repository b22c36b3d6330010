//! Divisor classes on `X`: the hyperplane class and the two components of the
//! pullback of every plane curve that meets the branch sextic with even
//! multiplicity everywhere, together with their orbits under `G` and Galois.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arith::factor::{compositum, extend, factor_over, galois_closure, gcd_over, relative_automorphisms, roots_over, KPoly};
use crate::arith::field::Field;
use crate::arith::groebner::groebner_basis;
use crate::arith::mpoly::{resultant_eliminate, MPoly, MonomialOrder, Vars};
use crate::arith::numfield::{Embedding, NfElem, NumberField};
use crate::arith::square::{is_square_in_closure, SquareWitness};
use crate::arith::upoly::{interpolate, UPoly};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::surface::{det3, DoubleSexticSurface, Poly, SurfaceAutomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisorKind {
    Hyperplane,
    SplitComponent,
    DelPezzoPullback,
    UserFormal,
}

/// `f(X_t, Y_t, Z_t) = c s(t)^2`; the component is `w = sign * sqrt_c * s(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftBranch {
    pub c: NfElem,
    pub sqrt_c: NfElem,
    pub s: KPoly,
    pub sign: i8,
}

impl LiftBranch {
    pub fn w(&self, k: &NumberField) -> KPoly {
        let a = if self.sign < 0 { k.neg(&self.sqrt_c) } else { self.sqrt_c.clone() };
        self.s.scale(&a, k)
    }

    pub fn value(&self, t: &NfElem, k: &NumberField) -> NfElem {
        self.w(k).eval(t, k)
    }

    pub fn opposite(&self) -> LiftBranch {
        LiftBranch { sign: -self.sign, ..self.clone() }
    }

    fn map(&self, e: &Embedding) -> LiftBranch {
        LiftBranch { c: e.apply(&self.c), sqrt_c: e.apply(&self.sqrt_c), s: e.apply_poly(&self.s), sign: self.sign }
    }
}

#[derive(Clone, Debug)]
pub struct DivisorRecord {
    pub kind: DivisorKind,
    pub label: String,
    pub degree: u32,
    pub plane_curve: Option<Poly>,
    pub param: Option<[KPoly; 3]>,
    pub lift: Option<LiftBranch>,
    /// A field over which the record was first found (up to isomorphism).
    pub field_of_definition: NumberField,
    /// Declared self-intersection of a user-formal class.
    pub self_intersection: Option<i64>,
    /// Declared intersections of a user-formal class with other records, by label.
    pub declared: Vec<(String, i64)>,
}

fn map_poly(p: &Poly, e: &Embedding) -> Poly {
    p.map(&e.dst, |c| e.apply(c))
}

impl DivisorRecord {
    pub fn hyperplane(k: &NumberField) -> Self {
        DivisorRecord {
            kind: DivisorKind::Hyperplane,
            label: String::from("H"),
            degree: 1,
            plane_curve: None,
            param: None,
            lift: None,
            field_of_definition: k.clone(),
            self_intersection: Some(2),
            declared: Vec::new(),
        }
    }

    pub fn user_formal(k: &NumberField, label: &str, self_intersection: Option<i64>, declared: Vec<(String, i64)>) -> Self {
        DivisorRecord {
            kind: DivisorKind::UserFormal,
            label: label.to_string(),
            degree: 0,
            plane_curve: None,
            param: None,
            lift: None,
            field_of_definition: k.clone(),
            self_intersection,
            declared,
        }
    }

    pub fn is_split(&self) -> bool {
        self.kind == DivisorKind::SplitComponent
    }

    pub fn map(&self, e: &Embedding) -> DivisorRecord {
        DivisorRecord {
            plane_curve: self.plane_curve.as_ref().map(|p| map_poly(p, e)),
            param: self.param.as_ref().map(|p| [e.apply_poly(&p[0]), e.apply_poly(&p[1]), e.apply_poly(&p[2])]),
            lift: self.lift.as_ref().map(|l| l.map(e)),
            ..self.clone()
        }
    }

    /// Re-checks the defining identities of a split component over `k`.
    pub fn verify(&self, f: &Poly, k: &NumberField) -> bool {
        if !self.is_split() {
            return true;
        }
        let (Some(curve), Some(param), Some(lift)) = (&self.plane_curve, &self.param, &self.lift) else {
            return false;
        };
        if !curve.eval_upoly(param, k).is_zero() {
            return false;
        }
        if k.square(&lift.sqrt_c) != lift.c {
            return false;
        }
        let lhs = f.eval_upoly(param, k);
        lhs == lift.s.square(k).scale(&lift.c, k)
    }

    fn curve_key(&self, k: &NumberField) -> Option<Poly> {
        self.plane_curve.as_ref().map(|c| c.monic_lex(k))
    }

    /// Image under `(P : w) -> (M P : sign lambda w)` with `a` over the field of the record.
    pub fn transform(&self, a: &SurfaceAutomorphism, k: &NumberField) -> DivisorRecord {
        if !self.is_split() {
            return self.clone();
        }
        let param = self.param.as_ref().unwrap();
        let new_param: [KPoly; 3] = core::array::from_fn(|i| {
            (0..3).fold(UPoly::zero(), |acc: KPoly, j| acc.add(&param[j].scale(&a.matrix[i][j], k), k))
        });
        let inv = inverse3(&a.matrix, k);
        let ia = SurfaceAutomorphism { matrix: inv, lambda: k.one(), sign: 1 };
        let curve = ia.apply(self.plane_curve.as_ref().unwrap(), k).monic_lex(k);
        let l = self.lift.as_ref().unwrap();
        let lift = LiftBranch {
            c: k.mul(&k.square(&a.lambda), &l.c),
            sqrt_c: k.mul(&a.lambda, &l.sqrt_c),
            s: l.s.clone(),
            sign: l.sign * a.sign,
        };
        DivisorRecord { plane_curve: Some(curve), param: Some(new_param), lift: Some(lift), ..self.clone() }
    }
}

fn inverse3(m: &[[NfElem; 3]; 3], k: &NumberField) -> [[NfElem; 3]; 3] {
    let d = k.inv(&det3(m, k)).expect("automorphism matrix is invertible");
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        k.sub(&k.mul(&m[r0][c0], &m[r1][c1]), &k.mul(&m[r0][c1], &m[r1][c0]))
    };
    // inverse is the transposed cofactor matrix over the determinant
    core::array::from_fn(|i| core::array::from_fn(|j| k.mul(&cof(j, i), &d)))
}

/// Whether two components over the same plane curve coincide (`Some(true)`),
/// are opposite (`Some(false)`), or lie over different curves (`None`).
pub fn same_component(a: &DivisorRecord, b: &DivisorRecord, k: &NumberField) -> Option<bool> {
    if !a.is_split() || !b.is_split() || a.curve_key(k)? != b.curve_key(k)? {
        return None;
    }
    let (pa, pb) = (a.param.as_ref()?, b.param.as_ref()?);
    let (la, lb) = (a.lift.as_ref()?, b.lift.as_ref()?);
    let db = pb.iter().map(|p| p.deg()).max().unwrap_or(0).max(0) as usize;
    let at_inf: Vec<NfElem> = pb.iter().map(|p| p.coeff(k, db)).collect();
    for r in reference_points() {
        let t = k.from_i64(r);
        let p0: Vec<NfElem> = pa.iter().map(|p| p.eval(&t, k)).collect();
        let w0 = la.value(&t, k);
        if p0.iter().all(|c| k.is_zero(c)) || k.is_zero(&w0) || proportional(&p0, &at_inf, k) {
            continue;
        }
        let t1 = preimage(pb, &p0, k)?;
        let i = p0.iter().position(|c| !k.is_zero(c)).unwrap();
        let lam = k.div(&pb[i].eval(&t1, k), &p0[i]).unwrap();
        let expect = k.mul(&k.pow(&lam, 3), &w0);
        let w1 = lb.value(&t1, k);
        return if w1 == expect {
            Some(true)
        } else {
            debug_assert_eq!(w1, k.neg(&expect));
            Some(false)
        };
    }
    None
}

pub(crate) fn reference_points() -> impl Iterator<Item = i64> {
    (0..64).map(|i: i64| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 })
}

fn proportional(a: &[NfElem], b: &[NfElem], k: &NumberField) -> bool {
    (0..3).all(|i| (0..3).all(|j| k.mul(&a[i], &b[j]) == k.mul(&a[j], &b[i])))
}

/// Monic polynomial whose roots are the parameters `t` with `param(t)` proportional to `pt`.
pub(crate) fn preimage_locus(param: &[KPoly; 3], pt: &[NfElem], k: &NumberField) -> KPoly {
    let mut g: KPoly = UPoly::zero();
    for i in 0..3 {
        for j in i + 1..3 {
            let m = param[i].scale(&pt[j], k).sub(&param[j].scale(&pt[i], k), k);
            g = gcd_over(k, &g, &m);
        }
    }
    g
}

/// Parameter `t` with `param(t)` proportional to `pt`, if it lies in `k`.
pub(crate) fn preimage(param: &[KPoly; 3], pt: &[NfElem], k: &NumberField) -> Option<NfElem> {
    let g = preimage_locus(param, pt, k);
    if g.degree().unwrap_or(0) == 0 {
        return None;
    }
    roots_over(k, &g).into_iter().next()
}

/// A pair of opposite components found over `embedding.dst`.
#[derive(Clone, Debug)]
pub struct FoundPair {
    /// Base field of the surface into the field of the records.
    pub embedding: Embedding,
    pub records: [DivisorRecord; 2],
}

#[derive(Clone, Debug)]
pub struct DivisorSet {
    pub base: NumberField,
    /// `base -> K`; all records have coefficients in `K`.
    pub embedding: Embedding,
    pub records: Vec<DivisorRecord>,
    pub g_closed: bool,
    pub galois_closed: bool,
    /// Why the closure could not be completed.
    pub partial: Option<String>,
}

impl DivisorSet {
    /// The set `{H}` over the base field.
    pub fn new(k: &NumberField) -> Self {
        DivisorSet {
            base: k.clone(),
            embedding: Embedding::identity(k),
            records: vec![DivisorRecord::hyperplane(k)],
            g_closed: true,
            galois_closed: true,
            partial: None,
        }
    }

    pub fn field(&self) -> &NumberField {
        &self.embedding.dst
    }

    /// Re-expresses every record over a larger field.
    pub fn move_to(&mut self, e: &Embedding) {
        for r in &mut self.records {
            *r = r.map(e);
        }
        self.embedding = self.embedding.then(e);
    }

    pub fn contains(&self, r: &DivisorRecord) -> bool {
        self.position(r).is_some()
    }

    /// Index of the record representing the same class as `r`.
    pub fn position(&self, r: &DivisorRecord) -> Option<usize> {
        let k = self.field();
        match r.kind {
            DivisorKind::Hyperplane => self.records.iter().position(|x| x.kind == DivisorKind::Hyperplane),
            DivisorKind::SplitComponent => self.records.iter().position(|x| same_component(x, r, k) == Some(true)),
            _ => self.records.iter().position(|x| x.kind == r.kind && x.label == r.label),
        }
    }

    /// Inserts `r` (over `K`) unless an equal class is present.
    pub fn insert(&mut self, r: DivisorRecord) -> bool {
        if self.contains(&r) {
            return false;
        }
        self.records.push(r);
        self.g_closed = false;
        self.galois_closed = false;
        true
    }

    /// Adds a found pair, enlarging `K` to a compositum when needed.
    pub fn absorb(&mut self, found: &FoundPair, cap: usize) -> Result<usize> {
        let to_k = if found.embedding.dst == *self.field() && found.embedding.image == self.embedding.image {
            Embedding::identity(self.field())
        } else {
            let (k_to_m, l_to_m) = compositum(&self.embedding, &found.embedding, cap)?;
            self.move_to(&k_to_m);
            l_to_m
        };
        let mut added = 0;
        for r in &found.records {
            if self.insert(r.map(&to_k)) {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn split_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_split()).count()
    }

    /// Every split identity re-verified over `K`.
    pub fn verify(&self, f: &Poly) -> bool {
        let fk = map_poly(f, &self.embedding);
        self.records.iter().all(|r| r.verify(&fk, self.field()))
    }
}

fn normalize_param(param: &[KPoly; 3], k: &NumberField) -> Result<[KPoly; 3]> {
    let g = param.iter().fold(UPoly::zero(), |acc: KPoly, p| gcd_over(k, &acc, p));
    if g.is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    let out: [KPoly; 3] = core::array::from_fn(|i| param[i].div_exact(&g, k).unwrap());
    if out.iter().all(|p| p.degree().unwrap_or(0) == 0) {
        return Err(Error::DegenerateParametrization);
    }
    Ok(out)
}

/// Polynomial in `t` vanishing at every parameter of a singular point of the
/// image (double points and cusps at finite parameters).
fn singular_parameters(param: &[KPoly; 3], k: &NumberField) -> Result<KPoly> {
    // cusps: P(t) parallel to P'(t)
    let d: Vec<KPoly> = param.iter().map(|p| p.derivative(k)).collect();
    let mut cusp: KPoly = UPoly::zero();
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let m = param[a].mul(&d[b], k).sub(&param[b].mul(&d[a], k), k);
        cusp = gcd_over(k, &cusp, &m);
    }
    if cusp.is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    // double points: P(s) x P(t) / (s - t) = 0 with s != t
    let v = Vars::new(&["s", "t"]);
    let ps: Vec<Poly> = param.iter().map(|p| MPoly::from_upoly(&v, 0, p, k)).collect();
    let pt: Vec<Poly> = param.iter().map(|p| MPoly::from_upoly(&v, 1, p, k)).collect();
    let diff = MPoly::var(&v, 0, k).sub(&MPoly::var(&v, 1, k), k);
    let mut cs = Vec::new();
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let c = ps[a].mul(&pt[b], k).sub(&ps[b].mul(&pt[a], k), k);
        if !c.is_zero() {
            cs.push(c.div_exact(&diff, k).expect("cross product vanishes on the diagonal"));
        }
    }
    if cs.is_empty() {
        return Err(Error::DegenerateParametrization);
    }
    if cs.iter().any(|c| c.is_constant()) {
        return Ok(cusp);
    }
    if cs.len() == 1 {
        return Err(Error::DegenerateParametrization);
    }
    let mut double: KPoly = UPoly::zero();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let r = match resultant_eliminate(&cs[i], &cs[j], 1, k) {
                Ok(r) => r,
                Err(Error::DegenerateResultant) => continue,
                Err(e) => return Err(e),
            };
            if let Some(u) = r.to_upoly(0, k) {
                double = gcd_over(k, &double, &u);
            }
        }
    }
    if double.is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    Ok(cusp.mul(&double, k))
}

/// Tests whether the pullback of the image of `param` splits on `X`.
pub fn check_even_tangency(param: &[KPoly; 3], f: &Poly, k: &NumberField) -> Result<Option<SquareWitness<NfElem>>> {
    let param = normalize_param(param, k)?;
    let g = f.eval_upoly(&param, k);
    if g.is_zero() {
        return Err(Error::ImageInBranchCurve);
    }
    let sing = singular_parameters(&param, k)?;
    if gcd_over(k, &sing, &g).degree().unwrap_or(0) > 0 {
        return Err(Error::SingularityOnBranchCurve);
    }
    is_square_in_closure(&g, k)
}

fn positive(a: &NfElem) -> bool {
    a.coeffs().iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
}

/// A square root of `c`, adjoining one if necessary.
fn square_root(k: &NumberField, c: &NfElem, cap: usize) -> Result<(Embedding, NfElem)> {
    let t2 = UPoly::from_coeffs(k, vec![k.neg(c), k.zero(), k.one()]);
    let roots = roots_over(k, &t2);
    if let Some(r) = roots.iter().find(|r| positive(r)).or(roots.first()) {
        return Ok((Embedding::identity(k), r.clone()));
    }
    let ext = extend(k, &t2, cap)?;
    Ok((ext.embed, ext.root))
}

/// Builds the two components over the image of `param` when it splits.
/// `curve` and `param` live over `emb.dst`; `f` over `emb.src`.
pub fn split_curve(
    emb: &Embedding,
    f: &Poly,
    curve: &Poly,
    param: &[KPoly; 3],
    label: &str,
    cap: usize,
) -> Result<Option<FoundPair>> {
    let l = &emb.dst;
    let f_l = map_poly(f, emb);
    let param = normalize_param(param, l)?;
    if !curve.eval_upoly(&param, l).is_zero() {
        return Err(Error::Invalid(String::from("parametrization does not lie on the curve")));
    }
    let Some(w) = check_even_tangency(&param, &f_l, l)? else {
        return Ok(None);
    };
    let (to_m, sqrt_c) = square_root(l, &w.c, cap)?;
    let m = to_m.dst.clone();
    let curve = map_poly(curve, &to_m).monic_lex(&m);
    let param: [KPoly; 3] = core::array::from_fn(|i| to_m.apply_poly(&param[i]));
    let lift = LiftBranch { c: to_m.apply(&w.c), sqrt_c, s: to_m.apply_poly(&w.s), sign: 1 };
    let degree = curve.total_degree().unwrap_or(0);
    let rec = |lift: LiftBranch, suffix: &str| DivisorRecord {
        kind: DivisorKind::SplitComponent,
        label: format!("{label}{suffix}"),
        degree,
        plane_curve: Some(curve.clone()),
        param: Some(param.clone()),
        lift: Some(lift),
        field_of_definition: m.clone(),
        self_intersection: None,
        declared: Vec::new(),
    };
    let (plus, minus) = (rec(lift.clone(), "+"), rec(lift.opposite(), "-"));
    Ok(Some(FoundPair { embedding: emb.then(&to_m), records: [plus, minus] }))
}

/// Result of a divisor search.
#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub found: Vec<FoundPair>,
    pub completed: bool,
    pub notes: Vec<String>,
}

/// `[g_{d+1}, ..., g_6]` together with the conditions for
/// `sum g_i t^i = g_d (t^{d/2} + ...)^2` when `g_d != 0`.
fn square_conditions(g: &[Poly], d: usize, k: &NumberField) -> Vec<Poly> {
    let c = |n: i64| k.from_i64(n);
    let mut out: Vec<Poly> = g[d + 1..].to_vec();
    match d {
        6 => {
            let (g0, g1, g2, g3, g4, g5, g6) = (&g[0], &g[1], &g[2], &g[3], &g[4], &g[5], &g[6]);
            let w1 = g4.mul(g6, k).scale(&c(4), k).sub(&g5.mul(g5, k), k);
            let w0 = g3
                .mul(&g6.mul(g6, k), k)
                .scale(&c(8), k)
                .sub(&g4.mul(&g5.mul(g6, k), k).scale(&c(4), k), k)
                .add(&g5.pow(3, k), k);
            let r2 = g6.pow(3, k).mul(g2, k).scale(&c(64), k).sub(&w1.mul(&w1, k), k).sub(&w0.mul(g5, k).scale(&c(4), k), k);
            let r1 = g6.pow(4, k).mul(g1, k).scale(&c(64), k).sub(&w0.mul(&w1, k), k);
            let r0 = g6.pow(5, k).mul(g0, k).scale(&c(256), k).sub(&w0.mul(&w0, k), k);
            out.extend([r2, r1, r0]);
        }
        4 => {
            let (g0, g1, g2, g3, g4) = (&g[0], &g[1], &g[2], &g[3], &g[4]);
            let u = g2.mul(g4, k).scale(&c(4), k).sub(&g3.mul(g3, k), k);
            out.push(g4.mul(g4, k).mul(g1, k).scale(&c(8), k).sub(&g3.mul(&u, k), k));
            out.push(g4.pow(3, k).mul(g0, k).scale(&c(64), k).sub(&u.mul(&u, k), k));
        }
        2 => {
            out.push(g[2].mul(&g[0], k).scale(&c(4), k).sub(&g[1].mul(&g[1], k), k));
        }
        _ => {}
    }
    out
}

/// For a family `sum_i g_i(c) t^i` of degree at most 6, polynomials in `c`
/// whose roots are exactly the `c` making the member a constant times a square.
fn square_family(g: &[KPoly], k: &NumberField) -> Result<Vec<KPoly>> {
    let v = Vars::new(&["c"]);
    let mut gp: Vec<Poly> = g.iter().map(|p| MPoly::from_upoly(&v, 0, p, k)).collect();
    gp.resize(7, MPoly::zero(&v));
    let mut out = Vec::new();
    for d in [6usize, 4, 2, 0] {
        let top = gp[d].to_upoly(0, k).unwrap();
        if top.is_zero() {
            continue;
        }
        let mut h: KPoly = UPoly::zero();
        for cond in square_conditions(&gp, d, k) {
            h = gcd_over(k, &h, &cond.to_upoly(0, k).unwrap());
        }
        if h.is_zero() {
            return Err(Error::Invalid(String::from("every member of the family splits")));
        }
        loop {
            let common = gcd_over(k, &h, &top);
            if common.degree().unwrap_or(0) == 0 {
                break;
            }
            h = h.div_exact(&common, k).unwrap();
        }
        if h.degree().unwrap_or(0) > 0 {
            out.push(h.monic(k));
        }
    }
    Ok(out)
}

/// Roots of `h` over `l`, one per irreducible factor, each with the
/// embedding of `l` into the field containing it.
fn roots_by_factor(l: &NumberField, h: &KPoly, cap: usize, outcome: &mut SearchOutcome) -> Vec<(Embedding, NfElem)> {
    let (_, facs) = factor_over(l, h);
    let mut out = Vec::new();
    for (q, _) in facs {
        match extend(l, &q, cap) {
            Ok(ext) => out.push((ext.embed, ext.root)),
            Err(e) => {
                outcome.completed = false;
                outcome.notes.push(format!("partial search: {e}"));
            }
        }
    }
    out
}

/// `Res_c(p, q)` as a polynomial in `b`, by evaluation at rational `b`.
fn eliminate_c(p: &Poly, q: &Poly, k: &NumberField) -> KPoly {
    let (dp, dq) = (p.degree_in(1).unwrap_or(0) as usize, q.degree_in(1).unwrap_or(0) as usize);
    let (bp, bq) = (p.degree_in(0).unwrap_or(0) as usize, q.degree_in(0).unwrap_or(0) as usize);
    let bound = dp * bq + dq * bp;
    let lead = |r: &Poly, d: usize| r.coefficients_in(1)[d].to_upoly(0, k).unwrap();
    let (lp, lq) = (lead(p, dp), lead(q, dq));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut i = 0i64;
    while xs.len() <= bound {
        let b0 = k.from_i64(if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 });
        i += 1;
        if k.is_zero(&lp.eval(&b0, k)) || k.is_zero(&lq.eval(&b0, k)) {
            continue;
        }
        let ps = p.specialize(0, &b0, k).to_upoly(1, k).unwrap();
        let qs = q.specialize(0, &b0, k).to_upoly(1, k).unwrap();
        ys.push(ps.resultant(&qs, k));
        xs.push(b0);
    }
    interpolate(&xs, &ys, k)
}

struct LineSearch<'a> {
    f: &'a Poly,
    cap: usize,
    outcome: SearchOutcome,
    count: usize,
}

impl LineSearch<'_> {
    fn record(&mut self, emb: &Embedding, curve: Poly, param: [KPoly; 3]) {
        let label = format!("L{}", self.count + 1);
        match split_curve(emb, self.f, &curve, &param, &label, self.cap) {
            Ok(Some(p)) => {
                self.count += 1;
                self.outcome.found.push(p);
            }
            Ok(None) => {}
            Err(e) => {
                self.outcome.completed = false;
                self.outcome.notes.push(format!("line candidate rejected: {e}"));
            }
        }
    }

    /// Lines `x = b y + c z` for a fixed `b` over `emb.dst`.
    fn chart_one_at(&mut self, emb: &Embedding, b: &NfElem, e: &[Poly]) {
        let l = emb.dst.clone();
        let g: Vec<KPoly> = e
            .iter()
            .map(|ek| map_poly(ek, emb).specialize(0, b, &l).to_upoly(1, &l).unwrap())
            .collect();
        self.family(emb, &g, Some(b), |m, b, c| {
            let v = Vars::xyz();
            let b = b.unwrap();
            let curve = MPoly::var(&v, 0, m)
                .sub(&MPoly::var(&v, 1, m).scale(b, m), m)
                .sub(&MPoly::var(&v, 2, m).scale(c, m), m);
            let param = [UPoly::from_coeffs(m, vec![c.clone(), b.clone()]), UPoly::x(m), UPoly::one(m)];
            (curve, param)
        });
    }

    /// Solves the square condition on a family in `c` over `emb.dst` and
    /// records each line; `b` is carried into the extension fields.
    fn family<G>(&mut self, emb: &Embedding, g: &[KPoly], b: Option<&NfElem>, build: G)
    where
        G: Fn(&NumberField, Option<&NfElem>, &NfElem) -> (Poly, [KPoly; 3]),
    {
        let hs = match square_family(g, &emb.dst) {
            Ok(h) => h,
            Err(e) => {
                self.outcome.completed = false;
                self.outcome.notes.push(format!("{e}"));
                return;
            }
        };
        for h in hs {
            for (step, c) in roots_by_factor(&emb.dst, &h, self.cap, &mut self.outcome) {
                let bb = b.map(|b| step.apply(b));
                let (curve, param) = build(&step.dst, bb.as_ref(), &c);
                self.record(&emb.then(&step), curve, param);
            }
        }
    }
}

/// Every tritangent line, one representative per Galois orbit over the base
/// field, in the charts `x = b y + c z`, `y = c z`, `z = 0`.
pub fn find_tritangent_lines(x: &DoubleSexticSurface, cap: usize) -> SearchOutcome {
    let k = &x.field;
    let f = &x.f;
    let mut s = LineSearch { f, cap, outcome: SearchOutcome { completed: true, ..Default::default() }, count: 0 };
    let base = Embedding::identity(k);

    // chart x = b y + c z, coefficients e_i(b, c) of t^i in f(b t + c, t, 1)
    let v = Vars::new(&["b", "c", "t"]);
    let (bv, cv, tv) = (MPoly::var(&v, 0, k), MPoly::var(&v, 1, k), MPoly::var(&v, 2, k));
    let sub = [bv.mul(&tv, k).add(&cv, k), tv.clone(), MPoly::one(&v, k)];
    let mut e = f.compose(&sub, k).coefficients_in(2);
    e.resize(7, MPoly::zero(&v));
    let e6 = e[6].to_upoly(0, k).unwrap();
    let b_free = e6.is_zero();
    // b with e_6(b) = 0: the family in c has degree below 6
    if !b_free {
        for (emb, b) in roots_by_factor(k, &e6.monic(k), cap, &mut s.outcome) {
            s.chart_one_at(&emb, &b, &e);
        }
    }
    // e_6(b) != 0: eliminate c from the three square conditions
    let conds = square_conditions(&e, 6, k);
    let (r2, r1, r0) = (&conds[0], &conds[1], &conds[2]);
    let pairs = [
        (r2.clone(), r1.add(r0, k)),
        (r2.clone(), r1.add(&r0.scale(&k.from_i64(2), k), k)),
        (r1.clone(), r0.clone()),
    ];
    let mut elim: KPoly = UPoly::zero();
    for (p, q) in &pairs {
        if p.is_zero() || q.is_zero() {
            continue;
        }
        if p.degree_in(1) == Some(0) && q.degree_in(1) == Some(0) {
            elim = gcd_over(k, &elim, &gcd_over(k, &p.to_upoly(0, k).unwrap(), &q.to_upoly(0, k).unwrap()));
            continue;
        }
        let r = eliminate_c(p, q, k);
        elim = gcd_over(k, &elim, &r);
    }
    if elim.is_zero() {
        s.outcome.completed = false;
        s.outcome.notes.push(String::from("line eliminant vanishes identically"));
    } else if !b_free {
        loop {
            let common = gcd_over(k, &elim, &e6);
            if common.degree().unwrap_or(0) == 0 {
                break;
            }
            elim = elim.div_exact(&common, k).unwrap();
        }
        if elim.degree().unwrap_or(0) > 0 {
            for (emb, b) in roots_by_factor(k, &elim.monic(k), cap, &mut s.outcome) {
                s.chart_one_at(&emb, &b, &e);
            }
        }
    }

    // chart y = c z: f(t, c, 1)
    let v2 = Vars::new(&["c", "t"]);
    let sub2 = [MPoly::var(&v2, 1, k), MPoly::var(&v2, 0, k), MPoly::one(&v2, k)];
    let g2: Vec<KPoly> = f.compose(&sub2, k).coefficients_in(1).iter().map(|p| p.to_upoly(0, k).unwrap()).collect();
    s.family(&base, &g2, None, |l, _, c| {
        let v = Vars::xyz();
        let curve = MPoly::var(&v, 1, l).sub(&MPoly::var(&v, 2, l).scale(c, l), l);
        let param = [UPoly::x(l), UPoly::constant(l, c.clone()), UPoly::one(l)];
        (curve, param)
    });

    // the line z = 0
    let vx = Vars::xyz();
    let curve = MPoly::var(&vx, 2, k);
    let param = [UPoly::x(k), UPoly::one(k), UPoly::zero()];
    s.record(&base, curve, param);
    s.outcome
}

/// Rational parametrization of the affine conic
/// `a0 + a1 x + a2 y + a3 x y + a4 x^2 + a5 y^2` from the point `(x0, y0)`.
pub fn conic_parametrization(a: &[NfElem; 6], x0: &NfElem, y0: &NfElem, k: &NumberField) -> [KPoly; 3] {
    let (a1, a2, a3, a4, a5) = (&a[1], &a[2], &a[3], &a[4], &a[5]);
    let two = k.from_i64(2);
    let xt = UPoly::from_coeffs(
        k,
        vec![
            k.neg(&k.add(&k.add(a1, &k.mul(a3, y0)), &k.mul(a4, x0))),
            k.neg(&k.add(a2, &k.mul(&two, &k.mul(a5, y0)))),
            k.mul(a5, x0),
        ],
    );
    let zt = UPoly::from_coeffs(k, vec![a4.clone(), a3.clone(), a5.clone()]);
    let yt = UPoly::x(k).mul(&xt.sub(&zt.scale(x0, k), k), k).add(&zt.scale(y0, k), k);
    [xt, yt, zt]
}

/// Coefficients `a0..a5` of a ternary quadratic form in the order used by
/// [`conic_parametrization`].
fn conic_coeffs(q: &Poly, k: &NumberField) -> [NfElem; 6] {
    let c = |m: [u32; 3]| q.coeff(&m, k);
    [c([0, 0, 2]), c([1, 0, 1]), c([0, 1, 1]), c([1, 1, 0]), c([2, 0, 0]), c([0, 2, 0])]
}

fn conic_is_smooth(a: &[NfElem; 6], k: &NumberField) -> bool {
    // symmetric matrix of a4 x^2 + a3 x y + a5 y^2 + a1 x z + a2 y z + a0 z^2
    let h = |x: &NfElem| k.div(x, &k.from_i64(2)).unwrap();
    let m = [
        [a[4].clone(), h(&a[3]), h(&a[1])],
        [h(&a[3]), a[5].clone(), h(&a[2])],
        [h(&a[1]), h(&a[2]), a[0].clone()],
    ];
    !k.is_zero(&det3(&m, k))
}

/// Parametrization of a smooth conic over `l`, with the embedding of `l`
/// into the field of the base point used.
pub fn parametrize_conic(l: &NumberField, q: &Poly, cap: usize) -> Result<(Embedding, [KPoly; 3])> {
    let a = conic_coeffs(q, l);
    if !conic_is_smooth(&a, l) || (l.is_zero(&a[3]) && l.is_zero(&a[4]) && l.is_zero(&a[5])) {
        return Err(Error::Invalid(String::from("conic is degenerate")));
    }
    for r in reference_points() {
        let x0 = l.from_i64(r);
        // a5 y^2 + (a2 + a3 x0) y + (a0 + a1 x0 + a4 x0^2) = 0
        let c0 = l.add(&l.add(&a[0], &l.mul(&a[1], &x0)), &l.mul(&a[4], &l.square(&x0)));
        let c1 = l.add(&a[2], &l.mul(&a[3], &x0));
        let yq = UPoly::from_coeffs(l, vec![c0, c1, a[5].clone()]);
        if yq.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (_, facs) = factor_over(l, &yq);
        let ext = extend(l, &facs[0].0, cap)?;
        let m = &ext.field;
        let am: [NfElem; 6] = core::array::from_fn(|i| ext.embed.apply(&a[i]));
        let p = conic_parametrization(&am, &ext.embed.apply(&x0), &ext.root, m);
        if normalize_param(&p, m).is_ok_and(|p| p.iter().any(|c| c.degree() == Some(2))) {
            return Ok((ext.embed, p));
        }
    }
    Err(Error::Invalid(String::from("no affine point found on the conic")))
}

/// Accepts a known conic (for example `f2 = 0` from a nodal quartic) when it is sixtangent.
pub fn known_conic(x: &DoubleSexticSurface, q: &Poly, label: &str, cap: usize) -> Result<Option<FoundPair>> {
    if !q.is_homogeneous_of(2) {
        return Err(Error::WrongDegree { expected: 2, found: q.total_degree().unwrap_or(0) as usize });
    }
    let (emb, param) = parametrize_conic(&x.field, q, cap)?;
    let qm = map_poly(q, &emb);
    split_curve(&emb, &x.f, &qm, &param, label, cap)
}

/// A user-supplied rational curve with its parametrization over `emb.dst`;
/// rejected with a reason unless its pullback splits.
pub fn user_curve(x: &DoubleSexticSurface, emb: &Embedding, curve: &Poly, param: &[KPoly; 3], label: &str, cap: usize) -> Result<FoundPair> {
    if curve.is_zero() || !curve.is_homogeneous() {
        return Err(Error::Invalid(format!("{label}: plane curve must be a nonzero form")));
    }
    match split_curve(emb, &x.f, curve, param, label, cap)? {
        Some(p) => Ok(p),
        None => Err(Error::Invalid(format!(
            "{label}: the restriction of f is not a square, so the pullback is irreducible"
        ))),
    }
}

/// Solutions of a zero-dimensional system over `l`, each with the embedding
/// of `l` into the field containing it. `None` if the budget runs out.
pub fn solve_zero_dimensional<B: Budget>(
    gens: &[Poly],
    l: &NumberField,
    cap: usize,
    budget: &mut B,
) -> Result<Option<Vec<(Embedding, Vec<NfElem>)>>> {
    let Some(n) = gens.first().map(|g| g.nvars()) else {
        return Ok(Some(vec![]));
    };
    let gb = groebner_basis(gens, MonomialOrder::Lex, l, budget);
    if !gb.completed {
        return Ok(None);
    }
    let basis: Vec<Poly> = gb.basis.into_iter().filter(|g| !g.is_zero()).collect();
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(Some(vec![]));
    }
    if n == 0 {
        return Ok(Some(vec![(Embedding::identity(l), vec![])]));
    }
    let last = n - 1;
    let uni = basis
        .iter()
        .find(|g| g.support_vars().iter().all(|&v| v == last))
        .ok_or_else(|| Error::Invalid(String::from("system is not zero-dimensional")))?;
    let vars = uni.vars().clone();
    let u = uni.to_upoly(last, l).unwrap();
    let (_, facs) = factor_over(l, &u);
    let sub_vars = Vars::new(&vars.names[..last].iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let index: Vec<usize> = (0..n).map(|i| i.min(last.saturating_sub(1))).collect();
    let mut out = Vec::new();
    for (h, _) in facs {
        let ext = extend(l, &h, cap)?;
        let m = &ext.field;
        let rest: Vec<Poly> = basis
            .iter()
            .map(|g| map_poly(g, &ext.embed).specialize(last, &ext.root, m))
            .filter(|g| !g.is_zero())
            .collect();
        if last == 0 {
            if rest.is_empty() {
                out.push((ext.embed.clone(), vec![ext.root.clone()]));
            }
            continue;
        }
        let mut rest: Vec<Poly> = rest.iter().map(|g| g.with_vars(&sub_vars, &index)).collect();
        if rest.is_empty() {
            return Err(Error::Invalid(String::from("system is not zero-dimensional")));
        }
        rest.dedup();
        match solve_zero_dimensional(&rest, m, cap, budget)? {
            None => return Ok(None),
            Some(sols) => {
                for (step, mut pt) in sols {
                    pt.push(step.apply(&ext.root));
                    out.push((ext.embed.then(&step), pt));
                }
            }
        }
    }
    Ok(Some(out))
}

/// Gröbner search for sixtangent conics through the point parametrization,
/// in the charts `a5 = 1`, `a5 = 0, a4 = 1` and `a5 = a4 = 0, a3 = 1`.
pub fn find_sixtangent_conics<B: Budget>(x: &DoubleSexticSurface, budget: &mut B, cap: usize) -> SearchOutcome {
    let mut outcome = SearchOutcome { completed: true, ..Default::default() };
    if budget.exhausted() {
        outcome.completed = false;
        outcome.notes.push(String::from("conic search budget exhausted"));
        return outcome;
    }
    let k = &x.field;
    // unknowns b0..b6, x0, y0 eliminated first; then a0..a5
    let names = ["b0", "b1", "b2", "b3", "b4", "b5", "b6", "x0", "y0", "a0", "a1", "a2", "a3", "a4", "a5", "t"];
    let v = Vars::new(&names);
    let var = |i: usize| MPoly::var(&v, i, k);
    let mut count = 0usize;
    for chart in [5usize, 4, 3] {
        let mut a: Vec<Poly> = (0..6).map(|i| var(9 + i)).collect();
        for j in chart + 1..6 {
            a[j] = MPoly::zero(&v);
        }
        a[chart] = MPoly::one(&v, k);
        let (x0, y0, t) = (var(7), var(8), var(15));
        let two = k.from_i64(2);
        let xt = a[5].mul(&x0, k).mul(&t.pow(2, k), k)
            .sub(&a[2].add(&a[5].mul(&y0, k).scale(&two, k), k).mul(&t, k), k)
            .sub(&a[1], k)
            .sub(&a[3].mul(&y0, k), k)
            .sub(&a[4].mul(&x0, k), k);
        let zt = a[5].mul(&t.pow(2, k), k).add(&a[3].mul(&t, k), k).add(&a[4], k);
        let yt = t.mul(&xt.sub(&x0.mul(&zt, k), k), k).add(&y0.mul(&zt, k), k);
        let img = x.f.compose(&[xt, yt, zt], k);
        let bt = (0..7).fold(MPoly::zero(&v), |acc, i| acc.add(&var(i).mul(&t.pow(6 - i as u32, k), k), k));
        let eqs = img.sub(&bt.mul(&bt, k), k).coefficients_in(15);
        let incidence = a[0]
            .add(&a[1].mul(&x0, k), k)
            .add(&a[2].mul(&y0, k), k)
            .add(&a[3].mul(&x0.mul(&y0, k), k), k)
            .add(&a[4].mul(&x0.mul(&x0, k), k), k)
            .add(&a[5].mul(&y0.mul(&y0, k), k), k);
        let mut gens: Vec<Poly> = eqs.into_iter().filter(|e| !e.is_zero()).collect();
        gens.push(incidence);
        let gb = groebner_basis(&gens, MonomialOrder::Block(9), k, budget);
        if !gb.completed {
            outcome.completed = false;
            outcome.notes.push(format!("conic search chart a{chart} = 1 ran out of budget"));
            return outcome;
        }
        // elimination ideal in the conic coefficients
        let free: Vec<usize> = (9..9 + chart).collect();
        let av = Vars::new(&free.iter().map(|&i| names[i]).collect::<Vec<_>>());
        let mut index = vec![0usize; names.len()];
        for (j, &i) in free.iter().enumerate() {
            index[i] = j;
        }
        let elim: Vec<Poly> = gb
            .basis
            .iter()
            .filter(|g| g.support_vars().iter().all(|i| free.contains(i)))
            .map(|g| g.with_vars(&av, &index))
            .collect();
        let elim = if elim.is_empty() { vec![MPoly::zero(&av)] } else { elim };
        let sols = match solve_zero_dimensional(&elim, k, cap, budget) {
            Ok(Some(s)) => s,
            Ok(None) => {
                outcome.completed = false;
                outcome.notes.push(String::from("conic extraction ran out of budget"));
                return outcome;
            }
            Err(e) => {
                outcome.completed = false;
                outcome.notes.push(format!("conic extraction failed: {e}"));
                continue;
            }
        };
        for (emb, vals) in sols {
            let l = &emb.dst;
            let mut coeffs: Vec<NfElem> = vals.clone();
            coeffs.resize(6, l.zero());
            for j in chart + 1..6 {
                coeffs[j] = l.zero();
            }
            coeffs[chart] = l.one();
            let vx = Vars::xyz();
            let mono = [[0u32, 0, 2], [1, 0, 1], [0, 1, 1], [1, 1, 0], [2, 0, 0], [0, 2, 0]];
            let q = MPoly::from_terms(&vx, mono.iter().zip(&coeffs).map(|(m, c)| (m.to_vec(), c.clone())), l);
            let found = parametrize_conic(l, &q, cap).and_then(|(step, p)| {
                let qm = map_poly(&q, &step);
                split_curve(&emb.then(&step), &x.f, &qm, &p, &format!("C{}", count + 1), cap)
            });
            match found {
                Ok(Some(p)) => {
                    count += 1;
                    outcome.found.push(p);
                }
                Ok(None) => {}
                Err(e) => outcome.notes.push(format!("conic candidate rejected: {e}")),
            }
        }
    }
    outcome
}

/// `f(x, y, z) = f'(x^2, y, z)` in some coordinate: `X` is a double cover of
/// a del Pezzo surface of degree 1 and `rho >= 9`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelPezzoCertificate {
    pub variables: Vec<usize>,
    pub lower_bound: u32,
}

pub fn detect_del_pezzo(f: &Poly) -> Option<DelPezzoCertificate> {
    let variables: Vec<usize> = (0..3).filter(|&i| f.only_even_powers_of(i)).collect();
    if variables.is_empty() {
        None
    } else {
        Some(DelPezzoCertificate { variables, lower_bound: 9 })
    }
}

/// Closes the set under the automorphisms (over the base field) and under
/// `Gal(K/k)` after passing to the Galois closure of `K`.
pub fn propagate(set: &DivisorSet, autos: &[SurfaceAutomorphism], cap: usize) -> DivisorSet {
    let mut s = set.clone();
    if s.g_closed && s.galois_closed {
        return s;
    }
    loop {
        let before = s.records.len();
        // G-orbits
        let k = s.field().clone();
        let mats: Vec<SurfaceAutomorphism> = autos
            .iter()
            .map(|a| SurfaceAutomorphism {
                matrix: core::array::from_fn(|i| core::array::from_fn(|j| s.embedding.apply(&a.matrix[i][j]))),
                lambda: s.embedding.apply(&a.lambda),
                sign: a.sign,
            })
            .collect();
        let mut i = 0;
        while i < s.records.len() {
            for (gi, a) in mats.iter().enumerate() {
                let mut img = s.records[i].transform(a, &k);
                if img.is_split() {
                    img.label = format!("{}.g{}", s.records[i].label, gi + 1);
                    s.insert(img);
                }
            }
            i += 1;
        }
        // Galois orbits
        let to_closure = match galois_closure(&s.embedding, cap) {
            Ok(e) => e,
            Err(e) => {
                s.g_closed = false;
                s.galois_closed = false;
                s.partial = Some(format!("{e}"));
                return s;
            }
        };
        s.move_to(&to_closure);
        let sigmas = relative_automorphisms(&s.embedding);
        let n = s.records.len();
        for i in 0..n {
            for (si, sigma) in sigmas.iter().enumerate().skip(1) {
                let mut img = s.records[i].map(sigma);
                if img.is_split() {
                    img.label = format!("{}.s{}", s.records[i].label, si);
                    s.insert(img);
                }
            }
        }
        if s.records.len() == before {
            break;
        }
    }
    s.g_closed = true;
    s.galois_closed = true;
    s.partial = None;
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_mpoly;
    use crate::surface::validate_surface;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    fn poly(s: &str) -> Poly {
        parse_mpoly(s, &Vars::xyz(), &q()).unwrap()
    }

    fn up(k: &NumberField, c: &[i64]) -> KPoly {
        UPoly::from_coeffs(k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    #[test]
    fn tritangent_by_construction_splits() {
        let k = q();
        let f = poly("(y^3+z^3)^2 + x*(x^5+y^5+2*z^5)");
        let param = [UPoly::zero(), UPoly::x(&k), UPoly::one(&k)];
        let w = check_even_tangency(&param, &f, &k).unwrap().unwrap();
        assert_eq!(w.s, up(&k, &[1, 0, 0, 1]));
        assert_eq!(w.c, k.one());
    }

    #[test]
    fn random_line_does_not_split() {
        let k = q();
        let f = poly("x^6 + 2*y^6 + 3*z^6 + x*y^4*z - 5*x^3*y^2*z");
        let param = [up(&k, &[1, 2]), up(&k, &[0, 1]), up(&k, &[3, -1])];
        assert!(check_even_tangency(&param, &f, &k).unwrap().is_none());
    }

    #[test]
    fn image_inside_branch_curve() {
        let k = q();
        let f = poly("x*(x^5+y^5+z^5)");
        let param = [UPoly::zero(), UPoly::x(&k), UPoly::one(&k)];
        assert_eq!(check_even_tangency(&param, &f, &k), Err(Error::ImageInBranchCurve));
    }

    #[test]
    fn double_cover_parametrization_is_degenerate() {
        let k = q();
        let f = poly("x^6+y^6+z^6");
        let param = [up(&k, &[0, 0, 1]), UPoly::one(&k), UPoly::zero()];
        assert_eq!(check_even_tangency(&param, &f, &k), Err(Error::DegenerateParametrization));
    }

    #[test]
    fn nodal_cubic_node_on_branch_curve() {
        // (t^2 - 1, t (t^2 - 1), 1) has a node at (0:0:1), parameters t = 1, -1
        let k = q();
        let param = [up(&k, &[-1, 0, 1]), up(&k, &[0, -1, 0, 1]), UPoly::one(&k)];
        let through = poly("y^6 - x^6 + x*y*z^4");
        assert_eq!(check_even_tangency(&param, &through, &k), Err(Error::SingularityOnBranchCurve));
        let away = poly("x^6+y^6+z^6");
        assert!(check_even_tangency(&param, &away, &k).is_ok());
    }

    #[test]
    fn line_search_finds_constructed_line() {
        let k = q();
        let f = poly("(y^3+z^3)^2 + x*(x^5+y^5+2*z^5)");
        let x = validate_surface(k.clone(), f.clone(), vec![], None).unwrap();
        let out = find_tritangent_lines(&x, 16);
        assert!(out.completed, "{:?}", out.notes);
        let target = poly("x");
        let hit = out.found.iter().find(|p| {
            p.embedding.dst.is_rationals() && p.records[0].plane_curve.as_ref() == Some(&target)
        });
        let hit = hit.expect("line x = 0");
        let mut set = DivisorSet::new(&k);
        set.absorb(hit, 16).unwrap();
        assert_eq!(set.records.len(), 3);
        assert!(set.verify(&f));
        assert_eq!(same_component(&set.records[1], &set.records[2], set.field()), Some(false));
    }

    #[test]
    fn del_pezzo_detection() {
        let d = detect_del_pezzo(&poly("x^6+y^6+z^6+x^2*y^2*z^2")).unwrap();
        assert_eq!(d.variables, vec![0, 1, 2]);
        assert_eq!(d.lower_bound, 9);
        let d = detect_del_pezzo(&poly("x^6+y^6+z^6+x^5*y")).unwrap();
        assert_eq!(d.variables, vec![2]);
        assert!(detect_del_pezzo(&poly("x^6+y^6+z^6+x^5*y+x*y*z^4+y^3*z^3")).is_none());
    }

    #[test]
    fn known_conic_fast_path() {
        let k = q();
        // g3^2 + (x^2 + y z) q4
        let f = poly("(x^3 + y^3 - z^3 + x*y*z)^2 + (x^2+y*z)*(x^4 + 2*y^4 + 3*z^4 - x*y*z^2)");
        let x = validate_surface(k.clone(), f, vec![], None).unwrap();
        let found = known_conic(&x, &poly("x^2+y*z"), "C1", 16).unwrap().expect("conic splits");
        assert_eq!(found.records[0].degree, 2);
        let l = &found.embedding.dst;
        let fl = map_poly(&x.f, &found.embedding);
        assert!(found.records.iter().all(|r| r.verify(&fl, l)));
    }

    #[test]
    fn conic_search_with_zero_budget() {
        let k = q();
        let x = validate_surface(k, poly("x^6+y^6+z^6"), vec![], None).unwrap();
        let mut b = crate::budget::StepBudget::new(0);
        let out = find_sixtangent_conics(&x, &mut b, 16);
        assert!(!out.completed);
        assert!(out.found.is_empty());
    }

    #[test]
    fn zero_dimensional_solver() {
        let k = q();
        let v = Vars::new(&["u", "v"]);
        let gens = vec![
            parse_mpoly("u^2 - 2", &v, &k).unwrap(),
            parse_mpoly("v - u - 1", &v, &k).unwrap(),
        ];
        let mut b = crate::budget::Unlimited::default();
        let sols = solve_zero_dimensional(&gens, &k, 16, &mut b).unwrap().unwrap();
        assert_eq!(sols.len(), 1);
        let (e, pt) = &sols[0];
        let l = &e.dst;
        assert_eq!(l.degree(), 2);
        for g in &gens {
            let gl = map_poly(g, e);
            assert!(l.is_zero(&gl.eval(pt, l)));
        }
    }

    #[test]
    fn propagate_hyperplane_only() {
        let k = q();
        let set = DivisorSet::new(&k);
        let swap = SurfaceAutomorphism {
            matrix: [
                [k.one(), k.zero(), k.zero()],
                [k.zero(), k.zero(), k.one()],
                [k.zero(), k.one(), k.zero()],
            ],
            lambda: k.one(),
            sign: 1,
        };
        let out = propagate(&set, &[swap], 16);
        assert_eq!(out.records.len(), 1);
        assert!(out.g_closed && out.galois_closed);
    }
}
