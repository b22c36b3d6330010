//! Double sextic surfaces `w^2 = f(x, y, z)`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::arith::factor::roots_over;
use crate::arith::field::{Field, PrimeField};
use crate::arith::groebner::groebner_basis;
use crate::arith::intfac::primes_in;
use crate::arith::mpoly::{MPoly, MonomialOrder, Vars};
use crate::arith::numfield::{NfElem, NumberField};
use crate::arith::parse::elem_to_string;
use crate::arith::upoly::UPoly;
use crate::budget::{Budget, StepBudget};
use crate::error::{Error, Result};

pub type Poly = MPoly<NfElem>;

/// `(x:y:z:w) -> (M (x,y,z) : sign * lambda * w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceAutomorphism {
    pub matrix: [[NfElem; 3]; 3],
    pub lambda: NfElem,
    pub sign: i8,
}

impl SurfaceAutomorphism {
    /// Linear forms `M` applied to `(x, y, z)`.
    pub fn substitution(&self, vars: &Arc<Vars>, k: &NumberField) -> [Poly; 3] {
        let row = |i: usize| {
            let mut p = MPoly::zero(vars);
            for j in 0..3 {
                let mut m = vec![0u32; 3];
                m[j] = 1;
                p.add_term(m, self.matrix[i][j].clone(), k);
            }
            p
        };
        [row(0), row(1), row(2)]
    }

    pub fn apply(&self, p: &Poly, k: &NumberField) -> Poly {
        let s = self.substitution(p.vars(), k);
        p.compose(&s, k)
    }
}

#[derive(Clone, Debug)]
pub struct DoubleSexticSurface {
    pub field: NumberField,
    pub f: Poly,
    pub automorphisms: Vec<SurfaceAutomorphism>,
    pub time_budget: Option<Duration>,
}

/// Step limit for each Gröbner computation in the smoothness test.
const SMOOTH_GB_STEPS: u64 = 200_000;

fn jacobian_gens<F: Field>(f: &MPoly<F::Elem>, k: &F) -> Vec<MPoly<F::Elem>>
where
    F::Elem: Eq + core::fmt::Debug,
{
    vec![f.clone(), f.derivative(0, k), f.derivative(1, k), f.derivative(2, k)]
}

/// Whether `f, f_x, f_y, f_z` have no common projective zero. `None` when
/// the budget ran out first.
pub fn jacobian_certifies_smooth<F: Field, B: Budget>(f: &MPoly<F::Elem>, k: &F, budget: &mut B) -> Option<bool>
where
    F::Elem: Eq + core::fmt::Debug,
{
    let ord = MonomialOrder::DegRevLex;
    let gb = groebner_basis(&jacobian_gens(f, k), ord, k, budget);
    if !gb.completed {
        return None;
    }
    // homogeneous ideal with finitely many affine zeros has only the origin
    let n = f.nvars();
    let has_pure_power = |v: usize| {
        gb.basis.iter().any(|g| {
            let (m, _) = g.leading(&ord).unwrap();
            m.iter().enumerate().all(|(i, &e)| (i == v) == (e > 0))
        })
    };
    Some((0..n).all(has_pure_power) || gb.basis.iter().any(|g| g.is_constant()))
}

/// Image of `f` under `alpha -> r (mod p)`; `None` if a coefficient is not
/// `p`-integral.
pub fn reduce_poly(f: &Poly, k: &NumberField, p: u64, r: u64) -> Option<MPoly<u64>> {
    let kf = PrimeField::new(p);
    f.try_map(&kf, |c| k.reduce_at(c, p, r))
}

fn reductions(k: &NumberField, p: u64) -> Vec<u64> {
    if k.is_rationals() {
        return vec![0];
    }
    let mp = k.minpoly();
    let kf = PrimeField::new(p);
    if mp.coeffs().iter().any(|c| kf.from_rational(c).is_none()) {
        return vec![];
    }
    k.roots_mod(p)
}

/// Smoothness of the reduction of `f` modulo `p` (base field Q).
pub fn smooth_mod_p(f: &Poly, k: &NumberField, p: u64) -> bool {
    if p == 2 || !f.is_homogeneous_of(6) {
        return false;
    }
    let Some(fp) = reduce_poly(f, k, p, 0) else { return false };
    if !fp.is_homogeneous_of(6) || fp.total_degree() != Some(6) {
        return false;
    }
    let mut b = crate::budget::Unlimited::default();
    jacobian_certifies_smooth(&fp, &PrimeField::new(p), &mut b) == Some(true)
}

fn point_string(k: &NumberField, pt: &[NfElem]) -> String {
    let parts: Vec<String> = pt.iter().map(|c| elem_to_string(k, c)).collect();
    alloc::format!("({})", parts.join(" : "))
}

fn singular_at(gens: &[Poly], k: &NumberField, pt: &[NfElem]) -> bool {
    gens.iter().all(|g| k.is_zero(&g.eval(pt, k)))
}

/// Looks for a singular point with coordinates in `k`.
fn find_singular_point(f: &Poly, k: &NumberField) -> Option<Vec<NfElem>> {
    let gens = jacobian_gens(f, k);
    let zero = k.zero();
    let one = k.one();
    for pt in [
        vec![one.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), one.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), one.clone()],
    ] {
        if singular_at(&gens, k, &pt) {
            return Some(pt);
        }
    }
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let pt = vec![k.from_i64(a), k.from_i64(b), one.clone()];
            if singular_at(&gens, k, &pt) {
                return Some(pt);
            }
            let pt = vec![k.from_i64(a), one.clone(), zero.clone()];
            if b == 0 && singular_at(&gens, k, &pt) {
                return Some(pt);
            }
        }
    }
    // affine chart z = 1: lex basis, back-substitute K-rational roots
    let v2 = Vars::new(&["x", "y"]);
    let aff: Vec<Poly> = gens
        .iter()
        .map(|g| {
            let s = [MPoly::var(&v2, 0, k), MPoly::var(&v2, 1, k), MPoly::one(&v2, k)];
            g.compose(&s, k)
        })
        .collect();
    let mut budget = StepBudget::new(SMOOTH_GB_STEPS / 4);
    let gb = groebner_basis(&aff, MonomialOrder::Lex, k, &mut budget);
    if !gb.completed {
        return None;
    }
    let in_y: Vec<&Poly> = gb.basis.iter().filter(|g| g.degree_in(0) == Some(0)).collect();
    let ypoly = in_y.first()?.to_upoly(1, k)?;
    for yv in roots_over(k, &ypoly) {
        let spec: Vec<UPoly<NfElem>> = gb
            .basis
            .iter()
            .map(|g| g.specialize(1, &yv, k).to_upoly(0, k).unwrap())
            .filter(|u| !u.is_zero())
            .collect();
        let g = spec.iter().fold(UPoly::zero(), |acc, u| acc.gcd(u, k));
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        if let Some(xv) = roots_over(k, &g).into_iter().next() {
            return Some(vec![xv, yv, one.clone()]);
        }
    }
    None
}

/// Decides smoothness of the plane sextic `f = 0` over the algebraic closure.
pub fn check_smooth(f: &Poly, k: &NumberField) -> Result<()> {
    let mut attempts = 0;
    for p in primes_in(5, 2000) {
        if attempts >= 6 {
            break;
        }
        for r in reductions(k, p) {
            let Some(fp) = reduce_poly(f, k, p, r) else { continue };
            if fp.total_degree() != Some(6) {
                continue;
            }
            attempts += 1;
            let mut b = StepBudget::new(SMOOTH_GB_STEPS);
            if jacobian_certifies_smooth(&fp, &PrimeField::new(p), &mut b) == Some(true) {
                return Ok(());
            }
            break;
        }
    }
    let mut b = StepBudget::new(SMOOTH_GB_STEPS);
    match jacobian_certifies_smooth(f, k, &mut b) {
        Some(true) => Ok(()),
        Some(false) => {
            let witness = find_singular_point(f, k).map(|pt| point_string(k, &pt));
            Err(Error::SingularBranchCurve { witness })
        }
        None => Err(Error::Invalid(String::from("smoothness undecided within the step budget"))),
    }
}

/// Checks `f o M = lambda^2 f` for one automorphism.
pub fn check_automorphism(f: &Poly, k: &NumberField, a: &SurfaceAutomorphism, index: usize) -> Result<()> {
    if a.sign != 1 && a.sign != -1 {
        return Err(Error::BadAutomorphism { index, reason: String::from("sign must be +1 or -1") });
    }
    if k.is_zero(&a.lambda) {
        return Err(Error::BadAutomorphism { index, reason: String::from("lambda is zero") });
    }
    let det = det3(&a.matrix, k);
    if k.is_zero(&det) {
        return Err(Error::BadAutomorphism { index, reason: String::from("matrix is singular") });
    }
    let lhs = a.apply(f, k);
    let rhs = f.scale(&k.square(&a.lambda), k);
    if lhs != rhs {
        return Err(Error::BadAutomorphism { index, reason: String::from("f o M differs from lambda^2 f") });
    }
    Ok(())
}

pub(crate) fn det3(m: &[[NfElem; 3]; 3], k: &NumberField) -> NfElem {
    let t = |a: usize, b: usize, c: usize| k.mul(&m[0][a], &k.mul(&m[1][b], &m[2][c]));
    let pos = k.add(&k.add(&t(0, 1, 2), &t(1, 2, 0)), &t(2, 0, 1));
    let neg = k.add(&k.add(&t(2, 1, 0), &t(0, 2, 1)), &t(1, 0, 2));
    k.sub(&pos, &neg)
}

pub fn validate_surface(
    field: NumberField,
    f: Poly,
    automorphisms: Vec<SurfaceAutomorphism>,
    time_budget: Option<Duration>,
) -> Result<DoubleSexticSurface> {
    if f.nvars() != 3 || !f.is_homogeneous_of(6) || f.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    check_smooth(&f, &field)?;
    for (i, a) in automorphisms.iter().enumerate() {
        check_automorphism(&f, &field, a, i)?;
    }
    Ok(DoubleSexticSurface { field, f, automorphisms, time_budget })
}

impl DoubleSexticSurface {
    pub fn vars(&self) -> &Arc<Vars> {
        self.f.vars()
    }

    /// Re-runs every construction check.
    pub fn revalidate(&self) -> Result<DoubleSexticSurface> {
        validate_surface(self.field.clone(), self.f.clone(), self.automorphisms.clone(), self.time_budget)
    }
}

/// Branch sextic `f3^2 - 4 f2 f4` of the projection of a nodal quartic from
/// its node at `(0:0:0:1)`, in the variables of the inputs.
pub fn quartic_node_to_sextic(f2: &Poly, f3: &Poly, f4: &Poly, k: &NumberField) -> Result<Poly> {
    for (p, d) in [(f2, 2u32), (f3, 3), (f4, 4)] {
        if !p.is_zero() && !p.is_homogeneous_of(d) {
            return Err(Error::WrongDegree { expected: d as usize, found: p.total_degree().unwrap_or(0) as usize });
        }
    }
    let four = k.from_i64(4);
    Ok(f3.mul(f3, k).sub(&f2.mul(f4, k).scale(&four, k), k))
}

/// Odd primes in `[lo, hi]` of good reduction (base field Q only).
pub fn good_primes(x: &DoubleSexticSurface, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if !x.field.is_rationals() {
        return Err(Error::Invalid(String::from("reduction is only supported over Q")));
    }
    Ok(primes_in(lo.max(3), hi).into_iter().filter(|&p| smooth_mod_p(&x.f, &x.field, p)).collect())
}
