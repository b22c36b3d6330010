//! Factorization over number fields (Trager's norm method), field
//! extensions by primitive elements, automorphisms and Galois closures.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::field::{Field, Rationals};
use super::numfield::{qpoly_to_string, Embedding, NfElem, NumberField, QPoly, TowerStep};
use super::upoly::{interpolate, UPoly};
use super::zpoly::{factor_q, gcd_q};
use crate::error::{Error, Result};

pub type KPoly = UPoly<NfElem>;

/// Default cap on the absolute degree of constructed fields.
pub const DEFAULT_MAX_FIELD_DEGREE: usize = 16;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Lift a rational polynomial into `K[x]`.
pub fn lift_qpoly(k: &NumberField, p: &QPoly) -> KPoly {
    p.map(k, |c| k.embed_rational(c))
}

/// Rational polynomial if every coefficient of `p` is rational.
pub fn as_qpoly(k: &NumberField, p: &KPoly) -> Option<QPoly> {
    p.try_map(&Rationals, |c| k.as_rational(c))
}

/// Monic gcd in `K[x]`, via the modular integer gcd when `K = Q`.
pub fn gcd_over(k: &NumberField, a: &KPoly, b: &KPoly) -> KPoly {
    if k.is_rationals() {
        if let (Some(qa), Some(qb)) = (as_qpoly(k, a), as_qpoly(k, b)) {
            return lift_qpoly(k, &gcd_q(&qa, &qb));
        }
    }
    a.gcd(b, k)
}

/// `prod_{sigma} sigma(g)` as a rational polynomial: `Res_t(m(t), g(x, t))`.
pub fn norm_poly(k: &NumberField, g: &KPoly) -> QPoly {
    if k.is_rationals() {
        return as_qpoly(k, g).unwrap();
    }
    let d = g.degree().expect("norm of zero polynomial");
    let n = k.degree();
    let total = n * d;
    let xs: Vec<BigRational> = (0..=total as i64).map(q).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x0| {
            // g(x0, t) as polynomial in t
            let mut acc = QPoly::zero();
            for c in g.coeffs().iter().rev() {
                acc = acc.scale(x0, &Rationals).add(c, &Rationals);
            }
            let acc = k.from_poly(acc);
            k.minpoly().resultant(&acc, &Rationals)
        })
        .collect();
    interpolate(&xs, &ys, &Rationals)
}

/// `g(x + s * alpha)`.
fn shift_poly(k: &NumberField, g: &KPoly, s: i64) -> KPoly {
    let a = k.mul(&k.from_i64(s), &k.generator());
    g.taylor_shift(&a, k)
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    (0i64..).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}

fn factor_squarefree_over(k: &NumberField, g: &KPoly) -> Vec<KPoly> {
    let g = g.monic(k);
    if g.degree() == Some(1) {
        return vec![g];
    }
    if k.is_rationals() {
        let (_, facs) = factor_q(&as_qpoly(k, &g).unwrap());
        return facs.iter().map(|(h, _)| lift_qpoly(k, h)).collect();
    }
    for s in shift_sequence() {
        // roots of gs are roots of g minus s*alpha
        let gs = shift_poly(k, &g, s);
        let n = norm_poly(k, &gs);
        let dn = n.derivative(&Rationals);
        if gcd_q(&n, &dn).degree() != Some(0) {
            continue;
        }
        let (_, facs) = factor_q(&n);
        if facs.len() == 1 {
            return vec![g];
        }
        let mut out = Vec::new();
        for (h, _) in facs {
            let hk = lift_qpoly(k, &h);
            let f = gcd_over(k, &gs, &hk);
            if f.degree().unwrap_or(0) > 0 {
                out.push(shift_poly(k, &f, -s).monic(k));
            }
        }
        return out;
    }
    unreachable!()
}

/// Complete factorization over `K`: `p = unit * prod g_i^e_i`, `g_i` monic
/// irreducible, sorted by degree.
pub fn factor_over(k: &NumberField, p: &KPoly) -> (NfElem, Vec<(KPoly, u32)>) {
    assert!(!p.is_zero(), "factor of zero polynomial");
    let unit = p.lc().unwrap().clone();
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return (unit, out);
    }
    let (_, parts) = p.squarefree_decomposition(k);
    for (g, e) in parts {
        for h in factor_squarefree_over(k, &g) {
            out.push((h, e));
        }
    }
    out.sort_by_key(|(h, _)| h.degree());
    (unit, out)
}

pub fn is_irreducible_over(k: &NumberField, p: &KPoly) -> bool {
    match p.degree() {
        None | Some(0) => false,
        Some(1) => true,
        _ => {
            let (_, f) = factor_over(k, p);
            f.len() == 1 && f[0].1 == 1
        }
    }
}

/// Roots of `p` in `K` (distinct).
pub fn roots_over(k: &NumberField, p: &KPoly) -> Vec<NfElem> {
    let (_, facs) = factor_over(k, p);
    facs.into_iter()
        .filter(|(h, _)| h.degree() == Some(1))
        .map(|(h, _)| k.neg(&h.coeffs()[0]))
        .collect()
}

/// `K(theta)` for a root `theta` of an irreducible polynomial over `K`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: NumberField,
    pub embed: Embedding,
    pub root: NfElem,
}

pub fn kpoly_to_string(k: &NumberField, p: &KPoly, var: &str) -> String {
    if k.is_rationals() {
        return qpoly_to_string(&as_qpoly(k, p).unwrap(), var);
    }
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = k.elem_to_string(c);
        terms.push(match i {
            0 => format!("({cs})"),
            1 => format!("({cs})*{var}"),
            _ => format!("({cs})*{var}^{i}"),
        });
    }
    if terms.is_empty() {
        return String::from("0");
    }
    terms.join(" + ")
}

/// Adjoin a root of the irreducible `r` to `K`, flattening to a primitive element.
pub fn extend(k: &NumberField, r: &KPoly, cap: usize) -> Result<Extension> {
    let d = r.degree().expect("extension by zero polynomial");
    assert!(d >= 1);
    let r = r.monic(k);
    if d == 1 {
        return Ok(Extension { field: k.clone(), embed: Embedding::identity(k), root: k.neg(&r.coeffs()[0]) });
    }
    let needed = k.degree() * d;
    if needed > cap {
        return Err(Error::FieldDegreeCapExceeded { cap, needed });
    }
    for s in shift_sequence() {
        // gamma = theta + s*alpha is a root of r(x - s*alpha)
        let rs = shift_poly(k, &r, -s);
        let n = norm_poly(k, &rs);
        let dn = n.derivative(&Rationals);
        if gcd_q(&n, &dn).degree() != Some(0) {
            continue;
        }
        let mut trace = k.tower_trace().to_vec();
        trace.push(TowerStep { relative: kpoly_to_string(k, &r, "y"), shift: s, degree: needed });
        let l = NumberField::new_unchecked(n.monic(&Rationals), trace);
        let gamma = l.generator();
        let alpha_l = if k.is_rationals() {
            UPoly::zero()
        } else {
            // gcd over L of m(t) and r(gamma - s t) with alpha replaced by t
            let m_t: KPoly = lift_qpoly(&l, k.minpoly());
            let lin = UPoly::from_coeffs(&l, vec![gamma.clone(), l.from_i64(-s)]);
            let mut acc: KPoly = UPoly::zero();
            for c in r.coeffs().iter().rev() {
                let ct: KPoly = lift_qpoly(&l, c);
                acc = acc.mul(&lin, &l).add(&ct, &l);
            }
            let g = m_t.gcd(&acc, &l);
            assert_eq!(g.degree(), Some(1), "primitive element gcd must be linear");
            l.neg(&g.coeffs()[0])
        };
        let embed = Embedding { src: k.clone(), dst: l.clone(), image: alpha_l.clone() };
        let root = l.sub(&gamma, &l.mul(&l.from_i64(s), &alpha_l));
        return Ok(Extension { field: l, embed, root });
    }
    unreachable!()
}

/// Factorization of `p` over `K` together with one extension per nonlinear
/// irreducible factor, each adjoining a root of that factor.
pub fn factor_and_extend(k: &NumberField, p: &KPoly, cap: usize) -> Result<(Vec<(KPoly, u32)>, Vec<Extension>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, facs) = factor_over(k, p);
    let mut exts = Vec::new();
    for (h, _) in &facs {
        if h.degree().unwrap() >= 2 {
            exts.push(extend(k, h, cap)?);
        }
    }
    Ok((facs, exts))
}

#[derive(Clone, Debug)]
pub struct Automorphisms {
    pub maps: Vec<Embedding>,
    pub is_galois: bool,
}

/// Automorphisms of `K` over Q, identity first.
pub fn field_automorphisms(k: &NumberField) -> Automorphisms {
    if k.is_rationals() {
        return Automorphisms { maps: vec![Embedding::identity(k)], is_galois: true };
    }
    let m = lift_qpoly(k, k.minpoly());
    let mut roots = roots_over(k, &m);
    let g = k.generator();
    roots.sort_by_key(|r| *r != g);
    let maps: Vec<Embedding> = roots
        .into_iter()
        .map(|r| Embedding { src: k.clone(), dst: k.clone(), image: r })
        .collect();
    let is_galois = maps.len() == k.degree();
    Automorphisms { maps, is_galois }
}

/// Automorphisms of `K` fixing the image of a subfield.
pub fn relative_automorphisms(sub: &Embedding) -> Vec<Embedding> {
    let all = field_automorphisms(&sub.dst);
    all.maps
        .into_iter()
        .filter(|s| sub.src.is_rationals() || s.apply(&sub.image) == sub.image)
        .collect()
}

/// Minimal polynomial over the subfield `sub.src` of an element `a` of `sub.dst`.
pub fn relative_minpoly(sub: &Embedding, a: &NfElem) -> KPoly {
    let big = &sub.dst;
    let small = &sub.src;
    // characteristic polynomial over Q of multiplication by a
    let cp = charpoly_q(big, a);
    let (_, facs) = factor_over(small, &lift_qpoly(small, &cp));
    for (h, _) in facs {
        let hb = sub.apply_poly(&h);
        if big.is_zero(&hb.eval(a, big)) {
            return h;
        }
    }
    unreachable!("element satisfies its characteristic polynomial")
}

/// Characteristic polynomial over Q of multiplication by `a` on `K`.
pub fn charpoly_q(k: &NumberField, a: &NfElem) -> QPoly {
    let n = k.degree();
    // evaluate det(x I - M) at n+1 integer points and interpolate
    let m = k.as_ext().mul_matrix(a);
    let xs: Vec<BigRational> = (0..=n as i64).map(q).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let mut mat: Vec<Vec<BigRational>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { x - &m[i][j] } else { -m[i][j].clone() }).collect())
                .collect();
            det_q(&mut mat)
        })
        .collect();
    interpolate(&xs, &ys, &Rationals)
}

pub(crate) fn det_q(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = q(1);
    for c in 0..n {
        let piv = match (c..n).find(|&r| !m[r][c].is_zero()) {
            None => return BigRational::zero(),
            Some(r) => r,
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let p = m[c][c].clone();
        det *= &p;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &p;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    det
}

/// Splitting field over `sub.src` of the relative minimal polynomial of the
/// generator of `sub.dst`; returns the embedding of `sub.dst` into it.
pub fn galois_closure(sub: &Embedding, cap: usize) -> Result<Embedding> {
    let k = &sub.dst;
    let f = relative_minpoly(sub, &k.generator());
    let mut to_m = Embedding::identity(k);
    let mut sub_m = sub.clone();
    loop {
        let m = &to_m.dst;
        let fm = sub_m.apply_poly(&f);
        let (_, facs) = factor_over(m, &fm);
        match facs.iter().find(|(h, _)| h.degree().unwrap() >= 2) {
            None => return Ok(to_m),
            Some((h, _)) => {
                let ext = extend(m, h, cap)?;
                to_m = to_m.then(&ext.embed);
                sub_m = sub_m.then(&ext.embed);
            }
        }
    }
}

/// A field containing both `e1.dst` and `e2.dst` compatibly over the common
/// subfield `e1.src == e2.src`.
pub fn compositum(e1: &Embedding, e2: &Embedding, cap: usize) -> Result<(Embedding, Embedding)> {
    let k2 = &e2.dst;
    let f2 = relative_minpoly(e2, &k2.generator());
    let f2_in_1 = e1.apply_poly(&f2);
    let k1 = &e1.dst;
    let (_, facs) = factor_over(k1, &f2_in_1);
    let (h, _) = &facs[0];
    let ext = extend(k1, h, cap)?;
    let to_m2 = Embedding { src: k2.clone(), dst: ext.field.clone(), image: ext.root.clone() };
    Ok((ext.embed, to_m2))
}
