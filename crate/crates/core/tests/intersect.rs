use num_bigint::BigInt;
use picard_core::arith::factor::KPoly;
use picard_core::arith::mpoly::Vars;
use picard_core::arith::numfield::{Embedding, NumberField};
use picard_core::arith::parse::parse_mpoly;
use picard_core::arith::upoly::UPoly;
use picard_core::arith::Field;
use picard_core::divisors::*;
use picard_core::intersect::*;
use picard_core::linalg;
use picard_core::surface::{validate_surface, DoubleSexticSurface, Poly};
use proptest::prelude::*;

const CAP: usize = 16;

fn poly(s: &str) -> Poly {
    parse_mpoly(s, &Vars::xyz(), &NumberField::rationals()).unwrap()
}

fn surface(f: &str) -> DoubleSexticSurface {
    validate_surface(NumberField::rationals(), poly(f), vec![], None).unwrap()
}

fn up(k: &NumberField, c: &[i64]) -> KPoly {
    UPoly::from_coeffs(k, c.iter().map(|&x| k.from_i64(x)).collect())
}

/// `x = 0` as `(0 : t : 1)` and `y = 0` as `(t : 0 : 1)`.
fn axis_lines(x: &DoubleSexticSurface) -> Vec<FoundPair> {
    let k = &x.field;
    let id = Embedding::identity(k);
    let l1 = split_curve(&id, &x.f, &poly("x"), &[UPoly::zero(), UPoly::x(k), UPoly::one(k)], "L", CAP).unwrap().unwrap();
    let l2 = split_curve(&id, &x.f, &poly("y"), &[UPoly::x(k), UPoly::zero(), UPoly::one(k)], "M", CAP).unwrap().unwrap();
    vec![l1, l2]
}

fn set_of(x: &DoubleSexticSurface, pairs: &[FoundPair]) -> DivisorSet {
    let mut s = DivisorSet::new(&x.field);
    for p in pairs {
        s.absorb(p, CAP).unwrap();
    }
    s
}

fn index(set: &DivisorSet, label: &str) -> usize {
    set.records.iter().position(|r| r.label == label).unwrap()
}

#[test]
fn two_tritangent_lines_off_branch() {
    // both restrictions are squares of g3 = x^3+y^3+z^3+xyz; the lines meet at (0:0:1) off B
    let x = surface("(x^3+y^3+z^3+x*y*z)^2 + x*y*(x^4+2*y^4+3*z^4+x^2*y*z)");
    let set = set_of(&x, &axis_lines(&x));
    let k = set.field().clone();
    let mut job = IntersectionJob::compute(&set, CAP).unwrap();
    let m = match build_intersection_matrix(&mut job, 22).unwrap() {
        GramResolution::Resolved(m) => m,
        r => panic!("{r:?}"),
    };
    let (h, lp, lm, mp, mm) = (index(&set, "H"), index(&set, "L+"), index(&set, "L-"), index(&set, "M+"), index(&set, "M-"));
    for e in [lp, lm] {
        assert_eq!(m[e][mp] + m[e][mm], 1);
    }
    assert_eq!(m[lp][lm], 3);
    assert_eq!(m[h][lp], 1);
    assert_eq!(m[h][h], 2);
    assert_eq!(m[lp][lp], -2);
    // the lift values over (0:0:1) decide which components meet
    let w = |r: &DivisorRecord| r.lift.as_ref().unwrap().value(&k.zero(), &k);
    let agree = w(&set.records[lp]) == w(&set.records[mp]);
    assert_eq!(m[lp][mp], agree as i64);
    assert_eq!(m[lp][mm], !agree as i64);
}

#[test]
fn line_and_conic_tangent_on_branch() {
    // s = y(z^2+yz) + x(x^2+y^2+3z^2), Q = y^2 + x(x+2y+z), k = (2z^2+y^2)^2 - (z^2+yz)^2 + x(x^3+y^3+z^3+xyz)
    // f = s^2 + Q k restricts to y^2 (2z^2+y^2)^2 on x = 0 and to s^2 on Q; both curves touch B at (0:0:1)
    let f = "(y*(z^2+y*z) + x*(x^2+y^2+3*z^2))^2 + (y^2 + x*(x+2*y+z))*((2*z^2+y^2)^2 - (z^2+y*z)^2 + x*(x^3+y^3+z^3+x*y*z))";
    let x = surface(f);
    let k = x.field.clone();
    let id = Embedding::identity(&k);
    let line = split_curve(&id, &x.f, &poly("x"), &[UPoly::zero(), UPoly::x(&k), UPoly::one(&k)], "L", CAP).unwrap().unwrap();
    let conic = known_conic(&x, &poly("y^2 + x^2 + 2*x*y + x*z"), "Q", CAP).unwrap().unwrap();
    let set = set_of(&x, &[line, conic]);
    let kk = set.field().clone();
    let (lp, qp, qm) = (index(&set, "L+"), index(&set, "Q+"), index(&set, "Q-"));
    let r = &set.records;
    let a = split_intersection(&r[lp], &r[qp], &kk, CAP).unwrap();
    // L . Q = 2 at a single point of B; the lifts have distinct first-order terms there
    assert_eq!(a, PairSplit { matching: 1, opposite: 1, unresolved: 0 });
    assert_eq!(pair_intersection(&r[lp], &r[qp], &kk, CAP), pair_intersection(&r[qp], &r[lp], &kk, CAP));
    assert_eq!(pair_intersection(&r[lp], &r[qm], &kk, CAP).unwrap(), PairValue::Exact(1));
}

#[test]
fn hyperplane_blocks_have_determinant_minus_four_minus_d_squared() {
    let x = surface("(x^3+y^3+z^3+x*y*z)^2 + x*y*(x^4+2*y^4+3*z^4+x^2*y*z)");
    let mut pairs = axis_lines(&x);
    let y = surface("(x^3+y^3-z^3+x*y*z)^2 + (x^2+y*z)*(x^4+2*y^4+3*z^4-x*y*z^2)");
    pairs.truncate(1);
    let conic = known_conic(&y, &poly("x^2+y*z"), "C", CAP).unwrap().unwrap();
    for (surf, pair, d) in [(&x, &pairs[0], 1i64), (&y, &conic, 2)] {
        let set = set_of(surf, std::slice::from_ref(pair));
        let job = IntersectionJob::compute(&set, CAP).unwrap();
        let h = index(&set, "H");
        let dp = set.records.iter().position(|r| r.is_split()).unwrap();
        let block = vec![
            vec![job.entries[h][h].exact().unwrap(), job.entries[h][dp].exact().unwrap()],
            vec![job.entries[dp][h].exact().unwrap(), job.entries[dp][dp].exact().unwrap()],
        ];
        assert_eq!(linalg::det(&linalg::from_i64(&block)), BigInt::from(-4 - d * d));
    }
}

#[test]
fn fermat_line_configuration_is_consistent() {
    let x = surface("x^6+y^6+z^6");
    let out = find_tritangent_lines(&x, CAP);
    let mut set = DivisorSet::new(&x.field);
    for p in &out.found {
        set.absorb(p, CAP).unwrap();
    }
    let set = propagate(&set, &[], CAP);
    assert_eq!(set.split_count(), 36);
    let mut job = IntersectionJob::compute(&set, CAP).unwrap();
    assert!(job.constrained_pairs().is_empty());
    let m = match build_intersection_matrix(&mut job, 20).unwrap() {
        GramResolution::Resolved(m) => m,
        r => panic!("{r:?}"),
    };
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(m[i][j], m[j][i]);
        }
    }
    assert!(linalg::rank(&linalg::from_i64(&m)) <= 20);
}

#[test]
fn shared_component_is_an_error() {
    let x = surface("(x^3+y^3+z^3+x*y*z)^2 + x*y*(x^4+2*y^4+3*z^4+x^2*y*z)");
    let set = set_of(&x, &axis_lines(&x));
    let k = set.field().clone();
    let mut other = set.records[index(&set, "L+")].clone();
    // same curve, reparametrized t -> 2t + 1
    let p = other.param.clone().unwrap();
    let sub = up(&k, &[1, 2]);
    other.param = Some(core::array::from_fn(|i| p[i].compose(&sub, &k)));
    let l = other.lift.clone().unwrap();
    other.lift = Some(LiftBranch { s: l.s.compose(&sub, &k), ..l });
    other.plane_curve = Some(poly("x+0*y"));
    let a = &set.records[index(&set, "L+")];
    assert_eq!(same_component(a, &other, &k), Some(true));
    assert!(split_intersection(a, &other, &k, CAP).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, .. ProptestConfig::default() })]

    #[test]
    fn axis_lines_split_consistently(c in proptest::collection::vec(-3i64..=3, 6)) {
        let f = format!(
            "(x^3+y^3+z^3+({})*x*y*z+({})*x^2*z)^2 + x*y*(x^4+({})*y^4+z^4+({})*x^2*y*z+({})*x*z^3+({})*y^3*z)",
            c[0], c[1], c[2], c[3], c[4], c[5]
        );
        let Ok(x) = validate_surface(NumberField::rationals(), poly(&f), vec![], None) else {
            return Ok(());
        };
        let set = set_of(&x, &axis_lines(&x));
        let k = set.field().clone();
        let r = &set.records;
        let (lp, mp, mm) = (index(&set, "L+"), index(&set, "M+"), index(&set, "M-"));
        let ab = pair_intersection(&r[lp], &r[mp], &k, CAP).unwrap();
        let ba = pair_intersection(&r[mp], &r[lp], &k, CAP).unwrap();
        prop_assert_eq!(&ab, &ba);
        let s = split_intersection(&r[lp], &r[mp], &k, CAP).unwrap();
        prop_assert_eq!(s.total(), 1);
        let other = pair_intersection(&r[lp], &r[mm], &k, CAP).unwrap();
        prop_assert_eq!(ab.exact().unwrap() + other.exact().unwrap(), 1);
    }
}
