use picard_core::arith::mpoly::Vars;
use picard_core::arith::numfield::{Embedding, NumberField};
use picard_core::arith::parse::{parse_mpoly, parse_qpoly};
use picard_core::arith::{AlgRng, Field};
use picard_core::divisors::*;
use picard_core::surface::{validate_surface, Poly, SurfaceAutomorphism};

fn poly_over(s: &str, k: &NumberField) -> Poly {
    parse_mpoly(s, &Vars::xyz(), k).unwrap()
}

#[test]
fn fermat_lines_self_validate() {
    let k = NumberField::rationals();
    let f = poly_over("x^6+y^6+z^6", &k);
    let x = validate_surface(k.clone(), f.clone(), vec![], None).unwrap();
    let out = find_tritangent_lines(&x, 16);
    assert!(out.completed, "{:?}", out.notes);
    assert!(!out.found.is_empty());
    for p in &out.found {
        let l = &p.embedding.dst;
        let fl = f.map(l, |c| p.embedding.apply(c));
        for r in &p.records {
            assert!(r.verify(&fl, l));
            assert_eq!(r.degree, 1);
        }
    }
    eprintln!("fermat: {} line orbits", out.found.len());
}

#[test]
fn generic_sextic_has_no_lines() {
    let k = NumberField::rationals();
    let f = poly_over("x^6 + 2*y^6 + 3*z^6 + x*y^4*z - 5*x^3*y^2*z + y*z^5 - 7*x^2*y^3*z", &k);
    let x = validate_surface(k, f, vec![], None).unwrap();
    let out = find_tritangent_lines(&x, 16);
    assert!(out.completed);
    assert!(out.found.is_empty());
}

#[test]
fn conjugate_line_is_added() {
    // x = +-sqrt(2) y are both tritangent
    let k = NumberField::rationals();
    let f = poly_over("(x^3 + y^3 + z^3 - x*y*z)^2 + (x^2 - 2*y^2)*(x^4 + y^4 + 3*z^4 + x*y*z^2)", &k);
    let x = validate_surface(k.clone(), f.clone(), vec![], None).unwrap();
    let k2 = NumberField::new(&parse_qpoly("t^2 - 2", "t").unwrap()).unwrap();
    let emb = Embedding::from_rationals(&k2);
    let r2 = k2.generator();
    let curve = poly_over("x", &k2).sub(&poly_over("y", &k2).scale(&r2, &k2), &k2);
    let param = [
        picard_core::arith::UPoly::from_coeffs(&k2, vec![k2.zero(), r2.clone()]),
        picard_core::arith::UPoly::x(&k2),
        picard_core::arith::UPoly::one(&k2),
    ];
    let pair = split_curve(&emb, &f, &curve, &param, "L", 16).unwrap().expect("line splits");
    let mut set = DivisorSet::new(&k);
    set.absorb(&pair, 16).unwrap();
    assert_eq!(set.records.len(), 3);
    let closed = propagate(&set, &x.automorphisms, 16);
    assert_eq!(closed.records.len(), 5);
    assert!(closed.verify(&f));
    assert!(closed.g_closed && closed.galois_closed);
    let again = propagate(&closed, &x.automorphisms, 16);
    assert_eq!(again.records.len(), 5);
}

#[test]
fn swap_transports_line() {
    let k = NumberField::rationals();
    let f = poly_over("(x^3 + y^3 + z^3)^2 + y*z*(x^4 + y^4 + z^4 + 2*x^2*y*z)", &k);
    let (o, z) = (k.one(), k.zero());
    let swap = SurfaceAutomorphism {
        matrix: [[o.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), o.clone()], [z.clone(), o.clone(), z.clone()]],
        lambda: o.clone(),
        sign: 1,
    };
    let x = validate_surface(k.clone(), f.clone(), vec![swap], None).unwrap();
    let param = [
        picard_core::arith::UPoly::x(&k),
        picard_core::arith::UPoly::zero(),
        picard_core::arith::UPoly::one(&k),
    ];
    let pair = split_curve(&Embedding::identity(&k), &f, &poly_over("y", &k), &param, "L", 16).unwrap().unwrap();
    let mut set = DivisorSet::new(&k);
    set.absorb(&pair, 16).unwrap();
    let closed = propagate(&set, &x.automorphisms, 16);
    assert_eq!(closed.records.len(), 5);
    let zline = poly_over("z", &k);
    assert!(closed.records.iter().any(|r| r.plane_curve.as_ref() == Some(&zline)));
    assert!(closed.verify(&f));
}

#[test]
fn by_construction_curves_split_and_random_ones_do_not() {
    let k = NumberField::rationals();
    let mut rng = AlgRng::new(5);
    let form = |d: u32, rng: &mut AlgRng| {
        let mut terms = Vec::new();
        for i in 0..=d {
            for j in 0..=d - i {
                terms.push(format!("({})*x^{}*y^{}*z^{}", rng.small_int(3), i, j, d - i - j));
            }
        }
        poly_over(&terms.join("+"), &k)
    };
    let mut split = 0;
    for _ in 0..6 {
        let (b, c) = (rng.small_int(3), rng.small_int(3));
        let line = poly_over(&format!("x - ({b})*y - ({c})*z"), &k);
        let f = form(3, &mut rng).pow(2, &k).add(&line.mul(&form(5, &mut rng), &k), &k);
        let param = [
            picard_core::arith::UPoly::from_coeffs(&k, vec![k.from_i64(c), k.from_i64(b)]),
            picard_core::arith::UPoly::x(&k),
            picard_core::arith::UPoly::one(&k),
        ];
        if let Ok(Some(w)) = check_even_tangency(&param, &f, &k) {
            let g = f.eval_upoly(&param, &k);
            assert_eq!(g, w.s.square(&k).scale(&w.c, &k));
            split += 1;
        }
    }
    assert!(split >= 5);
    for _ in 0..6 {
        let f = form(6, &mut rng);
        let param = [
            picard_core::arith::UPoly::from_coeffs(&k, vec![k.from_i64(rng.small_int(3)), k.from_i64(1)]),
            picard_core::arith::UPoly::x(&k),
            picard_core::arith::UPoly::one(&k),
        ];
        assert!(!matches!(check_even_tangency(&param, &f, &k), Ok(Some(_))));
    }
}
