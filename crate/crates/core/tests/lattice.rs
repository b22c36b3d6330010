use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use picard_core::lattice::*;
use picard_core::linalg::{self, IntMatrix};
use proptest::prelude::*;

fn big(rows: &[Vec<i64>]) -> IntMatrix {
    linalg::from_i64(rows)
}

fn diag(d: &[i64]) -> IntMatrix {
    let n = d.len();
    big(&(0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect::<Vec<_>>())
}

/// Even symmetric matrix from a seed, conjugated by `diag(p, 1, ..)` so that `p^2 | det`.
fn even_with_square(n: usize, seed: &[i64], p: i64) -> IntMatrix {
    let mut m = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let v = seed[k % seed.len()];
            k += 1;
            if i == j {
                m[i][i] = 2 * v;
            } else {
                m[i][j] = v;
                m[j][i] = v;
            }
        }
    }
    for j in 0..n {
        m[0][j] *= p;
        m[j][0] *= p;
    }
    big(&m)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, .. ProptestConfig::default() })]

    #[test]
    fn lambda_p_is_independent_of_lifts(
        n in 2usize..5,
        seed in proptest::collection::vec(-4i64..=4, 10),
        pi in 0usize..3,
        lifts in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 10),
    ) {
        let p = [2u64, 3, 5][pi];
        let m = even_with_square(n, &seed, p as i64);
        prop_assume!(!linalg::det(&m).is_zero());
        let lam = lambda_p_of(&m, p, 1_000_000);
        prop_assume!(!lam.capped);
        let dim = lam.kernel.len() as u32;
        for code in 0..(p.pow(dim)) {
            let mut c = code;
            let mut v = vec![0i64; n];
            for b in &lam.kernel {
                let a = (c % p) as i64;
                c /= p;
                for j in 0..n {
                    v[j] = (v[j] + a * b[j] as i64) % p as i64;
                }
            }
            let base: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            let expect = in_lambda_p(&m, &base, p);
            let listed = lam.classes.contains(&v.iter().map(|&x| x as u64).collect::<Vec<_>>());
            prop_assert_eq!(expect && code != 0, listed);
            for y in &lifts {
                let x: Vec<BigInt> = (0..n).map(|j| BigInt::from(v[j] + p as i64 * y[j])).collect();
                prop_assert_eq!(in_lambda_p(&m, &x, p), expect);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, .. ProptestConfig::default() })]

    #[test]
    fn basis_reproduces_generators(c in proptest::collection::vec(-3i64..=3, 12)) {
        // generators H and four integer combinations inside a hyperbolic rank-3 lattice
        let m0 = big(&[vec![2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        let mut coords = vec![vec![1i64, 0, 0]];
        for r in c.chunks(3) {
            coords.push(r.to_vec());
        }
        let cm = big(&coords);
        let g = linalg::mul(&linalg::mul(&cm, &m0), &linalg::transpose(&cm));
        let l = rank_and_relations(&g, Some(0)).unwrap();
        prop_assert_eq!(linalg::mul(&linalg::mul(&l.basis, &g), &linalg::transpose(&l.basis)), l.gram.clone());
        prop_assert!(l.generator_coordinates().is_some());
        prop_assert_eq!(l.rank(), linalg::rank(&cm));
        if l.rank() == 3 {
            // det of a finite-index sublattice is index^2 det
            let (s, _, _) = linalg::smith(&cm);
            let index: BigInt = (0..3).map(|i| s[i][i].abs()).product();
            prop_assert_eq!(l.det.abs(), &index * &index * linalg::det(&m0).abs());
        }
    }

    #[test]
    fn isometries_preserve_lambda_p(a in 1i64..4, b in 1i64..4, pi in 0usize..2) {
        let p = [2i64, 3][pi];
        let m = diag(&[2, -2 * p * p * a, -2 * p * p * a, -2 * b]);
        let l = GramLattice::from_gram(&m).unwrap();
        let lam = compute_lambda_p(&l, p as u64);
        let swap = big(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]);
        prop_assert!(is_isometry(&swap, &l.gram));
        for x in &lam.classes {
            let img = vec![x[0], x[2], x[1], x[3]];
            prop_assert!(lam.classes.contains(&img));
        }
    }

    #[test]
    fn named_decomposition_matches_invariants(k in 0usize..6, s in 1i64..=2) {
        let shapes = [
            vec![(NamedLattice::U, 1)],
            vec![(NamedLattice::U, s), (NamedLattice::A(2), -1)],
            vec![(NamedLattice::U, 1), (NamedLattice::E(8), -1)],
            vec![(NamedLattice::A(1), 1), (NamedLattice::A(3), -s)],
            vec![(NamedLattice::U, 1), (NamedLattice::D(4), -1), (NamedLattice::A(1), -1)],
            vec![(NamedLattice::U, 2), (NamedLattice::E(6), -1)],
        ];
        let parts = &shapes[k];
        let n: usize = parts.iter().map(|(l, _)| l.rank()).sum();
        let mut m = linalg::zeros(n, n);
        let mut off = 0;
        for (lat, sc) in parts {
            let g = lat.gram();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    m[off + i][off + j] = &g[i][j] * BigInt::from(*sc);
                }
            }
            off += g.len();
        }
        let l = GramLattice::from_gram(&m).unwrap();
        let dg = discriminant_group(&l);
        if let Some(d) = decompose_named(&l) {
            let l2 = GramLattice::from_gram(&d.gram).unwrap();
            prop_assert_eq!(l2.rank(), l.rank());
            prop_assert_eq!(l2.signature, l.signature);
            prop_assert_eq!(l2.det.abs(), l.det.abs());
            let d2 = discriminant_group(&l2);
            // equal groups up to isomorphism: compare Smith diagonals of the two Gram matrices
            let (s1, _, _) = linalg::smith(&l.gram);
            let (s2, _, _) = linalg::smith(&l2.gram);
            prop_assert_eq!((0..n).map(|i| s1[i][i].clone()).collect::<Vec<_>>(), (0..n).map(|i| s2[i][i].clone()).collect::<Vec<_>>());
            prop_assert_eq!(d2.length, dg.length);
        } else {
            prop_assert!(l.rank() < dg.length + 2);
        }
    }
}

#[test]
fn lambda_three_by_enumeration() {
    // independent enumeration of Z^2 / 3 Z^2 for diag(2, -18)
    let m = diag(&[2, -18]);
    let mut expect = Vec::new();
    for a in 0..3i64 {
        for b in 0..3i64 {
            let km = (2 * a % 3 == 0) && (-18 * b % 3 == 0);
            let nrm = 2 * a * a - 18 * b * b;
            if (a, b) != (0, 0) && km && nrm % 18 == 0 {
                expect.push(vec![a as u64, b as u64]);
            }
        }
    }
    let l = GramLattice::from_gram(&m).unwrap();
    let mut got = compute_lambda_p(&l, 3).classes;
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
}
