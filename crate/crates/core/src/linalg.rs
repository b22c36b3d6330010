//! Dense integer matrices: fraction-free elimination, Hermite and Smith forms.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_i64(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &r[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Rank over `Q` by Bareiss elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(c, p);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                a[i][j] = (&a[c][c] * &a[i][j] - &a[i][c] * &a[c][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular,
/// `U * m = H`, and the nonzero rows of `H` in echelon form with positive pivots.
pub fn hermite(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine column c into row r
        for i in r + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let e = h[r][c].extended_gcd(&h[i][c]);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (a, b) = (&h[r][c] / &g, &h[i][c] / &g);
            combine_rows(&mut h, r, i, &x, &y, &a, &b);
            combine_rows(&mut u, r, i, &x, &y, &a, &b);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

// (row r, row i) <- (x r + y i, -b r + a i)
fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, x: &BigInt, y: &BigInt, a: &BigInt, b: &BigInt) {
    for j in 0..m[r].len() {
        let (p, q) = (m[r][j].clone(), m[i][j].clone());
        m[r][j] = x * &p + y * &q;
        m[i][j] = a * &q - b * &p;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for v in &mut m[r] {
        *v = -core::mem::take(v);
    }
}

fn sub_row(m: &mut IntMatrix, i: usize, r: usize, q: &BigInt) {
    for j in 0..m[i].len() {
        let d = q * &m[r][j];
        m[i][j] -= d;
    }
}

/// Smith normal form: `(S, U, V)` with `U m V = S` diagonal, `s_i | s_{i+1}`,
/// all `s_i >= 0`, and `U`, `V` unimodular.
pub fn smith(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut s = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[i][j].is_zero() && best.is_none_or(|(a, b)| s[i][j].abs() < s[a][b].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(s, u, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[i][t].div_floor(&s[t][t]);
                if !q.is_zero() {
                    sub_row(&mut s, i, t, &q);
                    sub_row(&mut u, i, t, &q);
                }
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = s[t][j].div_floor(&s[t][t]);
                if !q.is_zero() {
                    sub_col(&mut s, j, t, &q);
                    sub_col(&mut v, j, t, &q);
                }
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !s[i][j].is_multiple_of(&s[t][t]));
            match bad {
                Some((i, _)) => {
                    // row t += row i, then repeat
                    for j in 0..cols {
                        let a = s[i][j].clone();
                        s[t][j] += a;
                    }
                    for j in 0..rows {
                        let a = u[i][j].clone();
                        u[t][j] += a;
                    }
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    finish(s, u, v)
}

fn finish(mut s: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    for t in 0..s.len().min(s.first().map_or(0, |r| r.len())) {
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    (s, u, v)
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in m.iter_mut() {
        r.swap(a, b);
    }
}

// column j -= q * column t
fn sub_col(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for r in m.iter_mut() {
        let d = q * &r[t];
        r[j] -= d;
    }
}

/// Integer kernel basis of `x -> x m` (left kernel), as rows.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite(m);
    h.iter().zip(u).filter(|(r, _)| r.iter().all(|x| x.is_zero())).map(|(_, k)| k).collect()
}

/// Solves `x a = b` over `Q` for a square nonsingular `a`; returns `(numerators, denominator)`.
pub fn solve_left(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
    use num_rational::BigRational;
    let n = a.len();
    // transpose system a^T x^T = b^T with Gaussian elimination over Q
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(a[j][i].clone())).collect();
            r.push(BigRational::from_integer(b[i].clone()));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for j in c..=n {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    let den = m.iter().fold(BigInt::one(), |acc, r| acc.lcm(r[n].denom()));
    let x = m.iter().map(|r| (&r[n] * BigRational::from_integer(den.clone())).to_integer()).collect();
    Some((x, den))
}

pub fn zeros(r: usize, c: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); c]; r]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn rank_and_det() {
        let a = m(&[&[2, 1, 0], &[1, -2, 0], &[3, -1, 0]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(det(&a), BigInt::zero());
        let b = m(&[&[2, 1], &[1, -2]]);
        assert_eq!(det(&b), BigInt::from(-5));
        let c = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(det(&c), BigInt::from(-3));
    }

    #[test]
    fn hermite_is_unimodular_transform() {
        let a = m(&[&[4, 6, 2], &[2, 3, 1], &[1, 5, 7]]);
        let (h, u) = hermite(&a);
        assert_eq!(mul(&u, &a), h);
        assert!(det(&u).abs().is_one());
        assert!(h[2].iter().all(|x| x.is_zero()));
        assert_eq!(left_kernel(&a).len(), 1);
    }

    #[test]
    fn smith_of_diagonal() {
        let a = m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]);
        let (s, u, v) = smith(&a);
        assert_eq!(mul(&mul(&u, &a), &v), s);
        let d: Vec<i64> = (0..3).map(|i| i64::try_from(&s[i][i]).unwrap()).collect();
        assert_eq!(d, vec![1, 2, 12]);
    }

    #[test]
    fn solve_left_rational() {
        let a = m(&[&[2, 0], &[0, -2]]);
        let (x, d) = solve_left(&a, &[BigInt::from(1), BigInt::from(1)]).unwrap();
        assert_eq!(d, BigInt::from(2));
        assert_eq!(x, vec![BigInt::from(1), BigInt::from(-1)]);
    }
}
