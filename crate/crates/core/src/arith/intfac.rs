//! Integer primality and factorization (trial division, Miller–Rabin,
//! Pollard–Brent).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic for `n < 3.3e24`, probabilistic with negligible error above.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &[2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

fn pollard_brent(n: &BigUint, c: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let m: u64 = 128;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (&q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1u64.. {
        if let Some(d) = pollard_brent(&n, c) {
            let e = &n / &d;
            split_into(d, out);
            split_into(e, out);
            return;
        }
    }
}

/// Prime factorization `n = prod p^e`, sorted by prime. `factorize(1)` is empty.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut n = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u32;
    while p < 10_000 {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        while (&n % &pb).is_zero() {
            n /= &pb;
            primes.push(pb.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(n, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((r, e)) if *r == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    factorize(&BigUint::from(n))
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

/// Distinct prime divisors.
pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: &BigUint) -> bool {
    !n.is_zero() && factorize(n).iter().all(|(_, e)| *e == 1)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize_u64(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Primes in `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 {
        return vec![];
    }
    (lo.max(2)..=hi).filter(|&n| is_prime_u64(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(mut n: u64) -> Vec<(u64, u32)> {
        let mut v = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                v.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            v.push((n, 1));
        }
        v
    }

    #[test]
    fn small_numbers_match_trial_division() {
        for n in 1..3000u64 {
            assert_eq!(factorize_u64(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn semiprime_of_large_factors() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let n = BigUint::from(p) * BigUint::from(q) * BigUint::from(q);
        let f = factorize(&n);
        assert_eq!(f, vec![(BigUint::from(q), 2), (BigUint::from(p), 1)]);
    }

    #[test]
    fn carmichael_is_composite() {
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime_u64(2_147_483_647));
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(66), 20);
    }
}
