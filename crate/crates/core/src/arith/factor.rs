//! Integer factorization: trial division below 10^6, then Pollard rho
//! (Brent variant) with Miller-Rabin on the cofactors.
//!
//! Miller-Rabin with the first twelve prime bases is deterministic below
//! 3.3 * 10^24, which covers every word-sized input and every group order
//! this crate produces.

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{mul_mod, pow_mod};
use super::{ArithError, Integer};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n`.
fn rho_u64(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys, mut g) = (0u64, 0u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..std::cmp::min(128, r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn collect(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Prime factorization of a word-sized integer, ascending primes.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize_u64 needs n >= 1");
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d < TRIAL_LIMIT && d * d <= n {
        while n % d == 0 {
            primes.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if d * d > n {
            primes.push(n);
        } else {
            split_u64(n, &mut primes);
        }
    }
    collect(primes)
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (two.clone(), two.clone());
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if !g.is_one() {
                return g;
            }
        }
    }
    unreachable!()
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(v) = n.to_u64() {
        let mut small = Vec::new();
        split_u64(v, &mut small);
        out.extend(small.into_iter().map(BigUint::from));
        return;
    }
    if is_probable_prime_big(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let rest = &n / &d;
    split_big(d, out);
    split_big(rest, out);
}

/// Prime factorization of `n >= 1` as ascending `(prime, exponent)` pairs.
/// `1` factors as the empty list.
pub fn factorize(n: &Integer) -> Result<Vec<(Integer, u32)>, ArithError> {
    if !n.is_positive() {
        return Err(ArithError::Domain(format!("cannot factor {n}")));
    }
    if let Some(v) = n.to_u64() {
        return Ok(factorize_u64(v)
            .into_iter()
            .map(|(p, e)| (Integer::from(p), e))
            .collect());
    }
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for d in primes_up_to(TRIAL_LIMIT) {
        let bd = BigUint::from(d);
        while (&m % &bd).is_zero() {
            m /= &bd;
            primes.push(bd.clone());
        }
        if &bd * &bd > m {
            break;
        }
    }
    if !m.is_one() {
        if m < BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT) {
            primes.push(m);
        } else {
            split_big(m, &mut primes);
        }
    }
    primes.sort();
    let mut out: Vec<(Integer, u32)> = Vec::new();
    for q in primes {
        let q = Integer::from(q);
        match out.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}
