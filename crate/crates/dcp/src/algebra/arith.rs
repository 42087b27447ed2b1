//! Machine-word number theory: primality, factorisation, prime sequences,
//! and a conversion from huge rationals to f64 that survives operands far
//! outside the f64 exponent range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // These witnesses are exact for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending sequence of odd primes strictly below `start`.
///
/// The default `start` of 2^31 keeps residue products inside double-word
/// intermediates; the first two primes yielded are 2147483647 and 2147483629.
pub struct PrimeSequence {
    next: u64,
}

impl PrimeSequence {
    pub fn descending_from(start: u64) -> Self {
        PrimeSequence { next: start }
    }
}

impl Default for PrimeSequence {
    fn default() -> Self {
        PrimeSequence::descending_from(1 << 31)
    }
}

impl Iterator for PrimeSequence {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut n = self.next;
        loop {
            if n <= 3 {
                return None;
            }
            n -= 1;
            if n % 2 == 1 && is_prime(n) {
                self.next = n;
                return Some(n);
            }
        }
    }
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle-finding variant; n must be odd composite.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Full prime factorisation of a positive u64 as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(m, &mut out);
            continue;
        }
        // trial division first; rho for the stubborn cofactors
        let mut found = 0;
        let mut d = 7u64;
        while d * d <= m && d < 100_000 {
            if m % d == 0 {
                found = d;
                break;
            }
            d += 2;
        }
        if found == 0 {
            found = pollard_rho(m);
        }
        stack.push(found);
        stack.push(m / found);
    }
    out.sort_unstable();
    out
}

/// All positive divisors of n, unsorted bound is fine for candidate loops.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let base = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe = pe.saturating_mul(p);
            divs.extend(base.iter().map(|d| d.saturating_mul(pe)));
        }
    }
    divs.sort_unstable();
    divs.dedup();
    divs
}

/// f64 value of a big rational, tolerating numerator/denominator far beyond
/// the f64 range as long as the quotient itself is representable.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let num = x.numer().abs();
    let den = x.denom().clone();
    let shift_n = (num.bits() as i64 - 63).max(0);
    let shift_d = (den.bits() as i64 - 63).max(0);
    let n = (num >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (den >> shift_d).to_f64().unwrap_or(f64::MAX);
    sign * (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Best rational approximation p/q to x with q <= max_den (continued fractions).
pub fn f64_to_rat(x: f64, max_den: u64) -> BigRational {
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut x = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor() as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    BigRational::new(BigInt::from(sign * p1), BigInt::from(q1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn primes_descend_below_2_31() {
        let mut seq = PrimeSequence::default();
        assert_eq!(seq.next(), Some(2147483647));
        assert_eq!(seq.next(), Some(2147483629));
        assert_eq!(seq.next(), Some(2147483587));
    }

    #[test]
    fn factorize_small_and_large() {
        assert_eq!(factorize(10368), vec![(2, 7), (3, 4)]);
        assert_eq!(factorize(2147483647), vec![(2147483647, 1)]);
        let n = 1_000_003u64 * 998_117;
        let f = factorize(n);
        assert_eq!(f.iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
    }

    #[test]
    fn rat_to_f64_huge_components() {
        let big = BigInt::from(10).pow(400);
        let x = BigRational::new(&big * 3, big.clone());
        assert!((rat_to_f64(&x) - 3.0).abs() < 1e-12);
        let y = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert!((rat_to_f64(&y) + 1.0 / 3.0).abs() < 1e-15);
    }
}
