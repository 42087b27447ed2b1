//! Chinese remaindering and rational number reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Combine residues modulo pairwise-distinct primes into a single residue
/// modulo their product. Returns (value, product modulus).
pub fn crt_combine(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut seen: Vec<&BigInt> = Vec::new();
    for (_, p) in residues {
        if seen.contains(&p) {
            return Err(Error::DuplicatePrime(p.to_u64().unwrap_or(0)));
        }
        seen.push(p);
    }
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, p) in residues {
        // solve x = value (mod modulus), x = r (mod p)
        let gcd = modulus.extended_gcd(p);
        debug_assert!(gcd.gcd.is_one());
        let diff = (r - &value).mod_floor(p);
        let step = (gcd.x * diff).mod_floor(p);
        value += &modulus * step;
        modulus *= p;
        value = value.mod_floor(&modulus);
    }
    Ok((value, modulus))
}

/// Wang-style rational reconstruction of n/d from residue a mod m.
///
/// Returns n/d with |n|, d <= floor(sqrt(m/2)), d*a = n (mod m) and
/// gcd(n, d) = 1, or None when no such pair exists.
pub fn rational_reconstruct(residue: &BigInt, modulus: &BigInt) -> Option<BigRational> {
    assert!(!residue.is_negative() && residue < modulus);
    let bound = (modulus / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), residue.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = r1;
        r1 = r2;
        let t2 = &t0 - &q * &t1;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !n.gcd(&d).is_one() && !(n.is_zero() && d.is_one()) {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn crt_pair() {
        let (v, m) = crt_combine(&[(bi(2), bi(3)), (bi(3), bi(5))]).unwrap();
        assert_eq!((v, m), (bi(8), bi(15)));
    }

    #[test]
    fn crt_zero() {
        let (v, m) = crt_combine(&[(bi(0), bi(3)), (bi(0), bi(5))]).unwrap();
        assert_eq!((v, m), (bi(0), bi(15)));
    }

    #[test]
    fn crt_triple_matches_direct_search() {
        // oracle: scan 0..104 for the unique solution
        let mut expect = None;
        for x in 0..105i64 {
            if x % 3 == 1 && x % 5 == 2 && x % 7 == 3 {
                expect = Some(x);
                break;
            }
        }
        assert_eq!(expect, Some(52));
        let (v, m) = crt_combine(&[(bi(1), bi(3)), (bi(2), bi(5)), (bi(3), bi(7))]).unwrap();
        assert_eq!((v, m), (bi(52), bi(105)));
    }

    #[test]
    fn crt_duplicate_prime_rejected() {
        assert!(crt_combine(&[(bi(1), bi(3)), (bi(2), bi(3))]).is_err());
    }

    #[test]
    fn reconstruct_third() {
        // 3 * 34 = 102 = 1 (mod 101)
        assert_eq!(
            rational_reconstruct(&bi(34), &bi(101)),
            Some(rat(1, 3))
        );
        assert_eq!(rational_reconstruct(&bi(0), &bi(101)), Some(rat(0, 1)));
    }

    #[test]
    fn reconstruct_matches_exhaustive_oracle() {
        // Exhaust |n|, d <= floor(sqrt(101/2)) = 7 for the admissible pair.
        let m = 101i64;
        for a in [50i64, 34, 77] {
            let mut found = None;
            'outer: for d in 1..=7i64 {
                for n in -7..=7i64 {
                    if n.gcd(&d) == 1 && (d * a - n).rem_euclid(m) == 0 {
                        found = Some(rat(n, d));
                        break 'outer;
                    }
                }
            }
            assert_eq!(rational_reconstruct(&bi(a), &bi(m as i64)), found, "a = {a}");
        }
        // and in particular 50 mod 101 is -1/2 under the Wang bound
        assert_eq!(rational_reconstruct(&bi(50), &bi(101)), Some(rat(-1, 2)));
    }

    #[test]
    fn roundtrip_through_crt() {
        let primes = [10007i64, 10009, 10037];
        for (n, d) in [(22i64, 7i64), (-355, 113), (0, 1), (1, 999)] {
            let residues: Vec<(BigInt, BigInt)> = primes
                .iter()
                .map(|&p| {
                    let dinv = mod_inv(d.rem_euclid(p), p);
                    (bi((n.rem_euclid(p) * dinv).rem_euclid(p)), bi(p))
                })
                .collect();
            let (v, m) = crt_combine(&residues).unwrap();
            assert_eq!(rational_reconstruct(&v, &m), Some(rat(n, d)));
        }
    }

    fn mod_inv(a: i64, m: i64) -> i64 {
        let (mut t, mut newt) = (0i64, 1i64);
        let (mut r, mut newr) = (m, a);
        while newr != 0 {
            let q = r / newr;
            (t, newt) = (newt, t - q * newt);
            (r, newr) = (newr, r - q * newr);
        }
        t.rem_euclid(m)
    }
}
