//! Order-by-order fixed-point solution of the damp-wall mean-size
//! recurrences.
//!
//! The system couples states (m, y) = (width, midpoint height): bulk states
//! y > m, wall-adjacent states y = m, and on-wall states y = m - 1. Solving
//! proceeds in total p-degree; within one degree the states are swept with m
//! ascending (the degree-0 couplings all point towards smaller m, or from the
//! adjacent state to the on-wall state of the same width, so the sweep is a
//! finite triangular solve).
//!
//! Cutoffs: width is capped at M = m + ceil(N/2) + 1 (each width increment
//! costs p-degree >= 2 in the bulk and amortised >= 2 through the wall);
//! height is capped at Y = max(y, m) + N + 1 with the bulk closed-form Taylor
//! data imposed beyond the horizon (any influence of row Y on the seed
//! carries p-degree >= N + 1). Correctness of the cutoffs is certified
//! against the independent enumeration oracle, not argued here alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{BivariateSeries, ModSeries, RatSeries, Seed, WallRatio};
use crate::algebra::{IntPoly, PrimeField};
use crate::error::{Error, Result};

fn width_cutoff(seed: &Seed, order: usize) -> usize {
    seed.m + (order + 1) / 2 + 1
}

// The stored band must also hold the wall states of the widest column, so the
// horizon is taken above max(y, M) rather than max(y, m); it only grows the
// safety margin of N + 1 rows above anything reachable.
fn height_cutoff(seed: &Seed, order: usize) -> usize {
    seed.y.max(width_cutoff(seed, order)) + order + 1
}

/// Taylor coefficient of the bulk closed form S_m^bulk at order n:
/// m * b_n + m(m-1)/2 * 2^n with b_n the coefficients of (1-p)^2/(1-2p)^2.
fn bulk_taylor(m: usize, n: usize) -> BigInt {
    let b: BigInt = match n {
        0 => BigInt::one(),
        1 => BigInt::from(2),
        _ => BigInt::from(n + 3) << (n - 2),
    };
    BigInt::from(m) * b + BigInt::from(m * (m - 1) / 2) * (BigInt::one() << n)
}

/// Exact bivariate series of the unnormalized mean size for the given seed.
///
/// In the low-density region Q_{m,y} = 1, so this is the mean size itself.
pub fn mean_size_series(seed: Seed, order: usize) -> BivariateSeries {
    let n = order;
    let mcut = width_cutoff(&seed, n);
    let ycut = height_cutoff(&seed, n);
    // coeffs[state][d] = polynomial in p_w; state index packs (m, y)
    let idx = |m: usize, y: usize| -> usize {
        debug_assert!(m >= 1 && y + 1 >= m && y < ycut);
        (m - 1) * ycut + y
    };
    let mut coeffs: Vec<Vec<IntPoly>> = vec![Vec::with_capacity(n + 1); mcut * ycut];
    let get = |coeffs: &Vec<Vec<IntPoly>>, m: usize, y: usize, d: i64| -> IntPoly {
        if m == 0 || d < 0 {
            return IntPoly::zero();
        }
        if y >= ycut {
            return IntPoly::constant(bulk_taylor(m, d as usize));
        }
        if m > mcut {
            return IntPoly::zero();
        }
        coeffs[idx(m, y)][d as usize].clone()
    };
    let mul_pw = |p: &IntPoly| p.shift_up(1);
    for d in 0..=n as i64 {
        for m in 1..=mcut {
            let seed_term = |target: usize| {
                if d == 0 {
                    IntPoly::constant(BigInt::from(target))
                } else {
                    IntPoly::zero()
                }
            };
            // on the wall (m, m-1): p S_{m,m} + q S_{m-1,m-1} + m
            let mut cur = seed_term(m);
            cur = &cur + &get(&coeffs, m, m, d - 1);
            cur = &cur + &get(&coeffs, m - 1, m - 1, d);
            cur = &cur - &get(&coeffs, m - 1, m - 1, d - 1);
            coeffs[idx(m, m - 1)].push(cur);
            // adjacent (m, m):
            //   p q_w S_{m,m+1} + p_w q S_{m,m-1} + p p_w S_{m+1,m}
            //   + q q_w S_{m-1,m} + m
            let mut cur = seed_term(m);
            let up = get(&coeffs, m, m + 1, d - 1);
            cur = &cur + &(&up - &mul_pw(&up));
            let down0 = get(&coeffs, m, m - 1, d);
            let down1 = get(&coeffs, m, m - 1, d - 1);
            cur = &cur + &mul_pw(&(&down0 - &down1));
            let grow = get(&coeffs, m + 1, m, d - 1);
            cur = &cur + &mul_pw(&grow);
            let shrink0 = get(&coeffs, m - 1, m, d);
            let shrink1 = get(&coeffs, m - 1, m, d - 1);
            let shrink = &shrink0 - &shrink1;
            cur = &cur + &(&shrink - &mul_pw(&shrink));
            coeffs[idx(m, m)].push(cur);
            // bulk (m, y), y > m:
            //   pq S_{m,y+1} + pq S_{m,y-1} + p^2 S_{m+1,y} + q^2 S_{m-1,y} + m
            for y in (m + 1)..ycut {
                let mut cur = seed_term(m);
                for yy in [y + 1, y - 1] {
                    cur = &cur + &get(&coeffs, m, yy, d - 1);
                    cur = &cur - &get(&coeffs, m, yy, d - 2);
                }
                cur = &cur + &get(&coeffs, m + 1, y, d - 2);
                cur = &cur + &get(&coeffs, m - 1, y, d);
                cur = &cur - &(&get(&coeffs, m - 1, y, d - 1) * &BigInt::from(2));
                cur = &cur + &get(&coeffs, m - 1, y, d - 2);
                coeffs[idx(m, y)].push(cur);
            }
        }
    }
    let mut terms = std::collections::BTreeMap::new();
    for (d, poly) in coeffs[idx(seed.m, seed.y)].iter().enumerate() {
        for (k, c) in poly.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.insert((d, k), c.clone());
            }
        }
    }
    BivariateSeries::new(n, terms)
}

/// Exact rational series of the mean size specialized at p_w = r p,
/// generated natively in the univariate system (fast path for deep orders).
pub fn mean_size_rat_series(seed: Seed, r: &WallRatio, order: usize) -> RatSeries {
    let n = order;
    let mcut = width_cutoff(&seed, n);
    let ycut = height_cutoff(&seed, n);
    let idx = |m: usize, y: usize| -> usize { (m - 1) * ycut + y };
    let mut coeffs: Vec<Vec<BigRational>> = vec![Vec::with_capacity(n + 1); mcut * ycut];
    let get = |coeffs: &Vec<Vec<BigRational>>, m: usize, y: usize, d: i64| -> BigRational {
        if m == 0 || d < 0 {
            return BigRational::zero();
        }
        if y >= ycut {
            return BigRational::from(bulk_taylor(m, d as usize));
        }
        if m > mcut {
            return BigRational::zero();
        }
        coeffs[idx(m, y)][d as usize].clone()
    };
    let r = &r.0;
    let r1 = r + BigRational::one();
    for d in 0..=n as i64 {
        for m in 1..=mcut {
            let seed_term = |target: usize| {
                if d == 0 {
                    BigRational::from(BigInt::from(target))
                } else {
                    BigRational::zero()
                }
            };
            // on the wall
            let mut cur = seed_term(m);
            cur += get(&coeffs, m, m, d - 1);
            cur += get(&coeffs, m - 1, m - 1, d);
            cur -= get(&coeffs, m - 1, m - 1, d - 1);
            coeffs[idx(m, m - 1)].push(cur);
            // adjacent: p(1-rp) S_{m,m+1} + rp(1-p) S_{m,m-1} + rp^2 S_{m+1,m}
            //           + (1-p)(1-rp) S_{m-1,m} + m
            let mut cur = seed_term(m);
            cur += get(&coeffs, m, m + 1, d - 1);
            cur -= r * get(&coeffs, m, m + 1, d - 2);
            cur += r * get(&coeffs, m, m - 1, d - 1);
            cur -= r * get(&coeffs, m, m - 1, d - 2);
            cur += r * get(&coeffs, m + 1, m, d - 2);
            cur += get(&coeffs, m - 1, m, d);
            cur -= &r1 * get(&coeffs, m - 1, m, d - 1);
            cur += r * get(&coeffs, m - 1, m, d - 2);
            coeffs[idx(m, m)].push(cur);
            // bulk
            for y in (m + 1)..ycut {
                let mut cur = seed_term(m);
                for yy in [y + 1, y - 1] {
                    cur += get(&coeffs, m, yy, d - 1);
                    cur -= get(&coeffs, m, yy, d - 2);
                }
                cur += get(&coeffs, m + 1, y, d - 2);
                cur += get(&coeffs, m - 1, y, d);
                cur -= BigRational::from(BigInt::from(2)) * get(&coeffs, m - 1, y, d - 1);
                cur += get(&coeffs, m - 1, y, d - 2);
                coeffs[idx(m, y)].push(cur);
            }
        }
    }
    RatSeries::new(coeffs[idx(seed.m, seed.y)].clone())
}

/// Mean-size series specialized at p_w = r p over a prime field, generated
/// natively in the field. Rejects primes dividing the denominator of r.
pub fn mean_size_mod_series(
    seed: Seed,
    r: &WallRatio,
    order: usize,
    field: &PrimeField,
) -> Result<ModSeries> {
    let q = field.modulus();
    let rm = field
        .from_ratio(&r.0)
        .ok_or(Error::BadPrimeForRatio(q))?;
    let n = order;
    let mcut = width_cutoff(&seed, n);
    let ycut = height_cutoff(&seed, n);
    let idx = |m: usize, y: usize| -> usize { (m - 1) * ycut + y };
    let mut coeffs: Vec<Vec<u64>> = vec![Vec::with_capacity(n + 1); mcut * ycut];
    // boundary Taylor data reduced mod q, indexed [m][d]
    let mut boundary = vec![vec![0u64; n + 1]; mcut + 1];
    for m in 1..=mcut {
        for d in 0..=n {
            boundary[m][d] = field.from_bigint(&bulk_taylor(m, d));
        }
    }
    let get = |coeffs: &Vec<Vec<u64>>, boundary: &Vec<Vec<u64>>, m: usize, y: usize, d: i64| -> u64 {
        if m == 0 || m > mcut || d < 0 {
            return 0;
        }
        if y >= ycut {
            return boundary[m][d as usize];
        }
        coeffs[idx(m, y)][d as usize]
    };
    let r1 = field.add(rm, 1);
    for d in 0..=n as i64 {
        for m in 1..=mcut {
            let seed_term = |t: usize| if d == 0 { t as u64 % q } else { 0 };
            // on the wall
            let mut cur = seed_term(m);
            cur = field.add(cur, get(&coeffs, &boundary, m, m, d - 1));
            cur = field.add(cur, get(&coeffs, &boundary, m - 1, m - 1, d));
            cur = field.sub(cur, get(&coeffs, &boundary, m - 1, m - 1, d - 1));
            coeffs[idx(m, m - 1)].push(cur);
            // adjacent
            let mut cur = seed_term(m);
            cur = field.add(cur, get(&coeffs, &boundary, m, m + 1, d - 1));
            cur = field.sub(cur, field.mul(rm, get(&coeffs, &boundary, m, m + 1, d - 2)));
            cur = field.add(cur, field.mul(rm, get(&coeffs, &boundary, m, m - 1, d - 1)));
            cur = field.sub(cur, field.mul(rm, get(&coeffs, &boundary, m, m - 1, d - 2)));
            cur = field.add(cur, field.mul(rm, get(&coeffs, &boundary, m + 1, m, d - 2)));
            cur = field.add(cur, get(&coeffs, &boundary, m - 1, m, d));
            cur = field.sub(cur, field.mul(r1, get(&coeffs, &boundary, m - 1, m, d - 1)));
            cur = field.add(cur, field.mul(rm, get(&coeffs, &boundary, m - 1, m, d - 2)));
            coeffs[idx(m, m)].push(cur);
            // bulk
            for y in (m + 1)..ycut {
                let mut cur = seed_term(m);
                for yy in [y + 1, y - 1] {
                    cur = field.add(cur, get(&coeffs, &boundary, m, yy, d - 1));
                    cur = field.sub(cur, get(&coeffs, &boundary, m, yy, d - 2));
                }
                cur = field.add(cur, get(&coeffs, &boundary, m + 1, y, d - 2));
                cur = field.add(cur, get(&coeffs, &boundary, m - 1, y, d));
                let t = get(&coeffs, &boundary, m - 1, y, d - 1);
                cur = field.sub(cur, field.add(t, t));
                cur = field.add(cur, get(&coeffs, &boundary, m - 1, y, d - 2));
                coeffs[idx(m, y)].push(cur);
            }
        }
    }
    Ok(ModSeries::new(q, coeffs[idx(seed.m, seed.y)].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rint;

    /// The published expansion of S_{1,1}(p, p_w) through p^6.
    pub(crate) const S11_TABLE: [&[i64]; 7] = [
        &[1, 1],
        &[1, 2, 2],
        &[2, 2, 3, 5],
        &[4, 5, 3, 2, 14],
        &[8, 8, 11, 9, -14, 42],
        &[16, 19, 11, 16, 58, -108, 132],
        &[32, 30, 48, 26, -71, 387, -561, 429],
    ];

    #[test]
    fn matches_published_bivariate_table() {
        let s = mean_size_series(Seed::new(1, 1).unwrap(), 6);
        for (n, row) in S11_TABLE.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(s.coeff(n, k), BigInt::from(c), "(n, k) = ({n}, {k})");
            }
            // nothing beyond k = n + 1
            assert!(s.terms().all(|(nn, kk, _)| nn != n || kk <= n + 1));
        }
    }

    #[test]
    fn order_zero_is_one_plus_pw() {
        let s = mean_size_series(Seed::new(1, 1).unwrap(), 0);
        assert_eq!(s.coeff(0, 0), BigInt::one());
        assert_eq!(s.coeff(0, 1), BigInt::one());
    }

    #[test]
    fn specialized_r2_prefix() {
        let want: [i64; 14] = [
            1, 3, 6, 16, 30, 84, 130, 464, 380, 3048, -1666, 27232, -60116, 332216,
        ];
        let s = mean_size_rat_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(2, 1), 13);
        for (n, &c) in want.iter().enumerate() {
            assert_eq!(s.coeff(n), rint(c), "order {n}");
        }
        // and via substitution into the bivariate series
        let b = mean_size_series(Seed::new(1, 1).unwrap(), 13);
        assert_eq!(b.specialize(&WallRatio::from_i64(2, 1)), s);
    }

    #[test]
    fn specialized_r0_is_dry_geometric() {
        let s = mean_size_rat_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(0, 1), 10);
        assert_eq!(s.coeff(0), rint(1));
        for n in 1..=10 {
            assert_eq!(s.coeff(n), rint(1 << (n - 1)), "order {n}");
        }
    }

    #[test]
    fn specialized_r1_linear_coefficient() {
        let s = mean_size_rat_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(1, 1), 3);
        assert_eq!(s.coeff(1), rint(2));
    }

    #[test]
    fn mod_sweep_agrees_with_rational() {
        let field = PrimeField::new(101).unwrap();
        let seed = Seed::new(1, 1).unwrap();
        let m = mean_size_mod_series(seed, &WallRatio::from_i64(2, 1), 6, &field).unwrap();
        assert_eq!(m.coeffs(), &[1, 3, 6, 16, 30, 84, 130 % 101]);
        // rational r = 3/2 mod 7: coefficient of p is 1 + 3/2 = 5/2 = 6 (mod 7)
        let f7 = PrimeField::new(7).unwrap();
        let m = mean_size_mod_series(seed, &WallRatio::from_i64(3, 2), 1, &f7).unwrap();
        assert_eq!(m.coeff(1), 6);
        // denominator divisible by the prime is rejected
        let f3 = PrimeField::new(3).unwrap();
        assert!(mean_size_mod_series(seed, &WallRatio::from_i64(1, 3), 1, &f3).is_err());
    }

    #[test]
    fn wider_seed_against_rational_specialization() {
        let seed = Seed::new(2, 3).unwrap();
        let b = mean_size_series(seed, 8);
        let r = WallRatio::from_i64(3, 2);
        let direct = mean_size_rat_series(seed, &r, 8);
        assert_eq!(b.specialize(&r), direct);
    }
}
