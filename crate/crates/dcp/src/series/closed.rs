//! Closed-form references for the mean cluster size: the bulk expression,
//! the wet-wall expression (seeds beginning on the wall, following the
//! one-unit wall shift of the wet-wall convention), and the dry-wall
//! expression with its (p/(1-p))^(y-m-1) correction factor.
//!
//! Only the low-density branch p < 1/2 is covered.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::RatSeries;
use crate::algebra::{rat, IntPoly, RatPoly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wall {
    Bulk,
    Wet,
    Dry,
}

fn check_low_density(p: &BigRational) -> Result<()> {
    if *p >= rat(1, 2) {
        return Err(Error::Domain(format!(
            "p = {} is not in the low-density region p < 1/2",
            p
        )));
    }
    Ok(())
}

/// Exact value of the chosen closed form at a rational p < 1/2.
/// y is only consulted for the dry wall.
pub fn closed_form_value(wall: Wall, m: usize, y: usize, p: &BigRational) -> Result<BigRational> {
    check_low_density(p)?;
    let one = BigRational::one();
    let mb = BigRational::from(BigInt::from(m));
    let u = &one - p - p; // 1 - 2p
    let q = &one - p; // 1 - p
    match wall {
        Wall::Bulk => {
            let half_m1 = BigRational::new(BigInt::from(m as i64 - 1), BigInt::from(2));
            Ok(&mb / &u * (&q * &q / &u + half_m1))
        }
        Wall::Wet => {
            // 2 S_m = [m - 2p(1-p)]/(1-2p)^2 + (2m^2 - m)/|1-2p|
            let a = (&mb - BigRational::from(BigInt::from(2)) * p * &q) / (&u * &u);
            let b = BigRational::from(BigInt::from(2 * m * m - m)) / &u;
            Ok((a + b) / BigRational::from(BigInt::from(2)))
        }
        Wall::Dry => {
            if y + 1 < m {
                return Err(Error::InvalidSeed { m, y });
            }
            let bulk = closed_form_value(Wall::Bulk, m, y, p)?;
            let e = y as i64 - m as i64 - 1;
            let ratio = p / &q;
            let corr = &mb * p * p / (&u * &u) * pow_i64(&ratio, e);
            Ok(bulk - corr)
        }
    }
}

fn pow_i64(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow::pow(x.clone(), e as usize)
    } else {
        num_traits::pow::pow(x.recip(), (-e) as usize)
    }
}

/// Taylor series of the chosen closed form through the given order.
pub fn closed_form_series(wall: Wall, m: usize, y: usize, order: usize) -> Result<RatSeries> {
    let one = RatSeries::new({
        let mut v = vec![BigRational::zero(); order + 1];
        v[0] = BigRational::one();
        v
    });
    let inv_u = one.div_poly(&RatPoly::new(vec![crate::algebra::rint(1), crate::algebra::rint(-2)]));
    let inv_u2 = inv_u.mul_series(&inv_u);
    let q2 = IntPoly::from_i64s(&[1, -2, 1]); // (1-p)^2
    match wall {
        Wall::Bulk => {
            let first = inv_u2.mul_poly(&q2).scale(&BigRational::from(BigInt::from(m)));
            let second = inv_u.scale(&BigRational::new(
                BigInt::from(m * (m - 1)),
                BigInt::from(2),
            ));
            Ok(first.add(&second))
        }
        Wall::Wet => {
            let num = IntPoly::from_i64s(&[m as i64, -2, 2]); // m - 2p + 2p^2
            let a = inv_u2.mul_poly(&num);
            let b = inv_u.scale(&BigRational::from(BigInt::from(2 * m * m - m)));
            Ok(a.add(&b).scale(&rat(1, 2)))
        }
        Wall::Dry => {
            if y + 1 < m {
                return Err(Error::InvalidSeed { m, y });
            }
            let bulk = closed_form_series(Wall::Bulk, m, y, order)?;
            let e = y as i64 - m as i64 - 1; // >= -2
            let mut corr = inv_u2;
            if e >= 0 {
                let qpow = RatPoly::new(vec![crate::algebra::rint(1), crate::algebra::rint(-1)]);
                for _ in 0..e {
                    corr = corr.div_poly(&qpow);
                }
            } else {
                let qpow = IntPoly::from_i64s(&[1, -1]).pow((-e) as u32);
                corr = corr.mul_poly(&qpow);
            }
            let corr = corr
                .shift_up((2 + e) as usize)
                .scale(&BigRational::from(BigInt::from(m)));
            Ok(bulk.sub(&corr))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rint;

    #[test]
    fn dry_seed_next_to_wall_is_geometric() {
        // (1-p)/(1-2p) = 1 + p + 2p^2 + 4p^3
        let s = closed_form_series(Wall::Dry, 1, 1, 3).unwrap();
        assert_eq!(
            s.coeffs(),
            &[rint(1), rint(1), rint(2), rint(4)]
        );
    }

    #[test]
    fn wet_single_site_taylor() {
        // (1-p)^2/(1-2p)^2 = 1 + 2p + 5p^2 + 12p^3 + 28p^4
        let s = closed_form_series(Wall::Wet, 1, 0, 4).unwrap();
        assert_eq!(
            s.coeffs(),
            &[rint(1), rint(2), rint(5), rint(12), rint(28)]
        );
    }

    #[test]
    fn bulk_at_zero_is_triangle_size() {
        assert_eq!(
            closed_form_value(Wall::Bulk, 1, 0, &rat(0, 1)).unwrap(),
            rint(1)
        );
        // a width-3 seed at p = 0 grows a triangle of 3 + 2 + 1 = 6 sites
        assert_eq!(
            closed_form_value(Wall::Bulk, 3, 9, &rat(0, 1)).unwrap(),
            rint(6)
        );
    }

    #[test]
    fn value_matches_series_evaluation() {
        let p = rat(1, 10);
        for (wall, m, y) in [(Wall::Bulk, 2, 7), (Wall::Wet, 3, 0), (Wall::Dry, 2, 4)] {
            let v = closed_form_value(wall, m, y, &p).unwrap();
            let s = closed_form_series(wall, m, y, 60).unwrap();
            // compare partial sum: geometric convergence at p = 1/10
            let mut acc = BigRational::zero();
            let mut pw = BigRational::one();
            for c in s.coeffs() {
                acc += c * &pw;
                pw *= &p;
            }
            let err = crate::algebra::arith::rat_to_f64(&(&v - &acc));
            assert!(err.abs() < 1e-12, "wall {wall:?}: err {err}");
        }
    }

    #[test]
    fn supercritical_rejected() {
        assert!(closed_form_value(Wall::Bulk, 1, 1, &rat(1, 2)).is_err());
        assert!(closed_form_value(Wall::Wet, 1, 1, &rat(3, 4)).is_err());
    }
}
