//! Pade approximants of truncated series, computed by the extended
//! Euclidean algorithm on (p^(L+M+1), series).

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratpoly::RatPoly;
use crate::error::{Error, Result};
use crate::series::RatSeries;

/// A rational approximant P/Q with deg P <= L, deg Q <= M, Q(0) = 1, agreeing
/// with its source series through order L + M.
#[derive(Clone, Debug)]
pub struct PadeApprox {
    pub numerator: RatPoly,
    pub denominator: RatPoly,
    pub l: usize,
    pub m: usize,
}

impl PadeApprox {
    /// Exact value at a rational point; None on a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.denominator.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.numerator.eval(x) / d)
    }
}

/// Compute the [L/M] Pade approximant of `series`.
///
/// Degenerate tables are reported, never silently perturbed: if the
/// extended-Euclid walk lands on a denominator with Q(0) = 0, or the result
/// fails to match the series through order L + M, this is `DegeneratePade`.
pub fn pade(series: &RatSeries, l: usize, m: usize) -> Result<PadeApprox> {
    let n = l + m;
    if series.order() < n {
        return Err(Error::InsufficientTerms {
            have: series.order() + 1,
            need: n + 1,
        });
    }
    let s = RatPoly::new(series.coeffs()[..=n].to_vec());
    // r = u * p^(n+1) + v * s; iterate until deg r <= L keeping v.
    let mut r0 = RatPoly::monomial(BigRational::one(), n + 1);
    let mut r1 = s;
    let mut v0 = RatPoly::zero();
    let mut v1 = RatPoly::one();
    while r1.degree().map_or(false, |d| d > l) {
        let (q, r2) = r0.div_rem(&r1);
        let v2 = &v0 - &(&q * &v1);
        r0 = r1;
        r1 = r2;
        v0 = v1;
        v1 = v2;
    }
    let (num, den) = (r1, v1);
    if den.is_zero() || den.coeff(0).is_zero() || den.degree().map_or(false, |d| d > m) {
        return Err(Error::DegeneratePade { l, m });
    }
    let inv = den.coeff(0).recip();
    let num = num.scale(&inv);
    let den = den.scale(&inv);
    // agreement check through order L + M
    let approx_series = expand(&num, &den, n);
    for (i, c) in approx_series.iter().enumerate() {
        if *c != series.coeffs()[i] {
            return Err(Error::DegeneratePade { l, m });
        }
    }
    Ok(PadeApprox {
        numerator: num,
        denominator: den,
        l,
        m,
    })
}

/// Taylor coefficients of num/den through the given order (den(0) != 0).
pub fn expand(num: &RatPoly, den: &RatPoly, order: usize) -> Vec<BigRational> {
    let d0 = den.coeff(0).recip();
    let mut out = Vec::with_capacity(order + 1);
    for i in 0..=order {
        let mut acc = num.coeff(i);
        for j in 1..=i {
            let t = &den.coeff(j) * &out[i - j];
            acc -= t;
        }
        out.push(acc * &d0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rint};
    use crate::series::RatSeries;

    #[test]
    fn geometric_is_exact_zero_one() {
        // 1/(1-2p) to order 4, [0/1]
        let s = RatSeries::new((0..5).map(|n| rint(1 << n)).collect());
        let pa = pade(&s, 0, 1).unwrap();
        assert_eq!(pa.numerator, RatPoly::new(vec![rint(1)]));
        assert_eq!(pa.denominator, RatPoly::new(vec![rint(1), rint(-2)]));
    }

    #[test]
    fn dry_closed_form_one_one() {
        // (1-p)/(1-2p) = 1 + p + 2p^2 + 4p^3 + ...
        let mut c = vec![rint(1)];
        for n in 1..6 {
            c.push(rint(1 << (n - 1)));
        }
        let pa = pade(&RatSeries::new(c), 1, 1).unwrap();
        assert_eq!(pa.numerator, RatPoly::new(vec![rint(1), rint(-1)]));
        assert_eq!(pa.denominator, RatPoly::new(vec![rint(1), rint(-2)]));
    }

    #[test]
    fn agreement_invariant() {
        // arbitrary smooth series: exp-like with rational coefficients
        let mut c = vec![rint(1)];
        let mut fact = rint(1);
        for n in 1..=10 {
            fact = fact * rint(n);
            c.push(rint(1) / fact.clone());
        }
        let s = RatSeries::new(c.clone());
        let pa = pade(&s, 4, 4).unwrap();
        let exp = expand(&pa.numerator, &pa.denominator, 8);
        for i in 0..=8 {
            assert_eq!(exp[i], c[i], "mismatch at order {i}");
        }
    }

    #[test]
    fn pole_location_of_dry_series() {
        let mut c = vec![rint(1)];
        for n in 1..=20 {
            c.push(rint(1i64 << (n - 1)));
        }
        let pa = pade(&RatSeries::new(c), 10, 10).unwrap();
        // denominator should vanish at 1/2 exactly (the [1/1] block repeats)
        assert!(pa.denominator.eval(&rat(1, 2)).is_zero());
    }
}
