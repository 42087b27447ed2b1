//! Holonomic conversion between P-recurrences and differential operators.
//!
//! Shift j in the recurrence corresponds to multiplication by p^j; the index
//! factor n corresponds to theta = p d/dp. A recurrence of order s and
//! degree t in n therefore maps to an operator sum_j c_j(theta) p^j of
//! differential order t whose image of a solution series is a polynomial of
//! degree < s (the boundary residuals). Composing D^s on the left yields a
//! homogeneous annihilator of higher order; only annihilation is preserved,
//! not equality of solution spaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::series::RatSeries;

use super::{DiffOperator, PRecurrence};

/// The image of a recurrence under the holonomic correspondence.
#[derive(Clone, Debug)]
pub struct ThetaConversion {
    /// sum_j c_j(theta) p^j in standard form, unnormalised so that boundary
    /// residuals computed from the recurrence match its scale exactly.
    raw: DiffOperator,
    /// Bound on the degree of the leftover polynomial: the recurrence order.
    pub boundary_degree: usize,
}

impl ThetaConversion {
    /// The homogeneous operator in content-free normal form.
    pub fn operator(&self) -> DiffOperator {
        self.raw.normalize()
    }

    /// Attach the boundary residuals sum_j c_j(n) a_{n-j}, n < order, of the
    /// given solution series as a right-hand side; the result is normalised.
    pub fn with_rhs_from(&self, rec: &PRecurrence, series: &RatSeries) -> Result<DiffOperator> {
        let residuals: Vec<BigRational> = (0..self.boundary_degree)
            .map(|n| rec.residual_at(series.coeffs(), n))
            .collect();
        let mut den = BigInt::one();
        for r in &residuals {
            den = den.lcm(r.denom());
        }
        let rhs = IntPoly::new(
            residuals
                .iter()
                .map(|r| r.numer() * (&den / r.denom()))
                .collect(),
        );
        let coeffs = self
            .raw
            .coeffs()
            .iter()
            .map(|c| c * &den)
            .collect::<Vec<_>>();
        Ok(DiffOperator::new(coeffs, Some(rhs))?.normalize())
    }

    /// D^s composed with the theta form: a homogeneous operator annihilating
    /// every solution of the recurrence outright.
    pub fn annihilating_companion(&self) -> DiffOperator {
        crate::factory::compose(
            &DiffOperator::derivative_power(self.boundary_degree),
            &self.raw,
        )
        .normalize()
    }
}

/// Recurrence -> operator (theta form plus boundary bookkeeping).
pub fn rec_to_ode(rec: &PRecurrence) -> Result<ThetaConversion> {
    let t = rec.degree();
    let mut theta_coeffs = vec![IntPoly::zero(); t + 1];
    for (j, c) in rec.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // commute p^j to the left: c_j(theta) p^j = p^j c_j(theta + j)
        let shifted = c
            .to_rat()
            .taylor_shift(&BigRational::from(BigInt::from(j as i64)))
            .to_int()
            .expect("integer shift stays integral");
        for (e, ce) in shifted.coeffs().iter().enumerate() {
            if ce.is_zero() {
                continue;
            }
            theta_coeffs[e] = &theta_coeffs[e] + &IntPoly::monomial(ce.clone(), j);
        }
    }
    if theta_coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroPolynomial("recurrence collapses to zero"));
    }
    // standard-form coefficients, unnormalised
    let k = theta_coeffs.len() - 1;
    let s2 = super::stirling2_table(k);
    let mut coeffs = vec![IntPoly::zero(); k + 1];
    for (j, c) in theta_coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for l in 0..=j {
            if s2[j][l].is_zero() {
                continue;
            }
            let term = (c * &s2[j][l]).shift_up(l);
            coeffs[l] = &coeffs[l] + &term;
        }
    }
    Ok(ThetaConversion {
        raw: DiffOperator::new(coeffs, None)?,
        boundary_degree: rec.order(),
    })
}

/// Operator -> recurrence on the Taylor coefficients of its solutions:
/// valid from n = order (homogeneous operators only), with a_t = 0 for t < 0.
pub fn ode_to_rec(op: &DiffOperator) -> Result<PRecurrence> {
    if !op.is_homogeneous() {
        return Err(Error::Domain(
            "recurrence conversion expects a homogeneous operator".into(),
        ));
    }
    let k = op.order();
    let dmax = op.max_coeff_degree();
    let shifts = dmax + k;
    let mut coeffs = vec![IntPoly::zero(); shifts + 1];
    for nu in 0..=shifts {
        let mut c = IntPoly::zero();
        for (l, q) in op.coeffs().iter().enumerate() {
            let i = nu as i64 - k as i64 + l as i64;
            if i < 0 {
                continue;
            }
            let qi = q.coeff(i as usize);
            if qi.is_zero() {
                continue;
            }
            // falling factorial (n - nu)(n - nu - 1)...(n - nu - l + 1)
            let mut ff = IntPoly::one();
            for step in 0..l {
                let lin =
                    IntPoly::new(vec![BigInt::from(-(nu as i64) - step as i64), BigInt::one()]);
                ff = &ff * &lin;
            }
            c = &c + &(&ff * &qi);
        }
        coeffs[nu] = c;
    }
    let nu0 = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPolynomial("operator converts to zero recurrence"))?;
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    let shifted: Vec<IntPoly> = coeffs[nu0..]
        .iter()
        .map(|c| {
            c.to_rat()
                .taylor_shift(&BigRational::from(BigInt::from(nu0 as i64)))
                .to_int()
                .expect("integer shift")
        })
        .collect();
    let valid_from = k.saturating_sub(nu0);
    Ok(PRecurrence::new(shifted, valid_from)?.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rint;

    #[test]
    fn geometric_recurrence_to_ode() {
        // a_n - 2 a_{n-1} = 0: theta form is multiplication by (1 - 2p);
        // the companion is (1-2p) S' - 2 S = 0.
        let rec = PRecurrence::new(vec![IntPoly::one(), IntPoly::from_i64s(&[-2])], 1).unwrap();
        let conv = rec_to_ode(&rec).unwrap();
        assert_eq!(conv.operator().order(), 0);
        let companion = conv.annihilating_companion();
        assert_eq!(companion.order(), 1);
        assert_eq!(companion.coeff(1), &IntPoly::from_i64s(&[1, -2]));
        assert_eq!(companion.coeff(0), &IntPoly::from_i64s(&[-2]));
        let s = RatSeries::new((0..12).map(|n| rint(1 << n)).collect());
        assert!(companion.annihilates_rat(&s).is_some());
    }

    #[test]
    fn catalan_companion_annihilates() {
        // (n+1) a_n - (4n-2) a_{n-1} = 0
        let rec = PRecurrence::new(
            vec![IntPoly::from_i64s(&[1, 1]), IntPoly::from_i64s(&[2, -4])],
            1,
        )
        .unwrap();
        let conv = rec_to_ode(&rec).unwrap();
        let companion = conv.annihilating_companion();
        let mut c = vec![rint(1)];
        for n in 1..24usize {
            let prev = c[n - 1].clone();
            c.push(prev * rint(2 * (2 * n as i64 - 1)) / rint(n as i64 + 1));
        }
        assert!(companion.annihilates_rat(&RatSeries::new(c)).is_some());
    }

    #[test]
    fn dry_ode_to_recurrence_roundtrip() {
        let op = DiffOperator::from_i64_coeffs(&[&[-1], &[1, -3, 2]], None);
        let rec = ode_to_rec(&op).unwrap();
        let mut seq = vec![rint(1)];
        for n in 1..20 {
            seq.push(rint(1i64 << (n - 1)));
        }
        assert!(rec.annihilates_range(&seq, rec.valid_from(), 19));
        // n a_n - (3n-2) a_{n-1} + 2(n-2) a_{n-2} = 0
        assert_eq!(rec.coeffs()[0], IntPoly::from_i64s(&[0, 1]));
        assert_eq!(rec.coeffs()[1], IntPoly::from_i64s(&[2, -3]));
        assert_eq!(rec.coeffs()[2], IntPoly::from_i64s(&[-4, 2]));
        let comp = rec_to_ode(&rec).unwrap().annihilating_companion();
        assert!(comp.annihilates_rat(&RatSeries::new(seq)).is_some());
    }
}
