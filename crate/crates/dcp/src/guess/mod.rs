//! Discovery of minimal P-recurrences and linear ODEs satisfied by a series,
//! working modulo primes, with exact reconstruction over the rationals.
//!
//! The linear systems are set up in the theta basis (theta = p d/dp), i.e.
//! operators sum_{i,j} c_{ij} p^i theta^j, which is the natural basis of the
//! modular method: one equation per series coefficient with no derivative
//! bookkeeping, and the (order, degree) grid counts (k+1)(d+1) unknowns.
//! Reconstructed operators are converted to the standard form
//! sum_j Q_j(p) d^j/dp^j and normalised content-free.

pub mod convert;
pub mod ode;
pub mod reconstruct;
pub mod recurrence;
pub mod search;

pub use convert::{ode_to_rec, rec_to_ode, ThetaConversion};
pub use ode::{guess_ode_mod, GuessOutcome, ModOde};
pub use reconstruct::{reconstruct_ode, reconstruct_precurrence};
pub use recurrence::{guess_precurrence, ModRec};
pub use search::{find_exact_ode, minimal_ode_search, GuessReport, SearchOptions, SearchSchedule};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{IntPoly, PrimeField};
use crate::error::{Error, Result};
use crate::series::{ModSeries, RatSeries};

/// A linear differential operator sum_j Q_j(p) d^j/dp^j with integer
/// polynomial coefficients and an optional polynomial right-hand side.
///
/// Invariants: the head coefficient Q_k is nonzero; normalised operators
/// share no integer content and no common power of p, and the lowest-degree
/// nonzero coefficient of the head polynomial is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    coeffs: Vec<IntPoly>,
    rhs: Option<IntPoly>,
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<IntPoly>, rhs: Option<IntPoly>) -> Result<Self> {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial("DiffOperator head"));
        }
        Ok(DiffOperator { coeffs, rhs })
    }

    pub fn from_i64_coeffs(coeffs: &[&[i64]], rhs: Option<&[i64]>) -> Self {
        DiffOperator::new(
            coeffs.iter().map(|c| IntPoly::from_i64s(c)).collect(),
            rhs.map(IntPoly::from_i64s),
        )
        .expect("nonzero head")
    }

    /// D^k as an operator.
    pub fn derivative_power(k: usize) -> Self {
        let mut coeffs = vec![IntPoly::zero(); k + 1];
        coeffs[k] = IntPoly::one();
        DiffOperator { coeffs, rhs: None }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &IntPoly {
        &self.coeffs[j]
    }

    pub fn head(&self) -> &IntPoly {
        self.coeffs.last().unwrap()
    }

    pub fn rhs(&self) -> Option<&IntPoly> {
        self.rhs.as_ref()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.as_ref().map_or(true, |r| r.is_zero())
    }

    /// Homogeneous part (right-hand side dropped).
    pub fn homogeneous_part(&self) -> DiffOperator {
        DiffOperator {
            coeffs: self.coeffs.clone(),
            rhs: None,
        }
    }

    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs
            .iter()
            .chain(self.rhs.iter())
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    /// Content-free normal form: no common integer factor, no common power
    /// of p, head's lowest nonzero coefficient positive.
    pub fn normalize(&self) -> DiffOperator {
        let mut content = BigInt::zero();
        let mut min_val = usize::MAX;
        for c in self.coeffs.iter().chain(self.rhs.iter()) {
            if c.is_zero() {
                continue;
            }
            content = content.gcd(&c.content());
            min_val = min_val.min(c.valuation().unwrap());
        }
        if content.is_zero() {
            return self.clone();
        }
        let head = self.head();
        if head.coeffs()[head.valuation().unwrap()] < BigInt::zero() {
            content = -content;
        }
        let norm = |c: &IntPoly| -> IntPoly {
            if c.is_zero() {
                return IntPoly::zero();
            }
            let shifted = c.shift_down(min_val);
            IntPoly::new(shifted.coeffs().iter().map(|x| x / &content).collect())
        };
        DiffOperator {
            coeffs: self.coeffs.iter().map(&norm).collect(),
            rhs: self.rhs.as_ref().map(|r| norm(r)),
        }
    }

    /// Build from theta-basis coefficients C_j(p) of sum_j C_j(p) theta^j,
    /// plus an optional right-hand side, and normalise.
    pub fn from_theta(theta_coeffs: &[IntPoly], rhs: Option<IntPoly>) -> Result<Self> {
        let k = theta_coeffs.len().saturating_sub(1);
        let s2 = stirling2_table(k);
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
        Ok(DiffOperator::new(coeffs, rhs)?.normalize())
    }

    /// Apply to an exact series: residual sum_j Q_j s^(j) - rhs, truncated to
    /// the verified order series_order - order - max_coeff_degree.
    /// Returns (residual, verified_order).
    pub fn apply_rat(&self, s: &RatSeries) -> (RatSeries, usize) {
        let k = self.order();
        let n = s.order();
        assert!(n >= k, "series shorter than operator order");
        let computable = n - k;
        let mut acc = RatSeries::zero(computable);
        let mut deriv = s.clone();
        for (j, q) in self.coeffs.iter().enumerate() {
            if j > 0 {
                deriv = deriv.derivative();
            }
            if q.is_zero() {
                continue;
            }
            acc = acc.add(&deriv.truncate(computable).mul_poly(q));
        }
        if let Some(r) = &self.rhs {
            let rs = RatSeries::new(
                (0..=computable)
                    .map(|i| BigRational::from(r.coeff(i)))
                    .collect(),
            );
            acc = acc.sub(&rs);
        }
        let verified = computable.saturating_sub(self.max_coeff_degree());
        (acc.truncate(verified), verified)
    }

    /// Verified annihilation order, or None if the residual is nonzero.
    pub fn annihilates_rat(&self, s: &RatSeries) -> Option<usize> {
        let (res, verified) = self.apply_rat(s);
        res.is_zero().then_some(verified)
    }

    /// Apply over a prime field; same truncation convention as `apply_rat`.
    pub fn apply_mod(&self, s: &ModSeries) -> (ModSeries, usize) {
        let field = s.field();
        let k = self.order();
        let n = s.order();
        assert!(n >= k);
        let computable = n - k;
        let mut acc = ModSeries::new(s.prime(), vec![0; computable + 1]);
        let mut deriv = s.clone();
        for (j, q) in self.coeffs.iter().enumerate() {
            if j > 0 {
                deriv = deriv.derivative();
            }
            if q.is_zero() {
                continue;
            }
            let term = deriv.truncate(computable).mul_poly(q);
            acc = ModSeries::new(
                s.prime(),
                (0..=computable)
                    .map(|i| field.add(acc.coeff(i), term.coeff(i)))
                    .collect(),
            );
        }
        if let Some(r) = &self.rhs {
            let rs = ModSeries::new(
                s.prime(),
                (0..=computable)
                    .map(|i| field.from_bigint(&r.coeff(i)))
                    .collect(),
            );
            acc = acc.sub(&rs);
        }
        let verified = computable.saturating_sub(self.max_coeff_degree());
        (acc.truncate(verified), verified)
    }

    /// Right-composition with multiplication by p^e (e may be negative):
    /// the result, applied to the series of p^e u, matches p^(order - e)
    /// times self applied to u; annihilation properties are preserved.
    pub fn conjugate_by_power(&self, e: i64) -> DiffOperator {
        let k = self.order();
        let mut coeffs = vec![IntPoly::zero(); k + 1];
        for l in 0..=k {
            for j in l..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let c = binom_big(j, l) * falling_big(e, j - l);
                if c.is_zero() {
                    continue;
                }
                let term = (&self.coeffs[j] * &c).shift_up(k - (j - l));
                coeffs[l] = &coeffs[l] + &term;
            }
        }
        let rhs = self.rhs.as_ref().map(|r| {
            let a = k as i64 - e;
            assert!(a >= 0, "rhs conjugation needs order >= e");
            r.shift_up(a as usize)
        });
        DiffOperator::new(coeffs, rhs)
            .expect("head survives conjugation")
            .normalize()
    }
}

fn binom_big(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

fn falling_big(e: i64, j: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..j as i64 {
        c *= BigInt::from(e - i);
    }
    c
}

/// theta^j = sum_l S(j, l) p^l D^l: Stirling numbers of the second kind.
pub(crate) fn stirling2_table(k: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); k + 1]; k + 1];
    s[0][0] = BigInt::one();
    for n in 1..=k {
        for l in 1..=n {
            let t = &s[n - 1][l] * BigInt::from(l) + &s[n - 1][l - 1];
            s[n][l] = t;
        }
    }
    s
}

/// A linear recurrence sum_{j=0}^{s} c_j(n) a_{n-j} = 0 with integer
/// polynomial coefficients in n, valid for n >= valid_from (with the
/// convention a_t = 0 for t < 0).
///
/// Invariants: content-free, leading polynomial c_0 nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRecurrence {
    coeffs: Vec<IntPoly>,
    valid_from: usize,
}

impl PRecurrence {
    pub fn new(coeffs: Vec<IntPoly>, valid_from: usize) -> Result<Self> {
        if coeffs.first().map_or(true, |c| c.is_zero()) {
            return Err(Error::ZeroPolynomial("PRecurrence leading coefficient"));
        }
        Ok(PRecurrence { coeffs, valid_from })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Maximum degree in n over the coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    /// Content-free with the top coefficient of c_0 positive.
    pub fn normalize(&self) -> PRecurrence {
        let mut content = BigInt::zero();
        for c in &self.coeffs {
            content = content.gcd(&c.content());
        }
        if content.is_zero() {
            return self.clone();
        }
        if self.coeffs[0].leading() < BigInt::zero() {
            content = -content;
        }
        PRecurrence {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| IntPoly::new(c.coeffs().iter().map(|x| x / &content).collect()))
                .collect(),
            valid_from: self.valid_from,
        }
    }

    /// Residual sum_j c_j(n) a_{n-j} at one index (a_t = 0 for t < 0).
    pub fn residual_at(&self, seq: &[BigRational], n: usize) -> BigRational {
        let mut acc = BigRational::zero();
        let nb = BigRational::from(BigInt::from(n));
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > n || n - j >= seq.len() {
                continue;
            }
            acc += c.eval(&nb) * &seq[n - j];
        }
        acc
    }

    /// True when the recurrence annihilates seq for all n in [from, to].
    pub fn annihilates_range(&self, seq: &[BigRational], from: usize, to: usize) -> bool {
        (from..=to).all(|n| self.residual_at(seq, n).is_zero())
    }

    /// Residual over a prime field.
    pub fn residual_at_mod(&self, seq: &[u64], n: usize, field: &PrimeField) -> u64 {
        let mut acc = 0u64;
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > n || n - j >= seq.len() {
                continue;
            }
            let mut cv = 0u64;
            let nm = (n as u64) % field.modulus();
            for coef in c.coeffs().iter().rev() {
                cv = field.add(field.mul(cv, nm), field.from_bigint(coef));
            }
            acc = field.add(acc, field.mul(cv, seq[n - j]));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rint;

    #[test]
    fn theta_conversion_geometric() {
        // p * ((1-2p) D - 2) in theta form: C_1 = 1-2p, C_0 = -2p.
        // After normalisation the common p is stripped.
        let op = DiffOperator::from_theta(
            &[IntPoly::from_i64s(&[0, -2]), IntPoly::from_i64s(&[1, -2])],
            None,
        )
        .unwrap();
        assert_eq!(op.order(), 1);
        assert_eq!(op.coeff(1), &IntPoly::from_i64s(&[1, -2]));
        assert_eq!(op.coeff(0), &IntPoly::from_i64s(&[-2]));
    }

    #[test]
    fn apply_annihilates_geometric() {
        let op = DiffOperator::from_i64_coeffs(&[&[-2], &[1, -2]], None);
        let s = RatSeries::new((0..12).map(|n| rint(1 << n)).collect());
        assert!(op.annihilates_rat(&s).is_some());
        let bad = RatSeries::new((0..12).map(|n| rint(n + 1)).collect());
        assert!(op.annihilates_rat(&bad).is_none());
    }

    #[test]
    fn normalization_strips_common_monomial() {
        let op = DiffOperator::new(
            vec![IntPoly::from_i64s(&[0, -6]), IntPoly::from_i64s(&[0, 0, -3])],
            None,
        )
        .unwrap()
        .normalize();
        assert_eq!(op.coeff(1), &IntPoly::from_i64s(&[0, 1]));
        assert_eq!(op.coeff(0), &IntPoly::from_i64s(&[2]));
    }

    #[test]
    fn conjugation_by_powers_of_p() {
        // D(p^2 u) = 2p u + p^2 u': normalised to p u' + 2 u
        let d = DiffOperator::derivative_power(1);
        let c = d.conjugate_by_power(2);
        assert_eq!(c.coeff(1), &IntPoly::from_i64s(&[0, 1]));
        assert_eq!(c.coeff(0), &IntPoly::from_i64s(&[2]));
        // D(p^{-2} u) = -2 p^{-3} u + p^{-2} u': p u' - 2 u
        let c = d.conjugate_by_power(-2);
        assert_eq!(c.coeff(1), &IntPoly::from_i64s(&[0, 1]));
        assert_eq!(c.coeff(0), &IntPoly::from_i64s(&[-2]));
    }

    #[test]
    fn conjugation_preserves_annihilation() {
        // (1-2p)D - 2 annihilates 1/(1-2p); conjugate by p^{-2} must
        // annihilate p^2/(1-2p).
        let op = DiffOperator::from_i64_coeffs(&[&[-2], &[1, -2]], None);
        let conj = op.conjugate_by_power(-2);
        let mut coeffs = vec![rint(0), rint(0)];
        coeffs.extend((0..10).map(|n| rint(1 << n)));
        let shifted = RatSeries::new(coeffs);
        assert!(conj.annihilates_rat(&shifted).is_some());
    }

    #[test]
    fn recurrence_residual() {
        let rec =
            PRecurrence::new(vec![IntPoly::one(), IntPoly::from_i64s(&[-2])], 1).unwrap();
        let seq: Vec<_> = (0..10).map(|n| rint(1 << n)).collect();
        assert!(rec.annihilates_range(&seq, 1, 9));
        assert!(!rec.residual_at(&seq, 0).is_zero());
    }
}
