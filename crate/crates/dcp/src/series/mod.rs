//! Exact truncated series for the mean cluster size near a damp wall:
//! the bivariate generator driven by the cluster recurrences, an independent
//! enumeration oracle, specialisations p_w = r p over Q and over prime
//! fields, and the bulk/wet/dry closed-form references.

pub mod closed;
pub mod enumerate;
pub mod generate;

pub use closed::{closed_form_series, closed_form_value, Wall};
pub use enumerate::{history_weight, mean_size_enum, Column, HistoryWeight};
pub use generate::{mean_size_mod_series, mean_size_rat_series, mean_size_series};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{IntPoly, PrimeField, RatPoly};
use crate::error::{Error, Result};

/// An initial seed: m contiguous sites whose midpoint sits y units above the
/// wall. y = m-1 touches the wall, y = m is adjacent to it, y > m is bulk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed {
    pub m: usize,
    pub y: usize,
}

impl Seed {
    pub fn new(m: usize, y: usize) -> Result<Self> {
        if m < 1 || y + 1 < m {
            return Err(Error::InvalidSeed { m, y });
        }
        Ok(Seed { m, y })
    }
}

/// The wall-to-bulk probability ratio r in the specialisation p_w = r p.
///
/// Physical runs have 0 <= r <= 2; values outside only draw a warning since
/// the series themselves remain well-defined formal objects.
#[derive(Clone, Debug, PartialEq)]
pub struct WallRatio(pub BigRational);

impl WallRatio {
    pub fn new(r: BigRational) -> Self {
        if r.is_negative() || r > BigRational::from(BigInt::from(2)) {
            log::warn!("r = {} lies outside the physical window [0, 2]", r);
        }
        WallRatio(r)
    }

    pub fn from_i64(n: i64, d: i64) -> Self {
        WallRatio::new(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

/// Truncated bivariate series in p and p_w with exact integer coefficients.
///
/// All coefficients of p^n for n <= order are exact; the p_w degree is never
/// truncated independently (it is bounded by n + m for the seeds used here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    order: usize,
    terms: BTreeMap<(usize, usize), BigInt>,
}

impl BivariateSeries {
    pub fn new(order: usize, terms: BTreeMap<(usize, usize), BigInt>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        BivariateSeries { order, terms }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of p^n p_w^k.
    pub fn coeff(&self, n: usize, k: usize) -> BigInt {
        self.terms.get(&(n, k)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterate stored (n, k, coefficient) terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.terms.iter().map(|(&(n, k), c)| (n, k, c))
    }

    /// Coefficient of p^n as a polynomial in p_w.
    pub fn pw_poly(&self, n: usize) -> IntPoly {
        let kmax = self
            .terms
            .range((n, 0)..(n + 1, 0))
            .map(|(&(_, k), _)| k)
            .max();
        match kmax {
            None => IntPoly::zero(),
            Some(kmax) => {
                let mut v = vec![BigInt::zero(); kmax + 1];
                for (&(_, k), c) in self.terms.range((n, 0)..(n + 1, 0)) {
                    v[k] = c.clone();
                }
                IntPoly::new(v)
            }
        }
    }

    /// Substitute p_w = r p, truncating at the bivariate order.
    pub fn specialize(&self, r: &WallRatio) -> RatSeries {
        let n = self.order;
        let mut out = vec![BigRational::zero(); n + 1];
        // r^k cache
        let mut powers = vec![BigRational::one()];
        for (&(pn, k), c) in &self.terms {
            let t = pn + k;
            if t > n {
                continue;
            }
            while powers.len() <= k {
                let last = powers.last().unwrap().clone();
                powers.push(last * &r.0);
            }
            out[t] += BigRational::from(c.clone()) * &powers[k];
        }
        RatSeries::new(out)
    }

    /// Substitute a constant value for p_w (e.g. 1 for a wet wall).
    pub fn eval_pw(&self, pw: &BigRational) -> RatSeries {
        let n = self.order;
        let mut out = vec![BigRational::zero(); n + 1];
        let mut powers = vec![BigRational::one()];
        for (&(pn, k), c) in &self.terms {
            while powers.len() <= k {
                let last = powers.last().unwrap().clone();
                powers.push(last * pw);
            }
            out[pn] += BigRational::from(c.clone()) * &powers[k];
        }
        RatSeries::new(out)
    }
}

/// Univariate truncated series with exact rational coefficients
/// (order = number of coefficients minus one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        RatSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        RatSeries::new(vec![BigRational::zero(); order + 1])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> RatSeries {
        RatSeries::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn derivative(&self) -> RatSeries {
        if self.coeffs.len() == 1 {
            return RatSeries::zero(0);
        }
        RatSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    /// Multiply by p^k, keeping the same truncation order.
    pub fn shift_up(&self, k: usize) -> RatSeries {
        let n = self.order();
        let mut v = vec![BigRational::zero(); n + 1];
        for i in k..=n {
            v[i] = self.coeffs[i - k].clone();
        }
        RatSeries::new(v)
    }

    pub fn add(&self, other: &RatSeries) -> RatSeries {
        let n = self.order().min(other.order());
        RatSeries::new((0..=n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RatSeries) -> RatSeries {
        let n = self.order().min(other.order());
        RatSeries::new((0..=n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> RatSeries {
        RatSeries::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul_poly(&self, p: &IntPoly) -> RatSeries {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() || i > n {
                continue;
            }
            let cr = BigRational::from(c.clone());
            for j in 0..=(n - i) {
                out[i + j] += &cr * &self.coeffs[j];
            }
        }
        RatSeries::new(out)
    }

    pub fn mul_series(&self, other: &RatSeries) -> RatSeries {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                out[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        RatSeries::new(out)
    }

    /// Divide by a polynomial with nonzero constant term.
    pub fn div_poly(&self, p: &RatPoly) -> RatSeries {
        assert!(!p.coeff(0).is_zero(), "division needs a unit constant term");
        let n = self.order();
        let inv = p.coeff(0).recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = self.coeff(i);
            for j in 1..=i.min(p.degree().unwrap_or(0)) {
                let t = p.coeff(j) * &out[i - j];
                acc -= t;
            }
            out.push(acc * &inv);
        }
        RatSeries::new(out)
    }

    pub fn div_series(&self, other: &RatSeries) -> RatSeries {
        assert!(!other.coeff(0).is_zero());
        let n = self.order().min(other.order());
        let inv = other.coeff(0).recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = self.coeff(i);
            for j in 1..=i {
                let t = other.coeff(j) * &out[i - j];
                acc -= t;
            }
            out.push(acc * &inv);
        }
        RatSeries::new(out)
    }

    /// Logarithmic derivative s'/s (constant term must be nonzero).
    pub fn dlog(&self) -> RatSeries {
        self.derivative().div_series(&self.truncate(self.order() - 1))
    }

    /// Square root of a series with constant term 1.
    pub fn sqrt_unit(&self) -> RatSeries {
        assert!(self.coeff(0).is_one(), "sqrt needs unit constant term");
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = BigRational::one();
        let two = BigRational::from(BigInt::from(2));
        for i in 1..=n {
            let mut acc = self.coeff(i);
            for j in 1..i {
                let t = &out[j] * &out[i - j];
                acc -= t;
            }
            out[i] = acc / &two;
        }
        RatSeries::new(out)
    }

    /// Reduce coefficients modulo a prime; None when a denominator vanishes.
    pub fn to_mod(&self, field: &PrimeField) -> Option<ModSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| field.from_ratio(c))
            .collect::<Option<Vec<_>>>()?;
        Some(ModSeries::new(field.modulus(), coeffs))
    }
}

/// Univariate truncated series over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSeries {
    prime: u64,
    coeffs: Vec<u64>,
}

impl ModSeries {
    pub fn new(prime: u64, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty());
        debug_assert!(coeffs.iter().all(|&c| c < prime));
        ModSeries { prime, coeffs }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime).expect("prime validated on construction")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> ModSeries {
        ModSeries::new(self.prime, self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn sub(&self, other: &ModSeries) -> ModSeries {
        assert_eq!(self.prime, other.prime);
        let f = self.field();
        let n = self.order().min(other.order());
        ModSeries::new(
            self.prime,
            (0..=n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn scale(&self, c: u64) -> ModSeries {
        let f = self.field();
        ModSeries::new(self.prime, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn shift_up(&self, k: usize) -> ModSeries {
        let n = self.order();
        let mut v = vec![0u64; n + 1];
        for i in k..=n {
            v[i] = self.coeffs[i - k];
        }
        ModSeries::new(self.prime, v)
    }

    pub fn derivative(&self) -> ModSeries {
        let f = self.field();
        if self.coeffs.len() == 1 {
            return ModSeries::new(self.prime, vec![0]);
        }
        ModSeries::new(
            self.prime,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, i as u64 % self.prime))
                .collect(),
        )
    }

    /// Divide by a polynomial whose constant term is a unit mod q.
    pub fn div_poly(&self, p: &IntPoly) -> Option<ModSeries> {
        let f = self.field();
        let p0 = f.from_bigint(&p.coeff(0));
        if p0 == 0 {
            return None;
        }
        let pm: Vec<u64> = p.coeffs().iter().map(|c| f.from_bigint(c)).collect();
        let inv = f.inv(p0);
        let n = self.order();
        let mut out: Vec<u64> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = self.coeff(i);
            for j in 1..=i.min(pm.len() - 1) {
                acc = f.sub(acc, f.mul(pm[j], out[i - j]));
            }
            out.push(f.mul(acc, inv));
        }
        Some(ModSeries::new(self.prime, out))
    }

    pub fn mul_poly(&self, p: &IntPoly) -> ModSeries {
        let f = self.field();
        let pm: Vec<u64> = p.coeffs().iter().map(|c| f.from_bigint(c)).collect();
        let n = self.order();
        let mut out = vec![0u64; n + 1];
        for (i, &c) in pm.iter().enumerate() {
            if c == 0 || i > n {
                continue;
            }
            for j in 0..=(n - i) {
                out[i + j] = f.add(out[i + j], f.mul(c, self.coeffs[j]));
            }
        }
        ModSeries::new(self.prime, out)
    }
}

#[cfg(test)]
mod type_tests {
    use super::*;
    use crate::algebra::{rat, rint};

    #[test]
    fn seed_validation() {
        assert!(Seed::new(1, 0).is_ok());
        assert!(Seed::new(2, 1).is_ok());
        assert!(Seed::new(2, 0).is_err());
        assert!(Seed::new(0, 3).is_err());
    }

    #[test]
    fn sqrt_unit_squares_back() {
        // W = 1 - 18p^2 + 36p^3 - 18p^4
        let w = RatSeries::new(vec![
            rint(1),
            rint(0),
            rint(-18),
            rint(36),
            rint(-18),
            rint(0),
            rint(0),
            rint(0),
        ]);
        let s = w.sqrt_unit();
        assert_eq!(s.mul_series(&s), w);
    }

    #[test]
    fn dlog_of_geometric() {
        // s = 1/(1-2p): s'/s = 2/(1-2p) = 2 + 4p + 8p^2 + ...
        let s = RatSeries::new((0..8).map(|n| rint(1 << n)).collect());
        let d = s.dlog();
        for i in 0..=6 {
            assert_eq!(d.coeff(i), rint(2 << i));
        }
        let _ = rat(1, 2);
    }
}
