//! Dense univariate polynomials with arbitrary-precision integer
//! coefficients, index = power of the variable.
//!
//! Invariants: trailing zeros are stripped on construction; the zero
//! polynomial has an empty coefficient vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::divisors;
use super::ratpoly::RatPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// c * p^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Order of vanishing at 0 (index of the first nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Multiply by p^k.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    /// Exact division by p^k; panics if the valuation is too small.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        assert!(self.valuation().unwrap() >= k, "shift_down below valuation");
        IntPoly::new(self.coeffs[k..].to_vec())
    }

    /// Coefficients reversed: p^deg * f(1/p).
    pub fn reverse(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Content: gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive lowest-order nonzero coefficient,
    /// together with the (signed) factor removed.
    pub fn primitive(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::one(), IntPoly::zero());
        }
        let mut c = self.content();
        let low = self.valuation().unwrap();
        if self.coeffs[low].is_negative() {
            c = -c;
        }
        let prim = IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect());
        (c, prim)
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
        )
    }

    /// Exact division; None when the divisor does not divide exactly over Q
    /// or the quotient is not integral.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.to_rat().div_rem(&d.to_rat());
        if !r.is_zero() {
            return None;
        }
        q.to_int()
    }

    /// Multiplicity of `f` as a factor, and the cofactor after removal.
    pub fn factor_multiplicity(&self, f: &IntPoly) -> (usize, IntPoly) {
        let mut m = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(f) {
            if f.degree() == Some(0) {
                break; // constants divide forever
            }
            m += 1;
            cur = q;
        }
        (m, cur)
    }

    /// Monic-normalised gcd over Q, returned as a primitive integer poly.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let g = RatPoly::gcd(&a.to_rat(), &b.to_rat());
        let (_, prim) = g.clear_denominators().1.primitive();
        prim
    }

    /// Squarefree decomposition (Yun): returns [(gi, i)] with product gi^i
    /// equal to the primitive part of self.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let (_, f) = self.primitive();
        if f.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = IntPoly::gcd(&f, &df);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = df.div_exact(&a).expect("gcd divides");
        let mut i = 1;
        loop {
            let d = &c - &b.derivative();
            if b.degree() == Some(0) {
                break;
            }
            a = IntPoly::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("divides");
            c = d.div_exact(&a).expect("divides");
            i += 1;
        }
        out
    }

    /// All rational roots with multiplicities, found exactly.
    pub fn rational_roots(&self) -> Result<Vec<(BigRational, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("rational_roots"));
        }
        let val = self.valuation().unwrap();
        let mut roots = Vec::new();
        if val > 0 {
            roots.push((BigRational::zero(), val));
        }
        let (_, f) = self.shift_down(val).primitive();
        if f.degree() == Some(0) {
            return Ok(roots);
        }
        let a0 = f.coeff(0).abs();
        let lead = f.leading().abs();
        let a0_u = a0.to_u64().ok_or_else(|| {
            Error::Domain("constant term too large for rational root search".into())
        })?;
        let lead_u = lead.to_u64().ok_or_else(|| {
            Error::Domain("leading term too large for rational root search".into())
        })?;
        let mut candidates = Vec::new();
        for n in divisors(a0_u) {
            for d in divisors(lead_u) {
                let c = BigRational::new(BigInt::from(n), BigInt::from(d));
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            if f.eval(&c).is_zero() {
                let mut mult = 0;
                let lin = IntPoly::new(vec![-c.numer().clone(), c.denom().clone()]);
                let mut cur = f.clone();
                while let Some(q) = cur.div_exact(&lin) {
                    mult += 1;
                    cur = q;
                }
                roots.push((c, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(roots)
    }

    /// Serialise as decimal strings, index = degree.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_decimal_strings(strs: &[String]) -> Result<IntPoly> {
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Domain(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{}", term(c, i, true))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", term(&-c, i, false))?;
            } else {
                write!(f, " + {}", term(c, i, false))?;
            }
        }
        Ok(())
    }
}

fn term(c: &BigInt, i: usize, lead: bool) -> String {
    let c = c.clone();
    match i {
        0 => format!("{}", c),
        _ if c.is_one() => format!("p{}", pow_str(i)),
        _ if (-&c).is_one() && lead => format!("-p{}", pow_str(i)),
        _ => format!("{}p{}", c, pow_str(i)),
    }
}

fn pow_str(i: usize) -> String {
    if i == 1 {
        String::new()
    } else {
        format!("^{}", i)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Mul<&BigInt> for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * rhs).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(v: &[i64]) -> IntPoly {
        IntPoly::from_i64s(v)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let f = p(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn gcd_of_shared_factor() {
        // gcd((1-2p)^2(1-p), (1-2p)(1+p)) = (1-2p)
        let a = &p(&[1, -2]).pow(2) * &p(&[1, -1]);
        let b = &p(&[1, -2]) * &p(&[1, 1]);
        assert_eq!(IntPoly::gcd(&a, &b), p(&[1, -2]));
    }

    #[test]
    fn rational_roots_simple() {
        let f = &p(&[1, -2]) * &p(&[1, -3]);
        let roots = f.rational_roots().unwrap();
        assert_eq!(roots, vec![(rat(1, 3), 1), (rat(1, 2), 1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity_and_zero() {
        let f = &p(&[0, 1]) * &p(&[1, -2]).pow(3);
        let roots = f.rational_roots().unwrap();
        assert_eq!(roots, vec![(rat(0, 1), 1), (rat(1, 2), 3)]);
    }

    #[test]
    fn squarefree_multiplies_back() {
        let f = &(&p(&[1, -2]).pow(2) * &p(&[1, -1])) * &p(&[1, 0, 7]).pow(3);
        let parts = f.squarefree_decomposition();
        let mut prod = IntPoly::one();
        for (g, m) in &parts {
            prod = &prod * &g.pow(*m as u32);
        }
        assert_eq!(prod, f.primitive().1);
    }

    #[test]
    fn primitive_sign_convention() {
        let f = p(&[0, -2, -4]);
        let (c, prim) = f.primitive();
        assert_eq!(c, BigInt::from(-2));
        assert_eq!(prim, p(&[0, 1, 2]));
    }
}
