//! Single-prime guessing of P-recurrences (polynomial coefficients in n).

use crate::algebra::{nullspace_mod, ModMatrix, PrimeField};
use crate::error::{Error, Result};
use crate::series::ModSeries;

use super::ode::GuessOutcome;

/// A recurrence sum_j c_j(n) a_{n-j} = 0 found modulo one prime;
/// coeffs[j][e] is the coefficient of n^e in c_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModRec {
    pub prime: u64,
    pub order: usize,
    pub degree: usize,
    pub coeffs: Vec<Vec<u64>>,
}

impl ModRec {
    pub fn support(&self) -> Vec<bool> {
        self.coeffs.iter().flatten().map(|&c| c != 0).collect()
    }

    pub fn flat(&self) -> Vec<u64> {
        self.coeffs.iter().flatten().copied().collect()
    }
}

/// Outcome of a recurrence guess, mirroring the ODE side.
pub type RecOutcome = GenericOutcome;

#[derive(Clone, Debug)]
pub enum GenericOutcome {
    Found(ModRec),
    NoSolution,
    Ambiguous(usize),
    HoldoutFailed,
}

/// Scan (order, then degree) for the minimal P-recurrence annihilating the
/// sequence from n = order onwards, holding out the last `holdout` indices.
///
/// Returns the first grid point with a 1-dimensional kernel that passes the
/// holdout, or None when the grid is exhausted.
pub fn guess_precurrence(
    series: &ModSeries,
    max_order: usize,
    max_degree: usize,
    holdout: usize,
) -> Result<Option<ModRec>> {
    let n = series.order();
    let need = (max_order + 1) * (max_degree + 2) + holdout;
    if n + 1 < need {
        return Err(Error::InsufficientTerms {
            have: n + 1,
            need,
        });
    }
    for order in 1..=max_order {
        for degree in 0..=max_degree {
            match probe(series, order, degree, holdout)? {
                GenericOutcome::Found(rec) => return Ok(Some(rec)),
                _ => continue,
            }
        }
    }
    Ok(None)
}

/// Probe a single (order, degree) grid point.
pub fn probe(
    series: &ModSeries,
    order: usize,
    degree: usize,
    holdout: usize,
) -> Result<GenericOutcome> {
    let field = series.field();
    let n = series.order();
    let a = series.coeffs();
    let unknowns = (order + 1) * (degree + 1);
    // equations n = order .. N; the last `holdout` are withheld
    if n < order + unknowns + holdout {
        return Err(Error::InsufficientTerms {
            have: n + 1,
            need: order + unknowns + holdout + 1,
        });
    }
    let last_built = n - holdout;
    let build_row = |eq: usize| -> Vec<u64> {
        let mut row = Vec::with_capacity(unknowns);
        let em = eq as u64 % field.modulus();
        for j in 0..=order {
            let at = if j <= eq { a[eq - j] } else { 0 };
            let mut ne = 1u64;
            for _ in 0..=degree {
                row.push(field.mul(ne, at));
                ne = field.mul(ne, em);
            }
        }
        row
    };
    let matrix = ModMatrix::from_rows((order..=last_built).map(build_row).collect());
    let basis = nullspace_mod(&matrix, &field);
    match basis.len() {
        0 => Ok(GenericOutcome::NoSolution),
        1 => {
            let mut v = basis.into_iter().next().unwrap();
            let first = v.iter().position(|&x| x != 0).unwrap();
            let inv = field.inv(v[first]);
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            for eq in (last_built + 1)..=n {
                let row = build_row(eq);
                let mut acc = 0u64;
                for (x, y) in row.iter().zip(&v) {
                    acc = field.add(acc, field.mul(*x, *y));
                }
                if acc != 0 {
                    return Ok(GenericOutcome::HoldoutFailed);
                }
            }
            // reject degenerate identities such as c_0 = 0
            if v[..degree + 1].iter().all(|&x| x == 0) {
                return Ok(GenericOutcome::HoldoutFailed);
            }
            let coeffs = (0..=order)
                .map(|j| v[j * (degree + 1)..(j + 1) * (degree + 1)].to_vec())
                .collect();
            Ok(GenericOutcome::Found(ModRec {
                prime: series.prime(),
                order,
                degree,
                coeffs,
            }))
        }
        dim => Ok(GenericOutcome::Ambiguous(dim)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn mod_seq(vals: &[i64], q: u64) -> ModSeries {
        let f = PrimeField::new(q).unwrap();
        ModSeries::new(
            q,
            vals.iter()
                .map(|&v| f.from_bigint(&num_bigint::BigInt::from(v)))
                .collect(),
        )
    }

    #[test]
    fn geometric_first_order() {
        let vals: Vec<i64> = (0..40).map(|n| 1i64 << n.min(40)).collect();
        // use a large prime so powers of two stay distinct long enough
        let s = mod_seq(&vals, 2147483629);
        let rec = guess_precurrence(&s, 3, 3, 10).unwrap().unwrap();
        assert_eq!(rec.order, 1);
        assert_eq!(rec.degree, 0);
        // a_n - 2 a_{n-1}: normalised with leading entry 1
        assert_eq!(rec.coeffs[0], vec![1]);
        let f = PrimeField::new(2147483629).unwrap();
        assert_eq!(rec.coeffs[1], vec![f.neg(2)]);
    }

    #[test]
    fn catalan_ratio_identity() {
        // C_0.. computed exactly, reduced mod q
        let mut vals = vec![1i64];
        for n in 1..35usize {
            // C_n = C_{n-1} * 2(2n-1)/(n+1)
            let prev = vals[n - 1] as i128;
            let c = prev * 2 * (2 * n as i128 - 1) / (n as i128 + 1);
            vals.push(c as i64);
        }
        let s = mod_seq(&vals, 2147483629);
        let rec = guess_precurrence(&s, 2, 2, 8).unwrap().unwrap();
        // (n+1) a_n - (4n-2) a_{n-1} = 0
        assert_eq!(rec.order, 1);
        assert_eq!(rec.degree, 1);
        let f = PrimeField::new(2147483629).unwrap();
        // normalised so the first nonzero coordinate is 1: c_0 = (1 + n)
        assert_eq!(rec.coeffs[0], vec![1, 1]);
        assert_eq!(rec.coeffs[1], vec![f.neg(2), f.neg(4)]);
    }
}
