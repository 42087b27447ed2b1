//! Single-prime ODE guessing in the theta basis.

use crate::algebra::{nullspace_mod, ModMatrix, PrimeField};
use crate::error::{Error, Result};
use crate::series::ModSeries;

/// An ODE found modulo one prime, in theta-basis coefficients:
/// sum_{j,i} coeffs[j][i] p^i theta^j S = rhs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModOde {
    pub prime: u64,
    pub order: usize,
    pub degree: usize,
    /// coeffs[j][i]: coefficient of p^i theta^j, 0 <= j <= order, 0 <= i <= degree
    pub coeffs: Vec<Vec<u64>>,
    pub rhs: Option<Vec<u64>>,
}

impl ModOde {
    /// Nonzero support pattern, used to align operators across primes.
    pub fn support(&self) -> Vec<bool> {
        self.coeffs
            .iter()
            .flatten()
            .chain(self.rhs.iter().flatten())
            .map(|&c| c != 0)
            .collect()
    }

    pub fn flat(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .flatten()
            .chain(self.rhs.iter().flatten())
            .copied()
            .collect()
    }
}

/// Result of probing one (order, degree) grid point.
#[derive(Clone, Debug)]
pub enum GuessOutcome {
    Found(ModOde),
    /// Kernel empty: no operator at this grid point.
    NoSolution,
    /// Kernel dimension > 1 after over-determination (grid point not minimal).
    Ambiguous(usize),
    /// A 1-dimensional kernel that failed the holdout verification.
    HoldoutFailed,
}

impl GuessOutcome {
    pub fn kernel_nonempty(&self) -> bool {
        !matches!(self, GuessOutcome::NoSolution)
    }
}

/// Number of series terms required at a grid point, including the holdout.
pub fn terms_required(order: usize, degree: usize, rhs_degree: Option<usize>, holdout: usize) -> usize {
    (order + 1) * (degree + 1) + rhs_degree.map_or(0, |d| d + 1) + holdout
}

/// Look for an operator sum c_{ij} p^i theta^j (plus optional polynomial
/// right-hand side) annihilating the series modulo its prime.
///
/// All available equations except the final `holdout` are used to build the
/// linear system; an accepted guess must additionally annihilate the holdout
/// equations. The kernel vector is scaled so its first nonzero entry is 1,
/// which aligns operators across primes when supports agree.
pub fn guess_ode_mod(
    series: &ModSeries,
    order: usize,
    degree: usize,
    rhs_degree: Option<usize>,
    holdout: usize,
) -> Result<GuessOutcome> {
    let field = series.field();
    let n = series.order();
    let unknowns = (order + 1) * (degree + 1) + rhs_degree.map_or(0, |d| d + 1);
    let need = terms_required(order, degree, rhs_degree, holdout);
    if n + 1 < need {
        return Err(Error::InsufficientTerms {
            have: n + 1,
            need,
        });
    }
    let rows = n + 1 - holdout;
    let a = series.coeffs();
    let build_row = |eq: usize| -> Vec<u64> {
        let mut row = Vec::with_capacity(unknowns);
        for j in 0..=order {
            for i in 0..=degree {
                if i > eq {
                    row.push(0);
                    continue;
                }
                let t = eq - i;
                // coefficient of p^eq in p^i theta^j S = t^j a_t
                let tj = field.pow(t as u64 % field.modulus(), j as u64);
                row.push(field.mul(tj, a[t]));
            }
        }
        if let Some(rd) = rhs_degree {
            for i in 0..=rd {
                row.push(if eq == i { field.neg(1) } else { 0 });
            }
        }
        row
    };
    let matrix = ModMatrix::from_rows((0..rows).map(build_row).collect());
    let basis = nullspace_mod(&matrix, &field);
    match basis.len() {
        0 => Ok(GuessOutcome::NoSolution),
        1 => {
            let mut v = basis.into_iter().next().unwrap();
            // scale: first nonzero coordinate = 1
            let first = v.iter().position(|&x| x != 0).unwrap();
            let inv = field.inv(v[first]);
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            // holdout check on the withheld equations
            for eq in rows..=n {
                let row = build_row(eq);
                let mut acc = 0u64;
                for (x, y) in row.iter().zip(&v) {
                    acc = field.add(acc, field.mul(*x, *y));
                }
                if acc != 0 {
                    return Ok(GuessOutcome::HoldoutFailed);
                }
            }
            let mut coeffs = Vec::with_capacity(order + 1);
            for j in 0..=order {
                coeffs.push(v[j * (degree + 1)..(j + 1) * (degree + 1)].to_vec());
            }
            let rhs = rhs_degree.map(|rd| {
                let base = (order + 1) * (degree + 1);
                v[base..base + rd + 1].to_vec()
            });
            Ok(GuessOutcome::Found(ModOde {
                prime: series.prime(),
                order,
                degree,
                coeffs,
                rhs,
            }))
        }
        dim => Ok(GuessOutcome::Ambiguous(dim)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{IntPoly, PrimeField};
    use crate::guess::DiffOperator;
    use crate::series::{mean_size_mod_series, Seed, WallRatio};

    fn dry_series(n: usize, q: u64) -> ModSeries {
        let field = PrimeField::new(q).unwrap();
        mean_size_mod_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(0, 1), n, &field)
            .unwrap()
    }

    #[test]
    fn dry_wall_first_order_ode() {
        let s = dry_series(40, 2147483629);
        let out = guess_ode_mod(&s, 1, 2, None, 10).unwrap();
        let GuessOutcome::Found(ode) = out else {
            panic!("expected a first-order fit, got {out:?}");
        };
        // convert exactly (coefficients here are tiny integers mod q)
        let field = PrimeField::new(2147483629).unwrap();
        let theta: Vec<IntPoly> = ode
            .coeffs
            .iter()
            .map(|c| {
                IntPoly::new(
                    c.iter()
                        .map(|&x| num_bigint::BigInt::from(field.lift_signed(x)))
                        .collect(),
                )
            })
            .collect();
        let op = DiffOperator::from_theta(&theta, None).unwrap();
        // (1-p)(1-2p) S' - S = 0
        assert_eq!(op.coeff(1), &IntPoly::from_i64s(&[1, -3, 2]));
        assert_eq!(op.coeff(0), &IntPoly::from_i64s(&[-1]));
    }

    #[test]
    fn insufficient_terms_is_explicit() {
        let s = dry_series(20, 101);
        let err = guess_ode_mod(&s, 2, 6, None, 10).unwrap_err();
        match err {
            Error::InsufficientTerms { have, need } => {
                assert_eq!(have, 21);
                assert_eq!(need, 31);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn no_solution_at_too_small_grid() {
        // r = 2 series satisfies no first-order ODE of tiny degree
        let field = PrimeField::new(2147483629).unwrap();
        let s = mean_size_mod_series(
            Seed::new(1, 1).unwrap(),
            &WallRatio::from_i64(2, 1),
            40,
            &field,
        )
        .unwrap();
        let out = guess_ode_mod(&s, 1, 2, None, 10).unwrap();
        assert!(matches!(out, GuessOutcome::NoSolution));
    }
}
