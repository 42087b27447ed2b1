//! Exact reconstruction of operators from their images modulo several
//! primes: per-coefficient CRT, rational reconstruction, joint denominator
//! clearing and content-free normalisation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{crt_combine, rational_reconstruct, IntPoly};
use crate::error::{Error, Result};

use super::ode::ModOde;
use super::recurrence::ModRec;
use super::{DiffOperator, PRecurrence};

/// CRT + rational reconstruction of a flat coefficient vector.
/// Ok(None) means more primes are needed.
fn reconstruct_vector(vectors: &[(&[u64], u64)]) -> Result<Option<Vec<BigRational>>> {
    let len = vectors[0].0.len();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let residues: Vec<(BigInt, BigInt)> = vectors
            .iter()
            .map(|(v, q)| (BigInt::from(v[i]), BigInt::from(*q)))
            .collect();
        let (value, modulus) = crt_combine(&residues)?;
        match rational_reconstruct(&value, &modulus) {
            Some(r) => out.push(r),
            None => {
                log::debug!(
                    "rational reconstruction failed at coordinate {i} with a {}-digit modulus",
                    modulus.to_string().len()
                );
                return Ok(None);
            }
        }
    }
    Ok(Some(out))
}

fn clear_joint(rats: &[BigRational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for r in rats {
        den = den.lcm(r.denom());
    }
    rats.iter()
        .map(|r| r.numer() * (&den / r.denom()))
        .collect()
}

/// Reconstruct the exact differential operator from per-prime results that
/// share (order, degree, support). Ok(None) requests more primes; the caller
/// is expected to verify the result by applying it to a fresh exact series.
pub fn reconstruct_ode(mods: &[ModOde]) -> Result<Option<DiffOperator>> {
    let first = &mods[0];
    if mods.iter().any(|m| {
        m.order != first.order
            || m.degree != first.degree
            || m.rhs.is_some() != first.rhs.is_some()
            || m.support() != first.support()
    }) {
        return Err(Error::SupportMismatch);
    }
    let flats: Vec<Vec<u64>> = mods.iter().map(|m| m.flat()).collect();
    let vectors: Vec<(&[u64], u64)> = flats
        .iter()
        .zip(mods)
        .map(|(f, m)| (f.as_slice(), m.prime))
        .collect();
    let Some(rats) = reconstruct_vector(&vectors)? else {
        return Ok(None);
    };
    let ints = clear_joint(&rats);
    let w = first.degree + 1;
    let theta: Vec<IntPoly> = (0..=first.order)
        .map(|j| IntPoly::new(ints[j * w..(j + 1) * w].to_vec()))
        .collect();
    let rhs = first.rhs.as_ref().map(|r| {
        let base = (first.order + 1) * w;
        IntPoly::new(ints[base..base + r.len()].to_vec())
    });
    Ok(Some(DiffOperator::from_theta(&theta, rhs)?))
}

/// Reconstruct the exact P-recurrence from per-prime results. The validity
/// index is the recurrence order (the guessing equations start there).
pub fn reconstruct_precurrence(mods: &[ModRec]) -> Result<Option<PRecurrence>> {
    let first = &mods[0];
    if mods.iter().any(|m| {
        m.order != first.order || m.degree != first.degree || m.support() != first.support()
    }) {
        return Err(Error::SupportMismatch);
    }
    let flats: Vec<Vec<u64>> = mods.iter().map(|m| m.flat()).collect();
    let vectors: Vec<(&[u64], u64)> = flats
        .iter()
        .zip(mods)
        .map(|(f, m)| (f.as_slice(), m.prime))
        .collect();
    let Some(rats) = reconstruct_vector(&vectors)? else {
        return Ok(None);
    };
    let ints = clear_joint(&rats);
    let w = first.degree + 1;
    let coeffs: Vec<IntPoly> = (0..=first.order)
        .map(|j| IntPoly::new(ints[j * w..(j + 1) * w].to_vec()))
        .collect();
    Ok(Some(
        PRecurrence::new(coeffs, first.order)?.normalize(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::guess::ode::{guess_ode_mod, GuessOutcome};
    use crate::series::{mean_size_mod_series, mean_size_rat_series, Seed, WallRatio};

    fn dry_mod(q: u64, n: usize) -> crate::series::ModSeries {
        let field = PrimeField::new(q).unwrap();
        mean_size_mod_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(0, 1), n, &field)
            .unwrap()
    }

    #[test]
    fn dry_ode_reconstructs_exactly() {
        let mods: Vec<ModOde> = [2147483647u64, 2147483629]
            .iter()
            .map(|&q| {
                match guess_ode_mod(&dry_mod(q, 40), 1, 2, None, 10).unwrap() {
                    GuessOutcome::Found(m) => m,
                    other => panic!("{other:?}"),
                }
            })
            .collect();
        let op = reconstruct_ode(&mods).unwrap().unwrap();
        assert_eq!(op.coeff(1), &IntPoly::from_i64s(&[1, -3, 2]));
        assert_eq!(op.coeff(0), &IntPoly::from_i64s(&[-1]));
        // identical when reconstructed from a single prime (small coefficients)
        let op1 = reconstruct_ode(&mods[..1]).unwrap().unwrap();
        assert_eq!(op, op1);
        // and it annihilates the exact series
        let exact =
            mean_size_rat_series(Seed::new(1, 1).unwrap(), &WallRatio::from_i64(0, 1), 30);
        assert!(op.annihilates_rat(&exact).is_some());
    }

    #[test]
    fn support_mismatch_detected() {
        let a = match guess_ode_mod(&dry_mod(2147483647, 40), 1, 2, None, 10).unwrap() {
            GuessOutcome::Found(m) => m,
            _ => unreachable!(),
        };
        let mut b = a.clone();
        b.prime = 2147483629;
        b.coeffs[0][1] = 0;
        assert!(matches!(
            reconstruct_ode(&[a, b]),
            Err(Error::SupportMismatch)
        ));
    }
}
