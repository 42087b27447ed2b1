//! Prime-field arithmetic and dense linear algebra over Z/qZ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::arith::is_prime;
use crate::error::{Error, Result};

/// An odd prime field with q < 2^31 so products fit in u64/u128 comfortably.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q >= (1 << 31) || !is_prime(q) {
            return Err(Error::BadModulus(q));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.q != 0);
        self.pow(a, self.q - 2)
    }

    /// Residue of a big integer.
    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.q);
        let r = x.mod_floor(&m);
        r.to_u64().unwrap()
    }

    /// Residue of an exact rational; None when the denominator vanishes mod q.
    pub fn from_ratio(&self, x: &BigRational) -> Option<u64> {
        let d = self.from_bigint(x.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(x.numer()), self.inv(d)))
    }

    /// Signed lift to (-q/2, q/2].
    pub fn lift_signed(&self, a: u64) -> i64 {
        if a > self.q / 2 {
            a as i64 - self.q as i64
        } else {
            a as i64
        }
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ModMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        ModMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }
}

/// Reduced-echelon kernel basis of the matrix over the given prime field.
///
/// Each basis vector has a 1 in the free column it represents; the list is
/// empty iff the matrix has full column rank. Deterministic for fixed input.
pub fn nullspace_mod(matrix: &ModMatrix, field: &PrimeField) -> Vec<Vec<u64>> {
    let q = field.modulus();
    let mut m = matrix.clone();
    for x in &m.data {
        debug_assert!(*x < q);
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pr = 0usize;
    for c in 0..cols {
        // find pivot
        let mut sel = None;
        for r in pr..rows {
            if m.at(r, c) != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        if sel != pr {
            for j in 0..cols {
                let t = m.at(sel, j);
                m.set(sel, j, m.at(pr, j));
                m.set(pr, j, t);
            }
        }
        let inv = field.inv(m.at(pr, c));
        for j in c..cols {
            m.set(pr, j, field.mul(m.at(pr, j), inv));
        }
        for r in 0..rows {
            if r != pr {
                let f = m.at(r, c);
                if f != 0 {
                    for j in c..cols {
                        let v = field.sub(m.at(r, j), field.mul(f, m.at(pr, j)));
                        m.set(r, j, v);
                    }
                }
            }
        }
        pivot_col_of_row.push(c);
        pivot_row_of_col[c] = Some(pr);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_row_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = field.neg(m.at(row, free));
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn kernel_of_sum_constraint() {
        // [1, 1] mod 5 -> {(1, 4)} : x + y = 0 with free y... basis has v[free]=1
        let f = PrimeField::new(5).unwrap();
        let m = ModMatrix::from_rows(vec![vec![1, 1]]);
        let basis = nullspace_mod(&m, &f);
        assert_eq!(basis, vec![vec![4, 1]]);
    }

    #[test]
    fn full_rank_identity_has_empty_kernel() {
        let f = PrimeField::new(7).unwrap();
        let m = ModMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(nullspace_mod(&m, &f).is_empty());
    }

    #[test]
    fn hand_eliminated_two_by_three() {
        // [[1,0,1],[0,1,1]] mod 5 -> span{(4,4,1)}
        let f = PrimeField::new(5).unwrap();
        let m = ModMatrix::from_rows(vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let basis = nullspace_mod(&m, &f);
        assert_eq!(basis, vec![vec![4, 4, 1]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f = PrimeField::new(101).unwrap();
        let rows: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..7).map(|j| ((i * 31 + j * 17 + 5) % 101) as u64).collect())
            .collect();
        let m = ModMatrix::from_rows(rows.clone());
        for v in nullspace_mod(&m, &f) {
            for row in &rows {
                let s = row
                    .iter()
                    .zip(&v)
                    .fold(0u64, |acc, (a, b)| f.add(acc, f.mul(*a, *b)));
                assert_eq!(s, 0);
            }
        }
    }
}
