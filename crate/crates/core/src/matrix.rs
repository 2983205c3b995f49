//! Dense matrices over the rationals with exact arithmetic.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = ExactMatrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_integers(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        if values.len() != rows * cols {
            return input(format!("{} values for a {rows}x{cols} matrix", values.len()));
        }
        let entries = values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigRational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn scale(&self, factor: &BigRational) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * factor).collect() }
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return input("dimension mismatch in subtraction");
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn checked_mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return input(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank by fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            for k in 0..cols {
                m.swap(pivot * cols + k, rank * cols + k);
            }
            let inv = m[rank * cols + c].recip();
            for r in 0..rows {
                if r == rank || m[r * cols + c].is_zero() {
                    continue;
                }
                let factor = &m[r * cols + c] * &inv;
                for k in c..cols {
                    let delta = &factor * &m[rank * cols + k];
                    m[r * cols + k] -= delta;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn is_integer(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    /// Entries as `i64` rows, if every entry is an integer in range.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| {
                let e = self.get(r, c);
                if e.is_integer() { e.to_integer().to_i64() } else { None }
            }).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigRational {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn product_and_identity() {
        let a = ExactMatrix::from_integers(2, 3, &[1, 2, 3, 4, 5, 6]).unwrap();
        let b = ExactMatrix::from_integers(3, 2, &[1, 0, 0, 1, 1, 1]).unwrap();
        let ab = &a * &b;
        assert_eq!(ab, ExactMatrix::from_integers(2, 2, &[4, 5, 10, 11]).unwrap());
        assert_eq!(&ExactMatrix::identity(2) * &ab, ab);
        assert!(a.checked_mul(&a).is_err());
    }

    #[test]
    fn rank_cases() {
        assert_eq!(ExactMatrix::from_integers(2, 3, &[1, 2, 3, 2, 4, 6]).unwrap().rank(), 1);
        assert_eq!(ExactMatrix::identity(5).rank(), 5);
        assert_eq!(ExactMatrix::zeros(3, 4).rank(), 0);
        let mut m = ExactMatrix::zeros(2, 2);
        m.set(0, 0, q(1, 3));
        m.set(0, 1, q(2, 3));
        m.set(1, 0, q(1, 2));
        m.set(1, 1, q(1, 1));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn integrality() {
        let mut m = ExactMatrix::from_integers(1, 2, &[3, -4]).unwrap();
        assert!(m.is_integer());
        assert_eq!(m.to_i64_rows(), Some(vec![vec![3, -4]]));
        m.set(0, 0, q(1, 2));
        assert!(!m.is_integer());
        assert_eq!(m.to_i64_rows(), None);
        assert_eq!(m.max_abs(), q(4, 1));
    }
}
