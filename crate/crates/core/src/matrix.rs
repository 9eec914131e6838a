//! Dense exact integer matrices.
//!
//! Entries are `i64`. Every operation that could leave the `i64` range either
//! proves it cannot (a magnitude bound checked up front) or computes in
//! `i128` and reports [`Error::Overflow`] instead of wrapping.

use std::fmt;
use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [i64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn neg(&self) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn max_abs(&self) -> u64 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| self.row(r).iter().enumerate().all(|(c, &x)| x == i64::from(r == c)))
    }

    /// Exact product. Rows are computed in parallel and zero entries of `self`
    /// are skipped, which matters for the sparse Coxeter matrices.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let bound = (self.max_abs() as u128)
            .checked_mul(other.max_abs() as u128)
            .and_then(|b| b.checked_mul(self.cols.max(1) as u128));
        let fits = matches!(bound, Some(b) if b <= i64::MAX as u128);
        let cols = other.cols;
        let rows: Vec<Result<Vec<i64>>> = (0..self.rows)
            .into_par_iter()
            .map(|r| {
                if fits {
                    let mut acc = vec![0i64; cols];
                    for (k, &a) in self.row(r).iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                            *s += a * b;
                        }
                    }
                    Ok(acc)
                } else {
                    let mut acc = vec![0i128; cols];
                    for (k, &a) in self.row(r).iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                            *s = s.checked_add(a as i128 * b as i128).ok_or(Error::Overflow)?;
                        }
                    }
                    acc.into_iter()
                        .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
                        .collect()
                }
            })
            .collect();
        let mut out = IntMatrix::zeros(self.rows, cols);
        for (r, row) in rows.into_iter().enumerate() {
            out.row_mut(r).copy_from_slice(&row?);
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{} columns, vector of {}",
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|r| {
                let mut acc: i128 = 0;
                for (&a, &b) in self.row(r).iter().zip(v) {
                    acc += a as i128 * b as i128;
                }
                i64::try_from(acc).map_err(|_| Error::Overflow)
            })
            .collect()
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result: Option<IntMatrix> = None;
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(result.unwrap_or_else(|| IntMatrix::identity(self.rows)))
    }

    /// True iff `self^k` is the identity.
    pub fn power_is_identity(&self, k: u32) -> Result<bool> {
        Ok(self.pow(k)?.is_identity())
    }

    /// True iff within every column all nonzero entries share a sign.
    pub fn column_signs_consistent(&self) -> bool {
        (0..self.cols).all(|c| {
            let col = self.column(c);
            !(col.iter().any(|&x| x > 0) && col.iter().any(|&x| x < 0))
        })
    }

    pub fn entries_within(&self, allowed: &[i64]) -> bool {
        self.data.iter().all(|x| allowed.contains(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn chain_coxeter_powers() {
        let c = m(&[&[0, -1], &[1, -1]]);
        assert_eq!(c.pow(2).unwrap(), m(&[&[-1, 1], &[-1, 0]]));
        assert!(c.power_is_identity(3).unwrap());
        assert!(!c.power_is_identity(2).unwrap());
        assert!(c.power_is_identity(6).unwrap());
        assert!(IntMatrix::identity(4).power_is_identity(1).unwrap());
    }

    #[test]
    fn non_square_power_rejected() {
        let err = IntMatrix::zeros(2, 3).power_is_identity(2).unwrap_err();
        assert_eq!(err, Error::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn column_signs() {
        assert!(m(&[&[0, -1], &[1, -1]]).column_signs_consistent());
        assert!(!m(&[&[1, 0], &[-1, 0]]).column_signs_consistent());
    }

    #[test]
    fn overflow_is_reported() {
        let big = m(&[&[i64::MAX / 2, i64::MAX / 2], &[0, 1]]);
        assert_eq!(big.mul(&m(&[&[2, 0], &[2, 0]])).unwrap_err(), Error::Overflow);
        // large but representable products still go through the i128 path
        let p = big.mul(&m(&[&[1, 0], &[1, 0]])).unwrap();
        assert_eq!(p[(0, 0)], (i64::MAX / 2) * 2);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
    }
}
