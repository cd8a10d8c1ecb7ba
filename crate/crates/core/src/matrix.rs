//! Dense integer matrices with exact, overflow-checked arithmetic.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("rows have unequal lengths")]
    Ragged,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Ragged);
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn try_from_fn<E>(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<i64, E>,
    ) -> Result<Self, E> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(IntMatrix { rows, cols, data })
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Matrix with row `r` and column `c` deleted.
    pub fn minor(&self, r: usize, c: usize) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        IntMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        IntMatrix::try_from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc: i64 = 0;
            for t in 0..self.cols {
                let p = self[(i, t)].checked_mul(rhs[(t, j)]).ok_or(MatrixError::Overflow("product"))?;
                acc = acc.checked_add(p).ok_or(MatrixError::Overflow("product"))?;
            }
            Ok(acc)
        })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Fraction-free (Bareiss) determinant, exact.
    pub fn determinant(&self) -> Result<i64, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Dimension(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i][j].checked_mul(a[k][k]).ok_or(MatrixError::Overflow("determinant"))?;
                    let rhs = a[i][k].checked_mul(a[k][j]).ok_or(MatrixError::Overflow("determinant"))?;
                    let num = lhs.checked_sub(rhs).ok_or(MatrixError::Overflow("determinant"))?;
                    // exact by Sylvester's identity
                    a[i][j] = num / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| MatrixError::Overflow("determinant"))
    }

    /// Diagonal of the Smith normal form: `min(rows, cols)` non-negative entries
    /// `d_1 | d_2 | ...`, zeros last.
    pub fn smith_diagonal(&self) -> Result<Vec<i64>, MatrixError> {
        let mut a: Vec<Vec<i128>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let (r, c) = (self.rows, self.cols);
        let mut diag = Vec::with_capacity(r.min(c));
        for t in 0..r.min(c) {
            // pivot: smallest nonzero absolute value in the trailing block
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else {
                diag.extend(std::iter::repeat(0).take(r.min(c) - t));
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            loop {
                let mut dirty = false;
                for i in t + 1..r {
                    if a[i][t] != 0 {
                        let q = a[i][t].div_euclid(a[t][t]);
                        row_axpy(&mut a, i, t, -q)?;
                        if a[i][t] != 0 {
                            a.swap(t, i);
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..c {
                    if a[t][j] != 0 {
                        let q = a[t][j].div_euclid(a[t][t]);
                        col_axpy(&mut a, j, t, -q)?;
                        if a[t][j] != 0 {
                            for row in a.iter_mut() {
                                row.swap(t, j);
                            }
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // divisibility of the remaining block
                let offender = (t + 1..r)
                    .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match offender {
                    Some((i, _)) => row_axpy(&mut a, t, i, 1)?,
                    None => break,
                }
            }
            let d = i64::try_from(a[t][t].abs()).map_err(|_| MatrixError::Overflow("smith form"))?;
            diag.push(d);
        }
        Ok(diag)
    }
}

fn row_axpy(a: &mut [Vec<i128>], target: usize, source: usize, q: i128) -> Result<(), MatrixError> {
    for j in 0..a[target].len() {
        let p = a[source][j].checked_mul(q).ok_or(MatrixError::Overflow("smith form"))?;
        a[target][j] = a[target][j].checked_add(p).ok_or(MatrixError::Overflow("smith form"))?;
    }
    Ok(())
}

fn col_axpy(a: &mut [Vec<i128>], target: usize, source: usize, q: i128) -> Result<(), MatrixError> {
    for row in a.iter_mut() {
        let p = row[source].checked_mul(q).ok_or(MatrixError::Overflow("smith form"))?;
        row[target] = row[target].checked_add(p).ok_or(MatrixError::Overflow("smith form"))?;
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
