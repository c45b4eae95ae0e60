use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Dense matrix with arbitrary-precision integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl TryFrom<MatrixRepr> for IntegerMatrix {
    type Error = AlgebraError;

    fn try_from(repr: MatrixRepr) -> Result<Self, Self::Error> {
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(AlgebraError::DimensionMismatch {
                context: format!(
                    "matrix declared {}x{} but entry rows do not match",
                    repr.rows, repr.cols
                ),
            });
        }
        IntegerMatrix::new(repr.rows, repr.cols, repr.entries.into_iter().flatten().collect())
    }
}

impl From<IntegerMatrix> for MatrixRepr {
    fn from(m: IntegerMatrix) -> Self {
        let entries = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        MatrixRepr { rows: m.rows, cols: m.cols, entries }
    }
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                context: format!(
                    "{} entries supplied for a {rows}x{cols} matrix",
                    entries.len()
                ),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().map(|&x| BigInt::from(x))).collect();
        Self { rows: rows.len(), cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                context: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank over the rationals, by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..cols {
                    a.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let p = a[rank * cols + col].clone();
            for r in rank + 1..rows {
                let f = a[r * cols + col].clone();
                for j in col..cols {
                    let v = (&p * &a[r * cols + j] - &f * &a[rank * cols + j]) / &prev;
                    a[r * cols + j] = v;
                }
            }
            prev = p;
            rank += 1;
        }
        rank
    }

    /// Smith invariants d_1 | d_2 | ... | d_r (all positive, r = rank).
    ///
    /// Pivots on an entry of minimal absolute value in the active block so
    /// that coefficients stay small.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut invariants = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = a.min_abs_position(t) else {
                break;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    a.add_row_multiple(i, t, &-q);
                    if !a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    a.add_col_multiple(j, t, &-q);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    // pivot row/column are clear; enforce divisibility on the rest
                    let pivot = a.get(t, t).clone();
                    let offender = (t + 1..rows)
                        .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                        .find(|&(i, j)| !a.get(i, j).is_multiple_of(&pivot));
                    match offender {
                        Some((i, _)) => a.add_row_multiple(t, i, &BigInt::one()),
                        None => break,
                    }
                }
                // move the smallest nonzero entry of row/col t into the pivot
                let best = (t..rows)
                    .map(|i| (i, t))
                    .chain((t..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| !a.get(i, j).is_zero())
                    .min_by(|&(i1, j1), &(i2, j2)| a.get(i1, j1).abs().cmp(&a.get(i2, j2).abs()));
                if let Some((i, j)) = best {
                    a.swap_rows(t, i);
                    a.swap_cols(t, j);
                }
            }
            invariants.push(a.get(t, t).abs());
            t += 1;
        }
        invariants
    }

    fn min_abs_position(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(source, j) * factor;
            self.entries[target * self.cols + j] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, source) * factor;
            self.entries[i * self.cols + target] += v;
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(m: &[&[i64]]) -> Vec<i64> {
        IntegerMatrix::from_rows(m)
            .smith_normal_form()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn smith_small_examples() {
        assert_eq!(inv(&[&[2]]), vec![2]);
        assert_eq!(inv(&[&[1, 0], &[0, 0]]), vec![1]);
        assert_eq!(inv(&[&[2, 4], &[6, 8]]), vec![2, 4]);
        assert_eq!(inv(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
        assert!(IntegerMatrix::zeros(0, 3).smith_normal_form().is_empty());
    }

    #[test]
    fn smith_needs_divisibility_fix() {
        // diag(2,3) has invariants 1, 6
        assert_eq!(inv(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(inv(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]), vec![2, 2, 60]);
    }

    #[test]
    fn rank_matches_bareiss() {
        let m = IntegerMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(IntegerMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn ragged_repr_rejected() {
        let err = serde_json::from_str::<IntegerMatrix>(r#"{"rows":2,"cols":2,"entries":[[1,2],[3]]}"#);
        assert!(err.is_err());
    }
}
