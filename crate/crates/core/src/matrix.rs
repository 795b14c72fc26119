//! Dense square matrices used for association and adjacency data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for accepting a matrix as symmetric before it is
/// symmetrized by averaging.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Row-major dense `n x n` matrix of reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Matrix with every off-diagonal entry equal to `value` and a zero diagonal.
    pub fn constant_hollow(n: usize, value: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.set(i, j, value);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    /// Builds a symmetric hollow matrix from its strict upper triangle,
    /// given in row-major order `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_upper_triangle(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Validation(format!(
                "upper triangle of a {n}x{n} matrix needs {} entries, got {}",
                n * n.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        let mut m = Self::zeros(n);
        for ((i, j), &v) in upper_pairs(n).zip(upper) {
            m.set(i, j, v);
            m.set(j, i, v);
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Strict upper triangle in row-major order.
    pub fn upper_triangle(&self) -> Vec<f64> {
        upper_pairs(self.n).map(|(i, j)| self.get(i, j)).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, j) in upper_pairs(self.n) {
            worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
        }
        worst
    }

    /// Checks symmetry within [`SYMMETRY_TOLERANCE`] and a zero diagonal,
    /// returning the matrix with each pair replaced by its average.
    pub fn validated_symmetric_hollow(&self) -> Result<Self> {
        let mut out = self.validated_symmetric()?;
        for i in 0..self.n {
            let d = out.get(i, i);
            if d.abs() > SYMMETRY_TOLERANCE {
                return Err(Error::Validation(format!(
                    "matrix is not hollow: diagonal entry {i} is {d}"
                )));
            }
            out.set(i, i, 0.0);
        }
        Ok(out)
    }

    /// Checks symmetry within [`SYMMETRY_TOLERANCE`] and symmetrizes by averaging.
    pub fn validated_symmetric(&self) -> Result<Self> {
        if let Some(v) = self.data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "matrix has non-finite entry {v}"
            )));
        }
        let asym = self.asymmetry();
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::Validation(format!(
                "matrix is not symmetric: max |a_ij - a_ji| = {asym:e}"
            )));
        }
        let mut out = self.clone();
        for (i, j) in upper_pairs(self.n) {
            let avg = 0.5 * (self.get(i, j) + self.get(j, i));
            out.set(i, j, avg);
            out.set(j, i, avg);
        }
        Ok(out)
    }

    /// Elementwise mean of equally sized matrices.
    pub fn mean_of<'a>(matrices: impl IntoIterator<Item = &'a SquareMatrix>) -> Result<Self> {
        let mut iter = matrices.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Domain("mean of zero matrices".into()))?;
        let mut acc = first.clone();
        let mut count = 1usize;
        for m in iter {
            if m.n != acc.n {
                return Err(Error::Validation("matrices differ in size".into()));
            }
            for (a, b) in acc.data.iter_mut().zip(&m.data) {
                *a += b;
            }
            count += 1;
        }
        let scale = 1.0 / count as f64;
        acc.data.iter_mut().for_each(|v| *v *= scale);
        Ok(acc)
    }
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Self {
        m.to_rows()
    }
}

/// Unordered node pairs `i < j` in row-major order.
pub fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Number of unordered node pairs on `n` nodes.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}
