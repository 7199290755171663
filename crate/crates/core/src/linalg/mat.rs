use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{q, QMatrix, Rational};
use crate::error::{ensure_dim, Error, Result};

/// Square `n x n` rational matrix, stored column-major so that its
/// coordinate vector is the storage itself.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    entries: Vec<Rational>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrices are at least 1x1");
        Self { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Precondition("empty matrix".into()));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.into_iter().enumerate() {
            ensure_dim(n, row.len())?;
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Convenience constructor for integer matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("square integer matrix")
    }

    pub fn diag(values: &[i64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, q(v));
        }
        m
    }

    /// Inverse of [`Mat::to_vec`].
    pub fn from_vec(n: usize, coords: Vec<Rational>) -> Result<Self> {
        ensure_dim(n * n, coords.len())?;
        Ok(Self { n, entries: coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i + j * self.n]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i + j * self.n] = value;
    }

    /// Column-stacked coordinates in `Q^{n^2}`.
    pub fn to_vec(&self) -> Vec<Rational> {
        self.entries.clone()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn same_dim(&self, other: &Mat) -> Result<()> {
        ensure_dim(self.n, other.n)
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_rows(self.n, &self.rows())
    }

    pub fn inverse(&self) -> Option<Mat> {
        let inv = self.to_qmatrix().inverse().ok()?;
        Mat::from_rows(inv.row_vectors()).ok()
    }

    pub fn is_invertible(&self) -> bool {
        self.to_qmatrix().rank() == self.n
    }

    /// `self * other`, checking dimensions.
    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        self.same_dim(other)?;
        Ok(self * other)
    }

    /// `u c v - v c u`, the bilinear bracket twisted by `c`.
    pub fn twisted_commutator(u: &Mat, v: &Mat, c: &Mat) -> Mat {
        &(&(u * c) * v) - &(&(v * c) * u)
    }
}

/// The standard basis `E_{ij}` of `n x n` matrices in column-stacked order.
pub fn standard_basis(n: usize) -> Vec<Mat> {
    (0..n * n).map(|k| Mat::unit(n, k % n, k / n)).collect()
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn mul(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for j in 0..n {
            for k in 0..n {
                let b = rhs.get(k, j);
                if b.is_zero() {
                    continue;
                }
                for i in 0..n {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        out.entries[i + j * n] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn add(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix sum");
        Mat { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn sub(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix difference");
        Mat { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "({})", rows.join("; "))
    }
}
