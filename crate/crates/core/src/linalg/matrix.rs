use std::fmt;

use num_traits::{One, Zero};

use super::{Rational, Subspace};
use crate::error::{ensure_dim, Error, Result};

/// Dense rectangular matrix over the rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row.iter().cloned());
        }
        Self { rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, column) in columns.iter().enumerate() {
            assert_eq!(column.len(), rows, "ragged column");
            for (i, x) in column.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        ensure_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        ensure_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        ensure_dim(self.rows, other.rows)?;
        ensure_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix> {
        ensure_dim(self.rows, other.rows)?;
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Ok(Self { rows: self.rows, cols, data })
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::Precondition(format!(
                "inverse of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let reduced = rref(&self.hstack(&QMatrix::identity(n))?);
        if reduced.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(Error::Singular("operand"));
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = reduced.matrix[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: QMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current row, so the output is deterministic; the
/// reduced form itself is unique for a given row space.
pub fn rref(m: &QMatrix) -> Rref {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r.cols {
        if row == r.rows {
            break;
        }
        let Some(p) = (row..r.rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..r.cols {
                r.data.swap(p * r.cols + j, row * r.cols + j);
            }
        }
        let inv = r[(row, col)].recip();
        for j in col..r.cols {
            let scaled = &r[(row, j)] * &inv;
            r[(row, j)] = scaled;
        }
        let pivot_row = r.row(row)[col..].to_vec();
        for i in 0..r.rows {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let factor = r[(i, col)].clone();
            for (offset, x) in pivot_row.iter().enumerate() {
                if !x.is_zero() {
                    let j = col + offset;
                    r[(i, j)] -= &factor * x;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: r, rank: pivots.len(), pivots }
}

/// Kernel `{v : Lv = 0}` of an `m x k` matrix, as a canonical subspace of `Q^k`.
pub fn null_space(l: &QMatrix) -> Subspace {
    let reduced = rref(l);
    let k = l.cols();
    let mut is_pivot = vec![false; k];
    for &p in &reduced.pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<Rational>> = (0..k)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![Rational::zero(); k];
            v[free] = Rational::one();
            for (i, &p) in reduced.pivots.iter().enumerate() {
                v[p] = -reduced.matrix[(i, free)].clone();
            }
            v
        })
        .collect();
    Subspace::span(k, &vectors).expect("kernel vectors have the right length")
}


/// One solution of `L x = rhs`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(l: &QMatrix, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
    ensure_dim(l.rows(), rhs.len())?;
    let augmented = l.hstack(&QMatrix::from_columns(l.rows(), &[rhs.to_vec()]))?;
    let reduced = rref(&augmented);
    if reduced.pivots.last() == Some(&l.cols()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); l.cols()];
    for (i, &p) in reduced.pivots.iter().enumerate() {
        x[p] = reduced.matrix[(i, l.cols())].clone();
    }
    Ok(Some(x))
}
