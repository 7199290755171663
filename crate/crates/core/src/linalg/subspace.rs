use num_traits::Zero;

use super::{rref, QMatrix, Rational};
use crate::error::{ensure_dim, Result};

/// A linear subspace of `Q^d`, held as the nonzero rows of a reduced
/// row-echelon matrix. Two subspaces are equal exactly when their canonical
/// bases are equal, so the derived `PartialEq` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let identity = QMatrix::identity(ambient_dim);
        Self { ambient_dim, basis: identity.row_vectors(), pivots: (0..ambient_dim).collect() }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        for v in vectors {
            ensure_dim(ambient_dim, v.len())?;
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let reduced = rref(&QMatrix::from_rows(ambient_dim, vectors));
        let basis = (0..reduced.rank).map(|i| reduced.matrix.row(i).to_vec()).collect();
        Ok(Self { ambient_dim, basis, pivots: reduced.pivots })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        ensure_dim(self.ambient_dim, v.len())?;
        // In RREF the coordinate on basis row i is read off at its pivot.
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= c * x;
                }
            }
        }
        Ok(residual.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        ensure_dim(other.ambient_dim, self.ambient_dim)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn combine(&self, coords: &[Rational]) -> Result<Vec<Rational>> {
        ensure_dim(self.dim(), coords.len())?;
        let mut out = vec![Rational::zero(); self.ambient_dim];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Sum of subspaces and whether it is direct, i.e. whether its
    /// dimension equals the sum of the parts' dimensions.
    pub fn sum(parts: &[Subspace]) -> Result<(Subspace, bool)> {
        let Some(first) = parts.first() else {
            return Ok((Subspace::zero(0), true));
        };
        let d = first.ambient_dim;
        let mut vectors = Vec::new();
        for p in parts {
            ensure_dim(d, p.ambient_dim)?;
            vectors.extend(p.basis.iter().cloned());
        }
        let total = Subspace::span(d, &vectors)?;
        let direct = total.dim() == parts.iter().map(Subspace::dim).sum::<usize>();
        Ok((total, direct))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn e(d: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![q(0); d];
        v[i] = q(1);
        v
    }

    // Column-stacked 2x2 coordinates: E11 -> 0, E21 -> 1, E12 -> 2, E22 -> 3.
    const E11: usize = 0;
    const E12: usize = 2;
    const E22: usize = 3;

    #[test]
    fn membership_and_coordinates() {
        let s = Subspace::span(4, &[e(4, E12), e(4, E22)]).unwrap();
        assert_eq!(s.coordinates(&e(4, E12)).unwrap(), Some(vec![q(1), q(0)]));
        assert_eq!(s.coordinates(&vec![q(0); 4]).unwrap(), Some(vec![q(0), q(0)]));
        assert_eq!(s.coordinates(&e(4, E11)).unwrap(), None);
        assert!(s.coordinates(&e(3, 0)).is_err());
    }

    #[test]
    fn sums() {
        let a = Subspace::span(4, &[e(4, E11)]).unwrap();
        let b = Subspace::span(4, &[e(4, E22)]).unwrap();
        let (s, direct) = Subspace::sum(&[a.clone(), b]).unwrap();
        assert_eq!((s.dim(), direct), (2, true));
        let (s, direct) = Subspace::sum(&[a.clone(), a.clone()]).unwrap();
        assert_eq!((s.dim(), direct), (1, false));
        assert!(Subspace::sum(&[a, Subspace::zero(3)]).is_err());
    }

    #[test]
    fn canonical_basis_makes_equality_syntactic() {
        let s = Subspace::span(3, &[vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]]).unwrap();
        let t = Subspace::span(3, &[vec![q(1), q(3), q(4)], vec![q(2), q(5), q(7)], vec![q(0), q(2), q(2)]])
            .unwrap();
        assert_eq!(s, t);
    }
}
