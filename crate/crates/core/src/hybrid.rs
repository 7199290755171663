//! Lie hybrids: a vector space with two compatible Lie brackets `[.,.]'` and
//! `[.,.]''` that in addition satisfy
//!
//! ```text
//! [[X,Z]',Y]'' + [[X,Y]',Z]'' + [[Z,Y]',X]'' = [[X,Z]'',Y]' + [[X,Y]'',Z]' + [[Z,Y]'',X]'
//! ```
//!
//! Hybrids are stored as structure constants over a fixed basis, so every
//! check here is a finite computation on basis triples.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isotopic::{annihilator, basis_matrices, MatrixPair};
use crate::linalg::{null_space, operator_matrix, qf, solve, Mat, QMatrix, Rational, Subspace};
use crate::report::CheckReport;
use crate::rng::SplitMix64;

/// `c[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<Rational>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        Self { dim, data: vec![Rational::zero(); dim * dim * dim] }
    }

    /// Builds the table from a function giving `[e_i, e_j]` in coordinates.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Result<Vec<Rational>>) -> Result<Self> {
        let mut c = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j)?;
                for (k, x) in v.into_iter().enumerate() {
                    c.data[(i * dim + j) * dim + k] = x;
                }
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `lambda * self + mu * other`.
    pub fn combine(&self, lambda: &Rational, other: &Self, mu: &Rational) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| lambda * a + mu * b).collect();
        Self { dim: self.dim, data }
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let d = self.dim;
        let mut out = vec![Rational::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::from_integer(1.into());
        v
    }

    pub fn check_antisymmetry(&self, name: &str) -> CheckReport {
        let mut r = CheckReport::new(format!("{name} antisymmetry"));
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    let ok = *self.get(i, j, k) == -self.get(j, i, k);
                    r.record(ok, || format!("c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]"));
                }
            }
        }
        r
    }

    /// Jacobi identity on all basis triples `i < j < k`, which suffices for
    /// an antisymmetric bracket.
    pub fn check_jacobi(&self, name: &str) -> CheckReport {
        let mut r = CheckReport::new(format!("{name} Jacobi"));
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let s1 = self.bracket(&self.bracket(&x, &y), &z);
                    let s2 = self.bracket(&self.bracket(&y, &z), &x);
                    let s3 = self.bracket(&self.bracket(&z, &x), &y);
                    let ok = s1.iter().zip(&s2).zip(&s3).all(|((a, b), c)| (a + b + c).is_zero());
                    r.record(ok, || format!("Jacobi fails on basis triple ({i},{j},{k})"));
                }
            }
        }
        r
    }
}

/// A basis of matrices together with the two bracket tables. The basis may
/// be empty (the zero hybrid).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieHybrid {
    pub n: usize,
    pub basis: Vec<Mat>,
    pub c_prime: StructureConstants,
    pub c_double_prime: StructureConstants,
}

impl LieHybrid {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Builds the structure constants of the two brackets on the span of
    /// `basis`; fails if a bracket leaves the span.
    pub fn on_basis(
        n: usize,
        basis: Vec<Mat>,
        bracket_prime: impl Fn(&Mat, &Mat) -> Mat,
        bracket_double_prime: impl Fn(&Mat, &Mat) -> Mat,
    ) -> Result<Self> {
        let coords = BasisCoordinates::new(n, &basis)?;
        let table = |br: &dyn Fn(&Mat, &Mat) -> Mat| {
            StructureConstants::from_fn(basis.len(), |i, j| {
                let v = br(&basis[i], &basis[j]);
                coords.of(&v).ok_or_else(|| {
                    Error::PropertyViolation(format!(
                        "bracket of basis elements {i},{j} leaves the span: {v:?}"
                    ))
                })
            })
        };
        let c_prime = table(&bracket_prime)?;
        let c_double_prime = table(&bracket_double_prime)?;
        Ok(Self { n, basis, c_prime, c_double_prime })
    }

    /// The hybrid with the two brackets exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            n: self.n,
            basis: self.basis.clone(),
            c_prime: self.c_double_prime.clone(),
            c_double_prime: self.c_prime.clone(),
        }
    }
}

/// Coordinates relative to an arbitrary linearly independent list of matrices.
struct BasisCoordinates {
    span: Subspace,
    // Inverse of the matrix whose columns are the canonical coordinates of the basis.
    to_basis: QMatrix,
}

impl BasisCoordinates {
    fn new(n: usize, basis: &[Mat]) -> Result<Self> {
        let vectors: Vec<_> = basis.iter().map(Mat::to_vec).collect();
        let span = Subspace::span(n * n, &vectors)?;
        if span.dim() != basis.len() {
            return Err(Error::Precondition("basis matrices are linearly dependent".into()));
        }
        let columns: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|v| span.coordinates(v).map(|c| c.expect("in own span")))
            .collect::<Result<_>>()?;
        let to_basis = if basis.is_empty() {
            QMatrix::zeros(0, 0)
        } else {
            QMatrix::from_columns(basis.len(), &columns).inverse()?
        };
        Ok(Self { span, to_basis })
    }

    fn of(&self, m: &Mat) -> Option<Vec<Rational>> {
        let canonical = self.span.coordinates(m.as_slice()).ok()??;
        if canonical.is_empty() {
            return Some(canonical);
        }
        self.to_basis.mul_vec(&canonical).ok()
    }
}

/// The hybrid on the annihilator of `(A, B)` with `[X,Y]' = [X,Y]_A` and
/// `[X,Y]'' = [X,Y]_B`. Swapping `A` and `B` swaps the two brackets.
pub fn hybrid_from_pair(p: &MatrixPair) -> Result<LieHybrid> {
    let n = p.n();
    let basis = basis_matrices(&annihilator(p), n);
    LieHybrid::on_basis(
        n,
        basis,
        |x, y| Mat::twisted_commutator(x, y, p.a()),
        |x, y| Mat::twisted_commutator(x, y, p.b()),
    )
}

/// `{X : XF = FX}`.
pub fn centralizer(f: &Mat) -> Subspace {
    null_space(&operator_matrix(f.n(), |x| &(x * f) - &(f * x)))
}

/// The hybrid `h(F)` on the centralizer of `F` with the commutator and the
/// `F`-twisted commutator `XFY - YFX`.
pub fn centralizer_hybrid(f: &Mat) -> Result<LieHybrid> {
    let n = f.n();
    let identity = Mat::identity(n);
    LieHybrid::on_basis(
        n,
        basis_matrices(&centralizer(f), n),
        |x, y| Mat::twisted_commutator(x, y, &identity),
        |x, y| Mat::twisted_commutator(x, y, f),
    )
}

/// Both sides of the six-term compatibility identity for basis elements.
fn six_term_sides(h: &LieHybrid, x: &[Rational], y: &[Rational], z: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let side = |outer: &StructureConstants, inner: &StructureConstants| {
        let t1 = outer.bracket(&inner.bracket(x, z), y);
        let t2 = outer.bracket(&inner.bracket(x, y), z);
        let t3 = outer.bracket(&inner.bracket(z, y), x);
        t1.iter().zip(&t2).zip(&t3).map(|((a, b), c)| a + b + c).collect::<Vec<_>>()
    };
    (side(&h.c_double_prime, &h.c_prime), side(&h.c_prime, &h.c_double_prime))
}

/// Antisymmetry and Jacobi of both brackets, Jacobi of five random
/// combinations `lambda [.,.]' + mu [.,.]''`, and the six-term identity on
/// every basis triple.
pub fn verify_hybrid(h: &LieHybrid, seed: u64) -> CheckReport {
    let mut parts = vec![
        h.c_prime.check_antisymmetry("[.,.]'"),
        h.c_double_prime.check_antisymmetry("[.,.]''"),
        h.c_prime.check_jacobi("[.,.]'"),
        h.c_double_prime.check_jacobi("[.,.]''"),
    ];
    let mut g = SplitMix64::new(seed);
    for _ in 0..5 {
        let (lambda, mu) = (g.rational(9), g.rational(9));
        let combined = h.c_prime.combine(&lambda, &h.c_double_prime, &mu);
        parts.push(combined.check_jacobi(&format!("{lambda}[.,.]' + {mu}[.,.]''")));
    }
    let d = h.dim();
    let mut six = CheckReport::new("six-term compatibility");
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (h.c_prime.unit(i), h.c_prime.unit(j), h.c_prime.unit(k));
                let (l, r) = six_term_sides(h, &x, &y, &z);
                six.record(l == r, || format!("six-term identity fails on ({i},{j},{k})"));
            }
        }
    }
    parts.push(six);
    CheckReport::merged("hybrid", parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triviality {
    /// Both brackets vanish identically.
    pub trivial: bool,
    /// The two bracket tables are linearly dependent.
    pub proportional: bool,
}

pub fn triviality_report(h: &LieHybrid) -> Triviality {
    let trivial = h.c_prime.is_zero() && h.c_double_prime.is_zero();
    let len = h.c_prime.as_slice().len();
    let proportional = len == 0
        || QMatrix::from_rows(len, &[h.c_prime.as_slice().to_vec(), h.c_double_prime.as_slice().to_vec()]).rank() <= 1;
    Triviality { trivial, proportional }
}

/// The algebra on `V + V` with
///
/// ```text
/// [(X1,Y1),(X2,Y2)] = ( [X1,X2]'' + 1/2([X1,Y2]' - [X2,Y1]'),
///                       [Y1,Y2]'  + 1/2([Y1,X2]'' - [Y2,X1]'') )
/// ```
///
/// Basis element `i < dim` is `(e_i, 0)`, and `dim + i` is `(0, e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleAlgebra {
    pub constants: StructureConstants,
}

impl DoubleAlgebra {
    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn check_jacobi(&self) -> CheckReport {
        self.constants.check_jacobi("double")
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_zero()
    }
}

pub fn double_kv(h: &LieHybrid) -> DoubleAlgebra {
    let d = h.dim();
    let half = qf(1, 2);
    let split = |v: &[Rational]| (v[..d].to_vec(), v[d..].to_vec());
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); 2 * d];
        v[i] = Rational::from_integer(1.into());
        v
    };
    let add = |a: &[Rational], b: &[Rational], c: &[Rational], s: &Rational| -> Vec<Rational> {
        a.iter().zip(b).zip(c).map(|((a, b), c)| a + s * (b - c)).collect()
    };
    let constants = StructureConstants::from_fn(2 * d, |i, j| {
        let (x1, y1) = split(&unit(i));
        let (x2, y2) = split(&unit(j));
        let (p, pp) = (&h.c_prime, &h.c_double_prime);
        let first = add(&pp.bracket(&x1, &x2), &p.bracket(&x1, &y2), &p.bracket(&x2, &y1), &half);
        let second = add(&p.bracket(&y1, &y2), &pp.bracket(&y1, &x2), &pp.bracket(&y2, &x1), &half);
        Ok(first.into_iter().chain(second).collect())
    })
    .expect("infallible");
    DoubleAlgebra { constants }
}

/// Outcome of comparing one of the maps `X -> XA`, `X -> AX` with a
/// centralizer hybrid `h(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub map: &'static str,
    pub target_found: bool,
    pub image_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub image_in_target: bool,
    pub onto: bool,
    pub brackets_preserved: bool,
}

impl MapReport {
    pub fn is_isomorphism(&self) -> bool {
        self.target_found && self.injective && self.image_in_target && self.onto && self.brackets_preserved
    }

    pub fn is_epimorphism(&self) -> bool {
        self.target_found && self.image_in_target && self.onto && self.brackets_preserved
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// `"isomorphism"` when `A` is invertible, otherwise `"epimorphism"`.
    pub branch: &'static str,
    pub right: MapReport,
    pub left: MapReport,
}

impl MorphismReport {
    /// The hard claim: both maps are bracket-preserving bijections. Only
    /// meaningful on the invertible branch.
    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new("annihilator to centralizer maps");
        for m in [&self.right, &self.left] {
            r.record(m.is_isomorphism(), || format!("{m:?}"));
        }
        r
    }
}

/// Compares the annihilator hybrid of `(A, B)` with `h(F)` under
/// `X -> XA` (`F = A^{-1}B`, or any solution of `AF = B` when `A` is
/// singular) and `X -> AX` (`F = BA^{-1}`, or a solution of `FA = B`).
///
/// The second bracket must go to the `F`-twisted commutator, the first to
/// the plain commutator.
pub fn morphism_verify(p: &MatrixPair) -> Result<MorphismReport> {
    let n = p.n();
    let (a, b) = (p.a(), p.b());
    let ann = basis_matrices(&annihilator(p), n);
    let invertible = a.is_invertible();

    let solve_for = |op: &dyn Fn(&Mat) -> Mat| -> Result<Option<Mat>> {
        let l = operator_matrix(n, op);
        solve(&l, b.as_slice())?.map(|v| Mat::from_vec(n, v)).transpose()
    };
    let right_f = solve_for(&|f| a * f)?;
    let left_f = solve_for(&|f| f * a)?;
    if !invertible && right_f.is_none() && left_f.is_none() {
        return Err(Error::Precondition("A is singular and neither AF = B nor FA = B is solvable".into()));
    }

    let examine = |map: &'static str, f: Option<Mat>, apply: &dyn Fn(&Mat) -> Mat| -> MapReport {
        let Some(f) = f else {
            return MapReport {
                map,
                target_found: false,
                image_dim: 0,
                target_dim: 0,
                injective: false,
                image_in_target: false,
                onto: false,
                brackets_preserved: false,
            };
        };
        let images: Vec<Mat> = ann.iter().map(apply).collect();
        let image = Subspace::span(n * n, &images.iter().map(Mat::to_vec).collect::<Vec<_>>()).expect("dims");
        let target = centralizer(&f);
        let identity = Mat::identity(n);
        let mut preserved = true;
        for (i, x) in ann.iter().enumerate() {
            for (j, y) in ann.iter().enumerate() {
                let lhs1 = apply(&Mat::twisted_commutator(x, y, a));
                let rhs1 = Mat::twisted_commutator(&images[i], &images[j], &identity);
                let lhs2 = apply(&Mat::twisted_commutator(x, y, b));
                let rhs2 = Mat::twisted_commutator(&images[i], &images[j], &f);
                preserved &= lhs1 == rhs1 && lhs2 == rhs2;
            }
        }
        let image_in_target = image.is_subspace_of(&target).expect("dims");
        MapReport {
            map,
            target_found: true,
            image_dim: image.dim(),
            target_dim: target.dim(),
            injective: image.dim() == ann.len(),
            image_in_target,
            onto: image_in_target && image.dim() == target.dim(),
            brackets_preserved: preserved,
        }
    };

    let right = examine("X -> XA", right_f, &|x| x * a);
    let left = examine("X -> AX", left_f, &|x| a * x);
    Ok(MorphismReport { branch: if invertible { "isomorphism" } else { "epimorphism" }, right, left })
}

/// Checks that `X -> D^{-1} X C^{-1}` is an isomorphism from the hybrid of
/// `(A, B)` onto the hybrid of `(CAD, CBD)`: the transformed pair's brackets,
/// written in the transported basis, have the original structure constants.
pub fn transport_check(p: &MatrixPair, c: &Mat, d: &Mat) -> Result<CheckReport> {
    let h = hybrid_from_pair(p)?;
    let t = crate::isotopic::gl_transform(p, c, d)?;
    let transported: Vec<Mat> = h
        .basis
        .iter()
        .map(|x| crate::isotopic::transport_to_transformed(x, c, d))
        .collect::<Result<_>>()?;
    let mut r = CheckReport::new("transported hybrid");
    let target = annihilator(&t);
    let span = Subspace::span(t.n() * t.n(), &transported.iter().map(Mat::to_vec).collect::<Vec<_>>())?;
    r.record(span == target, || "transported basis does not span the new annihilator".into());
    let image = LieHybrid::on_basis(
        t.n(),
        transported,
        |x, y| Mat::twisted_commutator(x, y, t.a()),
        |x, y| Mat::twisted_commutator(x, y, t.b()),
    );
    match image {
        Ok(image) => {
            r.record(image.c_prime == h.c_prime, || "first bracket table changed".into());
            r.record(image.c_double_prime == h.c_double_prime, || "second bracket table changed".into());
        }
        Err(e) => r.record(false, || e.to_string()),
    }
    Ok(r)
}
