//! The matrix isotopic pair.
//!
//! For `n x n` matrices the two families of brackets are
//! `[X,Y]_A = XAY - YAX` on the first copy of `Mat_n` and
//! `[A,B]_X = AXB - BXA` on the second. For a pair `(A, B)` spanning
//! `span(A, B)`:
//!
//! * the *annihilator* is `{X : [A', B']_X = 0 for all A', B' in span(A, B)}`,
//! * the *normalizer* is `{X : [A', B']_X in span(A, B) for all A', B'}`.
//!
//! Since `[aA + bB, cA + dB]_X = (ad - bc) [A,B]_X`, both quantifiers reduce
//! to the single generator pair, which is how they are computed here.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{null_space, operator_matrix, q, qf, Mat, QMatrix, Rational, Subspace};
use crate::report::CheckReport;
use crate::rng::SplitMix64;

/// An ordered pair `(A, B)` of equal-sized square matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPair {
    a: Mat,
    b: Mat,
}

impl MatrixPair {
    pub fn new(a: Mat, b: Mat) -> Result<Self> {
        a.same_dim(&b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    /// `A` and `B` are proportional when their stacked coordinates have rank <= 1.
    pub fn is_proportional(&self) -> bool {
        QMatrix::from_rows(self.n() * self.n(), &[self.a.to_vec(), self.b.to_vec()]).rank() <= 1
    }

    /// `span(A, B)` as a subspace of `Q^{n^2}`.
    pub fn span(&self) -> Subspace {
        Subspace::span(self.n() * self.n(), &[self.a.to_vec(), self.b.to_vec()]).expect("same dims")
    }
}

/// `[X,Y]_A = XAY - YAX`.
pub fn bracket_v1(x: &Mat, y: &Mat, a: &Mat) -> Result<Mat> {
    x.same_dim(y)?;
    x.same_dim(a)?;
    Ok(Mat::twisted_commutator(x, y, a))
}

/// `[A,B]_X = AXB - BXA`.
pub fn bracket_v2(a: &Mat, b: &Mat, x: &Mat) -> Result<Mat> {
    a.same_dim(b)?;
    a.same_dim(x)?;
    Ok(Mat::twisted_commutator(a, b, x))
}

/// Matrix of `X -> AXB - BXA`.
pub fn annihilator_map(p: &MatrixPair) -> QMatrix {
    operator_matrix(p.n(), |x| Mat::twisted_commutator(p.a(), p.b(), x))
}

pub fn annihilator(p: &MatrixPair) -> Subspace {
    null_space(&annihilator_map(p))
}

/// Computed as the projection onto the `X` coordinates of the kernel of
/// `(X, s, t) -> (AXB - BXA) - sA - tB`.
pub fn normalizer(p: &MatrixPair) -> Subspace {
    let n2 = p.n() * p.n();
    let targets = QMatrix::from_columns(n2, &[neg(&p.a().to_vec()), neg(&p.b().to_vec())]);
    let extended = annihilator_map(p).hstack(&targets).expect("same row count");
    let projected: Vec<Vec<Rational>> =
        null_space(&extended).basis().iter().map(|v| v[..n2].to_vec()).collect();
    Subspace::span(n2, &projected).expect("projected vectors")
}

fn neg(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| -x).collect()
}

/// Basis elements of a subspace of `Q^{n^2}` read back as matrices.
pub fn basis_matrices(s: &Subspace, n: usize) -> Vec<Mat> {
    s.basis().iter().map(|v| Mat::from_vec(n, v.clone()).expect("ambient n^2")).collect()
}

/// Label for the quotient of the normalizer by the annihilator, keyed by its
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientClass {
    /// Quotient is zero.
    ZeroQuotient,
    /// One-dimensional quotient: the pair attached to the affine line algebra.
    AffLine,
    /// Two-dimensional quotient: the Okubo pair on `(Q^2, Q^2)`.
    Okubo,
}

impl QuotientClass {
    pub fn from_quotient_dim(a0: usize) -> Option<Self> {
        match a0 {
            0 => Some(Self::ZeroQuotient),
            1 => Some(Self::AffLine),
            2 => Some(Self::Okubo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairInvariants {
    /// Dimension of the annihilator.
    pub a: usize,
    /// Dimension of normalizer / annihilator.
    pub a0: usize,
    /// `None` only if `a0 > 2`, which would be a violated identity.
    pub classification: Option<QuotientClass>,
}

pub fn invariants(p: &MatrixPair) -> PairInvariants {
    invariants_from(&annihilator(p), &normalizer(p))
}

pub fn invariants_from(annihilator: &Subspace, normalizer: &Subspace) -> PairInvariants {
    let a = annihilator.dim();
    let a0 = normalizer.dim() - a;
    PairInvariants { a, a0, classification: QuotientClass::from_quotient_dim(a0) }
}

/// Closed-form annihilator elements for `2 x 2` pairs. With
/// `A = (a b; c d)` and `B = (e f; g h)` these are
/// `(de-ah, af-be; ag-ce, 0)` and `(dg-ch, cf-bg; 0, ag-ce)`.
pub fn closed_form_generators(p: &MatrixPair) -> Result<(Mat, Mat)> {
    if p.n() != 2 {
        return Err(Error::Precondition(format!("closed form needs n = 2, got n = {}", p.n())));
    }
    let (a, b, c, d) = (p.a().get(0, 0), p.a().get(0, 1), p.a().get(1, 0), p.a().get(1, 1));
    let (e, f, g, h) = (p.b().get(0, 0), p.b().get(0, 1), p.b().get(1, 0), p.b().get(1, 1));
    let zero = q(0);
    let agce = a * g - c * e;
    let m1 = Mat::from_rows(vec![
        vec![d * e - a * h, a * f - b * e],
        vec![agce.clone(), zero.clone()],
    ])?;
    let m2 = Mat::from_rows(vec![vec![d * g - c * h, c * f - b * g], vec![zero, agce]])?;
    Ok((m1, m2))
}

/// `(CAD, CBD)` for invertible `C`, `D`.
pub fn gl_transform(p: &MatrixPair, c: &Mat, d: &Mat) -> Result<MatrixPair> {
    p.a().same_dim(c)?;
    p.a().same_dim(d)?;
    if !c.is_invertible() {
        return Err(Error::Singular("C"));
    }
    if !d.is_invertible() {
        return Err(Error::Singular("D"));
    }
    MatrixPair::new(&(c * p.a()) * d, &(c * p.b()) * d)
}

/// `X -> D^{-1} X C^{-1}`, which carries the annihilator of `(A, B)` onto
/// that of `(CAD, CBD)`: `(CAD)(D^{-1}XC^{-1})(CBD) = C(AXB)D`.
pub fn transport_to_transformed(x: &Mat, c: &Mat, d: &Mat) -> Result<Mat> {
    let c_inv = c.inverse().ok_or(Error::Singular("C"))?;
    let d_inv = d.inverse().ok_or(Error::Singular("D"))?;
    Ok(&(&d_inv * x) * &c_inv)
}

/// Both sides of
/// `[X,Y]_{[A,B]_Z} = 1/2 ( [[X,Z]_A,Y]_B + [[X,Y]_A,Z]_B + [[Z,Y]_A,X]_B
///                        - [[X,Z]_B,Y]_A - [[X,Y]_B,Z]_A - [[Z,Y]_B,X]_A )`.
///
/// The second mixed identity of the pair is the same expression with the
/// roles of the two spaces exchanged, so it is evaluated by the same function.
pub fn mixed_identity_sides(x: &Mat, y: &Mat, z: &Mat, a: &Mat, b: &Mat) -> (Mat, Mat) {
    let br = Mat::twisted_commutator;
    let lhs = br(x, y, &br(a, b, z));
    let plus = [
        br(&br(x, z, a), y, b),
        br(&br(x, y, a), z, b),
        br(&br(z, y, a), x, b),
    ];
    let minus = [
        br(&br(x, z, b), y, a),
        br(&br(x, y, b), z, a),
        br(&br(z, y, b), x, a),
    ];
    let mut sum = Mat::zeros(x.n());
    for t in &plus {
        sum = &sum + t;
    }
    for t in &minus {
        sum = &sum - t;
    }
    (lhs, sum.scale(&qf(1, 2)))
}

/// Jacobi sum `[[X,Y]_M,Z]_M + [[Y,Z]_M,X]_M + [[Z,X]_M,Y]_M`.
pub fn jacobi_sum(x: &Mat, y: &Mat, z: &Mat, m: &Mat) -> Mat {
    let br = |u: &Mat, v: &Mat| Mat::twisted_commutator(u, v, m);
    let s = &br(&br(x, y), z) + &br(&br(y, z), x);
    &s + &br(&br(z, x), y)
}

/// Samples random matrices and checks the isotopic-pair axioms for the
/// operator brackets: antisymmetry, Jacobi for `[.,.]_{aA+bB}` at random
/// `(a, b)`, and both mixed identities. Sample 0 for `n >= 2` is the fixture
/// `X = E11, Y = E12, Z = A = I`.
pub fn verify_pair_axioms(n: usize, samples: usize, seed: u64, range: u64) -> CheckReport {
    let parts: Vec<CheckReport> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut g = SplitMix64::for_sample(seed, i as u64);
            let [mut x, mut y, mut z, mut a, b, c] = std::array::from_fn(|_| g.mat(n, range));
            if i == 0 && n >= 2 {
                x = Mat::unit(n, 0, 0);
                y = Mat::unit(n, 0, 1);
                z = Mat::identity(n);
                a = Mat::identity(n);
            }
            let (alpha, beta) = (g.rational(range), g.rational(range));
            let mut r = CheckReport::new(format!("sample {i}"));
            let describe = |what: &str| format!("{what} fails at sample {i}");
            r.record(
                Mat::twisted_commutator(&x, &y, &a) == -&Mat::twisted_commutator(&y, &x, &a),
                || describe("antisymmetry of [X,Y]_A"),
            );
            r.record(
                Mat::twisted_commutator(&a, &b, &x) == -&Mat::twisted_commutator(&b, &a, &x),
                || describe("antisymmetry of [A,B]_X"),
            );
            let m = &a.scale(&alpha) + &b.scale(&beta);
            r.record(jacobi_sum(&x, &y, &z, &m).is_zero(), || describe("Jacobi of [.,.]_{aA+bB}"));
            let w = &x.scale(&alpha) + &y.scale(&beta);
            r.record(jacobi_sum(&a, &b, &c, &w).is_zero(), || describe("Jacobi of [.,.]_{aX+bY}"));
            let (l, rr) = mixed_identity_sides(&x, &y, &z, &a, &b);
            r.record(l == rr, || describe("first mixed identity"));
            let (l, rr) = mixed_identity_sides(&a, &b, &c, &x, &y);
            r.record(l == rr, || describe("second mixed identity"));
            r
        })
        .collect();
    CheckReport::merged(format!("pair_axioms n={n}"), parts)
}

/// Closure of the annihilator and normalizer under `[.,.]_{A'}`, `A'` in
/// `span(A, B)`, the annihilator being an ideal of the normalizer, and the
/// quotient bookkeeping.
pub fn substructure_check(p: &MatrixPair) -> CheckReport {
    let n = p.n();
    let ann = annihilator(p);
    let nor = normalizer(p);
    let span = p.span();
    let ann_b = basis_matrices(&ann, n);
    let nor_b = basis_matrices(&nor, n);
    let mut r = CheckReport::new("substructures");
    r.record(ann.is_subspace_of(&nor).unwrap_or(false), || "annihilator not inside normalizer".into());
    for x in &nor_b {
        let image = Mat::twisted_commutator(p.a(), p.b(), x);
        r.record(span.contains(image.as_slice()).unwrap_or(false), || format!("[A,B]_X outside span for X = {x:?}"));
    }
    for c in [p.a(), p.b()] {
        for (i, x) in nor_b.iter().enumerate() {
            for y in &nor_b[i + 1..] {
                let v = Mat::twisted_commutator(x, y, c);
                r.record(nor.contains(v.as_slice()).unwrap_or(false), || {
                    format!("normalizer not closed: [{x:?},{y:?}]_{c:?}")
                });
            }
            for y in &ann_b {
                let v = Mat::twisted_commutator(x, y, c);
                r.record(ann.contains(v.as_slice()).unwrap_or(false), || {
                    format!("annihilator not an ideal: [{x:?},{y:?}]_{c:?}")
                });
            }
        }
    }
    let inv = invariants_from(&ann, &nor);
    r.record(inv.classification.is_some(), || format!("quotient dimension {} > 2", inv.a0));
    r.record(inv.a + inv.a0 <= n * n, || "a + a0 exceeds n^2".into());
    r
}
