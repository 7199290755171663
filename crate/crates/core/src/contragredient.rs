//! Trace pairing, the 4-form `Omega(A,B;X,Y) = tr([X,Y]_B A)` and what is
//! built from it.
//!
//! With the pairing `<X, A> = tr(XA)` the operator pair is contragredient:
//!
//! ```text
//! <[X,Y]_B, A> = -<[X,Y]_A, B> = <[A,B]_X, Y> = -<[A,B]_Y, X>
//! ```
//!
//! Fixing `(A, B)` gives an antisymmetric form `Omega_{A,B}` on `Mat_n`
//! whose kernel is the annihilator of the pair.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isotopic::{annihilator, MatrixPair};
use crate::linalg::{null_space, q, qf, standard_basis, Mat, QMatrix, Rational, Subspace};
use crate::report::CheckReport;
use crate::rng::SplitMix64;

pub fn trace_pairing(x: &Mat, a: &Mat) -> Rational {
    (x * a).trace()
}

pub fn omega(a: &Mat, b: &Mat, x: &Mat, y: &Mat) -> Result<Rational> {
    a.same_dim(b)?;
    a.same_dim(x)?;
    a.same_dim(y)?;
    Ok(omega_unchecked(a, b, x, y))
}

fn omega_unchecked(a: &Mat, b: &Mat, x: &Mat, y: &Mat) -> Rational {
    trace_pairing(&Mat::twisted_commutator(x, y, b), a)
}

/// The four expressions of the contragredience chain, in order.
pub fn chain(a: &Mat, b: &Mat, x: &Mat, y: &Mat) -> [Rational; 4] {
    let br = Mat::twisted_commutator;
    [
        trace_pairing(&br(x, y, b), a),
        -trace_pairing(&br(x, y, a), b),
        trace_pairing(&br(a, b, x), y),
        -trace_pairing(&br(a, b, y), x),
    ]
}

/// Sample 0 for `n >= 2` is the fixture `(A,B,X,Y) = (E21,E11,E11,E12)`,
/// where every expression equals 1.
pub fn verify_contragredience(n: usize, samples: usize, seed: u64, range: u64) -> CheckReport {
    let parts: Vec<CheckReport> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut g = SplitMix64::for_sample(seed, i as u64);
            let [mut a, mut b, mut x, mut y] = std::array::from_fn(|_| g.mat(n, range));
            if i == 0 && n >= 2 {
                (a, b, x, y) = (Mat::unit(n, 1, 0), Mat::unit(n, 0, 0), Mat::unit(n, 0, 0), Mat::unit(n, 0, 1));
            }
            let values = chain(&a, &b, &x, &y);
            let mut r = CheckReport::new(format!("sample {i}"));
            r.record(values.iter().all(|v| *v == values[0]), || {
                format!("chain disagrees at sample {i}: {values:?}")
            });
            if i == 0 && n >= 2 {
                r.record(values[0].is_one(), || format!("fixture gives {} instead of 1", values[0]));
            }
            r
        })
        .collect();
    CheckReport::merged(format!("contragredience n={n}"), parts)
}

/// Gram matrix of `Omega_{A,B}` on the standard basis:
/// entry `(i, j)` is `Omega(A,B;E_i,E_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaData {
    pub pair: MatrixPair,
    pub form: QMatrix,
}

impl OmegaData {
    pub fn new(pair: &MatrixPair) -> Self {
        let basis = standard_basis(pair.n());
        let rows: Vec<Vec<Rational>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| omega_unchecked(pair.a(), pair.b(), x, y)).collect())
            .collect();
        Self { pair: pair.clone(), form: QMatrix::from_rows(basis.len(), &rows) }
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.form.transpose() == self.form.scale(&q(-1))
    }

    pub fn kernel(&self) -> Subspace {
        null_space(&self.form)
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub kernel_matches_ac: bool,
    pub codim: usize,
    pub check: CheckReport,
}

/// Compares the kernel of `Omega_{A,B}` with the annihilator computed from
/// the linear system `AXB = BXA`, and checks the rank is even.
pub fn omega_kernel_crosscheck(p: &MatrixPair) -> KernelReport {
    let data = OmegaData::new(p);
    let kernel = data.kernel();
    let ann = annihilator(p);
    let rank = data.rank();
    let mut check = CheckReport::new("form kernel");
    check.record(data.is_antisymmetric(), || "form is not antisymmetric".into());
    let matches = kernel == ann;
    check.record(matches, || format!("kernel dim {} vs annihilator dim {}", kernel.dim(), ann.dim()));
    check.record(rank % 2 == 0, || format!("odd rank {rank}"));
    check.record(kernel.codim() == rank, || "rank-nullity mismatch".into());
    KernelReport { kernel_matches_ac: matches, codim: kernel.codim(), check }
}

/// How `<U ^ V, A ^ B>` is built from a pairing of `Mat_n` with itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingConvention {
    /// `<U,A><V,B> - <U,B><V,A>` with `<X,A> = tr(XA)`.
    Determinant,
    /// One half of `Determinant`.
    HalfDeterminant,
    /// `Determinant` built on `<X,A> = tr(X A^T)`.
    TransposeDeterminant,
}

impl PairingConvention {
    pub const ALL: [PairingConvention; 3] = [Self::Determinant, Self::HalfDeterminant, Self::TransposeDeterminant];

    fn base(self, n: usize, i: usize, k: usize) -> Rational {
        // E_i = E_{i mod n, i / n}; tr(E_{ab} E_{cd}) = [b = c][a = d].
        let (a, b) = (i % n, i / n);
        let (c, d) = (k % n, k / n);
        let hit = match self {
            Self::Determinant | Self::HalfDeterminant => b == c && a == d,
            Self::TransposeDeterminant => i == k,
        };
        if hit {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn scale(self) -> Rational {
        match self {
            Self::HalfDeterminant => qf(1, 2),
            _ => Rational::one(),
        }
    }
}

/// Index pairs `i < j` of the wedge basis `E_i ^ E_j`, in lexicographic order.
pub fn wedge_basis(dim: usize) -> Vec<(usize, usize)> {
    (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect()
}

/// Gram matrix of the chosen pairing on the wedge bases.
pub fn wedge_gram(n: usize, convention: PairingConvention) -> QMatrix {
    let wedges = wedge_basis(n * n);
    let s = convention.scale();
    let rows: Vec<Vec<Rational>> = wedges
        .iter()
        .map(|&(i, j)| {
            wedges
                .iter()
                .map(|&(k, l)| {
                    let g = |x, y| convention.base(n, x, y);
                    &s * (g(i, k) * g(j, l) - g(i, l) * g(j, k))
                })
                .collect()
        })
        .collect();
    QMatrix::from_rows(wedges.len(), &rows)
}

/// `Omega` as a matrix: row `(k,l)` indexes `A ^ B = E_k ^ E_l`, column
/// `(i,j)` indexes `X ^ Y = E_i ^ E_j`.
pub fn omega_wedge_matrix(n: usize) -> QMatrix {
    let basis = standard_basis(n);
    let wedges = wedge_basis(n * n);
    let rows: Vec<Vec<Rational>> = wedges
        .par_iter()
        .map(|&(k, l)| {
            wedges.iter().map(|&(i, j)| omega_unchecked(&basis[k], &basis[l], &basis[i], &basis[j])).collect()
        })
        .collect();
    QMatrix::from_rows(wedges.len(), &rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ROperator {
    pub side: u8,
    pub convention: PairingConvention,
    pub matrix: QMatrix,
}

/// Everything needed to compare `R1` and `R2`.
#[derive(Debug, Clone)]
pub struct ROperators {
    pub r1: ROperator,
    pub r2: ROperator,
    pub gram: QMatrix,
    gram_inv: QMatrix,
}

impl ROperators {
    /// Adjoint of a map on the first wedge space with respect to the pairing,
    /// as a map on the second: `<M u, w> = <u, M* w>`.
    fn adjoint(&self, m: &QMatrix) -> QMatrix {
        self.gram_inv.mul(&m.transpose()).and_then(|t| t.mul(&self.gram)).expect("square")
    }

    /// `R2 = adjoint(R1)` and `R1 = adjoint(R2)`.
    pub fn check_adjointness(&self) -> CheckReport {
        let mut r = CheckReport::new(format!("adjointness {:?}", self.r1.convention));
        r.record(self.adjoint(&self.r1.matrix) == self.r2.matrix, || "R2 != adjoint(R1)".into());
        r.record(self.adjoint(&self.r2.matrix) == self.r1.matrix, || "R1 != adjoint(R2)".into());
        r
    }
}

/// Solves `<R1(X ^ Y), A ^ B> = Omega(A,B;X,Y) = <X ^ Y, R2(A ^ B)>` for
/// both operators. With Gram matrix `P` (symmetric) and `Omega` matrix `W`
/// this gives `R1 = P^{-1} W` and `R2 = P^{-1} W^T`.
pub fn build_r(n: usize, convention: PairingConvention) -> Result<ROperators> {
    if n < 2 {
        return Err(Error::Precondition("wedge squares need n >= 2".into()));
    }
    let gram = wedge_gram(n, convention);
    let gram_inv = gram.inverse().map_err(|_| Error::Singular("wedge pairing"))?;
    let w = omega_wedge_matrix(n);
    let r1 = gram_inv.mul(&w)?;
    let r2 = gram_inv.mul(&w.transpose())?;
    Ok(ROperators {
        r1: ROperator { side: 1, convention, matrix: r1 },
        r2: ROperator { side: 2, convention, matrix: r2 },
        gram,
        gram_inv,
    })
}

/// What `R^2` turned out to be. Reported, never enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RSquaredVerdict {
    pub convention: PairingConvention,
    pub wedge_dim: usize,
    pub rank_r: usize,
    /// `R^2 = -id`.
    pub squares_to_minus_identity: bool,
    /// `Some(c)` when `R^2 = c id`.
    pub scalar: Option<String>,
    /// Dimensions of the `+1`, `-1` and `0` eigenspaces of `R^2`.
    pub eigenspace_dims: EigenspaceDims,
    /// `R^2 = -id` on the image of `R`.
    pub minus_identity_on_image: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenspaceDims {
    pub plus_one: usize,
    pub minus_one: usize,
    pub zero: usize,
}

pub fn analyze_r(r: &ROperator) -> RSquaredVerdict {
    let m = &r.matrix;
    let d = m.rows();
    let sq = m.mul(m).expect("square");
    let id = QMatrix::identity(d);
    let shifted = |c: i64| sq.add(&id.scale(&q(-c))).expect("square");
    let scalar = {
        let c = if d == 0 { Rational::zero() } else { sq[(0, 0)].clone() };
        (sq == id.scale(&c)).then(|| c.to_string())
    };
    let image = m.transpose().rank();
    let image_basis = Subspace::span(d, &m.transpose().row_vectors()).expect("dims");
    let on_image = image_basis
        .basis()
        .iter()
        .all(|v| sq.mul_vec(v).expect("dims").iter().zip(v).all(|(a, b)| *a == -b));
    RSquaredVerdict {
        convention: r.convention,
        wedge_dim: d,
        rank_r: image,
        squares_to_minus_identity: sq == id.scale(&q(-1)),
        scalar,
        eigenspace_dims: EigenspaceDims {
            plus_one: null_space(&shifted(1)).dim(),
            minus_one: null_space(&shifted(-1)).dim(),
            zero: null_space(&sq).dim(),
        },
        minus_identity_on_image: on_image,
    }
}

/// Sign `e` in `Omega(A,B;X,Y) = e tr(F [XA, YA])`, read off the fixture
/// `(A,B,X,Y) = (I, E11, E12, E21)`.
pub fn kirillov_sign() -> i64 {
    let (i, e11, e12, e21) = (Mat::identity(2), Mat::unit(2, 0, 0), Mat::unit(2, 0, 1), Mat::unit(2, 1, 0));
    let lhs = omega_unchecked(&i, &e11, &e12, &e21);
    let rhs = trace_pairing(&e11, &Mat::twisted_commutator(&e12, &e21, &i));
    if lhs == rhs {
        1
    } else {
        assert_eq!(lhs, -rhs, "fixture determines the sign");
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KirillovReport {
    pub sign: i64,
    pub check: CheckReport,
}

/// Compares `Omega_{A,B}` with the Kirillov form `(u, v) -> tr(F [u, v])`
/// pulled back along `X -> XA` (with `F = A^{-1}B`) and along `X -> AX`
/// (with `F = BA^{-1}`), at random `X, Y`.
pub fn kirillov_crosscheck(p: &MatrixPair, samples: usize, seed: u64, range: u64) -> Result<KirillovReport> {
    let a_inv = p.a().inverse().ok_or(Error::Singular("A"))?;
    let sign = q(kirillov_sign());
    let n = p.n();
    let f_right = &a_inv * p.b();
    let f_left = p.b() * &a_inv;
    let id = Mat::identity(n);
    let parts: Vec<CheckReport> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut g = SplitMix64::for_sample(seed, i as u64);
            let (x, y) = (g.mat(n, range), g.mat(n, range));
            let lhs = omega_unchecked(p.a(), p.b(), &x, &y);
            let right = &sign
                * trace_pairing(&f_right, &Mat::twisted_commutator(&(&x * p.a()), &(&y * p.a()), &id));
            let left = &sign
                * trace_pairing(&f_left, &Mat::twisted_commutator(&(p.a() * &x), &(p.a() * &y), &id));
            let mut r = CheckReport::new(format!("sample {i}"));
            r.record(lhs == right, || format!("X -> XA: {lhs} vs {right}"));
            r.record(lhs == left, || format!("X -> AX: {lhs} vs {left}"));
            r
        })
        .collect();
    Ok(KirillovReport { sign: kirillov_sign(), check: CheckReport::merged("kirillov", parts) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Mat {
        Mat::unit(2, i, j)
    }

    #[test]
    fn omega_fixtures() {
        let x = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        assert!(omega(&e(0, 0), &e(0, 1), &x, &x).unwrap().is_zero());
        assert_eq!(omega(&e(1, 0), &e(0, 0), &e(0, 0), &e(0, 1)).unwrap(), q(1));
        assert_eq!(omega(&Mat::identity(2), &e(0, 0), &e(0, 1), &e(1, 0)).unwrap(), q(-1));
        assert!(omega(&Mat::identity(3), &e(0, 0), &e(0, 1), &e(1, 0)).is_err());
    }

    #[test]
    fn chain_fixture_is_all_ones() {
        assert_eq!(chain(&e(1, 0), &e(0, 0), &e(0, 0), &e(0, 1)), [q(1), q(1), q(1), q(1)]);
        let one = Mat::from_i64(&[&[3]]);
        assert!(chain(&one, &one, &one, &one).iter().all(Zero::is_zero));
    }

    #[test]
    fn contragredience_sweeps() {
        assert!(verify_contragredience(1, 5, 1, 9).passed);
        assert!(verify_contragredience(3, 50, 2, 9).passed);
    }

    #[test]
    fn kernel_of_unit_pair() {
        let p = MatrixPair::new(e(0, 0), e(0, 1)).unwrap();
        let r = omega_kernel_crosscheck(&p);
        assert!(r.check.passed && r.kernel_matches_ac);
        assert_eq!(r.codim, 2);
        let expected = Subspace::span(4, &[e(0, 1).to_vec(), e(1, 1).to_vec()]).unwrap();
        assert_eq!(OmegaData::new(&p).kernel(), expected);
    }

    #[test]
    fn kernel_of_equal_pair_is_everything() {
        let a = Mat::from_i64(&[&[1, -2], &[4, 7]]);
        let p = MatrixPair::new(a.clone(), a).unwrap();
        assert!(OmegaData::new(&p).form.is_zero());
        let r = omega_kernel_crosscheck(&p);
        assert_eq!((r.codim, r.check.passed), (0, true));
    }

    #[test]
    fn r1_on_e11_wedge_e12() {
        let ops = build_r(2, PairingConvention::Determinant).unwrap();
        let wedges = wedge_basis(4);
        // E11 is coordinate 0, E12 is coordinate 2.
        let idx = wedges.iter().position(|&w| w == (0, 2)).unwrap();
        let mut u = vec![q(0); wedges.len()];
        u[idx] = q(1);
        let image = ops.r1.matrix.mul_vec(&u).unwrap();
        let expected: Vec<Rational> = u.iter().map(|x| -x).collect();
        assert_eq!(image, expected);
        let verdict = analyze_r(&ops.r1);
        assert!(!verdict.squares_to_minus_identity);
        assert!(verdict.eigenspace_dims.plus_one >= 1);
    }

    #[test]
    fn adjointness_for_every_convention() {
        for c in PairingConvention::ALL {
            assert!(build_r(2, c).unwrap().check_adjointness().passed, "{c:?}");
        }
        assert!(build_r(1, PairingConvention::Determinant).is_err());
    }

    #[test]
    fn halving_the_pairing_doubles_r() {
        let full = build_r(2, PairingConvention::Determinant).unwrap();
        let half = build_r(2, PairingConvention::HalfDeterminant).unwrap();
        assert_eq!(half.r1.matrix, full.r1.matrix.scale(&q(2)));
    }

    #[test]
    fn zero_operator_squares_to_zero() {
        let r = ROperator { side: 1, convention: PairingConvention::Determinant, matrix: QMatrix::zeros(3, 3) };
        let v = analyze_r(&r);
        assert_eq!(v.scalar.as_deref(), Some("0"));
        assert_eq!(v.eigenspace_dims.zero, 3);
    }

    #[test]
    fn kirillov_identity() {
        assert_eq!(kirillov_sign(), -1);
        let f = Mat::from_i64(&[&[2, 1], &[-1, 3]]);
        let p = MatrixPair::new(Mat::identity(2), f).unwrap();
        assert!(kirillov_crosscheck(&p, 20, 4, 9).unwrap().check.passed);
        let mut g = SplitMix64::new(8);
        let p = MatrixPair::new(g.invertible_mat(3, 5), g.mat(3, 5)).unwrap();
        assert!(kirillov_crosscheck(&p, 20, 4, 9).unwrap().check.passed);
        let singular = MatrixPair::new(e(0, 0), e(0, 1)).unwrap();
        assert!(kirillov_crosscheck(&singular, 1, 0, 9).is_err());
    }
}
