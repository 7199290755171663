//! The hybrid of `A = d/dx`, `B = x` acting on polynomials, realized by
//! operator matrices truncated at degree `D`.
//!
//! Hybrid elements are the operators `P` with `d P x = x P d`. The basis
//! `e_n = x^n f_n(x d/dx)` has `f_n(2k) = (2k-1)!! / (2k+n)!!` and
//! `f_n(2k+1) = 0`, with `(-1)!! = 0!! = 1`.
//!
//! Truncation loses every term of degree above `D`, so each identity is only
//! compared on the monomials whose computation never leaves degree `D`; the
//! window is derived per identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{null_space, q, QMatrix, Rational};
use crate::report::CheckReport;

/// `k!!` for `k >= -1`.
pub fn double_factorial(k: i64) -> BigInt {
    assert!(k >= -1, "double factorial of {k}");
    let mut acc = BigInt::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

/// `f_n(j)`: zero for odd `j`, `(j-1)!! / (j+n)!!` for even `j`.
pub fn f_coefficient(n: usize, j: usize) -> Rational {
    if j % 2 == 1 {
        return Rational::zero();
    }
    let j = j as i64;
    Rational::new(double_factorial(j - 1), double_factorial(j + n as i64))
}

/// Operator on polynomials of degree at most `D`, as a `(D+1) x (D+1)`
/// matrix in the monomial basis; column `j` is the image of `x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedOperator {
    degree: usize,
    action: QMatrix,
}

impl TruncatedOperator {
    pub fn new(degree: usize, action: QMatrix) -> Result<Self> {
        if action.rows() != degree + 1 || action.cols() != degree + 1 {
            return Err(Error::DimensionMismatch { expected: degree + 1, found: action.rows().max(action.cols()) });
        }
        Ok(Self { degree, action })
    }

    fn from_fn(degree: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let rows: Vec<Vec<Rational>> = (0..=degree).map(|r| (0..=degree).map(|c| f(r, c)).collect()).collect();
        Self { degree, action: QMatrix::from_rows(degree + 1, &rows) }
    }

    pub fn zero(degree: usize) -> Self {
        Self { degree, action: QMatrix::zeros(degree + 1, degree + 1) }
    }

    pub fn identity(degree: usize) -> Self {
        Self { degree, action: QMatrix::identity(degree + 1) }
    }

    /// Multiplication by `x`.
    pub fn x(degree: usize) -> Self {
        Self::from_fn(degree, |r, c| if r == c + 1 { q(1) } else { q(0) })
    }

    /// `d/dx`.
    pub fn d(degree: usize) -> Self {
        Self::from_fn(degree, |r, c| if r + 1 == c { q(c as i64) } else { q(0) })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn action(&self) -> &QMatrix {
        &self.action
    }

    /// Coefficient of `x^row` in the image of `x^col`.
    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.action[(row, col)]
    }

    pub fn is_zero(&self) -> bool {
        self.action.is_zero()
    }

    pub fn compose(&self, other: &TruncatedOperator) -> TruncatedOperator {
        let action = self.action.mul(&other.action).expect("same truncation");
        TruncatedOperator { degree: self.degree, action }
    }

    pub fn sub(&self, other: &TruncatedOperator) -> TruncatedOperator {
        let action = self.action.add(&other.action.scale(&q(-1))).expect("same truncation");
        TruncatedOperator { degree: self.degree, action }
    }

    fn compose_all(ops: &[&TruncatedOperator]) -> TruncatedOperator {
        ops[1..].iter().fold(ops[0].clone(), |acc, op| acc.compose(op))
    }
}

/// `e_n` truncated at degree `D`.
pub fn basis_element(n: i64, degree: usize) -> Result<TruncatedOperator> {
    if n < 0 {
        return Err(Error::Precondition(format!("basis index {n} is negative")));
    }
    let n = n as usize;
    if degree < n {
        return Err(Error::Precondition(format!("truncation degree {degree} is below the index {n}")));
    }
    Ok(TruncatedOperator::from_fn(degree, |r, c| if r == c + n { f_coefficient(n, c) } else { q(0) }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    /// Largest row and column degree compared.
    pub window: usize,
    /// `d P x - x P d` restricted to the window.
    pub residual: QMatrix,
    pub member: bool,
}

/// Residual of `d P x - x P d` on the rows and columns of degree at most
/// `D - 1`. Column `j` first needs `x^(j+1)`, so `j <= D - 1`; the image of
/// `P` is exact up to degree `D`, so rows of `d P x` are exact up to `D - 1`.
pub fn membership_check(p: &TruncatedOperator) -> MembershipReport {
    let degree = p.degree();
    let (x, d) = (TruncatedOperator::x(degree), TruncatedOperator::d(degree));
    let full = TruncatedOperator::compose_all(&[&d, p, &x]).sub(&TruncatedOperator::compose_all(&[&x, p, &d]));
    let window = degree.saturating_sub(1);
    let rows: Vec<Vec<Rational>> =
        (0..=window).map(|r| (0..=window).map(|c| full.entry(r, c).clone()).collect()).collect();
    let residual = QMatrix::from_rows(window + 1, &rows);
    let member = residual.is_zero();
    MembershipReport { window, residual, member }
}

/// Polynomial in `(x, xi)`; keys are exponent pairs `(a, b)` of `x^a xi^b`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolPolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl SymbolPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Rational) {
        let entry = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn coefficient(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }
}

/// `P_{x xi} + x P_x + xi P_xi + P`.
pub fn pde_residual(p: &SymbolPolynomial) -> SymbolPolynomial {
    let mut out = SymbolPolynomial::zero();
    for (&(a, b), c) in p.terms() {
        if a > 0 && b > 0 {
            out.add_term(a - 1, b - 1, c * q(i64::from(a) * i64::from(b)));
        }
        out.add_term(a, b, c * q(i64::from(a + b + 1)));
    }
    out
}

/// Dimension of the space of polynomials of total degree at most `degree`
/// annihilated by [`pde_residual`].
pub fn pde_kernel_dim(degree: u32) -> usize {
    let monomials: Vec<(u32, u32)> = (0..=degree).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect();
    let index: BTreeMap<(u32, u32), usize> = monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let columns: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|&(a, b)| {
            let image = pde_residual(&SymbolPolynomial::monomial(a, b, q(1)));
            let mut col = vec![Rational::zero(); monomials.len()];
            for (m, c) in image.terms() {
                col[index[m]] = c.clone();
            }
            col
        })
        .collect();
    null_space(&QMatrix::from_columns(monomials.len(), &columns)).dim()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketKind {
    /// `[P, Q]_x = P x Q - Q x P`
    X,
    /// `[P, Q]_d = P d Q - Q d P`
    D,
}

impl BracketKind {
    fn middle(self, degree: usize) -> TruncatedOperator {
        match self {
            BracketKind::X => TruncatedOperator::x(degree),
            BracketKind::D => TruncatedOperator::d(degree),
        }
    }

    /// Degree change of the middle factor.
    fn shift(self) -> i64 {
        match self {
            BracketKind::X => 1,
            BracketKind::D => -1,
        }
    }
}

/// One bracket `[e_m, e_n]` written in the `e_k` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub m: usize,
    pub n: usize,
    pub kind: BracketKind,
    /// Largest column degree on which the bracket is exact.
    pub window: usize,
    /// Nonzero coefficients `(k, c)` of `sum c e_k`, or `None` if the bracket
    /// is not a combination of basis elements on the window.
    pub expansion: Option<Vec<(usize, Rational)>>,
}

impl TableCell {
    /// `Some(sign)` when the bracket equals `sign * e_k` with the given `k`.
    pub fn unit_multiple_of(&self, k: usize) -> Option<i64> {
        match self.expansion.as_deref() {
            Some([(idx, c)]) if *idx == k && c.abs() == q(1) => Some(if c.is_positive() { 1 } else { -1 }),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.expansion.as_deref(), Some([]))
    }
}

/// Expands an operator, exact on columns `0..=window`, in the `e_k` basis:
/// an entry in row `j + k` of column `j` belongs to `e_k`, and its ratio to
/// `f_k(j)` must not depend on `j`.
fn expand_in_basis(op: &TruncatedOperator, window: usize) -> Option<Vec<(usize, Rational)>> {
    let mut coefficients: BTreeMap<usize, Rational> = BTreeMap::new();
    for k in 0..=op.degree() {
        let fit = op.entry(k, 0) / f_coefficient(k, 0);
        for j in 0..=window.min(op.degree() - k) {
            let expected = &fit * f_coefficient(k, j);
            if *op.entry(j + k, j) != expected {
                return None;
            }
        }
        if !fit.is_zero() {
            coefficients.insert(k, fit);
        }
    }
    // Entries below the diagonal shift nothing, entries above it lower the degree.
    for j in 0..=window {
        for r in 0..j {
            if !op.entry(r, j).is_zero() {
                return None;
            }
        }
    }
    Some(coefficients.into_iter().collect())
}

fn bracket_cell(m: usize, n: usize, kind: BracketKind, degree: usize) -> TableCell {
    let (em, en) = (basis_element(m as i64, degree).unwrap(), basis_element(n as i64, degree).unwrap());
    let mid = kind.middle(degree);
    let op = TruncatedOperator::compose_all(&[&em, &mid, &en]).sub(&TruncatedOperator::compose_all(&[&en, &mid, &em]));
    // Starting from x^j, each product passes through degrees j + n, j + n + shift
    // and j + n + shift + m (or with m and n exchanged); all must stay <= D.
    let peak = [m as i64, n as i64, (m + n) as i64 + kind.shift()].into_iter().max().unwrap();
    let window = (degree as i64 - peak).max(0) as usize;
    TableCell { m, n, kind, window, expansion: expand_in_basis(&op, window) }
}

/// Observed signs for the two parity patterns of each bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignPattern {
    /// Sign of `[e_m, e_n]` for `m` odd, `n` even.
    pub odd_even: Option<i64>,
    /// Sign of `[e_m, e_n]` for `m` even, `n` odd.
    pub even_odd: Option<i64>,
}

/// Observed table against the published one: `+e` for `m` odd and `n` even,
/// `-e` for `m` even and `n` odd, with index `m+n+1` attributed to the
/// primed bracket, which for this pair is the `d`-bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignVerdict {
    pub x_bracket: SignPattern,
    pub d_bracket: SignPattern,
    /// Index shift `k - (m+n)` of the x-bracket (observed: +1).
    pub x_index_shift: i64,
    pub d_index_shift: i64,
    pub signs_match_published: bool,
    pub index_shift_matches_published: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationTable {
    pub max_index: usize,
    pub degree: usize,
    pub cells: Vec<TableCell>,
    pub check: CheckReport,
    pub verdict: SignVerdict,
}

impl CommutationTable {
    pub fn cell(&self, m: usize, n: usize, kind: BracketKind) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.m == m && c.n == n && c.kind == kind)
    }
}

fn consistent_sign(cells: &[&TableCell], kind: BracketKind, odd_m: bool) -> Option<i64> {
    let shift = kind.shift();
    let signs: Vec<Option<i64>> = cells
        .iter()
        .filter(|c| c.kind == kind && (c.m + c.n) % 2 == 1 && (c.m % 2 == 1) == odd_m)
        .map(|c| c.unit_multiple_of(((c.m + c.n) as i64 + shift) as usize))
        .collect();
    match signs.first() {
        Some(&first) if signs.iter().all(|s| *s == first) => first,
        _ => None,
    }
}

/// `[e_m, e_n]_x` and `[e_m, e_n]_d` for all `m, n <= M`, with `D >= 2M + 2`.
pub fn commutation_table(max_index: usize, degree: usize) -> Result<CommutationTable> {
    if degree < 2 * max_index + 2 {
        return Err(Error::Precondition(format!(
            "truncation degree {degree} is below 2M + 2 = {}",
            2 * max_index + 2
        )));
    }
    let coords: Vec<(usize, usize, BracketKind)> = (0..=max_index)
        .flat_map(|m| (0..=max_index).flat_map(move |n| [(m, n, BracketKind::X), (m, n, BracketKind::D)]))
        .collect();
    let cells: Vec<TableCell> = coords.into_par_iter().map(|(m, n, k)| bracket_cell(m, n, k, degree)).collect();

    let mut check = CheckReport::new(format!("commutation table M={max_index} D={degree}"));
    for c in &cells {
        let label = || format!("[e{},e{}]_{:?}: {:?}", c.m, c.n, c.kind, c.expansion);
        if (c.m + c.n) % 2 == 0 {
            check.record(c.is_zero(), label);
        } else {
            let k = ((c.m + c.n) as i64 + c.kind.shift()) as usize;
            check.record(c.unit_multiple_of(k).is_some(), label);
        }
        let mirror = cells.iter().find(|o| o.m == c.n && o.n == c.m && o.kind == c.kind).unwrap();
        let negated = mirror.expansion.as_ref().map(|e| e.iter().map(|(k, v)| (*k, -v)).collect::<Vec<_>>());
        check.record(c.expansion == negated, || format!("antisymmetry of [e{},e{}]_{:?}", c.m, c.n, c.kind));
    }

    let refs: Vec<&TableCell> = cells.iter().collect();
    let pattern = |kind| SignPattern {
        odd_even: consistent_sign(&refs, kind, true),
        even_odd: consistent_sign(&refs, kind, false),
    };
    let (x_bracket, d_bracket) = (pattern(BracketKind::X), pattern(BracketKind::D));
    let published = SignPattern { odd_even: Some(1), even_odd: Some(-1) };
    let verdict = SignVerdict {
        x_bracket,
        d_bracket,
        x_index_shift: BracketKind::X.shift(),
        d_index_shift: BracketKind::D.shift(),
        signs_match_published: x_bracket == published && d_bracket == published,
        index_shift_matches_published: BracketKind::D.shift() == 1,
    };
    Ok(CommutationTable { max_index, degree, cells, check, verdict })
}
