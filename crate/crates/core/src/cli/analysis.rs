use std::collections::BTreeMap;

use serde::Serialize;

use super::document::{matrix_strings, rational_string, PairDocument};
use crate::contragredient::{analyze_r, build_r, kirillov_crosscheck, omega_kernel_crosscheck, PairingConvention, RSquaredVerdict};
use crate::error::Result;
use crate::hybrid::{double_kv, hybrid_from_pair, morphism_verify, transport_check, triviality_report, verify_hybrid, LieHybrid, StructureConstants};
use crate::isotopic::{
    annihilator, basis_matrices, closed_form_generators, invariants_from, mixed_identity_sides, normalizer,
    substructure_check, MatrixPair, QuotientClass,
};
use crate::linalg::{q, standard_basis, Mat};
use crate::pseudo_orbit::{
    conservation_and_coadjoint_check, connection_check_at_point, decomposition_check, variation_commutativity,
    verify_at_point, W2Point,
};
use crate::report::CheckReport;

pub const SCHEMA: &str = "opair-1";

#[derive(Debug, Clone, Serialize)]
pub struct HybridSummary {
    pub dim: usize,
    /// `c[i][j][k]`, coefficient of `e_k` in `[e_i, e_j]'`.
    pub c_prime: Vec<Vec<Vec<String>>>,
    pub c_double_prime: Vec<Vec<Vec<String>>>,
    pub trivial: bool,
    pub proportional: bool,
    pub compatible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaSummary {
    pub kernel_matches_ac: bool,
    pub codim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub dims: [usize; 3],
    pub gl2_dim: usize,
    pub direct: bool,
    pub equals_gl2: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub r_squared_per_convention: Vec<RSquaredVerdict>,
    pub variation_commutativity: bool,
    /// Jacobi of the double `k(V)` built from this hybrid.
    pub double_jacobi: bool,
    /// For singular `A`: whether both maps `X -> XA`, `X -> AX` are
    /// bracket-preserving epimorphisms onto a centralizer hybrid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_morphisms_epimorphic: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub n: usize,
    pub pair: PairDocument,
    pub a: usize,
    pub a0: usize,
    pub classification: Option<QuotientClass>,
    pub ac_basis: Vec<Vec<Vec<String>>>,
    pub ab_basis: Vec<Vec<Vec<String>>>,
    pub hybrid: HybridSummary,
    pub omega: OmegaSummary,
    pub decomposition: DecompositionSummary,
    pub verdicts: Verdicts,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

fn constants_strings(c: &StructureConstants) -> Vec<Vec<Vec<String>>> {
    let d = c.dim();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| rational_string(c.get(i, j, k))).collect()).collect())
        .collect()
}

/// `R^2` verdicts for every pairing convention; they depend only on `n`.
pub fn r_squared_verdicts(n: usize) -> Result<Vec<RSquaredVerdict>> {
    if n < 2 {
        return Ok(Vec::new());
    }
    PairingConvention::ALL.iter().map(|&c| Ok(analyze_r(&build_r(n, c)?.r1))).collect()
}

fn mixed_identities_on_basis(p: &MatrixPair) -> CheckReport {
    let basis = standard_basis(p.n());
    let mut r = CheckReport::new("mixed identities");
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let (l, rr) = mixed_identity_sides(x, y, z, p.a(), p.b());
                r.record(l == rr, || format!("first mixed identity at {x:?}, {y:?}, {z:?}"));
                let (l, rr) = mixed_identity_sides(p.a(), p.b(), x, y, z);
                r.record(l == rr, || format!("second mixed identity at {x:?}, {y:?}, {z:?}"));
            }
        }
    }
    r
}

fn closed_form_check(p: &MatrixPair, ann: &crate::linalg::Subspace) -> CheckReport {
    let mut r = CheckReport::new("closed-form generators");
    let (m1, m2) = closed_form_generators(p).expect("n = 2");
    for m in [&m1, &m2] {
        r.record(ann.contains(m.as_slice()).unwrap_or(false), || format!("{m:?} not in the annihilator"));
    }
    let span = crate::linalg::Subspace::span(4, &[m1.to_vec(), m2.to_vec()]).expect("dims");
    if span.dim() == 2 && !p.is_proportional() {
        r.record(span == *ann, || "independent generators do not span the annihilator".into());
    }
    r
}

fn gl_transport(p: &MatrixPair) -> Result<CheckReport> {
    let n = p.n();
    let mut c = Mat::identity(n);
    let mut d = Mat::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                c.set(i, j, q((i + 2 * j) as i64));
            } else if i > j {
                d.set(i, j, q(1 - (i as i64) + j as i64));
            }
        }
    }
    transport_check(p, &c, &d)
}

fn hybrid_summary(h: &LieHybrid, compatible: bool) -> HybridSummary {
    let t = triviality_report(h);
    HybridSummary {
        dim: h.dim(),
        c_prime: constants_strings(&h.c_prime),
        c_double_prime: constants_strings(&h.c_double_prime),
        trivial: t.trivial,
        proportional: t.proportional,
        compatible,
    }
}

/// Computes every invariant of the pair and runs every identity at it.
/// `r_squared` is passed in because it depends only on `n`.
pub fn analyze_pair(p: &MatrixPair, r_squared: Vec<RSquaredVerdict>) -> Result<AnalysisReport> {
    let n = p.n();
    let ann = annihilator(p);
    let nor = normalizer(p);
    let inv = invariants_from(&ann, &nor);
    let point = W2Point::from(p);
    let mut reports: Vec<(&str, CheckReport)> = Vec::new();

    reports.push(("mixed_identities", mixed_identities_on_basis(p)));
    reports.push(("substructures", substructure_check(p)));
    if n == 2 {
        reports.push(("closed_form", closed_form_check(p, &ann)));
    }
    let h = hybrid_from_pair(p)?;
    let hybrid_check = verify_hybrid(&h, 0);
    let compatible = hybrid_check.passed;
    reports.push(("hybrid", hybrid_check));
    reports.push(("gl_transport", gl_transport(p)?));

    let kernel = omega_kernel_crosscheck(p);
    let omega = OmegaSummary { kernel_matches_ac: kernel.kernel_matches_ac, codim: kernel.codim };
    reports.push(("omega_kernel", kernel.check));

    let mut singular_morphisms_epimorphic = None;
    if p.a().is_invertible() {
        reports.push(("morphisms", morphism_verify(p)?.check()));
        reports.push(("kirillov", kirillov_crosscheck(p, 10, 0, 9)?.check));
    } else {
        singular_morphisms_epimorphic = Some(match morphism_verify(p) {
            Ok(m) => m.right.is_epimorphism() && m.left.is_epimorphism(),
            Err(_) => false,
        });
    }

    reports.push(("pseudohybrid", verify_at_point(&point)));
    reports.push(("connection", connection_check_at_point(&point)));
    let mut conservation = CheckReport::new("conservation");
    for x in standard_basis(n) {
        conservation.absorb(conservation_and_coadjoint_check(&point, &q(2), &q(3), &x)?.check);
    }
    reports.push(("conservation", conservation));

    let d = decomposition_check(&point);
    let decomposition = DecompositionSummary {
        dims: d.dims(),
        gl2_dim: d.gl2_tangent.dim(),
        direct: d.direct,
        equals_gl2: d.equal,
    };
    let verdicts = Verdicts {
        r_squared_per_convention: r_squared,
        variation_commutativity: variation_commutativity(&point),
        double_jacobi: double_kv(&h).check_jacobi().passed,
        singular_morphisms_epimorphic,
    };

    let mut checks = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for (name, r) in reports {
        checks.insert(name.to_string(), r.passed);
        counterexamples.extend(r.counterexamples.into_iter().map(|c| format!("{name}: {c}")));
    }
    let basis_strings = |s| basis_matrices(s, n).iter().map(matrix_strings).collect();
    Ok(AnalysisReport {
        schema: SCHEMA,
        n,
        pair: PairDocument::from_pair(p),
        a: inv.a,
        a0: inv.a0,
        classification: inv.classification,
        ac_basis: basis_strings(&ann),
        ab_basis: basis_strings(&nor),
        hybrid: hybrid_summary(&h, compatible),
        omega,
        decomposition,
        verdicts,
        checks,
        counterexamples,
    })
}
