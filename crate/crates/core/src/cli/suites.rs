use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::analysis::r_squared_verdicts;
use crate::contragredient::{build_r, kirillov_crosscheck, kirillov_sign, omega_kernel_crosscheck, verify_contragredience, PairingConvention};
use crate::diffop::{basis_element, commutation_table, f_coefficient, membership_check, pde_kernel_dim};
use crate::hybrid::{centralizer_hybrid, double_kv, hybrid_from_pair, morphism_verify, transport_check, verify_hybrid};
use crate::isotopic::{annihilator, verify_pair_axioms, MatrixPair};
use crate::linalg::{Mat, Rational};
use crate::pseudo_orbit::{
    conservation_and_coadjoint_check, conventions, decomposition_check, leaf_preservation_check,
    literal_double_prime_orientation_holds, parallel_transport_residual, random_element, verify_pseudoalgebra,
    verify_pseudohybrid_compat, W2Point,
};
use crate::report::CheckReport;
use crate::rng::SplitMix64;

pub const SUITES: [&str; 9] =
    ["pair_axioms", "hybrid", "contragredience", "kernel", "kirillov", "pseudo", "decomposition", "connection", "diffop"];

#[derive(Debug, Clone, Copy)]
pub struct SuiteParams {
    pub samples: usize,
    pub seed: u64,
    pub range: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub passed: bool,
    pub checked: usize,
    pub failed: usize,
    pub checks: Vec<CheckReport>,
    /// Convention-sensitive findings; never affect `passed`.
    pub verdicts: BTreeMap<String, Value>,
}

impl SuiteOutcome {
    fn new(suite: &str, checks: Vec<CheckReport>, verdicts: BTreeMap<String, Value>) -> Self {
        Self {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checked: checks.iter().map(|c| c.checked).sum(),
            failed: checks.iter().map(|c| c.failed).sum(),
            checks,
            verdicts,
        }
    }
}

/// Seed of the random stream for dimension `n`.
fn stream_seed(seed: u64, n: usize) -> u64 {
    seed.wrapping_add((n as u64) << 32)
}

fn sample_rng(params: &SuiteParams, n: usize, i: usize) -> SplitMix64 {
    SplitMix64::for_sample(stream_seed(params.seed, n), i as u64)
}

fn random_pair(g: &mut SplitMix64, n: usize, range: u64) -> MatrixPair {
    MatrixPair::new(g.mat(n, range), g.mat(n, range)).expect("same n")
}

fn parallel_reports(
    name: String,
    params: &SuiteParams,
    n: usize,
    f: impl Fn(&mut SplitMix64, usize) -> CheckReport + Sync,
) -> CheckReport {
    let parts: Vec<CheckReport> = (0..params.samples)
        .into_par_iter()
        .map(|i| f(&mut sample_rng(params, n, i), i))
        .collect();
    CheckReport::merged(name, parts)
}

fn hybrid_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let mut checks = Vec::new();
    for &n in ns {
        checks.push(parallel_reports(format!("pair hybrids n={n}"), params, n, |g, i| {
            let p = random_pair(g, n, params.range);
            let h = hybrid_from_pair(&p).expect("annihilator is closed");
            let mut r = verify_hybrid(&h, i as u64);
            r.absorb(double_kv(&h).check_jacobi());
            if n >= 2 && p.a().is_invertible() {
                r.absorb(morphism_verify(&p).expect("invertible A").check());
            }
            let (c, d) = (g.invertible_mat(n, params.range), g.invertible_mat(n, params.range));
            r.absorb(transport_check(&p, &c, &d).expect("invertible C, D"));
            r
        }));
        checks.push(parallel_reports(format!("centralizer hybrids n={n}"), params, n, |g, i| {
            let h = centralizer_hybrid(&g.mat(n, params.range)).expect("centralizer is closed");
            let mut r = verify_hybrid(&h, i as u64);
            r.absorb(double_kv(&h).check_jacobi());
            r
        }));
    }
    let mut verdicts = BTreeMap::new();
    for &n in ns {
        let h = centralizer_hybrid(&Mat::identity(n)).expect("full matrix algebra");
        let report = double_kv(&h).check_jacobi();
        verdicts.insert(
            format!("double_jacobi_full_matrix_hybrid_n{n}"),
            json!({"holds": report.passed, "failed_triples": report.failed, "checked_triples": report.checked}),
        );
    }
    SuiteOutcome::new("hybrid", checks, verdicts)
}

fn contragredience_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut verdicts = BTreeMap::new();
    for &n in ns {
        checks.push(verify_contragredience(n, params.samples, stream_seed(params.seed, n), params.range));
        if n >= 2 {
            for c in PairingConvention::ALL {
                checks.push(build_r(n, c).expect("n >= 2").check_adjointness());
            }
            let v = r_squared_verdicts(n).expect("n >= 2");
            verdicts.insert(format!("r_squared_n{n}"), serde_json::to_value(v).expect("serializable"));
        }
    }
    SuiteOutcome::new("contragredience", checks, verdicts)
}

fn kernel_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let checks = ns
        .iter()
        .map(|&n| {
            parallel_reports(format!("omega kernel n={n}"), params, n, |g, _| {
                omega_kernel_crosscheck(&random_pair(g, n, params.range)).check
            })
        })
        .collect();
    SuiteOutcome::new("kernel", checks, BTreeMap::new())
}

fn kirillov_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let checks = ns
        .iter()
        .map(|&n| {
            parallel_reports(format!("kirillov n={n}"), params, n, |g, i| {
                let p = MatrixPair::new(g.invertible_mat(n, params.range), g.mat(n, params.range)).expect("same n");
                kirillov_crosscheck(&p, 1, i as u64, params.range).expect("invertible A").check
            })
        })
        .collect();
    let verdicts = BTreeMap::from([("sign".to_string(), json!(kirillov_sign()))]);
    SuiteOutcome::new("kirillov", checks, verdicts)
}

fn random_point(g: &mut SplitMix64, n: usize, range: u64) -> W2Point {
    W2Point::new(g.mat(n, range), g.mat(n, range)).expect("same n")
}

fn pseudo_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let mut checks = Vec::new();
    for &n in ns {
        let seed = stream_seed(params.seed, n);
        checks.push(verify_pseudoalgebra(n, params.samples, seed, params.range));
        checks.push(verify_pseudohybrid_compat(n, params.samples, seed, params.range));
        checks.push(parallel_reports(format!("conservation n={n}"), params, n, |g, _| {
            let p = random_point(g, n, params.range);
            let x = g.mat(n, params.range);
            let (lambda, mu) = loop {
                let (l, m): (Rational, Rational) = (g.rational(params.range), g.rational(params.range));
                if !(l == Rational::from_integer(0.into()) && m == Rational::from_integer(0.into())) {
                    break (l, m);
                }
            };
            conservation_and_coadjoint_check(&p, &lambda, &mu, &x).expect("nonzero (lambda, mu)").check
        }));
    }
    let c = conventions();
    let verdicts = BTreeMap::from([
        ("commutator_sign".to_string(), json!(c.commutator_sign)),
        ("a_bracket_sign".to_string(), json!(c.a_bracket_sign)),
        ("literal_second_bracket_orientation_holds".to_string(), json!(literal_double_prime_orientation_holds())),
    ]);
    SuiteOutcome::new("pseudo", checks, verdicts)
}

fn decomposition_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut verdicts = BTreeMap::new();
    for &n in ns {
        checks.push(parallel_reports(format!("decomposition n={n}"), params, n, |g, i| {
            let p = W2Point::new(g.invertible_mat(n, params.range), g.invertible_mat(n, params.range)).expect("same n");
            let d = decomposition_check(&p);
            let mut r = CheckReport::new(format!("sample {i}"));
            r.record(d.direct && d.equal, || format!("dims {:?}, sum {}, gl2 {}", d.dims(), d.sum.dim(), d.gl2_tangent.dim()));
            r
        }));
        let singular: Vec<bool> = (0..params.samples)
            .into_par_iter()
            .map(|i| {
                let mut g = sample_rng(params, n, i);
                let mut a = g.mat(n, params.range);
                for r in 0..n {
                    a.set(r, 0, Rational::from_integer(0.into()));
                }
                let d = decomposition_check(&W2Point::new(a, g.mat(n, params.range)).expect("same n"));
                d.direct && d.equal
            })
            .collect();
        verdicts.insert(
            format!("singular_a_regime_n{n}"),
            json!({"samples": singular.len(), "direct_and_equal": singular.iter().filter(|&&b| b).count()}),
        );
    }
    let fixture = W2Point::new(Mat::from_i64(&[&[1, 2], &[3, 4]]), Mat::from_i64(&[&[5, 6], &[7, 8]])).expect("2 x 2");
    let d = decomposition_check(&fixture);
    verdicts.insert(
        "fixture_1234_5678".to_string(),
        json!({"dims": d.dims(), "sum_dim": d.sum.dim(), "gl2_dim": d.gl2_tangent.dim(), "direct": d.direct, "equals_gl2": d.equal}),
    );
    SuiteOutcome::new("decomposition", checks, verdicts)
}

fn connection_suite(params: &SuiteParams, ns: &[usize]) -> SuiteOutcome {
    let checks = ns
        .iter()
        .map(|&n| {
            parallel_reports(format!("connection n={n}"), params, n, |g, i| {
                let range = params.range;
                let p = random_point(g, n, range);
                let ann = annihilator(&p.pair());
                let (z1, z2) = (g.mat(n, range), g.mat(n, range));
                let z0 = random_element(g, &ann, n, range);
                let x = random_element(g, &ann, n, range);
                let residual = parallel_transport_residual(&p, &z1, &z2, &z0, &x).expect("annihilator elements");
                let mut r = CheckReport::new(format!("sample {i}"));
                r.record(residual.is_zero(), || format!("transport residual {residual:?}"));
                r.absorb(leaf_preservation_check(&p, &x).expect("annihilator element"));
                r
            })
        })
        .collect();
    SuiteOutcome::new("connection", checks, BTreeMap::new())
}

/// Basis coefficients, membership and the commutation table at fixed sizes.
fn diffop_suite() -> SuiteOutcome {
    const DEGREE: usize = 24;
    let mut coefficients = CheckReport::new("e_n coefficients");
    let mut membership = CheckReport::new("e_n membership");
    for n in 0..=8usize {
        let e = basis_element(n as i64, DEGREE).expect("n <= D");
        for j in 0..=DEGREE {
            for r in 0..=DEGREE {
                let expected = if r == j + n { f_coefficient(n, j) } else { Rational::from_integer(0.into()) };
                coefficients.record(*e.entry(r, j) == expected, || format!("e_{n} entry ({r},{j})"));
            }
        }
        membership.record(membership_check(&e).member, || format!("e_{n} is not a member"));
    }
    let mut pde = CheckReport::new("symbol equation kernel");
    pde.record(pde_kernel_dim(10) == 0, || "nonzero polynomial solution of degree <= 10".into());
    let table = commutation_table(6, 14).expect("D >= 2M + 2");
    let verdicts = BTreeMap::from([("diffop_signs".to_string(), serde_json::to_value(table.verdict).expect("serializable"))]);
    SuiteOutcome::new("diffop", vec![coefficients, membership, pde, table.check], verdicts)
}

pub fn run_suite(name: &str, params: &SuiteParams, ns: &[usize]) -> Option<SuiteOutcome> {
    Some(match name {
        "pair_axioms" => SuiteOutcome::new(
            "pair_axioms",
            ns.iter().map(|&n| verify_pair_axioms(n, params.samples, stream_seed(params.seed, n), params.range)).collect(),
            BTreeMap::new(),
        ),
        "hybrid" => hybrid_suite(params, ns),
        "contragredience" => contragredience_suite(params, ns),
        "kernel" => kernel_suite(params, ns),
        "kirillov" => kirillov_suite(params, ns),
        "pseudo" => pseudo_suite(params, ns),
        "decomposition" => decomposition_suite(params, ns),
        "connection" => connection_suite(params, ns),
        "diffop" => diffop_suite(),
        _ => return None,
    })
}
