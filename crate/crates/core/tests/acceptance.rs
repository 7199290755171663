//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! always reach the console.
//!
//! Criterion 11 is a known red: the tangent decomposition fails at invertible
//! points with `A + B` singular or with a non-semisimple pencil, including the
//! stated fixture. The run still fails if any other criterion is red or if 11
//! turns green.

use std::process::{Command, ExitCode};
use std::time::Instant;

use opair::contragredient::{
    analyze_r, build_r, kirillov_crosscheck, kirillov_sign, omega_kernel_crosscheck, verify_contragredience,
    wedge_basis, PairingConvention,
};
use opair::diffop::{basis_element, commutation_table, f_coefficient, membership_check, BracketKind};
use opair::hybrid::{centralizer_hybrid, double_kv, hybrid_from_pair, morphism_verify, triviality_report, verify_hybrid, LieHybrid};
use opair::isotopic::{
    annihilator, closed_form_generators, invariants, mixed_identity_sides, verify_pair_axioms, MatrixPair, QuotientClass,
};
use opair::linalg::{q, Mat, Rational, Subspace};
use opair::pseudo_orbit::{
    conservation_and_coadjoint_check, decomposition_check, leaf_preservation_check, parallel_transport_residual,
    random_element, verify_pseudoalgebra, verify_pseudohybrid_compat, W2Point,
};
use opair::report::CheckReport;
use opair::rng::SplitMix64;

const SEED: u64 = 20_240_601;
const RANGE: u64 = 9;
const KNOWN_RED: &[u32] = &[11];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_report(r: &CheckReport, extra: impl Into<String>) -> Self {
        let mut detail = format!("{} checks, {} failed", r.checked, r.failed);
        let extra = extra.into();
        if !extra.is_empty() {
            detail.push_str("; ");
            detail.push_str(&extra);
        }
        if let Some(c) = r.counterexamples.first() {
            detail.push_str(&format!("; first failure: {c}"));
        }
        Outcome { passed: r.passed, detail }
    }
}

fn rng(tag: u64, n: usize, i: usize) -> SplitMix64 {
    SplitMix64::for_sample(SEED ^ (tag << 40) ^ ((n as u64) << 32), i as u64)
}

fn random_pair(g: &mut SplitMix64, n: usize) -> MatrixPair {
    MatrixPair::new(g.mat(n, RANGE), g.mat(n, RANGE)).unwrap()
}

/// 2x2 pairs: annihilator dimension, trivial or proportional brackets, and
/// the closed-form generators. Every tenth pair is made proportional.
fn closed_forms_2x2() -> Outcome {
    let mut r = CheckReport::new("2x2 pairs");
    let mut proportional = 0;
    for i in 0..500 {
        let mut g = rng(1, 2, i);
        let p = if i % 10 == 0 {
            let a = g.mat(2, RANGE);
            let c = g.rational(RANGE);
            MatrixPair::new(a.clone(), a.scale(&c)).unwrap()
        } else {
            random_pair(&mut g, 2)
        };
        let inv = invariants(&p);
        let h = hybrid_from_pair(&p).unwrap();
        let t = triviality_report(&h);
        if p.is_proportional() {
            proportional += 1;
            r.record(inv.a == 4 && t.proportional, || format!("proportional pair {i}: a = {}", inv.a));
        } else {
            r.record(inv.a == 2 && t.trivial, || format!("pair {i}: a = {}, trivial = {}", inv.a, t.trivial));
        }
        let ann = annihilator(&p);
        let (m1, m2) = closed_form_generators(&p).unwrap();
        r.record(ann.contains(m1.as_slice()).unwrap() && ann.contains(m2.as_slice()).unwrap(), || {
            format!("pair {i}: closed forms outside the annihilator")
        });
        let span = Subspace::span(4, &[m1.to_vec(), m2.to_vec()]).unwrap();
        if span.dim() == 2 {
            r.record(span == ann, || format!("pair {i}: independent closed forms do not span"));
        }
    }
    Outcome::from_report(&r, format!("{proportional} proportional pairs"))
}

fn quotient_dimension() -> Outcome {
    let mut r = CheckReport::new("quotient dimension");
    for n in [2, 3] {
        for i in 0..500 {
            let inv = invariants(&random_pair(&mut rng(2, n, i), n));
            r.record(inv.classification.is_some(), || format!("n={n} pair {i}: a0 = {}", inv.a0));
        }
    }
    let fixture = invariants(&MatrixPair::new(Mat::unit(2, 0, 0), Mat::unit(2, 0, 1)).unwrap());
    r.record(fixture.a0 == 2 && fixture.classification == Some(QuotientClass::Okubo), || {
        format!("(E11,E12): {fixture:?}")
    });
    Outcome::from_report(&r, "(E11,E12) has a0 = 2")
}

fn form_kernel() -> Outcome {
    let mut r = CheckReport::new("form kernel");
    for n in [2, 3] {
        for i in 0..200 {
            let k = omega_kernel_crosscheck(&random_pair(&mut rng(3, n, i), n));
            r.record(k.kernel_matches_ac && k.codim % 2 == 0 && k.check.passed, || format!("n={n} pair {i}: {k:?}"));
        }
    }
    Outcome::from_report(&r, "")
}

fn four_expressions() -> Outcome {
    let parts: Vec<CheckReport> = (1..=4).map(|n| verify_contragredience(n, 250, SEED + n as u64, RANGE)).collect();
    Outcome::from_report(&CheckReport::merged("four expressions", parts), "n = 1..4, 250 tuples each")
}

fn mixed_identities() -> Outcome {
    let mut parts: Vec<CheckReport> = (1..=3).map(|n| verify_pair_axioms(n, 200, SEED + 5 * n as u64, RANGE)).collect();
    let mut fixture = CheckReport::new("fixture");
    let (e11, e12, id) = (Mat::unit(2, 0, 0), Mat::unit(2, 0, 1), Mat::identity(2));
    for b in [Mat::zeros(2), Mat::from_i64(&[&[1, 2], &[3, 4]]), e12.clone()] {
        let (l, rr) = mixed_identity_sides(&e11, &e12, &id, &id, &b);
        fixture.record(l.is_zero() && rr.is_zero(), || format!("(E11,E12,I,I,{b:?}): {l:?} vs {rr:?}"));
    }
    parts.push(fixture);
    Outcome::from_report(&CheckReport::merged("mixed identities", parts), "200 tuples per n = 1..3 plus the vanishing fixture")
}

fn criterion6_hybrids() -> Vec<(String, LieHybrid)> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for i in 0..100 {
            out.push((format!("pair n={n} #{i}"), hybrid_from_pair(&random_pair(&mut rng(6, n, i), n)).unwrap()));
        }
        for i in 0..50 {
            let f = rng(60, n, i).mat(n, RANGE);
            out.push((format!("centralizer n={n} #{i}"), centralizer_hybrid(&f).unwrap()));
        }
    }
    out
}

fn hybrid_identities(hybrids: &[(String, LieHybrid)]) -> Outcome {
    let mut r = CheckReport::new("hybrids");
    for (i, (name, h)) in hybrids.iter().enumerate() {
        let v = verify_hybrid(h, i as u64);
        r.record(v.passed, || format!("{name}: {:?}", v.counterexamples));
    }
    let nontrivial = hybrids.iter().filter(|(_, h)| !triviality_report(h).trivial).count();
    Outcome::from_report(&r, format!("{} hybrids, {nontrivial} with nonzero brackets", hybrids.len()))
}

fn double_jacobi(hybrids: &[(String, LieHybrid)]) -> Outcome {
    let mut r = CheckReport::new("double");
    for (name, h) in hybrids {
        let j = double_kv(h).check_jacobi();
        r.record(j.passed, || format!("{name}: {:?}", j.counterexamples.first()));
    }
    Outcome::from_report(&r, "")
}

fn double_jacobi_full_matrix_verdict() -> String {
    let mut parts = Vec::new();
    for n in [2, 3] {
        let j = double_kv(&centralizer_hybrid(&Mat::identity(n)).unwrap()).check_jacobi();
        parts.push(format!("n={n}: Jacobi {} ({} of {} triples fail)", if j.passed { "holds" } else { "fails" }, j.failed, j.checked));
    }
    format!("double of the full matrix hybrid (F = I, nonzero brackets): {}", parts.join(", "))
}

fn centralizer_morphisms() -> Outcome {
    let mut r = CheckReport::new("morphisms");
    for n in [2, 3] {
        for i in 0..100 {
            let mut g = rng(8, n, i);
            let p = MatrixPair::new(g.invertible_mat(n, RANGE), g.mat(n, RANGE)).unwrap();
            let m = morphism_verify(&p).unwrap();
            r.record(m.check().passed, || format!("n={n} pair {i}: {m:?}"));
        }
    }
    let singular = morphism_verify(&MatrixPair::new(Mat::unit(2, 0, 0), Mat::unit(2, 0, 1)).unwrap()).unwrap();
    Outcome::from_report(
        &r,
        format!(
            "singular (E11,E12): X -> XA epimorphic = {}, X -> AX target found = {}",
            singular.right.is_epimorphism(),
            singular.left.target_found
        ),
    )
}

fn kirillov() -> Outcome {
    let mut r = CheckReport::new("kirillov");
    for n in [2, 3] {
        for i in 0..100 {
            let mut g = rng(9, n, i);
            let p = MatrixPair::new(g.invertible_mat(n, RANGE), g.mat(n, RANGE)).unwrap();
            r.absorb(kirillov_crosscheck(&p, 1, i as u64, RANGE).unwrap().check);
        }
    }
    let sign = kirillov_sign();
    r.record(sign == -1, || format!("sign {sign}"));
    Outcome::from_report(&r, format!("sign = {sign}"))
}

fn pseudo_identities() -> Outcome {
    let mut parts = Vec::new();
    for n in [2, 3] {
        parts.push(verify_pseudoalgebra(n, 100, SEED + 10 * n as u64, RANGE));
        parts.push(verify_pseudohybrid_compat(n, 100, SEED + 10 * n as u64, RANGE));
    }
    Outcome::from_report(&CheckReport::merged("pseudo", parts), "100 points per n, 5 (lambda, mu) each")
}

fn tangent_decomposition() -> Outcome {
    let mut r = CheckReport::new("decomposition");
    let mut sum_singular = 0;
    for n in [2, 3] {
        for i in 0..100 {
            let mut g = rng(11, n, i);
            let p = W2Point::new(g.invertible_mat(n, RANGE), g.invertible_mat(n, RANGE)).unwrap();
            let d = decomposition_check(&p);
            if !(d.direct && d.equal) && !(&p.a + &p.b).is_invertible() {
                sum_singular += 1;
            }
            r.record(d.direct && d.equal, || {
                format!("n={n} point {i}: dims {:?} sum {} tangent {}", d.dims(), d.sum.dim(), d.gl2_tangent.dim())
            });
        }
    }
    let fixture = W2Point::new(Mat::from_i64(&[&[1, 2], &[3, 4]]), Mat::from_i64(&[&[5, 6], &[7, 8]])).unwrap();
    let d = decomposition_check(&fixture);
    r.record(d.dims() == [2, 2, 2] && d.sum.dim() == 6, || {
        format!("fixture: dims {:?} but sum {}", d.dims(), d.sum.dim())
    });
    let random_failures = r.failed - usize::from(!(d.dims() == [2, 2, 2] && d.sum.dim() == 6));
    Outcome::from_report(
        &r,
        format!(
            "{random_failures} random failures ({sum_singular} with A + B singular); fixture dims {:?}, sum {}, direct {}",
            d.dims(),
            d.sum.dim(),
            d.direct
        ),
    )
}

fn connection() -> Outcome {
    let mut r = CheckReport::new("connection");
    for n in [2, 3] {
        for i in 0..100 {
            let mut g = rng(12, n, i);
            let p = W2Point::new(g.mat(n, RANGE), g.mat(n, RANGE)).unwrap();
            let ann = annihilator(&p.pair());
            let (z1, z2) = (g.mat(n, RANGE), g.mat(n, RANGE));
            let z0 = random_element(&mut g, &ann, n, RANGE);
            let x = random_element(&mut g, &ann, n, RANGE);
            let res = parallel_transport_residual(&p, &z1, &z2, &z0, &x).unwrap();
            r.record(res.is_zero(), || format!("n={n} config {i}: residual {res:?}"));
            r.absorb(leaf_preservation_check(&p, &x).unwrap());
        }
    }
    Outcome::from_report(&r, "")
}

fn differential_operators() -> (Outcome, String) {
    let mut r = CheckReport::new("diffop");
    for n in 0..=8usize {
        let e = basis_element(n as i64, 24).unwrap();
        for j in 0..=24 {
            for row in 0..=24 {
                let expected = if row == j + n { f_coefficient(n, j) } else { q(0) };
                r.record(*e.entry(row, j) == expected, || format!("e_{n} ({row},{j})"));
            }
        }
        r.record(membership_check(&e).member, || format!("e_{n} membership"));
    }
    let t = commutation_table(6, 14).unwrap();
    r.absorb(t.check.clone());
    let x10 = t.cell(1, 0, BracketKind::X).unwrap().expansion.clone();
    let d10 = t.cell(1, 0, BracketKind::D).unwrap().expansion.clone();
    r.record(x10 == Some(vec![(2, q(-1))]), || format!("[e1,e0]_x = {x10:?}"));
    r.record(d10 == Some(vec![(0, q(-1))]), || format!("[e1,e0]_d = {d10:?}"));
    let v = t.verdict;
    let verdict = format!(
        "observed signs (m odd n even / m even n odd): x {:?}/{:?}, d {:?}/{:?}; published +/-: signs match = {}, +1 shift on the primed (d) bracket = {}",
        v.x_bracket.odd_even, v.x_bracket.even_odd, v.d_bracket.odd_even, v.d_bracket.even_odd,
        v.signs_match_published, v.index_shift_matches_published
    );
    (Outcome::from_report(&r, "n <= 8 at D = 24, table m,n <= 6"), verdict)
}

fn r_operators() -> (Outcome, Vec<String>) {
    let mut r = CheckReport::new("R operators");
    let mut lines = Vec::new();
    for n in [2, 3] {
        for c in PairingConvention::ALL {
            let ops = build_r(n, c).unwrap();
            r.absorb(ops.check_adjointness());
            let v = analyze_r(&ops.r1);
            lines.push(format!(
                "n={n} {c:?}: R1^2 = -id {}, R1^2 = {} id, eigenspaces +1/-1/0 = {}/{}/{}",
                v.squares_to_minus_identity,
                v.scalar.as_deref().unwrap_or("(not scalar)"),
                v.eigenspace_dims.plus_one,
                v.eigenspace_dims.minus_one,
                v.eigenspace_dims.zero
            ));
        }
    }
    let ops = build_r(2, PairingConvention::Determinant).unwrap();
    let idx = wedge_basis(4).iter().position(|&w| w == (0, 2)).unwrap();
    let mut u = vec![q(0); 6];
    u[idx] = q(1);
    let image = ops.r1.matrix.mul_vec(&u).unwrap();
    r.record(image.iter().zip(&u).all(|(a, b)| *a == -b), || format!("R1(E11 ^ E12) = {image:?}"));
    (Outcome::from_report(&r, "adjointness under every convention; R1(E11 ^ E12) = -(E11 ^ E12)"), lines)
}

fn conservation() -> Outcome {
    let mut r = CheckReport::new("conservation");
    let mut projection_moves = 0;
    for n in [2, 3] {
        for i in 0..100 {
            let mut g = rng(15, n, i);
            let p = W2Point::new(g.mat(n, RANGE), g.mat(n, RANGE)).unwrap();
            let x = g.mat(n, RANGE);
            let lambda = g.nonzero_rational(RANGE);
            let mu: Rational = g.rational(RANGE);
            let c = conservation_and_coadjoint_check(&p, &lambda, &mu, &x).unwrap();
            projection_moves += usize::from(!c.projection_stationary);
            r.absorb(c.check);
        }
    }
    Outcome::from_report(&r, format!("lambda A + mu B moved at {projection_moves} of 200 points"))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_opair");
    let dir = tempfile::tempdir().unwrap();
    let mut r = CheckReport::new("cli");
    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, r#"{"n":2,"A":[[1,0],[0,0]],"B":[[0,1],[0,0]]}"#).unwrap();
    let out = Command::new(bin).args(["analyze", "--pair"]).arg(&pair).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    r.record(out.status.code() == Some(0), || format!("analyze exit {:?}", out.status.code()));
    r.record(
        doc["a"] == 2 && doc["a0"] == 2 && doc["classification"] == "okubo" && doc["hybrid"]["trivial"] == true,
        || format!("analyze fields: a={} a0={} class={} trivial={}", doc["a"], doc["a0"], doc["classification"], doc["hybrid"]["trivial"]),
    );

    let sweep = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args(["sweep", "--n", "2", "--count", "5", "--seed", "99", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, b1) = sweep("one.jsonl");
    let (c2, b2) = sweep("two.jsonl");
    r.record(c1 == Some(0) && c2 == Some(0) && !b1.is_empty() && b1 == b2, || "sweep reruns differ".into());

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":2,"A":[[1]],"B":[[1]]}"#).unwrap();
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let bad_code = code(&["analyze", "--pair", bad.to_str().unwrap()]);
    r.record(bad_code == Some(2), || format!("malformed input exit {bad_code:?}"));
    let unknown = code(&["verify", "--suite", "nonsense"]);
    r.record(unknown == Some(2), || format!("unknown suite exit {unknown:?}"));
    let small = code(&["difftable", "--max", "3", "--degree", "5"]);
    r.record(small == Some(2), || format!("small truncation exit {small:?}"));
    let ok = code(&["verify", "--suite", "kernel", "--n", "1", "--samples", "3"]);
    r.record(ok == Some(0), || format!("passing suite exit {ok:?}"));
    let violation = code(&["verify", "--suite", "decomposition", "--n", "2", "--samples", "100", "--seed", "42"]);
    r.record(violation == Some(1), || format!("violating suite exit {violation:?}"));
    Outcome::from_report(&r, "analyze fixture, byte-identical sweep, exit codes 0/1/2")
}

fn main() -> ExitCode {
    let start = Instant::now();
    let hybrids = criterion6_hybrids();
    let (diffop, sign_verdict) = differential_operators();
    let (r_ops, r_lines) = r_operators();
    let criteria: Vec<(u32, &str, Outcome)> = vec![
        (1, "2x2 annihilators and closed forms", closed_forms_2x2()),
        (2, "quotient dimension a0 in {0,1,2}", quotient_dimension()),
        (3, "form kernel equals annihilator, even codim", form_kernel()),
        (4, "four expressions of the 4-form agree", four_expressions()),
        (5, "mixed identities and Jacobi of pencil brackets", mixed_identities()),
        (6, "hybrid closure, Jacobi and six-term identity", hybrid_identities(&hybrids)),
        (7, "double algebra Jacobi on the same hybrids", double_jacobi(&hybrids)),
        (8, "annihilator to centralizer isomorphisms", centralizer_morphisms()),
        (9, "4-form as pulled-back Kirillov form", kirillov()),
        (10, "pseudoalgebra and pseudohybrid identities", pseudo_identities()),
        (11, "orbit tangent decomposition", tangent_decomposition()),
        (12, "connection parallel transport and leaves", connection()),
        (13, "d/dx, x hybrid basis and commutation table", diffop),
        (14, "R operators (reported)", r_ops),
        (15, "conserved combination and coadjoint tangent", conservation()),
        (16, "CLI contract", cli_contract()),
    ];

    let mut unexpected = Vec::new();
    for (id, name, o) in &criteria {
        let known = KNOWN_RED.contains(id);
        let tag = match (o.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known red, see decisions ledger)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected red)",
        };
        println!("[{id:>2}] {tag}: {name}: {}", o.detail);
        if o.passed == known {
            unexpected.push(*id);
        }
    }
    println!("     verdict: {}", double_jacobi_full_matrix_verdict());
    println!("     verdict: {sign_verdict}");
    for l in r_lines {
        println!("     verdict: {l}");
    }
    let passed = criteria.iter().filter(|c| c.2.passed).count();
    println!("{passed}/{} criteria pass in {:.1}s", criteria.len(), start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
