//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use shiftkit::catalog::{
    cycle_adjacency, cycle_filter, loose_star, star_adjacency, star_filter, LOOSE_STAR_EIGENVALUES,
};
use shiftkit::conversion::{
    convert_to_shift_enabled, recover_original, DescriptionMode, PerturbationPolicy, SparsityPattern,
};
use shiftkit::corpus::seeded_corpus;
use shiftkit::exact::{char_poly, eval_matrix_poly, min_poly, poly_divides, rat, ratio, Polynomial, RationalMatrix};
use shiftkit::locality::{apply_filter_locally, GraphSignal};
use shiftkit::pattern::{
    certify_power_equality, commutant_with_pattern, exists_shift_enabled_with_pattern, laplacian_variant,
    random_weighting, trial_rng, ImpossibilityCertificate, SearchOutcome,
};
use shiftkit::shift::{commutes, filter_family_member, is_shift_enabled, represent_as_polynomial, EntryPair};
use shiftkit::spectral::{has_distinct_eigenvalues, symm_eig, symm_eig_real, ToleranceConfig};

/// Tolerances the criteria are stated against.
const EIGENVALUE_TOL_LOOSE_STAR: f64 = 5e-5;
const EIGENVALUE_TOL_CYCLE: f64 = 1e-9;
const RECOVERY_RESIDUAL_TOL: f64 = 1e-6;
const COMMUTE_TOL: f64 = 1e-9;
const ANALYZE_BUDGET: Duration = Duration::from_secs(1);
const STRICT_STAR_BUDGET: Duration = Duration::from_secs(10);
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn cfg() -> ToleranceConfig {
    let cfg = ToleranceConfig::default();
    assert_eq!(cfg.commute_tol, COMMUTE_TOL);
    cfg
}

fn criterion_1() -> Check {
    let g = fixture("acceptance", "star.edges", STAR_EDGES);
    let start = Instant::now();
    let out = shiftkit(&["analyze", g.to_str().unwrap()]);
    let elapsed = start.elapsed();
    ensure(out.status.success(), "analyze failed")?;
    let v = json(&out);
    let shift = &v["shift"];
    ensure(shift["char_poly"]["coefficients"] == serde_json::json!(["0", "0", "0", "-4", "0", "1"]), "p_S")?;
    ensure(shift["min_poly"]["coefficients"] == serde_json::json!(["0", "-4", "0", "1"]), "m_S")?;
    ensure(shift["shift_enabled"] == false, "shift_enabled")?;
    ensure(elapsed < ANALYZE_BUDGET, "runtime")?;
    Ok(format!("p = λ^5 - 4λ^3, m = λ^3 - 4λ, {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Check {
    let (s, h) = (star_adjacency(), star_filter());
    ensure(commutes(&h, &s).map_err(|e| e.to_string())?, "commutes")?;
    ensure((&h * &s).is_zero() && (&s * &h).is_zero(), "HS = SH = 0")?;
    let r = represent_as_polynomial(&h, &s).map_err(|e| e.to_string())?;
    ensure(!r.is_representable(), "representable")?;
    ensure(r.replay(&h, &s), "witness replay")?;
    ensure(r.witness_pair().map(|p| p.one_based()) == Some(((2, 3), (2, 4))), "witness pair")?;
    Ok("witness pair (2,3)/(2,4) replays".into())
}

fn criterion_3() -> Check {
    let cfg = cfg();
    let (st, h) = (loose_star(), star_filter());
    ensure(is_shift_enabled(&st, &cfg).shift_enabled, "shift-enabled")?;
    let eig = symm_eig(&st, &cfg).map_err(|e| e.to_string())?;
    let err = eig.eigenvalues.iter().zip(LOOSE_STAR_EIGENVALUES).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= EIGENVALUE_TOL_LOOSE_STAR, "eigenvalues")?;
    ensure(commutes(&h, &st).map_err(|e| e.to_string())?, "commutes")?;
    let r = represent_as_polynomial(&h, &st).map_err(|e| e.to_string())?;
    let p = r.coefficients().ok_or("not representable")?;
    ensure(eval_matrix_poly(p, &st) == h, "reconstruction")?;
    Ok(format!("max eigenvalue error {err:.1e}, H = {p}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let s = star_adjacency();
    let pattern = SparsityPattern::of_matrix(&s, DescriptionMode::Strict);
    let report = exists_shift_enabled_with_pattern(&pattern, None, 100, 1).map_err(|e| e.to_string())?;
    match &report.outcome {
        SearchOutcome::Impossible(
            cert @ ImpossibilityCertificate::RankDeficiency { structural_rank, kernel_multiplicity, .. },
        ) => {
            ensure(*structural_rank == 2, "structural rank")?;
            ensure(*kernel_multiplicity >= 3, "kernel multiplicity")?;
            ensure(cert.replay(None), "certificate replay")?;
        }
        other => return Err(format!("unexpected outcome {other:?}")),
    }
    let worst = (0..1000u64)
        .map(|t| min_poly(&random_weighting(&pattern, &mut trial_rng(4, t))).degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    ensure(worst <= 3, "seeded weightings")?;
    let elapsed = start.elapsed();
    ensure(elapsed < STRICT_STAR_BUDGET, "runtime")?;
    Ok(format!("rank 2, 1000 weightings max deg {worst}, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_5() -> Check {
    let cfg = cfg();
    let (s, h) = (cycle_adjacency(), cycle_filter());
    let eig = symm_eig(&s, &cfg).map_err(|e| e.to_string())?;
    let err = eig.eigenvalues.iter().zip([-2.0, 0.0, 0.0, 2.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= EIGENVALUE_TOL_CYCLE, "eigenvalues")?;
    ensure(!is_shift_enabled(&s, &cfg).shift_enabled, "shift_enabled")?;
    ensure(commutes(&h, &s).map_err(|e| e.to_string())?, "commutes")?;
    let pattern = SparsityPattern::of_matrix(&s, DescriptionMode::Loose);
    let family = commutant_with_pattern(&h, &pattern).map_err(|e| e.to_string())?;
    ensure(family.dimension() == 2, "family dimension")?;
    ensure(family.contains(&RationalMatrix::identity(4)) && family.contains(&s), "family is {aI + bS'}")?;
    let pair = EntryPair { first: (0, 1), second: (0, 3) };
    let cert = certify_power_equality(&h, &family, Some(&[pair])).ok_or("no certificate")?;
    match &cert {
        ImpossibilityCertificate::PowerEquality { power_values, .. } => ensure(power_values.len() == 4, "k = 0..3")?,
        _ => return Err("wrong certificate kind".into()),
    }
    ensure(cert.replay(Some(&h)), "certificate replay")?;
    Ok(format!("max eigenvalue error {err:.1e}, family dimension 2, k = 0..3 replays"))
}

fn criterion_6() -> Check {
    let cfg = cfg();
    let a = laplacian_variant(&cycle_adjacency(), Some(&cycle_filter()), &cfg, 100, 1).map_err(|e| e.to_string())?;
    let expected = vec![rat(0), rat(2), rat(2), rat(4)];
    ensure(a.exact_eigenvalues.as_ref() == Some(&expected), "exact eigenvalues")?;
    let p = char_poly(&a.laplacian);
    ensure(expected.iter().all(|l| p.eval(l) == rat(0)), "roots of p")?;
    ensure(!a.report.shift_enabled, "shift_enabled")?;
    ensure(a.filter_commutes == Some(true), "commutes")?;
    ensure(a.filter_representable == Some(false), "representable")?;
    let g = fixture("acceptance", "cycle.edges", CYCLE_EDGES);
    let cli = json(&shiftkit(&["analyze", g.to_str().unwrap(), "--kind", "laplacian"]));
    ensure(cli["shift"]["shift_enabled"] == false, "CLI laplacian verdict")?;
    Ok("eigenvalues {0, 2, 2, 4} exactly".into())
}

fn criterion_7() -> Check {
    let cfg = cfg();
    let (s, h) = (star_adjacency(), star_filter());
    let out = convert_to_shift_enabled(&s, &h, &PerturbationPolicy::default(), &cfg).map_err(|e| e.to_string())?;
    let eig = symm_eig_real(&out.s_tilde, &cfg).map_err(|e| e.to_string())?;
    ensure(has_distinct_eigenvalues(&eig, &cfg), "distinct eigenvalues")?;
    ensure(out.commutes_with_h && out.commutator_norm <= COMMUTE_TOL, "commutator")?;
    let rec = recover_original(&s, &out.s_tilde, &cfg).map_err(|e| e.to_string())?;
    ensure(rec.residual <= RECOVERY_RESIDUAL_TOL, "recovery residual")?;
    ensure(!out.strict_same_graph, "strict_same_graph")?;
    Ok(format!("‖HS̃ − S̃H‖ = {:.1e}, recovery residual {:.1e}", out.commutator_norm, rec.residual))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let cfg = cfg();
    let corpus = seeded_corpus(8, 210, 8);
    ensure(corpus.len() >= 200, "corpus size")?;
    let mut enabled = 0;
    for e in &corpus {
        let s = &e.matrix;
        let id = e.index;
        let report = is_shift_enabled(s, &cfg);
        let d = report.min_poly.degree().unwrap();
        // (a) forward: the symmetric commutant is all polynomials; converse:
        // it has a member that is not one.
        let family = commutant_with_pattern(s, &SparsityPattern::complete(s.dim(), DescriptionMode::Loose))
            .map_err(|e| e.to_string())?;
        let mut witness = None;
        for h in &family.basis {
            let r = represent_as_polynomial(h, s).map_err(|e| e.to_string())?;
            if !r.is_representable() {
                witness = Some((h, r));
                break;
            }
        }
        if report.shift_enabled {
            enabled += 1;
            ensure(witness.is_none() && family.dimension() == s.dim(), &format!("(a) forward, entry {id}"))?;
        } else {
            let (h, r) = witness.ok_or(format!("(a) converse, entry {id}"))?;
            ensure(r.replay(h, s) && family.dimension() > d, &format!("(a) replay, entry {id}"))?;
        }
        // (b)
        let p = &report.char_poly;
        ensure(poly_divides(&report.min_poly, p).unwrap_or(false), &format!("(b) m | p, entry {id}"))?;
        ensure(eval_matrix_poly(&report.min_poly, s).is_zero(), &format!("(b) m(S) = 0, entry {id}"))?;
        ensure(report.consistent(), &format!("(b) spectral cross-check, entry {id}"))?;
        // (d)
        let q = Polynomial::new((0..=id % 4).map(|k| ratio(2 * k as i64 - 3, 5)).collect());
        let x = GraphSignal::new((0..s.dim()).map(|i| ratio(i as i64 - 2, 3)).collect());
        let (y, _) = apply_filter_locally(s, &q, &x).map_err(|e| e.to_string())?;
        ensure(y.values == eval_matrix_poly(&q, s).mul_vec(&x.values).unwrap(), &format!("(d) entry {id}"))?;
    }
    ensure(enabled > 0 && enabled < corpus.len(), "corpus mixes both verdicts")?;
    // (c)
    let mut rng = trial_rng(8, 1 << 20);
    for i in 0..100 {
        let (s, h) = if i % 2 == 0 { (star_adjacency(), star_filter()) } else { (cycle_adjacency(), cycle_filter()) };
        let alpha = loop {
            let a = shiftkit::pattern::random_weight(&mut rng);
            if a != rat(0) {
                break a;
            }
        };
        let q = Polynomial::new((0..i % 5).map(|_| shiftkit::pattern::random_weight(&mut rng)).collect());
        let f = filter_family_member(&s, &h, &alpha, &q).map_err(|e| e.to_string())?;
        ensure(commutes(&f, &s).unwrap_or(false), &format!("(c) member {i} commutes"))?;
        let r = represent_as_polynomial(&f, &s).map_err(|e| e.to_string())?;
        ensure(!r.is_representable(), &format!("(c) member {i} non-representable"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < PROPERTY_BUDGET, "runtime")?;
    Ok(format!(
        "{} matrices ({enabled} shift-enabled), 100 family members, {:.1} s",
        corpus.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_9() -> Check {
    let out = shiftkit(&["--strict-exit", "verify-paper"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let items = text.lines().filter(|l| l.starts_with('[')).count();
    let failed = text.lines().filter(|l| l.starts_with("[FAIL]")).count();
    ensure(out.status.success() && failed == 0 && items >= 7, &format!("{failed} of {items} items failed"))?;
    Ok(format!("{items} items, 0 failures"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("star counterexample", criterion_1),
        ("star filter", criterion_2),
        ("loose star success", criterion_3),
        ("strict star impossibility", criterion_4),
        ("cycle counterexample", criterion_5),
        ("Laplacian variant", criterion_6),
        ("conversion audit", criterion_7),
        ("property suites", criterion_8),
        ("verify-paper", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
