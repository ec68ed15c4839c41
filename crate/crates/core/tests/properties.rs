use proptest::prelude::*;
use shiftkit::catalog::{cycle_adjacency, cycle_filter, star_adjacency, star_filter};
use shiftkit::conversion::{describes_same_graph, DescriptionMode, SparsityPattern};
use shiftkit::corpus::{seeded_corpus, CorpusEntry, CorpusKind};
use shiftkit::exact::{
    char_poly, eval_matrix_poly, min_poly, nullspace_exact, nullspace_of_rows, parse_rational, poly_divides,
    power_rank, rank_exact, rat, ratio, Polynomial, Rational, RationalMatrix,
};
use shiftkit::io::report::{AnalysisReportDocument, PatternSearchSection};
use shiftkit::io::{format_matrix, parse_matrix};
use shiftkit::locality::{apply_filter_locally, GraphSignal};
use shiftkit::pattern::{commutant_with_pattern, exists_shift_enabled_with_pattern};
use shiftkit::real::RealMatrix;
use shiftkit::shift::{
    commutes, construct_nonrepresentable_filter, filter_family_member, is_shift_enabled, represent_as_polynomial,
    ConstructedFilter,
};
use shiftkit::spectral::{symm_eig, ToleranceConfig};

fn corpus() -> Vec<CorpusEntry> {
    seeded_corpus(2024, 240, 8)
}

/// Every `X` with `XS = SX`, by solving the n² unknowns directly.
fn brute_force_commutant(s: &RationalMatrix) -> Vec<RationalMatrix> {
    let n = s.dim();
    let var = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![rat(0); n * n];
            for k in 0..n {
                row[var(i, k)] += s.get(k, j);
                row[var(k, j)] -= s.get(i, k);
            }
            rows.push(row);
        }
    }
    nullspace_of_rows(&rows, n * n)
        .unwrap()
        .into_iter()
        .map(|v| RationalMatrix::from_fn(n, |i, j| v[var(i, j)].clone()))
        .collect()
}

fn symmetric_commutant(s: &RationalMatrix) -> shiftkit::pattern::CommutantFamily {
    commutant_with_pattern(s, &SparsityPattern::complete(s.dim(), DescriptionMode::Loose)).unwrap()
}

#[test]
fn corpus_covers_both_verdicts() {
    let cfg = ToleranceConfig::default();
    let c = corpus();
    let enabled = c.iter().filter(|e| is_shift_enabled(&e.matrix, &cfg).shift_enabled).count();
    assert!(c.len() >= 200);
    assert!(enabled >= 40 && c.len() - enabled >= 40, "{enabled} of {} shift-enabled", c.len());
    assert!(c.iter().all(|e| e.matrix.is_symmetric() && e.matrix.dim() <= 8));
}

#[test]
fn commuting_filters_are_polynomials_exactly_when_shift_enabled() {
    let cfg = ToleranceConfig::default();
    for e in corpus() {
        let s = &e.matrix;
        let report = is_shift_enabled(s, &cfg);
        let family = symmetric_commutant(s);
        let d = report.min_poly.degree().unwrap();
        let non_polynomial = family
            .basis
            .iter()
            .find_map(|h| Some((h, represent_as_polynomial(h, s).unwrap())).filter(|(_, r)| !r.is_representable()));
        if report.shift_enabled {
            assert_eq!(family.dimension(), s.dim(), "entry {}", e.index);
            let coords: Vec<Rational> = (0..family.dimension()).map(|k| ratio(k as i64 * 3 - 5, 7)).collect();
            let h = family.member(&coords);
            let r = represent_as_polynomial(&h, s).unwrap();
            assert!(r.coefficients().is_some_and(|p| eval_matrix_poly(p, s) == h), "entry {}", e.index);
            assert!(non_polynomial.is_none());
        } else {
            assert!(family.dimension() > d, "entry {}", e.index);
            let (h, r) = non_polynomial.unwrap_or_else(|| panic!("entry {} has no witness filter", e.index));
            assert!(r.replay(h, s), "entry {}", e.index);
        }
    }
}

#[test]
fn minimal_polynomial_is_consistent() {
    let cfg = ToleranceConfig::default();
    for e in corpus() {
        let s = &e.matrix;
        let (p, m) = (char_poly(s), min_poly(s));
        assert!(m.is_monic());
        assert!(eval_matrix_poly(&m, s).is_zero(), "entry {}", e.index);
        assert!(eval_matrix_poly(&p, s).is_zero(), "entry {}", e.index);
        assert!(poly_divides(&m, &p).unwrap());
        assert_eq!(power_rank(s), m.degree().unwrap());
        assert!(is_shift_enabled(s, &cfg).consistent(), "entry {}", e.index);
        assert_eq!(rank_exact(s) + nullspace_exact(s).len(), s.dim());
        // m has the distinct roots of p, each simple.
        let squarefree = p.div_rem(&p.gcd(&p.derivative())).unwrap().0.monic();
        assert_eq!(squarefree, m, "entry {}", e.index);
    }
}

#[test]
fn library_commutant_matches_brute_force() {
    for e in corpus().into_iter().filter(|e| e.matrix.dim() <= 6) {
        let s = &e.matrix;
        let full = brute_force_commutant(s);
        let family = symmetric_commutant(s);
        for x in &full {
            assert!(commutes(x, s).unwrap());
            let sym = &(x + &x.transpose()).scale(&ratio(1, 2)) + &RationalMatrix::zeros(s.dim());
            assert!(family.contains(&sym), "entry {}", e.index);
        }
        // Full commutant is n-dimensional exactly when the symmetric one is.
        assert_eq!(full.len() == s.dim(), family.dimension() == s.dim(), "entry {}", e.index);
        if let Some(spectrum) = &e.spectrum {
            let mut mults = Vec::new();
            for w in spectrum.chunk_by(|a, b| a == b) {
                mults.push(w.len());
            }
            assert_eq!(full.len(), mults.iter().map(|m| m * m).sum::<usize>());
            assert_eq!(family.dimension(), mults.iter().map(|m| m * (m + 1) / 2).sum::<usize>());
        }
    }
}

#[test]
fn exact_roots_bracket_float_eigenvalues() {
    let cfg = ToleranceConfig::default();
    for e in corpus() {
        let s = &e.matrix;
        let m = min_poly(s);
        let eig = symm_eig(s, &cfg).unwrap();
        let mut distinct: Vec<f64> = Vec::new();
        for &x in &eig.eigenvalues {
            if distinct.last().is_none_or(|&l| x - l > 1e-6) {
                distinct.push(x);
            }
        }
        assert_eq!(distinct.len(), m.degree().unwrap(), "entry {}", e.index);
        let scale = s.to_f64_rows().iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        let delta = 1e-7 * scale;
        for x in distinct {
            let lo = Rational::from_float(x - delta).unwrap();
            let hi = Rational::from_float(x + delta).unwrap();
            assert!(m.sign_at(&lo) * m.sign_at(&hi) <= 0, "entry {}: no root near {x}", e.index);
        }
    }
}

#[test]
fn local_filtering_matches_dense_evaluation() {
    for e in corpus() {
        let s = &e.matrix;
        let n = s.dim();
        let h = Polynomial::new((0..=(e.index % 4)).map(|k| ratio(k as i64 - 1, 3)).collect());
        let x = GraphSignal::new((0..n).map(|i| ratio(i as i64 + 1, 2)).collect());
        let (y, report) = apply_filter_locally(s, &h, &x).unwrap();
        assert_eq!(y.values, eval_matrix_poly(&h, s).mul_vec(&x.values).unwrap(), "entry {}", e.index);
        assert_eq!(report.hops, h.degree().unwrap_or(0));
    }
}

#[test]
fn degenerate_entries_get_exact_non_polynomial_filters() {
    let cfg = ToleranceConfig::default();
    for e in corpus().into_iter().filter(|e| e.kind == CorpusKind::Degenerate) {
        let s = &e.matrix;
        assert!(!is_shift_enabled(s, &cfg).shift_enabled);
        match construct_nonrepresentable_filter(s, &cfg).unwrap() {
            ConstructedFilter::Exact(h) => {
                assert!(commutes(&h, s).unwrap());
                assert!(!represent_as_polynomial(&h, s).unwrap().is_representable());
            }
            ConstructedFilter::Approximate(_) => panic!("entry {} has an integer spectrum", e.index),
        }
    }
}

#[test]
fn search_reports_are_byte_identical() {
    let pattern = SparsityPattern::of_matrix(&star_adjacency(), DescriptionMode::Loose);
    let render = || {
        let report = exists_shift_enabled_with_pattern(&pattern, Some(&star_filter()), 20, 9).unwrap();
        let mut doc = AnalysisReportDocument::new("search-pattern", "digest".into());
        doc.pattern_search = Some(PatternSearchSection::new(&report, DescriptionMode::Loose, 20, 9, None));
        doc.to_json()
    };
    assert_eq!(render(), render());
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn rational_matrix(max_n: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(small_rational(), n * n)
            .prop_map(move |v| RationalMatrix::from_fn(n, |i, j| v[i * n + j].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matrix_text_round_trips(m in rational_matrix(6)) {
        prop_assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn decimals_parse_exactly(whole in -999i64..999, frac in 0u32..1000) {
        let text = format!("{whole}.{frac:03}");
        let sign = if whole < 0 { -1 } else { 1 };
        prop_assert_eq!(parse_rational(&text).unwrap(), rat(whole) + ratio(sign * frac as i64, 1000));
    }

    #[test]
    fn same_graph_is_reflexive_and_symmetric(a in rational_matrix(5), b in rational_matrix(5)) {
        let (a, b) = (RealMatrix::from_rational(&a), RealMatrix::from_rational(&b));
        for mode in [DescriptionMode::Strict, DescriptionMode::Loose] {
            prop_assert!(describes_same_graph(&a, &a, mode, 0.0).unwrap());
            if a.dim() == b.dim() {
                prop_assert_eq!(
                    describes_same_graph(&a, &b, mode, 0.0).unwrap(),
                    describes_same_graph(&b, &a, mode, 0.0).unwrap()
                );
            }
        }
    }

    #[test]
    fn filter_family_members_stay_invariant(
        alpha in small_rational(),
        q in proptest::collection::vec(small_rational(), 0..5),
        on_cycle in any::<bool>(),
    ) {
        let (s, h) = if on_cycle { (cycle_adjacency(), cycle_filter()) } else { (star_adjacency(), star_filter()) };
        let q = Polynomial::new(q);
        let f = filter_family_member(&s, &h, &alpha, &q).unwrap();
        prop_assert!(commutes(&f, &s).unwrap());
        let representable = represent_as_polynomial(&f, &s).unwrap().is_representable();
        prop_assert_eq!(representable, alpha == rat(0));
    }

    #[test]
    fn commuting_products_and_multiplicities(m in rational_matrix(5)) {
        let s = &(&m + &m.transpose()) + &RationalMatrix::zeros(m.dim());
        let p = min_poly(&s);
        prop_assert!(eval_matrix_poly(&p, &s).is_zero());
        prop_assert!(poly_divides(&p, &char_poly(&s)).unwrap());
    }
}
