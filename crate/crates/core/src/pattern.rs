//! Existence questions independent of any particular conversion: is there a
//! shift-enabled matrix with a given pattern (commuting with a given
//! filter)? Answered by exact certificates where possible and by seeded
//! random search otherwise.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conversion::{maximum_matching, DescriptionMode, SparsityPattern};
use crate::error::Result;
use crate::exact::{min_poly, nullspace_of_rows, rank_rows, ratio, Rational, RationalMatrix};
use crate::shift::{commutes, is_shift_enabled, represent_as_polynomial, EntryPair, ShiftEnabledReport};
use crate::spectral::ToleranceConfig;

/// Symmetric pattern-restricted solutions `X` of `HX = XH`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantFamily {
    pub pattern: SparsityPattern,
    pub basis: Vec<RationalMatrix>,
}

impl CommutantFamily {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Family spanned by explicitly given matrices.
    pub fn spanned_by(pattern: SparsityPattern, basis: Vec<RationalMatrix>) -> Self {
        Self { pattern, basis }
    }

    pub fn member(&self, coords: &[Rational]) -> RationalMatrix {
        let n = self.pattern.n;
        self.basis.iter().zip(coords).fold(RationalMatrix::zeros(n), |acc, (b, c)| &acc + &b.scale(c))
    }

    pub fn contains(&self, m: &RationalMatrix) -> bool {
        let n2 = self.pattern.n * self.pattern.n;
        let mut rows: Vec<Vec<Rational>> = self.basis.iter().map(RationalMatrix::vectorize).collect();
        let r = rank_rows(&rows, n2).expect("uniform rows");
        rows.push(m.vectorize());
        rank_rows(&rows, n2).expect("uniform rows") == r
    }

    /// When the span is `{aI + bC}` (or `{bC}`), returns `C` normalized so
    /// its `(0,0)` entry is zero and its first nonzero entry is one.
    pub fn identity_plus_one(&self) -> Option<RationalMatrix> {
        let n = self.pattern.n;
        let id = RationalMatrix::identity(n);
        let normalize = |c: RationalMatrix| -> Option<RationalMatrix> {
            let c = c.add_scalar(&-c.get(0, 0).clone());
            let lead = c.entries().iter().find(|x| !x.is_zero())?.clone();
            Some(c.scale(&lead.recip()))
        };
        match self.basis.len() {
            1 => {
                let b = &self.basis[0];
                // A one-dimensional family is {bC}; C itself is the generator.
                let lead = b.entries().iter().find(|x| !x.is_zero())?.clone();
                Some(b.scale(&lead.recip()))
            }
            2 if self.contains(&id) => {
                let c = self.basis.iter().find(|b| !is_scalar(b))?.clone();
                normalize(c)
            }
            _ => None,
        }
    }
}

fn is_scalar(m: &RationalMatrix) -> bool {
    let d = m.get(0, 0);
    *m == RationalMatrix::identity(m.dim()).scale(d)
}

/// Exact basis of `{X symmetric, X within pattern : HX = XH}`.
pub fn commutant_with_pattern(h: &RationalMatrix, pattern: &SparsityPattern) -> Result<CommutantFamily> {
    h.require_same_dim(&RationalMatrix::zeros(pattern.n))?;
    let n = pattern.n;
    let free = pattern.free_entries();
    // Column k of the system is vec(H E_k − E_k H) for the k-th free entry.
    let unit = |k: usize| -> RationalMatrix {
        let mut values = vec![Rational::zero(); free.len()];
        values[k] = Rational::one();
        pattern.assemble(&values)
    };
    let columns: Vec<Vec<Rational>> =
        (0..free.len()).map(|k| h.commutator(&unit(k)).expect("same dim").vectorize()).collect();
    let rows: Vec<Vec<Rational>> = (0..n * n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let basis = nullspace_of_rows(&rows, free.len())?.into_iter().map(|v| pattern.assemble(&v)).collect();
    Ok(CommutantFamily { pattern: pattern.clone(), basis })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImpossibilityCertificate {
    /// Every weighting of the strict pattern has rank at most
    /// `structural_rank`, so `0` is an eigenvalue of multiplicity at least
    /// `n − structural_rank ≥ 2`.
    RankDeficiency {
        pattern: SparsityPattern,
        structural_rank: usize,
        kernel_multiplicity: usize,
        /// A maximum matching (row, col) witnessing the rank bound is tight
        /// for the support.
        matching: Vec<(usize, usize)>,
    },
    /// Every member of the family is `aI + bC`, every power of `C` agrees
    /// at `pair`, and the filter does not; so the filter is no polynomial in
    /// any member.
    PowerEquality {
        generator: RationalMatrix,
        pair: EntryPair,
        /// `(C^k at first, C^k at second)` for `k = 0..n−1`.
        power_values: Vec<(Rational, Rational)>,
        filter_values: (Rational, Rational),
    },
}

impl ImpossibilityCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            ImpossibilityCertificate::RankDeficiency { .. } => "rank_deficiency",
            ImpossibilityCertificate::PowerEquality { .. } => "power_equality",
        }
    }

    /// Re-verifies every stated equation. Filter-dependent certificates need
    /// the filter.
    pub fn replay(&self, h: Option<&RationalMatrix>) -> bool {
        match self {
            ImpossibilityCertificate::RankDeficiency { pattern, structural_rank, kernel_multiplicity, matching } => {
                pattern.mode == DescriptionMode::Strict
                    && pattern.structural_rank() == *structural_rank
                    && matching.len() == *structural_rank
                    && pattern.n - structural_rank == *kernel_multiplicity
                    && *kernel_multiplicity >= 2
                    && matching_is_valid(pattern, matching)
            }
            ImpossibilityCertificate::PowerEquality { generator, pair, power_values, filter_values } => {
                let Some(h) = h else { return false };
                let n = generator.dim();
                let (a, b) = (pair.first, pair.second);
                let powers = generator.powers(n);
                power_values.len() == n
                    && powers
                        .iter()
                        .zip(power_values)
                        .all(|(p, (x, y))| p.get(a.0, a.1) == x && p.get(b.0, b.1) == y && x == y)
                    && h.get(a.0, a.1) == &filter_values.0
                    && h.get(b.0, b.1) == &filter_values.1
                    && filter_values.0 != filter_values.1
            }
        }
    }
}

fn matching_is_valid(pattern: &SparsityPattern, matching: &[(usize, usize)]) -> bool {
    let allowed = |r: usize, c: usize| {
        if r == c {
            match pattern.mode {
                DescriptionMode::Strict => pattern.diagonal_support.contains(&r),
                DescriptionMode::Loose => true,
            }
        } else {
            pattern.offdiag_support.contains(&(r.min(c), r.max(c)))
        }
    };
    let mut rows = std::collections::BTreeSet::new();
    let mut cols = std::collections::BTreeSet::new();
    matching.iter().all(|&(r, c)| allowed(r, c) && rows.insert(r) && cols.insert(c))
}

/// Structural-rank certificate for strict patterns.
pub fn certify_rank_deficiency(pattern: &SparsityPattern) -> Option<ImpossibilityCertificate> {
    if pattern.mode != DescriptionMode::Strict {
        return None;
    }
    let mut adj = vec![Vec::new(); pattern.n];
    for &(i, j) in &pattern.offdiag_support {
        adj[i].push(j);
        adj[j].push(i);
    }
    for &i in &pattern.diagonal_support {
        adj[i].push(i);
    }
    let matching = maximum_matching(&adj, pattern.n);
    let r = matching.len();
    (pattern.n - r >= 2).then(|| ImpossibilityCertificate::RankDeficiency {
        pattern: pattern.clone(),
        structural_rank: r,
        kernel_multiplicity: pattern.n - r,
        matching,
    })
}

/// Power-equality certificate for families of the form `{aI + bC}`.
/// `pairs` restricts the candidate positions; `None` scans every pair,
/// off-diagonal pairs first.
pub fn certify_power_equality(
    h: &RationalMatrix,
    family: &CommutantFamily,
    pairs: Option<&[EntryPair]>,
) -> Option<ImpossibilityCertificate> {
    let c = family.identity_plus_one()?;
    let n = c.dim();
    let powers = c.powers(n);
    let candidates: Vec<EntryPair> = match pairs {
        Some(p) => p.to_vec(),
        None => all_pairs(n),
    };
    let pair = candidates.into_iter().find(|pair| {
        let (a, b) = (pair.first, pair.second);
        powers.iter().all(|p| p.get(a.0, a.1) == p.get(b.0, b.1)) && h.get(a.0, a.1) != h.get(b.0, b.1)
    })?;
    let (a, b) = (pair.first, pair.second);
    Some(ImpossibilityCertificate::PowerEquality {
        power_values: powers.iter().map(|p| (p.get(a.0, a.1).clone(), p.get(b.0, b.1).clone())).collect(),
        filter_values: (h.get(a.0, a.1).clone(), h.get(b.0, b.1).clone()),
        generator: c,
        pair,
    })
}

fn all_pairs(n: usize) -> Vec<EntryPair> {
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for both_off in [true, false] {
        for (ia, a) in positions.iter().enumerate() {
            for b in &positions[ia + 1..] {
                if both_off == (a.0 != a.1 && b.0 != b.1) {
                    out.push(EntryPair { first: *a, second: *b });
                }
            }
        }
    }
    out
}

/// Weight `k/16` with `k` uniform in `[−64, 64] \ {0}`.
pub fn random_weight(rng: &mut impl Rng) -> Rational {
    loop {
        let k: i64 = rng.gen_range(-64..=64);
        if k != 0 {
            return ratio(k, 16);
        }
    }
}

/// Independent generator stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Symmetric matrix with random nonzero weights on every free entry of the
/// pattern.
pub fn random_weighting(pattern: &SparsityPattern, rng: &mut impl Rng) -> RationalMatrix {
    let values: Vec<Rational> = pattern.free_entries().iter().map(|_| random_weight(rng)).collect();
    pattern.assemble(&values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialVerdict {
    /// Sample left the pattern's support (a constrained entry vanished).
    OffPattern,
    NotShiftEnabled {
        min_poly_degree: usize,
    },
    ShiftEnabled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub verdict: TrialVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found { matrix: RationalMatrix, trial: u64 },
    NotFoundAfterTrials { trials: u64 },
    Impossible(ImpossibilityCertificate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub family_dimension: Option<usize>,
    pub transcript: Vec<TrialRecord>,
}

/// Looks for a shift-enabled matrix describing `pattern` (and commuting with
/// `h` when given). Certificates are tried first; otherwise up to `trials`
/// seeded samples are tested exactly.
pub fn exists_shift_enabled_with_pattern(
    pattern: &SparsityPattern,
    h: Option<&RationalMatrix>,
    trials: u64,
    seed: u64,
) -> Result<SearchReport> {
    if let Some(cert) = certify_rank_deficiency(pattern) {
        return Ok(SearchReport {
            outcome: SearchOutcome::Impossible(cert),
            family_dimension: None,
            transcript: vec![],
        });
    }
    let family = match h {
        Some(h) => {
            let family = commutant_with_pattern(h, pattern)?;
            if let Some(cert) = certify_power_equality(h, &family, None) {
                return Ok(SearchReport {
                    outcome: SearchOutcome::Impossible(cert),
                    family_dimension: Some(family.dimension()),
                    transcript: vec![],
                });
            }
            Some(family)
        }
        None => None,
    };
    let n = pattern.n;
    let mut transcript = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let candidate = match &family {
            Some(f) => {
                let coords: Vec<Rational> = (0..f.dimension()).map(|_| random_weight(&mut rng)).collect();
                f.member(&coords)
            }
            None => random_weighting(pattern, &mut rng),
        };
        let verdict = if !pattern.describes(&candidate) {
            TrialVerdict::OffPattern
        } else {
            let degree = min_poly(&candidate).degree().expect("nonzero");
            if degree == n {
                TrialVerdict::ShiftEnabled
            } else {
                TrialVerdict::NotShiftEnabled { min_poly_degree: degree }
            }
        };
        let found = verdict == TrialVerdict::ShiftEnabled;
        transcript.push(TrialRecord { trial, verdict });
        if found {
            return Ok(SearchReport {
                outcome: SearchOutcome::Found { matrix: candidate, trial },
                family_dimension: family.as_ref().map(CommutantFamily::dimension),
                transcript,
            });
        }
    }
    Ok(SearchReport {
        outcome: SearchOutcome::NotFoundAfterTrials { trials },
        family_dimension: family.as_ref().map(CommutantFamily::dimension),
        transcript,
    })
}

/// `L = D − A` for a symmetric adjacency matrix.
pub fn laplacian(adjacency: &RationalMatrix) -> RationalMatrix {
    let n = adjacency.dim();
    let degrees: Vec<Rational> = adjacency.rows().map(|r| r.iter().sum()).collect();
    RationalMatrix::from_fn(n, |i, j| {
        let d = if i == j { degrees[i].clone() } else { Rational::zero() };
        d - adjacency.get(i, j)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianAnalysis {
    pub laplacian: RationalMatrix,
    pub report: ShiftEnabledReport,
    /// Exact eigenvalues when all are rational.
    pub exact_eigenvalues: Option<Vec<Rational>>,
    pub filter: Option<RationalMatrix>,
    pub filter_commutes: Option<bool>,
    pub filter_representable: Option<bool>,
    pub search: Option<SearchReport>,
}

/// Reruns the shift analysis with the Laplacian as the shift. Without an
/// explicit filter, a non-representable one is constructed when possible.
pub fn laplacian_variant(
    adjacency: &RationalMatrix,
    filter: Option<&RationalMatrix>,
    cfg: &ToleranceConfig,
    trials: u64,
    seed: u64,
) -> Result<LaplacianAnalysis> {
    adjacency.require_symmetric()?;
    let l = laplacian(adjacency);
    let report = is_shift_enabled(&l, cfg);
    let exact_eigenvalues = crate::shift::exact_rational_spectrum(&l, cfg);
    let filter = match filter {
        Some(h) => Some(h.clone()),
        None if !report.shift_enabled => {
            crate::shift::construct_nonrepresentable_filter(&l, cfg).ok().and_then(|f| f.exact().cloned())
        }
        None => None,
    };
    let (filter_commutes, filter_representable, search) = match &filter {
        Some(h) => {
            let pattern = SparsityPattern::of_matrix(&l, DescriptionMode::Loose);
            (
                Some(commutes(h, &l)?),
                Some(represent_as_polynomial(h, &l)?.is_representable()),
                Some(exists_shift_enabled_with_pattern(&pattern, Some(h), trials, seed)?),
            )
        }
        None => (None, None, None),
    };
    Ok(LaplacianAnalysis {
        laplacian: l,
        report,
        exact_eigenvalues,
        filter,
        filter_commutes,
        filter_representable,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn star() -> RationalMatrix {
        RationalMatrix::from_i64(&[
            vec![0, 1, 1, 1, 1],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
        ])
        .unwrap()
    }

    fn star_filter() -> RationalMatrix {
        RationalMatrix::from_i64(&[
            vec![0, 0, 0, 0, 0],
            vec![0, 1, -1, 0, 0],
            vec![0, -1, 1, 0, 0],
            vec![0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0],
        ])
        .unwrap()
    }

    fn cycle() -> RationalMatrix {
        RationalMatrix::from_i64(&[vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0]]).unwrap()
    }

    fn cycle_filter() -> RationalMatrix {
        RationalMatrix::from_i64(&[vec![0, 0, -1, 1], vec![0, -1, 1, 0], vec![-1, 1, 0, 0], vec![1, 0, 0, -1]]).unwrap()
    }

    #[test]
    fn cycle_commutant_is_identity_plus_shift() {
        let pattern = SparsityPattern::of_matrix(&cycle(), DescriptionMode::Loose);
        let family = commutant_with_pattern(&cycle_filter(), &pattern).unwrap();
        assert_eq!(family.dimension(), 2);
        assert!(family.contains(&RationalMatrix::identity(4)));
        assert!(family.contains(&cycle()));
        assert_eq!(family.identity_plus_one(), Some(cycle()));
        for b in &family.basis {
            assert!(commutes(&cycle_filter(), b).unwrap());
            assert!(pattern.admits(b));
        }
    }

    #[test]
    fn identity_filter_leaves_family_unconstrained() {
        let pattern = SparsityPattern::of_matrix(&cycle(), DescriptionMode::Loose);
        let family = commutant_with_pattern(&RationalMatrix::identity(4), &pattern).unwrap();
        assert_eq!(family.dimension(), pattern.free_entries().len());
        assert!(certify_power_equality(&RationalMatrix::identity(4), &family, None).is_none());
    }

    #[test]
    fn strict_star_family_contains_star() {
        let pattern = SparsityPattern::of_matrix(&star(), DescriptionMode::Strict);
        let family = commutant_with_pattern(&star_filter(), &pattern).unwrap();
        assert!(family.contains(&star()));
        // Hub weights to leaves 2 and 3 are forced equal; the rest are free.
        assert_eq!(family.dimension(), 3);
    }

    #[test]
    fn rank_deficiency_certificates() {
        let cert = certify_rank_deficiency(&SparsityPattern::of_matrix(&star(), DescriptionMode::Strict)).unwrap();
        let ImpossibilityCertificate::RankDeficiency { structural_rank, kernel_multiplicity, .. } = &cert else {
            panic!("wrong certificate kind");
        };
        assert_eq!((*structural_rank, *kernel_multiplicity), (2, 3));
        assert!(cert.replay(None));
        assert!(certify_rank_deficiency(&SparsityPattern::of_matrix(&cycle(), DescriptionMode::Strict)).is_none());
        assert!(certify_rank_deficiency(&SparsityPattern::complete(4, DescriptionMode::Strict)).is_none());
        assert!(certify_rank_deficiency(&SparsityPattern::of_matrix(&star(), DescriptionMode::Loose)).is_none());
    }

    #[test]
    fn cycle_power_equality_certificate() {
        let pattern = SparsityPattern::of_matrix(&cycle(), DescriptionMode::Loose);
        let family = commutant_with_pattern(&cycle_filter(), &pattern).unwrap();
        let pair = EntryPair { first: (0, 1), second: (0, 3) };
        let cert = certify_power_equality(&cycle_filter(), &family, Some(&[pair])).unwrap();
        let ImpossibilityCertificate::PowerEquality { power_values, filter_values, .. } = &cert else {
            panic!("wrong certificate kind");
        };
        assert_eq!(power_values.len(), 4);
        assert_eq!(filter_values, &(rat(0), rat(1)));
        assert!(cert.replay(Some(&cycle_filter())));
        assert!(!cert.replay(Some(&RationalMatrix::identity(4))));
    }

    #[test]
    fn star_power_equality_on_the_shift_itself() {
        let pattern = SparsityPattern::of_matrix(&star(), DescriptionMode::Strict);
        let family = CommutantFamily::spanned_by(pattern, vec![star()]);
        let pair = EntryPair { first: (1, 2), second: (1, 3) };
        let cert = certify_power_equality(&star_filter(), &family, Some(&[pair])).unwrap();
        assert!(cert.replay(Some(&star_filter())));
    }

    #[test]
    fn searches() {
        let strict = SparsityPattern::of_matrix(&star(), DescriptionMode::Strict);
        let r = exists_shift_enabled_with_pattern(&strict, None, 10, 1).unwrap();
        assert!(matches!(r.outcome, SearchOutcome::Impossible(ImpossibilityCertificate::RankDeficiency { .. })));

        let loose = SparsityPattern::of_matrix(&star(), DescriptionMode::Loose);
        let r = exists_shift_enabled_with_pattern(&loose, Some(&star_filter()), 100, 1).unwrap();
        let SearchOutcome::Found { matrix, .. } = &r.outcome else { panic!("expected a member: {:?}", r.outcome) };
        assert!(is_shift_enabled(matrix, &ToleranceConfig::default()).shift_enabled);
        assert!(commutes(&star_filter(), matrix).unwrap());
        assert!(loose.describes(matrix));

        let cyc = SparsityPattern::of_matrix(&cycle(), DescriptionMode::Loose);
        let r = exists_shift_enabled_with_pattern(&cyc, Some(&cycle_filter()), 100, 1).unwrap();
        assert!(matches!(r.outcome, SearchOutcome::Impossible(ImpossibilityCertificate::PowerEquality { .. })));
    }

    #[test]
    fn search_is_deterministic() {
        let pattern = SparsityPattern::of_matrix(&cycle(), DescriptionMode::Strict);
        let a = exists_shift_enabled_with_pattern(&pattern, None, 20, 7).unwrap();
        let b = exists_shift_enabled_with_pattern(&pattern, None, 20, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn laplacian_examples() {
        let cfg = ToleranceConfig::default();
        let a = laplacian_variant(&cycle(), Some(&cycle_filter()), &cfg, 50, 1).unwrap();
        assert_eq!(a.laplacian, &RationalMatrix::identity(4).scale(&rat(2)) - &cycle());
        assert_eq!(a.exact_eigenvalues, Some(vec![rat(0), rat(2), rat(2), rat(4)]));
        assert!(!a.report.shift_enabled);
        assert_eq!(a.filter_commutes, Some(true));
        assert_eq!(a.filter_representable, Some(false));

        let edge = RationalMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap();
        let b = laplacian_variant(&edge, None, &cfg, 10, 1).unwrap();
        assert!(b.report.shift_enabled);
        assert_eq!(b.exact_eigenvalues, Some(vec![rat(0), rat(2)]));

        let empty = laplacian_variant(&RationalMatrix::zeros(3), None, &cfg, 10, 1).unwrap();
        assert!(empty.laplacian.is_zero() && !empty.report.shift_enabled);
    }
}
