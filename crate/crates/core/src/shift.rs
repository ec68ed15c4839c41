//! Deciding whether a shift is shift-enabled and whether a filter is a
//! polynomial in it, with certificates in both directions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{
    char_poly, eval_matrix_poly, min_poly, nullspace_exact, rank_exact, rationalize, solve_exact, Polynomial, Rational,
    RationalMatrix, SolveOutcome,
};
use crate::real::RealMatrix;
use crate::spectral::{clusters, has_distinct_eigenvalues, symm_eig, ToleranceConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftEnabledReport {
    pub dim: usize,
    pub char_poly: Polynomial,
    pub min_poly: Polynomial,
    pub shift_enabled: bool,
    /// Distinct-eigenvalue verdict from the floating eigensolver, for
    /// symmetric input.
    pub symmetric_cross_check: Option<bool>,
}

impl ShiftEnabledReport {
    /// True when the floating cross-check (if any) agrees with the exact
    /// verdict.
    pub fn consistent(&self) -> bool {
        self.symmetric_cross_check.is_none_or(|v| v == self.shift_enabled)
    }
}

pub fn is_shift_enabled(s: &RationalMatrix, cfg: &ToleranceConfig) -> ShiftEnabledReport {
    let p = char_poly(s);
    let m = min_poly(s);
    let shift_enabled = p == m;
    debug_assert_eq!(shift_enabled, m.degree() == Some(s.dim()));
    let symmetric_cross_check =
        if s.is_symmetric() { symm_eig(s, cfg).ok().map(|d| has_distinct_eigenvalues(&d, cfg)) } else { None };
    ShiftEnabledReport { dim: s.dim(), char_poly: p, min_poly: m, shift_enabled, symmetric_cross_check }
}

/// Exact test of `HS = SH`.
pub fn commutes(h: &RationalMatrix, s: &RationalMatrix) -> Result<bool> {
    Ok(h.commutator(s)?.is_zero())
}

/// A pair of matrix positions (0-based) at which every power of the shift
/// agrees while the filter does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryPair {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

impl EntryPair {
    pub fn one_based(&self) -> ((usize, usize), (usize, usize)) {
        ((self.first.0 + 1, self.first.1 + 1), (self.second.0 + 1, self.second.1 + 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepresentabilityResult {
    /// `H = h(S)` with `deg h < deg m_S`.
    Representable { coefficients: Polynomial },
    /// `yᵀ vec(S^k) = 0` for every `k < deg m_S` and `yᵀ vec(H) ≠ 0`.
    NotRepresentable { witness: Vec<Rational>, witness_pair: Option<EntryPair> },
}

impl RepresentabilityResult {
    pub fn is_representable(&self) -> bool {
        matches!(self, RepresentabilityResult::Representable { .. })
    }

    pub fn coefficients(&self) -> Option<&Polynomial> {
        match self {
            RepresentabilityResult::Representable { coefficients } => Some(coefficients),
            RepresentabilityResult::NotRepresentable { .. } => None,
        }
    }

    pub fn witness_pair(&self) -> Option<EntryPair> {
        match self {
            RepresentabilityResult::NotRepresentable { witness_pair, .. } => *witness_pair,
            RepresentabilityResult::Representable { .. } => None,
        }
    }

    /// Re-checks every exact claim carried by the result.
    pub fn replay(&self, h: &RationalMatrix, s: &RationalMatrix) -> bool {
        if h.dim() != s.dim() {
            return false;
        }
        let d = min_poly(s).degree().expect("minimal polynomial is nonzero");
        match self {
            RepresentabilityResult::Representable { coefficients } => {
                coefficients.degree().is_none_or(|k| k < d) && eval_matrix_poly(coefficients, s) == *h
            }
            RepresentabilityResult::NotRepresentable { witness, witness_pair } => {
                let dot =
                    |m: &RationalMatrix| -> Rational { witness.iter().zip(m.entries()).map(|(a, b)| a * b).sum() };
                witness.len() == h.dim() * h.dim()
                    && s.powers(d).iter().all(|p| dot(p).is_zero())
                    && !dot(h).is_zero()
                    && witness_pair.is_none_or(|pair| pair_separates(&pair, h, &s.powers(s.dim())))
            }
        }
    }
}

fn pair_separates(pair: &EntryPair, h: &RationalMatrix, powers: &[RationalMatrix]) -> bool {
    let (a, b) = (pair.first, pair.second);
    h.get(a.0, a.1) != h.get(b.0, b.1) && powers.iter().all(|p| p.get(a.0, a.1) == p.get(b.0, b.1))
}

/// Solves `vec(H) = Σ_{k<d} c_k vec(S^k)` exactly with `d = deg m_S`.
pub fn represent_as_polynomial(h: &RationalMatrix, s: &RationalMatrix) -> Result<RepresentabilityResult> {
    s.require_same_dim(h)?;
    let d = min_poly(s).degree().expect("minimal polynomial is nonzero");
    let powers = s.powers(d);
    let n2 = s.dim() * s.dim();
    let rows: Vec<Vec<Rational>> = (0..n2).map(|r| powers.iter().map(|p| p.entries()[r].clone()).collect()).collect();
    match solve_exact(&rows, d, h.entries())? {
        SolveOutcome::Consistent { particular, homogeneous } => {
            debug_assert!(homogeneous.is_empty(), "powers below the minimal degree are independent");
            Ok(RepresentabilityResult::Representable { coefficients: Polynomial::new(particular) })
        }
        SolveOutcome::Inconsistent { certificate } => {
            Ok(RepresentabilityResult::NotRepresentable { witness: certificate, witness_pair: find_witness_pair(h, s) })
        }
    }
}

/// Scans position pairs lexicographically, off-diagonal pairs first, for two
/// entries where `S^k` agrees for all `k < n` but `H` differs.
pub fn find_witness_pair(h: &RationalMatrix, s: &RationalMatrix) -> Option<EntryPair> {
    let n = s.dim();
    let powers = s.powers(n);
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let off_diagonal = |p: &(usize, usize)| p.0 != p.1;
    let scan = |both_off: bool| {
        for (ia, a) in positions.iter().enumerate() {
            for b in &positions[ia + 1..] {
                if both_off != (off_diagonal(a) && off_diagonal(b)) {
                    continue;
                }
                let pair = EntryPair { first: *a, second: *b };
                if pair_separates(&pair, h, &powers) {
                    return Some(pair);
                }
            }
        }
        None
    };
    scan(true).or_else(|| scan(false))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructedFilter {
    /// Rational eigenspace basis available; all claims hold exactly.
    Exact(RationalMatrix),
    /// Built from floating eigenvectors; commutes only within tolerance.
    Approximate(RealMatrix),
}

impl ConstructedFilter {
    pub fn exact(&self) -> Option<&RationalMatrix> {
        match self {
            ConstructedFilter::Exact(m) => Some(m),
            ConstructedFilter::Approximate(_) => None,
        }
    }
}

/// Rational eigenvalue near `approx`, verified exactly to be a root of
/// `poly`.
pub fn exact_root_near(poly: &Polynomial, approx: f64) -> Option<Rational> {
    [1_000, 1_000_000].into_iter().filter_map(|bound| rationalize(approx, bound)).find(|r| poly.eval(r).is_zero())
}

/// The full eigenvalue multiset as exact rationals, when the eigenvalues are
/// rational. Verified by `char_poly(S) = ∏(λ − rᵢ)`.
pub fn exact_rational_spectrum(s: &RationalMatrix, cfg: &ToleranceConfig) -> Option<Vec<Rational>> {
    let d = symm_eig(s, cfg).ok()?;
    let p = char_poly(s);
    let roots: Option<Vec<Rational>> = d.eigenvalues.iter().map(|&x| exact_root_near(&p, x)).collect();
    let roots = roots?;
    (Polynomial::from_roots(&roots) == p).then_some(roots)
}

/// A symmetric filter commuting with `S` that is not a polynomial in `S`.
///
/// Takes the lowest degenerate eigenvalue cluster (with a rational
/// eigenvalue, when one exists), a basis `v₁, v₂, …` of its eigenspace and
/// returns `v₁v₂ᵀ + v₂v₁ᵀ`: it vanishes on the orthogonal complement and acts
/// non-scalarly on the eigenspace.
pub fn construct_nonrepresentable_filter(s: &RationalMatrix, cfg: &ToleranceConfig) -> Result<ConstructedFilter> {
    s.require_symmetric()?;
    let n = s.dim();
    let m = min_poly(s);
    if m.degree() == Some(n) {
        return Err(Error::ShiftEnabled);
    }
    let d = symm_eig(s, cfg)?;
    let degenerate: Vec<_> = clusters(&d.eigenvalues, cfg.eig_sep_tol).into_iter().filter(|r| r.len() >= 2).collect();
    for range in &degenerate {
        let approx = d.eigenvalues[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let Some(lambda) = exact_root_near(&m, approx) else {
            continue;
        };
        let shifted = s.add_scalar(&-lambda);
        if n - rank_exact(&shifted) < 2 {
            continue;
        }
        let basis = nullspace_exact(&shifted);
        let (v1, v2) = (&basis[0], &basis[1]);
        let h = RationalMatrix::from_fn(n, |i, j| &v1[i] * &v2[j] + &v2[i] * &v1[j]);
        return Ok(ConstructedFilter::Exact(h));
    }
    // Irrational repeated eigenvalue: fall back to floating eigenvectors.
    let range = degenerate.first().ok_or(Error::EigenvaluesNotDistinct { gap: d.min_gap() })?;
    let t1 = d.vectors.column(range.start);
    let t2 = d.vectors.column(range.start + 1);
    let mut h = RealMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, t1[i] * t2[j] + t2[i] * t1[j]);
        }
    }
    Ok(ConstructedFilter::Approximate(h))
}

/// `αH + q(S)`; `H` is expected to commute with `S`.
pub fn filter_family_member(
    s: &RationalMatrix,
    h: &RationalMatrix,
    alpha: &Rational,
    q: &Polynomial,
) -> Result<RationalMatrix> {
    s.require_same_dim(h)?;
    Ok(&h.scale(alpha) + &eval_matrix_poly(q, s))
}
