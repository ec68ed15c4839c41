//! Conversion of a non-shift-enabled symmetric shift into a shift-enabled
//! one by perturbing its eigenvalues in a joint eigenbasis with the filter,
//! recovery of the original shift as a polynomial in the converted one, and
//! the strict / loose same-graph audit.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix};
use crate::real::RealMatrix;
use crate::shift::commutes;
use crate::spectral::{commutes_within, has_distinct_eigenvalues, joint_diagonalizer, symm_eig_real, ToleranceConfig};

pub const DEFAULT_ZERO_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescriptionMode {
    /// Supports agree everywhere, diagonal included.
    Strict,
    /// Supports agree off the diagonal only.
    Loose,
}

impl std::str::FromStr for DescriptionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(Self::Strict),
            "loose" => Ok(Self::Loose),
            other => Err(format!("unknown mode {other:?} (expected strict or loose)")),
        }
    }
}

/// A free entry of a symmetric pattern-restricted matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeEntry {
    Diagonal(usize),
    /// `i < j`; stands for both `(i, j)` and `(j, i)`.
    OffDiagonal(usize, usize),
}

/// Symmetric support of a shift matrix. In strict mode the diagonal support
/// is part of the pattern; in loose mode every diagonal entry is free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparsityPattern {
    pub n: usize,
    pub offdiag_support: BTreeSet<(usize, usize)>,
    pub diagonal_support: BTreeSet<usize>,
    pub mode: DescriptionMode,
}

impl SparsityPattern {
    /// Off-diagonal support is symmetrized (`{i, j}` present when either
    /// `(i, j)` or `(j, i)` is nonzero).
    pub fn of_matrix(m: &RationalMatrix, mode: DescriptionMode) -> Self {
        Self::of_real(&RealMatrix::from_rational(m), mode, 0.0)
    }

    pub fn of_real(m: &RealMatrix, mode: DescriptionMode, zero_tol: f64) -> Self {
        let n = m.dim();
        let nz = |i: usize, j: usize| m.get(i, j).abs() > zero_tol;
        let offdiag_support =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| nz(i, j) || nz(j, i)).collect();
        let diagonal_support = (0..n).filter(|&i| nz(i, i)).collect();
        Self { n, offdiag_support, diagonal_support, mode }
    }

    pub fn complete(n: usize, mode: DescriptionMode) -> Self {
        Self {
            n,
            offdiag_support: (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
            diagonal_support: (0..n).collect(),
            mode,
        }
    }

    /// Free entries in a fixed order: off-diagonal pairs, then diagonal.
    pub fn free_entries(&self) -> Vec<FreeEntry> {
        let mut out: Vec<FreeEntry> = self.offdiag_support.iter().map(|&(i, j)| FreeEntry::OffDiagonal(i, j)).collect();
        match self.mode {
            DescriptionMode::Strict => out.extend(self.diagonal_support.iter().map(|&i| FreeEntry::Diagonal(i))),
            DescriptionMode::Loose => out.extend((0..self.n).map(FreeEntry::Diagonal)),
        }
        out
    }

    /// Symmetric matrix with the given values on the free entries.
    pub fn assemble(&self, values: &[Rational]) -> RationalMatrix {
        let mut rows = vec![vec![Rational::from_integer(0.into()); self.n]; self.n];
        for (entry, v) in self.free_entries().iter().zip(values) {
            match *entry {
                FreeEntry::Diagonal(i) => rows[i][i] = v.clone(),
                FreeEntry::OffDiagonal(i, j) => {
                    rows[i][j] = v.clone();
                    rows[j][i] = v.clone();
                }
            }
        }
        RationalMatrix::new(rows).expect("square by construction")
    }

    /// Symmetric, zero outside the free entries.
    pub fn admits(&self, m: &RationalMatrix) -> bool {
        if m.dim() != self.n || !m.is_symmetric() {
            return false;
        }
        let free: BTreeSet<FreeEntry> = self.free_entries().into_iter().collect();
        (0..self.n).all(|i| {
            (i..self.n).all(|j| {
                let entry = if i == j { FreeEntry::Diagonal(i) } else { FreeEntry::OffDiagonal(i, j) };
                m.get(i, j) == &Rational::from_integer(0.into()) || free.contains(&entry)
            })
        })
    }

    /// `m` describes the pattern's graph: admitted and nonzero on every
    /// support entry the mode constrains.
    pub fn describes(&self, m: &RationalMatrix) -> bool {
        let own = SparsityPattern::of_matrix(m, self.mode);
        self.admits(m)
            && own.offdiag_support == self.offdiag_support
            && (self.mode == DescriptionMode::Loose || own.diagonal_support == self.diagonal_support)
    }

    /// Structural rank: maximum bipartite matching between rows and columns
    /// over the support (the strict diagonal support or every diagonal entry
    /// in loose mode).
    pub fn structural_rank(&self) -> usize {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.offdiag_support {
            adj[i].push(j);
            adj[j].push(i);
        }
        for entry in self.free_entries() {
            if let FreeEntry::Diagonal(i) = entry {
                adj[i].push(i);
            }
        }
        maximum_matching(&adj, self.n).len()
    }

    pub fn edge_count(&self) -> usize {
        self.offdiag_support.len()
    }
}

/// Augmenting-path bipartite matching (Kuhn). Returns `(row, col)` pairs.
pub fn maximum_matching(adj: &[Vec<usize>], cols: usize) -> Vec<(usize, usize)> {
    fn augment(row: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &c in &adj[row] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if owner[c].is_none_or(|r| augment(r, adj, seen, owner)) {
                owner[c] = Some(row);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; cols];
    for row in 0..adj.len() {
        let mut seen = vec![false; cols];
        augment(row, adj, &mut seen, &mut owner);
    }
    let mut out: Vec<(usize, usize)> = owner.iter().enumerate().filter_map(|(c, r)| r.map(|r| (r, c))).collect();
    out.sort_unstable();
    out
}

pub fn describes_same_graph(a: &RealMatrix, b: &RealMatrix, mode: DescriptionMode, zero_tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let n = a.dim();
    let nz = |m: &RealMatrix, i: usize, j: usize| m.get(i, j).abs() > zero_tol;
    let supports_agree =
        (0..n).all(|i| (0..n).all(|j| (i == j && mode == DescriptionMode::Loose) || nz(a, i, j) == nz(b, i, j)));
    Ok(supports_agree && a.is_symmetric(zero_tol) == b.is_symmetric(zero_tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationPolicy {
    /// Step added within each degenerate cluster: `0, ε, 2ε, …`. `None`
    /// selects `1e−3·(1 + spectral radius)`.
    pub epsilon: Option<f64>,
    /// Entries with magnitude at or below this count as structural zeros.
    pub zero_tol: f64,
}

impl Default for PerturbationPolicy {
    fn default() -> Self {
        Self { epsilon: None, zero_tol: DEFAULT_ZERO_TOL }
    }
}

impl PerturbationPolicy {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self { epsilon: Some(epsilon), ..Self::default() }
    }

    pub fn resolve_epsilon(&self, spectral_radius: f64) -> f64 {
        self.epsilon.unwrap_or(1e-3 * (1.0 + spectral_radius))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    /// Ascending floating coefficients of `r` with `S ≈ r(S̃)`.
    pub coefficients: Vec<f64>,
    /// `max |r(S̃) − S|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionOutcome {
    pub s_tilde: RealMatrix,
    pub epsilon: f64,
    /// Eigenvalues of `S` along the joint basis.
    pub original_eigenvalues: Vec<f64>,
    /// Diagonal of the perturbed spectrum, same order.
    pub perturbed_eigenvalues: Vec<f64>,
    pub shift_enabled: bool,
    pub commutes_with_h: bool,
    /// `‖HS̃ − S̃H‖_F`
    pub commutator_norm: f64,
    pub strict_same_graph: bool,
    pub loose_same_graph: bool,
    pub recovery: Option<Recovery>,
}

/// Builds `S̃ = T Λ_perturb Tᵀ` from a joint eigenbasis `T` of `(S, H)` and
/// audits it.
pub fn convert_to_shift_enabled(
    s: &RationalMatrix,
    h: &RationalMatrix,
    policy: &PerturbationPolicy,
    cfg: &ToleranceConfig,
) -> Result<ConversionOutcome> {
    s.require_symmetric()?;
    h.require_symmetric()?;
    if !commutes(h, s)? {
        return Err(Error::NotCommuting);
    }
    let joint = joint_diagonalizer(s, h, cfg)?;
    let n = s.dim();
    let radius = joint.shift_eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let epsilon = policy.resolve_epsilon(radius);
    let mut perturbed = joint.shift_eigenvalues.clone();
    let mut any_offset = false;
    for range in &joint.clusters {
        for (k, j) in range.clone().enumerate() {
            let offset = k as f64 * epsilon;
            if offset != 0.0 {
                any_offset = true;
                perturbed[j] += offset;
            }
        }
    }
    let original = RealMatrix::from_rational(s);
    let s_tilde = if any_offset {
        let t = &joint.basis;
        let mut m = &(t * &RealMatrix::from_diagonal(&perturbed)) * &t.transpose();
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (m.get(i, j) + m.get(j, i));
                m.set(i, j, avg);
                m.set(j, i, avg);
            }
        }
        m
    } else {
        original.clone()
    };
    let hr = RealMatrix::from_rational(h);
    let shift_enabled = symm_eig_real(&s_tilde, cfg).map(|d| has_distinct_eigenvalues(&d, cfg)).unwrap_or(false);
    let recovery = if shift_enabled {
        let coefficients = interpolate(&perturbed, &joint.shift_eigenvalues);
        let residual = (&s_tilde.eval_poly(&coefficients) - &original).max_abs();
        Some(Recovery { coefficients, residual })
    } else {
        None
    };
    Ok(ConversionOutcome {
        commutator_norm: hr.commutator(&s_tilde).frobenius(),
        commutes_with_h: commutes_within(&hr, &s_tilde, cfg.commute_tol),
        strict_same_graph: describes_same_graph(&original, &s_tilde, DescriptionMode::Strict, policy.zero_tol)?,
        loose_same_graph: describes_same_graph(&original, &s_tilde, DescriptionMode::Loose, policy.zero_tol)?,
        original_eigenvalues: joint.shift_eigenvalues,
        perturbed_eigenvalues: perturbed,
        epsilon,
        shift_enabled,
        recovery,
        s_tilde,
    })
}

/// Fits `r` with `r(λ̃ᵢ) = λᵢ`, pairing each eigenvector `tᵢ` of `S̃` with the
/// Rayleigh quotient `tᵢᵀ S tᵢ`. Mismatched inputs are not rejected; they
/// show up as a large residual.
pub fn recover_original(s: &RationalMatrix, s_tilde: &RealMatrix, cfg: &ToleranceConfig) -> Result<Recovery> {
    if s.dim() != s_tilde.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: s_tilde.dim() });
    }
    let d = symm_eig_real(s_tilde, cfg)?;
    if !has_distinct_eigenvalues(&d, cfg) {
        return Err(Error::EigenvaluesNotDistinct { gap: d.min_gap() });
    }
    let original = RealMatrix::from_rational(s);
    let targets: Vec<f64> = (0..s.dim())
        .map(|i| {
            let t = d.vectors.column(i);
            original.mul_vec(&t).iter().zip(&t).map(|(a, b)| a * b).sum()
        })
        .collect();
    let coefficients = interpolate(&d.eigenvalues, &targets);
    let residual = (&s_tilde.eval_poly(&coefficients) - &original).max_abs();
    Ok(Recovery { coefficients, residual })
}

/// Interpolating polynomial through `(xᵢ, yᵢ)` via Newton divided
/// differences, expanded to ascending monomial coefficients.
pub fn interpolate(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut coeffs = vec![0.0; n];
    for k in (0..n).rev() {
        // coeffs ← coeffs·(x − x_k) + dd[k]
        let mut next = vec![0.0; n];
        for (i, &c) in coeffs.iter().enumerate() {
            if i + 1 < n {
                next[i + 1] += c;
            }
            next[i] -= c * xs[k];
        }
        next[0] += dd[k];
        coeffs = next;
    }
    coeffs
}
