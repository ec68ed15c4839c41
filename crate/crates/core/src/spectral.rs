//! Symmetric eigendecomposition by cyclic Jacobi rotations, eigenvalue
//! clustering and joint diagonalization of commuting symmetric pairs.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::RationalMatrix;
use crate::real::RealMatrix;

pub const MAX_SWEEPS: usize = 100;

/// Environment variable naming the default tolerance profile.
pub const TOLERANCE_PROFILE_ENV: &str = "SHIFTKIT_TOLERANCE_PROFILE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub orth_tol: f64,
    pub resid_tol: f64,
    /// Minimum gap for two eigenvalues to count as distinct.
    pub eig_sep_tol: f64,
    /// Relative Frobenius tolerance for floating commutation checks.
    pub commute_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { orth_tol: 1e-9, resid_tol: 1e-9, eig_sep_tol: 1e-6, commute_tol: 1e-9 }
    }
}

impl ToleranceConfig {
    pub fn new(orth_tol: f64, resid_tol: f64, eig_sep_tol: f64, commute_tol: f64) -> Result<Self> {
        let cfg = Self { orth_tol, resid_tol, eig_sep_tol, commute_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("orth_tol", self.orth_tol),
            ("resid_tol", self.resid_tol),
            ("eig_sep_tol", self.eig_sep_tol),
            ("commute_tol", self.commute_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} must be strictly positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Named profiles: `default`, `tight`, `loose`.
    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "tight" => Some(Self { orth_tol: 1e-12, resid_tol: 1e-12, eig_sep_tol: 1e-8, commute_tol: 1e-12 }),
            "loose" => Some(Self { orth_tol: 1e-6, resid_tol: 1e-6, eig_sep_tol: 1e-4, commute_tol: 1e-6 }),
            _ => None,
        }
    }

    /// Profile named by [`TOLERANCE_PROFILE_ENV`], falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(TOLERANCE_PROFILE_ENV).ok().and_then(|name| Self::profile(name.trim())).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub vectors: RealMatrix,
    /// Largest off-diagonal magnitude of `TᵀMT`.
    pub residual: f64,
}

impl SpectralDecomposition {
    /// `(max |TᵀT − I|, max_i max |M tᵢ − λᵢ tᵢ| / (1 + |λᵢ|))`
    pub fn errors(&self, m: &RealMatrix) -> (f64, f64) {
        let t = &self.vectors;
        let n = t.dim();
        let gram = &t.transpose() * t;
        let orth = (&gram - &RealMatrix::identity(n)).max_abs();
        let mut resid: f64 = 0.0;
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = t.column(i);
            let mv = m.mul_vec(&v);
            let r = mv.iter().zip(&v).fold(0.0f64, |acc, (a, b)| acc.max((a - lambda * b).abs()));
            resid = resid.max(r / (1.0 + lambda.abs()));
        }
        (orth, resid)
    }

    pub fn min_gap(&self) -> f64 {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

fn off_diagonal_mass(a: &RealMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j) * a.get(i, j);
            }
        }
    }
    s.sqrt()
}

/// Cyclic-by-rows Jacobi on a real symmetric matrix.
pub fn symm_eig_real(m: &RealMatrix, cfg: &ToleranceConfig) -> Result<SpectralDecomposition> {
    cfg.validate()?;
    let n = m.dim();
    let scale = m.frobenius().max(1.0);
    if !m.is_symmetric(cfg.resid_tol * scale) {
        let (row, col) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| (m.get(i, j) - m.get(j, i)).abs() > cfg.resid_tol * scale)
            .expect("asymmetric pair");
        return Err(Error::NotSymmetric { row, col });
    }
    let mut a = m.clone();
    let mut v = RealMatrix::identity(n);
    // Quadratic convergence makes a much tighter polish target cheap.
    let accept = cfg.resid_tol * scale;
    let polish = accept * 1e-4;
    let mut off = off_diagonal_mass(&a);
    let mut sweeps = 0;
    while off >= polish && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
        off = off_diagonal_mass(&a);
        sweeps += 1;
    }
    if off >= accept {
        return Err(Error::NoConvergence { sweeps, off_diagonal: off });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = RealMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    fix_signs(&mut vectors, cfg.resid_tol);
    let residual = (&(&vectors.transpose() * m) * &vectors).max_abs_off_diagonal();
    Ok(SpectralDecomposition { eigenvalues, vectors, residual })
}

/// Applies the rotation `J(p, q, θ)`: `A ← JᵀAJ`, `V ← VJ`.
fn rotate(a: &mut RealMatrix, v: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.dim();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

/// First component with magnitude above `tol` is made positive.
fn fix_signs(t: &mut RealMatrix, tol: f64) {
    let n = t.dim();
    for j in 0..n {
        let col = t.column(j);
        if let Some(first) = col.iter().find(|x| x.abs() > tol) {
            if *first < 0.0 {
                let flipped: Vec<f64> = col.iter().map(|x| -x).collect();
                t.set_column(j, &flipped);
            }
        }
    }
}

pub fn symm_eig(m: &RationalMatrix, cfg: &ToleranceConfig) -> Result<SpectralDecomposition> {
    m.require_symmetric()?;
    symm_eig_real(&RealMatrix::from_rational(m), cfg)
}

pub fn has_distinct_eigenvalues(d: &SpectralDecomposition, cfg: &ToleranceConfig) -> bool {
    d.eigenvalues.windows(2).all(|w| w[1] - w[0] > cfg.eig_sep_tol)
}

/// Single-linkage grouping of ascending values: consecutive values closer
/// than `tol` share a cluster.
pub fn clusters(sorted: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] >= tol {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// `‖AB − BA‖_F ≤ tol·(1 + ‖A‖_F‖B‖_F)`
pub fn commutes_within(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
    a.commutator(b).frobenius() <= tol * (1.0 + a.frobenius() * b.frobenius())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDiagonalization {
    /// Orthogonal; columns are common eigenvectors.
    pub basis: RealMatrix,
    /// Eigenvalues of the shift along each column, ascending by cluster.
    pub shift_eigenvalues: Vec<f64>,
    pub filter_eigenvalues: Vec<f64>,
    /// Column ranges of the shift's eigenvalue clusters.
    pub clusters: Vec<Range<usize>>,
    /// Largest off-diagonal magnitude of `TᵀST` and `TᵀHT`.
    pub shift_residual: f64,
    pub filter_residual: f64,
}

/// Orthogonal `T` diagonalizing both `S` and `H`: eigendecompose `S`, then
/// inside every eigenvalue cluster diagonalize `H` projected on the
/// cluster's eigenspace and rotate the basis accordingly.
pub fn joint_diagonalizer(
    s: &RationalMatrix,
    h: &RationalMatrix,
    cfg: &ToleranceConfig,
) -> Result<JointDiagonalization> {
    s.require_same_dim(h)?;
    s.require_symmetric()?;
    h.require_symmetric()?;
    joint_diagonalizer_real(&RealMatrix::from_rational(s), &RealMatrix::from_rational(h), cfg)
}

pub fn joint_diagonalizer_real(s: &RealMatrix, h: &RealMatrix, cfg: &ToleranceConfig) -> Result<JointDiagonalization> {
    if s.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: h.dim() });
    }
    if !commutes_within(h, s, cfg.commute_tol) {
        return Err(Error::NotCommuting);
    }
    let eig_s = symm_eig_real(s, cfg)?;
    let n = s.dim();
    let groups = clusters(&eig_s.eigenvalues, cfg.eig_sep_tol);
    let mut basis = eig_s.vectors.clone();
    for range in &groups {
        let m = range.len();
        if m < 2 {
            continue;
        }
        let u: Vec<Vec<f64>> = range.clone().map(|j| eig_s.vectors.column(j)).collect();
        let mut projected = RealMatrix::zeros(m);
        for a in 0..m {
            let hu = h.mul_vec(&u[a]);
            for (b, ub) in u.iter().enumerate() {
                let v: f64 = hu.iter().zip(ub).map(|(x, y)| x * y).sum();
                projected.set(b, a, v);
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let avg = 0.5 * (projected.get(a, b) + projected.get(b, a));
                projected.set(a, b, avg);
                projected.set(b, a, avg);
            }
        }
        let inner = symm_eig_real(&projected, cfg)?;
        for (k, j) in range.clone().enumerate() {
            let mut col = vec![0.0; n];
            for (a, ua) in u.iter().enumerate() {
                let w = inner.vectors.get(a, k);
                for (c, x) in col.iter_mut().zip(ua) {
                    *c += w * x;
                }
            }
            basis.set_column(j, &col);
        }
    }
    fix_signs(&mut basis, cfg.resid_tol);
    let bt = basis.transpose();
    let ds = &(&bt * s) * &basis;
    let dh = &(&bt * h) * &basis;
    Ok(JointDiagonalization {
        shift_eigenvalues: ds.diagonal(),
        filter_eigenvalues: dh.diagonal(),
        shift_residual: ds.max_abs_off_diagonal(),
        filter_residual: dh.max_abs_off_diagonal(),
        clusters: groups,
        basis,
    })
}
