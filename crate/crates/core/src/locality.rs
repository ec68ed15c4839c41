//! Polynomial filters evaluated as rounds of neighbor exchanges over the
//! shift's support, with a message-count cost model.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational, RationalMatrix};
use crate::real::RealMatrix;

/// One sample per vertex, in the shift matrix's node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSignal {
    pub values: Vec<Rational>,
}

impl GraphSignal {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    /// Exchange rounds, equal to the filter degree.
    pub hops: usize,
    /// Off-diagonal support entries touched per round.
    pub messages_per_round: usize,
    pub total_messages: usize,
    /// `nnz / n²` of the shift used.
    pub density: f64,
}

/// Multiplication by the shift: `Sx`.
pub fn shift_signal(s: &RationalMatrix, x: &GraphSignal) -> Result<GraphSignal> {
    Ok(GraphSignal::new(s.mul_vec(&x.values)?))
}

/// Row-wise neighbor lists of a shift matrix; diagonal terms are kept apart
/// since they need no communication.
struct LocalShift<T> {
    self_weight: Vec<T>,
    neighbors: Vec<Vec<(usize, T)>>,
}

impl<T: Clone> LocalShift<T> {
    fn messages(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }
}

fn local_exact(s: &RationalMatrix) -> LocalShift<Rational> {
    let n = s.dim();
    LocalShift {
        self_weight: (0..n).map(|i| s.get(i, i).clone()).collect(),
        neighbors: (0..n)
            .map(|i| (0..n).filter(|&j| j != i && !s.get(i, j).is_zero()).map(|j| (j, s.get(i, j).clone())).collect())
            .collect(),
    }
}

fn local_real(s: &RealMatrix, zero_tol: f64) -> LocalShift<f64> {
    let n = s.dim();
    LocalShift {
        self_weight: (0..n).map(|i| s.get(i, i)).collect(),
        neighbors: (0..n)
            .map(|i| (0..n).filter(|&j| j != i && s.get(i, j).abs() > zero_tol).map(|j| (j, s.get(i, j))).collect())
            .collect(),
    }
}

fn density_of(nnz: usize, n: usize) -> f64 {
    nnz as f64 / (n * n) as f64
}

/// `h(S)x` by Horner's rule, one neighbor exchange per degree:
/// `y ← S y + h_k x`.
pub fn apply_filter_locally(
    s: &RationalMatrix,
    h: &Polynomial,
    x: &GraphSignal,
) -> Result<(GraphSignal, LocalityReport)> {
    let n = s.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let local = local_exact(s);
    let coeffs = h.coeffs();
    let mut y: Vec<Rational> = match coeffs.last() {
        Some(top) => x.values.iter().map(|v| v * top).collect(),
        None => vec![Rational::zero(); n],
    };
    let hops = h.degree().unwrap_or(0);
    for c in coeffs.iter().rev().skip(1) {
        y = (0..n)
            .map(|i| {
                let mut acc = &local.self_weight[i] * &y[i];
                for (j, w) in &local.neighbors[i] {
                    acc += w * &y[*j];
                }
                acc + c * &x.values[i]
            })
            .collect();
    }
    let messages = local.messages();
    let report = LocalityReport {
        hops,
        messages_per_round: messages,
        total_messages: hops * messages,
        density: density_of(s.nnz(), n),
    };
    Ok((GraphSignal::new(y), report))
}

/// Floating counterpart for converted shifts; entries at or below
/// `zero_tol` are treated as absent edges.
pub fn apply_filter_locally_real(
    s: &RealMatrix,
    h: &[f64],
    x: &[f64],
    zero_tol: f64,
) -> Result<(Vec<f64>, LocalityReport)> {
    let n = s.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let local = local_real(s, zero_tol);
    let mut y: Vec<f64> = match h.last() {
        Some(top) => x.iter().map(|v| v * top).collect(),
        None => vec![0.0; n],
    };
    let hops = h.len().saturating_sub(1);
    for c in h.iter().rev().skip(1) {
        y = (0..n)
            .map(|i| {
                let acc = local.self_weight[i] * y[i] + local.neighbors[i].iter().map(|(j, w)| w * y[*j]).sum::<f64>();
                acc + c * x[i]
            })
            .collect();
    }
    let nnz = s.data().iter().filter(|v| v.abs() > zero_tol).count();
    let messages = local.messages();
    Ok((
        y,
        LocalityReport {
            hops,
            messages_per_round: messages,
            total_messages: hops * messages,
            density: density_of(nnz, n),
        },
    ))
}

pub fn density(s: &RealMatrix, zero_tol: f64) -> f64 {
    density_of(s.data().iter().filter(|v| v.abs() > zero_tol).count(), s.dim())
}
