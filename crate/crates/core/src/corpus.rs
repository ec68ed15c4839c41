//! Reproducible random symmetric rational matrices for property checks.
//!
//! Entries rotate through the [`CorpusKind`] families so that both verdicts
//! of the shift-enabled test show up in quantity.

use num_traits::Zero;
use rand::Rng;

use crate::exact::{rat, Rational, RationalMatrix};
use crate::pattern::{random_weight, trial_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    /// Random `k/16` weights on most entries; almost always shift-enabled.
    Weighted,
    /// 0/1 adjacency of a random simple graph; often degenerate.
    Graph,
    /// `Q D Qᵀ` for an integer diagonal with a repeated entry and a product of
    /// rational reflections `Q`. Never shift-enabled, still exactly rational.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub index: usize,
    pub kind: CorpusKind,
    pub matrix: RationalMatrix,
    /// Diagonal spectrum for [`CorpusKind::Degenerate`] entries, sorted.
    pub spectrum: Option<Vec<Rational>>,
}

/// `I − 2vvᵀ/(vᵀv)`, a symmetric orthogonal reflection with rational entries.
pub fn householder(v: &[Rational]) -> RationalMatrix {
    let norm2: Rational = v.iter().map(|x| x * x).sum();
    let n = v.len();
    if norm2.is_zero() {
        return RationalMatrix::identity(n);
    }
    let two = rat(2);
    RationalMatrix::from_fn(n, |i, j| {
        let delta = if i == j { rat(1) } else { rat(0) };
        delta - &two * &v[i] * &v[j] / &norm2
    })
}

/// Symmetric matrix whose upper-triangle entries (diagonal included when
/// `with_diagonal`) come from `entry`, in row-major order.
fn symmetric_from(n: usize, with_diagonal: bool, mut entry: impl FnMut() -> Rational) -> RationalMatrix {
    let mut upper = std::collections::HashMap::new();
    for i in 0..n {
        for j in i..n {
            if i < j || with_diagonal {
                upper.insert((i, j), entry());
            }
        }
    }
    RationalMatrix::from_fn(n, |i, j| upper.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(|| rat(0)))
}

fn weighted(n: usize, rng: &mut impl Rng) -> RationalMatrix {
    symmetric_from(n, true, || if rng.gen_bool(0.7) { random_weight(rng) } else { rat(0) })
}

fn graph(n: usize, rng: &mut impl Rng) -> RationalMatrix {
    symmetric_from(n, false, || if rng.gen_bool(0.5) { rat(1) } else { rat(0) })
}

fn degenerate(n: usize, rng: &mut impl Rng) -> (RationalMatrix, Vec<Rational>) {
    let mut values: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n - 1));
    let b = if b >= a { b + 1 } else { b };
    values[b] = values[a];
    let d = RationalMatrix::diagonal(&values.iter().map(|&x| rat(x)).collect::<Vec<_>>());
    let mut q = RationalMatrix::identity(n);
    for _ in 0..2 {
        let v: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
        q = &q * &householder(&v);
    }
    let m = &(&q * &d) * &q.transpose();
    values.sort_unstable();
    (m, values.into_iter().map(rat).collect())
}

/// `count` matrices with `1 ≤ n ≤ max_n` (degenerate ones need `n ≥ 2`).
pub fn seeded_corpus(seed: u64, count: usize, max_n: usize) -> Vec<CorpusEntry> {
    (0..count)
        .map(|index| {
            let mut rng = trial_rng(seed, index as u64);
            let kind = [CorpusKind::Weighted, CorpusKind::Graph, CorpusKind::Degenerate][index % 3];
            let lo = if kind == CorpusKind::Degenerate { 2 } else { 1 };
            let n = rng.gen_range(lo..=max_n.max(lo));
            let (matrix, spectrum) = match kind {
                CorpusKind::Weighted => (weighted(n, &mut rng), None),
                CorpusKind::Graph => (graph(n, &mut rng), None),
                CorpusKind::Degenerate => {
                    let (m, s) = degenerate(n, &mut rng);
                    (m, Some(s))
                }
            };
            CorpusEntry { index, kind, matrix, spectrum }
        })
        .collect()
}
