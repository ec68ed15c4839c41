use num_traits::{One, Zero};

use super::linalg::rref;
use super::{rank_rows, rat, Polynomial, Rational, RationalMatrix};

/// `det(λI − M)` by the Faddeev–LeVerrier trace recursion, exactly.
///
/// With `N₀ = 0` and `c_n = 1`: `N_k = M N_{k−1} + c_{n−k+1} I` and
/// `c_{n−k} = −tr(M N_k) / k`.
pub fn char_poly(m: &RationalMatrix) -> Polynomial {
    let n = m.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RationalMatrix::zeros(n);
    for k in 1..=n {
        acc = (m * &acc).add_scalar(&coeffs[n - k + 1]);
        let trace = (m * &acc).trace();
        coeffs[n - k] = -trace / rat(k as i64);
    }
    Polynomial::new(coeffs)
}

/// Entry positions that determine a power of `m`: everything, or just the
/// upper triangle when `m` (and so each of its powers) is symmetric.
fn determining_positions(m: &RationalMatrix) -> Vec<(usize, usize)> {
    let n = m.dim();
    let symmetric = m.is_symmetric();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !symmetric || i <= j).collect()
}

/// Monic minimal polynomial: the first power `M^k` whose vectorization is a
/// combination of `vec(I), …, vec(M^{k−1})`.
///
/// The vectorized powers are the columns of one exact elimination. The first
/// non-pivot column is `k`, and its reduced entries are the combination.
pub fn min_poly(m: &RationalMatrix) -> Polynomial {
    let n = m.dim();
    let powers = m.powers(n + 1);
    let mut rows: Vec<Vec<Rational>> = determining_positions(m)
        .into_iter()
        .map(|(i, j)| powers.iter().map(|p| p.get(i, j).clone()).collect())
        .collect();
    let pivots = rref(&mut rows, n + 1);
    let d = (0..=n).find(|k| pivots.get(*k) != Some(k)).expect("Cayley–Hamilton bounds the degree by n");
    let mut coeffs: Vec<Rational> = (0..d).map(|i| -rows[i][d].clone()).collect();
    coeffs.push(Rational::one());
    Polynomial::new(coeffs)
}

/// Rank of the stacked vectorizations of `I, M, …, M^(n−1)`.
pub fn power_rank(m: &RationalMatrix) -> usize {
    let n = m.dim();
    let rows: Vec<Vec<Rational>> = m.powers(n).iter().map(RationalMatrix::vectorize).collect();
    rank_rows(&rows, n * n).expect("uniform row length")
}
