//! Exact Gaussian elimination. Pivoting is deterministic: the pivot for a
//! column is the first remaining row with a nonzero entry there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{normalize_integer, Rational, RationalMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Consistent {
        /// Solution with every free variable set to zero.
        particular: Vec<Rational>,
        homogeneous: Vec<Vec<Rational>>,
    },
    Inconsistent {
        /// Integer vector `y`, coprime with positive leading entry, such that
        /// `yᵀA = 0` and `yᵀb ≠ 0`.
        certificate: Vec<Rational>,
    },
}

impl SolveOutcome {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SolveOutcome::Consistent { .. })
    }
}

fn check_shape(rows: &[Vec<Rational>], cols: usize) -> Result<()> {
    match rows.iter().find(|r| r.len() != cols) {
        Some(r) => Err(Error::DimensionMismatch { expected: cols, found: r.len() }),
        None => Ok(()),
    }
}

/// Row scaled by the lcm of its denominators, with content removed.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Elimination runs on integer rows with fraction-free updates and content
/// removal, dividing by the pivots only once at the end. The reduced form is
/// unique, so the result is the one plain rational elimination gives, just
/// without a gcd per arithmetic step.
pub(crate) fn rref(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == ints.len() {
            break;
        }
        let Some(p) = (r..ints.len()).find(|&i| !ints[i][c].is_zero()) else {
            continue;
        };
        ints.swap(r, p);
        let (top, rest) = ints.split_at_mut(r);
        let (pivot_row, below) = rest.split_first_mut().expect("pivot row");
        let pv = &pivot_row[c];
        for other in top.iter_mut().chain(below.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let g = pv.gcd(&other[c]);
            let (a, b) = (pv / &g, &other[c] / &g);
            for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x *= &a;
                    }
                } else {
                    *x = &*x * &a - &b * y;
                }
            }
            remove_content(other);
        }
        pivots.push(c);
        r += 1;
    }
    for (i, (row, out)) in ints.into_iter().zip(rows.iter_mut()).enumerate() {
        let lead = pivots.get(i).map(|&c| row[c].clone()).unwrap_or_else(BigInt::one);
        *out = row.into_iter().map(|x| Rational::new(x, lead.clone())).collect();
    }
    pivots
}

pub fn rank_rows(rows: &[Vec<Rational>], cols: usize) -> Result<usize> {
    check_shape(rows, cols)?;
    let mut work = rows.to_vec();
    Ok(rref(&mut work, cols).len())
}

fn nullspace_rows(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank_exact(m: &RationalMatrix) -> usize {
    let rows: Vec<Vec<Rational>> = m.rows().map(<[Rational]>::to_vec).collect();
    rank_rows(&rows, m.dim()).expect("square matrix")
}

/// Exact basis of `{x : Mx = 0}` (for a general row list, see
/// [`nullspace_of_rows`]).
pub fn nullspace_exact(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = m.rows().map(<[Rational]>::to_vec).collect();
    nullspace_rows(&rows, m.dim())
}

pub fn nullspace_of_rows(rows: &[Vec<Rational>], cols: usize) -> Result<Vec<Vec<Rational>>> {
    check_shape(rows, cols)?;
    Ok(nullspace_rows(rows, cols))
}

/// Decides `A x = b` exactly. `a` is given as rows with `cols` columns.
pub fn solve_exact(a: &[Vec<Rational>], cols: usize, b: &[Rational]) -> Result<SolveOutcome> {
    check_shape(a, cols)?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(SolveOutcome::Inconsistent { certificate: certificate(a, cols, b) });
    }
    let mut particular = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = aug[row][cols].clone();
    }
    let homogeneous = nullspace_rows(a, cols);
    Ok(SolveOutcome::Consistent { particular, homogeneous })
}

/// Fredholm alternative: when `Ax = b` has no solution, `yᵀA = 0, yᵀb = 1`
/// does. Solved as the transposed system and normalized to integers.
fn certificate(a: &[Vec<Rational>], cols: usize, b: &[Rational]) -> Vec<Rational> {
    let m = a.len();
    let mut rows: Vec<Vec<Rational>> = (0..cols)
        .map(|j| {
            let mut r: Vec<Rational> = a.iter().map(|row| row[j].clone()).collect();
            r.push(Rational::zero());
            r
        })
        .collect();
    let mut last = b.to_vec();
    last.push(Rational::one());
    rows.push(last);
    let pivots = rref(&mut rows, m + 1);
    debug_assert_ne!(pivots.last(), Some(&m), "transposed system must be consistent");
    let mut y = vec![Rational::zero(); m];
    for (row, &p) in pivots.iter().enumerate() {
        y[p] = rows[row][m].clone();
    }
    normalize_integer(&y)
}
