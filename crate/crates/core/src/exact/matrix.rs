use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rat, Rational};
use crate::error::{Error, Result};

/// Dense square matrix over exact rationals, stored row-major.
///
/// The symmetry flag is computed once at construction and is always exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
    symmetric: bool,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NotSquare { rows: n, row, cols: r.len() });
        }
        Ok(Self::from_vec(n, rows.into_iter().flatten().collect()))
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Like [`RationalMatrix::new`] but rejects non-symmetric input.
    pub fn symmetric(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = Self::new(rows)?;
        m.require_symmetric()?;
        Ok(m)
    }

    pub(crate) fn from_vec(n: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| entries[i * n + j] == entries[j * n + i]));
        Self { n, entries, symmetric }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self::from_vec(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i].clone() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            return Ok(());
        }
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        unreachable!("symmetry flag out of sync")
    }

    pub fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_vec(self.n, self.entries.iter().map(|x| x * c).collect())
    }

    /// `self + c·I`
    pub fn add_scalar(&self, c: &Rational) -> Self {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            entries[i * n + i] += c;
        }
        Self::from_vec(n, entries)
    }

    /// Row-major vectorization (`vec` in the row-major sense).
    pub fn vectorize(&self) -> Vec<Rational> {
        self.entries.clone()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `I, M, M², …, M^(count-1)`
    pub fn powers(&self, count: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(Self::identity(self.n));
        for k in 1..count {
            let next = &out[k - 1] * self;
            out.push(next);
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(self.rows().map(|row| row.iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(self * other)
    }

    /// `HS − SH`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(&(self * other) - &(other * self))
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(super::to_f64).collect()).collect()
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        RationalMatrix::from_vec(n, entries)
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix sum");
        RationalMatrix::from_vec(self.n, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix difference");
        RationalMatrix::from_vec(self.n, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;

    fn neg(self) -> RationalMatrix {
        RationalMatrix::from_vec(self.n, self.entries.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
