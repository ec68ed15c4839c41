//! The small graphs and filters used throughout the examples and checks.

use crate::exact::{rat, RationalMatrix};

fn from_rows(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("square literal")
}

/// Five-vertex star, hub first.
pub fn star_adjacency() -> RationalMatrix {
    from_rows(&[&[0, 1, 1, 1, 1], &[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0]])
}

/// Commutes with the star (both products vanish) but is no polynomial in it.
pub fn star_filter() -> RationalMatrix {
    from_rows(&[&[0, 0, 0, 0, 0], &[0, 1, -1, 0, 0], &[0, -1, 1, 0, 0], &[0, 0, 0, 0, 0], &[0, 0, 0, 0, 0]])
}

/// Star with self-loops on the first two leaves: same off-diagonal support,
/// distinct eigenvalues, commutes with [`star_filter`].
pub fn loose_star() -> RationalMatrix {
    from_rows(&[&[0, 1, 1, 1, 1], &[1, 1, 0, 0, 0], &[1, 0, 1, 0, 0], &[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0]])
}

/// Eigenvalues of [`loose_star`] to four decimals.
pub const LOOSE_STAR_EIGENVALUES: [f64; 5] = [-1.8136, 0.0, 0.4707, 1.0, 2.3429];

/// Undirected 4-cycle 1–2–3–4–1.
pub fn cycle_adjacency() -> RationalMatrix {
    from_rows(&[&[0, 1, 0, 1], &[1, 0, 1, 0], &[0, 1, 0, 1], &[1, 0, 1, 0]])
}

pub fn cycle_filter() -> RationalMatrix {
    from_rows(&[&[0, 0, -1, 1], &[0, -1, 1, 0], &[-1, 1, 0, 0], &[1, 0, 0, -1]])
}

/// Directed `n`-cycle: `(Ax)_i = x_{i−1}`.
pub fn directed_cycle(n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(n, |i, j| if (j + 1) % n == i { rat(1) } else { rat(0) })
}

pub const STAR_EDGES: &str = "1 2\n1 3\n1 4\n1 5\n";
pub const CYCLE_EDGES: &str = "1 2\n2 3\n3 4\n4 1\n";
