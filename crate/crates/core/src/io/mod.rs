//! Graph and matrix file formats, report documents and DOT export.

pub mod dot;
pub mod report;

pub use dot::export_dot;
pub use report::*;

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Polynomial, Rational, RationalMatrix};
use crate::pattern::laplacian;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `i j [weight]` per line with 1-indexed nodes. A line `n N` fixes the
    /// node count.
    EdgeList,
    /// Whitespace-separated rows of a square matrix.
    Matrix,
}

impl InputFormat {
    /// `.edges`, `.edgelist` and `.el` are edge lists; anything else is a
    /// matrix file.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("edges" | "edgelist" | "el") => Self::EdgeList,
            _ => Self::Matrix,
        }
    }
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "edges" | "edge-list" | "edgelist" => Ok(Self::EdgeList),
            "matrix" => Ok(Self::Matrix),
            other => Err(format!("unknown format {other:?} (expected edges or matrix)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftKind {
    #[default]
    Adjacency,
    Laplacian,
    /// The matrix as given.
    Custom,
}

impl std::str::FromStr for ShiftKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adjacency" => Ok(Self::Adjacency),
            "laplacian" => Ok(Self::Laplacian),
            "custom" | "custom-matrix" => Ok(Self::Custom),
            other => Err(format!("unknown shift kind {other:?} (expected adjacency, laplacian or custom)")),
        }
    }
}

/// Upper-triangle edge weights keyed by 0-based `(i, j)` with `i ≤ j`.
pub type EdgeWeights = BTreeMap<(usize, usize), Rational>;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphData {
    /// Undirected weighted edges, 0-based with `i ≤ j`.
    Edges(EdgeWeights),
    Matrix(RationalMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    pub n: usize,
    pub data: GraphData,
    pub kind: ShiftKind,
    /// SHA-256 of the raw input, hex.
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Tokens of a line with their 1-based columns, comment stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace() || ch == ',', start) {
            (true, Some(s)) => {
                out.push((s + 1, &content[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

fn parse_index(tok: &str, line: usize, column: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(0) => Err(parse_error(line, column, "vertex indices are 1-based")),
        Ok(v) => Ok(v - 1),
        Err(_) => Err(parse_error(line, column, format!("expected a vertex index, found {tok:?}"))),
    }
}

fn parse_value(tok: &str, line: usize, column: usize) -> Result<Rational> {
    parse_rational(tok).ok_or_else(|| parse_error(line, column, format!("expected a rational number, found {tok:?}")))
}

pub fn parse_edge_list(text: &str) -> Result<(usize, EdgeWeights)> {
    let mut declared = None;
    let mut edges = EdgeWeights::new();
    let mut max_index = None::<usize>;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            [(_, "n" | "nodes"), (col, count)] => {
                let n = count
                    .parse::<usize>()
                    .map_err(|_| parse_error(line_no, *col, format!("expected a node count, found {count:?}")))?;
                declared = Some(n);
            }
            [(ci, i), (cj, j), rest @ ..] if rest.len() <= 1 => {
                let (a, b) = (parse_index(i, line_no, *ci)?, parse_index(j, line_no, *cj)?);
                let w = match rest.first() {
                    Some((cw, w)) => parse_value(w, line_no, *cw)?,
                    None => Rational::from_integer(1.into()),
                };
                let key = (a.min(b), a.max(b));
                if let Some(prev) = edges.get(&key) {
                    if *prev != w {
                        return Err(Error::AsymmetricEdge(key.0 + 1, key.1 + 1));
                    }
                }
                edges.insert(key, w);
                max_index = Some(max_index.map_or(a.max(b), |m| m.max(a).max(b)));
            }
            [(col, _), ..] => {
                return Err(parse_error(line_no, *col, "expected `i j [weight]` or `n N`"));
            }
        }
    }
    let needed = max_index.map_or(0, |m| m + 1);
    let n = match declared {
        Some(d) if d < needed => {
            return Err(parse_error(0, 0, format!("edge references vertex {needed} but n = {d}")));
        }
        Some(d) => d,
        None => needed,
    };
    if n == 0 {
        return Err(Error::Empty);
    }
    Ok((n, edges))
}

pub fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let row = toks.iter().map(|(c, t)| parse_value(t, ln + 1, *c)).collect::<Result<Vec<_>>>()?;
        rows.push((ln + 1, row));
    }
    let n = rows.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(parse_error(*line, 1, format!("expected {n} entries for a {n}x{n} matrix, found {}", r.len())));
    }
    RationalMatrix::new(rows.into_iter().map(|(_, r)| r).collect())
}

/// Rationals in order; separated by whitespace or commas.
pub fn parse_values(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        for (c, t) in tokens(line) {
            out.push(parse_value(t, ln + 1, c)?);
        }
    }
    Ok(out)
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    Ok(Polynomial::new(parse_values(text)?))
}

pub fn parse_graph_str(text: &str, format: InputFormat, kind: ShiftKind) -> Result<GraphInput> {
    let digest = digest(text.as_bytes());
    let (n, data) = match format {
        InputFormat::EdgeList => {
            let (n, edges) = parse_edge_list(text)?;
            (n, GraphData::Edges(edges))
        }
        InputFormat::Matrix => {
            let m = parse_matrix(text)?;
            (m.dim(), GraphData::Matrix(m))
        }
    };
    Ok(GraphInput { n, data, kind, digest })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_graph(path: &Path, format: Option<InputFormat>, kind: ShiftKind) -> Result<GraphInput> {
    let text = read_text(path)?;
    parse_graph_str(&text, format.unwrap_or_else(|| InputFormat::from_path(path)), kind)
}

pub fn build_shift(input: &GraphInput) -> Result<RationalMatrix> {
    let base = match &input.data {
        GraphData::Edges(edges) => {
            let mut rows = vec![vec![Rational::zero(); input.n]; input.n];
            for (&(i, j), w) in edges {
                rows[i][j] = w.clone();
                rows[j][i] = w.clone();
            }
            RationalMatrix::new(rows)?
        }
        GraphData::Matrix(m) => m.clone(),
    };
    Ok(match input.kind {
        ShiftKind::Laplacian => laplacian(&base),
        ShiftKind::Adjacency | ShiftKind::Custom => base,
    })
}

/// Matrix file text that [`parse_matrix`] reads back exactly.
pub fn format_matrix(m: &RationalMatrix) -> String {
    let mut out = m.to_string();
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn star_edge_list() {
        let g = parse_graph_str("1 2\n1 3\n1 4\n1 5\n", InputFormat::EdgeList, ShiftKind::Adjacency).unwrap();
        let s = build_shift(&g).unwrap();
        let expected = RationalMatrix::from_i64(&[
            vec![0, 1, 1, 1, 1],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
        ])
        .unwrap();
        assert_eq!(s, expected);
        assert_eq!(g.digest.len(), 64);
    }

    #[test]
    fn empty_edge_list_with_declared_size() {
        let g = parse_graph_str("# no edges\nn 3\n", InputFormat::EdgeList, ShiftKind::Adjacency).unwrap();
        assert_eq!(build_shift(&g).unwrap(), RationalMatrix::zeros(3));
        assert_eq!(parse_graph_str("", InputFormat::EdgeList, ShiftKind::Adjacency), Err(Error::Empty));
    }

    #[test]
    fn cycle_laplacian() {
        let g = parse_graph_str("1 2\n2 3\n3 4\n4 1\n", InputFormat::EdgeList, ShiftKind::Laplacian).unwrap();
        let cycle = RationalMatrix::from_i64(&[vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0]])
            .unwrap();
        assert_eq!(build_shift(&g).unwrap(), &RationalMatrix::identity(4).scale(&rat(2)) - &cycle);
    }

    #[test]
    fn weights_are_exact_and_consistent() {
        let g = parse_graph_str("1 2 0.1\n2 1 1/10\n", InputFormat::EdgeList, ShiftKind::Adjacency).unwrap();
        assert_eq!(build_shift(&g).unwrap().get(0, 1), &ratio(1, 10));
        let bad = parse_graph_str("1 2 1\n2 1 3\n", InputFormat::EdgeList, ShiftKind::Adjacency);
        assert_eq!(bad, Err(Error::AsymmetricEdge(1, 2)));
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_graph_str("1 2\n1 x\n", InputFormat::EdgeList, ShiftKind::Adjacency).unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, column: 3, message: "expected a vertex index, found \"x\"".into() });
        let err = parse_matrix("1 2\n3 4 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_matrix("1 2\n3 q\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 3, .. }));
        assert!(parse_graph_str("0 1\n", InputFormat::EdgeList, ShiftKind::Adjacency).is_err());
    }

    #[test]
    fn matrix_file_round_trip() {
        let m = RationalMatrix::new(vec![vec![ratio(1, 3), rat(-2)], vec![ratio(7, 2), rat(0)]]).unwrap();
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn polynomial_and_values() {
        assert_eq!(parse_polynomial("0, 0, 1").unwrap(), Polynomial::monomial(2));
        assert_eq!(parse_values("1 -1/2\n0.25").unwrap(), vec![rat(1), ratio(-1, 2), ratio(1, 4)]);
    }
}
