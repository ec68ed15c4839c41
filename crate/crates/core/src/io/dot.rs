use crate::exact::RationalMatrix;
use num_traits::Zero;

/// Graphviz text for the shift's support, 1-indexed nodes. Symmetric
/// matrices export as undirected graphs.
pub fn export_dot(m: &RationalMatrix) -> String {
    let n = m.dim();
    let undirected = m.is_symmetric();
    let (header, arrow) = if undirected { ("graph", "--") } else { ("digraph", "->") };
    let mut out = format!("{header} shift {{\n");
    for i in 0..n {
        out.push_str(&format!("  {};\n", i + 1));
    }
    for i in 0..n {
        let start = if undirected { i } else { 0 };
        for j in start..n {
            let w = m.get(i, j);
            if w.is_zero() {
                continue;
            }
            // Row i, column j: the shift moves mass from j to i.
            let (from, to) = if undirected { (i, j) } else { (j, i) };
            out.push_str(&format!("  {} {arrow} {} [weight=\"{w}\"];\n", from + 1, to + 1));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn undirected_star() {
        let m = RationalMatrix::from_i64(&[vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        let dot = export_dot(&m);
        assert!(dot.starts_with("graph shift {"));
        assert!(dot.contains("1 -- 2 [weight=\"1\"]"));
        assert!(dot.contains("1 -- 3"));
        assert!(!dot.contains("2 -- 1"));
    }

    #[test]
    fn directed_cycle() {
        let n = 3;
        let m = RationalMatrix::from_fn(n, |i, j| if (j + 1) % n == i { rat(1) } else { rat(0) });
        let dot = export_dot(&m);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("1 -> 2") && dot.contains("2 -> 3") && dot.contains("3 -> 1"));
    }
}
