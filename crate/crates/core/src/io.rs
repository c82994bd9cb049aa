//! The `.3g` text format.
//!
//! ```text
//! # optional comment lines
//! 3graph <n> <m>
//! a b c        (m lines, 0 <= a < b < c < n)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::ThreeGraph;

pub fn parse_3g(text: &str) -> Result<ThreeGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "3graph" {
        return Err(Error::Parse { line: hline, msg: "expected `3graph <n> <m>`".into() });
    }
    let num = |s: &str, line: usize| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse { line, msg: format!("`{s}` is not a count") })
    };
    let n = num(parts[1], hline)?;
    let m = num(parts[2], hline)?;
    let mut triples = Vec::with_capacity(m);
    for (line, l) in lines {
        let v: Vec<usize> = l.split_whitespace().map(|s| num(s, line)).collect::<Result<_>>()?;
        if v.len() != 3 {
            return Err(Error::Parse { line, msg: "expected three vertices".into() });
        }
        if !(v[0] < v[1] && v[1] < v[2]) {
            return Err(Error::Parse { line, msg: "vertices must be strictly increasing".into() });
        }
        if v[2] >= n {
            return Err(Error::Parse { line, msg: format!("vertex {} out of range", v[2]) });
        }
        triples.push([v[0], v[1], v[2]]);
    }
    if triples.len() != m {
        return Err(Error::Parse { line: hline, msg: format!("header promises {m} edges, found {}", triples.len()) });
    }
    let g = ThreeGraph::build(n, triples)?;
    if g.edge_count() != m {
        return Err(Error::Parse { line: hline, msg: "duplicate edges".into() });
    }
    Ok(g)
}

pub fn write_3g(g: &ThreeGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "3graph {} {}", g.n(), g.edge_count());
    for t in g.edges() {
        let _ = writeln!(s, "{t}");
    }
    s
}

pub fn read_3g_file(path: impl AsRef<Path>) -> Result<ThreeGraph> {
    parse_3g(&std::fs::read_to_string(path)?)
}

pub fn write_3g_file(path: impl AsRef<Path>, g: &ThreeGraph) -> Result<()> {
    std::fs::write(path, write_3g(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let text = "3graph 5 3\n0 1 2\n0 3 4\n1 2 3\n";
        let g = parse_3g(text).unwrap();
        assert_eq!(write_3g(&g), text);
    }

    #[test]
    fn comments_and_order() {
        let g = parse_3g("# demo\n3graph 4 2\n# edge list\n1 2 3\n0 1 2\n").unwrap();
        assert_eq!(write_3g(&g), "3graph 4 2\n0 1 2\n1 2 3\n");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_3g("").is_err());
        assert!(parse_3g("graph 3 1\n0 1 2\n").is_err());
        assert!(parse_3g("3graph 3 2\n0 1 2\n").is_err());
        assert!(parse_3g("3graph 3 1\n0 2 1\n").is_err());
        assert!(parse_3g("3graph 3 1\n0 1 3\n").is_err());
        assert!(parse_3g("3graph 3 2\n0 1 2\n0 1 2\n").is_err());
    }
}
