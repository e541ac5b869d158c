//! Plain-text edge lists.
//!
//! ```text
//! d-regular-multigraph <n> <m>
//! <u> <v>        (m lines, u <= v, sorted; loops as `u u`)
//! ```

use std::io::{BufRead, Write};

use super::MultiGraph;
use crate::error::{ForgeError, Result};

pub const EDGE_LIST_MAGIC: &str = "d-regular-multigraph";

pub fn write_edge_list<W: Write>(g: &MultiGraph, mut out: W) -> Result<()> {
    writeln!(out, "{EDGE_LIST_MAGIC} {} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.sorted_edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<MultiGraph> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| ForgeError::Input("empty edge list".into()))??;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(EDGE_LIST_MAGIC) {
        return Err(ForgeError::Input(format!(
            "edge list must start with `{EDGE_LIST_MAGIC} <n> <m>`, got `{header}`"
        )));
    }
    let mut field = |name: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ForgeError::Input(format!("bad or missing {name} in header")))
    };
    let n = field("vertex count")?;
    let m = field("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (k, line) in lines.enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut it = t.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => {
                return Err(ForgeError::Input(format!(
                    "line {}: expected `<u> <v>`, got `{t}`",
                    k + 2
                )))
            }
        }
    }
    if edges.len() != m {
        return Err(ForgeError::Input(format!(
            "header declares {m} edges but {} were read",
            edges.len()
        )));
    }
    MultiGraph::from_edge_list(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_sorted_and_normalized() {
        let g = MultiGraph::from_edge_list(3, &[(2, 1), (0, 0), (1, 0), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "d-regular-multigraph 3 4\n0 0\n0 1\n0 1\n1 2\n");
    }

    #[test]
    fn reader_accepts_unsorted_input() {
        let text = "d-regular-multigraph 3 3\n2 1\n0 1\n\n1 1\n";
        let g = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn reader_rejects_bad_header_and_counts() {
        assert!(read_edge_list("graph 3 1\n0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("d-regular-multigraph 3 2\n0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("d-regular-multigraph 2 1\n0 5\n".as_bytes()).is_err());
    }
}
