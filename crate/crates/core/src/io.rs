//! The shared edge-list text format.
//!
//! ```text
//! # spine: 0 1          (optional, trees only)
//! 4 3
//! 0 1
//! 1 2
//! 2 3
//! ```
//!
//! The first non-comment line is `n m`, followed by `m` lines `u v` with
//! 0-based ids. Everything from `#` to the end of a line is ignored, except
//! that a `# spine:` comment before the header records a caterpillar spine.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::Tree;

/// A parsed edge-list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeListFile {
    pub graph: Graph,
    pub spine: Option<Vec<Vertex>>,
}

pub fn parse_edge_list(text: &str) -> Result<EdgeListFile> {
    let mut spine = None;
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, comment) = match raw.split_once('#') {
            Some((c, rest)) => (c, Some(rest)),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim_start().strip_prefix("spine:")) {
            if header.is_none() {
                let ids = rest
                    .split_whitespace()
                    .map(|tok| parse_id(tok, line_no))
                    .collect::<Result<Vec<_>>>()?;
                spine = Some(ids);
            }
        }
        let mut fields = content.split_whitespace();
        let Some(first) = fields.next() else { continue };
        let second = fields.next().ok_or_else(|| parse_error(line_no, "expected two integers"))?;
        if fields.next().is_some() {
            return Err(parse_error(line_no, "expected exactly two integers"));
        }
        let (x, y) = (parse_id(first, line_no)?, parse_id(second, line_no)?);
        match header {
            None => header = Some((x, y)),
            Some((n, _)) => {
                if x >= n || y >= n {
                    return Err(parse_error(line_no, &format!("edge ({x}, {y}) has an endpoint outside 0..{n}")));
                }
                pairs.push((x, y));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_error(0, "missing \"n m\" header"))?;
    if pairs.len() != m {
        return Err(parse_error(0, &format!("header announces {m} edges but {} were listed", pairs.len())));
    }
    Ok(EdgeListFile { graph: Graph::from_edge_list(n, pairs)?, spine })
}

pub fn read_edge_list(path: &Path) -> Result<EdgeListFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_edge_list(&text)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    read_edge_list(path).map(|f| f.graph)
}

/// Reads a tree file; a `# spine:` comment, when present, must match.
pub fn read_tree(path: &Path) -> Result<Tree> {
    let file = read_edge_list(path)?;
    match file.spine {
        Some(spine) => Tree::with_spine(file.graph, spine),
        None => Tree::from_graph(file.graph),
    }
}

pub fn format_edge_list(graph: &Graph, spine: Option<&[Vertex]>) -> String {
    let mut out = String::new();
    if let Some(spine) = spine {
        out.push_str("# spine:");
        for v in spine {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn format_tree(tree: &Tree) -> String {
    format_edge_list(tree.graph(), tree.spine())
}

pub fn write_edge_list(path: &Path, graph: &Graph, spine: Option<&[Vertex]>) -> Result<()> {
    std::fs::write(path, format_edge_list(graph, spine))?;
    Ok(())
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| parse_error(line, &format!("{tok:?} is not a non-negative integer")))
}

fn parse_error(line: usize, msg: &str) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}
