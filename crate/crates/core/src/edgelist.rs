//! Plain-text edge list ingestion.
//!
//! Format: one `u v` pair per line, whitespace-separated node tokens.
//! Tokens are mapped to indices `0..n−1` in first-seen order; duplicate and
//! reversed pairs are deduplicated; self-loops are rejected. Blank lines and
//! lines starting with `#` are skipped.

use std::collections::HashMap;

use crate::error::Error;
use crate::sbm::Graph;
use crate::Result;

/// A parsed edge list: the graph plus the node names in index order.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    pub names: Vec<String>,
}

/// Parse edge-list text. Node count is inferred from the tokens seen.
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new(); // (u, v, line)

    for (lineno, line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_num,
                    message: format!("expected two node tokens, got {trimmed:?}"),
                })
            }
        };
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_num,
                message: format!("trailing tokens after edge pair in {trimmed:?}"),
            });
        }
        let mut intern = |tok: &str| -> usize {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                names.push(tok.to_string());
                names.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        if u == v {
            return Err(Error::Parse {
                line: line_num,
                message: format!("self-loop on node {a:?} rejected"),
            });
        }
        pairs.push((u, v, line_num));
    }

    let mut graph = Graph::empty(names.len());
    for (u, v, _) in pairs {
        graph.add_edge(u, v)?; // dedupes reversed/duplicate pairs internally
    }
    Ok(EdgeList { graph, names })
}
