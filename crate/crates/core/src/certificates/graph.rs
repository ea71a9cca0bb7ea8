use serde::Serialize;

use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::precondition(format!("self-loop on node {u}")));
            }
            if u >= nodes || v >= nodes {
                return Err(Error::precondition(format!("edge ({u}, {v}) outside {nodes} nodes")));
            }
        }
        Ok(Self { nodes, edges })
    }

    /// Edge list with one `u v` pair per line; `#` starts a comment. The node
    /// count is one past the largest index mentioned.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse { line: i + 1, msg: format!("invalid edge `{line}`") })?;
            match nums[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(Error::Parse { line: i + 1, msg: "expected `u v`".into() }),
            }
        }
        let nodes = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(nodes, edges)
    }
}
