//! Undirected follower graphs.
//!
//! Vertices are labelled `1..=n` at every public boundary (constructors,
//! queries, file formats). Internally adjacency is stored 0-based.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::exact::IntegerMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid circulant offset {offset} for n = {n} (must lie in 1..={max})", max = n / 2)]
    InvalidOffset { offset: usize, n: usize },
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid generator spec {0:?}")]
    BadGenerator(String),
}

/// Simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Deterministic graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    Cycle,
    /// Center fixed at vertex 1.
    Star,
    Complete,
    /// Connects `i` to `((i + o - 1) mod n) + 1` for every offset `o`.
    Circulant(Vec<usize>),
}

impl Graph {
    /// Builds a graph from 1-based edge pairs. Duplicates (in either
    /// orientation) collapse to a single edge.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut g = Graph {
            n,
            adj: vec![BTreeSet::new(); n],
        };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(n, &[])
    }

    fn check_vertex(&self, v: usize) -> Result<usize, GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(v - 1)
        }
    }

    /// Adds edge `{u, v}` (1-based). Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let a = self.check_vertex(u)?;
        let b = self.check_vertex(v)?;
        if a == b {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn generate(kind: &GraphKind, n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        match kind {
            GraphKind::Path => {
                for v in 1..n {
                    g.add_edge(v, v + 1)?;
                }
            }
            GraphKind::Cycle => return Self::generate(&GraphKind::Circulant(vec![1]), n),
            GraphKind::Star => {
                for v in 2..=n {
                    g.add_edge(1, v)?;
                }
            }
            GraphKind::Complete => {
                for u in 1..=n {
                    for v in u + 1..=n {
                        g.add_edge(u, v)?;
                    }
                }
            }
            GraphKind::Circulant(offsets) => {
                for &o in offsets {
                    if o == 0 || o > n / 2 {
                        return Err(GraphError::InvalidOffset { offset: o, n });
                    }
                    for i in 1..=n {
                        g.add_edge(i, (i + o - 1) % n + 1)?;
                    }
                }
            }
        }
        Ok(g)
    }

    /// Rejection-samples an Erdős–Rényi `G(n, p)` graph until it is connected.
    pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        assert!(n >= 1, "random graph needs at least one vertex");
        assert!(p > 0.0 && p <= 1.0, "edge probability must lie in (0, 1]");
        loop {
            let mut g = Graph {
                n,
                adj: vec![BTreeSet::new(); n],
            };
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        g.adj[a].insert(b);
                        g.adj[b].insert(a);
                    }
                }
            }
            if g.is_connected() {
                return g;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as sorted 1-based pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, nbrs) in self.adj.iter().enumerate() {
            for &b in nbrs.range(a + 1..) {
                out.push((a + 1, b + 1));
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match (self.check_vertex(u), self.check_vertex(v)) {
            (Ok(a), Ok(b)) => self.adj[a].contains(&b),
            _ => false,
        }
    }

    /// Neighbour set of `i` (1-based).
    pub fn neighbors(&self, i: usize) -> Result<BTreeSet<usize>, GraphError> {
        let a = self.check_vertex(i)?;
        Ok(self.adj[a].iter().map(|&b| b + 1).collect())
    }

    pub fn degree(&self, i: usize) -> Result<usize, GraphError> {
        Ok(self.adj[self.check_vertex(i)?].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> IntegerMatrix {
        let mut l = IntegerMatrix::zeros(self.n);
        for (a, nbrs) in self.adj.iter().enumerate() {
            l[(a, a)] = BigInt::from(nbrs.len());
            for &b in nbrs {
                l[(a, b)] = BigInt::from(-1);
            }
        }
        l
    }

    /// Breadth-first sweep from vertex 1.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &self.adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    reached += 1;
                    queue.push_back(b);
                }
            }
        }
        reached == self.n
    }

    /// Vertices adjacent to every other vertex, ascending.
    pub fn center_vertices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| self.adj[a].len() == self.n - 1)
            .map(|a| a + 1)
            .collect()
    }

    /// Whether `A[i][j]` depends only on `(j - i) mod n` under the current
    /// labelling. No relabelling is attempted.
    pub fn is_circulant_labeled(&self) -> bool {
        let n = self.n;
        let first_row: Vec<bool> = (0..n).map(|b| self.adj[0].contains(&b)).collect();
        (1..n).all(|a| (0..n).all(|b| self.adj[a].contains(&b) == first_row[(b + n - a) % n]))
    }

    /// Serializes to the edge-list text format (`n m` header, one `u v` per line).
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. Blank lines and `#` comments are
    /// skipped; the edge count in the header must match the body.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut g = Self::empty(n).map_err(|e| GraphError::Parse {
            line: hline,
            msg: e.to_string(),
        })?;
        let mut count = 0;
        for (line, body) in lines {
            let [u, v] = parse_pair(line, body)?;
            g.add_edge(u, v).map_err(|e| GraphError::Parse {
                line,
                msg: e.to_string(),
            })?;
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {count}"),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Parse {
            line,
            msg: format!("expected two integers, got {:?}", text),
        });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("not a non-negative integer: {f:?}"),
        })?;
    }
    Ok(out)
}

/// Generator spec of the form `path:n`, `cycle:n`, `star:n`, `complete:n`
/// or `circulant:n:o1,o2,...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GraphKind,
    pub n: usize,
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        Graph::generate(&self.kind, self.n)
    }
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadGenerator(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let n: usize = parts.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let kind = match (parts[0], parts.len()) {
            ("path", 2) => GraphKind::Path,
            ("cycle", 2) => GraphKind::Cycle,
            ("star", 2) => GraphKind::Star,
            ("complete", 2) => GraphKind::Complete,
            ("circulant", 3) => GraphKind::Circulant(
                parts[2]
                    .split(',')
                    .map(|o| o.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(bad()),
        };
        Ok(GeneratorSpec { kind, n })
    }
}
