//! Simple graphs and the plain-text edge-list format.
//!
//! Vertices are dense ids `0..node_count`. Undirected graphs keep each edge
//! once as `(min, max)`; directed graphs keep arcs `(from, to)`. Edge lists are
//! sorted, so equality of two graphs is equality of their fields.
//!
//! Edge-list format:
//!
//! ```text
//! #nodes 4          optional; node_count = max(N, 1 + largest id)
//! #directed         optional; marks arcs instead of edges
//! # anything else starting with '#' is a comment
//! 0 1
//! 1 2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

/// Vertex identifier.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: negative vertex id {value}")]
    NegativeId { line: usize, value: i64 },
    #[error("self-loop at vertex {vertex}{}", line_suffix(*.line))]
    SelfLoop { vertex: u64, line: Option<usize> },
    #[error("edge ({u}, {v}) has an endpoint outside 0..{node_count}")]
    OutOfRange { u: u64, v: u64, node_count: usize },
    #[error("vertex id {0} does not fit in 32 bits")]
    IdTooLarge(u64),
}

fn line_suffix(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

/// An immutable simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    directed: bool,
    edges: Vec<(Vertex, Vertex)>,
    // out-neighbors for directed graphs, all neighbors otherwise; sorted
    adjacency: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a validated graph. Duplicate edges are merged; for undirected
    /// graphs `(u, v)` and `(v, u)` are the same edge.
    pub fn new<I>(node_count: usize, edges: I, directed: bool) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u as u64, line: None });
            }
            if u as usize >= node_count || v as usize >= node_count {
                return Err(GraphError::OutOfRange { u: u as u64, v: v as u64, node_count });
            }
            canonical.push(if directed { (u, v) } else { (u.min(v), u.max(v)) });
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &canonical {
            adjacency[u as usize].push(v);
            if !directed {
                adjacency[v as usize].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { node_count, directed, edges: canonical, adjacency })
    }

    /// A graph with `node_count` vertices and no edges.
    pub fn empty(node_count: usize, directed: bool) -> Self {
        Self {
            node_count,
            directed,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); node_count],
        }
    }

    pub fn complete(node_count: usize) -> Self {
        let n = node_count as Vertex;
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(node_count, edges, false).expect("complete graph is simple")
    }

    pub fn cycle(node_count: usize) -> Self {
        let n = node_count as Vertex;
        Self::new(node_count, (0..n).map(|u| (u, (u + 1) % n)), false)
            .expect("cycle needs at least three vertices")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges in canonical sorted order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Sorted out-neighbors (all neighbors when undirected).
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency
            .get(u as usize)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Degree of `v`: in-degree plus out-degree for directed graphs.
    pub fn degree(&self, v: Vertex) -> usize {
        if self.directed {
            self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
        } else {
            self.adjacency[v as usize].len()
        }
    }

    fn degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0usize; self.node_count];
        for &(u, v) in &self.edges {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        degrees
    }

    /// The same vertex set with every arc turned into an undirected edge.
    pub fn to_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        Graph::new(self.node_count, self.edges.iter().copied(), false)
            .expect("arcs of a valid digraph are valid edges")
    }

    /// Mean local clustering coefficient; vertices of degree < 2 count as 0.
    /// Directed graphs are measured on their underlying undirected graph.
    pub fn mean_clustering(&self) -> f64 {
        if self.node_count == 0 {
            return 0.0;
        }
        let g = self.to_undirected();
        let mut total = 0.0;
        for v in 0..g.node_count as Vertex {
            let nbrs = g.neighbors(v);
            let k = nbrs.len();
            if k < 2 {
                continue;
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                links += nbrs[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count();
            }
            total += 2.0 * links as f64 / (k * (k - 1)) as f64;
        }
        total / g.node_count as f64
    }
}

/// Degree → number of vertices with that degree. Vertices of degree zero are
/// included, so the counts always sum to `node_count`.
pub fn degree_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for d in g.degrees() {
        *histogram.entry(d).or_insert(0) += 1;
    }
    histogram
}

/// Parses the edge-list format with dense vertex ids.
///
/// `directed` is the default orientation; a `#directed` header line forces it on.
pub fn load_edge_list(text: &str, directed: bool) -> Result<Graph, GraphError> {
    let parsed = parse_lines(text)?;
    let mut edges = Vec::with_capacity(parsed.pairs.len());
    let mut max_id: Option<u64> = None;
    for &(line, u, v) in &parsed.pairs {
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u, line: Some(line) });
        }
        let (u32_u, u32_v) = (narrow(u)?, narrow(v)?);
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u32_u, u32_v));
    }
    let from_ids = max_id.map_or(0, |m| m as usize + 1);
    let node_count = parsed.declared_nodes.unwrap_or(0).max(from_ids);
    Graph::new(node_count, edges, directed || parsed.directed)
}

/// Original ids of a remapped graph: `original[dense]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    pub original: Vec<u64>,
}

impl IdMap {
    /// Sidecar text: one `dense original` pair per line.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::from("# dense original\n");
        for (dense, original) in self.original.iter().enumerate() {
            let _ = writeln!(out, "{dense} {original}");
        }
        out
    }
}

/// Parses an edge list whose ids may be sparse, compacting them to `0..n` in
/// increasing order of the original id. A `#nodes` header is ignored since the
/// original ids carry no information about unused slots.
pub fn load_edge_list_remapped(text: &str, directed: bool) -> Result<(Graph, IdMap), GraphError> {
    let parsed = parse_lines(text)?;
    let mut ids = BTreeSet::new();
    for &(line, u, v) in &parsed.pairs {
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u, line: Some(line) });
        }
        ids.insert(u);
        ids.insert(v);
    }
    let original: Vec<u64> = ids.into_iter().collect();
    let dense = |id: u64| original.binary_search(&id).expect("collected above") as Vertex;
    let edges: Vec<_> = parsed.pairs.iter().map(|&(_, u, v)| (dense(u), dense(v))).collect();
    let graph = Graph::new(original.len(), edges, directed || parsed.directed)?;
    Ok((graph, IdMap { original }))
}

/// Serializes `g` with canonical line order; output is byte-deterministic.
pub fn save_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 12);
    let _ = writeln!(out, "#nodes {}", g.node_count());
    if g.is_directed() {
        out.push_str("#directed\n");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

struct ParsedLines {
    declared_nodes: Option<usize>,
    directed: bool,
    pairs: Vec<(usize, u64, u64)>,
}

fn parse_lines(text: &str) -> Result<ParsedLines, GraphError> {
    let mut parsed = ParsedLines { declared_nodes: None, directed: false, pairs: Vec::new() };
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            match words.next() {
                Some("nodes") => {
                    let value = words.next().ok_or_else(|| GraphError::Malformed {
                        line,
                        message: "`#nodes` header without a count".into(),
                    })?;
                    let n = value.parse::<usize>().map_err(|_| GraphError::Malformed {
                        line,
                        message: format!("invalid node count `{value}`"),
                    })?;
                    parsed.declared_nodes = Some(n);
                }
                Some("directed") => parsed.directed = true,
                _ => {}
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Malformed {
                line,
                message: format!("expected two vertex ids, found {} tokens", tokens.len()),
            });
        }
        let u = parse_id(tokens[0], line)?;
        let v = parse_id(tokens[1], line)?;
        parsed.pairs.push((line, u, v));
    }
    Ok(parsed)
}

fn parse_id(token: &str, line: usize) -> Result<u64, GraphError> {
    match token.parse::<i64>() {
        Ok(value) if value < 0 => Err(GraphError::NegativeId { line, value }),
        Ok(value) => Ok(value as u64),
        Err(_) => token.parse::<u64>().map_err(|_| GraphError::Malformed {
            line,
            message: format!("`{token}` is not an integer vertex id"),
        }),
    }
}

fn narrow(id: u64) -> Result<Vertex, GraphError> {
    Vertex::try_from(id).map_err(|_| GraphError::IdTooLarge(id))
}
