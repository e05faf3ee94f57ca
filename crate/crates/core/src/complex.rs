//! Simplicial complexes stored by their maximal simplices.
//!
//! A complex keeps the inclusion-maximal simplices and an optional dimension
//! cap. Faces are generated on demand by [`SimplicialComplex::enumerate_simplices`],
//! which never produces anything above the cap. Simplices order canonically by
//! `(dimension, lexicographic vertices)` and every downstream tie-break uses
//! that order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("clique complexes need an undirected graph")]
    DirectedInput,
    #[error("simplex has no vertices")]
    EmptySimplex,
    #[error("simplex repeats vertex {0}")]
    RepeatedVertex(Vertex),
    #[error("vertex {vertex} outside 0..{vertex_count}")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// A simplex: a strictly increasing list of vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(SmallVec<[Vertex; 6]>);

impl Simplex {
    /// Sorts `vertices`; rejects empty input and repeated vertices.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self, ComplexError> {
        let mut v: SmallVec<[Vertex; 6]> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(w[0]));
        }
        Ok(Self(v))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub fn from_sorted(vertices: &[Vertex]) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Self(SmallVec::from_slice(vertices))
    }

    pub fn vertex(v: Vertex) -> Self {
        Self(smallvec::smallvec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// The codimension-one faces, in the order obtained by dropping vertex
    /// `0, 1, …, dim`. Empty for vertices.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Every nonempty proper subset.
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k) - 1)
            .map(|mask| {
                Simplex((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{v}")?;
        }
        f.write_char('}')
    }
}

fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// How a complex was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Clique,
    Neighborhood,
    #[serde(rename = "open-neighborhood")]
    OpenNeighborhood,
    Explicit,
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexKind::Clique => "clique",
            ComplexKind::Neighborhood => "neighborhood",
            ComplexKind::OpenNeighborhood => "open-neighborhood",
            ComplexKind::Explicit => "explicit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    // inclusion-maximal, canonical order
    maximal: Vec<Simplex>,
    max_dim_cap: Option<usize>,
    kind: ComplexKind,
}

impl SimplicialComplex {
    /// Builds a complex generated by `simplices`; non-maximal generators are
    /// dropped.
    pub fn from_simplices(
        vertex_count: usize,
        simplices: impl IntoIterator<Item = Simplex>,
        max_dim_cap: Option<usize>,
    ) -> Result<Self, ComplexError> {
        let simplices: Vec<Simplex> = simplices.into_iter().collect();
        for s in &simplices {
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange { vertex: v, vertex_count });
            }
        }
        Ok(Self {
            vertex_count,
            maximal: keep_maximal(simplices, vertex_count),
            max_dim_cap,
            kind: ComplexKind::Explicit,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn max_dim_cap(&self) -> Option<usize> {
        self.max_dim_cap
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    /// Dimension of the uncapped complex; `None` when empty.
    pub fn natural_dimension(&self) -> Option<usize> {
        self.maximal.iter().map(Simplex::dim).max()
    }

    /// Dimension after applying the cap.
    pub fn dimension(&self) -> Option<usize> {
        let natural = self.natural_dimension()?;
        Some(self.max_dim_cap.map_or(natural, |cap| natural.min(cap)))
    }

    /// True when the cap removes simplices.
    pub fn is_truncated(&self) -> bool {
        matches!((self.natural_dimension(), self.max_dim_cap), (Some(d), Some(c)) if d > c)
    }

    /// Number of homology dimensions that are exact for the enumerated
    /// simplices: all of `0..=dim` for an untruncated complex, but only
    /// `0..cap` when the cap removed simplices.
    pub fn exact_homology_dims(&self) -> usize {
        match self.dimension() {
            None => 0,
            Some(d) if self.is_truncated() => d,
            Some(d) => d + 1,
        }
    }

    /// Returns the same complex with a (tighter) cap.
    pub fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.max_dim_cap = match (self.max_dim_cap, cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    /// All simplices of dimension `d` (respecting the cap), canonical order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<Simplex> {
        if self.max_dim_cap.is_some_and(|cap| d > cap) {
            return Vec::new();
        }
        if d == 0 {
            let used: BTreeSet<Vertex> =
                self.maximal.iter().flat_map(|s| s.vertices().iter().copied()).collect();
            return used.into_iter().map(Simplex::vertex).collect();
        }
        let mut faces: Vec<Simplex> = self
            .maximal
            .par_iter()
            .filter(|s| s.dim() >= d)
            .flat_map_iter(|s| SubsetIter::new(s.vertices(), d + 1))
            .collect();
        faces.par_sort_unstable();
        faces.dedup();
        faces
    }

    /// Every simplex of dimension `<= up_to_dim` (and within the cap),
    /// ordered by `(dimension, lexicographic)`.
    pub fn enumerate_simplices(&self, up_to_dim: usize) -> Vec<Simplex> {
        let top = match self.dimension() {
            Some(d) => d.min(up_to_dim),
            None => return Vec::new(),
        };
        let mut all = Vec::new();
        for d in 0..=top {
            all.extend(self.simplices_of_dim(d));
        }
        all
    }

    /// f-vector `(f_0, f_1, …)` up to the capped dimension.
    pub fn face_counts(&self) -> Vec<usize> {
        match self.dimension() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.simplices_of_dim(d).len()).collect(),
        }
    }

    /// The `j`-skeleton as a complex in its own right: its maximal simplices
    /// are the `j`-faces of larger maximal simplices plus the small ones.
    pub fn skeleton(&self, j: usize) -> SimplicialComplex {
        if self.dimension().is_none_or(|d| d <= j) {
            return self.clone();
        }
        // here j < dimension() <= cap, so the j-faces are all enumerable
        let mut maximal: Vec<Simplex> =
            self.maximal.iter().filter(|s| s.dim() <= j).cloned().collect();
        maximal.extend(self.simplices_of_dim(j));
        maximal.sort_unstable();
        maximal.dedup();
        SimplicialComplex {
            vertex_count: self.vertex_count,
            maximal,
            max_dim_cap: None,
            kind: self.kind,
        }
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        IncidenceMatrix { vertex_count: self.vertex_count, rows: self.maximal.clone() }
    }

    /// Complex file: `#vertices N`, optional `#maxdim K`, then one maximal
    /// simplex per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("#vertices {}\n", self.vertex_count);
        if let Some(cap) = self.max_dim_cap {
            let _ = writeln!(out, "#maxdim {cap}");
        }
        let _ = writeln!(out, "#kind {}", self.kind);
        for s in &self.maximal {
            let line: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ComplexError> {
        let mut vertex_count: Option<usize> = None;
        let mut cap = None;
        let mut kind = ComplexKind::Explicit;
        let mut simplices = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let malformed = |message: String| ComplexError::Malformed { line, message };
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                match (words.next(), words.next()) {
                    (Some("vertices"), Some(n)) => {
                        vertex_count =
                            Some(n.parse().map_err(|_| malformed(format!("bad vertex count `{n}`")))?)
                    }
                    (Some("maxdim"), Some(k)) => {
                        cap = Some(k.parse().map_err(|_| malformed(format!("bad cap `{k}`")))?)
                    }
                    (Some("kind"), Some("clique")) => kind = ComplexKind::Clique,
                    (Some("kind"), Some("neighborhood")) => kind = ComplexKind::Neighborhood,
                    (Some("kind"), Some("open-neighborhood")) => kind = ComplexKind::OpenNeighborhood,
                    _ => {}
                }
                continue;
            }
            let vertices = trimmed
                .split_whitespace()
                .map(|t| t.parse::<Vertex>().map_err(|_| malformed(format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            simplices.push(Simplex::new(vertices).map_err(|e| malformed(e.to_string()))?);
        }
        let implied = simplices
            .iter()
            .flat_map(|s| s.vertices().last().copied())
            .max()
            .map_or(0, |v| v as usize + 1);
        let vertex_count = vertex_count.unwrap_or(implied);
        let mut complex = Self::from_simplices(vertex_count, simplices, cap)?;
        complex.kind = kind;
        Ok(complex)
    }
}

/// Rows are maximal simplices, columns vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    vertex_count: usize,
    rows: Vec<Simplex>,
}

impl IncidenceMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.vertex_count
    }

    pub fn row_labels(&self) -> &[Simplex] {
        &self.rows
    }

    pub fn entry(&self, row: usize, vertex: Vertex) -> u8 {
        u8::from(self.rows[row].vertices().binary_search(&vertex).is_ok())
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.rows.len())
            .map(|r| (0..self.vertex_count as Vertex).map(|v| self.entry(r, v)).collect())
            .collect()
    }

    /// CSV with a `simplex` label column and one column per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("simplex");
        for v in 0..self.vertex_count {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
        for (r, simplex) in self.rows.iter().enumerate() {
            let label: Vec<String> = simplex.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&label.join(" "));
            for v in 0..self.vertex_count as Vertex {
                let _ = write!(out, ",{}", self.entry(r, v));
            }
            out.push('\n');
        }
        out
    }
}

/// Lexicographic `k`-subsets of a sorted vertex list.
struct SubsetIter<'a> {
    items: &'a [Vertex],
    picks: Vec<usize>,
    done: bool,
}

impl<'a> SubsetIter<'a> {
    fn new(items: &'a [Vertex], k: usize) -> Self {
        Self { items, picks: (0..k).collect(), done: k == 0 || k > items.len() }
    }
}

impl Iterator for SubsetIter<'_> {
    type Item = Simplex;

    fn next(&mut self) -> Option<Simplex> {
        if self.done {
            return None;
        }
        let out = Simplex(self.picks.iter().map(|&i| self.items[i]).collect());
        let (n, k) = (self.items.len(), self.picks.len());
        match (0..k).rev().find(|&i| self.picks[i] < n - k + i) {
            None => self.done = true,
            Some(i) => {
                self.picks[i] += 1;
                for j in i + 1..k {
                    self.picks[j] = self.picks[j - 1] + 1;
                }
            }
        }
        Some(out)
    }
}

/// Drops duplicates and every simplex strictly contained in another.
fn keep_maximal(mut simplices: Vec<Simplex>, vertex_count: usize) -> Vec<Simplex> {
    simplices.sort_unstable();
    simplices.dedup();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (i, s) in simplices.iter().enumerate() {
        for &v in s.vertices() {
            containing[v as usize].push(i);
        }
    }
    let keep: Vec<bool> = simplices
        .par_iter()
        .map(|s| {
            let pivot = s
                .vertices()
                .iter()
                .min_by_key(|&&v| containing[v as usize].len())
                .expect("simplices are nonempty");
            !containing[*pivot as usize]
                .iter()
                .any(|&j| simplices[j].dim() > s.dim() && s.is_face_of(&simplices[j]))
        })
        .collect();
    simplices.into_iter().zip(keep).filter_map(|(s, k)| k.then_some(s)).collect()
}

/// Clique (flag) complex: the maximal simplices are the maximal cliques.
pub fn clique_complex(g: &Graph, max_dim: Option<usize>) -> Result<SimplicialComplex, ComplexError> {
    if g.is_directed() {
        return Err(ComplexError::DirectedInput);
    }
    let mut maximal = maximal_cliques(g);
    maximal.sort_unstable();
    Ok(SimplicialComplex {
        vertex_count: g.node_count(),
        maximal,
        max_dim_cap: max_dim,
        kind: ComplexKind::Clique,
    })
}

/// Neighborhood complex: vertex `v` generates the simplex `{v} ∪ N_out(v)`
/// (the closed neighborhood when `g` is undirected). Equivalently the rows of
/// the adjacency matrix with its diagonal raised by one.
pub fn neighborhood_complex(g: &Graph, max_dim: Option<usize>) -> SimplicialComplex {
    let generators = (0..g.node_count() as Vertex).map(|v| {
        let mut vertices: SmallVec<[Vertex; 6]> = SmallVec::with_capacity(g.neighbors(v).len() + 1);
        let nbrs = g.neighbors(v);
        let split = nbrs.partition_point(|&w| w < v);
        vertices.extend_from_slice(&nbrs[..split]);
        vertices.push(v);
        vertices.extend_from_slice(&nbrs[split..]);
        Simplex(vertices)
    });
    SimplicialComplex {
        vertex_count: g.node_count(),
        maximal: keep_maximal(generators.collect(), g.node_count()),
        max_dim_cap: max_dim,
        kind: ComplexKind::Neighborhood,
    }
}

/// Neighborhood complex without the generating vertex: `v` contributes
/// `N_out(v)` when that set is nonempty. Vertices that appear in no
/// neighborhood are not part of the complex.
pub fn open_neighborhood_complex(g: &Graph, max_dim: Option<usize>) -> SimplicialComplex {
    let generators = (0..g.node_count() as Vertex)
        .filter(|&v| !g.neighbors(v).is_empty())
        .map(|v| Simplex::from_sorted(g.neighbors(v)));
    SimplicialComplex {
        vertex_count: g.node_count(),
        maximal: keep_maximal(generators.collect(), g.node_count()),
        max_dim_cap: max_dim,
        kind: ComplexKind::OpenNeighborhood,
    }
}

/// Maximal cliques by Bron–Kerbosch with Tomita pivoting, seeded from a
/// degeneracy ordering. Each clique is reported sorted; the list order
/// follows the outer vertex loop.
pub fn maximal_cliques(g: &Graph) -> Vec<Simplex> {
    let order = degeneracy_order(g);
    let mut rank = vec![0usize; g.node_count()];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i;
    }
    order
        .par_iter()
        .flat_map_iter(|&v| {
            let (mut later, mut earlier) = (Vec::new(), Vec::new());
            for &w in g.neighbors(v) {
                if rank[w as usize] > rank[v as usize] {
                    later.push(w);
                } else {
                    earlier.push(w);
                }
            }
            let mut found = Vec::new();
            let mut current = vec![v];
            expand(g, &mut current, later, earlier, &mut found);
            found
        })
        .collect()
}

fn expand(
    g: &Graph,
    current: &mut Vec<Vertex>,
    mut candidates: Vec<Vertex>,
    mut excluded: Vec<Vertex>,
    found: &mut Vec<Simplex>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            let mut clique = current.clone();
            clique.sort_unstable();
            found.push(Simplex(SmallVec::from_vec(clique)));
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| (intersection_size(&candidates, g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("candidates nonempty");
    let branch: Vec<Vertex> = candidates
        .iter()
        .copied()
        .filter(|w| g.neighbors(pivot).binary_search(w).is_err())
        .collect();
    for v in branch {
        let nbrs = g.neighbors(v);
        current.push(v);
        expand(g, current, intersect(&candidates, nbrs), intersect(&excluded, nbrs), found);
        current.pop();
        if let Ok(i) = candidates.binary_search(&v) {
            candidates.remove(i);
        }
        let at = excluded.partition_point(|&x| x < v);
        excluded.insert(at, v);
    }
}

fn intersect(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Smallest-last ordering via bucket queue; ties broken by vertex id.
fn degeneracy_order(g: &Graph) -> Vec<Vertex> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n as Vertex).map(|v| g.neighbors(v).len()).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].insert(v as Vertex);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut low = 0;
    for _ in 0..n {
        low = low.min(max_degree);
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("bucket nonempty");
        removed[v as usize] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                buckets[degree[w]].remove(&(w as Vertex));
                degree[w] -= 1;
                buckets[degree[w]].insert(w as Vertex);
                low = low.min(degree[w]);
            }
        }
    }
    order
}
