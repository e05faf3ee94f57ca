//! Seeded generators for random, exponential-degree and modular scale-free
//! networks.
//!
//! All generators draw from [`SeededStream`]; the order in which each one
//! consumes the stream is part of its contract and is documented on the
//! function, so identical parameters and seed give identical graphs across
//! releases.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::rng::SeededStream;

#[derive(Debug, Error, PartialEq)]
pub enum NetgenError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("edge-swap repair did not converge after {attempts} attempts ({remaining} bad edges left)")]
    RepairFailed { attempts: usize, remaining: usize },
}

/// Parameters of one network family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Variant {
    /// Erdős–Rényi G(n, p).
    Er { n: usize, p: f64 },
    /// Configuration model with P(k) ∝ exp(−k / k_star), k ≥ 2.
    Exp { n: usize, k_star: f64 },
    /// Growing modular scale-free network.
    Sfm { n: usize, m: usize, p0: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    #[serde(flatten)]
    pub variant: Variant,
    pub seed: u64,
}

/// A generated network plus whatever structure the model records.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub graph: Graph,
    /// Module of each vertex (modular model only).
    pub modules: Option<Vec<u32>>,
}

impl Generated {
    pub fn module_count(&self) -> Option<usize> {
        self.modules
            .as_ref()
            .map(|m| m.iter().copied().max().map_or(0, |x| x as usize + 1))
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<(), NetgenError> {
        match self.variant {
            Variant::Er { p, .. } => check_probability("p", p),
            Variant::Exp { n, k_star } => {
                if n < 4 {
                    return Err(NetgenError::InvalidParams(format!("n must be at least 4, got {n}")));
                }
                if !(k_star.is_finite() && k_star > 0.0) {
                    return Err(NetgenError::InvalidParams(format!(
                        "k_star must be positive, got {k_star}"
                    )));
                }
                Ok(())
            }
            Variant::Sfm { n, m, p0, alpha } => {
                if m < 1 {
                    return Err(NetgenError::InvalidParams("m must be at least 1".into()));
                }
                if n <= m + 1 {
                    return Err(NetgenError::InvalidParams(format!(
                        "n must exceed m + 1 (n = {n}, m = {m})"
                    )));
                }
                check_probability("p0", p0)?;
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(NetgenError::InvalidParams(format!(
                        "alpha must lie in (0, 1], got {alpha}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn generate(&self) -> Result<Generated, NetgenError> {
        match self.variant {
            Variant::Er { n, p } => Ok(Generated { graph: gen_er(n, p, self.seed)?, modules: None }),
            Variant::Exp { n, k_star } => Ok(Generated {
                graph: gen_exponential(n, k_star, self.seed)?,
                modules: None,
            }),
            Variant::Sfm { n, m, p0, alpha } => gen_sf_modular(n, m, p0, alpha, self.seed),
        }
    }
}

fn check_probability(name: &str, value: f64) -> Result<(), NetgenError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(NetgenError::InvalidParams(format!("{name} must lie in [0, 1], got {value}")))
    }
}

/// Erdős–Rényi G(n, p).
///
/// Stream: one `uniform()` per vertex pair, pairs visited as `(u, v)` with
/// `u < v` in lexicographic order; the edge is kept when the draw is `< p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, NetgenError> {
    check_probability("p", p)?;
    let mut stream = SeededStream::new(seed);
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if stream.uniform() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, edges, false).expect("pairs are distinct and in range"))
}

/// Mean of the truncated law P(k) ∝ exp(−k / k_star) on `2..=k_max`.
pub fn truncated_exponential_mean(k_star: f64, k_max: usize) -> f64 {
    let (mut mass, mut moment) = (0.0, 0.0);
    for k in 2..=k_max {
        let w = (-((k - 2) as f64) / k_star).exp();
        mass += w;
        moment += k as f64 * w;
    }
    moment / mass
}

/// Configuration-model graph with exponential target degrees.
///
/// Stream, in order:
/// 1. one `uniform()` per vertex `0..n`, inverted through the cumulative law
///    on `2..=n-1` to give its target degree;
/// 2. if the degree sum is odd, the lowest vertex below `n-1` gets +1 (no draw);
/// 3. the stub list (vertex `i` repeated `degree[i]` times, vertices ascending)
///    is shuffled with [`SeededStream::shuffle`] and consecutive stubs paired;
/// 4. repair: repeatedly take the lowest-index bad edge (a self-loop, or any
///    copy of a repeated pair), draw a partner edge with `below(|E|)` and an
///    orientation with `uniform() < 0.5`, and rewire `(a,b),(c,d)` into
///    `(a,c),(b,d)` when that creates neither loops nor repeats.
///
/// Degrees are preserved exactly by the repair.
pub fn gen_exponential(n: usize, k_star: f64, seed: u64) -> Result<Graph, NetgenError> {
    GeneratorParams { variant: Variant::Exp { n, k_star }, seed }.validate()?;
    let mut stream = SeededStream::new(seed);
    let k_max = n - 1;

    let mut cumulative = Vec::with_capacity(k_max - 1);
    let mut total = 0.0;
    for k in 2..=k_max {
        total += (-((k - 2) as f64) / k_star).exp();
        cumulative.push(total);
    }
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| {
            let target = stream.uniform() * total;
            let index = cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1);
            index + 2
        })
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let v = degrees.iter().position(|&d| d < k_max).expect("some degree below n-1");
        degrees[v] += 1;
    }

    let mut stubs: Vec<Vertex> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v as Vertex, d))
        .collect();
    stream.shuffle(&mut stubs);
    let mut edges: Vec<(Vertex, Vertex)> =
        stubs.chunks_exact(2).map(|pair| ordered(pair[0], pair[1])).collect();

    repair_multigraph(&mut edges, &mut stream)?;
    Ok(Graph::new(n, edges, false).expect("repair leaves a simple graph"))
}

fn ordered(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

fn repair_multigraph(
    edges: &mut [(Vertex, Vertex)],
    stream: &mut SeededStream,
) -> Result<(), NetgenError> {
    let mut multiplicity: HashMap<(Vertex, Vertex), u32> = HashMap::new();
    for &e in edges.iter() {
        *multiplicity.entry(e).or_insert(0) += 1;
    }
    let is_bad = |e: (Vertex, Vertex), multiplicity: &HashMap<(Vertex, Vertex), u32>| {
        e.0 == e.1 || multiplicity[&e] > 1
    };
    let limit = 100 * edges.len().max(10);
    let mut attempts = 0;
    let mut cursor = 0;
    while cursor < edges.len() {
        if !is_bad(edges[cursor], &multiplicity) {
            cursor += 1;
            continue;
        }
        if attempts >= limit {
            let remaining = edges.iter().filter(|&&e| is_bad(e, &multiplicity)).count();
            return Err(NetgenError::RepairFailed { attempts, remaining });
        }
        attempts += 1;
        let other = stream.below(edges.len());
        let flip = stream.uniform() < 0.5;
        if other == cursor {
            continue;
        }
        let (a, b) = edges[cursor];
        let (c, d) = if flip { (edges[other].1, edges[other].0) } else { edges[other] };
        if a == c || b == d {
            continue;
        }
        let (first, second) = (ordered(a, c), ordered(b, d));
        if first == second || multiplicity.contains_key(&first) || multiplicity.contains_key(&second) {
            continue;
        }
        for old in [edges[cursor], edges[other]] {
            let count = multiplicity.get_mut(&old).expect("tracked");
            *count -= 1;
            if *count == 0 {
                multiplicity.remove(&old);
            }
        }
        edges[cursor] = first;
        edges[other] = second;
        multiplicity.insert(first, 1);
        multiplicity.insert(second, 1);
        // the partner may have been an earlier bad edge that is now fixed,
        // or a good edge; either way nothing before `cursor` became bad
    }
    Ok(())
}

/// Growing modular scale-free network.
///
/// Vertices `0..=m` form a clique that founds module 0. Each later vertex `v`:
///
/// 1. draws `uniform()`; below `p0` it founds a new module and links once to a
///    vertex chosen preferentially (weight `k + 1`) among all earlier vertices;
/// 2. otherwise it joins the module of an earlier vertex drawn with
///    `below(v)` (module choice ∝ size) and adds `min(m, size)` links inside
///    that module. If the module has at most `m` members it links to all of
///    them. Otherwise the first target is preferential within the module; each
///    further link draws `uniform()` and, below `1 - alpha`, forms a triad by
///    picking `below(c)` among the `c` eligible neighbors of the previous
///    target (same module, not yet linked); with no eligible neighbor, or at
///    or above `1 - alpha`, it takes a fresh preferential target.
///
/// Preferential draws use an endpoint list in which each vertex appears once
/// plus once per incident edge; a draw is `below(len)` repeated until it hits
/// a vertex not already linked to `v`.
pub fn gen_sf_modular(
    n: usize,
    m: usize,
    p0: f64,
    alpha: f64,
    seed: u64,
) -> Result<Generated, NetgenError> {
    GeneratorParams { variant: Variant::Sfm { n, m, p0, alpha }, seed }.validate()?;
    let mut stream = SeededStream::new(seed);
    let mut growth = Growth::new(n);

    let seed_size = m + 1;
    growth.modules.push(Vec::new());
    growth.weighted.push(Vec::new());
    for v in 0..seed_size as Vertex {
        growth.add_vertex(v, 0);
        for u in 0..v {
            growth.link(v, u);
        }
    }

    for v in seed_size as Vertex..n as Vertex {
        if stream.uniform() < p0 {
            let target = draw_preferential(&growth.global, &[], &mut stream);
            let module = growth.modules.len() as u32;
            growth.modules.push(Vec::new());
            growth.weighted.push(Vec::new());
            growth.add_vertex(v, module);
            growth.link(v, target);
            continue;
        }
        let module = growth.module_of[stream.below(v as usize)];
        let members = growth.modules[module as usize].clone();
        let mut targets: Vec<Vertex> = Vec::with_capacity(m);
        if members.len() <= m {
            targets = members;
        } else {
            let first = draw_preferential(&growth.weighted[module as usize], &targets, &mut stream);
            targets.push(first);
            let mut previous = first;
            while targets.len() < m {
                let triad = stream.uniform() < 1.0 - alpha;
                let next = if triad {
                    let eligible: Vec<Vertex> = growth.adjacency[previous as usize]
                        .iter()
                        .copied()
                        .filter(|&w| growth.module_of[w as usize] == module && !targets.contains(&w))
                        .collect();
                    if eligible.is_empty() {
                        None
                    } else {
                        Some(eligible[stream.below(eligible.len())])
                    }
                } else {
                    None
                };
                let next = next.unwrap_or_else(|| {
                    draw_preferential(&growth.weighted[module as usize], &targets, &mut stream)
                });
                targets.push(next);
                previous = next;
            }
        }
        growth.add_vertex(v, module);
        for t in targets {
            growth.link(v, t);
        }
    }

    let edges = growth.edges;
    let graph = Graph::new(n, edges, false).expect("growth never repeats a link");
    Ok(Generated { graph, modules: Some(growth.module_of) })
}

struct Growth {
    module_of: Vec<u32>,
    modules: Vec<Vec<Vertex>>,
    adjacency: Vec<Vec<Vertex>>,
    // endpoint lists: vertex multiplicity = degree + 1
    weighted: Vec<Vec<Vertex>>,
    global: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Growth {
    fn new(n: usize) -> Self {
        Self {
            module_of: Vec::with_capacity(n),
            modules: Vec::new(),
            adjacency: Vec::with_capacity(n),
            weighted: Vec::new(),
            global: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn add_vertex(&mut self, v: Vertex, module: u32) {
        debug_assert_eq!(v as usize, self.module_of.len());
        self.module_of.push(module);
        self.modules[module as usize].push(v);
        self.adjacency.push(Vec::new());
        self.weighted[module as usize].push(v);
        self.global.push(v);
    }

    fn link(&mut self, a: Vertex, b: Vertex) {
        self.adjacency[a as usize].push(b);
        self.adjacency[b as usize].push(a);
        for x in [a, b] {
            self.weighted[self.module_of[x as usize] as usize].push(x);
            self.global.push(x);
        }
        self.edges.push(ordered(a, b));
    }
}

fn draw_preferential(pool: &[Vertex], exclude: &[Vertex], stream: &mut SeededStream) -> Vertex {
    loop {
        let candidate = pool[stream.below(pool.len())];
        if !exclude.contains(&candidate) {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::save_edge_list;

    #[test]
    fn er_extremes() {
        let g = gen_er(5, 0.0, 11).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 0));
        assert_eq!(gen_er(4, 1.0, 11).unwrap(), Graph::complete(4));
    }

    #[test]
    fn er_rejects_bad_probability() {
        assert!(matches!(gen_er(10, 1.5, 1), Err(NetgenError::InvalidParams(_))));
        assert!(matches!(gen_er(10, -0.1, 1), Err(NetgenError::InvalidParams(_))));
    }

    #[test]
    fn exponential_validation() {
        assert!(gen_exponential(3, 9.2, 1).is_err());
        assert!(gen_exponential(10, 0.0, 1).is_err());
    }

    #[test]
    fn exponential_mean_matches_closed_form() {
        // Untruncated shifted geometric: 2 + q / (1 - q), q = exp(-1/k*).
        let q = (-1.0f64 / 9.2).exp();
        let closed = 2.0 + q / (1.0 - q);
        assert!((truncated_exponential_mean(9.2, 1699) - closed).abs() < 1e-9);
    }

    #[test]
    fn sfm_validation() {
        assert!(gen_sf_modular(6, 5, 0.1, 0.5, 1).is_err());
        assert!(gen_sf_modular(100, 0, 0.1, 0.5, 1).is_err());
        assert!(gen_sf_modular(100, 3, 0.1, 0.0, 1).is_err());
        assert!(gen_sf_modular(100, 3, 1.1, 0.5, 1).is_err());
    }

    #[test]
    fn sfm_without_new_modules_has_one_module() {
        let out = gen_sf_modular(300, 5, 0.0, 0.6, 4).unwrap();
        assert_eq!(out.module_count(), Some(1));
        // clique on 6 vertices plus 5 links per later vertex
        assert_eq!(out.graph.edge_count(), 15 + 5 * (300 - 6));
    }

    #[test]
    fn sfm_seed_clique_and_determinism() {
        let a = gen_sf_modular(200, 3, 0.05, 0.6, 9).unwrap();
        let b = gen_sf_modular(200, 3, 0.05, 0.6, 9).unwrap();
        assert_eq!(save_edge_list(&a.graph), save_edge_list(&b.graph));
        for u in 0..4 {
            for v in u + 1..4 {
                assert!(a.graph.has_edge(u, v));
            }
        }
    }

    #[test]
    fn params_round_trip_through_json() {
        let params = GeneratorParams {
            variant: Variant::Sfm { n: 1000, m: 5, p0: 0.007, alpha: 0.6 },
            seed: 1,
        };
        let text = serde_json::to_string(&params).unwrap();
        assert_eq!(text, r#"{"model":"sfm","n":1000,"m":5,"p0":0.007,"alpha":0.6,"seed":1}"#);
        assert_eq!(serde_json::from_str::<GeneratorParams>(&text).unwrap(), params);
    }
}
