#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use homnet::complex::{Simplex, SimplicialComplex};
use homnet::filtration::{
    simplexwise_filtration, skeleton_filtration, FilteredSimplex, Filtration, FiltrationKind,
};
use homnet::graph::Graph;
use homnet::persistence::{barcode, betti_at, boundary_matrix, persistent_betti};
use homnet::rng::SeededStream;

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), pairs))
        })
        .prop_map(|(n, bits)| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::new(n, edges, false).unwrap()
        })
}

/// Levels that respect faces: each simplex sits at or above its facets.
pub fn custom_filtration(k: &SimplicialComplex, seed: u64) -> Filtration {
    let mut stream = SeededStream::new(seed);
    let mut level_of: HashMap<Simplex, usize> = HashMap::new();
    let mut entries = Vec::new();
    for s in k.enumerate_simplices(usize::MAX) {
        let floor = s.facets().map(|f| level_of[&f]).max().unwrap_or(0);
        let level = floor + stream.below(3);
        level_of.insert(s.clone(), level);
        entries.push(FilteredSimplex { simplex: s, level });
    }
    entries.sort_by_key(|e| e.level);
    Filtration::from_entries(entries, FiltrationKind::Custom)
}

pub fn filtrations(k: &SimplicialComplex, seed: u64) -> Vec<Filtration> {
    vec![skeleton_filtration(k), simplexwise_filtration(k), custom_filtration(k, seed)]
}

pub fn euler(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

pub fn check_boundary_squared(f: &Filtration) -> Result<(), String> {
    let m = boundary_matrix(f).map_err(|e| e.to_string())?;
    for j in 0..m.len() {
        let mut parity: HashMap<usize, bool> = HashMap::new();
        for &i in m.column(j) {
            if i >= j {
                return Err(format!("column {j} has entry {i} at or after itself"));
            }
            for &r in m.column(i) {
                *parity.entry(r).or_default() ^= true;
            }
        }
        if parity.values().any(|&odd| odd) {
            return Err(format!("boundary of boundary of column {j} is nonzero"));
        }
    }
    Ok(())
}

pub fn check_euler_poincare(f: &Filtration) -> Result<(), String> {
    let b = barcode(f).map_err(|e| e.to_string())?;
    for l in 0..f.level_count() {
        let chi_faces = euler(&f.face_counts_at(l));
        let chi_betti = euler(&betti_at(&b, l).unwrap());
        if chi_faces != chi_betti {
            return Err(format!("level {l}: face Euler {chi_faces} vs Betti Euler {chi_betti}"));
        }
    }
    Ok(())
}

pub fn check_monotone_in_p(f: &Filtration) -> Result<(), String> {
    let b = barcode(f).map_err(|e| e.to_string())?;
    let levels = f.level_count();
    for l in 0..levels {
        let mut previous = betti_at(&b, l).unwrap();
        if persistent_betti(&b, l, 0).unwrap() != previous {
            return Err(format!("level {l}: p = 0 differs from betti_at"));
        }
        for p in 1..levels - l {
            let current = persistent_betti(&b, l, p).unwrap();
            if current.iter().zip(&previous).any(|(c, q)| c > q) {
                return Err(format!("level {l}: rank grows from p = {} to {p}", p - 1));
            }
            previous = current;
        }
    }
    Ok(())
}

pub fn check_prefix_closure(f: &Filtration) -> Result<(), String> {
    for l in 0..f.level_count() {
        let present: HashSet<&Simplex> = f.prefix(l).collect();
        for s in &present {
            if let Some(face) = s.facets().find(|face| !present.contains(face)) {
                return Err(format!("level {l}: {s} present without {face}"));
            }
        }
    }
    Ok(())
}
