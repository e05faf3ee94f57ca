use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

mod common;
use common::{custom_filtration, euler, filtrations, graph_strategy};

use homnet::barcode_io::{export_json, import_json, render_ascii, render_svg, ASCII_INDENT};
use homnet::complex::{clique_complex, neighborhood_complex, Simplex, SimplicialComplex};
use homnet::filtration::{skeleton_filtration, validate, FilteredSimplex, Filtration, FiltrationKind};
use homnet::graph::{load_edge_list, save_edge_list, Graph};
use homnet::oracle::{betti_of_prefix, persistent_betti_direct};
use homnet::persistence::{
    barcode, betti_at, boundary_matrix, intervals, persistent_betti, reduce_with, Barcode, Reduction,
};
use homnet::rng::SeededStream;

/// Intervals crossed by the cursor column of `level` in each ASCII lane.
fn ascii_counts(text: &str, level: usize, dims: usize) -> Vec<usize> {
    let header = text.lines().next().unwrap();
    let cell: usize = header
        .split_whitespace()
        .find_map(|w| w.strip_prefix("cell="))
        .unwrap()
        .parse()
        .unwrap();
    let column = ASCII_INDENT.len() + level * cell;
    let mut counts = vec![0; dims];
    let mut lane = None;
    for line in text.lines().skip(2) {
        if let Some(rest) = line.strip_prefix('H') {
            lane = Some(rest.split_whitespace().next().unwrap().parse::<usize>().unwrap());
            continue;
        }
        if matches!(line.as_bytes().get(column), Some(b'[' | b'-')) {
            counts[lane.unwrap()] += 1;
        }
    }
    counts
}

fn attribute(element: &str, name: &str) -> String {
    let key = format!(" {name}=\"");
    let start = element.find(&key).unwrap() + key.len();
    let end = start + element[start..].find('"').unwrap();
    element[start..end].to_string()
}

fn svg_counts(svg: &str, dims: usize) -> Vec<usize> {
    let cursor = svg.lines().find(|l| l.contains("class=\"cursor\"")).unwrap();
    let x: f64 = attribute(cursor, "x1").parse().unwrap();
    let mut counts = vec![0; dims];
    for bar in svg.lines().filter(|l| l.contains("class=\"bar\"")) {
        let x1: f64 = attribute(bar, "x1").parse().unwrap();
        let x2: f64 = attribute(bar, "x2").parse().unwrap();
        if x1 <= x && x < x2 {
            counts[attribute(bar, "data-dim").parse::<usize>().unwrap()] += 1;
        }
    }
    counts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_of_boundary_vanishes(g in graph_strategy(9), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            let m = boundary_matrix(&f).unwrap();
            for j in 0..m.len() {
                let mut parity: HashMap<usize, bool> = HashMap::new();
                for &i in m.column(j) {
                    prop_assert!(i < j);
                    for &r in m.column(i) {
                        *parity.entry(r).or_default() ^= true;
                    }
                }
                prop_assert!(parity.values().all(|odd| !odd), "column {j}");
            }
        }
    }

    #[test]
    fn euler_poincare_at_every_level(g in graph_strategy(9), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            let b = barcode(&f).unwrap();
            for l in 0..f.level_count() {
                prop_assert_eq!(euler(&f.face_counts_at(l)), euler(&betti_at(&b, l).unwrap()));
            }
        }
    }

    #[test]
    fn persistent_betti_is_monotone_in_p(g in graph_strategy(9), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            let b = barcode(&f).unwrap();
            let levels = f.level_count();
            for l in 0..levels {
                let mut previous = betti_at(&b, l).unwrap();
                prop_assert_eq!(&persistent_betti(&b, l, 0).unwrap(), &previous);
                for p in 1..levels - l {
                    let current = persistent_betti(&b, l, p).unwrap();
                    prop_assert!(current.iter().zip(&previous).all(|(c, q)| c <= q));
                    previous = current;
                }
            }
        }
    }

    #[test]
    fn every_prefix_is_a_complex(g in graph_strategy(9), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            prop_assert!(validate(&f).is_ok());
            for l in 0..f.level_count() {
                let present: HashSet<&Simplex> = f.prefix(l).collect();
                for s in &present {
                    prop_assert!(s.facets().all(|face| present.contains(&face)));
                }
            }
        }
    }

    #[test]
    fn reduction_schedules_agree(g in graph_strategy(10), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            let m = boundary_matrix(&f).unwrap();
            prop_assert_eq!(reduce_with(&m, Reduction::Standard), reduce_with(&m, Reduction::Twist));
        }
    }

    #[test]
    fn engine_matches_oracle(g in graph_strategy(8), seed in any::<u64>()) {
        let k = clique_complex(&g, None).unwrap();
        for f in filtrations(&k, seed) {
            let b = barcode(&f).unwrap();
            let dims = f.exact_homology_dims();
            for l in 0..f.level_count() {
                prop_assert_eq!(betti_at(&b, l).unwrap(), betti_of_prefix(&f, l, dims - 1).unwrap());
                for p in 0..f.level_count() - l {
                    let fast = persistent_betti(&b, l, p).unwrap();
                    for (dim, &value) in fast.iter().enumerate() {
                        prop_assert_eq!(value, persistent_betti_direct(&f, l, p, dim).unwrap(), "l={} p={} k={}", l, p, dim);
                    }
                }
            }
        }
    }

    #[test]
    fn neighborhood_complex_matches_oracle(g in graph_strategy(7)) {
        let k = neighborhood_complex(&g, Some(4));
        let f = skeleton_filtration(&k);
        let b = barcode(&f).unwrap();
        for l in 0..f.level_count() {
            let dims = f.exact_homology_dims();
            prop_assert_eq!(betti_at(&b, l).unwrap(), betti_of_prefix(&f, l, dims - 1).unwrap());
        }
    }

    #[test]
    fn text_formats_round_trip(g in graph_strategy(10), seed in any::<u64>()) {
        prop_assert_eq!(&load_edge_list(&save_edge_list(&g), false).unwrap(), &g);
        let k = clique_complex(&g, Some(3)).unwrap();
        prop_assert_eq!(&SimplicialComplex::from_text(&k.to_text()).unwrap(), &k);
        for f in filtrations(&k, seed) {
            prop_assert_eq!(&Filtration::from_text(&f.to_text()).unwrap(), &f);
            let b = barcode(&f).unwrap();
            prop_assert_eq!(&import_json(&export_json(&b)).unwrap(), &b);
        }
    }

    #[test]
    fn renderings_count_betti(g in graph_strategy(9), seed in any::<u64>(), extra in 0usize..40) {
        let k = clique_complex(&g, None).unwrap();
        for f in [skeleton_filtration(&k), custom_filtration(&k, seed)] {
            let b = barcode(&f).unwrap();
            let dims = b.meta.homology_dims;
            let ascii = render_ascii(&b, f.level_count() + extra).unwrap();
            for l in 0..f.level_count() {
                let expected = betti_at(&b, l).unwrap();
                prop_assert_eq!(&ascii_counts(&ascii, l, dims), &expected);
                prop_assert_eq!(&svg_counts(&render_svg(&b, Some(l)), dims), &expected);
            }
        }
    }
}

fn shuffled_entries(k: &SimplicialComplex, stream: &mut SeededStream) -> Filtration {
    let mut simplices = k.enumerate_simplices(usize::MAX);
    stream.shuffle(&mut simplices);
    let entries = simplices
        .into_iter()
        .enumerate()
        .map(|(level, simplex)| FilteredSimplex { simplex, level })
        .collect();
    Filtration::from_entries(entries, FiltrationKind::Custom)
}

/// Every prefix closed under all proper faces, checked exhaustively.
fn prefixes_closed(f: &Filtration) -> bool {
    let mut seen: HashSet<&Simplex> = HashSet::new();
    for e in f.entries() {
        if !e.simplex.proper_faces().iter().all(|face| seen.contains(face)) {
            return false;
        }
        seen.insert(&e.simplex);
    }
    true
}

#[test]
fn validation_agrees_with_prefix_closure_on_shuffles() {
    let mut stream = SeededStream::new(2024);
    let complexes = [
        clique_complex(&Graph::complete(4), None).unwrap(),
        clique_complex(&Graph::cycle(5), None).unwrap(),
        clique_complex(&Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)], false).unwrap(), None)
            .unwrap(),
    ];
    let mut accepted = 0;
    for round in 0..10_000 {
        let f = shuffled_entries(&complexes[round % complexes.len()], &mut stream);
        let valid = validate(&f).is_ok();
        assert_eq!(valid, prefixes_closed(&f), "round {round}");
        accepted += usize::from(valid);
    }
    // both outcomes must actually occur
    assert!(accepted > 0 && accepted < 10_000, "accepted {accepted}");
}

#[test]
fn pairing_survives_reindexing() {
    // intervals computed from an explicit pairing equal the barcode shortcut
    let k = clique_complex(&Graph::complete(5), None).unwrap();
    let f = skeleton_filtration(&k);
    let pairing = reduce_with(&boundary_matrix(&f).unwrap(), Reduction::Standard);
    let from_pairing: Barcode = intervals(&pairing, &f);
    assert_eq!(from_pairing, barcode(&f).unwrap());
}
