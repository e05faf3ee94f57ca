use homnet::complex::clique_complex;
use homnet::graph::Graph;
use homnet::netgen::gen_er;

/// Triangles and 4-cliques by scanning ordered neighbor pairs.
fn naive_counts(g: &Graph) -> (usize, usize) {
    let (mut triangles, mut k4) = (0, 0);
    for u in 0..g.node_count() as u32 {
        let up: Vec<u32> = g.neighbors(u).iter().copied().filter(|&v| v > u).collect();
        for (i, &v) in up.iter().enumerate() {
            for (j, &w) in up.iter().enumerate().skip(i + 1) {
                if !g.has_edge(v, w) {
                    continue;
                }
                triangles += 1;
                k4 += up[j + 1..].iter().filter(|&&x| g.has_edge(v, x) && g.has_edge(w, x)).count();
            }
        }
    }
    (triangles, k4)
}

#[test]
fn er_clique_counts_match_naive_enumeration() {
    for seed in 1..=3 {
        let g = gen_er(2000, 0.005, seed).unwrap();
        let counts = clique_complex(&g, Some(3)).unwrap().face_counts();
        let (triangles, k4) = naive_counts(&g);
        assert_eq!(counts[0], 2000);
        assert_eq!(counts[1], g.edge_count());
        assert_eq!(counts[2], triangles, "seed {seed}");
        assert_eq!(counts.get(3).copied().unwrap_or(0), k4, "seed {seed}");
    }
}

#[test]
fn dense_graph_clique_counts() {
    let g = gen_er(60, 0.5, 7).unwrap();
    let counts = clique_complex(&g, Some(3)).unwrap().face_counts();
    let (triangles, k4) = naive_counts(&g);
    assert_eq!((counts[2], counts[3]), (triangles, k4));
}
