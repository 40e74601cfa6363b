#![allow(dead_code)]

use pathwidth_core::decomposition::bags;
use pathwidth_core::{Graph, PathDecomposition, Tag, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform choice among the legal next events at every step.
pub fn random_decomposition(n: usize, seed: u64) -> PathDecomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = vec![0u8; n];
    let mut steps = Vec::with_capacity(2 * n);
    while steps.len() < 2 * n {
        let moves: Vec<Vertex> = (0..n).filter(|&v| state[v] < 2).collect();
        let v = moves[rng.gen_range(0..moves.len())];
        steps.push((v, if state[v] == 0 { Tag::Introduce } else { Tag::Forget }));
        state[v] += 1;
    }
    PathDecomposition::from_steps(steps).unwrap()
}

/// Random subgraph of the pairs that share a bag of `p`, so `p` is valid for
/// it.
pub fn graph_under(p: &PathDecomposition, n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for bag in bags(p) {
        for (i, &u) in bag.iter().enumerate() {
            for &v in &bag[i + 1..] {
                if !g.has_edge(u, v) && rng.gen_bool(density) {
                    g.add_edge(u, v);
                }
            }
        }
    }
    g
}

/// Graph on `0..n` from a bit mask over the pairs `u < v` in lexicographic
/// order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> (bit % 64) & 1 == 1 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, any::<u64>(), 0.0..1.0f64).prop_map(|(n, seed, p)| pathwidth_core::generate::gnp(n, p, seed))
}

/// Adjacency matrix, for checks that should not reuse neighbor lists.
pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}
