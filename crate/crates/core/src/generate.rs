//! Graph families used as test corpora and benchmark inputs.
//!
//! Each generator notes the path-width of what it builds where that is known.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("{family} needs {what}")]
    Parameter { family: &'static str, what: &'static str },
}

/// A named family plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Grid { rows: usize, cols: usize },
    RandomTree { n: usize, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
    /// [`decorated`] on `n` vertices.
    Decorated { n: usize },
}

impl Family {
    pub fn build(&self) -> Result<Graph, GenerateError> {
        Ok(match *self {
            Family::Path { n } => path(n),
            Family::Cycle { n } => {
                if n < 3 {
                    return Err(GenerateError::Parameter { family: "cycle", what: "n >= 3" });
                }
                cycle(n)
            }
            Family::Complete { n } => complete(n),
            Family::Grid { rows, cols } => grid(rows, cols),
            Family::RandomTree { n, seed } => random_tree(n, seed),
            Family::Gnp { n, p, seed } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(GenerateError::Probability(p));
                }
                gnp(n, p, seed)
            }
            Family::Decorated { n } => decorated(n),
        })
    }
}

/// Path `0 - 1 - ... - (n-1)`; path-width 1 for `n >= 2`.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v);
    }
    g
}

/// Cycle on `n >= 3` vertices; path-width 2.
pub fn cycle(n: usize) -> Graph {
    let mut g = path(n);
    if n >= 3 {
        g.add_edge(0, n - 1);
    }
    g
}

/// Complete graph; path-width `n - 1`.
pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// `rows x cols` grid, vertex `r * cols + c`; path-width `min(rows, cols)`
/// when both are at least 2.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut g = Graph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1);
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols);
            }
        }
    }
    g
}

/// Uniform random recursive tree: vertex `i` attaches to a random earlier one.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        g.add_edge(parent, v);
    }
    g
}

/// Erdős–Rényi graph; each pair `u < v` in lexicographic order is kept with
/// probability `p`. Deterministic per seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Spine path of `spine` vertices with a repeating pattern of decorations:
/// a pendant leaf, a pendant triangle, a pendant path of two, nothing.
/// Path-width at most 2 (exactly 2 once a triangle hangs off an inner
/// spine vertex).
pub fn decorated_path(spine: usize) -> Graph {
    let mut edges = Vec::new();
    let mut next = spine;
    for s in 0..spine {
        if s + 1 < spine {
            edges.push((s, s + 1));
        }
        match s % 4 {
            0 => {
                edges.push((s, next));
                next += 1;
            }
            1 => {
                edges.extend([(s, next), (s, next + 1), (next, next + 1)]);
                next += 2;
            }
            2 => {
                edges.extend([(s, next), (next, next + 1)]);
                next += 2;
            }
            _ => {}
        }
    }
    Graph::from_edges(next, edges).expect("generated edges are valid")
}

/// The first `n` vertices of a long enough [`decorated_path`]: the whole
/// spine plus the decorations of its first part. Path-width at most 2.
pub fn decorated(n: usize) -> Graph {
    // every 4 spine vertices carry 5 decoration vertices
    let mut spine = (4 * n).div_ceil(9);
    while decorated_path(spine).vertex_count() < n {
        spine += 1;
    }
    let g = decorated_path(spine);
    let keep: Vec<usize> = (0..n).collect();
    g.induced(&keep)
}
