//! Brute-force ground truth.
//!
//! [`vs_dp`] computes the vertex separation number by dynamic programming
//! over vertex subsets; it equals the path-width. [`brute_decide`] searches
//! decompositions directly. Neither touches skeletons or the reducer.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::decomposition::{from_bags, PathDecomposition, Tag};
use crate::graph::Graph;
use crate::Vertex;

/// Largest graph accepted by [`vs_dp`].
pub const VS_DP_LIMIT: usize = 24;
/// Largest graph accepted by [`brute_decide`].
pub const BRUTE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices is above the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("order is not a permutation of the {n} vertices")]
    NotAPermutation { n: usize },
}

/// A growing prefix of a vertex ordering and its boundary.
///
/// `cost` is the number of prefix vertices that still have a neighbor
/// outside the prefix.
#[derive(Debug, Clone)]
pub struct OrderingState<'g> {
    g: &'g Graph,
    in_subset: Vec<bool>,
    // neighbors not yet in the prefix
    outside: Vec<usize>,
    cost: usize,
}

impl<'g> OrderingState<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let outside = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
        OrderingState { g, in_subset: vec![false; g.vertex_count()], outside, cost: 0 }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.in_subset[v]
    }

    pub fn cost(&self) -> usize {
        self.cost
    }

    /// Prefix vertices with a neighbor outside, ascending.
    pub fn boundary(&self) -> Vec<Vertex> {
        (0..self.in_subset.len()).filter(|&v| self.in_subset[v] && self.outside[v] > 0).collect()
    }

    /// Appends `v`; returns `false` if it was already in the prefix.
    pub fn push(&mut self, v: Vertex) -> bool {
        if self.in_subset[v] {
            return false;
        }
        self.in_subset[v] = true;
        for &u in self.g.neighbors(v) {
            if self.in_subset[u] {
                self.outside[u] -= 1;
                if self.outside[u] == 0 {
                    self.cost -= 1;
                }
            }
        }
        self.outside[v] = self.g.neighbors(v).iter().filter(|&&u| !self.in_subset[u]).count();
        if self.outside[v] > 0 {
            self.cost += 1;
        }
        true
    }
}

fn neighbor_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect()
}

fn subset_table(g: &Graph) -> Result<Vec<u8>, OracleError> {
    let n = g.vertex_count();
    if n > VS_DP_LIMIT {
        return Err(OracleError::TooLarge { n, limit: VS_DP_LIMIT });
    }
    let nb = neighbor_masks(g);
    let mut f = vec![0u8; 1usize << n];
    for s in 1u32..(1u32 << n) {
        let mut boundary = 0u8;
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nb[v] & !s != 0 {
                boundary += 1;
            }
            best = best.min(f[(s & !(1 << v)) as usize]);
        }
        f[s as usize] = best.max(boundary);
    }
    Ok(f)
}

/// Vertex separation number of `g`, which is its path-width; `-1` for the
/// graph without vertices. Refuses graphs above [`VS_DP_LIMIT`].
pub fn vs_dp(g: &Graph) -> Result<i32, OracleError> {
    if g.vertex_count() == 0 {
        return Ok(-1);
    }
    let f = subset_table(g)?;
    Ok(i32::from(f[f.len() - 1]))
}

/// [`vs_dp`] plus an ordering attaining it.
pub fn vs_dp_with_order(g: &Graph) -> Result<(i32, Vec<Vertex>), OracleError> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok((-1, Vec::new()));
    }
    let f = subset_table(g)?;
    let nb = neighbor_masks(g);
    let mut order = Vec::with_capacity(n);
    let mut s = (1u32 << n) - 1;
    while s != 0 {
        let target = f[s as usize];
        let boundary = (0..n).filter(|&v| s & (1 << v) != 0 && nb[v] & !s != 0).count() as u8;
        // the last vertex of the prefix `s`
        let v = (0..n)
            .find(|&v| s & (1 << v) != 0 && f[(s & !(1 << v)) as usize].max(boundary) == target)
            .expect("table minimum is attained");
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok((i32::from(f[f.len() - 1]), order))
}

/// Decomposition whose `i`-th bag is `order[i]` together with the boundary of
/// the prefix before it. Its width is at most the separation of `order`.
pub fn vs_order_to_decomposition(g: &Graph, order: &[Vertex]) -> Result<PathDecomposition, OracleError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || core::mem::replace(&mut seen[v], true)) {
        return Err(OracleError::NotAPermutation { n });
    }
    let mut state = OrderingState::new(g);
    let mut bag_sequence = Vec::with_capacity(n);
    for &v in order {
        let mut bag = state.boundary();
        bag.push(v);
        bag_sequence.push(bag);
        state.push(v);
    }
    Ok(from_bags(&bag_sequence).expect("prefix boundaries are contiguous"))
}

/// Separation of a fixed ordering: the largest prefix boundary.
pub fn separation_of(g: &Graph, order: &[Vertex]) -> usize {
    let mut state = OrderingState::new(g);
    let mut worst = 0;
    for &v in order {
        state.push(v);
        worst = worst.max(state.cost());
    }
    worst
}

/// Whether some decomposition of width at most `k` is valid for `g`, by
/// depth-first search over event sequences. Refuses graphs above
/// [`BRUTE_LIMIT`].
pub fn brute_decide(g: &Graph, k: i32) -> Result<bool, OracleError> {
    let n = g.vertex_count();
    if n > BRUTE_LIMIT {
        return Err(OracleError::TooLarge { n, limit: BRUTE_LIMIT });
    }
    if n == 0 {
        return Ok(k >= -1);
    }
    if k < 0 {
        return Ok(false);
    }
    let mut state = vec![0u8; n];
    Ok(brute_search(g, k as usize, &mut state, 0, 0))
}

// state: 0 unseen, 1 in bag, 2 forgotten
fn brute_search(g: &Graph, k: usize, state: &mut [u8], bag: usize, done: usize) -> bool {
    if done == state.len() {
        return true;
    }
    for v in 0..state.len() {
        let tag = match state[v] {
            0 => Tag::Introduce,
            1 => Tag::Forget,
            _ => continue,
        };
        match tag {
            Tag::Introduce => {
                // a neighbor already gone can never share a bag with v
                if bag == k + 1 || g.neighbors(v).iter().any(|&u| state[u] == 2) {
                    continue;
                }
                state[v] = 1;
                if brute_search(g, k, state, bag + 1, done) {
                    return true;
                }
                state[v] = 0;
            }
            Tag::Forget => {
                if g.neighbors(v).iter().any(|&u| state[u] == 0) {
                    continue;
                }
                state[v] = 2;
                if brute_search(g, k, state, bag - 1, done + 1) {
                    return true;
                }
                state[v] = 1;
            }
        }
    }
    false
}

/// `n! (2n-1)!!`, the number of event sequences on `n` vertices, or `None`
/// if it overflows.
pub fn count_decompositions(n: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for i in 1..=n as u128 {
        total = total.checked_mul(i)?.checked_mul(2 * i - 1)?;
    }
    Some(total)
}
