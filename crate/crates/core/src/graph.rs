//! Simple undirected graphs and the structural operations used to shrink them:
//! augmentation, maximal matchings, matching contraction and simplicial
//! vertices.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: Vertex },
    #[error("matching pair ({0}, {1}) is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("vertex {0} is matched twice")]
    DoublyMatched(Vertex),
}

/// Simple undirected graph on the vertices `0..n`.
///
/// Neighbor lists are kept sorted, so `neighbors` doubles as an ordered set
/// and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list. Duplicate edges and both
    /// orientations collapse into one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adjacency.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Adds `{u, v}`; returns `Ok(false)` if the edge was already present.
    pub fn try_add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        let n = self.vertex_count();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        Ok(self.insert_edge(u, v))
    }

    /// Adds `{u, v}`. Panics on out-of-range vertices or a self-loop.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        self.try_add_edge(u, v).expect("invalid edge")
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                true
            }
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `keep`, renumbered in the order given.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adjacency[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.insert_edge(i, j);
                }
            }
        }
        g
    }

    /// Size of the largest minimum degree over all subgraphs. A lower bound
    /// on tree-width, hence on path-width.
    pub fn degeneracy(&self) -> usize {
        let n = self.vertex_count();
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut best = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| degree[v])
                .expect("vertex left");
            best = best.max(degree[v]);
            removed[v] = true;
            for &w in &self.adjacency[v] {
                if !removed[w] {
                    degree[w] -= 1;
                }
            }
        }
        best
    }
}

/// Set of vertex-disjoint edges, each stored as `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Greedy maximal matching, scanning edges in lexicographic order.
pub fn maximal_matching(g: &Graph) -> Matching {
    let mut matched = vec![false; g.vertex_count()];
    let mut pairs = Vec::new();
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            pairs.push((u, v));
        }
    }
    Matching { pairs }
}

/// Record of which original vertices were merged by [`contract_matching`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    forward: Vec<Vertex>,
    backward: Vec<Vec<Vertex>>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap { forward: (0..n).collect(), backward: (0..n).map(|v| vec![v]).collect() }
    }

    /// Merged vertex that `original` became.
    pub fn merged(&self, original: Vertex) -> Vertex {
        self.forward[original]
    }

    /// The one or two original vertices behind `merged`.
    pub fn originals(&self, merged: Vertex) -> &[Vertex] {
        &self.backward[merged]
    }

    pub fn original_count(&self) -> usize {
        self.forward.len()
    }

    pub fn merged_count(&self) -> usize {
        self.backward.len()
    }
}

/// Merges every matched pair into one vertex.
///
/// New identities are assigned in order of the smallest original vertex in
/// each class, so unmatched vertices keep their relative order.
pub fn contract_matching(g: &Graph, m: &Matching) -> Result<(Graph, ContractionMap), GraphError> {
    let n = g.vertex_count();
    let mut partner = vec![usize::MAX; n];
    for &(u, v) in &m.pairs {
        if !g.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        for (a, b) in [(u, v), (v, u)] {
            if partner[a] != usize::MAX {
                return Err(GraphError::DoublyMatched(a));
            }
            partner[a] = b;
        }
    }

    let mut forward = vec![usize::MAX; n];
    let mut backward = Vec::new();
    for v in 0..n {
        if forward[v] != usize::MAX {
            continue;
        }
        let id = backward.len();
        forward[v] = id;
        if partner[v] != usize::MAX {
            forward[partner[v]] = id;
            backward.push(vec![v, partner[v]]);
        } else {
            backward.push(vec![v]);
        }
    }

    let mut contracted = Graph::new(backward.len());
    for (u, v) in g.edges() {
        let (a, b) = (forward[u], forward[v]);
        if a != b {
            contracted.insert_edge(a, b);
        }
    }
    Ok((contracted, ContractionMap { forward, backward }))
}

/// Adds every edge forced at width `k`: two nonadjacent vertices with at
/// least `k + 1` common neighbors span one side of a `K_{k+1,2}`, so a
/// decomposition of width `k` must put them in a common bag. Repeats until
/// no pair qualifies.
pub fn augment(g: &Graph, k: usize) -> Graph {
    let n = g.vertex_count();
    let mut out = g.clone();
    let mut common = vec![0usize; n];
    let mut touched = Vec::new();
    loop {
        let mut added = Vec::new();
        for u in 0..n {
            for &w in out.neighbors(u) {
                for &v in out.neighbors(w) {
                    if v > u {
                        if common[v] == 0 {
                            touched.push(v);
                        }
                        common[v] += 1;
                    }
                }
            }
            for &v in &touched {
                if common[v] > k && !out.has_edge(u, v) {
                    added.push((u, v));
                }
                common[v] = 0;
            }
            touched.clear();
        }
        if added.is_empty() {
            return out;
        }
        for (u, v) in added {
            out.insert_edge(u, v);
        }
    }
}

/// Vertices whose neighborhood is a clique (isolated and degree-one vertices
/// included).
pub fn simplicial_vertices(g: &Graph) -> Vec<Vertex> {
    (0..g.vertex_count()).filter(|&v| is_simplicial(g, v)).collect()
}

pub fn is_simplicial(g: &Graph, v: Vertex) -> bool {
    let nb = g.neighbors(v);
    nb.iter()
        .enumerate()
        .all(|(i, &a)| nb[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}
