//! End-to-end path-width.
//!
//! For `k = 0, 1, ...` the graph is first augmented with the edges forced at
//! width `k`. Then either a large matching is contracted, or a large
//! independent set of simplicial vertices is removed, and the smaller graph
//! is solved recursively at the same `k`. Lifting that answer back gives a
//! decomposition of width at most `2k + 1`, which the reducer turns into one
//! of width `k` or refutes. Small graphs go to the subset oracle.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::decomposition::{expand_contraction, flatten_caterpillar, validate, Event, PathDecomposition};
use crate::graph::{augment, contract_matching, is_simplicial, maximal_matching, Graph};
use crate::oracle::{vs_dp_with_order, vs_order_to_decomposition, VS_DP_LIMIT};
use crate::reducer::{decrease_pathwidth_with, Mode, ReducerConfig, ReducerError, ReducerStats};
use crate::Vertex;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// A matching is large when it has at least this fraction of `n` edges.
    pub matching_fraction: f64,
    /// A simplicial set is large when it has at least this fraction of `n`
    /// vertices.
    pub simplicial_fraction: f64,
    /// Graphs with at most this many vertices go straight to the oracle.
    pub base_size: usize,
    /// Largest `k` tried; `None` means `n - 1`.
    pub max_k: Option<usize>,
    pub reducer: ReducerConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            matching_fraction: 0.125,
            simplicial_fraction: 0.125,
            base_size: 16,
            max_k: None,
            reducer: ReducerConfig::default(),
        }
    }
}

impl SolveConfig {
    fn check(&self) -> Result<(), SolveError> {
        let fraction_ok = |t: f64| t > 0.0 && t < 0.5;
        if !fraction_ok(self.matching_fraction) || !fraction_ok(self.simplicial_fraction) {
            return Err(SolveError::Config("fractions must lie strictly between 0 and 1/2"));
        }
        if self.base_size < 2 {
            return Err(SolveError::Config("base size must be at least 2"));
        }
        if self.base_size > VS_DP_LIMIT {
            return Err(SolveError::Config("base size must not exceed the oracle limit"));
        }
        Ok(())
    }
}

/// How one recursion level produced its decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Small graph, solved by the oracle.
    Base,
    /// Degeneracy above `k`.
    Degenerate,
    /// Matching of this many edges contracted.
    Matching { edges: usize },
    /// This many simplicial vertices removed.
    Simplicial { removed: usize },
    /// A simplicial vertex of degree above `k`.
    LargeClique,
    /// Neither branch applied; oracle on the whole level.
    Fallback,
    /// Neither branch applied and the graph is too large for the oracle.
    GaveUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Feasible,
    Infeasible,
    Capability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRecord {
    pub depth: usize,
    pub k: usize,
    pub n: usize,
    pub edges_added: usize,
    pub branch: Branch,
    /// Width of the decomposition handed to the reducer.
    pub approx_width: Option<i32>,
    pub outcome: Outcome,
    pub stats: Option<ReducerStats>,
}

/// Every recursion level visited, in completion order (children first).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveTrace {
    pub levels: Vec<LevelRecord>,
}

impl SolveTrace {
    pub fn max_depth(&self) -> usize {
        self.levels.iter().map(|l| l.depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("no branch applies at k = {k} on a level of {n} vertices")]
    Capability { k: usize, n: usize, trace: SolveTrace },
    #[error("no decomposition of width at most {max_k}")]
    AboveMaxK { max_k: usize, trace: SolveTrace },
    #[error("reducer failed: {0}")]
    Reducer(ReducerError),
}

/// Why [`approx_decomposition`] returned no decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("path-width is above k")]
    Infeasible,
    #[error("no branch applies on a level of {n} vertices")]
    Capability { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub width: i32,
    pub witness: PathDecomposition,
    pub trace: SolveTrace,
}

/// Exact path-width of `g` with a witness of that width. The graph without
/// vertices has path-width `-1`.
pub fn solve(g: &Graph, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    cfg.check()?;
    let mut trace = SolveTrace::default();
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Solution { width: -1, witness: PathDecomposition::default(), trace });
    }
    let top = cfg.max_k.map_or(n - 1, |m| m.min(n - 1));
    for k in 0..=top {
        match exact(g, k, 0, cfg, &mut trace) {
            Ok(witness) => {
                debug_assert_eq!(witness.width(), k as i32);
                return Ok(Solution { width: k as i32, witness, trace });
            }
            Err(Fail::Infeasible) => {}
            Err(Fail::Capability { n }) => return Err(SolveError::Capability { k, n, trace }),
            Err(Fail::Reducer(e)) => return Err(SolveError::Reducer(e)),
        }
    }
    Err(SolveError::AboveMaxK { max_k: top, trace })
}

/// A decomposition of `g` of width at most `2k + 1`, or a certificate that
/// the path-width exceeds `k`, or a capability signal.
pub fn approx_decomposition(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<PathDecomposition, ApproxError> {
    cfg.check().map_err(|_| ApproxError::Capability { n: g.vertex_count() })?;
    let mut trace = SolveTrace::default();
    match approx(g, k, 0, cfg, &mut trace) {
        Ok((p, _)) => Ok(p),
        Err(Fail::Infeasible) => Err(ApproxError::Infeasible),
        Err(Fail::Capability { n }) => Err(ApproxError::Capability { n }),
        Err(Fail::Reducer(_)) => unreachable!("reducer errors only surface from exact levels"),
    }
}

enum Fail {
    Infeasible,
    Capability { n: usize },
    Reducer(ReducerError),
}

/// Width-`k` decomposition of `g`, or why not.
fn exact(g: &Graph, k: usize, depth: usize, cfg: &SolveConfig, trace: &mut SolveTrace) -> Result<PathDecomposition, Fail> {
    let (p, mut record) = approx(g, k, depth, cfg, trace)?;
    let width = p.width();
    assert!(width <= 2 * k as i32 + 1, "approximation of width {width} at k = {k}");
    record.approx_width = Some(width);
    if width <= k as i32 {
        record.outcome = Outcome::Feasible;
        trace.levels.push(record);
        return Ok(p);
    }
    let report = decrease_pathwidth_with(g, &p, k, Mode::Construct, &cfg.reducer).map_err(Fail::Reducer)?;
    record.stats = Some(report.stats);
    match report.witness {
        Some(w) if report.feasible => {
            record.outcome = Outcome::Feasible;
            trace.levels.push(record);
            Ok(w)
        }
        _ => {
            record.outcome = Outcome::Infeasible;
            trace.levels.push(record);
            Err(Fail::Infeasible)
        }
    }
}

/// Decomposition of width at most `2k + 1` plus the unfinished record of
/// this level. Failures are recorded before returning.
fn approx(
    g: &Graph,
    k: usize,
    depth: usize,
    cfg: &SolveConfig,
    trace: &mut SolveTrace,
) -> Result<(PathDecomposition, LevelRecord), Fail> {
    let n = g.vertex_count();
    let mut record = LevelRecord {
        depth,
        k,
        n,
        edges_added: 0,
        branch: Branch::Base,
        approx_width: None,
        outcome: Outcome::Infeasible,
        stats: None,
    };
    let fail = |trace: &mut SolveTrace, mut record: LevelRecord, branch, outcome| {
        record.branch = branch;
        record.outcome = outcome;
        trace.levels.push(record);
        match outcome {
            Outcome::Capability => Fail::Capability { n },
            _ => Fail::Infeasible,
        }
    };

    if n <= cfg.base_size {
        return match oracle_decomposition(g, k) {
            Some(p) => Ok((p, record)),
            None => Err(fail(trace, record, Branch::Base, Outcome::Infeasible)),
        };
    }
    if g.degeneracy() > k {
        return Err(fail(trace, record, Branch::Degenerate, Outcome::Infeasible));
    }

    // every width-k decomposition of g already covers the added edges
    let ga = augment(g, k);
    record.edges_added = ga.edge_count() - g.edge_count();

    let matching = maximal_matching(&ga);
    if matching.len() as f64 >= cfg.matching_fraction * n as f64 {
        record.branch = Branch::Matching { edges: matching.len() };
        let (contracted, map) = contract_matching(&ga, &matching).expect("maximal matching is a matching");
        // the contracted graph is a minor, so its infeasibility carries over
        let inner = exact(&contracted, k, depth + 1, cfg, trace)?;
        let lifted = expand_contraction(&inner, &map).expect("map covers the contracted graph");
        debug_assert_eq!(validate(&lifted, &ga), Ok(()));
        return Ok((lifted, record));
    }

    let legs = independent_simplicial(&ga);
    if legs.len() as f64 >= cfg.simplicial_fraction * n as f64 {
        // a simplicial vertex of degree d closes a clique of d + 1 vertices
        if legs.iter().any(|&v| ga.degree(v) > k) {
            return Err(fail(trace, record, Branch::LargeClique, Outcome::Infeasible));
        }
        record.branch = Branch::Simplicial { removed: legs.len() };
        let mut is_leg = vec![false; n];
        for &v in &legs {
            is_leg[v] = true;
        }
        let rest: Vec<Vertex> = (0..n).filter(|&v| !is_leg[v]).collect();
        let core_graph = ga.induced(&rest);
        let inner = exact(&core_graph, k, depth + 1, cfg, trace)?;
        let relabeled = relabel(&inner, &rest);
        let spliced = flatten_caterpillar(&relabeled, &legs, &ga).expect("simplicial legs have a host bag");
        debug_assert_eq!(validate(&spliced, &ga), Ok(()));
        return Ok((spliced, record));
    }

    if n <= VS_DP_LIMIT {
        return match oracle_decomposition(g, k) {
            Some(p) => {
                record.branch = Branch::Fallback;
                Ok((p, record))
            }
            None => Err(fail(trace, record, Branch::Fallback, Outcome::Infeasible)),
        };
    }
    Err(fail(trace, record, Branch::GaveUp, Outcome::Capability))
}

fn oracle_decomposition(g: &Graph, k: usize) -> Option<PathDecomposition> {
    let (width, order) = vs_dp_with_order(g).expect("within the oracle limit");
    (width <= k as i32).then(|| vs_order_to_decomposition(g, &order).expect("order is a permutation"))
}

/// Greedy independent set among the simplicial vertices, ascending.
pub fn independent_simplicial(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if !blocked[v] && is_simplicial(g, v) {
            out.push(v);
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    out
}

fn relabel(p: &PathDecomposition, names: &[Vertex]) -> PathDecomposition {
    let events = p.events().iter().map(|e| Event { vertex: names[e.vertex], ..*e }).collect();
    PathDecomposition::from_events_unchecked(events)
}
