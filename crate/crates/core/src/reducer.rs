//! Width reduction: from any path decomposition of `g` to one of width at
//! most `k`, or a proof that none exists.
//!
//! The input decomposition is walked event by event. After each event the
//! reducer holds a set of skeletons of width-`k` decompositions of the part
//! of `g` seen so far, restricted to the current bag. An introduce event
//! tries every placement of the new vertex in every skeleton; a forget event
//! hides the vertex and re-simplifies. Once only forget events remain, any
//! surviving skeleton certifies width at most `k`.
//!
//! Each stored skeleton remembers its parent and where the new vertex went,
//! relative to concrete events of the partial decomposition, so a witness is
//! rebuilt by replaying those placements.

use alloc::collections::{btree_map, BTreeMap};
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

use crate::decomposition::{tighten, validate, PathDecomposition, Tag, Violation};
use crate::graph::Graph;
use crate::skeleton::{canonicalize, expand_with, forget_with, Anchor, Placement, SimplifyRule, Skeleton};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Answer only; no witness bookkeeping.
    Decide,
    /// Also rebuild a witness decomposition.
    #[default]
    Construct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducerConfig {
    pub rule: SimplifyRule,
    /// Expand each layer in parallel (needs the `parallel` feature; ignored
    /// otherwise). Results are identical either way.
    pub parallel: bool,
    /// Shrink the input intervals first (see [`tighten`]). The reducer then
    /// starts from a decomposition that is no wider.
    pub tighten: bool,
    /// Drop every skeleton dominated by another one of the same layer.
    pub prune_dominated: bool,
    /// Drop skeletons that leave no room for a vertex still to come.
    pub lookahead: bool,
    /// Put consecutive retained events into a preferred order where that
    /// loses nothing, merging skeletons that differ only there.
    pub reorder: bool,
    pub strategy: Strategy,
}

/// Order in which the skeletons are explored. Both decide the same
/// question; they may return different witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Every skeleton of a layer before the next layer; the witness has the
    /// smallest width any surviving skeleton reaches.
    Breadth,
    /// One path at a time, backtracking out of dead ends; stops at the first
    /// surviving skeleton.
    #[default]
    Depth,
}

impl Default for ReducerConfig {
    fn default() -> Self {
        ReducerConfig { rule: SimplifyRule::Interval, parallel: true, tighten: true, prune_dominated: true, lookahead: true, reorder: true, strategy: Strategy::Depth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReducerStats {
    /// Number of skeletons kept after each processed event.
    pub layer_sizes: Vec<usize>,
    /// Candidates generated before deduplication.
    pub candidates: u64,
    /// Candidates dropped as duplicates.
    pub duplicates: u64,
    /// Longest hidden stretch in any stored skeleton.
    pub max_gap_len: usize,
    /// Skeletons dropped as dominated.
    pub dominated: u64,
    /// Candidates dropped for leaving no room for a later vertex.
    pub dead_ends: u64,
    /// Events left unprocessed because only forgets remained.
    pub skipped_forgets: usize,
}

impl ReducerStats {
    pub fn total_skeletons(&self) -> u64 {
        self.layer_sizes.iter().map(|&s| s as u64).sum()
    }

    pub fn max_layer(&self) -> usize {
        self.layer_sizes.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducerReport {
    pub feasible: bool,
    /// Smallest width reached by a surviving skeleton (the witness width in
    /// construct mode).
    pub achieved_width: Option<i32>,
    pub witness: Option<PathDecomposition>,
    pub stats: ReducerStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReducerError {
    #[error("input decomposition is invalid ({} violations)", .0.len())]
    InvalidInput(Vec<Violation>),
    #[error("vertex {vertex} arrives after its neighbor {neighbor} was forgotten")]
    NeighborForgotten { vertex: Vertex, neighbor: Vertex },
    #[error("rebuilt witness failed validation")]
    BrokenWitness(Vec<Violation>),
}

pub fn decrease_pathwidth(g: &Graph, p: &PathDecomposition, k: usize, mode: Mode) -> Result<ReducerReport, ReducerError> {
    decrease_pathwidth_with(g, p, k, mode, &ReducerConfig::default())
}

/// Placement anchors, parent index and link of a merged candidate.
type Generator = (Vec<Anchor>, u32, Link);
/// Reached skeletons of one layer, grouped by retained structure.
type Reached = BTreeMap<Vec<(Vertex, Tag)>, Vec<Skeleton>>;

struct Entry {
    skeleton: Skeleton,
    anchors: Vec<Anchor>,
}

/// How a skeleton was derived from its parent: where the new vertex went
/// and which consecutive events were swapped afterwards.
#[derive(Debug, Clone, Default)]
struct Link {
    placement: Option<Placement>,
    swaps: Vec<(Anchor, Anchor)>,
}

type Candidate = (Skeleton, Vec<Anchor>, Link);

/// One processed event with what it needs from the graph.
struct Step {
    vertex: Vertex,
    tag: Tag,
    /// Neighbors introduced earlier (introduce steps only).
    neighbors: Vec<Vertex>,
    /// Retained neighborhoods of vertices still to come (introduce steps
    /// only, empty without lookahead).
    upcoming: Vec<(Vec<Vertex>, usize)>,
    /// Per bag vertex, its neighbors still to come, sorted by vertex
    /// (introduce steps only, empty without reordering).
    later: Vec<(Vertex, Vec<Vertex>)>,
}

impl Step {
    fn later_of(&self, v: Vertex) -> &[Vertex] {
        self.later.binary_search_by_key(&v, |e| e.0).map_or(&[], |i| &self.later[i].1)
    }

    /// `a` may be introduced before and forgotten after `b` at no loss.
    fn outer(&self, a: Vertex, b: Vertex) -> bool {
        let (la, lb) = (self.later_of(a), self.later_of(b));
        if la == lb {
            return a < b;
        }
        lb.len() < la.len() && lb.iter().all(|x| la.binary_search(x).is_ok())
    }
}

fn plan(g: &Graph, p: &PathDecomposition, last_intro: usize, cfg: &ReducerConfig) -> Result<Vec<Step>, ReducerError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut in_bag = vec![false; n];
    let mut bag: Vec<Vertex> = Vec::new();
    let mut steps = Vec::with_capacity(last_intro + 1);
    for e in &p.events()[..=last_intro] {
        let v = e.vertex;
        let mut step = Step { vertex: v, tag: e.tag, neighbors: Vec::new(), upcoming: Vec::new(), later: Vec::new() };
        match e.tag {
            Tag::Introduce => {
                for &u in g.neighbors(v) {
                    if seen[u] {
                        if !in_bag[u] {
                            return Err(ReducerError::NeighborForgotten { vertex: v, neighbor: u });
                        }
                        step.neighbors.push(u);
                    }
                }
                seen[v] = true;
                in_bag[v] = true;
                bag.push(v);
                if cfg.lookahead {
                    step.upcoming = upcoming_neighborhoods(g, &bag, &seen, &in_bag);
                }
                if cfg.reorder {
                    step.later = bag.iter().map(|&u| (u, g.neighbors(u).iter().copied().filter(|&x| !seen[x]).collect())).collect();
                    step.later.sort_unstable();
                }
            }
            Tag::Forget => {
                in_bag[v] = false;
                bag.retain(|&u| u != v);
            }
        }
        steps.push(step);
    }
    Ok(steps)
}

/// Successors of `entry` under `step`; candidates failing the lookahead are
/// counted in `dropped` and left out.
fn successors(entry: &Entry, step: &Step, k: i32, construct: bool, dropped: &AtomicU64) -> Vec<Candidate> {
    match step.tag {
        Tag::Introduce => {
            let mut out = Vec::new();
            let anchors = construct.then_some(entry.anchors.as_slice());
            expand_with(&entry.skeleton, anchors, step.vertex, &step.neighbors, k, |mut s, mut a, pl| {
                let mut swaps = Vec::new();
                if !step.later.is_empty() {
                    let a = construct.then_some(&mut a);
                    canonicalize(&mut s, a, |x, y| step.outer(x, y), &mut swaps);
                    if !construct {
                        swaps.clear();
                    }
                }
                if s.admits(&step.upcoming, k) {
                    out.push((s, a, Link { placement: Some(pl), swaps }));
                } else {
                    dropped.fetch_add(1, Ordering::Relaxed);
                }
            });
            out
        }
        Tag::Forget => {
            let mut anchors = Vec::new();
            let s = forget_with(&entry.skeleton, &entry.anchors, step.vertex, &mut anchors)
                .expect("bag vertices are retained");
            vec![(s, anchors, Link::default())]
        }
    }
}

pub fn decrease_pathwidth_with(
    g: &Graph,
    p: &PathDecomposition,
    k: usize,
    mode: Mode,
    cfg: &ReducerConfig,
) -> Result<ReducerReport, ReducerError> {
    validate(p, g).map_err(ReducerError::InvalidInput)?;
    let mut stats = ReducerStats::default();
    let tightened;
    let p = if cfg.tighten {
        tightened = tighten(p, g);
        &tightened
    } else {
        p
    };

    if k as i64 >= p.width() as i64 {
        return Ok(ReducerReport {
            feasible: true,
            achieved_width: Some(p.width()),
            witness: (mode == Mode::Construct).then(|| p.clone()),
            stats,
        });
    }
    let k = k as i32;
    let construct = mode == Mode::Construct;

    // index of the last introduce; everything after it is a forget
    let last_intro = p.events().iter().rposition(|e| e.tag == Tag::Introduce).expect("non-empty");
    stats.skipped_forgets = p.len() - last_intro - 1;
    let steps = plan(g, p, last_intro, cfg)?;

    let mut start = Entry { skeleton: Skeleton::empty(cfg.rule), anchors: Vec::new() };
    if construct {
        start.anchors.push(Anchor::FRONT);
    }
    let found = match cfg.strategy {
        Strategy::Breadth => breadth_first(start, &steps, k, construct, cfg, &mut stats),
        Strategy::Depth => depth_first(start, &steps, k, construct, cfg, &mut stats),
    };
    let Some((best_width, links)) = found else {
        return Ok(ReducerReport { feasible: false, achieved_width: None, witness: None, stats });
    };

    let witness = if construct {
        let w = rebuild(&steps, g.vertex_count(), &links);
        validate(&w, g).map_err(ReducerError::BrokenWitness)?;
        debug_assert_eq!(w.width(), best_width);
        Some(w)
    } else {
        None
    };
    Ok(ReducerReport { feasible: true, achieved_width: Some(best_width), witness, stats })
}

/// All surviving skeletons layer by layer. Returns the smallest final width
/// and, in construct mode, the links (one per step) leading to the first
/// skeleton attaining it.
fn breadth_first(
    start: Entry,
    steps: &[Step],
    k: i32,
    construct: bool,
    cfg: &ReducerConfig,
    stats: &mut ReducerStats,
) -> Option<(i32, Vec<Link>)> {
    let mut layer = vec![start];
    let mut history: Vec<Vec<(u32, Link)>> = Vec::new();
    for step in steps {
        let dropped = AtomicU64::new(0);
        let generated = map_layer(&layer, cfg.parallel, |entry| successors(entry, step, k, construct, &dropped));
        stats.dead_ends += dropped.into_inner();

        // keyed merge in parent order: the first generator of a skeleton wins
        let mut merged: BTreeMap<Skeleton, Generator> = BTreeMap::new();
        for (parent, candidates) in generated.into_iter().enumerate() {
            for (s, anchors, link) in candidates {
                stats.candidates += 1;
                match merged.entry(s) {
                    btree_map::Entry::Occupied(_) => stats.duplicates += 1,
                    btree_map::Entry::Vacant(slot) => {
                        slot.insert((anchors, parent as u32, link));
                    }
                }
            }
        }
        let mut entries: Vec<(Skeleton, Generator)> = merged.into_iter().collect();
        if cfg.prune_dominated {
            let before = entries.len();
            entries = prune_dominated(entries);
            stats.dominated += (before - entries.len()) as u64;
        }

        let mut links = Vec::with_capacity(if construct { entries.len() } else { 0 });
        layer = entries
            .into_iter()
            .map(|(skeleton, (anchors, parent, link))| {
                stats.max_gap_len = stats.max_gap_len.max(skeleton.max_gap_len());
                if construct {
                    links.push((parent, link));
                }
                Entry { skeleton, anchors }
            })
            .collect();
        stats.layer_sizes.push(layer.len());
        if construct {
            history.push(links);
        }
        if layer.is_empty() {
            return None;
        }
    }

    let (best, best_width) = layer
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.skeleton.width()))
        .min_by_key(|&(i, w)| (w, i))
        .expect("layer is non-empty");

    let mut path = Vec::new();
    if construct {
        let mut idx = best;
        for links in history.iter_mut().rev() {
            let (parent, link) = core::mem::take(&mut links[idx]);
            path.push(link);
            idx = parent as usize;
        }
        path.reverse();
    }
    Some((best_width, path))
}

struct Frame {
    entry: Entry,
    link: Link,
    children: Vec<Candidate>,
}

/// Depth-first walk over the same layered state graph, most promising
/// successor first. A skeleton already reached in its layer, or dominated
/// by one reached there, is not entered again: every such skeleton is
/// either on the current path or known to be a dead end. Stops at the first
/// skeleton that survives the last introduce.
fn depth_first(
    start: Entry,
    steps: &[Step],
    k: i32,
    construct: bool,
    cfg: &ReducerConfig,
    stats: &mut ReducerStats,
) -> Option<(i32, Vec<Link>)> {
    let dropped = AtomicU64::new(0);
    // per layer, reached skeletons grouped by retained structure
    let mut reached: Vec<Reached> = (0..steps.len()).map(|_| BTreeMap::new()).collect();
    stats.layer_sizes = vec![0; steps.len()];
    let mut stack: Vec<Frame> = Vec::new();

    let open = |entry: Entry, link: Link, depth: usize, stats: &mut ReducerStats| {
        let mut children = if depth < steps.len() { successors(&entry, &steps[depth], k, construct, &dropped) } else { Vec::new() };
        stats.candidates += children.len() as u64;
        // popped from the back: most promising last
        children.sort_by(|a, b| (b.0.width(), &b.0).cmp(&(a.0.width(), &a.0)));
        Frame { entry, link, children }
    };
    let first = open(start, Link::default(), 0, stats);
    stack.push(first);

    while let Some(depth) = stack.len().checked_sub(1) {
        if depth == steps.len() {
            break;
        }
        let Some((skeleton, anchors, link)) = stack[depth].children.pop() else {
            stack.pop();
            continue;
        };
        let group = reached[depth].entry(skeleton.structure()).or_default();
        if group.contains(&skeleton) {
            stats.duplicates += 1;
            continue;
        }
        if cfg.prune_dominated && group.iter().any(|r| r.dominates(&skeleton)) {
            stats.dominated += 1;
            continue;
        }
        group.push(skeleton.clone());
        stats.layer_sizes[depth] += 1;
        stats.max_gap_len = stats.max_gap_len.max(skeleton.max_gap_len());
        let frame = open(Entry { skeleton, anchors }, link, depth + 1, stats);
        stack.push(frame);
    }
    stats.dead_ends += dropped.into_inner();

    if stack.len() != steps.len() + 1 {
        return None;
    }
    let width = stack.last().expect("non-empty").entry.skeleton.width();
    let path = if construct { stack.into_iter().skip(1).map(|f| f.link).collect() } else { Vec::new() };
    Some((width, path))
}

/// For each vertex not yet introduced with a neighbor in `bag`, the sorted
/// list of its neighbors in `bag`; equal lists merged with a count.
fn upcoming_neighborhoods(g: &Graph, bag: &[Vertex], seen: &[bool], in_bag: &[bool]) -> Vec<(Vec<Vertex>, usize)> {
    let mut later: Vec<Vertex> = bag.iter().flat_map(|&u| g.neighbors(u)).copied().filter(|&x| !seen[x]).collect();
    later.sort_unstable();
    later.dedup();
    let mut sets: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
    for &x in &later {
        *sets.entry(g.neighbors(x).iter().copied().filter(|&u| in_bag[u]).collect()).or_default() += 1;
    }
    sets.into_iter().collect()
}

/// Keeps, in order, the entries not dominated by an earlier kept one; a
/// kept entry is dropped again once a later one dominates it.
fn prune_dominated<T>(entries: Vec<(Skeleton, T)>) -> Vec<(Skeleton, T)> {
    let mut alive = vec![true; entries.len()];
    let mut groups: BTreeMap<Vec<(Vertex, Tag)>, Vec<usize>> = BTreeMap::new();
    for i in 0..entries.len() {
        let kept = groups.entry(entries[i].0.structure()).or_default();
        let s = &entries[i].0;
        if kept.iter().any(|&j| entries[j].0.dominates(s)) {
            alive[i] = false;
            continue;
        }
        kept.retain(|&j| {
            let beaten = s.dominates(&entries[j].0);
            if beaten {
                alive[j] = false;
            }
            !beaten
        });
        kept.push(i);
    }
    entries.into_iter().zip(alive).filter_map(|(e, a)| a.then_some(e)).collect()
}

fn map_layer<F>(layer: &[Entry], parallel: bool, f: F) -> Vec<Vec<Candidate>>
where
    F: Fn(&Entry) -> Vec<Candidate> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel && layer.len() > 1 {
        use rayon::prelude::*;
        return layer.par_iter().map(&f).collect();
    }
    let _ = parallel;
    layer.iter().map(f).collect()
}

/// Replays the links step by step on a linked list of events.
fn rebuild(steps: &[Step], n: usize, links: &[Link]) -> PathDecomposition {
    // doubly linked list over event ids 2v + tag; slot 2n is the head
    let head = 2 * n;
    let none = usize::MAX;
    let mut next = vec![none; 2 * n + 1];
    let mut prev = vec![none; 2 * n + 1];
    let slot = |a: Anchor| if a == Anchor::FRONT { head } else { a.0 };
    let insert_after = |next: &mut Vec<usize>, prev: &mut Vec<usize>, at: usize, id: usize| {
        let after = next[at];
        next[id] = after;
        prev[id] = at;
        next[at] = id;
        if after != none {
            prev[after] = id;
        }
    };
    let mut forgets = Vec::new();
    for (step, link) in steps.iter().zip(links) {
        if step.tag != Tag::Introduce {
            continue;
        }
        let pl = link.placement.expect("every introduced vertex was placed");
        insert_after(&mut next, &mut prev, slot(pl.intro_after), Anchor::after(step.vertex, Tag::Introduce).0);
        insert_after(&mut next, &mut prev, slot(pl.forget_after), Anchor::after(step.vertex, Tag::Forget).0);
        forgets.push(step.vertex);
        for &(first, second) in &link.swaps {
            let (x, y) = (first.0, second.0);
            debug_assert_eq!(next[x], y);
            let (before, after) = (prev[x], next[y]);
            next[before] = y;
            prev[y] = before;
            next[y] = x;
            prev[x] = y;
            next[x] = after;
            if after != none {
                prev[after] = x;
            }
        }
    }

    let mut out = Vec::with_capacity(2 * n);
    let mut at = next[head];
    while at != none {
        let (v, tag) = Anchor(at).event().expect("list holds events only");
        out.push((v, tag));
        at = next[at];
    }
    PathDecomposition::from_steps(out).expect("replayed links form a decomposition")
}

/// Smallest `k` the reducer accepts, trying `k = 0, 1, ...`, with a witness.
/// The empty graph gets `-1`.
pub fn min_pathwidth_given(g: &Graph, p: &PathDecomposition) -> Result<(i32, PathDecomposition), ReducerError> {
    min_pathwidth_given_with(g, p, &ReducerConfig::default())
}

pub fn min_pathwidth_given_with(
    g: &Graph,
    p: &PathDecomposition,
    cfg: &ReducerConfig,
) -> Result<(i32, PathDecomposition), ReducerError> {
    validate(p, g).map_err(ReducerError::InvalidInput)?;
    if g.is_empty() {
        return Ok((-1, PathDecomposition::default()));
    }
    for k in 0..=p.width().max(0) as usize {
        let report = decrease_pathwidth_with(g, p, k, Mode::Construct, cfg)?;
        if let Some(w) = report.witness {
            return Ok((w.width(), w));
        }
    }
    unreachable!("the input decomposition itself has width {}", p.width())
}
