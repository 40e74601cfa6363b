//! Nice path decompositions written as event sequences.
//!
//! A decomposition of an `n`-vertex graph is a sequence of `2n` events. Each
//! vertex is introduced once and later forgotten once. Event `j` carries the
//! width `w_j` of the bag right after it: `w_1 = 0`, then `+1` per introduce
//! and `-1` per forget, ending at `-1` once every bag is empty.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

use crate::graph::{ContractionMap, Graph};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Introduce,
    Forget,
}

impl Tag {
    /// `+1` for introduce, `-1` for forget.
    pub fn sign(self) -> i32 {
        match self {
            Tag::Introduce => 1,
            Tag::Forget => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub vertex: Vertex,
    pub tag: Tag,
    /// Bag size minus one after this event.
    pub width: i32,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.tag == Tag::Introduce { '+' } else { '-' };
        write!(f, "({},{},{})", self.vertex, sign, self.width)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("vertex {0} occurs more than twice or is introduced twice")]
    Repeated(Vertex),
    #[error("vertex {0} is forgotten before it is introduced")]
    ForgetBeforeIntroduce(Vertex),
    #[error("vertex {0} is never forgotten")]
    NeverForgotten(Vertex),
    #[error("vertex {0} occupies a non-contiguous run of bags")]
    NotContiguous(Vertex),
    #[error("vertex {vertex} is not in the contraction map ({merged} merged vertices)")]
    UnmappedVertex { vertex: Vertex, merged: usize },
    #[error("simplicial vertex {0} has no bag holding its neighborhood")]
    NoHostBag(Vertex),
    #[error("enumeration is limited to {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// One problem found by [`validate`]. Event indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    LengthMismatch { expected: usize, found: usize },
    UnknownVertex { index: usize, vertex: Vertex },
    VertexMissing { vertex: Vertex },
    ExtraOccurrence { index: usize, vertex: Vertex },
    ForgetBeforeIntroduce { index: usize, vertex: Vertex },
    NeverForgotten { vertex: Vertex },
    EdgeUncovered { u: Vertex, v: Vertex },
    WidthMismatch { index: usize, expected: i32, found: i32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // vertices are printed 1-based to match the file formats
        match *self {
            Violation::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} events, found {found}")
            }
            Violation::UnknownVertex { index, vertex } => {
                write!(f, "event {index}: vertex {} is not in the graph", vertex + 1)
            }
            Violation::VertexMissing { vertex } => write!(f, "vertex {} never occurs", vertex + 1),
            Violation::ExtraOccurrence { index, vertex } => {
                write!(f, "event {index}: vertex {} occurs again", vertex + 1)
            }
            Violation::ForgetBeforeIntroduce { index, vertex } => {
                write!(f, "event {index}: vertex {} forgotten before introduced", vertex + 1)
            }
            Violation::NeverForgotten { vertex } => {
                write!(f, "vertex {} is never forgotten", vertex + 1)
            }
            Violation::EdgeUncovered { u, v } => {
                write!(f, "edge {} {} is not covered by any bag", u + 1, v + 1)
            }
            Violation::WidthMismatch { index, expected, found } => {
                write!(f, "event {index}: width {found}, expected {expected}")
            }
        }
    }
}

/// Sequence of introduce/forget events.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PathDecomposition {
    events: Vec<Event>,
}

impl PathDecomposition {
    /// Builds a decomposition from `(vertex, tag)` steps, computing widths.
    /// Checks that every vertex occurring is introduced exactly once and
    /// forgotten exactly once afterwards.
    pub fn from_steps<I>(steps: I) -> Result<Self, DecompositionError>
    where
        I: IntoIterator<Item = (Vertex, Tag)>,
    {
        let mut events: Vec<Event> = Vec::new();
        let mut state: Vec<u8> = Vec::new();
        let mut width = -1;
        for (vertex, tag) in steps {
            if vertex >= state.len() {
                state.resize(vertex + 1, 0);
            }
            match (tag, state[vertex]) {
                (Tag::Introduce, 0) => state[vertex] = 1,
                (Tag::Forget, 1) => state[vertex] = 2,
                (Tag::Forget, 0) => return Err(DecompositionError::ForgetBeforeIntroduce(vertex)),
                _ => return Err(DecompositionError::Repeated(vertex)),
            }
            width += tag.sign();
            events.push(Event { vertex, tag, width });
        }
        if let Some(v) = state.iter().position(|&s| s == 1) {
            return Err(DecompositionError::NeverForgotten(v));
        }
        Ok(PathDecomposition { events })
    }

    /// Wraps events as given, without any checking. Meant for decompositions
    /// from untrusted sources that are about to go through [`validate`].
    pub fn from_events_unchecked(events: Vec<Event>) -> Self {
        PathDecomposition { events }
    }

    /// The decomposition with every vertex of `0..n` in one bag.
    pub fn one_bag(n: usize) -> Self {
        let all: Vec<Vertex> = (0..n).collect();
        from_bags(&[all]).expect("a single bag is contiguous")
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Maximum event width; `-1` for the empty decomposition.
    pub fn width(&self) -> i32 {
        width(self)
    }

    pub fn steps(&self) -> impl Iterator<Item = (Vertex, Tag)> + '_ {
        self.events.iter().map(|e| (e.vertex, e.tag))
    }

    /// Per vertex, the 0-based event indices of its introduce and forget.
    /// Assumes the structural invariants hold.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let n = self.events.iter().map(|e| e.vertex + 1).max().unwrap_or(0);
        let mut spans = vec![(usize::MAX, usize::MAX); n];
        for (j, e) in self.events.iter().enumerate() {
            match e.tag {
                Tag::Introduce => spans[e.vertex].0 = j,
                Tag::Forget => spans[e.vertex].1 = j,
            }
        }
        spans
    }
}

impl fmt::Display for PathDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// All `2n` bags, each a sorted vertex list.
pub fn bags(p: &PathDecomposition) -> Vec<Vec<Vertex>> {
    let mut current: BTreeSet<Vertex> = BTreeSet::new();
    p.events
        .iter()
        .map(|e| {
            match e.tag {
                Tag::Introduce => current.insert(e.vertex),
                Tag::Forget => current.remove(&e.vertex),
            };
            current.iter().copied().collect()
        })
        .collect()
}

pub fn width(p: &PathDecomposition) -> i32 {
    p.events.iter().map(|e| e.width).max().unwrap_or(-1)
}

/// Checks `p` against `g` from scratch: each vertex occurs exactly twice with
/// introduce first, every edge has overlapping intervals, and the stored
/// widths follow the recurrence. Interval connectivity of each vertex is
/// implied by the exactly-twice rule.
pub fn validate(p: &PathDecomposition, g: &Graph) -> Result<(), Vec<Violation>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if p.events.len() != 2 * n {
        out.push(Violation::LengthMismatch { expected: 2 * n, found: p.events.len() });
    }

    let mut intro = vec![usize::MAX; n];
    let mut forget = vec![usize::MAX; n];
    let mut expected = -1;
    for (j, e) in p.events.iter().enumerate() {
        let index = j + 1;
        expected += e.tag.sign();
        if e.width != expected {
            out.push(Violation::WidthMismatch { index, expected, found: e.width });
        }
        let v = e.vertex;
        if v >= n {
            out.push(Violation::UnknownVertex { index, vertex: v });
            continue;
        }
        match e.tag {
            Tag::Introduce if intro[v] == usize::MAX && forget[v] == usize::MAX => intro[v] = j,
            Tag::Forget if forget[v] == usize::MAX && intro[v] != usize::MAX => forget[v] = j,
            Tag::Forget if intro[v] == usize::MAX && forget[v] == usize::MAX => {
                out.push(Violation::ForgetBeforeIntroduce { index, vertex: v });
                forget[v] = j;
            }
            _ => out.push(Violation::ExtraOccurrence { index, vertex: v }),
        }
    }

    for v in 0..n {
        if intro[v] == usize::MAX && forget[v] == usize::MAX {
            out.push(Violation::VertexMissing { vertex: v });
        } else if intro[v] != usize::MAX && forget[v] == usize::MAX {
            out.push(Violation::NeverForgotten { vertex: v });
        }
    }

    let complete = |v: Vertex| intro[v] != usize::MAX && forget[v] != usize::MAX && intro[v] < forget[v];
    for (u, v) in g.edges() {
        if complete(u) && complete(v) && !(intro[u] < forget[v] && intro[v] < forget[u]) {
            out.push(Violation::EdgeUncovered { u, v });
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Serializes a bag sequence. Between consecutive bags the departing
/// vertices are forgotten before the arriving ones are introduced, so no
/// transient bag is larger than its neighbors. Ties go by vertex id.
pub fn from_bags<B: AsRef<[Vertex]>>(bag_sequence: &[B]) -> Result<PathDecomposition, DecompositionError> {
    let mut state: Vec<u8> = Vec::new();
    let mut steps: Vec<(Vertex, Tag)> = Vec::new();
    let mut previous: Vec<Vertex> = Vec::new();
    for bag in bag_sequence {
        let mut bag: Vec<Vertex> = bag.as_ref().to_vec();
        bag.sort_unstable();
        bag.dedup();
        for &v in &previous {
            if bag.binary_search(&v).is_err() {
                state[v] = 2;
                steps.push((v, Tag::Forget));
            }
        }
        for &v in &bag {
            if v >= state.len() {
                state.resize(v + 1, 0);
            }
            match state[v] {
                0 => {
                    state[v] = 1;
                    steps.push((v, Tag::Introduce));
                }
                1 => {}
                _ => return Err(DecompositionError::NotContiguous(v)),
            }
        }
        previous = bag;
    }
    steps.extend(previous.iter().map(|&v| (v, Tag::Forget)));
    PathDecomposition::from_steps(steps)
}

/// Lifts a decomposition of a contracted graph back to the original: every
/// merged vertex is replaced in each bag by its originals. Bags at most
/// double, so the width goes from `k` to at most `2k + 1`.
pub fn expand_contraction(
    p: &PathDecomposition,
    map: &ContractionMap,
) -> Result<PathDecomposition, DecompositionError> {
    let merged = map.merged_count();
    if let Some(e) = p.events.iter().find(|e| e.vertex >= merged) {
        return Err(DecompositionError::UnmappedVertex { vertex: e.vertex, merged });
    }
    let expanded: Vec<Vec<Vertex>> = bags(p)
        .into_iter()
        .map(|bag| bag.iter().flat_map(|&m| map.originals(m).iter().copied()).collect())
        .collect();
    from_bags(&expanded)
}

/// Turns a decomposition of `g` minus the legs into one of `g`.
///
/// Every leg `v` is simplicial, so its neighborhood sits inside some bag of
/// `core`; `v` is introduced and immediately forgotten right after the first
/// such bag (the empty bag before the first event counts for isolated legs).
/// Legs sharing a host follow each other, so the width grows by at most one.
pub fn flatten_caterpillar(
    core: &PathDecomposition,
    legs: &[Vertex],
    g: &Graph,
) -> Result<PathDecomposition, DecompositionError> {
    let core_bags = bags(core);
    // splice[j] holds the legs placed after event j; slot 0 is the front
    let mut splice: Vec<Vec<Vertex>> = vec![Vec::new(); core_bags.len() + 1];
    let mut legs = legs.to_vec();
    legs.sort_unstable();
    for &v in &legs {
        let nb = g.neighbors(v);
        let host = if nb.is_empty() {
            Some(0)
        } else {
            core_bags
                .iter()
                .position(|bag| nb.iter().all(|u| bag.binary_search(u).is_ok()))
                .map(|j| j + 1)
        };
        match host {
            Some(slot) => splice[slot].push(v),
            None => return Err(DecompositionError::NoHostBag(v)),
        }
    }

    let mut steps = Vec::with_capacity(core.len() + 2 * legs.len());
    let leg_steps = |slot: &[Vertex], steps: &mut Vec<(Vertex, Tag)>| {
        for &v in slot {
            steps.push((v, Tag::Introduce));
            steps.push((v, Tag::Forget));
        }
    };
    leg_steps(&splice[0], &mut steps);
    for (j, e) in core.events.iter().enumerate() {
        steps.push((e.vertex, e.tag));
        leg_steps(&splice[j + 1], &mut steps);
    }
    PathDecomposition::from_steps(steps)
}

/// Shrinks every interval as far as `g` allows: each vertex is forgotten
/// right after the last introduce among itself and its neighbors, then,
/// symmetrically, introduced right before the first forget among them.
/// Every bag only loses vertices, so the result is valid for `g` whenever
/// `p` is, and no wider.
pub fn tighten(p: &PathDecomposition, g: &Graph) -> PathDecomposition {
    let once = forget_early(p, g);
    reversed(&forget_early(&reversed(&once), g))
}

fn forget_early(p: &PathDecomposition, g: &Graph) -> PathDecomposition {
    let spans = p.intervals();
    // release[j]: vertices forgotten right after event j, in original forget order
    let mut release: Vec<Vec<Vertex>> = vec![Vec::new(); p.len()];
    let mut by_forget: Vec<Vertex> = (0..spans.len()).filter(|&v| spans[v].0 != usize::MAX).collect();
    by_forget.sort_unstable_by_key(|&v| spans[v].1);
    for v in by_forget {
        let last = g.neighbors(v).iter().map(|&u| spans[u].0).fold(spans[v].0, usize::max);
        release[last].push(v);
    }
    let mut steps = Vec::with_capacity(p.len());
    for (j, e) in p.events.iter().enumerate() {
        if e.tag == Tag::Introduce {
            steps.push((e.vertex, Tag::Introduce));
        }
        steps.extend(release[j].iter().map(|&v| (v, Tag::Forget)));
    }
    PathDecomposition::from_steps(steps).expect("intervals only shrink")
}

fn reversed(p: &PathDecomposition) -> PathDecomposition {
    let flip = |t: Tag| match t {
        Tag::Introduce => Tag::Forget,
        Tag::Forget => Tag::Introduce,
    };
    PathDecomposition::from_steps(p.events.iter().rev().map(|e| (e.vertex, flip(e.tag)))).expect("reversal keeps structure")
}

/// Largest `n` accepted by [`enumerate_all`].
pub const ENUMERATION_LIMIT: usize = 6;

/// Streams every decomposition of the vertex set `0..n`, each exactly once,
/// `n! (2n-1)!!` in total.
pub fn enumerate_all(n: usize) -> Result<EnumerateAll, DecompositionError> {
    if n > ENUMERATION_LIMIT {
        return Err(DecompositionError::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    Ok(EnumerateAll::new(n))
}

/// Iterator returned by [`enumerate_all`].
///
/// Depth-first over choices; choice `c` at a position means vertex `c / 2`
/// with tag introduce (`c` even) or forget (`c` odd).
#[derive(Debug, Clone)]
pub struct EnumerateAll {
    n: usize,
    state: Vec<u8>,
    choices: Vec<usize>,
    started: bool,
    done: bool,
}

impl EnumerateAll {
    fn new(n: usize) -> Self {
        EnumerateAll { n, state: vec![0; n], choices: Vec::with_capacity(2 * n), started: false, done: false }
    }

    fn allowed(&self, c: usize) -> bool {
        let want = (c % 2) as u8;
        self.state[c / 2] == want
    }

    fn apply(&mut self, c: usize) {
        self.state[c / 2] += 1;
        self.choices.push(c);
    }

    fn undo(&mut self) -> Option<usize> {
        let c = self.choices.pop()?;
        self.state[c / 2] -= 1;
        Some(c)
    }

    /// Extends the current prefix with the smallest choices available.
    fn fill(&mut self, mut from: usize) -> bool {
        while self.choices.len() < 2 * self.n {
            match (from..2 * self.n).find(|&c| self.allowed(c)) {
                Some(c) => {
                    self.apply(c);
                    from = 0;
                }
                None => return false,
            }
        }
        true
    }

    fn current(&self) -> PathDecomposition {
        let steps = self
            .choices
            .iter()
            .map(|&c| (c / 2, if c % 2 == 0 { Tag::Introduce } else { Tag::Forget }));
        PathDecomposition::from_steps(steps).expect("enumeration keeps the invariants")
    }
}

impl Iterator for EnumerateAll {
    type Item = PathDecomposition;

    fn next(&mut self) -> Option<PathDecomposition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            // the first complete sequence always exists
            self.fill(0);
            return Some(self.current());
        }
        loop {
            let Some(c) = self.undo() else {
                self.done = true;
                return None;
            };
            if let Some(next) = (c + 1..2 * self.n).find(|&d| self.allowed(d)) {
                self.apply(next);
                if self.fill(0) {
                    return Some(self.current());
                }
            }
        }
    }
}
