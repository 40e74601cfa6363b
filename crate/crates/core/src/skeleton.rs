//! Skeletons: partial decompositions compressed to what matters for the
//! vertices of a bag.
//!
//! A skeleton is stored as an alternating walk of *points* and retained
//! events. A point is a position between two consecutive events of the
//! underlying decomposition and carries the bag width there; a retained
//! event sits between the point before it and the point after it. Points
//! that are adjacent in the walk have one or more hidden events (of vertices
//! outside the bag) between them. The first point is the empty bag before
//! the first event and the last point the empty bag after the last one,
//! both of width `-1`.
//!
//! Simplifying deletes runs of points whose widths all lie between the
//! widths of the surviving points around them, until nothing more can be
//! deleted. Two rules are available, see [`SimplifyRule`].

use alloc::vec::Vec;
use core::fmt;

use crate::decomposition::{Event, PathDecomposition, Tag};
use crate::Vertex;

/// Which points are protected from deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum SimplifyRule {
    /// Nodes are events: a hidden event survives or dies with the point after
    /// it, and only the two sequence ends and the points right after retained
    /// events are fixed. A run of hidden events right before a retained event
    /// is flanked by that event's width.
    Node,
    /// The points right before retained events are fixed as well, so each
    /// stretch between two retained events keeps both of its endpoints. This
    /// is the form the reducer works on: it keeps the lowest point of a
    /// stretch even when that point lies just before the forget event of a
    /// neighbor of a later vertex.
    #[default]
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Item {
    Point(i32),
    Retained(Vertex, Tag),
}

impl Item {
    pub(crate) fn width(self) -> Option<i32> {
        match self {
            Item::Point(w) => Some(w),
            Item::Retained(..) => None,
        }
    }
}

/// Event of a full skeleton; `vertex` is `None` for the sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonEvent {
    pub vertex: Option<Vertex>,
    pub tag: Tag,
    pub width: i32,
}

/// A decomposition with every vertex outside a chosen set replaced by the
/// sentinel; widths are untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullSkeleton {
    pub events: Vec<SkeletonEvent>,
}

pub fn full_skeleton(p: &PathDecomposition, keep: impl Fn(Vertex) -> bool) -> FullSkeleton {
    let events = p
        .events()
        .iter()
        .map(|e| SkeletonEvent { vertex: keep(e.vertex).then_some(e.vertex), tag: e.tag, width: e.width })
        .collect();
    FullSkeleton { events }
}

/// Compressed partial decomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    pub(crate) rule: SimplifyRule,
    pub(crate) peak: i32,
    pub(crate) items: Vec<Item>,
}

impl Skeleton {
    /// Skeleton of the empty decomposition: a single point of width `-1`.
    pub fn empty(rule: SimplifyRule) -> Self {
        Skeleton { rule, peak: -1, items: alloc::vec![Item::Point(-1)] }
    }

    pub fn rule(&self) -> SimplifyRule {
        self.rule
    }

    /// Largest width ever reached by the underlying decomposition.
    pub fn peak(&self) -> i32 {
        self.peak
    }

    /// Retained events in order, each with the width right after it.
    pub fn retained(&self) -> Vec<Event> {
        self.items
            .windows(2)
            .filter_map(|w| match (w[0], w[1]) {
                (Item::Retained(vertex, tag), Item::Point(width)) => Some(Event { vertex, tag, width }),
                _ => None,
            })
            .collect()
    }

    pub fn retained_vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .items
            .iter()
            .filter_map(|it| match *it {
                Item::Retained(v, Tag::Introduce) => Some(v),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Surviving hidden widths of each of the `retained + 1` stretches.
    ///
    /// The point right after a retained event (or the front) is that event's
    /// own width and is left out, as is the final point. Under
    /// [`SimplifyRule::Interval`] the fixed point right before a retained
    /// event is left out too, since it always equals that event's width
    /// minus its sign.
    pub fn gaps(&self) -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        for run in runs(&self.items) {
            let before_event = run.end < self.items.len();
            let mut widths: Vec<i32> = self.items[run.start + 1..run.end].iter().filter_map(|it| it.width()).collect();
            if (!before_event || self.rule == SimplifyRule::Interval) && run.end - run.start > 1 {
                widths.pop();
            }
            out.push(widths);
        }
        out
    }

    /// Longest entry of [`Skeleton::gaps`].
    pub fn max_gap_len(&self) -> usize {
        runs(&self.items)
            .map(|run| {
                let before_event = run.end < self.items.len();
                let pinned_end = !before_event || self.rule == SimplifyRule::Interval;
                (run.len() - 1).saturating_sub(usize::from(pinned_end))
            })
            .max()
            .unwrap_or(0)
    }

    /// Maximum width over everything stored, including the peak.
    pub fn width(&self) -> i32 {
        skeleton_width(self)
    }

    /// Byte encoding that is equal exactly when the skeletons are equal.
    pub fn canonical_key(&self) -> Vec<u8> {
        canonical_key(self)
    }

    /// Item index of the introduce and forget events of `v`.
    pub(crate) fn span_of(&self, v: Vertex) -> Option<(usize, usize)> {
        let intro = self.items.iter().position(|&it| it == Item::Retained(v, Tag::Introduce))?;
        let forget = self.items[intro..].iter().position(|&it| it == Item::Retained(v, Tag::Forget))? + intro;
        Some((intro, forget))
    }

    /// Replaces both events of `v` by hidden ones and re-simplifies.
    /// Returns `None` if `v` is not retained.
    pub fn forget(&self, v: Vertex) -> Option<Skeleton> {
        let mut anchors = Vec::new();
        forget_with(self, &[], v, &mut anchors)
    }
}

/// Maximal runs of consecutive points, as half-open item ranges.
pub(crate) fn runs(items: &[Item]) -> impl Iterator<Item = core::ops::Range<usize>> + '_ {
    let mut i = 0;
    core::iter::from_fn(move || {
        while i < items.len() && !matches!(items[i], Item::Point(_)) {
            i += 1;
        }
        if i >= items.len() {
            return None;
        }
        let start = i;
        while i < items.len() && matches!(items[i], Item::Point(_)) {
            i += 1;
        }
        Some(start..i)
    })
}

/// Simplification under [`SimplifyRule::Node`].
pub fn simplify(f: &FullSkeleton) -> Skeleton {
    simplify_with(f, SimplifyRule::Node)
}

pub fn simplify_with(f: &FullSkeleton, rule: SimplifyRule) -> Skeleton {
    let mut items = Vec::with_capacity(2 * f.events.len() + 1);
    items.push(Item::Point(-1));
    let mut peak = -1;
    for e in &f.events {
        if let Some(v) = e.vertex {
            items.push(Item::Retained(v, e.tag));
        }
        items.push(Item::Point(e.width));
        peak = peak.max(e.width);
    }
    normalize::<Anchor>(&mut items, None, rule);
    Skeleton { rule, peak, items }
}

pub fn skeleton_width(s: &Skeleton) -> i32 {
    s.items.iter().filter_map(|it| it.width()).fold(s.peak, i32::max)
}

pub fn canonical_key(s: &Skeleton) -> Vec<u8> {
    let mut key = Vec::with_capacity(1 + 4 + 9 * s.items.len());
    key.push(match s.rule {
        SimplifyRule::Node => 0,
        SimplifyRule::Interval => 1,
    });
    key.extend_from_slice(&s.peak.to_be_bytes());
    for it in &s.items {
        match *it {
            Item::Point(w) => {
                key.push(0);
                key.extend_from_slice(&w.to_be_bytes());
            }
            Item::Retained(v, tag) => {
                key.push(if tag == Tag::Introduce { 1 } else { 2 });
                key.extend_from_slice(&(v as u64).to_be_bytes());
            }
        }
    }
    key
}

/// Whether `a` can be stretched (by repeating entries) and `b` likewise to
/// a common length with `a` pointwise at most `b`. First and last entries
/// are matched with each other.
pub fn typical_dominates(a: &[i32], b: &[i32]) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    // row[j]: cell (i, j) lies on a monotone path from (0, 0) through
    // cells with a[i] <= b[j]
    let mut prev = alloc::vec![false; b.len()];
    let mut row = alloc::vec![false; b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let from = (i == 0 && j == 0)
                || (j > 0 && row[j - 1])
                || (i > 0 && prev[j])
                || (i > 0 && j > 0 && prev[j - 1]);
            row[j] = x <= y && from;
        }
        core::mem::swap(&mut prev, &mut row);
    }
    prev[b.len() - 1]
}

impl Skeleton {
    /// Whether every completion of `other` is matched by one of `self` that
    /// is nowhere wider: equal retained events and rule, each stretch of
    /// `self` dominated by the one of `other`, and a peak no higher.
    pub fn dominates(&self, other: &Skeleton) -> bool {
        if self.rule != other.rule || self.peak > other.peak || !same_structure(self, other) {
            return false;
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        runs(&self.items).zip(runs(&other.items)).all(|(ra, rb)| {
            a.clear();
            b.clear();
            a.extend(self.items[ra].iter().filter_map(|it| it.width()));
            b.extend(other.items[rb].iter().filter_map(|it| it.width()));
            typical_dominates(&a, &b)
        })
    }

    /// The retained events in order; skeletons can only dominate each other
    /// when these agree.
    pub fn structure(&self) -> Vec<(Vertex, Tag)> {
        self.items
            .iter()
            .filter_map(|it| match *it {
                Item::Retained(v, t) => Some((v, t)),
                Item::Point(_) => None,
            })
            .collect()
    }
}

impl Skeleton {
    /// Whether a vertex adjacent to exactly the retained `neighbors` could
    /// still be placed at width `k`. Widths only grow as vertices are added,
    /// so a skeleton failing this for a later vertex is dead.
    pub fn has_room(&self, neighbors: &[Vertex], k: i32) -> bool {
        let items = &self.items;
        let mut limit = items.len();
        let mut floor = 0;
        for &u in neighbors {
            let Some((a, b)) = self.span_of(u) else { continue };
            limit = limit.min(b);
            floor = floor.max(a + 1);
        }
        room_between(items, limit, floor, k)
    }
}

impl Skeleton {
    /// Whether vertices still to come, given by their retained neighbors
    /// with multiplicity, could all be placed at width `k`.
    ///
    /// Each one alone needs [`Skeleton::has_room`]. One whose neighbors force
    /// it to start before item `L` and end after item `A > L` lies in every
    /// bag strictly between those items whatever else is inserted, and in
    /// the bags right before `L` and right after `A`. Those counts stack on
    /// top of the current widths; one with a free window still needs a
    /// point of it with room left after the stacking.
    pub fn admits(&self, upcoming: &[(Vec<Vertex>, usize)], k: i32) -> bool {
        let items = &self.items;
        let mut spans: Vec<(Vertex, usize, usize)> = Vec::new();
        for (idx, it) in items.iter().enumerate() {
            match *it {
                Item::Retained(v, Tag::Introduce) => spans.push((v, idx, usize::MAX)),
                Item::Retained(v, Tag::Forget) => {
                    let e = spans.iter_mut().find(|e| e.0 == v).expect("introduced before forgotten");
                    e.2 = idx;
                }
                Item::Point(_) => {}
            }
        }
        let len = items.len();
        let mut inner = alloc::vec![0i32; len + 1];
        let mut before = alloc::vec![0i32; len];
        let mut after = alloc::vec![0i32; len];
        let mut windows = Vec::new();
        for (neighbors, count) in upcoming {
            let count = *count as i32;
            let mut limit = len;
            let mut floor = 0;
            for &u in neighbors {
                if let Some(&(_, a, b)) = spans.iter().find(|e| e.0 == u) {
                    limit = limit.min(b);
                    floor = floor.max(a + 1);
                }
            }
            if !room_between(items, limit, floor, k) {
                return false;
            }
            if floor > limit + 1 {
                inner[limit + 1] += count;
                inner[floor - 1] -= count;
                before[limit - 1] += count;
                after[floor] += count;
            } else {
                windows.push((floor, limit, count));
            }
        }
        let mut stacked = alloc::vec![0i32; len];
        let mut c = 0;
        for q in 0..len {
            c += inner[q];
            stacked[q] = c;
            if let Some(w) = items[q].width() {
                if w + c + before[q].max(after[q]) > k {
                    return false;
                }
            }
        }
        windows.iter().all(|&(floor, limit, _)| {
            (floor..limit).any(|q| items[q].width().is_some_and(|w| w + stacked[q] < k))
        })
    }
}

fn room_between(items: &[Item], limit: usize, floor: usize, k: i32) -> bool {
    let low = |it: &Item| it.width().is_some_and(|w| w < k);
    if floor < limit {
        return items[floor..limit].iter().any(low);
    }
    let Some(i) = (0..limit).rev().find(|&x| items[x].width().is_some()) else { return false };
    let Some(j) = (floor..items.len()).find(|&x| items[x].width().is_some()) else { return false };
    items[i..=j].iter().all(|it| it.width().is_none_or(|w| w < k))
}

fn same_structure(a: &Skeleton, b: &Skeleton) -> bool {
    fn retained(s: &Skeleton) -> impl Iterator<Item = Item> + '_ {
        s.items.iter().copied().filter(|it| it.width().is_none())
    }
    retained(a).eq(retained(b))
}

/// Deletes everything deletable, keeping `anchors` (one per item, if given)
/// in step with `items`.
pub(crate) fn normalize<A>(items: &mut Vec<Item>, anchors: Option<&mut Vec<A>>, rule: SimplifyRule) {
    let mut keep = alloc::vec![true; items.len()];
    let mut any = false;
    let mut values = Vec::new();
    let mut kept = Vec::new();
    for run in runs(items) {
        let before_event = run.end < items.len();
        let pinned_end = !before_event || rule == SimplifyRule::Interval;
        values.clear();
        values.extend(items[run.clone()].iter().filter_map(|it| it.width()));
        if !pinned_end {
            // flank: the point right after the following retained event
            values.push(items[run.end + 1].width().expect("retained events are followed by a point"));
        }
        if values.len() < 3 {
            continue;
        }
        typical_keep(&values, &mut kept);
        for (offset, &k) in kept.iter().enumerate().take(run.len()) {
            if !k {
                keep[run.start + offset] = false;
                any = true;
            }
        }
    }
    if !any {
        return;
    }
    let mut flags = keep.iter();
    items.retain(|_| *flags.next().unwrap());
    if let Some(anchors) = anchors {
        let mut flags = keep.iter();
        anchors.retain(|_| *flags.next().unwrap());
    }
}

/// Marks which entries survive repeated deletion of interior runs lying
/// between their two neighbors (inclusive). First and last are fixed.
///
/// Scans left to right; for each surviving left end it deletes the longest
/// deletable run starting after it, then rescans.
pub(crate) fn typical_keep(values: &[i32], keep: &mut Vec<bool>) {
    keep.clear();
    keep.resize(values.len(), true);
    let mut alive: Vec<usize> = (0..values.len()).collect();
    'scan: loop {
        for a in 0..alive.len() {
            let left = values[alive[a]];
            let (mut lo, mut hi) = (i32::MAX, i32::MIN);
            let mut best = None;
            for b in a + 2..alive.len() {
                let w = values[alive[b - 1]];
                lo = lo.min(w);
                hi = hi.max(w);
                let right = values[alive[b]];
                if left.min(right) <= lo && hi <= left.max(right) {
                    best = Some(b);
                }
            }
            if let Some(b) = best {
                for &i in &alive[a + 1..b] {
                    keep[i] = false;
                }
                alive.drain(a + 1..b);
                continue 'scan;
            }
        }
        return;
    }
}

/// Where a new vertex's introduce and forget were placed, in terms of the
/// hidden events of the underlying decomposition they follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Placement {
    pub intro_after: Anchor,
    pub forget_after: Anchor,
}

/// The event a point follows: `FRONT`, or `vertex * 2 + tag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Anchor(pub usize);

impl Anchor {
    pub const FRONT: Anchor = Anchor(usize::MAX);

    pub fn after(v: Vertex, tag: Tag) -> Anchor {
        Anchor(2 * v + usize::from(tag == Tag::Forget))
    }

    pub fn event(self) -> Option<(Vertex, Tag)> {
        (self != Anchor::FRONT).then_some((self.0 / 2, if self.0.is_multiple_of(2) { Tag::Introduce } else { Tag::Forget }))
    }
}

/// Reorders directly consecutive retained events of the same kind so that
/// a vertex `a` with `outer(a, b)` is introduced before `b` and forgotten
/// after it. Widths do not change. Each swap is reported as the pair of
/// events in their old order.
///
/// Sound when `outer(a, b)` implies every vertex still to come that is
/// adjacent to `b` is adjacent to `a`: the events between the two in any
/// completion can then stay where they are.
pub(crate) fn canonicalize<F>(s: &mut Skeleton, mut anchors: Option<&mut Vec<Anchor>>, outer: F, swaps: &mut Vec<(Anchor, Anchor)>)
where
    F: Fn(Vertex, Vertex) -> bool,
{
    let items = &mut s.items;
    loop {
        let mut changed = false;
        let mut t = 1;
        while t + 2 < items.len() {
            let (Item::Retained(x, tx), Item::Point(_), Item::Retained(y, ty)) = (items[t], items[t + 1], items[t + 2]) else {
                t += 1;
                continue;
            };
            let swap = tx == ty
                && match tx {
                    Tag::Introduce => outer(y, x),
                    Tag::Forget => outer(x, y),
                };
            if swap {
                items.swap(t, t + 2);
                if let Some(a) = anchors.as_deref_mut() {
                    a[t + 1] = Anchor::after(y, ty);
                    a[t + 3] = Anchor::after(x, tx);
                }
                swaps.push((Anchor::after(x, tx), Anchor::after(y, ty)));
                changed = true;
            }
            t += 2;
        }
        if !changed {
            return;
        }
    }
}

/// Every way of adding vertex `v` to `s` with width at most `k`.
///
/// The introduce goes at some point `i` and the forget at a point `j >= i`;
/// every point in `i..=j` goes up by one, so all of them must be below `k`.
/// The introduce must come before the forget of each retained neighbor and
/// the forget after each neighbor's introduce.
pub fn introduce_expand(s: &Skeleton, v: Vertex, neighbors: &[Vertex], k: i32) -> Vec<Skeleton> {
    let mut out: Vec<Skeleton> = Vec::new();
    expand_with(s, None, v, neighbors, k, |c, _, _| out.push(c));
    out.sort();
    out.dedup();
    out
}

/// Forgets `v` in `s`; see [`Skeleton::forget`].
pub fn forget_update(s: &Skeleton, v: Vertex) -> Option<Skeleton> {
    s.forget(v)
}

pub(crate) fn forget_with(s: &Skeleton, anchors: &[Anchor], v: Vertex, out_anchors: &mut Vec<Anchor>) -> Option<Skeleton> {
    let (intro, forget) = s.span_of(v)?;
    let mut items = s.items.clone();
    items.remove(forget);
    items.remove(intro);
    out_anchors.clear();
    if !anchors.is_empty() {
        out_anchors.extend_from_slice(anchors);
        out_anchors.remove(forget);
        out_anchors.remove(intro);
    }
    if anchors.is_empty() {
        normalize::<Anchor>(&mut items, None, s.rule);
    } else {
        normalize(&mut items, Some(out_anchors), s.rule);
    }
    Some(Skeleton { rule: s.rule, peak: s.peak, items })
}

/// Core of [`introduce_expand`]. With anchors, also reports the anchors of
/// each candidate and where `v` went.
pub(crate) fn expand_with<F>(s: &Skeleton, anchors: Option<&[Anchor]>, v: Vertex, neighbors: &[Vertex], k: i32, mut emit: F)
where
    F: FnMut(Skeleton, Vec<Anchor>, Placement),
{
    let items = &s.items;
    let mut intro_limit = items.len();
    let mut forget_floor = 0;
    for &u in neighbors {
        let (a, b) = s.span_of(u).expect("neighbor must be retained");
        intro_limit = intro_limit.min(b);
        forget_floor = forget_floor.max(a + 1);
    }
    let intro_anchor = Anchor::after(v, Tag::Introduce);
    let forget_anchor = Anchor::after(v, Tag::Forget);

    for i in 0..intro_limit {
        let Item::Point(wi) = items[i] else { continue };
        if wi >= k {
            continue;
        }
        for j in i..items.len() {
            let wj = match items[j] {
                Item::Point(w) => w,
                Item::Retained(..) => continue,
            };
            if wj >= k {
                break;
            }
            if j < forget_floor {
                continue;
            }
            let mut next = Vec::with_capacity(items.len() + 4);
            next.extend_from_slice(&items[..i]);
            let mut next_anchors = Vec::new();
            if let Some(a) = anchors {
                next_anchors.reserve(items.len() + 4);
                next_anchors.extend_from_slice(&a[..i]);
            }
            let anchor_at = |idx: usize| anchors.map_or(Anchor::FRONT, |a| a[idx]);
            let mut peak = s.peak;
            if i == j {
                next.extend([Item::Point(wi), Item::Retained(v, Tag::Introduce), Item::Point(wi + 1)]);
                next.extend([Item::Retained(v, Tag::Forget), Item::Point(wi)]);
                if anchors.is_some() {
                    next_anchors.extend([anchor_at(i), Anchor::FRONT, intro_anchor, Anchor::FRONT, forget_anchor]);
                }
                peak = peak.max(wi + 1);
            } else {
                next.extend([Item::Point(wi), Item::Retained(v, Tag::Introduce), Item::Point(wi + 1)]);
                if anchors.is_some() {
                    next_anchors.extend([anchor_at(i), Anchor::FRONT, intro_anchor]);
                }
                peak = peak.max(wi + 1);
                for (idx, &it) in items.iter().enumerate().take(j + 1).skip(i + 1) {
                    let bumped = match it {
                        Item::Point(w) => {
                            peak = peak.max(w + 1);
                            Item::Point(w + 1)
                        }
                        other => other,
                    };
                    next.push(bumped);
                    if anchors.is_some() {
                        next_anchors.push(anchor_at(idx));
                    }
                }
                next.extend([Item::Retained(v, Tag::Forget), Item::Point(wj)]);
                if anchors.is_some() {
                    next_anchors.extend([Anchor::FRONT, forget_anchor]);
                }
            }
            next.extend_from_slice(&items[j + 1..]);
            if let Some(a) = anchors {
                next_anchors.extend_from_slice(&a[j + 1..]);
                normalize(&mut next, Some(&mut next_anchors), s.rule);
            } else {
                normalize::<Anchor>(&mut next, None, s.rule);
            }
            let placement = Placement {
                intro_after: anchor_at(i),
                forget_after: if i == j { intro_anchor } else { anchor_at(j) },
            };
            emit(Skeleton { rule: s.rule, peak, items: next }, next_anchors, placement);
        }
    }
}

impl fmt::Display for Skeleton {
    /// Retained events in brackets, hidden stretches as width lists, e.g.
    /// `[] (c,+,1) [] (c,-,-1) [] peak 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gaps = self.gaps();
        let retained = self.retained();
        for (i, gap) in gaps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{gap:?}")?;
            if let Some(e) = retained.get(i) {
                write!(f, " {e}")?;
            }
        }
        write!(f, " peak {}", self.peak)
    }
}
