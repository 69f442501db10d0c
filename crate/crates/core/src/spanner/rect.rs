//! 3-hop spanners for axis-parallel objects: horizontal segments against
//! vertical lines via a greedy interval cover, mixed H/V segment sets via
//! divide and conquer on the median y, and axis-aligned rectangles via their
//! boundary segments plus a corner-containment biclique cover.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geom::{GeometricObject, ObjectSet};
use crate::graph::{IntersectionGraph, Spanner};

/// One interval of the greedy x-cover. Run starts are single points
/// (`lo == hi`); every other interval is half-open `(lo, hi]`. `segment`
/// is the covering segment's index.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverInterval {
    pub lo: f64,
    pub hi: f64,
    pub run_start: bool,
    pub segment: u32,
}

#[derive(Clone, Debug, Default)]
pub struct IntervalCover {
    pub intervals: Vec<CoverInterval>,
}

impl IntervalCover {
    /// Index of the interval containing `x`, if any.
    pub fn locate(&self, x: f64) -> Option<usize> {
        // first interval with hi >= x
        let k = self
            .intervals
            .partition_point(|iv| iv.hi.total_cmp(&x) == std::cmp::Ordering::Less);
        let iv = self.intervals.get(k)?;
        let inside = if iv.run_start {
            iv.lo == x
        } else {
            iv.lo < x && x <= iv.hi
        };
        inside.then_some(k)
    }
}

/// Greedy interval cover of the segments' x-extents: each interval is
/// spanned by the segment reaching farthest right among those starting at
/// or left of the previous boundary; when no segment reaches past a
/// boundary, a fresh run starts at the next uncovered left endpoint.
pub fn cover_intervals(extents: &[(f64, f64)]) -> IntervalCover {
    let mut cover = IntervalCover::default();
    let n = extents.len();
    if n == 0 {
        return cover;
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        extents[a as usize]
            .0
            .total_cmp(&extents[b as usize].0)
            .then(a.cmp(&b))
    });
    let mut pos = 0usize;
    // best right end among segments whose left end has been passed
    let mut best: Option<(f64, u32)> = None;
    while pos < order.len() {
        let x0 = extents[order[pos] as usize].0;
        let start = order[pos..]
            .iter()
            .take_while(|&&i| extents[i as usize].0 == x0)
            .copied()
            .min()
            .expect("run group is nonempty");
        cover.intervals.push(CoverInterval {
            lo: x0,
            hi: x0,
            run_start: true,
            segment: start,
        });
        let mut boundary = x0;
        loop {
            while pos < order.len() && extents[order[pos] as usize].0 <= boundary {
                let i = order[pos];
                let right = extents[i as usize].1;
                let better = match best {
                    None => true,
                    Some((br, bi)) => {
                        right > br || (right == br && i < bi)
                    }
                };
                if better {
                    best = Some((right, i));
                }
                pos += 1;
            }
            match best {
                Some((right, i)) if right > boundary => {
                    cover.intervals.push(CoverInterval {
                        lo: boundary,
                        hi: right,
                        run_start: false,
                        segment: i,
                    });
                    boundary = right;
                }
                _ => break,
            }
        }
    }
    cover
}

#[derive(Clone, Copy, Debug)]
struct HSeg {
    y: f64,
    x0: f64,
    x1: f64,
    id: u32,
}

#[derive(Clone, Copy, Debug)]
struct VSeg {
    x: f64,
    y0: f64,
    y1: f64,
    id: u32,
}

/// Interval-cover edges for horizontal segments against vertical lines:
/// each line connects to its interval's covering segment, and each segment
/// to its leftmost and rightmost line.
fn seg_line_core(h: &[HSeg], lines: &[(f64, u32)], emit: &mut impl FnMut(u32, u32)) {
    if h.is_empty() || lines.is_empty() {
        return;
    }
    let extents: Vec<(f64, f64)> = h.iter().map(|s| (s.x0, s.x1)).collect();
    let cover = cover_intervals(&extents);
    let mut sorted: Vec<(f64, u32)> = lines.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for &(x, id) in &sorted {
        if let Some(k) = cover.locate(x) {
            let seg = &h[cover.intervals[k].segment as usize];
            emit(seg.id, id);
        }
    }
    for s in h {
        let lo = sorted.partition_point(|&(x, _)| x.total_cmp(&s.x0) == std::cmp::Ordering::Less);
        let hi = sorted.partition_point(|&(x, _)| x.total_cmp(&s.x1) != std::cmp::Ordering::Greater);
        if lo >= hi {
            continue;
        }
        let max_x = sorted[hi - 1].0;
        let rightmost =
            sorted.partition_point(|&(x, _)| x.total_cmp(&max_x) == std::cmp::Ordering::Less);
        emit(s.id, sorted[lo].1);
        emit(s.id, sorted[rightmost].1);
    }
}

/// One direct edge per collinear overlapping pair, found by a sweep in
/// endpoint order within each shared coordinate group.
fn overlap_pass(items: &[(f64, f64, f64, u32)], emit: &mut impl FnMut(u32, u32)) {
    // items: (group coordinate, lo, hi, id), intersecting iff same group
    // coordinate and [lo, hi] ranges meet
    let mut sorted: Vec<&(f64, f64, f64, u32)> = items.iter().collect();
    sorted.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.3.cmp(&b.3))
    });
    let mut g0 = 0usize;
    while g0 < sorted.len() {
        let g1 = g0
            + sorted[g0..]
                .iter()
                .take_while(|it| it.0 == sorted[g0].0)
                .count();
        let mut active: Vec<&(f64, f64, f64, u32)> = Vec::new();
        for it in &sorted[g0..g1] {
            active.retain(|a| a.2 >= it.1);
            for a in &active {
                emit(a.3, it.3);
            }
            active.push(it);
        }
        g0 = g1;
    }
}

fn seg_rec(
    h: &[HSeg],
    v: Vec<VSeg>,
    slab: (f64, f64),
    emit: &mut impl FnMut(u32, u32),
) {
    if h.is_empty() || v.is_empty() {
        return;
    }
    if h.len() == 1 {
        let s = &h[0];
        for vv in &v {
            if vv.x >= s.x0 && vv.x <= s.x1 && s.y >= vv.y0 && s.y <= vv.y1 {
                emit(s.id, vv.id);
            }
        }
        return;
    }
    let (long, rest): (Vec<VSeg>, Vec<VSeg>) = v
        .into_iter()
        .partition(|vv| vv.y0 <= slab.0 && vv.y1 >= slab.1);
    if !long.is_empty() {
        let lines: Vec<(f64, u32)> = long.iter().map(|vv| (vv.x, vv.id)).collect();
        seg_line_core(h, &lines, emit);
    }
    let mid = h.len() / 2;
    let y_med = h[mid].y;
    let (h_lo, h_up) = h.split_at(mid);
    let v_lo: Vec<VSeg> = rest
        .iter()
        .filter(|vv| vv.y0 <= y_med && vv.y1 >= slab.0)
        .copied()
        .collect();
    let v_up: Vec<VSeg> = rest
        .iter()
        .filter(|vv| vv.y1 >= y_med && vv.y0 <= slab.1)
        .copied()
        .collect();
    seg_rec(h_lo, v_lo, (slab.0, y_med), emit);
    seg_rec(h_up, v_up, (y_med, slab.1), emit);
}

fn sorted_by_y(mut h: Vec<HSeg>) -> Vec<HSeg> {
    h.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.id.cmp(&b.id)));
    h
}

/// 3-hop spanner for horizontal segments and vertical lines.
pub fn seg_line_spanner(set: &ObjectSet) -> Result<Spanner> {
    let mut h: Vec<HSeg> = Vec::new();
    let mut lines: Vec<(f64, u32)> = Vec::new();
    for i in 0..set.len() {
        match set.get(i) {
            GeometricObject::HSegment { y, x0, x1 } => h.push(HSeg {
                y: *y,
                x0: *x0,
                x1: *x1,
                id: i as u32,
            }),
            GeometricObject::VLine { x } => lines.push((*x, i as u32)),
            _ => {
                return Err(Error::Input(
                    "expected horizontal segments and vertical lines".into(),
                ))
            }
        }
    }
    let g = IntersectionGraph::from_objects(set);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut emit = |a: u32, b: u32| {
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    };
    seg_line_core(&h, &lines, &mut emit);
    let h_items: Vec<(f64, f64, f64, u32)> = h.iter().map(|s| (s.y, s.x0, s.x1, s.id)).collect();
    overlap_pass(&h_items, &mut emit);
    let line_items: Vec<(f64, f64, f64, u32)> =
        lines.iter().map(|&(x, id)| (x, 0.0, 0.0, id)).collect();
    overlap_pass(&line_items, &mut emit);

    let extents: Vec<(f64, f64)> = h.iter().map(|s| (s.x0, s.x1)).collect();
    let cover = cover_intervals(&extents);
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("n".into(), set.len().into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("segments".into(), h.len().into());
    parameters.insert("lines".into(), lines.len().into());
    parameters.insert("intervals".into(), cover.intervals.len().into());
    Ok(Spanner::from_parts(3, "seg-line", parameters, edges))
}

/// 3-hop spanner for mixed horizontal and vertical segments: slabs are
/// bisected at the median segment y, verticals spanning a whole slab act as
/// lines there and are dropped from the recursion.
pub fn seg_spanner(set: &ObjectSet) -> Result<Spanner> {
    let mut h: Vec<HSeg> = Vec::new();
    let mut v: Vec<VSeg> = Vec::new();
    for i in 0..set.len() {
        match set.get(i) {
            GeometricObject::HSegment { y, x0, x1 } => h.push(HSeg {
                y: *y,
                x0: *x0,
                x1: *x1,
                id: i as u32,
            }),
            GeometricObject::VSegment { x, y0, y1 } => v.push(VSeg {
                x: *x,
                y0: *y0,
                y1: *y1,
                id: i as u32,
            }),
            _ => {
                return Err(Error::Input(
                    "expected horizontal and vertical segments".into(),
                ))
            }
        }
    }
    let g = IntersectionGraph::from_objects(set);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut emit = |a: u32, b: u32| {
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    };
    run_seg(h, v, &mut emit);
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("n".into(), set.len().into());
    parameters.insert("m".into(), g.m().into());
    Ok(Spanner::from_parts(3, "seg", parameters, edges))
}

fn run_seg(h: Vec<HSeg>, v: Vec<VSeg>, emit: &mut impl FnMut(u32, u32)) {
    let h_items: Vec<(f64, f64, f64, u32)> = h.iter().map(|s| (s.y, s.x0, s.x1, s.id)).collect();
    overlap_pass(&h_items, emit);
    let v_items: Vec<(f64, f64, f64, u32)> = v.iter().map(|s| (s.x, s.y0, s.y1, s.id)).collect();
    overlap_pass(&v_items, emit);
    if h.is_empty() {
        return;
    }
    let h = sorted_by_y(h);
    let slab = (h[0].y, h[h.len() - 1].y);
    let v_live: Vec<VSeg> = v
        .into_iter()
        .filter(|vv| vv.y1 >= slab.0 && vv.y0 <= slab.1)
        .collect();
    seg_rec(&h, v_live, slab, emit);
}

/// Biclique cover of (lower-left corner, containing rectangle) pairs via a
/// two-level segment tree; each bucket contributes two stars through its
/// lowest-index rectangle on either side, so corner pairs are joined within
/// three hops.
fn corner_cover(
    rects: &[([f64; 2], [f64; 2])],
    emit: &mut impl FnMut(u32, u32),
) -> (usize, usize) {
    let n = rects.len();
    if n == 0 {
        return (0, 0);
    }
    // points sorted by x; positions index this order
    let mut by_x: Vec<u32> = (0..n as u32).collect();
    by_x.sort_by(|&a, &b| {
        rects[a as usize].0[0]
            .total_cmp(&rects[b as usize].0[0])
            .then(a.cmp(&b))
    });
    let xs: Vec<f64> = by_x.iter().map(|&i| rects[i as usize].0[0]).collect();

    // x segment tree: queries collected per canonical node
    let size = n.next_power_of_two();
    let mut node_queries: Vec<Vec<u32>> = vec![Vec::new(); 2 * size];
    for (r, rect) in rects.iter().enumerate() {
        let lo = xs.partition_point(|&x| x.total_cmp(&rect.0[0]) == std::cmp::Ordering::Less);
        let hi = xs.partition_point(|&x| x.total_cmp(&rect.1[0]) != std::cmp::Ordering::Greater);
        let (mut l, mut rr) = (lo + size, hi + size);
        while l < rr {
            if l & 1 == 1 {
                node_queries[l].push(r as u32);
                l += 1;
            }
            if rr & 1 == 1 {
                rr -= 1;
                node_queries[rr].push(r as u32);
            }
            l >>= 1;
            rr >>= 1;
        }
    }

    let mut buckets = 0usize;
    let mut corner_edges = 0usize;
    for node in 1..2 * size {
        if node_queries[node].is_empty() {
            continue;
        }
        // positions covered by this node
        let mut span = 1usize;
        let mut first = node;
        while first < size {
            first <<= 1;
            span <<= 1;
        }
        let start = first - size;
        let end = (start + span).min(n);
        if start >= n {
            continue;
        }
        // second level: points of this node sorted by y
        let mut by_y: Vec<u32> = by_x[start..end].to_vec();
        by_y.sort_by(|&a, &b| {
            rects[a as usize].0[1]
                .total_cmp(&rects[b as usize].0[1])
                .then(a.cmp(&b))
        });
        let ys: Vec<f64> = by_y.iter().map(|&i| rects[i as usize].0[1]).collect();
        let ssize = by_y.len().next_power_of_two();
        let mut ynode_queries: Vec<Vec<u32>> = vec![Vec::new(); 2 * ssize];
        for &r in &node_queries[node] {
            let rect = &rects[r as usize];
            let lo = ys.partition_point(|&y| y.total_cmp(&rect.0[1]) == std::cmp::Ordering::Less);
            let hi = ys.partition_point(|&y| y.total_cmp(&rect.1[1]) != std::cmp::Ordering::Greater);
            let (mut l, mut rr) = (lo + ssize, hi + ssize);
            while l < rr {
                if l & 1 == 1 {
                    ynode_queries[l].push(r);
                    l += 1;
                }
                if rr & 1 == 1 {
                    rr -= 1;
                    ynode_queries[rr].push(r);
                }
                l >>= 1;
                rr >>= 1;
            }
        }
        for ynode in 1..2 * ssize {
            if ynode_queries[ynode].is_empty() {
                continue;
            }
            let mut yspan = 1usize;
            let mut yfirst = ynode;
            while yfirst < ssize {
                yfirst <<= 1;
                yspan <<= 1;
            }
            let ystart = yfirst - ssize;
            let yend = (ystart + yspan).min(by_y.len());
            if ystart >= by_y.len() {
                continue;
            }
            let members = &by_y[ystart..yend];
            let queriers = &ynode_queries[ynode];
            let a0 = *members.iter().min().expect("nonempty bucket");
            let b0 = *queriers.iter().min().expect("nonempty bucket");
            buckets += 1;
            for &d in queriers {
                if a0 != d {
                    emit(a0, d);
                    corner_edges += 1;
                }
            }
            for &c in members {
                if b0 != c {
                    emit(b0, c);
                    corner_edges += 1;
                }
            }
        }
    }
    (buckets, corner_edges)
}

/// 3-hop spanner for axis-aligned rectangles: boundary segments carry the
/// side-intersection structure, lower-left corner containment is covered by
/// rectangle bicliques.
pub fn rect_spanner(set: &ObjectSet) -> Result<Spanner> {
    let mut rects: Vec<([f64; 2], [f64; 2])> = Vec::new();
    for i in 0..set.len() {
        match set.get(i) {
            GeometricObject::AxisRect { lo, hi } => rects.push((*lo, *hi)),
            _ => return Err(Error::Input("expected axis-aligned rectangles".into())),
        }
    }
    let g = IntersectionGraph::from_objects(set);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut seg_edges = 0usize;
    {
        let mut emit = |a: u32, b: u32| {
            if a != b && edges.insert((a.min(b), a.max(b))) {
                seg_edges += 1;
            }
        };
        let mut h: Vec<HSeg> = Vec::new();
        let mut v: Vec<VSeg> = Vec::new();
        for (i, (lo, hi)) in rects.iter().enumerate() {
            let id = i as u32;
            h.push(HSeg { y: lo[1], x0: lo[0], x1: hi[0], id });
            h.push(HSeg { y: hi[1], x0: lo[0], x1: hi[0], id });
            v.push(VSeg { x: lo[0], y0: lo[1], y1: hi[1], id });
            v.push(VSeg { x: hi[0], y0: lo[1], y1: hi[1], id });
        }
        run_seg(h, v, &mut emit);
    }
    let mut corner_new = 0usize;
    let (buckets, _) = {
        let mut emit = |a: u32, b: u32| {
            if a != b && edges.insert((a.min(b), a.max(b))) {
                corner_new += 1;
            }
        };
        corner_cover(&rects, &mut emit)
    };
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("n".into(), set.len().into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("side_edges".into(), seg_edges.into());
    parameters.insert("corner_edges".into(), corner_new.into());
    parameters.insert("corner_buckets".into(), buckets.into());
    Ok(Spanner::from_parts(3, "rect", parameters, edges))
}
