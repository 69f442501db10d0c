//! Hop spanners for fat objects: shifted quadtree frames, centroid and
//! partition recursion, boundary hitting sets, and union-object contraction.
//!
//! Everything here works on "items": bags of leaf shapes with a cached
//! bounding box and leftmost point. At the top level an item is one input
//! object; at deeper levels of the level-k construction an item is the union
//! of a star's members.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::geom::intersect::{leaf_contains_point, leaf_intersects};
use crate::geom::object::lex_cmp;
use crate::geom::quadtree::{
    is_aligned_bbox, quadtree_centroid_in, quadtree_partition, shift_vector, QuadtreeCell,
};
use crate::geom::{Bbox, GeometricObject, ObjectSet, Point};
use crate::graph::{IntersectionGraph, Spanner};
use crate::schedule::{alpha, stretch_bound, Family};
use crate::spanner::{push_remapped, RECURSION_CUTOFF};

#[derive(Clone, Debug)]
struct FatItem {
    leaves: Vec<GeometricObject>,
    bbox: Bbox,
    leftmost: Point,
    side: f64,
}

impl FatItem {
    fn from_leaves(leaves: Vec<GeometricObject>) -> FatItem {
        let mut bbox = leaves[0].leaf_bbox();
        for leaf in &leaves[1..] {
            bbox.merge(&leaf.leaf_bbox());
        }
        let leftmost = leaves
            .iter()
            .filter_map(|l| l.leaf_leftmost())
            .min_by(|a, b| lex_cmp(a, b))
            .expect("fat items are built from bounded leaves");
        let side = bbox.max_extent();
        FatItem {
            leaves,
            bbox,
            leftmost,
            side,
        }
    }

    fn contains_point(&self, p: &[f64]) -> bool {
        self.leaves.iter().any(|l| leaf_contains_point(l, p))
    }

    fn meets(&self, proxy: &GeometricObject, proxy_bbox: &Bbox) -> bool {
        self.bbox.overlaps(proxy_bbox) && self.leaves.iter().any(|l| leaf_intersects(l, proxy))
    }

    fn intersects(&self, other: &FatItem) -> bool {
        self.bbox.overlaps(&other.bbox)
            && self
                .leaves
                .iter()
                .any(|a| other.leaves.iter().any(|b| leaf_intersects(a, b)))
    }
}

fn closed_rect(lo: &[f64], hi: &[f64]) -> (GeometricObject, Bbox) {
    let proxy = GeometricObject::BoxD {
        lo: lo.to_vec(),
        hi: hi.to_vec(),
    };
    let bbox = Bbox {
        lo: lo.to_vec(),
        hi: hi.to_vec(),
    };
    (proxy, bbox)
}

fn cell_rect(cell: &QuadtreeCell) -> (GeometricObject, Bbox) {
    let lo = cell.lo();
    let hi = cell.hi();
    (closed_rect(&lo, &hi).0, Bbox { lo, hi })
}

fn inside_open(bbox: &Bbox, lo: &[f64], hi: &[f64]) -> bool {
    bbox.lo
        .iter()
        .zip(lo)
        .all(|(&a, &b)| a > b)
        && bbox.hi.iter().zip(hi).all(|(&a, &b)| a < b)
}

/// Running counters surfaced in the spanner's parameter map.
#[derive(Default)]
struct Diag {
    hitting_fallback_points: usize,
    hitting_points_total: usize,
    jittered_leftmosts: usize,
    co_occurrence_patches: usize,
}

const JITTER_SCALE: f64 = 1.0 / 281_474_976_710_656.0; // 2^-48

/// Make the point list pairwise distinct by nudging duplicates. Offsets are
/// index-derived multiples of 2^-48 spread over the axes, so the total
/// displacement stays far below 2^-40 and never changes any intersection.
fn distinct_points(mut pts: Vec<Point>, diag: &mut Diag) -> Result<Vec<Point>> {
    let dim = pts.first().map_or(0, |p| p.len());
    for _round in 0..8 {
        let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
        for (i, p) in pts.iter().enumerate() {
            groups
                .entry(p.iter().map(|x| x.to_bits()).collect())
                .or_default()
                .push(i);
        }
        if groups.values().all(|g| g.len() == 1) {
            return Ok(pts);
        }
        for group in groups.values() {
            for (j, &i) in group.iter().enumerate().skip(1) {
                let mut code = j;
                for axis in 0..dim {
                    let digit = (code % 256) as f64;
                    code /= 256;
                    pts[i][axis] += digit * JITTER_SCALE;
                }
                diag.jittered_leftmosts += 1;
            }
        }
    }
    let unique: BTreeSet<Vec<u64>> = pts
        .iter()
        .map(|p| p.iter().map(|x| x.to_bits()).collect())
        .collect();
    if unique.len() == pts.len() {
        Ok(pts)
    } else {
        Err(Error::DuplicatePoints)
    }
}

/// Grid values of spacing `h` closest to `x` within [lo, hi], at most two.
fn snapped(x: f64, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut vals = Vec::new();
    for cand in [(x / h).floor() * h, (x / h).ceil() * h] {
        if cand >= lo && cand <= hi && !vals.contains(&cand) {
            vals.push(cand);
        }
    }
    vals
}

fn push_combos(axes: &[Vec<f64>], out: &mut Vec<Point>) {
    let mut combo = vec![0.0; axes.len()];
    fn rec(axes: &[Vec<f64>], k: usize, combo: &mut Vec<f64>, out: &mut Vec<Point>) {
        if k == axes.len() {
            out.push(combo.clone());
            return;
        }
        for &v in &axes[k] {
            combo[k] = v;
            rec(axes, k + 1, combo, out);
        }
    }
    rec(axes, 0, &mut combo, out);
    }

fn ball_candidates(
    center: &[f64],
    radius: f64,
    cell_lo: &[f64],
    cell_hi: &[f64],
    ell: f64,
    h: f64,
    out: &mut Vec<Point>,
) {
    let dim = center.len();
    let clamped: Point = center
        .iter()
        .zip(cell_lo.iter().zip(cell_hi))
        .map(|(&c, (&l, &u))| c.clamp(l, u))
        .collect();
    let dist2: f64 = clamped
        .iter()
        .zip(center)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    if dist2 > radius * radius {
        return;
    }
    let dist = dist2.sqrt();
    let t = radius.min(ell);
    let q: Point = if dist <= t {
        center.to_vec()
    } else {
        clamped
            .iter()
            .zip(center)
            .map(|(&x, &c)| x + (c - x) * (t / dist))
            .collect()
    };
    // An inscribed cube of the sub-ball around q; side 2t/sqrt(d) >= h for
    // every ball at the side-length threshold, so a grid point exists.
    let half = t / (dim as f64).sqrt();
    let axes: Vec<Vec<f64>> = q
        .iter()
        .map(|&x| snapped(x, h, x - half, x + half))
        .collect();
    let before = out.len();
    if axes.iter().all(|a| !a.is_empty()) {
        let mut combos = Vec::new();
        push_combos(&axes, &mut combos);
        for p in combos {
            let d2: f64 = p
                .iter()
                .zip(center)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if d2 <= radius * radius {
                out.push(p);
            }
        }
    }
    if out.len() == before {
        out.push(q);
    }
}

fn box_candidates(
    lo: &[f64],
    hi: &[f64],
    cell_lo: &[f64],
    cell_hi: &[f64],
    ell: f64,
    h: f64,
    out: &mut Vec<Point>,
) {
    let mut rlo = Vec::with_capacity(lo.len());
    let mut rhi = Vec::with_capacity(lo.len());
    for a in 0..lo.len() {
        rlo.push(lo[a].max(cell_lo[a] - ell));
        rhi.push(hi[a].min(cell_hi[a] + ell));
        if rlo[a] > rhi[a] {
            return;
        }
    }
    let axes: Vec<Vec<f64>> = (0..lo.len())
        .map(|a| {
            let mid = 0.5 * (rlo[a] + rhi[a]);
            let mut vals = snapped(mid, h, rlo[a], rhi[a]);
            if vals.is_empty() {
                vals.push(mid);
            }
            vals
        })
        .collect();
    push_combos(&axes, out);
}

fn clip_segment(a: [f64; 2], b: [f64; 2], lo: &[f64], hi: &[f64]) -> Option<([f64; 2], [f64; 2])> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = [b[0] - a[0], b[1] - a[1]];
    for axis in 0..2 {
        for (p, q) in [(-d[axis], a[axis] - lo[axis]), (d[axis], hi[axis] - a[axis])] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    Some((at(t0), at(t1)))
}

fn segment_candidates(
    a: [f64; 2],
    b: [f64; 2],
    cell_lo: &[f64],
    cell_hi: &[f64],
    ell: f64,
    out: &mut Vec<Point>,
) {
    let lo = [cell_lo[0] - ell, cell_lo[1] - ell];
    let hi = [cell_hi[0] + ell, cell_hi[1] + ell];
    if let Some((p, q)) = clip_segment(a, b, &lo, &hi) {
        out.push(vec![0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
    }
}

fn leaf_candidates(
    leaf: &GeometricObject,
    cell_lo: &[f64],
    cell_hi: &[f64],
    ell: f64,
    h: f64,
    out: &mut Vec<Point>,
) {
    match leaf {
        GeometricObject::Disk { center, radius } => {
            ball_candidates(center, *radius, cell_lo, cell_hi, ell, h, out)
        }
        GeometricObject::BallD { center, radius } => {
            ball_candidates(center, *radius, cell_lo, cell_hi, ell, h, out)
        }
        GeometricObject::BoxD { lo, hi } => box_candidates(lo, hi, cell_lo, cell_hi, ell, h, out),
        GeometricObject::AxisRect { lo, hi } => {
            box_candidates(lo, hi, cell_lo, cell_hi, ell, h, out)
        }
        GeometricObject::HSegment { y, x0, x1 } => {
            segment_candidates([*x0, *y], [*x1, *y], cell_lo, cell_hi, ell, out)
        }
        GeometricObject::VSegment { x, y0, y1 } => {
            segment_candidates([*x, *y0], [*x, *y1], cell_lo, cell_hi, ell, out)
        }
        GeometricObject::Polyline { vertices } => {
            if vertices.len() == 1 {
                out.push(vertices[0].to_vec());
            }
            for w in vertices.windows(2) {
                segment_candidates(w[0], w[1], cell_lo, cell_hi, ell, out);
            }
        }
        GeometricObject::VLine { .. } | GeometricObject::UnionObject { .. } => {}
    }
}

/// Pick points so that every listed crosser contains at least one of them.
/// Candidates come from per-leaf snapping onto a grid of spacing
/// ell/(2 d* sqrt(d)); a greedy cover keeps the selection small and a
/// per-object interior anchor guarantees completeness no matter what.
fn hitting_points(
    cell_lo: &[f64],
    side: f64,
    items: &[FatItem],
    crossers: &[u32],
    d_star: usize,
    diag: &mut Diag,
) -> Vec<Point> {
    if crossers.is_empty() {
        return Vec::new();
    }
    let dim = cell_lo.len();
    let cell_hi: Vec<f64> = cell_lo.iter().map(|&x| x + side).collect();
    let h = side / (2.0 * d_star as f64 * (dim as f64).sqrt());

    let mut candidates: Vec<Point> = Vec::new();
    for &c in crossers {
        for leaf in &items[c as usize].leaves {
            leaf_candidates(leaf, cell_lo, &cell_hi, side, h, &mut candidates);
        }
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    candidates.retain(|p| seen.insert(p.iter().map(|x| x.to_bits()).collect()));

    let mut cover: Vec<Vec<u32>> = candidates
        .iter()
        .map(|p| {
            crossers
                .iter()
                .copied()
                .filter(|&c| items[c as usize].contains_point(p))
                .collect()
        })
        .collect();

    let mut picked: Vec<Point> = Vec::new();
    let mut unhit: BTreeSet<u32> = crossers.iter().copied().collect();
    while !unhit.is_empty() {
        let mut best: Option<(usize, usize)> = None; // (gain, candidate)
        for (ci, cov) in cover.iter().enumerate() {
            let gain = cov.iter().filter(|c| unhit.contains(c)).count();
            if gain > 0 && best.map_or(true, |(bg, _)| gain > bg) {
                best = Some((gain, ci));
            }
        }
        let Some((_, ci)) = best else { break };
        for c in &cover[ci] {
            unhit.remove(c);
        }
        picked.push(candidates[ci].clone());
        cover[ci].clear();
    }
    for c in unhit {
        // No shared grid point reaches this object; anchor it individually.
        picked.push(items[c as usize].leftmost.clone());
        diag.hitting_fallback_points += 1;
    }
    diag.hitting_points_total += picked.len();
    picked
}

fn push_all_edges(g: &IntersectionGraph, out: &mut Vec<(u32, u32)>) {
    out.extend(g.edges());
}

/// Stars over hit objects plus one edge per (object, star it can reach),
/// shared by both constructions at the level where boundary objects live.
fn star_and_link_edges(
    items: &[FatItem],
    g: &IntersectionGraph,
    points: &[Point],
    out: &mut Vec<(u32, u32)>,
) {
    let n = items.len();
    for p in points {
        let members: Vec<u32> = (0..n as u32)
            .filter(|&i| items[i as usize].contains_point(p))
            .collect();
        if members.is_empty() {
            continue;
        }
        let center = members[0];
        let member_mask: Vec<bool> = {
            let mut mask = vec![false; n];
            for &w in &members {
                mask[w as usize] = true;
            }
            mask
        };
        for &w in &members[1..] {
            out.push((center, w));
        }
        for u in 0..n as u32 {
            if let Some(&w) = g.neighbors(u).iter().find(|&&w| member_mask[w as usize]) {
                out.push((u, w));
            }
        }
    }
}

fn rec_fat3(
    items: &[FatItem],
    g: &IntersectionGraph,
    d_star: usize,
    out: &mut Vec<(u32, u32)>,
    diag: &mut Diag,
) -> Result<()> {
    let n = items.len();
    if n <= RECURSION_CUTOFF {
        push_all_edges(g, out);
        return Ok(());
    }
    let dim = items[0].bbox.dim();
    let pts = distinct_points(items.iter().map(|it| it.leftmost.clone()).collect(), diag)?;
    let idxs: Vec<u32> = (0..n as u32).collect();
    let root = QuadtreeCell::root(dim);
    let cell = quadtree_centroid_in(&pts, &idxs, &root)?;
    let (proxy, proxy_bbox) = cell_rect(&cell);

    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut crossers = Vec::new();
    for i in 0..n as u32 {
        let item = &items[i as usize];
        if cell.contains_bbox(&item.bbox) {
            inside.push(i);
        } else if !item.meets(&proxy, &proxy_bbox) {
            outside.push(i);
        } else {
            crossers.push(i);
        }
    }
    if inside.len() == n || outside.len() == n {
        push_all_edges(g, out);
        return Ok(());
    }
    for part in [&inside, &outside] {
        if part.is_empty() {
            continue;
        }
        let (sub, labels) = g.induced(part);
        let sub_items: Vec<FatItem> = part.iter().map(|&i| items[i as usize].clone()).collect();
        let mut local = Vec::new();
        rec_fat3(&sub_items, &sub, d_star, &mut local, diag)?;
        push_remapped(&local, &labels, out);
    }
    let points = hitting_points(&cell.lo(), cell.side(), items, &crossers, d_star, diag);
    star_and_link_edges(items, g, &points, out);
    Ok(())
}

fn rec_fat_tk(
    items: &[FatItem],
    g: &IntersectionGraph,
    k: u32,
    d_star: usize,
    out: &mut Vec<(u32, u32)>,
    diag: &mut Diag,
) -> Result<()> {
    if k <= 1 {
        return rec_fat3(items, g, d_star, out, diag);
    }
    let n = items.len();
    if n <= RECURSION_CUTOFF {
        push_all_edges(g, out);
        return Ok(());
    }
    let dim = items[0].bbox.dim();
    let r = (alpha(k - 1, n as u64) as usize).max(2);
    let pts = distinct_points(items.iter().map(|it| it.leftmost.clone()).collect(), diag)?;
    let partition = quadtree_partition(&pts, r, dim)?;
    let cells: Vec<_> = partition.into_iter().map(|(c, _)| c).collect();

    // Exact classification: an item lives in the unique generalized cell
    // that contains its bounding box outside the cell's hole.
    let mut inside_of: Vec<Vec<u32>> = vec![Vec::new(); cells.len()];
    let mut boundary: Vec<u32> = Vec::new();
    let cell_rects: Vec<_> = cells
        .iter()
        .map(|c| {
            let outer = cell_rect(&c.outer);
            let inner = c.inner.as_ref().map(cell_rect);
            (outer, inner)
        })
        .collect();
    'items: for i in 0..n as u32 {
        let item = &items[i as usize];
        for (ci, cell) in cells.iter().enumerate() {
            if cell.outer.contains_bbox(&item.bbox) {
                let hole_free = match &cell_rects[ci].1 {
                    Some((proxy, bbox)) => !item.meets(proxy, bbox),
                    None => true,
                };
                if hole_free {
                    inside_of[ci].push(i);
                    continue 'items;
                }
            }
        }
        boundary.push(i);
    }
    if inside_of.iter().any(|v| v.len() == n) {
        push_all_edges(g, out);
        return Ok(());
    }
    for part in &inside_of {
        if part.is_empty() {
            continue;
        }
        let (sub, labels) = g.induced(part);
        let sub_items: Vec<FatItem> = part.iter().map(|&i| items[i as usize].clone()).collect();
        let mut local = Vec::new();
        rec_fat_tk(&sub_items, &sub, k, d_star, &mut local, diag)?;
        push_remapped(&local, &labels, out);
    }

    // Hitting sets per cell: separately for the outer and inner frame.
    let mut point_table: Vec<Point> = Vec::new();
    let mut point_ids: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
    let mut cell_points: Vec<Vec<u32>> = vec![Vec::new(); cells.len()];
    for (ci, cell) in cells.iter().enumerate() {
        let mut local_pts: Vec<Point> = Vec::new();
        let ((outer_proxy, outer_bbox), inner) = &cell_rects[ci];
        let outer_lo = cell.outer.lo();
        let outer_hi = cell.outer.hi();
        let r_plus: Vec<u32> = boundary
            .iter()
            .copied()
            .filter(|&b| {
                let it = &items[b as usize];
                it.meets(outer_proxy, outer_bbox) && !inside_open(&it.bbox, &outer_lo, &outer_hi)
            })
            .collect();
        local_pts.extend(hitting_points(
            &outer_lo,
            cell.outer.side(),
            items,
            &r_plus,
            d_star,
            diag,
        ));
        if let (Some(ic), Some((inner_proxy, inner_bbox))) = (&cell.inner, inner) {
            let inner_lo = ic.lo();
            let inner_hi = ic.hi();
            let r_minus: Vec<u32> = boundary
                .iter()
                .copied()
                .filter(|&b| {
                    let it = &items[b as usize];
                    it.meets(inner_proxy, inner_bbox)
                        && !inside_open(&it.bbox, &inner_lo, &inner_hi)
                })
                .collect();
            local_pts.extend(hitting_points(
                &inner_lo,
                ic.side(),
                items,
                &r_minus,
                d_star,
                diag,
            ));
        }
        for p in local_pts {
            let key: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
            let id = *point_ids.entry(key).or_insert_with(|| {
                point_table.push(p);
                point_table.len() as u32 - 1
            });
            if !cell_points[ci].contains(&id) {
                cell_points[ci].push(id);
            }
        }
    }

    // Per-point membership over all items at this node.
    let contains: Vec<Vec<bool>> = point_table
        .iter()
        .map(|p| (0..n).map(|i| items[i].contains_point(p)).collect())
        .collect();

    // Every boundary item must be reachable through some point; geometry
    // guarantees it, this guard keeps adversarial rounding honest.
    for &b in &boundary {
        if !contains.iter().any(|c| c[b as usize]) {
            let p = items[b as usize].leftmost.clone();
            let key: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
            let id = *point_ids.entry(key).or_insert_with(|| {
                point_table.push(p);
                point_table.len() as u32 - 1
            });
            if let Some(first) = (0..cells.len()).find(|&ci| {
                let ((proxy, bbox), _) = &cell_rects[ci];
                items[b as usize].meets(proxy, bbox)
            }) {
                cell_points[first].push(id);
            } else {
                cell_points[0].push(id);
            }
            diag.hitting_fallback_points += 1;
        }
    }
    let contains: Vec<Vec<bool>> = point_table
        .iter()
        .map(|p| (0..n).map(|i| items[i].contains_point(p)).collect())
        .collect();

    // Step 2: inside objects reach each of their cell's points in one hop.
    for (ci, part) in inside_of.iter().enumerate() {
        for &u in part {
            for &pid in &cell_points[ci] {
                if let Some(&w) = g
                    .neighbors(u)
                    .iter()
                    .find(|&&w| contains[pid as usize][w as usize])
                {
                    out.push((u, w));
                }
            }
        }
    }

    // Step 3: assign each hit object to its first point, build stars.
    let mut star_members: Vec<Vec<u32>> = vec![Vec::new(); point_table.len()];
    for i in 0..n as u32 {
        if let Some(pid) = (0..point_table.len()).find(|&pid| contains[pid][i as usize]) {
            star_members[pid].push(i);
        }
    }
    for members in &star_members {
        if members.len() > 1 {
            let center = members[0];
            for &w in &members[1..] {
                out.push((center, w));
            }
        }
    }

    // Step 4: contract stars to union items and recurse one level down.
    let live: Vec<usize> = (0..point_table.len())
        .filter(|&pid| !star_members[pid].is_empty())
        .collect();
    if live.is_empty() {
        return Ok(());
    }
    let union_items: Vec<FatItem> = live
        .iter()
        .map(|&pid| {
            let leaves: Vec<GeometricObject> = star_members[pid]
                .iter()
                .flat_map(|&i| items[i as usize].leaves.iter().cloned())
                .collect();
            FatItem::from_leaves(leaves)
        })
        .collect();
    let mut h_edges: Vec<(u32, u32)> = Vec::new();
    for a in 0..union_items.len() as u32 {
        for b in (a + 1)..union_items.len() as u32 {
            if union_items[a as usize].intersects(&union_items[b as usize]) {
                h_edges.push((a, b));
            }
        }
    }
    let h = IntersectionGraph::from_edges(union_items.len(), h_edges);
    let mut local = Vec::new();
    rec_fat_tk(&union_items, &h, k - 1, d_star, &mut local, diag)?;
    for (ha, hb) in local {
        let sa = &star_members[live[ha as usize]];
        let sb = &star_members[live[hb as usize]];
        let witness = sa
            .iter()
            .flat_map(|&w| sb.iter().map(move |&wp| (w, wp)))
            .find(|&(w, wp)| items[w as usize].intersects(&items[wp as usize]))
            .expect("spanner edges of the union graph join intersecting stars");
        out.push(witness);
    }
    Ok(())
}

fn items_for_shift(unit: &ObjectSet, tau: &[f64]) -> Vec<FatItem> {
    (0..unit.len())
        .map(|i| {
            let leaves: Vec<GeometricObject> = unit
                .leaves(i)
                .iter()
                .map(|&l| unit.get(l as usize).translated(tau))
                .collect();
            FatItem::from_leaves(leaves)
        })
        .collect()
}

fn rescaled(set: &ObjectSet) -> Result<ObjectSet> {
    for i in 0..set.len() {
        if !set.side_length(i).is_finite() {
            return Err(Error::Input(
                "unbounded objects are outside the fat regime".into(),
            ));
        }
    }
    let (unit, _) = set.rescale_unit(1.0 / 1024.0)?;
    Ok(unit)
}

/// Indices grouped by shift: group j holds the objects whose translate by
/// tau^(j) fits in a dyadic cell of side at most 2 d* times its own side.
/// Every intersecting pair shares at least one group.
pub fn shift_groups(set: &ObjectSet) -> Result<Vec<Vec<u32>>> {
    let unit = rescaled(set)?;
    let d_star = 2 * unit.dim() + 1;
    let c = (2 * d_star) as f64;
    let mut groups = Vec::with_capacity(d_star);
    for j in 0..d_star {
        let tau = shift_vector(j, d_star, unit.dim());
        let mut group = Vec::new();
        for i in 0..unit.len() {
            let b = unit.bbox(i);
            let shifted = Bbox {
                lo: b.lo.iter().zip(&tau).map(|(&x, &t)| x + t).collect(),
                hi: b.hi.iter().zip(&tau).map(|(&x, &t)| x + t).collect(),
            };
            if is_aligned_bbox(&shifted, unit.side_length(i), c).unwrap_or(false) {
                group.push(i as u32);
            }
        }
        groups.push(group);
    }
    Ok(groups)
}

/// A validated point set for one cell: every object crossing the cell frame
/// contains at least one listed point (threshold objects by construction,
/// the rest through per-object anchors counted in `fallback_points`).
#[derive(Clone, Debug)]
pub struct HittingSet {
    pub points: Vec<Point>,
    pub min_side: f64,
    pub fallback_points: usize,
}

pub fn boundary_hitting_set(
    cell: &QuadtreeCell,
    set: &ObjectSet,
    d_star: usize,
) -> Result<HittingSet> {
    let items: Vec<FatItem> = (0..set.len())
        .map(|i| {
            let leaves: Vec<GeometricObject> = set
                .leaves(i)
                .iter()
                .map(|&l| set.get(l as usize).clone())
                .collect();
            FatItem::from_leaves(leaves)
        })
        .collect();
    let (proxy, proxy_bbox) = cell_rect(cell);
    let crossers: Vec<u32> = (0..set.len() as u32)
        .filter(|&i| {
            let it = &items[i as usize];
            it.meets(&proxy, &proxy_bbox) && !cell.contains_bbox(&it.bbox)
        })
        .collect();
    let mut diag = Diag::default();
    let points = hitting_points(
        &cell.lo(),
        cell.side(),
        &items,
        &crossers,
        d_star,
        &mut diag,
    );
    Ok(HittingSet {
        points,
        min_side: cell.side() / (2.0 * d_star as f64),
        fallback_points: diag.hitting_fallback_points,
    })
}

fn fat_pipeline(set: &ObjectSet, k: u32) -> Result<Spanner> {
    let (t, tag) = if k <= 1 {
        (3, "fat-I")
    } else {
        (stretch_bound(Family::Fat, k), "fat-II")
    };
    let dim = set.dim();
    let d_star = 2 * dim + 1;
    let n = set.len();
    let mut parameters = BTreeMap::new();
    parameters.insert("d".into(), dim.into());
    parameters.insert("d_star".into(), d_star.into());
    parameters.insert("k".into(), k.max(1).into());
    parameters.insert("n".into(), n.into());
    if n <= 1 {
        return Ok(Spanner::from_parts(t, tag, parameters, Vec::new()));
    }

    let g = IntersectionGraph::from_objects(set);
    let unit = rescaled(set)?;
    let mut diag = Diag::default();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut group_masks: Vec<Vec<bool>> = Vec::new();
    let c = (2 * d_star) as f64;
    for j in 0..d_star {
        let tau = shift_vector(j, d_star, dim);
        let items = items_for_shift(&unit, &tau);
        let group: Vec<u32> = (0..n as u32)
            .filter(|&i| {
                let it = &items[i as usize];
                is_aligned_bbox(&it.bbox, it.side, c).unwrap_or(false)
            })
            .collect();
        let mut mask = vec![false; n];
        for &i in &group {
            mask[i as usize] = true;
        }
        group_masks.push(mask);
        if group.len() <= 1 {
            continue;
        }
        let (sub, labels) = g.induced(&group);
        let sub_items: Vec<FatItem> = group.iter().map(|&i| items[i as usize].clone()).collect();
        let mut local = Vec::new();
        if k <= 1 {
            rec_fat3(&sub_items, &sub, d_star, &mut local, &mut diag)?;
        } else {
            rec_fat_tk(&sub_items, &sub, k, d_star, &mut local, &mut diag)?;
        }
        push_remapped(&local, &labels, &mut edges);
    }

    // The shifting argument promises a shared group for every intersecting
    // pair; any pair the groups miss is kept at one hop and counted.
    for (u, v) in g.edges() {
        let covered = group_masks
            .iter()
            .any(|m| m[u as usize] && m[v as usize]);
        if !covered {
            edges.push((u, v));
            diag.co_occurrence_patches += 1;
        }
    }

    parameters.insert("m".into(), g.m().into());
    parameters.insert(
        "co_occurrence_patches".into(),
        diag.co_occurrence_patches.into(),
    );
    parameters.insert(
        "hitting_fallback_points".into(),
        diag.hitting_fallback_points.into(),
    );
    parameters.insert(
        "hitting_points_total".into(),
        diag.hitting_points_total.into(),
    );
    parameters.insert("jittered_leftmosts".into(), diag.jittered_leftmosts.into());
    parameters.insert("jitter_scale".into(), JITTER_SCALE.into());
    Ok(Spanner::from_parts(t, tag, parameters, edges))
}

/// 3-hop spanner for fat objects: per shift frame, centroid recursion with
/// boundary stars.
pub fn fat_spanner_3hop(set: &ObjectSet) -> Result<Spanner> {
    fat_pipeline(set, 1)
}

/// Level-k spanner for fat objects: per shift frame, quadtree partition with
/// per-cell hitting sets, then recursion on star unions one level down.
/// Stretch follows t_1 = 3, t_k = 3 t_{k-1} + 3. k <= 1 delegates to the
/// 3-hop construction.
pub fn fat_spanner_tk(set: &ObjectSet, k: u32) -> Result<Spanner> {
    fat_pipeline(set, k)
}
