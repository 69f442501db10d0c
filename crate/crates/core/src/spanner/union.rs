//! 2-hop spanners for planar families with small union complexity, built
//! from logarithmically many depth levels of box cells.
//!
//! Each level refines the instance's bounding box into axis-aligned cells
//! until every cell is crossed by few object boundaries; cells lying inside
//! more than k objects are discarded, which keeps every point of depth at
//! most k covered. A cell fully inside at least one object contributes a
//! star centered at its lowest containing object.
//!
//! Levels start at k = 8. A crossing budget below 2 cannot be met by box
//! cells against curved boundaries (any cell covering a boundary point of
//! low depth is itself crossed), and edges whose intersection is touched by
//! no third object are served by a final direct-edge pass instead, counted
//! in the diagnostics.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::geom::intersect::{leaf_contains_point, leaf_intersects};
use crate::geom::{GeometricObject, ObjectSet};
use crate::graph::{IntersectionGraph, Spanner};

const MAX_SPLIT_DEPTH: u32 = 64;

/// One cell of a cutting level: an axis box, the objects whose boundary
/// meets it, how many objects contain it entirely, and the lowest such
/// object if one exists.
#[derive(Clone, Debug)]
pub struct CutCell {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub crossing: Vec<u32>,
    pub containing: usize,
    pub witness: Option<u32>,
}

/// A depth level: cells covering every point of depth at most `k`, each
/// crossed by at most `n / r` object boundaries.
#[derive(Clone, Debug)]
pub struct ShallowCuttingLevel {
    pub i: u32,
    pub k: u64,
    pub r: f64,
    pub cells: Vec<CutCell>,
    pub dropped_deep: usize,
    pub max_crossing: usize,
    pub probe_witness_cells: usize,
}

fn supported_leaf(obj: &GeometricObject, dim: usize) -> bool {
    matches!(
        obj,
        GeometricObject::Disk { .. }
            | GeometricObject::BallD { .. }
            | GeometricObject::AxisRect { .. }
            | GeometricObject::BoxD { .. }
    ) && dim == 2
}

fn validate_family(set: &ObjectSet) -> Result<()> {
    for i in 0..set.len() {
        if set.leaves(i).len() != 1 || !supported_leaf(set.get(i), set.dim()) {
            return Err(Error::Input(
                "depth-level construction needs planar disks or boxes".into(),
            ));
        }
    }
    Ok(())
}

fn contains_box(obj: &GeometricObject, lo: &[f64; 2], hi: &[f64; 2]) -> bool {
    [[lo[0], lo[1]], [hi[0], lo[1]], [lo[0], hi[1]], [hi[0], hi[1]]]
        .iter()
        .all(|corner| leaf_contains_point(obj, corner))
}

fn box_probes(lo: &[f64; 2], hi: &[f64; 2]) -> [[f64; 2]; 9] {
    let mx = 0.5 * (lo[0] + hi[0]);
    let my = 0.5 * (lo[1] + hi[1]);
    [
        [lo[0], lo[1]],
        [hi[0], lo[1]],
        [lo[0], hi[1]],
        [hi[0], hi[1]],
        [mx, lo[1]],
        [mx, hi[1]],
        [lo[0], my],
        [hi[0], my],
        [mx, my],
    ]
}

struct Refiner<'a> {
    objects: Vec<&'a GeometricObject>,
    k: u64,
    bound: usize,
    dropped_deep: usize,
    max_crossing: usize,
    probe_witness_cells: usize,
}

impl<'a> Refiner<'a> {
    /// Split until every kept cell is crossed by at most `bound` boundaries.
    /// Only regions provably deeper than `k` everywhere are discarded, so
    /// coverage of all depth-at-most-k points is exact.
    fn refine(
        &mut self,
        lo: [f64; 2],
        hi: [f64; 2],
        cands: &[u32],
        containing: &[u32],
        depth: u32,
        visit: &mut impl FnMut(&CutCell, &[u32]),
    ) -> Result<()> {
        let (proxy, _) = rect_proxy(&lo, &hi);
        let mut crossing: Vec<u32> = Vec::new();
        let mut gained: Vec<u32> = Vec::new();
        for &c in cands {
            let obj = self.objects[c as usize];
            if !leaf_intersects(obj, &proxy) {
                continue;
            }
            if contains_box(obj, &lo, &hi) {
                gained.push(c);
            } else {
                crossing.push(c);
            }
        }
        let containing: Vec<u32> = merge_sorted(containing, &gained);
        if containing.len() as u64 > self.k {
            self.dropped_deep += 1;
            return Ok(());
        }
        if crossing.len() <= self.bound {
            self.max_crossing = self.max_crossing.max(crossing.len());
            let probes = box_probes(&lo, &hi);
            let min_probe = probes
                .iter()
                .map(|p| {
                    containing.len()
                        + crossing
                            .iter()
                            .filter(|&&c| leaf_contains_point(self.objects[c as usize], p))
                            .count()
                })
                .min()
                .unwrap_or(0);
            if min_probe as u64 <= self.k {
                self.probe_witness_cells += 1;
            }
            let cell = CutCell {
                lo: lo.to_vec(),
                hi: hi.to_vec(),
                crossing,
                containing: containing.len(),
                witness: containing.first().copied(),
            };
            visit(&cell, &containing);
            return Ok(());
        }
        if depth >= MAX_SPLIT_DEPTH {
            return Err(Error::RefinementFailed(format!(
                "cell [{:?},{:?}] still crossed by {} objects at split depth {}",
                lo,
                hi,
                crossing.len(),
                depth
            )));
        }
        let mx = 0.5 * (lo[0] + hi[0]);
        let my = 0.5 * (lo[1] + hi[1]);
        for (qlo, qhi) in [
            ([lo[0], lo[1]], [mx, my]),
            ([mx, lo[1]], [hi[0], my]),
            ([lo[0], my], [mx, hi[1]]),
            ([mx, my], [hi[0], hi[1]]),
        ] {
            self.refine(qlo, qhi, &crossing, &containing, depth + 1, visit)?;
        }
        Ok(())
    }
}

fn rect_proxy(lo: &[f64; 2], hi: &[f64; 2]) -> (GeometricObject, ()) {
    (
        GeometricObject::BoxD {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        },
        (),
    )
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn build_level(
    set: &ObjectSet,
    i: u32,
    k: u64,
    bound: usize,
    visit: &mut impl FnMut(&CutCell, &[u32]),
) -> Result<ShallowCuttingLevel> {
    let n = set.len();
    let mut level = ShallowCuttingLevel {
        i,
        k,
        r: if bound == 0 { f64::NAN } else { n as f64 / bound as f64 },
        cells: Vec::new(),
        dropped_deep: 0,
        max_crossing: 0,
        probe_witness_cells: 0,
    };
    if n == 0 {
        return Ok(level);
    }
    let mut refiner = Refiner {
        objects: (0..n).map(|j| set.get(j)).collect(),
        k,
        bound,
        dropped_deep: 0,
        max_crossing: 0,
        probe_witness_cells: 0,
    };
    let global = set
        .global_bbox()
        .expect("nonempty collections have a bounding box");
    let lo = [global.lo[0], global.lo[1]];
    let hi = [global.hi[0], global.hi[1]];
    let cands: Vec<u32> = (0..n as u32).collect();
    refiner.refine(lo, hi, &cands, &[], 0, visit)?;
    level.dropped_deep = refiner.dropped_deep;
    level.max_crossing = refiner.max_crossing;
    level.probe_witness_cells = refiner.probe_witness_cells;
    Ok(level)
}

/// Cells covering every point of depth at most `k`, each crossed by at most
/// `n / r` boundaries. Errors if the implied crossing budget is below 1
/// (unattainable with box cells) or if refinement hits the split-depth cap.
pub fn shallow_cutting(set: &ObjectSet, k: u64, r: usize) -> Result<ShallowCuttingLevel> {
    validate_family(set)?;
    let n = set.len();
    if n == 0 {
        return Ok(ShallowCuttingLevel {
            i: 0,
            k,
            r: r as f64,
            cells: Vec::new(),
            dropped_deep: 0,
            max_crossing: 0,
            probe_witness_cells: 0,
        });
    }
    if r == 0 {
        return Err(Error::Precondition("crossing parameter r must be >= 1".into()));
    }
    let bound = n / r;
    if bound == 0 {
        return Err(Error::Precondition(
            "crossing budget n/r below 1 cannot be met by box cells".into(),
        ));
    }
    let i = (k.max(1) as f64).log2().ceil() as u32;
    let mut cells = Vec::new();
    let mut level = build_level(set, i, k, bound, &mut |cell, _| cells.push(cell.clone()))?;
    level.r = r as f64;
    level.cells = cells;
    Ok(level)
}

/// 2-hop spanner: per level, a star per cell that some object contains,
/// centered at the lowest containing object and spanning every object that
/// meets the cell. Edges whose witnesses all have depth 2 get a direct edge.
pub fn two_hop_spanner_union(set: &ObjectSet) -> Result<Spanner> {
    validate_family(set)?;
    let n = set.len();
    let g = IntersectionGraph::from_objects(set);
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("n".into(), n.into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("k_min".into(), 8.into());
    if n <= 1 {
        parameters.insert("levels".into(), json!([]));
        parameters.insert("two_hop_patches".into(), 0.into());
        return Ok(Spanner::from_parts(2, "union-2hop", parameters, Vec::new()));
    }

    let top = ((n as f64).log2().ceil() as u32).max(3);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut level_diags = Vec::new();
    for i in 3..=top {
        let k = 1u64 << i;
        let bound = 1usize << (i - 2);
        let mut level_edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut spanning_cells = 0usize;
        let mut full_star = false;
        let level = build_level(set, i, k, bound, &mut |cell, containing| {
            let Some(s) = cell.witness else { return };
            spanning_cells += 1;
            if cell.crossing.len() + containing.len() == n {
                full_star = true;
            }
            for &w in containing.iter().chain(&cell.crossing) {
                if w != s {
                    level_edges.insert((s.min(w), s.max(w)));
                }
            }
        })?;
        level_diags.push(json!({
            "i": i,
            "k": k,
            "r": level.r,
            "bound": bound,
            "max_crossing": level.max_crossing,
            "dropped_deep": level.dropped_deep,
            "probe_witness_cells": level.probe_witness_cells,
            "star_cells": spanning_cells,
            "full_star": full_star,
            "edges": level_edges.len(),
        }));
        edges.extend(level_edges);
    }

    // Direct-edge pass: any intersecting pair whose overlap is touched by
    // no third object has no containing cell at any level; keep it at one hop.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut patches = 0usize;
    let mut out: Vec<(u32, u32)> = edges.iter().copied().collect();
    for (u, v) in g.edges() {
        let served = adj[u as usize].binary_search(&v).is_ok()
            || sorted_intersect(&adj[u as usize], &adj[v as usize]);
        if !served {
            out.push((u, v));
            patches += 1;
        }
    }
    parameters.insert("levels".into(), serde_json::Value::Array(level_diags));
    parameters.insert("two_hop_patches".into(), patches.into());
    Ok(Spanner::from_parts(2, "union-2hop", parameters, out))
}

fn sorted_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
