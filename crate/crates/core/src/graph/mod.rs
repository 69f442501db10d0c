//! Intersection graphs, spanner containers, and the truncated-BFS verifier
//! that every construction is checked against.

pub mod stars;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::object::ObjectSet;

pub use stars::{connect_to_stars, peel_high_degree_stars, quotient_union_graph, Star, StarSystem};

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl IntersectionGraph {
    /// Brute-force pairwise predicate evaluation. This is the reference
    /// edge relation; everything else in the crate must agree with it.
    pub fn from_objects(set: &ObjectSet) -> IntersectionGraph {
        let n = set.len();
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if set.intersects(i, j) {
                    adj[i].push(j as u32);
                    adj[j].push(i as u32);
                    m += 1;
                }
            }
        }
        IntersectionGraph { adj, m }
    }

    /// Build from an explicit edge list; self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> IntersectionGraph {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        IntersectionGraph { adj, m: m / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Canonical edges with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `verts` (sorted, deduped). Returns the graph with
    /// renumbered vertices plus the new-index -> old-index table.
    pub fn induced(&self, verts: &[u32]) -> (IntersectionGraph, Vec<u32>) {
        let mut labels: Vec<u32> = verts.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let mut back = BTreeMap::new();
        for (i, &v) in labels.iter().enumerate() {
            back.insert(v, i as u32);
        }
        let mut adj = vec![Vec::new(); labels.len()];
        let mut m = 0;
        for (i, &v) in labels.iter().enumerate() {
            for &w in &self.adj[v as usize] {
                if let Some(&j) = back.get(&w) {
                    adj[i].push(j);
                }
            }
            m += adj[i].len();
        }
        (IntersectionGraph { adj, m: m / 2 }, labels)
    }

    pub fn connected_components(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s as u32];
            seen[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

fn spanner_format_version() -> u32 {
    1
}

/// A spanner candidate: an edge subset with its declared hop stretch and
/// provenance parameters. Edges are stored canonically (u < v, sorted).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Spanner {
    #[serde(default = "spanner_format_version")]
    pub format_version: u32,
    pub t: u64,
    pub construction: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub edges: Vec<(u32, u32)>,
}

impl Spanner {
    pub fn from_parts(
        t: u64,
        construction: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Spanner {
        let mut canon: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        canon.sort_unstable();
        canon.dedup();
        Spanner {
            format_version: spanner_format_version(),
            t,
            construction: construction.to_string(),
            parameters,
            edges: canon,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spanner serializes")
    }

    pub fn from_json(text: &str) -> Result<Spanner> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VerifyMode {
    Exact,
    Sampled { fraction: f64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub t: u64,
    pub checked_edges: usize,
    /// Edge needing the most hops (an unreachable edge if any failed).
    pub worst_edge: Option<(u32, u32)>,
    /// Hops needed for the worst edge; t+1 stands for "no path within t".
    pub max_required_hops: u64,
    /// histogram[h] = number of checked edges needing exactly h hops,
    /// with one overflow bucket at index t+1.
    pub histogram: Vec<usize>,
    pub failed_edges: Vec<(u32, u32)>,
    pub mode: VerifyMode,
}

const MAX_FAILED_LISTED: usize = 16;

/// Check the hop-spanner property: every (checked) edge uv of `g` must admit
/// a path of at most `t` edges in the spanner. Distances come from a
/// breadth-first search in the spanner truncated at depth t, one search per
/// distinct edge source.
pub fn verify_hop_spanner(
    g: &IntersectionGraph,
    s: &Spanner,
    t_override: Option<u64>,
    mode: VerifyMode,
) -> Result<VerifyReport> {
    let t = t_override.unwrap_or(s.t);
    let n = g.n();
    for &(u, v) in &s.edges {
        if u as usize >= n || v as usize >= n || !g.has_edge(u, v) {
            return Err(Error::StructuralViolation(u, v));
        }
    }

    // group checked edges by their lower endpoint
    let mut targets: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut checked = 0usize;
    match mode {
        VerifyMode::Exact => {
            for (u, v) in g.edges() {
                targets[u as usize].push(v);
                checked += 1;
            }
        }
        VerifyMode::Sampled { fraction, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (u, v) in g.edges() {
                if rng.gen::<f64>() < fraction {
                    targets[u as usize].push(v);
                    checked += 1;
                }
            }
        }
    }

    let span = IntersectionGraph::from_edges(n, s.edges.iter().copied());
    let mut histogram = vec![0usize; t as usize + 2];
    let mut worst: Option<((u32, u32), u64)> = None;
    let mut failed = Vec::new();
    let mut dist: Vec<u32> = vec![u32::MAX; n];
    let mut queue: Vec<u32> = Vec::new();

    for u in 0..n as u32 {
        if targets[u as usize].is_empty() {
            continue;
        }
        // truncated BFS from u in the spanner
        queue.clear();
        queue.push(u);
        dist[u as usize] = 0;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let dx = dist[x as usize];
            if dx as u64 >= t {
                break;
            }
            for &y in span.neighbors(x) {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dx + 1;
                    queue.push(y);
                }
            }
        }
        for &v in &targets[u as usize] {
            let h = match dist[v as usize] {
                u32::MAX => t + 1,
                d => d as u64,
            };
            histogram[h.min(t + 1) as usize] += 1;
            if worst.map_or(true, |(_, wh)| h > wh) {
                worst = Some(((u, v), h));
            }
            if h > t && failed.len() < MAX_FAILED_LISTED {
                failed.push((u, v));
            }
        }
        for &x in &queue {
            dist[x as usize] = u32::MAX;
        }
    }

    let ok = histogram[t as usize + 1] == 0;
    Ok(VerifyReport {
        ok,
        t,
        checked_edges: checked,
        worst_edge: worst.map(|(e, _)| e),
        max_required_hops: worst.map_or(0, |(_, h)| h),
        histogram,
        failed_edges: failed,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::object::GeometricObject;

    fn disk(cx: f64, cy: f64, r: f64) -> GeometricObject {
        GeometricObject::Disk {
            center: [cx, cy],
            radius: r,
        }
    }

    fn spanner_of(t: u64, edges: &[(u32, u32)]) -> Spanner {
        Spanner::from_parts(t, "test", BTreeMap::new(), edges.iter().copied())
    }

    #[test]
    fn three_overlapping_disks_form_a_triangle() {
        let set = ObjectSet::new(
            2,
            vec![disk(0.0, 0.0, 1.0), disk(1.0, 0.0, 1.0), disk(0.5, 0.8, 1.0)],
        )
        .unwrap();
        let g = IntersectionGraph::from_objects(&set);
        assert_eq!(g.m(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn disjoint_boxes_give_empty_graph() {
        let objs = (0..5)
            .map(|i| GeometricObject::AxisRect {
                lo: [3.0 * i as f64, 0.0],
                hi: [3.0 * i as f64 + 1.0, 1.0],
            })
            .collect();
        let g = IntersectionGraph::from_objects(&ObjectSet::new(2, objs).unwrap());
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn triangle_with_two_edges_is_a_two_hop_spanner() {
        let g = IntersectionGraph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)]);
        let s = spanner_of(2, &[(0, 1), (1, 2)]);
        let rep = verify_hop_spanner(&g, &s, None, VerifyMode::Exact).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.max_required_hops, 2);
        assert_eq!(rep.checked_edges, 3);
    }

    #[test]
    fn missing_path_is_reported_with_the_worst_edge() {
        let g = IntersectionGraph::from_edges(3, vec![(0, 1), (1, 2)]);
        let s = spanner_of(5, &[(0, 1)]);
        let rep = verify_hop_spanner(&g, &s, None, VerifyMode::Exact).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.worst_edge, Some((1, 2)));
        assert_eq!(rep.failed_edges, vec![(1, 2)]);
        assert_eq!(rep.max_required_hops, 6);
    }

    #[test]
    fn whole_edge_set_is_a_one_hop_spanner() {
        let g = IntersectionGraph::from_edges(6, vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 5)]);
        let s = spanner_of(1, &g.edges().collect::<Vec<_>>());
        let rep = verify_hop_spanner(&g, &s, None, VerifyMode::Exact).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.max_required_hops, 1);
    }

    #[test]
    fn foreign_edge_is_a_structural_violation() {
        let g = IntersectionGraph::from_edges(3, vec![(0, 1)]);
        let s = spanner_of(1, &[(0, 2)]);
        let err = verify_hop_spanner(&g, &s, None, VerifyMode::Exact);
        assert!(matches!(err, Err(Error::StructuralViolation(0, 2))));
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = IntersectionGraph::from_edges(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let (h, labels) = g.induced(&[0, 1, 4]);
        assert_eq!(labels, vec![0, 1, 4]);
        assert_eq!(h.m(), 2);
        assert!(h.has_edge(0, 1));
        assert!(h.has_edge(0, 2));
    }

    #[test]
    fn spanner_json_round_trips_and_normalizes() {
        let s = Spanner::from_parts(3, "demo", BTreeMap::new(), vec![(2, 1), (1, 2), (0, 0), (0, 3)]);
        assert_eq!(s.edges, vec![(0, 3), (1, 2)]);
        let back = Spanner::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
