//! Star peeling, star connection rules, and star quotient graphs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::IntersectionGraph;

#[derive(Clone, Debug)]
pub struct Star {
    pub center: u32,
    /// Sorted, includes the center.
    pub members: Vec<u32>,
}

/// Disjoint stars plus (optionally) an assignment of outside vertices.
#[derive(Clone, Debug)]
pub struct StarSystem {
    pub stars: Vec<Star>,
    /// vertex -> star id, for vertices attached by the one-star rule.
    pub assignment: BTreeMap<u32, u32>,
    membership: Vec<Option<u32>>,
}

impl StarSystem {
    pub fn from_stars(n: usize, stars: Vec<Star>) -> Result<StarSystem> {
        let mut membership = vec![None; n];
        for (id, star) in stars.iter().enumerate() {
            for &v in &star.members {
                if membership[v as usize].replace(id as u32).is_some() {
                    return Err(Error::Precondition(format!(
                        "vertex {v} belongs to two stars"
                    )));
                }
            }
        }
        Ok(StarSystem {
            stars,
            assignment: BTreeMap::new(),
            membership,
        })
    }

    pub fn star_of(&self, v: u32) -> Option<u32> {
        self.membership[v as usize]
    }

    pub fn is_member(&self, v: u32) -> bool {
        self.membership[v as usize].is_some()
    }

    /// Star id a vertex counts toward when extended stars are formed:
    /// its own star, or the star it was assigned to.
    pub fn extended_star_of(&self, v: u32) -> Option<u32> {
        self.star_of(v).or_else(|| self.assignment.get(&v).copied())
    }

    /// Edges from every star center to its other members.
    pub fn star_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for star in &self.stars {
            for &v in &star.members {
                if v != star.center {
                    out.push((star.center, v));
                }
            }
        }
        out
    }
}

/// Repeatedly remove a vertex of maximum current degree (ties to the lowest
/// index) while that degree exceeds `delta`, together with its remaining
/// neighbors; each removed group is one star centered at the picked vertex.
/// Returns the residual graph (same vertex numbering, max degree <= delta)
/// and the recorded stars.
pub fn peel_high_degree_stars(
    g: &IntersectionGraph,
    delta: usize,
) -> (IntersectionGraph, StarSystem) {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|u| g.degree(u as u32)).collect();
    let mut stars = Vec::new();

    loop {
        let mut best: Option<(usize, u32)> = None;
        for u in 0..n {
            if alive[u] && degree[u] > delta {
                let cand = (degree[u], u as u32);
                if best.map_or(true, |(bd, bu)| cand.0 > bd || (cand.0 == bd && cand.1 < bu)) {
                    best = Some(cand);
                }
            }
        }
        let Some((_, center)) = best else { break };
        let mut members = vec![center];
        for &w in g.neighbors(center) {
            if alive[w as usize] {
                members.push(w);
            }
        }
        members.sort_unstable();
        for &v in &members {
            alive[v as usize] = false;
        }
        for &v in &members {
            for &w in g.neighbors(v) {
                if alive[w as usize] {
                    degree[w as usize] -= 1;
                }
            }
        }
        stars.push(Star { center, members });
    }

    let residual = IntersectionGraph::from_edges(
        n,
        g.edges()
            .filter(|&(u, v)| alive[u as usize] && alive[v as usize]),
    );
    let system = StarSystem::from_stars(n, stars).expect("peeled stars are disjoint");
    (residual, system)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectMode {
    /// One edge from each vertex to every star it has a neighbor in.
    AllStars,
    /// One edge per non-member vertex to its lowest star neighbor overall;
    /// the assignment map records which star the vertex attached to.
    OneStar,
}

/// Connect vertices to stars. In both modes the chosen neighbor is the
/// lowest-indexed candidate; a vertex never connects to its own star.
pub fn connect_to_stars(
    g: &IntersectionGraph,
    stars: &mut StarSystem,
    mode: ConnectMode,
) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for u in 0..g.n() as u32 {
        let own = stars.star_of(u);
        match mode {
            ConnectMode::AllStars => {
                let mut per_star: BTreeMap<u32, u32> = BTreeMap::new();
                for &w in g.neighbors(u) {
                    if let Some(sid) = stars.star_of(w) {
                        if Some(sid) != own {
                            per_star.entry(sid).or_insert(w);
                        }
                    }
                }
                for (_, w) in per_star {
                    out.push((u, w));
                }
            }
            ConnectMode::OneStar => {
                if own.is_some() {
                    continue;
                }
                let w = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .find(|&w| stars.is_member(w));
                if let Some(w) = w {
                    out.push((u, w));
                    stars.assignment.insert(u, stars.star_of(w).unwrap());
                }
            }
        }
    }
    out
}

/// Quotient of `g` by extended stars (members plus assigned vertices).
/// Quotient vertices are star ids; an edge appears when some G-edge joins
/// two different extended stars, and the lexicographically smallest oriented
/// witness pair (w in the lower star, w' in the higher) is recorded per edge.
/// Edges with an endpoint outside every extended star are skipped; those
/// pairs are the recursion's responsibility.
pub fn quotient_union_graph(
    g: &IntersectionGraph,
    stars: &StarSystem,
) -> Result<(IntersectionGraph, BTreeMap<(u32, u32), (u32, u32)>)> {
    for (&v, &sid) in &stars.assignment {
        if let Some(own) = stars.star_of(v) {
            if own != sid {
                return Err(Error::Precondition(format!(
                    "vertex {v} sits in star {own} but is assigned to star {sid}"
                )));
            }
        }
    }
    let mut witnesses: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (Some(a), Some(b)) = (stars.extended_star_of(u), stars.extended_star_of(v)) else {
            continue;
        };
        if a == b {
            continue;
        }
        let (key, oriented) = if a < b { ((a, b), (u, v)) } else { ((b, a), (v, u)) };
        witnesses
            .entry(key)
            .and_modify(|cur| {
                if oriented < *cur {
                    *cur = oriented;
                }
            })
            .or_insert(oriented);
    }
    let quotient = IntersectionGraph::from_edges(stars.stars.len(), witnesses.keys().copied());
    Ok((quotient, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_star_swallows_a_k15() {
        let g = IntersectionGraph::from_edges(6, (1..6).map(|v| (0u32, v)));
        let (residual, stars) = peel_high_degree_stars(&g, 3);
        assert_eq!(stars.stars.len(), 1);
        assert_eq!(stars.stars[0].center, 0);
        assert_eq!(stars.stars[0].members, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(residual.m(), 0);
    }

    #[test]
    fn low_degree_path_is_untouched() {
        let g = IntersectionGraph::from_edges(3, vec![(0, 1), (1, 2)]);
        let (residual, stars) = peel_high_degree_stars(&g, 3);
        assert!(stars.stars.is_empty());
        assert_eq!(residual, g);
    }

    #[test]
    fn peel_to_partial_matching() {
        // wheel-ish graph: hub plus cycle
        let mut edges = vec![];
        for v in 1..8u32 {
            edges.push((0, v));
            edges.push((v, if v == 7 { 1 } else { v + 1 }));
        }
        let g = IntersectionGraph::from_edges(8, edges);
        let (residual, _) = peel_high_degree_stars(&g, 1);
        assert!((0..8).all(|u| residual.degree(u) <= 1));
    }

    #[test]
    fn star_count_stays_below_n_over_delta() {
        let mut edges = vec![];
        for u in 0..30u32 {
            for v in (u + 1)..30 {
                if (u + v) % 3 == 0 {
                    edges.push((u, v));
                }
            }
        }
        let g = IntersectionGraph::from_edges(30, edges);
        let delta = 4;
        let (_, stars) = peel_high_degree_stars(&g, delta);
        assert!(stars.stars.len() <= 30 / delta);
    }

    #[test]
    fn all_stars_mode_adds_one_edge_per_star() {
        // star {0,1,2} peeled (center 0 wins the degree tie); vertex 3 is
        // adjacent to members 1 and 2 but not to the center, so it stays out
        let g = IntersectionGraph::from_edges(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let (_, mut stars) = peel_high_degree_stars(&g, 1);
        assert_eq!(stars.stars.len(), 1);
        assert_eq!(stars.stars[0].members, vec![0, 1, 2]);
        let edges = connect_to_stars(&g, &mut stars, ConnectMode::AllStars);
        let to_three: Vec<_> = edges.iter().filter(|&&(u, _)| u == 3).collect();
        assert_eq!(to_three, vec![&(3, 1)]);
    }

    #[test]
    fn one_star_mode_adds_exactly_one_edge() {
        // three separate stars, vertex 9 adjacent to a member of each
        let stars = vec![
            Star { center: 0, members: vec![0, 1] },
            Star { center: 2, members: vec![2, 3] },
            Star { center: 4, members: vec![4, 5] },
        ];
        let mut sys = StarSystem::from_stars(10, stars).unwrap();
        let g = IntersectionGraph::from_edges(10, vec![(9, 1), (9, 3), (9, 5), (8, 7)]);
        let edges = connect_to_stars(&g, &mut sys, ConnectMode::OneStar);
        assert_eq!(edges, vec![(9, 1)]);
        assert_eq!(sys.assignment.get(&9), Some(&0));
        // vertex 8 has no star neighbors, so it contributes nothing
        assert!(!sys.assignment.contains_key(&8));
    }

    #[test]
    fn quotient_records_lowest_witness() {
        let stars = vec![
            Star { center: 0, members: vec![0, 1, 2] },
            Star { center: 3, members: vec![3, 4] },
            Star { center: 5, members: vec![5] },
        ];
        let sys = StarSystem::from_stars(6, stars).unwrap();
        let g = IntersectionGraph::from_edges(6, vec![(2, 4), (1, 3), (0, 1)]);
        let (q, wit) = quotient_union_graph(&g, &sys).unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(q.m(), 1);
        assert!(q.has_edge(0, 1));
        assert_eq!(wit.get(&(0, 1)), Some(&(1, 3)));
    }

    #[test]
    fn overlapping_stars_are_rejected() {
        let stars = vec![
            Star { center: 0, members: vec![0, 1] },
            Star { center: 1, members: vec![1, 2] },
        ];
        assert!(StarSystem::from_stars(3, stars).is_err());
    }
}
