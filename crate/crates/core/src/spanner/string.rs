//! Hop spanners for general intersection graphs built from star peeling,
//! balanced separators, r-divisions, and star quotients. The stretch
//! guarantees hold for arbitrary graphs; the size bounds are what the
//! string-graph separator machinery buys on top.

use std::collections::BTreeMap;

use crate::graph::stars::{connect_to_stars, peel_high_degree_stars, ConnectMode};
use crate::graph::{quotient_union_graph, IntersectionGraph, Spanner};
use crate::schedule::{
    ceil_pow, ceil_sqrt, string_3hop_delta, string_tk_params, stretch_bound, tk_params_usable,
    Family,
};
use crate::separator::{balanced_separator, r_division};
use crate::spanner::{push_remapped, TkConfig, RECURSION_CUTOFF};

fn push_all_edges(g: &IntersectionGraph, out: &mut Vec<(u32, u32)>) {
    out.extend(g.edges());
}

fn rec3(g: &IntersectionGraph, out: &mut Vec<(u32, u32)>) {
    let n = g.n();
    if n <= RECURSION_CUTOFF {
        push_all_edges(g, out);
        return;
    }
    let delta = string_3hop_delta(n);
    let (residual, mut stars) = peel_high_degree_stars(g, delta);
    out.extend(stars.star_edges());
    out.extend(connect_to_stars(g, &mut stars, ConnectMode::AllStars));

    let live: Vec<u32> = (0..n as u32).filter(|&v| !stars.is_member(v)).collect();
    if live.is_empty() {
        return;
    }
    let (gp, labels) = residual.induced(&live);
    let sep = balanced_separator(&gp);
    let mut side_a = [sep.v1.clone(), sep.x.clone()].concat();
    let mut side_b = [sep.v2.clone(), sep.x.clone()].concat();
    side_a.sort_unstable();
    side_b.sort_unstable();
    if side_a.len() >= gp.n() || side_b.len() >= gp.n() {
        // The separator made no progress; emitting the residual edges keeps
        // these pairs at one hop and ends the recursion soundly.
        let mut local = Vec::new();
        push_all_edges(&gp, &mut local);
        push_remapped(&local, &labels, out);
        return;
    }
    for side in [side_a, side_b] {
        let (sub, sublabels) = gp.induced(&side);
        let mut local = Vec::new();
        rec3(&sub, &mut local);
        let composed: Vec<u32> = sublabels.iter().map(|&v| labels[v as usize]).collect();
        push_remapped(&local, &composed, out);
    }
}

/// 3-hop spanner via star peeling at degree n/log^2 n plus separator
/// recursion on the low-degree remainder.
pub fn string_spanner_3hop(g: &IntersectionGraph) -> Spanner {
    let mut edges = Vec::new();
    rec3(g, &mut edges);
    let mut parameters = BTreeMap::new();
    parameters.insert("n".into(), g.n().into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("delta_top".into(), string_3hop_delta(g.n()).into());
    Spanner::from_parts(3, "string-I", parameters, edges)
}

/// For every pair of peeled stars joined by a two-edge path in `g`, pick the
/// lexicographically least such path (a, m, b) and emit its two edges.
fn two_hop_star_links(
    g: &IntersectionGraph,
    stars: &crate::graph::stars::StarSystem,
    out: &mut Vec<(u32, u32)>,
) {
    let mut best: BTreeMap<(u32, u32), (u32, u32, u32)> = BTreeMap::new();
    for m in 0..g.n() as u32 {
        // Neighbors are sorted, so the first member seen per star is minimal.
        let mut per_star: BTreeMap<u32, u32> = BTreeMap::new();
        for &w in g.neighbors(m) {
            if let Some(sid) = stars.star_of(w) {
                per_star.entry(sid).or_insert(w);
            }
        }
        let seen: Vec<(u32, u32)> = per_star.into_iter().collect();
        for i in 0..seen.len() {
            for j in (i + 1)..seen.len() {
                let (s1, a) = seen[i];
                let (s2, b) = seen[j];
                let cand = (a, m, b);
                best.entry((s1, s2))
                    .and_modify(|cur| {
                        if cand < *cur {
                            *cur = cand;
                        }
                    })
                    .or_insert(cand);
            }
        }
    }
    for (a, m, b) in best.into_values() {
        out.push((a, m));
        out.push((m, b));
    }
}

fn rec7(g: &IntersectionGraph, out: &mut Vec<(u32, u32)>) {
    let n = g.n();
    if n <= RECURSION_CUTOFF {
        push_all_edges(g, out);
        return;
    }
    let delta = ceil_sqrt(n);
    let r = ceil_pow(n, 0.9).clamp(2, n - 1);
    let (residual, mut stars) = peel_high_degree_stars(g, delta);
    out.extend(stars.star_edges());
    out.extend(connect_to_stars(g, &mut stars, ConnectMode::OneStar));
    two_hop_star_links(g, &stars, out);

    let live: Vec<u32> = (0..n as u32).filter(|&v| !stars.is_member(v)).collect();
    if live.is_empty() {
        return;
    }
    let (gp, labels) = residual.induced(&live);
    let division = r_division(&gp, r, delta).expect("peeled graph satisfies the division bounds");
    for subset in &division.subsets {
        let (sub, sublabels) = gp.induced(subset);
        let mut local = Vec::new();
        rec7(&sub, &mut local);
        let composed: Vec<u32> = sublabels.iter().map(|&v| labels[v as usize]).collect();
        push_remapped(&local, &composed, out);
    }
}

/// 7-hop spanner: peeling at degree sqrt(n), one edge per vertex into a
/// star, one 2-edge link per star pair, and recursion on an r-division
/// with r = n^0.9.
pub fn string_spanner_7hop(g: &IntersectionGraph) -> Spanner {
    let mut edges = Vec::new();
    rec7(g, &mut edges);
    let mut parameters = BTreeMap::new();
    parameters.insert("n".into(), g.n().into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("delta_top".into(), ceil_sqrt(g.n()).into());
    parameters.insert("r_top".into(), ceil_pow(g.n(), 0.9).into());
    Spanner::from_parts(7, "string-II", parameters, edges)
}

fn rec_tk(g: &IntersectionGraph, k: u32, config: &TkConfig, out: &mut Vec<(u32, u32)>) {
    if k <= 1 {
        rec3(g, out);
        return;
    }
    let n = g.n();
    if n <= RECURSION_CUTOFF {
        push_all_edges(g, out);
        return;
    }
    let params = effective_params(n, k, config);
    if !tk_params_usable(params, n) {
        // The schedule only separates Delta from r at astronomical n; when it
        // degenerates the whole edge set is the sanctioned answer.
        push_all_edges(g, out);
        return;
    }
    let (delta, r) = (params.delta, params.r);
    let (residual, peeled) = peel_high_degree_stars(g, delta);
    let mut star_list = peeled.stars.clone();
    out.extend(peeled.star_edges());

    let live: Vec<u32> = (0..n as u32).filter(|&v| !peeled.is_member(v)).collect();
    let mut boundary_global: Vec<u32> = Vec::new();
    if !live.is_empty() {
        let (gp, labels) = residual.induced(&live);
        let division =
            r_division(&gp, r, delta).expect("peeled graph satisfies the division bounds");
        boundary_global = division
            .boundary
            .iter()
            .map(|&v| labels[v as usize])
            .collect();
        for subset in &division.subsets {
            let interior: Vec<u32> = subset
                .iter()
                .copied()
                .filter(|v| division.boundary.binary_search(v).is_err())
                .collect();
            if interior.is_empty() {
                continue;
            }
            let (sub, sublabels) = gp.induced(&interior);
            let mut local = Vec::new();
            rec_tk(&sub, k, config, &mut local);
            let composed: Vec<u32> = sublabels.iter().map(|&v| labels[v as usize]).collect();
            push_remapped(&local, &composed, out);
        }
    }
    for &b in &boundary_global {
        star_list.push(crate::graph::stars::Star {
            center: b,
            members: vec![b],
        });
    }
    let mut stars = crate::graph::stars::StarSystem::from_stars(n, star_list)
        .expect("peeled stars and division boundary vertices are disjoint");
    out.extend(connect_to_stars(g, &mut stars, ConnectMode::OneStar));

    let (quotient, witnesses) =
        quotient_union_graph(g, &stars).expect("one-star assignment is consistent");
    if quotient.n() == 0 {
        return;
    }
    let mut local = Vec::new();
    rec_tk(&quotient, k - 1, config, &mut local);
    for (a, b) in local {
        let key = if a < b { (a, b) } else { (b, a) };
        let &(w, wp) = witnesses
            .get(&key)
            .expect("quotient spanner edges are quotient edges");
        out.push((w, wp));
    }
}

fn effective_params(n: usize, k: u32, config: &TkConfig) -> crate::schedule::TkParams {
    let mut params = string_tk_params(k, n, config.c0);
    if let Some(d) = config.delta_override {
        params.delta = d;
    }
    if let Some(r) = config.r_override {
        params.r = r;
    }
    params
}

/// Level-k spanner: peel, divide, recurse at level k inside division cells,
/// then contract extended stars and recurse at level k-1 on the quotient.
/// Stretch follows t_1 = 3, t_k = 5 t_{k-1} + 3.
pub fn string_spanner_tk(g: &IntersectionGraph, k: u32) -> Spanner {
    string_spanner_tk_with(g, k, &TkConfig::default())
}

pub fn string_spanner_tk_with(g: &IntersectionGraph, k: u32, config: &TkConfig) -> Spanner {
    if k < 2 {
        return string_spanner_3hop(g);
    }
    let mut edges = Vec::new();
    rec_tk(g, k, config, &mut edges);
    let params = effective_params(g.n(), k, config);
    let mut parameters = BTreeMap::new();
    parameters.insert("n".into(), g.n().into());
    parameters.insert("m".into(), g.m().into());
    parameters.insert("k".into(), k.into());
    parameters.insert("c0".into(), config.c0.into());
    parameters.insert("delta_top".into(), params.delta.into());
    parameters.insert("r_top".into(), params.r.into());
    parameters.insert(
        "top_level_degenerate".into(),
        (!tk_params_usable(params, g.n())).into(),
    );
    Spanner::from_parts(
        stretch_bound(Family::String, k),
        "string-III",
        parameters,
        edges,
    )
}
