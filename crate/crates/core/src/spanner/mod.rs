//! Spanner constructions, one submodule per object regime.

pub mod fat;
pub mod rect;
pub mod string;
pub mod union;

/// Below this many vertices every construction emits the whole edge set.
pub const RECURSION_CUTOFF: usize = 8;

/// Knobs for the level-k string construction. `c0` scales the degree bound
/// of the k>2 schedule; the overrides force Delta and r regardless of n,
/// which is the only way to exercise the division machinery at small scales
/// where the default parameter formulas degenerate.
#[derive(Clone, Copy, Debug)]
pub struct TkConfig {
    pub c0: usize,
    pub delta_override: Option<usize>,
    pub r_override: Option<usize>,
}

impl Default for TkConfig {
    fn default() -> Self {
        TkConfig {
            c0: 4,
            delta_override: None,
            r_override: None,
        }
    }
}

pub(crate) fn push_remapped(edges: &[(u32, u32)], labels: &[u32], out: &mut Vec<(u32, u32)>) {
    out.extend(
        edges
            .iter()
            .map(|&(u, v)| (labels[u as usize], labels[v as usize])),
    );
}
