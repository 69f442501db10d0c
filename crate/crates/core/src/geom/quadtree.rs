//! Dyadic cell arithmetic, alignment tests, centroid descent, and the
//! generalized-cell partition used by the fat-object constructions.
//!
//! Cells live in the hierarchy rooted at [0,2)^d. A cell at level L has side
//! 2^-L and its extent on axis j is [index[j]*2^-L, (index[j]+1)*2^-L), so the
//! root is level -1 with all-zero index and [0,1)^d is a level-0 cell. All
//! membership tests go through `grid_floor`, which multiplies by a power of
//! two (exact in binary floating point) and floors, so boundary cases follow
//! half-open semantics with no tolerance.

use crate::error::{Error, Result};
use crate::geom::object::GeometricObject;
use crate::geom::{Bbox, Point};

/// Deepest level the descent routines visit before declaring coincident input.
pub const MAX_LEVEL: i32 = 50;

pub fn grid_floor(x: f64, level: i32) -> i64 {
    (x * 2f64.powi(level)).floor() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadtreeCell {
    pub level: i32,
    pub index: Vec<i64>,
}

impl QuadtreeCell {
    /// The cell [0,2)^d.
    pub fn root(dim: usize) -> QuadtreeCell {
        QuadtreeCell {
            level: -1,
            index: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn side(&self) -> f64 {
        2f64.powi(-self.level)
    }

    pub fn lo(&self) -> Vec<f64> {
        let s = self.side();
        self.index.iter().map(|&i| i as f64 * s).collect()
    }

    pub fn hi(&self) -> Vec<f64> {
        let s = self.side();
        self.index.iter().map(|&i| (i + 1) as f64 * s).collect()
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(&self.index)
            .all(|(&x, &i)| grid_floor(x, self.level) == i)
    }

    /// Half-open containment of a closed bounding box.
    pub fn contains_bbox(&self, b: &Bbox) -> bool {
        self.contains_point(&b.lo) && self.contains_point(&b.hi)
    }

    pub fn ancestor_at(&self, level: i32) -> QuadtreeCell {
        assert!(level <= self.level);
        let shift = (self.level - level) as u32;
        QuadtreeCell {
            level,
            index: self.index.iter().map(|&i| i >> shift).collect(),
        }
    }

    pub fn contains_cell(&self, other: &QuadtreeCell) -> bool {
        self.level <= other.level && other.ancestor_at(self.level).index == self.index
    }

    /// Child cell numbered by `code`, axis 0 in the highest bit.
    pub fn child(&self, code: usize) -> QuadtreeCell {
        let d = self.dim();
        let index = self
            .index
            .iter()
            .enumerate()
            .map(|(j, &i)| 2 * i + ((code >> (d - 1 - j)) & 1) as i64)
            .collect();
        QuadtreeCell {
            level: self.level + 1,
            index,
        }
    }

    /// Which child of this cell contains `p`; the point must lie in the cell.
    fn child_code(&self, p: &[f64]) -> usize {
        let d = self.dim();
        let mut code = 0usize;
        for j in 0..d {
            let bit = grid_floor(p[j], self.level + 1) - 2 * self.index[j];
            debug_assert!(bit == 0 || bit == 1);
            code |= (bit as usize & 1) << (d - 1 - j);
        }
        code
    }
}

/// Deepest common ancestor of two cells under the same root.
pub fn lca(a: &QuadtreeCell, b: &QuadtreeCell) -> QuadtreeCell {
    let mut level = a.level.min(b.level);
    loop {
        let ra = a.ancestor_at(level);
        let rb = b.ancestor_at(level);
        if ra.index == rb.index {
            return ra;
        }
        level -= 1;
    }
}

/// Deepest cell of side <= 2 that contains the box with half-open semantics.
/// None when the box is not inside [0,2)^d (or is unbounded).
pub fn smallest_containing_cell(b: &Bbox) -> Option<QuadtreeCell> {
    let root = QuadtreeCell::root(b.dim());
    if !root.contains_bbox(b) {
        return None;
    }
    let mut cell = root;
    while cell.level < MAX_LEVEL {
        let next = cell.level + 1;
        let agree = (0..b.dim()).all(|j| grid_floor(b.lo[j], next) == grid_floor(b.hi[j], next));
        if !agree {
            break;
        }
        cell = QuadtreeCell {
            level: next,
            index: (0..b.dim()).map(|j| grid_floor(b.lo[j], next)).collect(),
        };
    }
    Some(cell)
}

/// True iff some dyadic cell of side <= c * side_len contains the box.
pub fn is_aligned_bbox(b: &Bbox, side_len: f64, c: f64) -> Result<bool> {
    let cell = smallest_containing_cell(b).ok_or_else(|| {
        Error::Precondition("alignment test needs the object inside [0,2)^d".into())
    })?;
    Ok(cell.side() <= c * side_len)
}

/// Alignment test for a single non-union object.
pub fn is_aligned(u: &GeometricObject, c: f64) -> Result<bool> {
    if u.is_union() {
        return Err(Error::Input(
            "alignment of a union object needs its owning set".into(),
        ));
    }
    let b = u.leaf_bbox();
    let side = b.max_extent();
    is_aligned_bbox(&b, side, c)
}

/// Translate by tau^(j) = (j/d_star, ..., j/d_star).
pub fn shift_vector(j: usize, d_star: usize, dim: usize) -> Vec<f64> {
    vec![j as f64 / d_star as f64; dim]
}

pub fn shift_object(u: &GeometricObject, j: usize, d_star: usize) -> Result<GeometricObject> {
    if d_star == 0 || j >= d_star {
        return Err(Error::Input(format!(
            "shift index {j} out of range for d_star {d_star}"
        )));
    }
    let dim = u.dimension_hint().unwrap_or(0).max(2);
    Ok(u.translated(&shift_vector(j, d_star, dim)))
}

fn centroid_threshold(n: usize, dim: usize) -> usize {
    // ceil(n * 2^d / (2^d + 1))
    let pow = 1usize << dim;
    (n * pow).div_ceil(pow + 1)
}

fn child_counts(points: &[Point], idxs: &[u32], cell: &QuadtreeCell) -> Vec<Vec<u32>> {
    let mut buckets = vec![Vec::new(); 1 << cell.dim()];
    for &i in idxs {
        buckets[cell.child_code(&points[i as usize])].push(i);
    }
    buckets
}

/// Descend from `root` toward the heaviest child (ties to the smallest child
/// index) until the inside count drops to the centroid threshold.
pub fn quadtree_centroid_in(
    points: &[Point],
    idxs: &[u32],
    root: &QuadtreeCell,
) -> Result<QuadtreeCell> {
    if idxs.is_empty() {
        return Err(Error::Precondition("centroid of an empty point set".into()));
    }
    for &i in idxs {
        if !root.contains_point(&points[i as usize]) {
            return Err(Error::Precondition(
                "centroid point outside the root cell".into(),
            ));
        }
    }
    // Clamp to n-1 so the descent always makes progress even when the
    // balance bound itself is >= n (possible for n <= 2^d).
    let threshold = centroid_threshold(idxs.len(), root.dim()).min((idxs.len() - 1).max(1));
    let mut cell = root.clone();
    let mut inside: Vec<u32> = idxs.to_vec();
    while inside.len() > threshold {
        if cell.level >= MAX_LEVEL {
            return Err(Error::DuplicatePoints);
        }
        let buckets = child_counts(points, &inside, &cell);
        let best = (0..buckets.len())
            .max_by_key(|&c| (buckets[c].len(), usize::MAX - c))
            .unwrap();
        inside = buckets[best].clone();
        cell = cell.child(best);
    }
    Ok(cell)
}

/// Standalone centroid over all points, descending from [0,1)^d.
pub fn quadtree_centroid(points: &[Point], dim: usize) -> Result<QuadtreeCell> {
    let root = QuadtreeCell {
        level: 0,
        index: vec![0; dim],
    };
    let idxs: Vec<u32> = (0..points.len() as u32).collect();
    quadtree_centroid_in(points, &idxs, &root)
}

/// An outer dyadic cell minus at most one nested dyadic hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedCell {
    pub outer: QuadtreeCell,
    pub inner: Option<QuadtreeCell>,
}

impl GeneralizedCell {
    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.outer.contains_point(p)
            && self.inner.as_ref().map_or(true, |h| !h.contains_point(p))
    }
}

/// Always makes progress: the returned cell is a strict descendant of `cell`
/// holding the plurality of points, found below the deepest cell that still
/// holds all of them.
fn forced_split(points: &[Point], idxs: &[u32], cell: &QuadtreeCell) -> Result<QuadtreeCell> {
    let mut cur = cell.clone();
    let mut inside = idxs.to_vec();
    loop {
        if cur.level >= MAX_LEVEL {
            return Err(Error::DuplicatePoints);
        }
        let buckets = child_counts(points, &inside, &cur);
        let best = (0..buckets.len())
            .max_by_key(|&c| (buckets[c].len(), usize::MAX - c))
            .unwrap();
        let all_in_one = buckets[best].len() == inside.len();
        inside = buckets[best].clone();
        cur = cur.child(best);
        if !all_in_one {
            return Ok(cur);
        }
    }
}

/// Partition [0,2)^d into generalized cells holding at most `r` points each.
/// Returns the cells with the indices of the points they contain; cells that
/// cover a region with no points are kept.
pub fn quadtree_partition(
    points: &[Point],
    r: usize,
    dim: usize,
) -> Result<Vec<(GeneralizedCell, Vec<u32>)>> {
    if r == 0 {
        return Err(Error::Precondition("partition needs r >= 1".into()));
    }
    let root = QuadtreeCell::root(dim);
    for p in points {
        if !root.contains_point(p) {
            return Err(Error::Precondition(
                "partition point outside [0,2)^d".into(),
            ));
        }
    }
    let idxs: Vec<u32> = (0..points.len() as u32).collect();
    let mut out = Vec::new();
    let start = GeneralizedCell {
        outer: root,
        inner: None,
    };
    split_piece(points, start, idxs, r, &mut out)?;
    out.sort_by(|a, b| {
        let ka = (&a.0.outer.level, &a.0.outer.index, &a.0.inner);
        let kb = (&b.0.outer.level, &b.0.outer.index, &b.0.inner);
        ka.partial_cmp(&kb).unwrap()
    });
    Ok(out)
}

fn split_piece(
    points: &[Point],
    piece: GeneralizedCell,
    idxs: Vec<u32>,
    r: usize,
    out: &mut Vec<(GeneralizedCell, Vec<u32>)>,
) -> Result<()> {
    if idxs.len() <= r {
        out.push((piece, idxs));
        return Ok(());
    }
    let mut gamma = quadtree_centroid_in(points, &idxs, &piece.outer)?;
    if gamma == piece.outer {
        gamma = forced_split(points, &idxs, &piece.outer)?;
    }

    let mut parts: Vec<GeneralizedCell> = Vec::new();
    match &piece.inner {
        None => {
            parts.push(GeneralizedCell {
                outer: gamma.clone(),
                inner: None,
            });
            parts.push(GeneralizedCell {
                outer: piece.outer.clone(),
                inner: Some(gamma),
            });
        }
        Some(hole) if gamma.contains_cell(hole) => {
            parts.push(GeneralizedCell {
                outer: gamma.clone(),
                inner: Some(hole.clone()),
            });
            parts.push(GeneralizedCell {
                outer: piece.outer.clone(),
                inner: Some(gamma),
            });
        }
        Some(hole) => {
            // Hole and centroid cell are disjoint. Cut at their deepest
            // common ancestor so each part keeps at most one hole.
            let anc = lca(&gamma, hole);
            debug_assert!(piece.outer.contains_cell(&anc));
            if anc != piece.outer {
                parts.push(GeneralizedCell {
                    outer: piece.outer.clone(),
                    inner: Some(anc.clone()),
                });
            }
            parts.push(GeneralizedCell {
                outer: gamma.clone(),
                inner: None,
            });
            let ca = gamma.ancestor_at(anc.level + 1);
            let cb = hole.ancestor_at(anc.level + 1);
            debug_assert_ne!(ca, cb);
            if ca != gamma {
                parts.push(GeneralizedCell {
                    outer: ca.clone(),
                    inner: Some(gamma),
                });
            }
            if cb != *hole {
                parts.push(GeneralizedCell {
                    outer: cb.clone(),
                    inner: Some(hole.clone()),
                });
            }
            for code in 0..(1usize << anc.dim()) {
                let c = anc.child(code);
                if c != ca && c != cb {
                    parts.push(GeneralizedCell {
                        outer: c,
                        inner: None,
                    });
                }
            }
        }
    }

    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); parts.len()];
    for &i in &idxs {
        let p = &points[i as usize];
        let k = parts.iter().position(|gc| gc.contains_point(p));
        match k {
            Some(k) => buckets[k].push(i),
            None => {
                return Err(Error::Precondition(
                    "partition pieces failed to cover a point".into(),
                ))
            }
        }
    }
    for (part, bucket) in parts.into_iter().zip(buckets) {
        debug_assert!(bucket.len() < idxs.len(), "partition made no progress");
        split_piece(points, part, bucket, r, out)?;
    }
    Ok(())
}
