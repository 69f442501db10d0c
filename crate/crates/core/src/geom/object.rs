//! Object kinds, the validated object collection, and per-object measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{intersect, Bbox, Point};

/// One geometric object. Vertex indices of an intersection graph refer to
/// positions in an [`ObjectSet`], and `union_object` members are such indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometricObject {
    Disk { center: [f64; 2], radius: f64 },
    BallD { center: Vec<f64>, radius: f64 },
    BoxD { lo: Vec<f64>, hi: Vec<f64> },
    AxisRect { lo: [f64; 2], hi: [f64; 2] },
    HSegment { y: f64, x0: f64, x1: f64 },
    VSegment { x: f64, y0: f64, y1: f64 },
    VLine { x: f64 },
    Polyline { vertices: Vec<[f64; 2]> },
    UnionObject { members: Vec<usize> },
}

impl GeometricObject {
    /// Ambient dimension, if the object alone determines it.
    pub fn dimension_hint(&self) -> Option<usize> {
        match self {
            GeometricObject::BallD { center, .. } => Some(center.len()),
            GeometricObject::BoxD { lo, .. } => Some(lo.len()),
            GeometricObject::UnionObject { .. } => None,
            _ => Some(2),
        }
    }

    pub fn is_union(&self) -> bool {
        matches!(self, GeometricObject::UnionObject { .. })
    }

    /// Bounding box of a non-union object. Vertical lines get infinite y extent.
    pub fn leaf_bbox(&self) -> Bbox {
        match self {
            GeometricObject::Disk { center, radius } => Bbox {
                lo: vec![center[0] - radius, center[1] - radius],
                hi: vec![center[0] + radius, center[1] + radius],
            },
            GeometricObject::BallD { center, radius } => Bbox {
                lo: center.iter().map(|c| c - radius).collect(),
                hi: center.iter().map(|c| c + radius).collect(),
            },
            GeometricObject::BoxD { lo, hi } => Bbox {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            GeometricObject::AxisRect { lo, hi } => Bbox {
                lo: lo.to_vec(),
                hi: hi.to_vec(),
            },
            GeometricObject::HSegment { y, x0, x1 } => Bbox {
                lo: vec![*x0, *y],
                hi: vec![*x1, *y],
            },
            GeometricObject::VSegment { x, y0, y1 } => Bbox {
                lo: vec![*x, *y0],
                hi: vec![*x, *y1],
            },
            GeometricObject::VLine { x } => Bbox {
                lo: vec![*x, f64::NEG_INFINITY],
                hi: vec![*x, f64::INFINITY],
            },
            GeometricObject::Polyline { vertices } => {
                let mut lo = vertices[0].to_vec();
                let mut hi = vertices[0].to_vec();
                for v in vertices.iter().skip(1) {
                    for j in 0..2 {
                        lo[j] = lo[j].min(v[j]);
                        hi[j] = hi[j].max(v[j]);
                    }
                }
                Bbox { lo, hi }
            }
            GeometricObject::UnionObject { .. } => unreachable!("unions have no leaf bbox"),
        }
    }

    /// Lexicographically smallest point of a non-union object, if bounded below.
    pub fn leaf_leftmost(&self) -> Option<Point> {
        match self {
            GeometricObject::Disk { center, radius } => {
                Some(vec![center[0] - radius, center[1]])
            }
            GeometricObject::BallD { center, radius } => {
                let mut p = center.clone();
                p[0] -= radius;
                Some(p)
            }
            GeometricObject::BoxD { lo, .. } => Some(lo.clone()),
            GeometricObject::AxisRect { lo, .. } => Some(lo.to_vec()),
            GeometricObject::HSegment { y, x0, .. } => Some(vec![*x0, *y]),
            GeometricObject::VSegment { x, y0, .. } => Some(vec![*x, *y0]),
            GeometricObject::VLine { .. } => None,
            GeometricObject::Polyline { vertices } => {
                let best = vertices
                    .iter()
                    .min_by(|a, b| lex_cmp(&a[..], &b[..]))
                    .unwrap();
                Some(best.to_vec())
            }
            GeometricObject::UnionObject { .. } => unreachable!(),
        }
    }

    /// Closed containment test for a non-union object.
    pub fn leaf_contains_point(&self, p: &[f64]) -> bool {
        intersect::leaf_contains_point(self, p)
    }

    pub fn translated(&self, delta: &[f64]) -> GeometricObject {
        let mut out = self.clone();
        match &mut out {
            GeometricObject::Disk { center, .. } => {
                center[0] += delta[0];
                center[1] += delta[1];
            }
            GeometricObject::BallD { center, .. } => {
                for (c, d) in center.iter_mut().zip(delta) {
                    *c += d;
                }
            }
            GeometricObject::BoxD { lo, hi } => {
                for (c, d) in lo.iter_mut().zip(delta) {
                    *c += d;
                }
                for (c, d) in hi.iter_mut().zip(delta) {
                    *c += d;
                }
            }
            GeometricObject::AxisRect { lo, hi } => {
                for j in 0..2 {
                    lo[j] += delta[j];
                    hi[j] += delta[j];
                }
            }
            GeometricObject::HSegment { y, x0, x1 } => {
                *x0 += delta[0];
                *x1 += delta[0];
                *y += delta[1];
            }
            GeometricObject::VSegment { x, y0, y1 } => {
                *x += delta[0];
                *y0 += delta[1];
                *y1 += delta[1];
            }
            GeometricObject::VLine { x } => *x += delta[0],
            GeometricObject::Polyline { vertices } => {
                for v in vertices.iter_mut() {
                    v[0] += delta[0];
                    v[1] += delta[1];
                }
            }
            GeometricObject::UnionObject { .. } => {}
        }
        out
    }

    fn validate_leaf(&self, index: usize, dim: usize) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidObject {
                index,
                reason: reason.to_string(),
            })
        };
        if let Some(d) = self.dimension_hint() {
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: d,
                });
            }
        }
        match self {
            GeometricObject::Disk { center, radius } => {
                if !center.iter().all(|c| c.is_finite()) || !radius.is_finite() {
                    return fail("non-finite coordinate");
                }
                if *radius <= 0.0 {
                    return fail("radius must be positive");
                }
            }
            GeometricObject::BallD { center, radius } => {
                if center.is_empty() {
                    return fail("ball needs at least one coordinate");
                }
                if !center.iter().all(|c| c.is_finite()) || !radius.is_finite() {
                    return fail("non-finite coordinate");
                }
                if *radius <= 0.0 {
                    return fail("radius must be positive");
                }
            }
            GeometricObject::BoxD { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return fail("box lo/hi lengths differ");
                }
                if !lo.iter().chain(hi).all(|c| c.is_finite()) {
                    return fail("non-finite coordinate");
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return fail("box needs lo <= hi per axis");
                }
            }
            GeometricObject::AxisRect { lo, hi } => {
                if !lo.iter().chain(hi).all(|c| c.is_finite()) {
                    return fail("non-finite coordinate");
                }
                if lo[0] > hi[0] || lo[1] > hi[1] {
                    return fail("rectangle needs lo <= hi per axis");
                }
            }
            GeometricObject::HSegment { y, x0, x1 } => {
                if ![*y, *x0, *x1].iter().all(|c| c.is_finite()) {
                    return fail("non-finite coordinate");
                }
                if x0 > x1 {
                    return fail("segment needs x0 <= x1");
                }
            }
            GeometricObject::VSegment { x, y0, y1 } => {
                if ![*x, *y0, *y1].iter().all(|c| c.is_finite()) {
                    return fail("non-finite coordinate");
                }
                if y0 > y1 {
                    return fail("segment needs y0 <= y1");
                }
            }
            GeometricObject::VLine { x } => {
                if !x.is_finite() {
                    return fail("non-finite coordinate");
                }
            }
            GeometricObject::Polyline { vertices } => {
                if vertices.is_empty() {
                    return fail("polyline needs at least one vertex");
                }
                if !vertices.iter().flatten().all(|c| c.is_finite()) {
                    return fail("non-finite coordinate");
                }
            }
            GeometricObject::UnionObject { .. } => unreachable!(),
        }
        Ok(())
    }
}

pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) => continue,
            Some(ord) => return ord,
            None => return std::cmp::Ordering::Equal,
        }
    }
    std::cmp::Ordering::Equal
}

/// A validated collection of objects in a common ambient dimension.
///
/// Union members are flattened once at construction so that intersection,
/// containment, and bounding boxes can always work on non-union leaves.
#[derive(Clone, Debug)]
pub struct ObjectSet {
    dim: usize,
    objects: Vec<GeometricObject>,
    leaves: Vec<Vec<u32>>,
    bboxes: Vec<Bbox>,
}

impl ObjectSet {
    pub fn new(dim: usize, objects: Vec<GeometricObject>) -> Result<ObjectSet> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        for (i, obj) in objects.iter().enumerate() {
            match obj {
                GeometricObject::UnionObject { members } => {
                    if members.is_empty() {
                        return Err(Error::InvalidObject {
                            index: i,
                            reason: "union needs at least one member".into(),
                        });
                    }
                    if members.iter().any(|&m| m >= objects.len()) {
                        return Err(Error::InvalidObject {
                            index: i,
                            reason: "union member index out of range".into(),
                        });
                    }
                }
                other => other.validate_leaf(i, dim)?,
            }
        }

        let mut leaves: Vec<Vec<u32>> = vec![Vec::new(); objects.len()];
        for i in 0..objects.len() {
            let mut acc = Vec::new();
            let mut stack = vec![i];
            let mut seen = vec![false; objects.len()];
            while let Some(k) = stack.pop() {
                if seen[k] {
                    if k == i {
                        return Err(Error::InvalidObject {
                            index: i,
                            reason: "union membership cycle".into(),
                        });
                    }
                    continue;
                }
                seen[k] = true;
                match &objects[k] {
                    GeometricObject::UnionObject { members } => {
                        for &m in members {
                            if m == i {
                                return Err(Error::InvalidObject {
                                    index: i,
                                    reason: "union membership cycle".into(),
                                });
                            }
                            stack.push(m);
                        }
                    }
                    _ => acc.push(k as u32),
                }
            }
            acc.sort_unstable();
            acc.dedup();
            if acc.is_empty() {
                return Err(Error::InvalidObject {
                    index: i,
                    reason: "union flattens to no leaves".into(),
                });
            }
            leaves[i] = acc;
        }

        let mut bboxes = Vec::with_capacity(objects.len());
        for i in 0..objects.len() {
            let mut it = leaves[i].iter();
            let mut bb = objects[*it.next().unwrap() as usize].leaf_bbox();
            for &l in it {
                bb.merge(&objects[l as usize].leaf_bbox());
            }
            bboxes.push(bb);
        }

        Ok(ObjectSet {
            dim,
            objects,
            leaves,
            bboxes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[GeometricObject] {
        &self.objects
    }

    pub fn get(&self, i: usize) -> &GeometricObject {
        &self.objects[i]
    }

    pub fn leaves(&self, i: usize) -> &[u32] {
        &self.leaves[i]
    }

    pub fn bbox(&self, i: usize) -> &Bbox {
        &self.bboxes[i]
    }

    /// Closed-set intersection test between objects `i` and `j`.
    pub fn intersects(&self, i: usize, j: usize) -> bool {
        if !self.bboxes[i].overlaps(&self.bboxes[j]) {
            return false;
        }
        for &a in &self.leaves[i] {
            for &b in &self.leaves[j] {
                if intersect::leaf_intersects(&self.objects[a as usize], &self.objects[b as usize])
                {
                    return true;
                }
            }
        }
        false
    }

    pub fn contains_point(&self, i: usize, p: &[f64]) -> bool {
        self.leaves[i]
            .iter()
            .any(|&l| self.objects[l as usize].leaf_contains_point(p))
    }

    /// Number of objects whose closure contains `p`.
    pub fn depth(&self, p: &[f64]) -> usize {
        (0..self.len()).filter(|&i| self.contains_point(i, p)).count()
    }

    /// Side length of the smallest enclosing axis-aligned hypercube.
    pub fn side_length(&self, i: usize) -> f64 {
        self.bboxes[i].max_extent()
    }

    /// Lexicographically smallest point of object `i`.
    pub fn leftmost_point(&self, i: usize) -> Result<Point> {
        let mut best: Option<Point> = None;
        for &l in &self.leaves[i] {
            let p = self.objects[l as usize]
                .leaf_leftmost()
                .ok_or(Error::Unbounded { index: i })?;
            match &best {
                Some(b) if lex_cmp(b, &p) != std::cmp::Ordering::Greater => {}
                _ => best = Some(p),
            }
        }
        Ok(best.unwrap())
    }

    /// Translate every leaf object; unions keep their member lists.
    pub fn translate(&self, delta: &[f64]) -> ObjectSet {
        let objects = self
            .objects
            .iter()
            .map(|o| o.translated(delta))
            .collect::<Vec<_>>();
        let bboxes = self
            .bboxes
            .iter()
            .map(|bb| Bbox {
                lo: bb.lo.iter().zip(delta).map(|(c, d)| c + d).collect(),
                hi: bb.hi.iter().zip(delta).map(|(c, d)| c + d).collect(),
            })
            .collect();
        ObjectSet {
            dim: self.dim,
            objects,
            leaves: self.leaves.clone(),
            bboxes,
        }
    }

    /// Bounding box of the whole collection, or None when empty.
    pub fn global_bbox(&self) -> Option<Bbox> {
        let mut it = self.bboxes.iter();
        let mut bb = it.next()?.clone();
        for other in it {
            bb.merge(other);
        }
        Some(bb)
    }

    /// Map everything into [margin, 1 - margin]^d with one uniform scale, so
    /// all intersections are preserved exactly as a similarity transform.
    pub fn rescale_unit(&self, margin: f64) -> Result<(ObjectSet, AffineMap)> {
        if self.is_empty() {
            return Err(Error::Input("cannot rescale an empty collection".into()));
        }
        let bb = self.global_bbox().unwrap();
        if !bb.lo.iter().chain(&bb.hi).all(|c| c.is_finite()) {
            return Err(Error::Input(
                "rescaling needs bounded objects (no vertical lines)".into(),
            ));
        }
        let extent = bb.max_extent();
        let scale = if extent > 0.0 {
            (1.0 - 2.0 * margin) / extent
        } else {
            1.0
        };
        let offset: Vec<f64> = bb.lo.iter().map(|&l| margin - scale * l).collect();
        let map = AffineMap { scale, offset };
        let objects = self.objects.iter().map(|o| map.apply_object(o)).collect();
        let scaled = ObjectSet::new(self.dim, objects)?;
        Ok((scaled, map))
    }
}

/// x -> scale * x + offset, the same scale on every axis.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn apply_point(&self, p: &[f64]) -> Point {
        p.iter()
            .zip(&self.offset)
            .map(|(x, o)| self.scale * x + o)
            .collect()
    }

    fn apply_object(&self, obj: &GeometricObject) -> GeometricObject {
        let s = self.scale;
        let o = &self.offset;
        match obj {
            GeometricObject::Disk { center, radius } => GeometricObject::Disk {
                center: [s * center[0] + o[0], s * center[1] + o[1]],
                radius: s * radius,
            },
            GeometricObject::BallD { center, radius } => GeometricObject::BallD {
                center: self.apply_point(center),
                radius: s * radius,
            },
            GeometricObject::BoxD { lo, hi } => GeometricObject::BoxD {
                lo: self.apply_point(lo),
                hi: self.apply_point(hi),
            },
            GeometricObject::AxisRect { lo, hi } => {
                let l = self.apply_point(&lo[..]);
                let h = self.apply_point(&hi[..]);
                GeometricObject::AxisRect {
                    lo: [l[0], l[1]],
                    hi: [h[0], h[1]],
                }
            }
            GeometricObject::HSegment { y, x0, x1 } => GeometricObject::HSegment {
                y: s * y + o[1],
                x0: s * x0 + o[0],
                x1: s * x1 + o[0],
            },
            GeometricObject::VSegment { x, y0, y1 } => GeometricObject::VSegment {
                x: s * x + o[0],
                y0: s * y0 + o[1],
                y1: s * y1 + o[1],
            },
            GeometricObject::VLine { x } => GeometricObject::VLine { x: s * x + o[0] },
            GeometricObject::Polyline { vertices } => GeometricObject::Polyline {
                vertices: vertices
                    .iter()
                    .map(|v| [s * v[0] + o[0], s * v[1] + o[1]])
                    .collect(),
            },
            GeometricObject::UnionObject { members } => GeometricObject::UnionObject {
                members: members.clone(),
            },
        }
    }
}
