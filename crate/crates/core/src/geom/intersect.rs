//! Exact closed-set intersection predicates between object leaves.
//!
//! Every test below is a sign or comparison of finitely many f64 products,
//! with no divisions or square roots, so results are reproducible across runs.

use crate::error::{Error, Result};
use crate::geom::object::GeometricObject;

enum Canon<'a> {
    Ball(&'a [f64], f64),
    Rect(Vec<f64>, Vec<f64>),
    Segs(Vec<([f64; 2], [f64; 2])>),
    VLine(f64),
}

fn canon(obj: &GeometricObject) -> Canon<'_> {
    match obj {
        GeometricObject::Disk { center, radius } => Canon::Ball(&center[..], *radius),
        GeometricObject::BallD { center, radius } => Canon::Ball(center, *radius),
        GeometricObject::BoxD { lo, hi } => Canon::Rect(lo.clone(), hi.clone()),
        GeometricObject::AxisRect { lo, hi } => Canon::Rect(lo.to_vec(), hi.to_vec()),
        GeometricObject::HSegment { y, x0, x1 } => Canon::Rect(vec![*x0, *y], vec![*x1, *y]),
        GeometricObject::VSegment { x, y0, y1 } => Canon::Rect(vec![*x, *y0], vec![*x, *y1]),
        GeometricObject::VLine { x } => Canon::VLine(*x),
        GeometricObject::Polyline { vertices } => {
            let segs = if vertices.len() == 1 {
                vec![(vertices[0], vertices[0])]
            } else {
                vertices.windows(2).map(|w| (w[0], w[1])).collect()
            };
            Canon::Segs(segs)
        }
        GeometricObject::UnionObject { .. } => {
            unreachable!("unions must be expanded to leaves before predicate tests")
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn ball_ball(c1: &[f64], r1: f64, c2: &[f64], r2: f64) -> bool {
    dist2(c1, c2) <= (r1 + r2) * (r1 + r2)
}

fn ball_rect(c: &[f64], r: f64, lo: &[f64], hi: &[f64]) -> bool {
    let mut d2 = 0.0;
    for j in 0..c.len() {
        let v = c[j].clamp(lo[j], hi[j]) - c[j];
        d2 += v * v;
    }
    d2 <= r * r
}

fn rect_rect(alo: &[f64], ahi: &[f64], blo: &[f64], bhi: &[f64]) -> bool {
    alo.iter()
        .zip(ahi)
        .zip(blo.iter().zip(bhi))
        .all(|((al, ah), (bl, bh))| al <= bh && bl <= ah)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn in_seg_box(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn seg_seg(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && in_seg_box(a, c, d))
        || (d2 == 0.0 && in_seg_box(b, c, d))
        || (d3 == 0.0 && in_seg_box(c, a, b))
        || (d4 == 0.0 && in_seg_box(d, a, b))
}

fn seg_rect(a: [f64; 2], b: [f64; 2], lo: &[f64], hi: &[f64]) -> bool {
    let inside = |p: [f64; 2]| p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1];
    if inside(a) || inside(b) {
        return true;
    }
    let c00 = [lo[0], lo[1]];
    let c10 = [hi[0], lo[1]];
    let c01 = [lo[0], hi[1]];
    let c11 = [hi[0], hi[1]];
    seg_seg(a, b, c00, c10) || seg_seg(a, b, c10, c11) || seg_seg(a, b, c11, c01) || seg_seg(a, b, c01, c00)
}

fn seg_ball(a: [f64; 2], b: [f64; 2], c: &[f64], r: f64) -> bool {
    let v = [b[0] - a[0], b[1] - a[1]];
    let w = [c[0] - a[0], c[1] - a[1]];
    let vv = v[0] * v[0] + v[1] * v[1];
    let wv = w[0] * v[0] + w[1] * v[1];
    if vv == 0.0 || wv <= 0.0 {
        return dist2(&a, c) <= r * r;
    }
    if wv >= vv {
        return dist2(&b, c) <= r * r;
    }
    let ww = w[0] * w[0] + w[1] * w[1];
    ww * vv - wv * wv <= r * r * vv
}

/// Closed intersection test between two non-union leaves of equal dimension.
pub fn leaf_intersects(a: &GeometricObject, b: &GeometricObject) -> bool {
    use Canon::*;
    match (canon(a), canon(b)) {
        (Ball(c1, r1), Ball(c2, r2)) => ball_ball(c1, r1, c2, r2),
        (Ball(c, r), Rect(lo, hi)) | (Rect(lo, hi), Ball(c, r)) => ball_rect(c, r, &lo, &hi),
        (Rect(alo, ahi), Rect(blo, bhi)) => rect_rect(&alo, &ahi, &blo, &bhi),
        (Segs(s1), Segs(s2)) => s1
            .iter()
            .any(|&(p, q)| s2.iter().any(|&(u, v)| seg_seg(p, q, u, v))),
        (Segs(s), Rect(lo, hi)) | (Rect(lo, hi), Segs(s)) => {
            s.iter().any(|&(p, q)| seg_rect(p, q, &lo, &hi))
        }
        (Segs(s), Ball(c, r)) | (Ball(c, r), Segs(s)) => {
            s.iter().any(|&(p, q)| seg_ball(p, q, c, r))
        }
        (VLine(x1), VLine(x2)) => x1 == x2,
        (VLine(x), Ball(c, r)) | (Ball(c, r), VLine(x)) => (x - c[0]).abs() <= r,
        (VLine(x), Rect(lo, hi)) | (Rect(lo, hi), VLine(x)) => lo[0] <= x && x <= hi[0],
        (VLine(x), Segs(s)) | (Segs(s), VLine(x)) => s
            .iter()
            .any(|&(p, q)| p[0].min(q[0]) <= x && x <= p[0].max(q[0])),
    }
}

/// Standalone intersection test that checks dimensions and rejects unions.
pub fn intersects(a: &GeometricObject, b: &GeometricObject) -> Result<bool> {
    if a.is_union() || b.is_union() {
        return Err(Error::Input(
            "union objects need their owning set for intersection tests".into(),
        ));
    }
    if let (Some(da), Some(db)) = (a.dimension_hint(), b.dimension_hint()) {
        if da != db {
            return Err(Error::DimensionMismatch {
                expected: da,
                got: db,
            });
        }
    }
    Ok(leaf_intersects(a, b))
}

/// Closed containment of a point in a non-union leaf.
pub fn leaf_contains_point(obj: &GeometricObject, p: &[f64]) -> bool {
    match canon(obj) {
        Canon::Ball(c, r) => dist2(c, p) <= r * r,
        Canon::Rect(lo, hi) => lo
            .iter()
            .zip(&hi)
            .zip(p)
            .all(|((l, h), x)| l <= x && x <= h),
        Canon::VLine(x) => p[0] == x,
        Canon::Segs(segs) => {
            let q = [p[0], p[1]];
            segs.iter()
                .any(|&(a, b)| cross(a, b, q) == 0.0 && in_seg_box(q, a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disk(cx: f64, cy: f64, r: f64) -> GeometricObject {
        GeometricObject::Disk {
            center: [cx, cy],
            radius: r,
        }
    }

    fn rect(lo: [f64; 2], hi: [f64; 2]) -> GeometricObject {
        GeometricObject::AxisRect { lo, hi }
    }

    fn poly(vs: &[[f64; 2]]) -> GeometricObject {
        GeometricObject::Polyline {
            vertices: vs.to_vec(),
        }
    }

    #[test]
    fn disks_meet_iff_center_distance_at_most_radius_sum() {
        assert!(leaf_intersects(&disk(0.0, 0.0, 1.0), &disk(1.5, 0.0, 1.0)));
        assert!(leaf_intersects(&disk(0.0, 0.0, 1.0), &disk(2.0, 0.0, 1.0)));
        assert!(!leaf_intersects(&disk(0.0, 0.0, 1.0), &disk(2.5, 0.0, 1.0)));
    }

    #[test]
    fn boxes_sharing_an_edge_meet() {
        assert!(leaf_intersects(
            &rect([0.0, 0.0], [1.0, 1.0]),
            &rect([1.0, 0.0], [2.0, 1.0])
        ));
        assert!(!leaf_intersects(
            &rect([0.0, 0.0], [1.0, 1.0]),
            &rect([1.1, 0.0], [2.0, 1.0])
        ));
    }

    #[test]
    fn crossing_polylines_meet() {
        let a = poly(&[[0.0, 0.0], [1.0, 1.0]]);
        let b = poly(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!(leaf_intersects(&a, &b));
        let c = poly(&[[3.0, 3.0], [4.0, 4.0]]);
        assert!(!leaf_intersects(&a, &c));
    }

    #[test]
    fn collinear_segment_overlap_is_detected() {
        let a = poly(&[[0.0, 0.0], [2.0, 0.0]]);
        let b = poly(&[[1.0, 0.0], [3.0, 0.0]]);
        let c = poly(&[[2.5, 0.0], [3.0, 0.0]]);
        assert!(leaf_intersects(&a, &b));
        assert!(!leaf_intersects(&a, &c));
    }

    #[test]
    fn axis_segments_cross() {
        let h = GeometricObject::HSegment {
            y: 0.0,
            x0: 0.0,
            x1: 2.0,
        };
        let v = GeometricObject::VSegment {
            x: 1.0,
            y0: -1.0,
            y1: 1.0,
        };
        assert!(leaf_intersects(&h, &v));
        let far = GeometricObject::VSegment {
            x: 3.0,
            y0: -1.0,
            y1: 1.0,
        };
        assert!(!leaf_intersects(&h, &far));
    }

    #[test]
    fn vertical_line_cases() {
        let line = GeometricObject::VLine { x: 1.0 };
        assert!(leaf_intersects(&line, &disk(0.0, 0.0, 1.0)));
        assert!(!leaf_intersects(&line, &disk(0.0, 0.0, 0.9)));
        assert!(leaf_intersects(&line, &rect([0.5, 0.0], [1.5, 1.0])));
        assert!(leaf_intersects(&line, &poly(&[[0.0, 0.0], [2.0, 5.0]])));
        assert!(leaf_intersects(&line, &GeometricObject::VLine { x: 1.0 }));
        assert!(!leaf_intersects(&line, &GeometricObject::VLine { x: 1.5 }));
    }

    #[test]
    fn segment_to_disk_uses_true_distance() {
        let near = poly(&[[-1.0, 0.4], [1.0, 0.4]]);
        let far = poly(&[[-1.0, 0.6], [1.0, 0.6]]);
        let d = disk(0.0, 0.0, 0.5);
        assert!(leaf_intersects(&near, &d));
        assert!(!leaf_intersects(&far, &d));
    }

    #[test]
    fn higher_dimensional_balls_and_boxes() {
        let b1 = GeometricObject::BallD {
            center: vec![0.0, 0.0, 0.0],
            radius: 1.0,
        };
        let b2 = GeometricObject::BallD {
            center: vec![1.0, 1.0, 1.0],
            radius: 1.0,
        };
        assert!(leaf_intersects(&b1, &b2));
        let bx = GeometricObject::BoxD {
            lo: vec![0.9, 0.0, 0.0],
            hi: vec![2.0, 1.0, 1.0],
        };
        assert!(leaf_intersects(&b1, &bx));
        assert!(intersects(&b1, &disk(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn point_containment() {
        assert!(leaf_contains_point(&disk(0.0, 0.0, 1.0), &[1.0, 0.0]));
        assert!(!leaf_contains_point(&disk(0.0, 0.0, 1.0), &[1.0, 0.1]));
        assert!(leaf_contains_point(
            &poly(&[[0.0, 0.0], [2.0, 2.0]]),
            &[1.0, 1.0]
        ));
        assert!(!leaf_contains_point(
            &poly(&[[0.0, 0.0], [2.0, 2.0]]),
            &[1.0, 1.1]
        ));
    }

    proptest! {
        #[test]
        fn intersection_is_symmetric(
            ax in -5.0f64..5.0, ay in -5.0f64..5.0, ar in 0.1f64..3.0,
            bx in -5.0f64..5.0, by in -5.0f64..5.0, br in 0.1f64..3.0,
        ) {
            let a = disk(ax, ay, ar);
            let b = disk(bx, by, br);
            prop_assert_eq!(leaf_intersects(&a, &b), leaf_intersects(&b, &a));
        }

        #[test]
        fn clamp_test_matches_sampled_distance(
            cx in -3.0f64..3.0, cy in -3.0f64..3.0, r in 0.1f64..2.0,
            lx in -3.0f64..3.0, ly in -3.0f64..3.0, w in 0.0f64..3.0, h in 0.0f64..3.0,
        ) {
            let b = rect([lx, ly], [lx + w, ly + h]);
            let d = disk(cx, cy, r);
            let hit = leaf_intersects(&d, &b);
            // dense sample of the rectangle as a conservative witness check
            let mut witness = false;
            for i in 0..=20 {
                for j in 0..=20 {
                    let p = [lx + w * i as f64 / 20.0, ly + h * j as f64 / 20.0];
                    if (p[0]-cx)*(p[0]-cx) + (p[1]-cy)*(p[1]-cy) <= r*r {
                        witness = true;
                    }
                }
            }
            if witness {
                prop_assert!(hit);
            }
        }
    }
}
