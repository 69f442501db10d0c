//! Deterministic SVG renders of two-dimensional instances: object outlines
//! plus spanner edges drawn between object representative points.

use std::fmt::Write as _;

use hopspan_core::error::{Error, Result};
use hopspan_core::{GeometricObject, Instance, Spanner};

const CANVAS: f64 = 800.0;
const PAD: f64 = 12.0;

/// World-to-canvas mapping with the y axis flipped so world "up" renders up.
struct Frame {
    min_x: f64,
    max_y: f64,
    mid_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn x(&self, wx: f64) -> f64 {
        (wx - self.min_x) * self.scale + PAD
    }

    fn y(&self, wy: f64) -> f64 {
        (self.max_y - wy) * self.scale + PAD
    }

    fn len(&self, w: f64) -> f64 {
        w * self.scale
    }
}

/// Finite extent of one object; vertical lines contribute only x.
fn finite_bounds(obj: &GeometricObject) -> Option<([f64; 2], [f64; 2])> {
    let b = match obj {
        GeometricObject::UnionObject { .. } => return None,
        GeometricObject::VLine { x } => return Some(([*x, f64::NAN], [*x, f64::NAN])),
        other => other.leaf_bbox(),
    };
    Some(([b.lo[0], b.lo[1]], [b.hi[0], b.hi[1]]))
}

fn frame_over(objects: &[GeometricObject]) -> Frame {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for obj in objects {
        if let Some((lo, hi)) = finite_bounds(obj) {
            if lo[0].is_finite() {
                min_x = min_x.min(lo[0]);
                max_x = max_x.max(hi[0]);
            }
            if lo[1].is_finite() {
                min_y = min_y.min(lo[1]);
                max_y = max_y.max(hi[1]);
            }
        }
    }
    if !min_x.is_finite() || !max_x.is_finite() {
        min_x = 0.0;
        max_x = 1.0;
    }
    if !min_y.is_finite() || !max_y.is_finite() {
        min_y = 0.0;
        max_y = 1.0;
    }
    let w = (max_x - min_x).max(1e-9);
    let h = (max_y - min_y).max(1e-9);
    let scale = (CANVAS - 2.0 * PAD) / w.max(h);
    Frame {
        min_x,
        max_y,
        mid_y: (min_y + max_y) / 2.0,
        scale,
        width: w * scale + 2.0 * PAD,
        height: h * scale + 2.0 * PAD,
    }
}

/// Representative point: the center of the finite bounding box; a vertical
/// line uses the frame's vertical midpoint. Union wrappers take the first
/// member's representative so the edge stays anchored to drawn geometry.
fn rep_point(objects: &[GeometricObject], i: usize, frame: &Frame, depth: usize) -> [f64; 2] {
    if depth > 4 {
        return [0.0, 0.0];
    }
    match &objects[i] {
        GeometricObject::VLine { x } => [*x, frame.mid_y],
        GeometricObject::UnionObject { members } => match members.first() {
            Some(&m) if m < objects.len() => rep_point(objects, m, frame, depth + 1),
            _ => [0.0, 0.0],
        },
        other => {
            let b = other.leaf_bbox();
            [(b.lo[0] + b.hi[0]) / 2.0, (b.lo[1] + b.hi[1]) / 2.0]
        }
    }
}

fn emit_object(svg: &mut String, obj: &GeometricObject, f: &Frame) {
    match obj {
        GeometricObject::Disk { center, radius } => {
            let _ = writeln!(
                svg,
                r#"  <circle cx="{:.5}" cy="{:.5}" r="{:.5}"/>"#,
                f.x(center[0]),
                f.y(center[1]),
                f.len(*radius)
            );
        }
        GeometricObject::BallD { center, radius } => {
            let _ = writeln!(
                svg,
                r#"  <circle cx="{:.5}" cy="{:.5}" r="{:.5}"/>"#,
                f.x(center[0]),
                f.y(center[1]),
                f.len(*radius)
            );
        }
        GeometricObject::AxisRect { lo, hi } => {
            let _ = writeln!(
                svg,
                r#"  <rect x="{:.5}" y="{:.5}" width="{:.5}" height="{:.5}"/>"#,
                f.x(lo[0]),
                f.y(hi[1]),
                f.len(hi[0] - lo[0]),
                f.len(hi[1] - lo[1])
            );
        }
        GeometricObject::BoxD { lo, hi } => {
            let _ = writeln!(
                svg,
                r#"  <rect x="{:.5}" y="{:.5}" width="{:.5}" height="{:.5}"/>"#,
                f.x(lo[0]),
                f.y(hi[1]),
                f.len(hi[0] - lo[0]),
                f.len(hi[1] - lo[1])
            );
        }
        GeometricObject::HSegment { y, x0, x1 } => {
            let _ = writeln!(
                svg,
                r#"  <line x1="{:.5}" y1="{:.5}" x2="{:.5}" y2="{:.5}"/>"#,
                f.x(*x0),
                f.y(*y),
                f.x(*x1),
                f.y(*y)
            );
        }
        GeometricObject::VSegment { x, y0, y1 } => {
            let _ = writeln!(
                svg,
                r#"  <line x1="{:.5}" y1="{:.5}" x2="{:.5}" y2="{:.5}"/>"#,
                f.x(*x),
                f.y(*y0),
                f.x(*x),
                f.y(*y1)
            );
        }
        GeometricObject::VLine { x } => {
            let _ = writeln!(
                svg,
                r#"  <line x1="{:.5}" y1="0" x2="{:.5}" y2="{:.5}"/>"#,
                f.x(*x),
                f.x(*x),
                f.height
            );
        }
        GeometricObject::Polyline { vertices } => {
            let points: Vec<String> = vertices
                .iter()
                .map(|p| format!("{:.5},{:.5}", f.x(p[0]), f.y(p[1])))
                .collect();
            let _ = writeln!(svg, r#"  <polyline points="{}"/>"#, points.join(" "));
        }
        // members are separate list entries and draw themselves
        GeometricObject::UnionObject { .. } => {}
    }
}

/// Render an instance and its spanner. Rejects non-planar instances and
/// spanner edges that point outside the object list.
pub fn render_svg(instance: &Instance, spanner: &Spanner) -> Result<String> {
    if instance.dimension != 2 {
        return Err(Error::Input(format!(
            "render needs a 2-d instance, got dimension {}",
            instance.dimension
        )));
    }
    instance.to_set()?;
    let objects = &instance.objects;
    for &(u, v) in &spanner.edges {
        if u as usize >= objects.len() || v as usize >= objects.len() {
            return Err(Error::Input(format!(
                "spanner edge ({u}, {v}) is outside the {}-object instance",
                objects.len()
            )));
        }
    }
    let frame = frame_over(objects);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.5} {:.5}">"#,
        frame.width.ceil(),
        frame.height.ceil(),
        frame.width,
        frame.height
    );
    let _ = writeln!(svg, r##" <g stroke="#3a3a3a" fill="none" stroke-width="1">"##);
    for obj in objects {
        emit_object(&mut svg, obj, &frame);
    }
    let _ = writeln!(svg, " </g>");
    let _ = writeln!(
        svg,
        r##" <g stroke="#cc3333" stroke-width="0.8" stroke-opacity="0.8">"##
    );
    for &(u, v) in &spanner.edges {
        let a = rep_point(objects, u as usize, &frame, 0);
        let b = rep_point(objects, v as usize, &frame, 0);
        let _ = writeln!(
            svg,
            r#"  <line x1="{:.5}" y1="{:.5}" x2="{:.5}" y2="{:.5}"/>"#,
            frame.x(a[0]),
            frame.y(a[1]),
            frame.x(b[0]),
            frame.y(b[1])
        );
    }
    let _ = writeln!(svg, " </g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn spanner_with(edges: &[(u32, u32)]) -> Spanner {
        Spanner::from_parts(3, "test", BTreeMap::new(), edges.iter().copied())
    }

    #[test]
    fn empty_instance_renders_an_empty_canvas() {
        let inst = Instance::new(2, vec![]);
        let svg = render_svg(&inst, &spanner_with(&[])).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<circle"));
        assert_eq!(svg, render_svg(&inst, &spanner_with(&[])).unwrap());
    }

    #[test]
    fn disk_triangle_draws_three_outlines_and_two_edges() {
        let inst = Instance::new(
            2,
            vec![
                GeometricObject::Disk { center: [0.0, 0.0], radius: 1.0 },
                GeometricObject::Disk { center: [1.5, 0.0], radius: 1.0 },
                GeometricObject::Disk { center: [0.7, 1.2], radius: 1.0 },
            ],
        );
        let svg = render_svg(&inst, &spanner_with(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn three_dimensional_instances_are_rejected() {
        let inst = Instance::new(
            3,
            vec![GeometricObject::BallD { center: vec![0.0; 3], radius: 1.0 }],
        );
        assert!(matches!(
            render_svg(&inst, &spanner_with(&[])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn out_of_range_edges_are_rejected() {
        let inst = Instance::new(
            2,
            vec![GeometricObject::Disk { center: [0.0, 0.0], radius: 1.0 }],
        );
        assert!(matches!(
            render_svg(&inst, &spanner_with(&[(0, 4)])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn vertical_lines_span_the_canvas() {
        let inst = Instance::new(
            2,
            vec![
                GeometricObject::VLine { x: 2.0 },
                GeometricObject::HSegment { y: 1.0, x0: 0.0, x1: 4.0 },
            ],
        );
        let svg = render_svg(&inst, &spanner_with(&[(0, 1)])).unwrap();
        // one line outline per object plus one edge
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.contains(r#"y1="0""#));
    }

    #[test]
    fn mixed_kinds_render_their_own_elements() {
        let inst = Instance::new(
            2,
            vec![
                GeometricObject::AxisRect { lo: [0.0, 0.0], hi: [2.0, 1.0] },
                GeometricObject::Polyline { vertices: vec![[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]] },
            ],
        );
        let svg = render_svg(&inst, &spanner_with(&[])).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 1);
        // y flip: the rect's top edge (world y = 1) maps above its bottom
        let a = render_svg(&inst, &spanner_with(&[])).unwrap();
        assert_eq!(svg, a);
    }
}
