//! Deterministic instance generators.
//!
//! Every family maps (n, params, seed) to the same object list on every run.
//! Region sizes grow with n so the intersection graphs stay sparse: roughly
//! Theta(n) edges for the area-scaled families, denser for the two families
//! that exist to stress a construction (seg_lines, clique_point).

use std::collections::BTreeMap;

use hopspan_core::error::{Error, Result};
use hopspan_core::{GeometricObject, Instance};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Families accepted by [`generate_instance`].
pub const FAMILIES: &[&str] = &[
    "disks",
    "balls_d",
    "boxes_d",
    "squares",
    "rects",
    "hv_segments",
    "seg_lines",
    "polylines",
    "nested_rects",
    "clique_point",
];

/// Per-family tuning knobs; unknown keys are ignored.
pub type GenParams = BTreeMap<String, f64>;

fn get(params: &GenParams, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Build a reproducible instance of the named family.
pub fn generate_instance(
    family: &str,
    n: usize,
    params: &GenParams,
    seed: u64,
) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let (dimension, objects) = match family {
        "disks" => (2, disks(n, params, rng)),
        "balls_d" => {
            let d = get(params, "dim", 3.0).max(1.0) as usize;
            (d, balls(n, d, params, rng))
        }
        "boxes_d" => {
            let d = get(params, "dim", 3.0).max(1.0) as usize;
            (d, boxes(n, d, params, rng))
        }
        "squares" => (2, squares(n, params, rng)),
        "rects" => (2, rects(n, params, rng)),
        "hv_segments" => (2, hv_segments(n, params, rng)),
        "seg_lines" => (2, seg_lines(n, params, rng)),
        "polylines" => (2, polylines(n, params, rng)),
        "nested_rects" => (2, nested_rects(n, params, rng)),
        "clique_point" => (2, clique_point(n, params, rng)),
        other => {
            return Err(Error::Input(format!(
                "unknown generator family '{other}'"
            )))
        }
    };
    Ok(Instance::new(dimension, objects))
}

fn disks(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 1.0);
    let r_lo = get(params, "r_min", 0.5);
    let r_hi = get(params, "r_max", 2.0);
    (0..n)
        .map(|_| GeometricObject::Disk {
            center: [rng.gen_range(0.0..side), rng.gen_range(0.0..side)],
            radius: rng.gen_range(r_lo..r_hi),
        })
        .collect()
}

fn balls(n: usize, d: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).powf(1.0 / d as f64) * get(params, "region_scale", 2.0);
    let r_lo = get(params, "r_min", 0.5);
    let r_hi = get(params, "r_max", 2.0);
    (0..n)
        .map(|_| GeometricObject::BallD {
            center: (0..d).map(|_| rng.gen_range(0.0..side)).collect(),
            radius: rng.gen_range(r_lo..r_hi),
        })
        .collect()
}

fn boxes(n: usize, d: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).powf(1.0 / d as f64) * get(params, "region_scale", 2.0);
    (0..n)
        .map(|_| {
            let center: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..side)).collect();
            let half: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..2.0)).collect();
            GeometricObject::BoxD {
                lo: center.iter().zip(&half).map(|(c, h)| c - h).collect(),
                hi: center.iter().zip(&half).map(|(c, h)| c + h).collect(),
            }
        })
        .collect()
}

fn squares(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 1.5);
    (0..n)
        .map(|_| {
            let cx = rng.gen_range(0.0..side);
            let cy = rng.gen_range(0.0..side);
            let h = rng.gen_range(0.25..1.25);
            GeometricObject::AxisRect {
                lo: [cx - h, cy - h],
                hi: [cx + h, cy + h],
            }
        })
        .collect()
}

fn rects(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 1.5);
    (0..n)
        .map(|_| {
            let cx = rng.gen_range(0.0..side);
            let cy = rng.gen_range(0.0..side);
            let hw = rng.gen_range(0.25..2.0);
            let hh = rng.gen_range(0.25..2.0);
            GeometricObject::AxisRect {
                lo: [cx - hw, cy - hh],
                hi: [cx + hw, cy + hh],
            }
        })
        .collect()
}

fn hv_segments(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 1.5);
    (0..n)
        .map(|i| {
            let len = rng.gen_range(1.0..6.0);
            if i % 2 == 0 {
                let x0 = rng.gen_range(0.0..side);
                GeometricObject::HSegment {
                    y: rng.gen_range(0.0..side),
                    x0,
                    x1: x0 + len,
                }
            } else {
                let y0 = rng.gen_range(0.0..side);
                GeometricObject::VSegment {
                    x: rng.gen_range(0.0..side),
                    y0,
                    y1: y0 + len,
                }
            }
        })
        .collect()
}

fn seg_lines(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 1.5);
    (0..n)
        .map(|i| {
            // one object in ten is a full vertical line
            if i % 10 == 9 {
                GeometricObject::VLine {
                    x: rng.gen_range(0.0..side),
                }
            } else {
                let x0 = rng.gen_range(0.0..side);
                let len = rng.gen_range(1.0..6.0);
                GeometricObject::HSegment {
                    y: rng.gen_range(0.0..side),
                    x0,
                    x1: x0 + len,
                }
            }
        })
        .collect()
}

fn polylines(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let side = (n as f64).sqrt() * get(params, "region_scale", 2.5);
    let verts = get(params, "vertices", 5.0).max(2.0) as usize;
    (0..n)
        .map(|_| {
            let mut p = [rng.gen_range(0.0..side), rng.gen_range(0.0..side)];
            let mut vertices = vec![p];
            for _ in 1..verts {
                p[0] += rng.gen_range(-1.5..1.5);
                p[1] += rng.gen_range(-1.5..1.5);
                vertices.push(p);
            }
            GeometricObject::Polyline { vertices }
        })
        .collect()
}

fn nested_rects(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    let chain = get(params, "chain", 8.0).max(1.0) as usize;
    let chains = n.div_ceil(chain.max(1));
    let cols = (chains as f64).sqrt().ceil() as usize;
    let mut out = Vec::with_capacity(n);
    'emit: for ci in 0..chains {
        let gx = (ci % cols.max(1)) as f64 * 12.0;
        let gy = (ci / cols.max(1)) as f64 * 12.0;
        let mut lo = [gx, gy];
        let mut hi = [gx + 10.0, gy + 10.0];
        for _ in 0..chain {
            if out.len() == n {
                break 'emit;
            }
            out.push(GeometricObject::AxisRect { lo, hi });
            // shrink both corners so every chain member strictly nests
            for a in 0..2 {
                lo[a] += rng.gen_range(0.1..0.4);
                hi[a] -= rng.gen_range(0.1..0.4);
            }
        }
    }
    out
}

fn clique_point(n: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<GeometricObject> {
    // every disk strictly contains the origin, so the graph is complete
    let spread = (n as f64).sqrt().max(2.0) * get(params, "region_scale", 1.0);
    (0..n)
        .map(|_| {
            let rho = rng.gen_range(0.5..spread);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            GeometricObject::Disk {
                center: [rho * theta.cos(), rho * theta.sin()],
                radius: rho * 1.05 + 0.1,
            }
        })
        .collect()
}
