//! Experiment ladders: generate, build, verify, and report one CSV row per
//! (n, seed) cell, executed on a bounded worker pool.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use hopspan_core::error::{Error, Result};
use hopspan_core::graph::verify_hop_spanner;
use hopspan_core::spanner::fat::{fat_spanner_3hop, fat_spanner_tk};
use hopspan_core::spanner::rect::{rect_spanner, seg_line_spanner, seg_spanner};
use hopspan_core::spanner::string::{string_spanner_3hop, string_spanner_7hop, string_spanner_tk};
use hopspan_core::spanner::union::two_hop_spanner_union;
use hopspan_core::{IntersectionGraph, ObjectSet, Spanner, VerifyMode};
use serde::{Deserialize, Serialize};

use crate::gen::{generate_instance, GenParams};

/// Construction tags accepted by [`build_spanner`].
pub const CONSTRUCTIONS: &[&str] = &[
    "string-I",
    "string-II",
    "string-III",
    "fat-I",
    "fat-II",
    "union-2hop",
    "seg-line",
    "seg",
    "rect",
];

pub const CSV_FORMAT_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "format_version,family,construction,n,seed,m,spanner_edges,\
declared_t,verified_ok,max_required_hops,verify_mode,build_ms,verify_ms,aux";

fn spec_format_version() -> u32 {
    1
}

/// One experiment: a construction on a family across a size ladder and seeds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default = "spec_format_version")]
    pub format_version: u32,
    pub family: String,
    pub construction: String,
    /// Level for the leveled constructions; ignored by the fixed-stretch ones.
    #[serde(default)]
    pub k: Option<u32>,
    /// Strictly increasing instance sizes.
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub parameters: GenParams,
    /// Default CSV destination; a CLI output path takes precedence.
    #[serde(default)]
    pub output_csv: Option<String>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Input("experiment needs at least one seed".into()));
        }
        if !self.ns.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Input(
                "size ladder must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
        let spec: ExperimentSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug)]
pub struct ResultRow {
    pub family: String,
    pub construction: String,
    pub n: usize,
    pub seed: u64,
    pub m: usize,
    pub spanner_edges: usize,
    pub declared_t: u64,
    pub verified_ok: bool,
    pub max_required_hops: u64,
    pub verify_mode: String,
    pub build_ms: u128,
    pub verify_ms: u128,
    pub aux: String,
}

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            CSV_FORMAT_VERSION,
            self.family,
            self.construction,
            self.n,
            self.seed,
            self.m,
            self.spanner_edges,
            self.declared_t,
            self.verified_ok,
            self.max_required_hops,
            self.verify_mode,
            self.build_ms,
            self.verify_ms,
            self.aux,
        )
    }
}

/// Map a construction tag to its builder. The string constructions only need
/// the intersection graph; the geometric ones consume the object set.
pub fn build_spanner(
    construction: &str,
    k: Option<u32>,
    set: &ObjectSet,
    g: &IntersectionGraph,
) -> Result<Spanner> {
    match construction {
        "string-I" => Ok(string_spanner_3hop(g)),
        "string-II" => Ok(string_spanner_7hop(g)),
        "string-III" => Ok(string_spanner_tk(g, k.unwrap_or(2))),
        "fat-I" => fat_spanner_3hop(set),
        "fat-II" => fat_spanner_tk(set, k.unwrap_or(2)),
        "union-2hop" => two_hop_spanner_union(set),
        "seg-line" => seg_line_spanner(set),
        "seg" => seg_spanner(set),
        "rect" => rect_spanner(set),
        other => Err(Error::Input(format!("unknown construction tag '{other}'"))),
    }
}

/// Exact verification up to 3000 vertices, seeded 10% edge sampling above.
pub fn default_verify_mode(n: usize, seed: u64) -> VerifyMode {
    if n <= 3000 {
        VerifyMode::Exact
    } else {
        VerifyMode::Sampled { fraction: 0.1, seed }
    }
}

pub fn mode_label(mode: VerifyMode) -> String {
    match mode {
        VerifyMode::Exact => "exact".into(),
        VerifyMode::Sampled { fraction, seed } => format!("sampled(f={fraction};seed={seed})"),
    }
}

/// Scalar diagnostics from the spanner parameters, `key=value` joined with
/// semicolons so the CSV stays comma-clean. The n and m entries already have
/// their own columns.
fn aux_metrics(s: &Spanner) -> String {
    let mut parts = Vec::new();
    for (key, value) in &s.parameters {
        if key == "n" || key == "m" {
            continue;
        }
        match value {
            serde_json::Value::Number(x) => parts.push(format!("{key}={x}")),
            serde_json::Value::Bool(b) => parts.push(format!("{key}={b}")),
            _ => {}
        }
    }
    parts.join(";")
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n'], ";")
}

/// Run one (n, seed) cell. Hard errors never panic the suite: they land in
/// the row as `error=...` with verified_ok false.
pub fn run_one(spec: &ExperimentSpec, n: usize, seed: u64) -> ResultRow {
    let mut row = ResultRow {
        family: spec.family.clone(),
        construction: spec.construction.clone(),
        n,
        seed,
        m: 0,
        spanner_edges: 0,
        declared_t: 0,
        verified_ok: false,
        max_required_hops: 0,
        verify_mode: String::new(),
        build_ms: 0,
        verify_ms: 0,
        aux: String::new(),
    };
    let outcome = (|| -> Result<()> {
        let inst = generate_instance(&spec.family, n, &spec.parameters, seed)?;
        let set = inst.to_set()?;
        let g = IntersectionGraph::from_objects(&set);
        row.m = g.m();
        let started = Instant::now();
        let spanner = build_spanner(&spec.construction, spec.k, &set, &g)?;
        row.build_ms = started.elapsed().as_millis();
        row.spanner_edges = spanner.edge_count();
        row.declared_t = spanner.t;
        row.aux = aux_metrics(&spanner);
        let mode = default_verify_mode(g.n(), seed);
        row.verify_mode = mode_label(mode);
        let started = Instant::now();
        let report = verify_hop_spanner(&g, &spanner, None, mode)?;
        row.verify_ms = started.elapsed().as_millis();
        row.verified_ok = report.ok;
        row.max_required_hops = report.max_required_hops;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.verified_ok = false;
        row.aux = format!("error={}", sanitize(&e.to_string()));
    }
    row
}

/// Apply `work` to every job on a bounded pool, preserving job order in the
/// returned vector regardless of scheduling.
pub fn run_jobs<J: Sync, R: Send>(jobs: &[J], work: impl Fn(&J) -> R + Sync) -> Vec<R> {
    let slots: Vec<Mutex<Option<R>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .clamp(1, 8)
        .min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let out = work(&jobs[i]);
                *slots[i].lock().expect("result slot") = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("worker filled slot"))
        .collect()
}

/// Run the whole ladder. Row order is ladder-major, seed-minor.
pub fn run_suite(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let jobs: Vec<(usize, u64)> = spec
        .ns
        .iter()
        .flat_map(|&n| spec.seeds.iter().map(move |&s| (n, s)))
        .collect();
    Ok(run_jobs(&jobs, |&(n, seed)| run_one(spec, n, seed)))
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}
