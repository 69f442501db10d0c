//! Constant-hop spanner constructions for geometric intersection graphs.
//!
//! The crate is organized around one pipeline: parse or generate a set of
//! geometric objects, build their intersection graph, run one of the spanner
//! constructions, and check the result with a brute-force hop verifier.

pub mod error;
pub mod geom;
pub mod graph;
pub mod instance;
pub mod schedule;
pub mod separator;
pub mod spanner;

pub use error::Error;
pub use geom::object::{GeometricObject, ObjectSet};
pub use graph::{IntersectionGraph, Spanner, VerifyMode, VerifyReport};
pub use instance::Instance;
