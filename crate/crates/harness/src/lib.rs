//! Instance generators, experiment ladders, and SVG rendering around the
//! spanner constructions in hopspan-core.

pub mod gen;
pub mod render;
pub mod suite;
