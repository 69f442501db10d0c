//! Geometric primitives: objects, intersection predicates, and quadtree cells.

pub mod intersect;
pub mod object;
pub mod quadtree;

pub use object::{GeometricObject, ObjectSet};
pub use quadtree::{GeneralizedCell, QuadtreeCell};

/// A point in d dimensions. The length of the vector is the dimension.
pub type Point = Vec<f64>;

/// Axis-aligned bounding box, closed on both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Bbox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bbox {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn merge(&mut self, other: &Bbox) {
        for j in 0..self.lo.len() {
            self.lo[j] = self.lo[j].min(other.lo[j]);
            self.hi[j] = self.hi[j].max(other.hi[j]);
        }
    }

    /// Closed-interval overlap test per axis.
    pub fn overlaps(&self, other: &Bbox) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((alo, ahi), (blo, bhi))| alo <= bhi && blo <= ahi)
    }

    /// Largest extent over all axes.
    pub fn max_extent(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(lo, hi)| hi - lo)
            .fold(0.0, f64::max)
    }
}
