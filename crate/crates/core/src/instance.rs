//! JSON instance files: a dimension plus an ordered object list whose
//! positions define the vertex indices of the intersection graph.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::object::{GeometricObject, ObjectSet};

fn default_version() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Instance {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub dimension: usize,
    pub objects: Vec<GeometricObject>,
}

impl Instance {
    pub fn new(dimension: usize, objects: Vec<GeometricObject>) -> Instance {
        Instance {
            format_version: 1,
            dimension,
            objects,
        }
    }

    /// Validate and index the objects.
    pub fn to_set(&self) -> Result<ObjectSet> {
        ObjectSet::new(self.dimension, self.objects.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
        Instance::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
