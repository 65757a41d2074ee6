use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Planar position in meters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point<S>) -> S {
        (self.x - other.x).hypot(self.y - other.y)
    }
}
