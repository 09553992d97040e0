//! Sampling `z = f(x, y)` on a regular grid and turning the samples into a
//! clipped, colored triangle mesh.

mod axes;
mod build;
mod colormap;
mod grid;
mod obj;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axes::{build_axes, Axis, AxisMetadata, Tick, TICKS_PER_AXIS};
pub use build::{build_mesh, build_mesh_with, SurfaceMesh};
pub use colormap::{map_color, ColorMap, ColorStop, Rgb};
pub use grid::{compute_normals, compute_normals_with, sample_grid, sample_grid_with, HeightField};
pub use obj::export_obj;

pub const DEFAULT_SEGMENTS: u32 = 128;
pub const MAX_SEGMENTS: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("invalid domain [{x_min}, {x_max}] x [{y_min}, {y_max}]: bounds must be finite with min < max")]
    InvalidDomain {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    #[error("invalid z limits [{z_min}, {z_max}]: bounds must be finite with min < max")]
    InvalidZLimits { z_min: f64, z_max: f64 },
    #[error("segments must be in 1..={MAX_SEGMENTS}, got {0}")]
    InvalidResolution(u32),
    #[error("invalid colormap: {0}")]
    InvalidColorMap(String),
    #[error("heightfield has {actual} samples, expected {expected}")]
    SampleCount { expected: usize, actual: usize },
}

fn valid_range(min: f64, max: f64) -> bool {
    min.is_finite() && max.is_finite() && min < max
}

/// Rectangular input domain in world units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain")]
pub struct Domain {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

#[derive(Deserialize)]
struct RawDomain {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl TryFrom<RawDomain> for Domain {
    type Error = MeshError;

    fn try_from(r: RawDomain) -> Result<Self, Self::Error> {
        Domain::new(r.x_min, r.x_max, r.y_min, r.y_max)
    }
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, MeshError> {
        if valid_range(x_min, x_max) && valid_range(y_min, y_max) {
            Ok(Domain {
                x_min,
                x_max,
                y_min,
                y_max,
            })
        } else {
            Err(MeshError::InvalidDomain {
                x_min,
                x_max,
                y_min,
                y_max,
            })
        }
    }

    /// A square `[min, max]²` domain.
    pub fn square(min: f64, max: f64) -> Result<Self, MeshError> {
        Domain::new(min, max, min, max)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain {
            x_min: -5.0,
            x_max: 5.0,
            y_min: -5.0,
            y_max: 5.0,
        }
    }
}

/// Visible height range; geometry outside it is clipped away.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawZLimits")]
pub struct ZLimits {
    z_min: f64,
    z_max: f64,
}

#[derive(Deserialize)]
struct RawZLimits {
    z_min: f64,
    z_max: f64,
}

impl TryFrom<RawZLimits> for ZLimits {
    type Error = MeshError;

    fn try_from(r: RawZLimits) -> Result<Self, Self::Error> {
        ZLimits::new(r.z_min, r.z_max)
    }
}

impl ZLimits {
    pub fn new(z_min: f64, z_max: f64) -> Result<Self, MeshError> {
        if valid_range(z_min, z_max) {
            Ok(ZLimits { z_min, z_max })
        } else {
            Err(MeshError::InvalidZLimits { z_min, z_max })
        }
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn contains(&self, z: f64) -> bool {
        self.z_min <= z && z <= self.z_max
    }

    /// Height mapped to `[0, 1]` across the limits (unclamped).
    pub fn normalize(&self, z: f64) -> f64 {
        (z - self.z_min) / (self.z_max - self.z_min)
    }
}

impl Default for ZLimits {
    fn default() -> Self {
        ZLimits {
            z_min: -5.0,
            z_max: 5.0,
        }
    }
}

/// Grid cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Resolution(u32);

impl Resolution {
    pub fn new(segments: u32) -> Result<Self, MeshError> {
        if (1..=MAX_SEGMENTS).contains(&segments) {
            Ok(Resolution(segments))
        } else {
            Err(MeshError::InvalidResolution(segments))
        }
    }

    pub fn segments(self) -> u32 {
        self.0
    }

    /// Samples per axis (`segments + 1`).
    pub fn samples(self) -> usize {
        self.0 as usize + 1
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution(DEFAULT_SEGMENTS)
    }
}

impl TryFrom<u32> for Resolution {
    type Error = MeshError;

    fn try_from(v: u32) -> Result<Self, Self::Error> {
        Resolution::new(v)
    }
}

impl From<Resolution> for u32 {
    fn from(r: Resolution) -> u32 {
        r.0
    }
}

/// Coordinate of grid line `i` of `segments` over `[min, max]`.
/// The last line lands on `max` exactly.
pub(crate) fn grid_coord(min: f64, max: f64, i: usize, segments: usize) -> f64 {
    if i == segments {
        max
    } else {
        min + i as f64 * (max - min) / segments as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_validation() {
        assert!(Domain::new(0.0, 1.0, 0.0, 1.0).is_ok());
        assert!(Domain::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Domain::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(Domain::new(f64::NEG_INFINITY, 1.0, 0.0, 1.0).is_err());
        assert!(Domain::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn zlimits_and_resolution_validation() {
        assert!(ZLimits::new(-1.0, 1.0).is_ok());
        assert!(ZLimits::new(1.0, -1.0).is_err());
        assert!(Resolution::new(0).is_err());
        assert!(Resolution::new(1).is_ok());
        assert!(Resolution::new(1024).is_ok());
        assert!(Resolution::new(1025).is_err());
    }

    #[test]
    fn serde_rejects_invalid_values() {
        assert!(serde_json::from_str::<Domain>(r#"{"x_min":1,"x_max":0,"y_min":0,"y_max":1}"#).is_err());
        assert!(serde_json::from_str::<Resolution>("0").is_err());
        let r: Resolution = serde_json::from_str("64").unwrap();
        assert_eq!(r.segments(), 64);
    }

    #[test]
    fn grid_coord_hits_both_endpoints() {
        for s in [1, 3, 7, 128, 1000] {
            assert_eq!(grid_coord(-0.1, 0.7, 0, s), -0.1);
            assert_eq!(grid_coord(-0.1, 0.7, s, s), 0.7);
        }
    }
}
