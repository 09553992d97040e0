use serde::{Deserialize, Serialize};

use super::{grid_coord, Domain, ZLimits};

pub const TICKS_PER_AXIS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tick {
    pub value: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub ticks: Vec<Tick>,
}

impl Axis {
    fn evenly_spaced(min: f64, max: f64) -> Self {
        let last = TICKS_PER_AXIS - 1;
        let ticks = (0..TICKS_PER_AXIS)
            .map(|k| {
                let value = grid_coord(min, max, k, last);
                Tick {
                    value,
                    label: tick_label(value),
                }
            })
            .collect();
        Axis { min, max, ticks }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisMetadata {
    pub x: Axis,
    pub y: Axis,
    pub z: Axis,
}

/// Five evenly spaced, labeled ticks per axis, endpoints included.
pub fn build_axes(domain: Domain, z_limits: ZLimits) -> AxisMetadata {
    AxisMetadata {
        x: Axis::evenly_spaced(domain.x_min(), domain.x_max()),
        y: Axis::evenly_spaced(domain.y_min(), domain.y_max()),
        z: Axis::evenly_spaced(z_limits.z_min(), z_limits.z_max()),
    }
}

/// Decimal rendering with at most three fractional digits and no trailing
/// zeros.
fn tick_label(value: f64) -> String {
    let s = format!("{value:.3}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(a: &Axis) -> Vec<f64> {
        a.ticks.iter().map(|t| t.value).collect()
    }

    fn labels(a: &Axis) -> Vec<&str> {
        a.ticks.iter().map(|t| t.label.as_str()).collect()
    }

    #[test]
    fn default_domain_ticks() {
        let axes = build_axes(Domain::default(), ZLimits::new(0.0, 1.0).unwrap());
        assert_eq!(values(&axes.x), vec![-5.0, -2.5, 0.0, 2.5, 5.0]);
        assert_eq!(labels(&axes.x), vec!["-5", "-2.5", "0", "2.5", "5"]);
        assert_eq!(values(&axes.z), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(labels(&axes.z), vec!["0", "0.25", "0.5", "0.75", "1"]);
    }

    #[test]
    fn zoomed_domain_ticks() {
        let axes = build_axes(Domain::square(-4.0, 4.0).unwrap(), ZLimits::default());
        assert_eq!(values(&axes.x), vec![-4.0, -2.0, 0.0, 2.0, 4.0]);
        assert_eq!(labels(&axes.y), vec!["-4", "-2", "0", "2", "4"]);
    }

    #[test]
    fn labels_are_rounded() {
        assert_eq!(tick_label(1.0 / 3.0), "0.333");
        assert_eq!(tick_label(-0.0001), "0");
        assert_eq!(tick_label(2.0006), "2.001");
        assert_eq!(tick_label(1234567.0), "1234567");
    }

    #[test]
    fn ticks_sorted_and_inside() {
        let d = Domain::new(-0.37, 0.11, 1e-3, 2e-3).unwrap();
        let axes = build_axes(d, ZLimits::new(-1e6, 3.3).unwrap());
        for a in [&axes.x, &axes.y, &axes.z] {
            assert_eq!(a.ticks.len(), TICKS_PER_AXIS);
            assert_eq!(a.ticks[0].value, a.min);
            assert_eq!(a.ticks[4].value, a.max);
            assert!(a.ticks.windows(2).all(|w| w[0].value < w[1].value));
        }
    }
}
