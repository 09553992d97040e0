use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::MeshError;

pub type Rgb = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorStop {
    pub t: f64,
    pub rgb: Rgb,
}

/// Piecewise-linear gradient over `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ColorStop>", into = "Vec<ColorStop>")]
pub struct ColorMap {
    stops: Vec<ColorStop>,
}

/// Viridis sampled at quarters.
const VIRIDIS: [ColorStop; 5] = [
    ColorStop {
        t: 0.0,
        rgb: [0.267004, 0.004874, 0.329415],
    },
    ColorStop {
        t: 0.25,
        rgb: [0.229739, 0.322361, 0.545706],
    },
    ColorStop {
        t: 0.5,
        rgb: [0.127568, 0.566949, 0.550556],
    },
    ColorStop {
        t: 0.75,
        rgb: [0.369214, 0.788888, 0.382914],
    },
    ColorStop {
        t: 1.0,
        rgb: [0.993248, 0.906157, 0.143936],
    },
];

impl ColorMap {
    pub fn new(stops: Vec<ColorStop>) -> Result<Self, MeshError> {
        let bad = |msg: &str| Err(MeshError::InvalidColorMap(msg.to_string()));
        if stops.len() < 2 {
            return bad("at least two stops are required");
        }
        if stops[0].t != 0.0 || stops[stops.len() - 1].t != 1.0 {
            return bad("the first stop must be at t = 0 and the last at t = 1");
        }
        if stops
            .windows(2)
            .any(|w| w[0].t.partial_cmp(&w[1].t) != Some(std::cmp::Ordering::Less))
        {
            return bad("stop positions must be strictly increasing");
        }
        if stops
            .iter()
            .flat_map(|s| s.rgb)
            .any(|c| !(0.0..=1.0).contains(&c))
        {
            return bad("color components must lie in [0, 1]");
        }
        Ok(ColorMap { stops })
    }

    pub fn viridis() -> Self {
        ColorMap {
            stops: VIRIDIS.to_vec(),
        }
    }

    pub fn stops(&self) -> &[ColorStop] {
        &self.stops
    }

    /// Reads a table of `t r g b` rows. Blank lines and `#` comments are
    /// ignored.
    pub fn parse_table(text: &str) -> Result<Self, MeshError> {
        let mut stops = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
            match fields.as_deref() {
                Ok(&[t, r, g, b]) => stops.push(ColorStop { t, rgb: [r, g, b] }),
                _ => {
                    return Err(MeshError::InvalidColorMap(format!(
                        "line {}: expected four numbers `t r g b`",
                        lineno + 1
                    )))
                }
            }
        }
        ColorMap::new(stops)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for s in &self.stops {
            let _ = writeln!(out, "{} {} {} {}", s.t, s.rgb[0], s.rgb[1], s.rgb[2]);
        }
        out
    }

    pub fn color(&self, t: f64) -> Rgb {
        map_color(self, t)
    }
}

impl Default for ColorMap {
    fn default() -> Self {
        ColorMap::viridis()
    }
}

impl TryFrom<Vec<ColorStop>> for ColorMap {
    type Error = MeshError;

    fn try_from(stops: Vec<ColorStop>) -> Result<Self, Self::Error> {
        ColorMap::new(stops)
    }
}

impl From<ColorMap> for Vec<ColorStop> {
    fn from(c: ColorMap) -> Self {
        c.stops
    }
}

/// Clamps `t` to `[0, 1]` and interpolates between the bracketing stops.
/// NaN maps to the first stop.
pub fn map_color(cmap: &ColorMap, t: f64) -> Rgb {
    let stops = &cmap.stops;
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    // First stop whose position is >= t; stops[0].t == 0 so k >= 1 unless t == 0.
    let k = stops.partition_point(|s| s.t < t);
    if k == 0 {
        return stops[0].rgb;
    }
    let (a, b) = (stops[k - 1], stops[k]);
    let u = (t - a.t) / (b.t - a.t);
    // Written as a blend so u == 0 and u == 1 reproduce the stops exactly.
    std::array::from_fn(|c| a.rgb[c] * (1.0 - u) + b.rgb[c] * u)
}
