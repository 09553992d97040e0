use super::{grid_coord, Domain, MeshError, Resolution};
use crate::expr::{EvalResult, Expression, Program};
use crate::Execution;

/// Samples of an expression on a `(segments + 1)²` grid.
///
/// Storage is row-major with `x` as the row index: sample `(i, j)` lives at
/// `i * samples + j` and holds `f(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightField {
    domain: Domain,
    resolution: Resolution,
    values: Vec<EvalResult>,
}

impl HeightField {
    /// Wraps precomputed samples; `values` must have `samples²` entries.
    pub fn from_values(
        domain: Domain,
        resolution: Resolution,
        values: Vec<EvalResult>,
    ) -> Result<Self, MeshError> {
        let n = resolution.samples();
        if values.len() != n * n {
            return Err(MeshError::SampleCount {
                expected: n * n,
                actual: values.len(),
            });
        }
        Ok(HeightField {
            domain,
            resolution,
            values,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn segments(&self) -> usize {
        self.resolution.segments() as usize
    }

    /// Samples per axis.
    pub fn samples(&self) -> usize {
        self.resolution.samples()
    }

    pub fn values(&self) -> &[EvalResult] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> EvalResult {
        self.values[i * self.samples() + j]
    }

    pub fn height(&self, i: usize, j: usize) -> Option<f64> {
        self.get(i, j).value()
    }

    pub fn x(&self, i: usize) -> f64 {
        grid_coord(self.domain.x_min(), self.domain.x_max(), i, self.segments())
    }

    pub fn y(&self, j: usize) -> f64 {
        grid_coord(self.domain.y_min(), self.domain.y_max(), j, self.segments())
    }
}

pub fn sample_grid(expr: &Expression, domain: Domain, resolution: Resolution) -> HeightField {
    sample_grid_with(expr, domain, resolution, Execution::default())
}

pub fn sample_grid_with(
    expr: &Expression,
    domain: Domain,
    resolution: Resolution,
    exec: Execution,
) -> HeightField {
    let n = resolution.samples();
    let s = n - 1;
    let program = Program::compile(expr);
    let ys: Vec<f64> = (0..n)
        .map(|j| grid_coord(domain.y_min(), domain.y_max(), j, s))
        .collect();

    let mut values = vec![EvalResult::Undefined; n * n];
    exec.for_each_row(&mut values, n, |i, row| {
        let x = grid_coord(domain.x_min(), domain.x_max(), i, s);
        let mut stack = program.stack();
        for (slot, &y) in row.iter_mut().zip(&ys) {
            *slot = program.eval_with(&mut stack, x, y);
        }
    });

    HeightField {
        domain,
        resolution,
        values,
    }
}

pub fn compute_normals(field: &HeightField) -> Vec<[f64; 3]> {
    compute_normals_with(field, Execution::default())
}

/// Per-sample unit normals of the height surface, indexed like the field.
///
/// Partials are central differences where both neighbors are defined,
/// one-sided where only one is, and zero where neither is. Undefined samples
/// get `(0, 0, 1)`.
pub fn compute_normals_with(field: &HeightField, exec: Execution) -> Vec<[f64; 3]> {
    let n = field.samples();
    let xs: Vec<f64> = (0..n).map(|i| field.x(i)).collect();
    let ys: Vec<f64> = (0..n).map(|j| field.y(j)).collect();

    let mut normals = vec![[0.0, 0.0, 1.0]; n * n];
    exec.for_each_row(&mut normals, n, |i, row| {
        for (j, out) in row.iter_mut().enumerate() {
            let Some(z) = field.height(i, j) else {
                continue;
            };
            let dzdx = partial(
                z,
                xs[i],
                (i > 0).then(|| (field.height(i - 1, j), xs[i - 1])),
                (i + 1 < n).then(|| (field.height(i + 1, j), xs[i + 1])),
            );
            let dzdy = partial(
                z,
                ys[j],
                (j > 0).then(|| (field.height(i, j - 1), ys[j - 1])),
                (j + 1 < n).then(|| (field.height(i, j + 1), ys[j + 1])),
            );
            *out = normalize([-dzdx, -dzdy, 1.0]);
        }
    });
    normals
}

/// Finite-difference slope at `(t, z)` given the optional neighbors before
/// and after it along one axis.
fn partial(z: f64, t: f64, before: Option<(Option<f64>, f64)>, after: Option<(Option<f64>, f64)>) -> f64 {
    let before = before.and_then(|(z, t)| z.map(|z| (z, t)));
    let after = after.and_then(|(z, t)| z.map(|z| (z, t)));
    let slope = match (before, after) {
        (Some((z0, t0)), Some((z1, t1))) => (z1 - z0) / (t1 - t0),
        (None, Some((z1, t1))) => (z1 - z) / (t1 - t),
        (Some((z0, t0)), None) => (z - z0) / (t - t0),
        (None, None) => 0.0,
    };
    // Steep walls between huge finite samples can overflow the slope.
    if slope.is_finite() {
        slope
    } else {
        0.0
    }
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    // Scale first so the squared length cannot overflow.
    let m = v.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let s = [v[0] / m, v[1] / m, v[2] / m];
    let len = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    [s[0] / len, s[1] / len, s[2] / len]
}
