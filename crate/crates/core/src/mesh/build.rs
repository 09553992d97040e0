use super::{build_axes, compute_normals_with, map_color, AxisMetadata, ColorMap, HeightField, Rgb, ZLimits};
use crate::expr::Expression;
use crate::Execution;

/// Triangle mesh of the visible part of a surface.
///
/// Triangles wind counter-clockwise seen from `+z`. Vertices are only emitted
/// for defined samples inside the z limits, and a triangle survives only when
/// all three of its corners do.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    positions: Vec<[f64; 3]>,
    normals: Vec<[f64; 3]>,
    colors: Vec<Rgb>,
    indices: Vec<[u32; 3]>,
    axes: AxisMetadata,
    label: String,
}

impl SurfaceMesh {
    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn normals(&self) -> &[[f64; 3]] {
        &self.normals
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    pub fn indices(&self) -> &[[u32; 3]] {
        &self.indices
    }

    pub fn axes(&self) -> &AxisMetadata {
        &self.axes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.indices.len()
    }

    /// No triangle survived clipping: there is no surface in range.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn build_mesh(expr: &Expression, field: &HeightField, z_limits: ZLimits, cmap: &ColorMap) -> SurfaceMesh {
    build_mesh_with(expr, field, z_limits, cmap, Execution::default())
}

pub fn build_mesh_with(
    expr: &Expression,
    field: &HeightField,
    z_limits: ZLimits,
    cmap: &ColorMap,
    exec: Execution,
) -> SurfaceMesh {
    let n = field.samples();
    let s = field.segments();
    let grid_normals = compute_normals_with(field, exec);

    // Dense reindexing of the surviving samples.
    let mut remap = vec![u32::MAX; n * n];
    let mut kept = 0u32;
    for (slot, v) in remap.iter_mut().zip(field.values()) {
        if v.value().is_some_and(|z| z_limits.contains(z)) {
            *slot = kept;
            kept += 1;
        }
    }

    let rows = exec.map_range(n, |i| {
        let x = field.x(i);
        let mut row = Vec::new();
        for j in 0..n {
            let k = i * n + j;
            if remap[k] == u32::MAX {
                continue;
            }
            let z = field.height(i, j).unwrap_or_default();
            row.push((
                [x, field.y(j), z],
                grid_normals[k],
                map_color(cmap, z_limits.normalize(z)),
            ));
        }
        row
    });
    let mut positions = Vec::with_capacity(kept as usize);
    let mut normals = Vec::with_capacity(kept as usize);
    let mut colors = Vec::with_capacity(kept as usize);
    for (p, nrm, c) in rows.into_iter().flatten() {
        positions.push(p);
        normals.push(nrm);
        colors.push(c);
    }

    let strips = exec.map_range(s, |i| {
        let mut tris = Vec::new();
        for j in 0..s {
            let a = remap[i * n + j];
            let b = remap[(i + 1) * n + j];
            let c = remap[(i + 1) * n + j + 1];
            let d = remap[i * n + j + 1];
            // Split along (i, j) -> (i + 1, j + 1).
            if a != u32::MAX && b != u32::MAX && c != u32::MAX {
                tris.push([a, b, c]);
            }
            if a != u32::MAX && c != u32::MAX && d != u32::MAX {
                tris.push([a, c, d]);
            }
        }
        tris
    });
    let indices = strips.concat();

    SurfaceMesh {
        positions,
        normals,
        colors,
        indices,
        axes: build_axes(field.domain(), z_limits),
        label: expr.canonical_text(),
    }
}
