use std::fmt::Write as _;

use super::SurfaceMesh;

/// Renders the mesh as Wavefront OBJ with per-vertex colors
/// (`v x y z r g b`), vertex normals and 1-based `f a//a b//b c//c` faces.
pub fn export_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::with_capacity(64 + mesh.vertex_count() * 96 + mesh.triangle_count() * 32);
    out.push_str("# plane-breaker surface\n");
    let _ = writeln!(out, "# {}", mesh.label());
    let _ = writeln!(
        out,
        "# vertices {} triangles {}",
        mesh.vertex_count(),
        mesh.triangle_count()
    );

    for (p, c) in mesh.positions().iter().zip(mesh.colors()) {
        let _ = writeln!(
            out,
            "v {:.6} {:.6} {:.6} {:.6} {:.6} {:.6}",
            p[0], p[1], p[2], c[0], c[1], c[2]
        );
    }
    for n in mesh.normals() {
        let _ = writeln!(out, "vn {:.6} {:.6} {:.6}", n[0], n[1], n[2]);
    }
    for t in mesh.indices() {
        let (a, b, c) = (t[0] + 1, t[1] + 1, t[2] + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    out
}
