use std::collections::BTreeSet;

use plane_breaker_core::expr::parse;
use plane_breaker_core::graphstate::{AxisTarget, GraphState, ZoomDirection};
use plane_breaker_core::mesh::{
    build_axes, build_mesh, compute_normals, export_obj, sample_grid, ColorMap, Domain, Resolution,
    SurfaceMesh, ZLimits,
};
use plane_breaker_testkit::{
    angle_between, canonical_rotation, eval_corpus, grid_index_of, read_obj, reference_triangles, GridVertex,
};
use proptest::prelude::*;

fn mesh_for(src: &str, domain: Domain, segments: u32, z: ZLimits) -> SurfaceMesh {
    let e = parse(src).unwrap();
    let f = sample_grid(&e, domain, Resolution::new(segments).unwrap());
    build_mesh(&e, &f, z, &ColorMap::default())
}

fn mesh_triangles(m: &SurfaceMesh, domain: Domain, segments: usize) -> BTreeSet<[GridVertex; 3]> {
    let grid: Vec<GridVertex> = m
        .positions()
        .iter()
        .map(|&p| grid_index_of(p, domain, segments).expect("vertex on grid"))
        .collect();
    m.indices()
        .iter()
        .map(|t| canonical_rotation([grid[t[0] as usize], grid[t[1] as usize], grid[t[2] as usize]]))
        .collect()
}

#[test]
fn matches_reference_mesher_on_corpus() {
    let domains = [
        Domain::default(),
        Domain::square(-1.0, 1.0).unwrap(),
        Domain::new(-0.3, 2.9, -4.1, 0.7).unwrap(),
    ];
    let limits = [ZLimits::default(), ZLimits::new(-0.5, 1.5).unwrap()];
    for src in eval_corpus() {
        let e = parse(src).unwrap();
        for segments in 1..=8usize {
            for &d in &domains {
                for &z in &limits {
                    let m = mesh_for(src, d, segments as u32, z);
                    let want = reference_triangles(&e, d, segments, z);
                    let got = mesh_triangles(&m, d, segments);
                    assert_eq!(got.len(), m.triangle_count(), "duplicate triangles for {src}");
                    assert_eq!(got, want, "{src} segments={segments} {d:?} {z:?}");
                }
            }
        }
    }
}

#[test]
fn singular_lines_leave_holes() {
    let d = Domain::square(-1.0, 1.0).unwrap();
    let e = parse("1/(x*y)").unwrap();
    for segments in [2usize, 4, 6, 8] {
        let z = ZLimits::new(-1e12, 1e12).unwrap();
        let m = mesh_for("1/(x*y)", d, segments as u32, z);
        let want = reference_triangles(&e, d, segments, z);
        assert_eq!(m.triangle_count(), want.len());
        assert!(m.triangle_count() < 2 * segments * segments);
    }
    // Odd segment counts never sample the axes, so nothing is missing.
    let m = mesh_for("1/(x*y)", d, 5, ZLimits::new(-1e12, 1e12).unwrap());
    assert_eq!(m.triangle_count(), 50);
}

#[test]
fn grid_fidelity_for_total_functions() {
    for src in [
        "sin(x) + cos(y)",
        "3sin(x) + cos(y)",
        "x y / 10",
        "exp(-(x^2 + y^2))",
        "atan(x - y)",
    ] {
        for s in [1usize, 2, 8, 31] {
            let m = mesh_for(
                src,
                Domain::default(),
                s as u32,
                ZLimits::new(-50.0, 50.0).unwrap(),
            );
            assert_eq!(m.vertex_count(), (s + 1) * (s + 1), "{src}");
            assert_eq!(m.triangle_count(), 2 * s * s, "{src}");
        }
    }
}

#[test]
fn plane_normals_match_triangle_cross_product() {
    for (src, want) in [("x", [-1.0, 0.0, 1.0]), ("y", [0.0, -1.0, 1.0])] {
        let m = mesh_for(
            src,
            Domain::square(0.0, 1.0).unwrap(),
            1,
            ZLimits::new(-2.0, 2.0).unwrap(),
        );
        let p = m.positions();
        for t in m.indices() {
            let (a, b, c) = (p[t[0] as usize], p[t[1] as usize], p[t[2] as usize]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let face = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            assert!(angle_between(face, want) < 1e-12);
        }
        for n in m.normals() {
            assert!(angle_between(*n, want) < 1e-12, "{src}: {n:?}");
        }
    }
}

#[test]
fn paraboloid_normals_converge() {
    let e = parse("x^2 + y^2").unwrap();
    let f = sample_grid(
        &e,
        Domain::square(-1.0, 1.0).unwrap(),
        Resolution::new(256).unwrap(),
    );
    let normals = compute_normals(&f);
    let n = f.samples();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let (x, y) = (f.x(i), f.y(j));
            let err = angle_between(normals[i * n + j], [-2.0 * x, -2.0 * y, 1.0]);
            worst = worst.max(err);
        }
    }
    assert!(worst <= 1e-3, "max angular error {worst}");
}

#[test]
fn normals_are_unit() {
    for src in eval_corpus() {
        let m = mesh_for(src, Domain::default(), 12, ZLimits::new(-1e9, 1e9).unwrap());
        for n in m.normals() {
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            assert!((len - 1.0).abs() <= 1e-6, "{src}: {n:?}");
        }
    }
}

#[test]
fn obj_round_trip() {
    let m = mesh_for(
        "z = sin(x) + cos(y)",
        Domain::default(),
        16,
        ZLimits::new(-1.5, 1.5).unwrap(),
    );
    let obj = read_obj(&export_obj(&m)).unwrap();
    assert_eq!(obj.positions.len(), m.vertex_count());
    assert_eq!(obj.normals.len(), m.vertex_count());
    assert_eq!(obj.colors.len(), m.vertex_count());
    assert_eq!(obj.faces.len(), m.triangle_count());
    for (a, b) in obj.positions.iter().zip(m.positions()) {
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-6 + 1e-12);
        }
    }
    for (f, t) in obj.faces.iter().zip(m.indices()) {
        assert_eq!(f.map(|v| v as u32), *t);
    }
}

#[test]
fn axes_follow_zoom() {
    let s = GraphState::default().zoom(ZoomDirection::In, AxisTarget::InputDomain);
    let axes = build_axes(s.domain(), s.z_limits());
    let ticks: Vec<f64> = axes.x.ticks.iter().map(|t| t.value).collect();
    assert_eq!(ticks, vec![-4.0, -2.0, 0.0, 2.0, 4.0]);
}

#[test]
fn label_follows_equation() {
    let s = GraphState::default()
        .set_equation(parse("sin(x)").unwrap())
        .unwrap()
        .set_equation(parse("3sin(x) + cos(y)").unwrap())
        .unwrap();
    let e = s.equation().unwrap();
    let f = sample_grid(e, s.domain(), Resolution::new(4).unwrap());
    let m = build_mesh(e, &f, s.z_limits(), &ColorMap::default());
    assert_eq!(m.label(), "z = ((3 * sin(x)) + cos(y))");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn clipping_is_sound(
        src_idx in 0usize..68,
        lo in -6.0f64..3.0,
        width in 0.01f64..8.0,
        segments in 1u32..24,
    ) {
        let corpus = eval_corpus();
        let src = corpus[src_idx % corpus.len()];
        let z = ZLimits::new(lo, lo + width).unwrap();
        let m = mesh_for(src, Domain::default(), segments, z);
        for p in m.positions() {
            prop_assert!(z.z_min() <= p[2] && p[2] <= z.z_max());
        }
        for t in m.indices() {
            prop_assert!(t.iter().all(|&k| (k as usize) < m.vertex_count()));
        }
        let cmap = ColorMap::default();
        for (p, c) in m.positions().iter().zip(m.colors()) {
            if p[2] == z.z_min() {
                prop_assert_eq!(*c, cmap.stops()[0].rgb);
            }
            if p[2] == z.z_max() {
                prop_assert_eq!(*c, cmap.stops()[cmap.stops().len() - 1].rgb);
            }
        }
    }
}
