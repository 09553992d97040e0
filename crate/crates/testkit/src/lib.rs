//! Independent reference implementations used to check plane-breaker.
//!
//! Nothing here calls into the evaluator, mesher or OBJ writer under test;
//! only the public data types (syntax tree, domain, limits) are shared.

use std::collections::BTreeSet;

use plane_breaker_core::expr::{BinaryOp, Constant, Expression, Function, UnaryOp, Variable};
use plane_breaker_core::graphstate::{AxisTarget, ViewCommand, ZoomDirection};
use plane_breaker_core::mesh::{Domain, ZLimits};
use rand::Rng;

pub mod replay;

pub const PARSER_CORPUS: &str = include_str!("../data/parser_corpus.tsv");
pub const PARSER_ERRORS: &str = include_str!("../data/parser_errors.tsv");

fn data_rows(text: &str) -> impl Iterator<Item = (&str, &str)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
}

/// `(source, expected s-expression)` pairs from the golden corpus.
pub fn parser_corpus() -> Vec<(&'static str, &'static str)> {
    data_rows(PARSER_CORPUS).collect()
}

/// `(source, error byte offset)` pairs.
pub fn parser_errors() -> Vec<(&'static str, usize)> {
    data_rows(PARSER_ERRORS)
        .map(|(s, p)| (s, p.trim().parse().expect("offset")))
        .collect()
}

/// Prefix form of a tree, e.g. `(add (sin x) 3)`.
pub fn sexpr(e: &Expression) -> String {
    match e {
        Expression::Literal(v) => format!("{v}"),
        Expression::Variable(Variable::X) => "x".into(),
        Expression::Variable(Variable::Y) => "y".into(),
        Expression::Constant(Constant::Pi) => "pi".into(),
        Expression::Constant(Constant::E) => "e".into(),
        Expression::Unary(UnaryOp::Neg, c) => format!("(neg {})", sexpr(c)),
        Expression::Binary(op, l, r) => {
            let name = match op {
                BinaryOp::Add => "add",
                BinaryOp::Sub => "sub",
                BinaryOp::Mul => "mul",
                BinaryOp::Div => "div",
                BinaryOp::Pow => "pow",
            };
            format!("({name} {} {})", sexpr(l), sexpr(r))
        }
        Expression::Call(f, a) => format!("({} {})", function_name(*f), sexpr(a)),
    }
}

fn function_name(f: Function) -> &'static str {
    match f {
        Function::Sin => "sin",
        Function::Cos => "cos",
        Function::Tan => "tan",
        Function::Asin => "asin",
        Function::Acos => "acos",
        Function::Atan => "atan",
        Function::Exp => "exp",
        Function::Ln => "ln",
        Function::Log => "log",
        Function::Sqrt => "sqrt",
        Function::Abs => "abs",
    }
}

/// Direct recursive evaluation with explicit domain checks.
///
/// `None` means undefined.
pub fn oracle_eval(e: &Expression, x: f64, y: f64) -> Option<f64> {
    let v = match e {
        Expression::Literal(v) => *v,
        Expression::Variable(Variable::X) => x,
        Expression::Variable(Variable::Y) => y,
        Expression::Constant(Constant::Pi) => std::f64::consts::PI,
        Expression::Constant(Constant::E) => std::f64::consts::E,
        Expression::Unary(UnaryOp::Neg, c) => -oracle_eval(c, x, y)?,
        Expression::Binary(op, l, r) => {
            let a = oracle_eval(l, x, y)?;
            let b = oracle_eval(r, x, y)?;
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b == 0.0 {
                        return None;
                    }
                    a / b
                }
                BinaryOp::Pow => {
                    if a < 0.0 && b != b.trunc() {
                        return None;
                    }
                    if a == 0.0 && b < 0.0 {
                        return None;
                    }
                    a.powf(b)
                }
            }
        }
        Expression::Call(f, arg) => {
            let a = oracle_eval(arg, x, y)?;
            match f {
                Function::Sin => a.sin(),
                Function::Cos => a.cos(),
                Function::Tan => a.tan(),
                Function::Asin | Function::Acos if !(-1.0..=1.0).contains(&a) => return None,
                Function::Asin => a.asin(),
                Function::Acos => a.acos(),
                Function::Atan => a.atan(),
                Function::Exp => a.exp(),
                Function::Ln | Function::Log if a <= 0.0 => return None,
                Function::Ln => a.ln(),
                Function::Log => a.log10(),
                Function::Sqrt if a < 0.0 => return None,
                Function::Sqrt => a.sqrt(),
                Function::Abs => a.abs(),
            }
        }
    };
    v.is_finite().then_some(v)
}

/// Agreement within `tol` relative error (exact match required near zero
/// only up to `tol` absolute).
pub fn close_relative(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Fixed corpus of evaluator test expressions (sources).
pub fn eval_corpus() -> Vec<&'static str> {
    let mut v: Vec<&str> = parser_corpus().into_iter().map(|(s, _)| s).collect();
    v.extend([
        "sin(x) * exp(-y^2)",
        "log(abs(x y) + 1)",
        "acos(x / 5)",
        "asin(y / 3)",
        "(x - y)^3 / (1 + x^2)",
        "sqrt(abs(x)) - sqrt(abs(y))",
        "x^y",
        "tan(x) + tan(y)",
    ]);
    v
}

/// Random syntax tree of at most `depth` levels, restricted to shapes the
/// parser can produce (non-negative literals).
pub fn random_expression<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Expression {
    if depth == 0 || rng.random_bool(0.25) {
        return random_leaf(rng);
    }
    match rng.random_range(0..10) {
        0 => Expression::Unary(UnaryOp::Neg, Box::new(random_expression(rng, depth - 1))),
        1 | 2 => {
            let f = Function::ALL[rng.random_range(0..Function::ALL.len())];
            Expression::Call(f, Box::new(random_expression(rng, depth - 1)))
        }
        _ => {
            let op = [
                BinaryOp::Add,
                BinaryOp::Sub,
                BinaryOp::Mul,
                BinaryOp::Div,
                BinaryOp::Pow,
            ][rng.random_range(0..5)];
            Expression::Binary(
                op,
                Box::new(random_expression(rng, depth - 1)),
                Box::new(random_expression(rng, depth - 1)),
            )
        }
    }
}

fn random_leaf<R: Rng + ?Sized>(rng: &mut R) -> Expression {
    match rng.random_range(0..8) {
        0 | 1 => Expression::Variable(Variable::X),
        2 | 3 => Expression::Variable(Variable::Y),
        4 => Expression::Constant(if rng.random_bool(0.5) {
            Constant::Pi
        } else {
            Constant::E
        }),
        5 => Expression::Literal(rng.random_range(0..20) as f64),
        6 => Expression::Literal(rng.random_range(0.0..100.0)),
        _ => {
            // Magnitudes from 1e-9 to 1e12 exercise literal rendering.
            let exp = rng.random_range(-9..=12);
            Expression::Literal(rng.random_range(1.0..10.0) * 10f64.powi(exp))
        }
    }
}

pub fn random_command<R: Rng + ?Sized>(rng: &mut R) -> ViewCommand {
    let direction = if rng.random_bool(0.5) {
        ZoomDirection::In
    } else {
        ZoomDirection::Out
    };
    match rng.random_range(0..10) {
        0..=3 => ViewCommand::Pan {
            dx_steps: rng.random_range(-100..=100),
            dy_steps: rng.random_range(-100..=100),
        },
        4..=6 => ViewCommand::Zoom {
            direction,
            target: AxisTarget::InputDomain,
        },
        7 | 8 => ViewCommand::Zoom {
            direction,
            target: AxisTarget::ZAxis,
        },
        _ => ViewCommand::Reset,
    }
}

/// Grid coordinate `i` of `segments` cells over `[min, max]`, last one exact.
pub fn reference_coord(min: f64, max: f64, i: usize, segments: usize) -> f64 {
    if i == segments {
        max
    } else {
        min + i as f64 * (max - min) / segments as f64
    }
}

/// Grid index pair of one mesh vertex.
pub type GridVertex = (usize, usize);

/// Brute-force mesher: every cell, both triangles split on the
/// `(i, j) -> (i + 1, j + 1)` diagonal, kept when all three corners evaluate
/// to a value within the limits. Triangles are rotated so the smallest grid
/// vertex comes first (winding preserved).
pub fn reference_triangles(
    e: &Expression,
    domain: Domain,
    segments: usize,
    z: ZLimits,
) -> BTreeSet<[GridVertex; 3]> {
    let visible = |i: usize, j: usize| {
        let x = reference_coord(domain.x_min(), domain.x_max(), i, segments);
        let y = reference_coord(domain.y_min(), domain.y_max(), j, segments);
        oracle_eval(e, x, y).is_some_and(|v| z.z_min() <= v && v <= z.z_max())
    };
    let mut out = BTreeSet::new();
    for i in 0..segments {
        for j in 0..segments {
            let (a, b, c, d) = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1));
            for tri in [[a, b, c], [a, c, d]] {
                if tri.iter().all(|&(p, q)| visible(p, q)) {
                    out.insert(canonical_rotation(tri));
                }
            }
        }
    }
    out
}

pub fn canonical_rotation(t: [GridVertex; 3]) -> [GridVertex; 3] {
    let k = (0..3).min_by_key(|&k| t[k]).unwrap_or(0);
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

/// Maps a mesh position back to its grid index by exact coordinate match.
pub fn grid_index_of(p: [f64; 3], domain: Domain, segments: usize) -> Option<GridVertex> {
    let find =
        |v: f64, min: f64, max: f64| (0..=segments).find(|&k| reference_coord(min, max, k, segments) == v);
    Some((
        find(p[0], domain.x_min(), domain.x_max())?,
        find(p[1], domain.y_min(), domain.y_max())?,
    ))
}

/// Minimal OBJ reader for `v x y z [r g b]`, `vn` and `f a//a ...` lines.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ObjData {
    pub positions: Vec<[f64; 3]>,
    pub colors: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

pub fn read_obj(text: &str) -> Result<ObjData, String> {
    let mut out = ObjData::default();
    for (n, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let nums = |parts: std::str::SplitWhitespace<'_>| -> Result<Vec<f64>, String> {
            parts
                .map(|p| p.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
                .collect()
        };
        match parts.next() {
            Some("v") => {
                let v = nums(parts)?;
                if v.len() != 3 && v.len() != 6 {
                    return Err(format!("line {}: bad vertex", n + 1));
                }
                out.positions.push([v[0], v[1], v[2]]);
                if v.len() == 6 {
                    out.colors.push([v[3], v[4], v[5]]);
                }
            }
            Some("vn") => {
                let v = nums(parts)?;
                if v.len() != 3 {
                    return Err(format!("line {}: bad normal", n + 1));
                }
                out.normals.push([v[0], v[1], v[2]]);
            }
            Some("f") => {
                let idx: Result<Vec<usize>, String> = parts
                    .map(|p| {
                        let (vi, ni) = p.split_once("//").ok_or(format!("line {}: face", n + 1))?;
                        if vi != ni {
                            return Err(format!("line {}: mismatched normal index", n + 1));
                        }
                        vi.parse::<usize>().map_err(|e| e.to_string())
                    })
                    .collect();
                let idx = idx?;
                if idx.len() != 3 || idx.contains(&0) {
                    return Err(format!("line {}: bad face", n + 1));
                }
                out.faces.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
            }
            Some(t) if t.starts_with('#') => {}
            None => {}
            Some(other) => return Err(format!("line {}: unknown record {other}", n + 1)),
        }
    }
    Ok(out)
}

/// Angle in radians between two (not necessarily unit) vectors.
pub fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    cn.atan2(dot)
}
