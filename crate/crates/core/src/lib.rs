//! Core of the plane-breaker surface plotter.
//!
//! * [`expr`] parses and evaluates `z = f(x, y)` equations.
//! * [`mesh`] samples an equation over a domain and builds a colored,
//!   height-clipped triangle mesh with axis metadata and OBJ export.
//! * [`graphstate`] is the pan/zoom/reset state machine for the plotted axes.
//!
//! Grid work runs on rayon when the `parallel` feature is enabled (the
//! default); [`Execution`] selects the strategy explicitly.

pub mod expr;
pub mod graphstate;
pub mod mesh;
mod par;

pub use par::Execution;

pub use expr::{evaluate, parse, EvalResult, Expression, ParseError};
pub use graphstate::{GraphState, ViewCommand};
pub use mesh::{ColorMap, Domain, HeightField, Resolution, SurfaceMesh, ZLimits};
