//! Pan/zoom/reset state machine for the plotted axes.
//!
//! Each axis is stored as a center and a span so that panning never alters
//! a span and zoom clamping is exact. Transitions are pure: they take a state
//! by reference and return the next one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Expression, Variable};
use crate::mesh::{Domain, MeshError, Resolution, ZLimits};

/// Fraction of the current span moved per pan step.
pub const PAN_STEP_FRACTION: f64 = 0.1;
/// Span multiplier per zoom click.
pub const ZOOM_FACTOR: f64 = 1.25;
pub const MIN_SPAN: f64 = 1e-3;
pub const MAX_SPAN: f64 = 1e6;
/// Largest magnitude accepted for a single pan step count.
pub const MAX_PAN_STEPS: i32 = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("pan steps ({dx_steps}, {dy_steps}) outside [-{MAX_PAN_STEPS}, {MAX_PAN_STEPS}]")]
    StepsOutOfRange { dx_steps: i32, dy_steps: i32 },
    #[error("axis span {0} outside [{MIN_SPAN}, {MAX_SPAN}]")]
    SpanOutOfRange(f64),
    #[error("equation uses variables other than x and y")]
    ForeignVariables,
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoomDirection {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisTarget {
    InputDomain,
    ZAxis,
}

/// A single manipulation request.
///
/// JSON form: `{"op":"pan","dx_steps":1,"dy_steps":0}`,
/// `{"op":"zoom","direction":"in","target":"input_domain"}`, `{"op":"reset"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ViewCommand {
    Pan {
        dx_steps: i32,
        dy_steps: i32,
    },
    Zoom {
        direction: ZoomDirection,
        target: AxisTarget,
    },
    Reset,
}

impl ViewCommand {
    pub fn validate(&self) -> Result<(), StateError> {
        match *self {
            ViewCommand::Pan { dx_steps, dy_steps }
                if dx_steps.abs() > MAX_PAN_STEPS || dy_steps.abs() > MAX_PAN_STEPS =>
            {
                Err(StateError::StepsOutOfRange { dx_steps, dy_steps })
            }
            _ => Ok(()),
        }
    }
}

/// One axis as `center ± span / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    center: f64,
    span: f64,
}

impl AxisRange {
    fn from_bounds(min: f64, max: f64) -> Result<Self, StateError> {
        let span = max - min;
        if !(MIN_SPAN..=MAX_SPAN).contains(&span) {
            return Err(StateError::SpanOutOfRange(span));
        }
        Ok(AxisRange {
            center: min + span / 2.0,
            span,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn min(&self) -> f64 {
        self.center - self.span / 2.0
    }

    pub fn max(&self) -> f64 {
        self.center + self.span / 2.0
    }

    fn pan(self, steps: i32) -> Self {
        let center = self.center + steps as f64 * PAN_STEP_FRACTION * self.span;
        AxisRange { center, ..self }.or(self)
    }

    fn zoom(self, direction: ZoomDirection) -> Self {
        let span = match direction {
            ZoomDirection::In => self.span / ZOOM_FACTOR,
            ZoomDirection::Out => self.span * ZOOM_FACTOR,
        };
        AxisRange {
            span: span.clamp(MIN_SPAN, MAX_SPAN),
            ..self
        }
        .or(self)
    }

    /// `self` if its bounds are finite and distinct in floating point,
    /// otherwise `fallback`. Far from the origin a tiny span can collapse.
    fn or(self, fallback: Self) -> Self {
        let (min, max) = (self.min(), self.max());
        if min.is_finite() && max.is_finite() && min < max {
            self
        } else {
            fallback
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axes {
    pub x: AxisRange,
    pub y: AxisRange,
    pub z: AxisRange,
    pub resolution: Resolution,
}

impl Axes {
    pub fn new(domain: Domain, z_limits: ZLimits, resolution: Resolution) -> Result<Self, StateError> {
        Ok(Axes {
            x: AxisRange::from_bounds(domain.x_min(), domain.x_max())?,
            y: AxisRange::from_bounds(domain.y_min(), domain.y_max())?,
            z: AxisRange::from_bounds(z_limits.z_min(), z_limits.z_max())?,
            resolution,
        })
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.x.min(), self.x.max(), self.y.min(), self.y.max())
            .expect("spans are clamped to at least MIN_SPAN")
    }

    pub fn z_limits(&self) -> ZLimits {
        ZLimits::new(self.z.min(), self.z.max()).expect("spans are clamped to at least MIN_SPAN")
    }
}

impl Default for Axes {
    fn default() -> Self {
        Axes::new(Domain::default(), ZLimits::default(), Resolution::default())
            .expect("default axes are valid")
    }
}

/// Current axes, the defaults they reset to, and the plotted equation.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphState {
    axes: Axes,
    defaults: Axes,
    equation: Option<Expression>,
}

impl GraphState {
    pub fn new(domain: Domain, z_limits: ZLimits, resolution: Resolution) -> Result<Self, StateError> {
        let axes = Axes::new(domain, z_limits, resolution)?;
        Ok(GraphState {
            axes,
            defaults: axes,
            equation: None,
        })
    }

    pub fn axes(&self) -> &Axes {
        &self.axes
    }

    pub fn defaults(&self) -> &Axes {
        &self.defaults
    }

    pub fn domain(&self) -> Domain {
        self.axes.domain()
    }

    pub fn z_limits(&self) -> ZLimits {
        self.axes.z_limits()
    }

    pub fn resolution(&self) -> Resolution {
        self.axes.resolution
    }

    pub fn equation(&self) -> Option<&Expression> {
        self.equation.as_ref()
    }

    /// Translates the input domain by whole steps of 10% of its span.
    pub fn pan(&self, dx_steps: i32, dy_steps: i32) -> GraphState {
        let mut next = self.clone();
        next.axes.x = self.axes.x.pan(dx_steps);
        next.axes.y = self.axes.y.pan(dy_steps);
        next
    }

    /// Scales the targeted spans about their midpoints by `1 / 1.25` (in) or
    /// `1.25` (out), clamped to `[MIN_SPAN, MAX_SPAN]`.
    pub fn zoom(&self, direction: ZoomDirection, target: AxisTarget) -> GraphState {
        let mut next = self.clone();
        match target {
            AxisTarget::InputDomain => {
                next.axes.x = self.axes.x.zoom(direction);
                next.axes.y = self.axes.y.zoom(direction);
            }
            AxisTarget::ZAxis => next.axes.z = self.axes.z.zoom(direction),
        }
        next
    }

    /// Restores default axes and resolution; keeps the equation.
    pub fn reset(&self) -> GraphState {
        GraphState {
            axes: self.defaults,
            ..self.clone()
        }
    }

    pub fn set_equation(&self, expr: Expression) -> Result<GraphState, StateError> {
        if !expr
            .free_variables()
            .iter()
            .all(|v| matches!(v, Variable::X | Variable::Y))
        {
            return Err(StateError::ForeignVariables);
        }
        Ok(GraphState {
            equation: Some(expr),
            ..self.clone()
        })
    }

    pub fn apply_command(&self, cmd: ViewCommand) -> Result<GraphState, StateError> {
        cmd.validate()?;
        Ok(match cmd {
            ViewCommand::Pan { dx_steps, dy_steps } => self.pan(dx_steps, dy_steps),
            ViewCommand::Zoom { direction, target } => self.zoom(direction, target),
            ViewCommand::Reset => self.reset(),
        })
    }

    /// Swaps the roles of the x and y axes (current and default).
    pub fn transposed(&self) -> GraphState {
        let swap = |a: Axes| Axes { x: a.y, y: a.x, ..a };
        GraphState {
            axes: swap(self.axes),
            defaults: swap(self.defaults),
            equation: self.equation.clone(),
        }
    }
}

impl Default for GraphState {
    fn default() -> Self {
        let axes = Axes::default();
        GraphState {
            axes,
            defaults: axes,
            equation: None,
        }
    }
}
