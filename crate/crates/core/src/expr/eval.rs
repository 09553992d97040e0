use serde::{Deserialize, Serialize};

use super::{BinaryOp, Expression, Function, UnaryOp, Variable};

/// Outcome of evaluating an expression at a point.
///
/// `Value` always holds a finite number: domain errors, division by zero and
/// overflow all collapse to `Undefined`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EvalResult {
    Value(f64),
    Undefined,
}

impl EvalResult {
    fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            EvalResult::Value(v)
        } else {
            EvalResult::Undefined
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            EvalResult::Value(v) => Some(v),
            EvalResult::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, EvalResult::Value(_))
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn apply_function(function: Function, v: f64) -> Option<f64> {
    let out = match function {
        Function::Sin => v.sin(),
        Function::Cos => v.cos(),
        Function::Tan => v.tan(),
        Function::Asin => v.asin(),
        Function::Acos => v.acos(),
        Function::Atan => v.atan(),
        Function::Exp => v.exp(),
        Function::Ln => v.ln(),
        Function::Log => v.log10(),
        Function::Sqrt => v.sqrt(),
        Function::Abs => v.abs(),
    };
    finite(out)
}

fn apply_binary(op: BinaryOp, a: f64, b: f64) -> Option<f64> {
    let out = match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div if b == 0.0 => return None,
        BinaryOp::Div => a / b,
        BinaryOp::Pow if a < 0.0 && b.fract() != 0.0 => return None,
        BinaryOp::Pow => a.powf(b),
    };
    finite(out)
}

/// Evaluates `expr` at `(x, y)` by walking the tree.
pub fn evaluate(expr: &Expression, x: f64, y: f64) -> EvalResult {
    walk(expr, x, y).map_or(EvalResult::Undefined, EvalResult::from_f64)
}

fn walk(expr: &Expression, x: f64, y: f64) -> Option<f64> {
    match expr {
        Expression::Literal(v) => finite(*v),
        Expression::Variable(Variable::X) => finite(x),
        Expression::Variable(Variable::Y) => finite(y),
        Expression::Constant(c) => Some(c.value()),
        Expression::Unary(UnaryOp::Neg, c) => walk(c, x, y).map(|v| -v),
        Expression::Binary(op, l, r) => {
            let a = walk(l, x, y)?;
            let b = walk(r, x, y)?;
            apply_binary(*op, a, b)
        }
        Expression::Call(f, arg) => apply_function(*f, walk(arg, x, y)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Instr {
    Push(f64),
    X,
    Y,
    Neg,
    Binary(BinaryOp),
    Call(Function),
}

/// A flattened postfix form of an [`Expression`] for repeated evaluation.
///
/// Produces bit-identical results to [`evaluate`]; grid sampling uses it to
/// avoid pointer chasing through the tree at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    code: Vec<Instr>,
    max_depth: usize,
}

impl Program {
    pub fn compile(expr: &Expression) -> Self {
        let mut code = Vec::with_capacity(expr.size());
        let max_depth = emit(expr, &mut code, 0);
        Program { code, max_depth }
    }

    /// Scratch stack sized for this program.
    pub fn stack(&self) -> Vec<f64> {
        Vec::with_capacity(self.max_depth)
    }

    pub fn eval(&self, x: f64, y: f64) -> EvalResult {
        self.eval_with(&mut self.stack(), x, y)
    }

    pub fn eval_with(&self, stack: &mut Vec<f64>, x: f64, y: f64) -> EvalResult {
        stack.clear();
        for instr in &self.code {
            let next = match *instr {
                Instr::Push(v) => Some(v),
                Instr::X => Some(x),
                Instr::Y => Some(y),
                Instr::Neg => stack.pop().map(|v| -v),
                Instr::Binary(op) => {
                    let b = stack.pop();
                    let a = stack.pop();
                    match (a, b) {
                        (Some(a), Some(b)) => apply_binary(op, a, b),
                        _ => None,
                    }
                }
                Instr::Call(f) => stack.pop().and_then(|v| apply_function(f, v)),
            };
            match next.and_then(finite) {
                Some(v) => stack.push(v),
                None => return EvalResult::Undefined,
            }
        }
        stack.pop().map_or(EvalResult::Undefined, EvalResult::from_f64)
    }
}

/// Appends postfix code for `expr`; returns the peak stack depth reached.
fn emit(expr: &Expression, code: &mut Vec<Instr>, depth: usize) -> usize {
    match expr {
        Expression::Literal(v) => {
            code.push(Instr::Push(*v));
            depth + 1
        }
        Expression::Constant(c) => {
            code.push(Instr::Push(c.value()));
            depth + 1
        }
        Expression::Variable(Variable::X) => {
            code.push(Instr::X);
            depth + 1
        }
        Expression::Variable(Variable::Y) => {
            code.push(Instr::Y);
            depth + 1
        }
        Expression::Unary(UnaryOp::Neg, c) => {
            let d = emit(c, code, depth);
            code.push(Instr::Neg);
            d
        }
        Expression::Call(f, c) => {
            let d = emit(c, code, depth);
            code.push(Instr::Call(*f));
            d
        }
        Expression::Binary(op, l, r) => {
            let dl = emit(l, code, depth);
            let dr = emit(r, code, depth + 1);
            code.push(Instr::Binary(*op));
            dl.max(dr)
        }
    }
}
