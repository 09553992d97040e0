//! Equations of the form `z = f(x, y)`: lexing, parsing, evaluation and
//! canonical rendering.
//!
//! The grammar is documented in `docs/grammar.md`. In short: `+ - * / ^`,
//! unary minus (binding looser than `^`, so `-2^2 == -4`), implicit
//! multiplication (`3sin(x)`, `2x`, `(x+1)(y-1)`), the constants `pi` and `e`
//! and a fixed set of one-argument functions.

mod eval;
mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{evaluate, EvalResult, Program};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, ParseError, ParseErrorReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    X,
    Y,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::X => "x",
            Variable::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

/// One-argument functions. `Log` is base 10, `Ln` is natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Exp,
    Ln,
    Log,
    Sqrt,
    Abs,
}

impl Function {
    pub const ALL: [Function; 11] = [
        Function::Sin,
        Function::Cos,
        Function::Tan,
        Function::Asin,
        Function::Acos,
        Function::Atan,
        Function::Exp,
        Function::Ln,
        Function::Log,
        Function::Sqrt,
        Function::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
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

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Syntax tree of a real function of `x` and `y`.
///
/// Trees produced by [`parse`] only contain non-negative finite literals;
/// negation is always an explicit [`UnaryOp::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Literal(f64),
    Variable(Variable),
    Constant(Constant),
    Unary(UnaryOp, Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Call(Function, Box<Expression>),
}

impl Expression {
    pub fn negate(child: Expression) -> Self {
        Expression::Unary(UnaryOp::Neg, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expression, right: Expression) -> Self {
        Expression::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn call(function: Function, argument: Expression) -> Self {
        Expression::Call(function, Box::new(argument))
    }

    /// Fully parenthesized infix text with a `z = ` prefix.
    ///
    /// Parsing the result yields a tree structurally equal to `self`.
    pub fn canonical_text(&self) -> String {
        format!("z = {}", Infix(self))
    }

    /// The variables that occur anywhere in the tree.
    pub fn free_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Expression::Variable(v) => {
                out.insert(*v);
            }
            Expression::Literal(_) | Expression::Constant(_) => {}
            Expression::Unary(_, child) | Expression::Call(_, child) => child.collect_variables(out),
            Expression::Binary(_, l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expression::Literal(_) | Expression::Variable(_) | Expression::Constant(_) => 1,
            Expression::Unary(_, c) | Expression::Call(_, c) => 1 + c.size(),
            Expression::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

struct Infix<'a>(&'a Expression);

impl fmt::Display for Infix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            // f64's Display never uses exponent notation and round-trips.
            Expression::Literal(v) if *v < 0.0 => write!(f, "(-{})", -v),
            Expression::Literal(v) => write!(f, "{v}"),
            Expression::Variable(v) => f.write_str(v.name()),
            Expression::Constant(c) => f.write_str(c.name()),
            Expression::Unary(UnaryOp::Neg, c) => write!(f, "(-{})", Infix(c)),
            Expression::Binary(op, l, r) => {
                write!(f, "({} {} {})", Infix(l), op.symbol(), Infix(r))
            }
            Expression::Call(func, arg) => write!(f, "{}({})", func.name(), Infix(arg)),
        }
    }
}
