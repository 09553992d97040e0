use thiserror::Error;

use super::lexer::{tokenize, LexError, Token, TokenKind};
use super::{BinaryOp, Constant, Expression, Function, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorReason {
    #[error("unexpected character {0:?}")]
    UnexpectedCharacter(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected an operand, found {0}")]
    ExpectedOperand(TokenKind),
    #[error("unmatched `)`")]
    UnmatchedCloseParen,
    #[error("missing `)` to close the `(` at byte {0}")]
    UnclosedParen(usize),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("function `{0}` needs a parenthesized argument")]
    MissingArgument(&'static str),
    #[error("function `{0}` takes exactly one argument")]
    TooManyArguments(&'static str),
    #[error("`z =` may only appear at the start of the equation")]
    MisplacedEquation,
    #[error("number `{0}` is out of range")]
    NumberOutOfRange(String),
    #[error("unexpected {0}")]
    UnexpectedToken(TokenKind),
}

/// A parse failure anchored at a byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason} (at byte {position})")]
pub struct ParseError {
    pub position: usize,
    pub reason: ParseErrorReason,
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        ParseError {
            position: e.position,
            reason: ParseErrorReason::UnexpectedCharacter(e.character),
        }
    }
}

// Binding strengths for the precedence-climbing loop. Unary minus sits
// between multiplication and `^`; it is handled in `unary`.
const ADDITIVE: u8 = 1;
const MULTIPLICATIVE: u8 = 2;

/// Parses `z = f(x, y)` or a bare `f(x, y)`.
pub fn parse(source: &str) -> Result<Expression, ParseError> {
    let tokens = tokenize(source)?;
    let mut start = 0;
    if tokens.len() >= 2
        && tokens[0].kind == TokenKind::Identifier
        && tokens[0].lexeme == "z"
        && tokens[1].kind == TokenKind::Equals
    {
        start = 2;
    }
    let mut parser = Parser {
        tokens: &tokens[start..],
        pos: 0,
        end: source.len(),
    };
    let expr = parser.expression(ADDITIVE)?;
    if let Some(tok) = parser.peek() {
        let reason = match tok.kind {
            TokenKind::RParen => ParseErrorReason::UnmatchedCloseParen,
            TokenKind::Equals => ParseErrorReason::MisplacedEquation,
            kind => ParseErrorReason::UnexpectedToken(kind),
        };
        return Err(ParseError {
            position: tok.position,
            reason,
        });
    }
    Ok(expr)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    end: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn error(&self, reason: ParseErrorReason) -> ParseError {
        ParseError {
            position: self.here(),
            reason,
        }
    }

    /// Binary operator at the cursor, if any. The boolean says whether a
    /// token has to be consumed; implicit multiplication consumes nothing.
    fn binary_operator(&self) -> Option<(BinaryOp, u8, bool)> {
        match self.peek_kind()? {
            TokenKind::Plus => Some((BinaryOp::Add, ADDITIVE, true)),
            TokenKind::Minus => Some((BinaryOp::Sub, ADDITIVE, true)),
            TokenKind::Star => Some((BinaryOp::Mul, MULTIPLICATIVE, true)),
            TokenKind::Slash => Some((BinaryOp::Div, MULTIPLICATIVE, true)),
            // Every operand ends in a number, a variable or constant, or `)`,
            // so an operand-starting token here is a juxtaposition.
            TokenKind::Identifier | TokenKind::LParen | TokenKind::Number => {
                Some((BinaryOp::Mul, MULTIPLICATIVE, false))
            }
            _ => None,
        }
    }

    fn expression(&mut self, min_prec: u8) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((op, prec, consume)) = self.binary_operator() {
            if prec < min_prec {
                break;
            }
            if consume {
                self.pos += 1;
            }
            let rhs = self.expression(prec + 1)?;
            lhs = Expression::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            return Ok(Expression::negate(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.primary()?;
        if self.peek_kind() == Some(TokenKind::Caret) {
            self.pos += 1;
            // Right-associative, and the exponent may carry its own sign.
            let exponent = self.unary()?;
            return Ok(Expression::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error(ParseErrorReason::UnexpectedEnd));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                match tok.lexeme.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(Expression::Literal(v)),
                    _ => Err(ParseError {
                        position: tok.position,
                        reason: ParseErrorReason::NumberOutOfRange(tok.lexeme.clone()),
                    }),
                }
            }
            TokenKind::Identifier => {
                self.pos += 1;
                self.identifier(tok)
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expression(ADDITIVE)?;
                self.close_paren(tok.position)?;
                Ok(inner)
            }
            TokenKind::RParen => Err(self.error(ParseErrorReason::UnmatchedCloseParen)),
            TokenKind::Equals => Err(self.error(ParseErrorReason::MisplacedEquation)),
            kind => Err(self.error(ParseErrorReason::ExpectedOperand(kind))),
        }
    }

    fn identifier(&mut self, tok: &Token) -> Result<Expression, ParseError> {
        match tok.lexeme.as_str() {
            "x" => return Ok(Expression::Variable(Variable::X)),
            "y" => return Ok(Expression::Variable(Variable::Y)),
            "pi" => return Ok(Expression::Constant(Constant::Pi)),
            "e" => return Ok(Expression::Constant(Constant::E)),
            "z" if self.peek_kind() == Some(TokenKind::Equals) => {
                return Err(ParseError {
                    position: tok.position,
                    reason: ParseErrorReason::MisplacedEquation,
                });
            }
            _ => {}
        }

        let Some(function) = Function::from_name(&tok.lexeme) else {
            return Err(ParseError {
                position: tok.position,
                reason: ParseErrorReason::UnknownIdentifier(tok.lexeme.clone()),
            });
        };

        let missing = ParseErrorReason::MissingArgument(function.name());
        let Some(open) = self.next().filter(|t| t.kind == TokenKind::LParen) else {
            return Err(ParseError {
                position: tok.position,
                reason: missing,
            });
        };
        if self.peek_kind() == Some(TokenKind::RParen) {
            return Err(self.error(missing));
        }
        let argument = self.expression(ADDITIVE)?;
        if self.peek_kind() == Some(TokenKind::Comma) {
            return Err(self.error(ParseErrorReason::TooManyArguments(function.name())));
        }
        self.close_paren(open.position)?;
        Ok(Expression::call(function, argument))
    }

    fn close_paren(&mut self, open_position: usize) -> Result<(), ParseError> {
        match self.peek_kind() {
            Some(TokenKind::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(ParseErrorReason::UnclosedParen(open_position))),
        }
    }
}
