use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Number,
    Identifier,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Equals,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Number => "number",
            TokenKind::Identifier => "identifier",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Caret => "`^`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Comma => "`,`",
            TokenKind::Equals => "`=`",
        };
        f.write_str(s)
    }
}

/// A lexeme together with its byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unexpected character {character:?} at byte {position}")]
pub struct LexError {
    pub position: usize,
    pub character: char,
}

/// Splits `source` into tokens, skipping whitespace.
///
/// Numbers are `digits [. digits]`; a `.` that is not both preceded and
/// followed by a digit is rejected. Identifiers are maximal runs of ASCII
/// letters, so `3sin` lexes as `3`, `sin` but `xy` is a single identifier.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;

    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let single = match b {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            b'=' => Some(TokenKind::Equals),
            _ => None,
        };
        if let Some(kind) = single {
            pos += 1;
            tokens.push(Token {
                kind,
                lexeme: source[start..pos].to_string(),
                position: start,
            });
            continue;
        }

        if b.is_ascii_whitespace() {
            pos += 1;
        } else if b.is_ascii_digit() {
            pos = scan_digits(bytes, pos);
            if pos < bytes.len() && bytes[pos] == b'.' {
                if pos + 1 < bytes.len() && bytes[pos + 1].is_ascii_digit() {
                    pos = scan_digits(bytes, pos + 1);
                } else {
                    return Err(LexError {
                        position: pos,
                        character: '.',
                    });
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                lexeme: source[start..pos].to_string(),
                position: start,
            });
        } else if b.is_ascii_alphabetic() {
            while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
                pos += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Identifier,
                lexeme: source[start..pos].to_string(),
                position: start,
            });
        } else {
            let character = source[pos..].chars().next().unwrap_or('\u{fffd}');
            return Err(LexError {
                position: pos,
                character,
            });
        }
    }

    Ok(tokens)
}

fn scan_digits(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    pos
}
