//! Parser for polynomial expressions such as `(1/2 + 3i)*z1*z2^2 - i`.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := "-"? factor ("*"? factor)*
//! factor   := base ("^" uint)?
//! base     := "z1" | "z2" | "w1" | "w2" | "i" | rational | "(" expr ")"
//! rational := uint ("/" uint)?
//! ```
//!
//! Whitespace is ignored. A rational is a single base, so `1/2^2` is `1/4`.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::gaussian::GaussianRational;
use crate::poly::BiPoly;

/// Exponents above this bound are rejected to keep expansion desk-sized.
pub const MAX_EXPONENT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("negative exponent at position {position}")]
    ExponentNegative { position: usize },
    #[error("malformed rational at position {position}: {message}")]
    MalformedRational { position: usize, message: String },
    #[error("variable {name} at position {position} is not allowed here (expected {expected})")]
    UnexpectedVariable { position: usize, name: String, expected: String },
}

/// Which variable names an expression may use. Both alphabets map to the
/// same two slots: `z1`/`w1` to the first, `z2`/`w2` to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Z,
    W,
    /// Either alphabet, but not both in one expression.
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var { w: bool, index: u8 },
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    chars: Peekable<CharIndices<'a>>,
    len: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer { chars: text.char_indices().peekable(), len: text.len() };
        let mut out = Vec::new();
        loop {
            let t = lx.next_token()?;
            let end = t.1 == Tok::End;
            out.push(t);
            if end {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
        let Some((pos, c)) = self.chars.next() else { return Ok((self.len, Tok::End)) };
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'i' => Tok::I,
            'z' | 'w' => match self.chars.next() {
                Some((_, d @ ('1' | '2'))) => Tok::Var { w: c == 'w', index: d as u8 - b'0' },
                _ => {
                    return Err(ParseError::Syntax { position: pos, message: format!("expected {c}1 or {c}2") })
                }
            },
            d if d.is_ascii_digit() => {
                let mut digits = String::from(d);
                while let Some((_, d)) = self.chars.peek().copied().filter(|(_, d)| d.is_ascii_digit()) {
                    digits.push(d);
                    self.chars.next();
                }
                Tok::Num(digits.parse().expect("ascii digits"))
            }
            other => {
                return Err(ParseError::Syntax { position: pos, message: format!("unexpected character '{other}'") })
            }
        };
        Ok((pos, tok))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    alphabet: Alphabet,
    seen_w: Option<bool>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if t.1 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.pos(), message: message.into() })
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(t: &Tok) -> bool {
        matches!(t, Tok::Num(_) | Tok::Var { .. } | Tok::I | Tok::LParen)
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                acc = &acc * &self.factor()?;
            } else if Self::starts_factor(self.peek()) {
                acc = &acc * &self.factor()?;
            } else {
                break;
            }
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().1 {
            Tok::Num(n) => {
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or(ParseError::Syntax { position: pos, message: format!("exponent exceeds {MAX_EXPONENT}") })?;
                Ok(base.pow(e))
            }
            Tok::Minus => Err(ParseError::ExponentNegative { position: pos }),
            _ => Err(ParseError::Syntax { position: pos, message: "expected exponent".into() }),
        }
    }

    fn check_alphabet(&mut self, pos: usize, w: bool, index: u8) -> Result<(), ParseError> {
        let name = format!("{}{index}", if w { 'w' } else { 'z' });
        let expected = match (self.alphabet, self.seen_w) {
            (Alphabet::Z, _) if w => Some("z1, z2"),
            (Alphabet::W, _) if !w => Some("w1, w2"),
            (Alphabet::Any, Some(prev)) if prev != w => Some(if prev { "w1, w2" } else { "z1, z2" }),
            _ => None,
        };
        if let Some(expected) = expected {
            return Err(ParseError::UnexpectedVariable { position: pos, name, expected: expected.into() });
        }
        self.seen_w = Some(w);
        Ok(())
    }

    fn base(&mut self) -> Result<BiPoly, ParseError> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::Var { w, index } => {
                self.check_alphabet(pos, w, index)?;
                Ok(if index == 1 { BiPoly::z1() } else { BiPoly::z2() })
            }
            Tok::I => Ok(BiPoly::constant(GaussianRational::i())),
            Tok::Num(num) => {
                if *self.peek() != Tok::Slash {
                    return Ok(BiPoly::constant(GaussianRational::real(BigRational::from_integer(num))));
                }
                self.bump();
                let dpos = self.pos();
                match self.bump().1 {
                    Tok::Num(den) if den.is_zero() => {
                        Err(ParseError::MalformedRational { position: dpos, message: "zero denominator".into() })
                    }
                    Tok::Num(den) => Ok(BiPoly::constant(GaussianRational::real(BigRational::new(num, den)))),
                    _ => Err(ParseError::MalformedRational { position: dpos, message: "expected denominator".into() }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Slash => Err(ParseError::MalformedRational { position: pos, message: "missing numerator".into() }),
            Tok::End => Err(ParseError::Syntax { position: pos, message: "unexpected end of input".into() }),
            other => Err(ParseError::Syntax { position: pos, message: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses an expression restricted to the given alphabet.
pub fn parse_in(text: &str, alphabet: Alphabet) -> Result<BiPoly, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, at: 0, alphabet, seen_w: None };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(out)
}

/// Parses an expression in either `z1, z2` or `w1, w2`.
pub fn parse_polynomial(text: &str) -> Result<BiPoly, ParseError> {
    parse_in(text, Alphabet::Any)
}
