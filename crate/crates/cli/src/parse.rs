//! Polynomial expressions: rationals (`3`, `-5/7`), the imaginary unit `i`,
//! variables `x1..xm`, `u1..um`, `+ - * ^` and parentheses.

use harmonic2v::coeff::int;
use harmonic2v::{Dim, GaussianRational, Polynomial, Var};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("variable {name} out of range for m = {m}")]
    VariableOutOfRange { name: String, m: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Var(char, usize),
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

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Var(c, j) => write!(f, "{c}{j}"),
            Tok::I => f.write_str("i"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError { position, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        match c {
            c if c.is_whitespace() => {
                k += 1;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|p| p.1).collect();
                let v = s.parse().map_err(|_| syntax(pos, "integer literal too large"))?;
                out.push((pos, Tok::Int(v)));
            }
            'x' | 'u' => {
                k += 1;
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                if start == k {
                    return Err(syntax(pos, format!("expected an index after '{c}'")));
                }
                let s: String = chars[start..k].iter().map(|p| p.1).collect();
                let idx = s.parse().map_err(|_| syntax(pos, "variable index too large"))?;
                out.push((pos, Tok::Var(c, idx)));
            }
            'i' => {
                k += 1;
                out.push((pos, Tok::I));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                k += 1;
                out.push((
                    pos,
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                ));
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    dim: Dim,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
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

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let n = u32::try_from(n).map_err(|_| syntax(pos, "exponent too large"))?;
                Ok(base.pow(n))
            }
            _ => Err(syntax(pos, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        let dim = self.dim;
        match self.bump() {
            Tok::Int(n) => {
                let mut value = int(n as i64);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Tok::Int(0) => return Err(syntax(dpos, "zero denominator")),
                        Tok::Int(d) => value /= int(d as i64),
                        _ => return Err(syntax(dpos, "expected an integer denominator")),
                    }
                }
                Ok(Polynomial::constant(dim, GaussianRational::from_rational(value)))
            }
            Tok::I => Ok(Polynomial::constant(dim, GaussianRational::i())),
            Tok::Var(c, idx) => {
                if idx == 0 || idx > dim.get() {
                    return Err(ParseError::VariableOutOfRange { name: format!("{c}{idx}"), m: dim.get() });
                }
                let v = if c == 'x' { Var::X(idx - 1) } else { Var::U(idx - 1) };
                Ok(Polynomial::var(dim, v))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let rpos = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(syntax(rpos, "expected ')'")),
                }
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected '{other}'"))),
        }
    }
}

/// Parses `text` into a polynomial in `m` dimensions.
pub fn parse_poly(text: &str, dim: Dim) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, dim };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(out)
}
