//! Text syntax for words with coefficients.
//!
//! ```text
//! word    := factor*
//! factor  := atom ('^' '-'? digits)?
//! atom    := 'x' digits | name | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `x1, x2, …` are variables, any other identifier names a group constant,
//! juxtaposition is the product and `[u, v]` is `u v u⁻¹ v⁻¹`. Positions in
//! errors are 1-based character offsets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groups::Element;
use crate::words::{Letter, Part, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var { index: usize, pos: usize },
    Const { name: String, pos: usize },
    Group(Vec<Factor>),
    Commutator(Vec<Factor>, Vec<Factor>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub atom: Expr,
    pub power: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Name,
    Open,
    Close,
    OpenBracket,
    CloseBracket,
    Comma,
    Power(i64),
}

struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() || c == '*' || c == '·' {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '[' => Some(Tok::OpenBracket),
            ']' => Some(Tok::CloseBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos, text: c.to_string() });
            i += 1;
            continue;
        }
        if c == '^' {
            let mut j = i + 1;
            let negative = chars.get(j) == Some(&'-');
            if negative {
                j += 1;
            }
            let start = j;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(err(pos, "expected an integer exponent after '^'"));
            }
            let digits: String = chars[start..j].iter().collect();
            let mag: i64 = digits.parse().map_err(|_| err(pos, "exponent out of range"))?;
            let text: String = chars[i..j].iter().collect();
            out.push(Token { tok: Tok::Power(if negative { -mag } else { mag }), pos, text });
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let tok = match text.strip_prefix('x') {
                Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => {
                    let index: usize = d.parse().map_err(|_| err(pos, "variable index out of range"))?;
                    if index == 0 {
                        return Err(err(pos, "variables are numbered from x1"));
                    }
                    Tok::Var(index)
                }
                _ => Tok::Name,
            };
            out.push(Token { tok, pos, text });
            i = j;
            continue;
        }
        return Err(err(pos, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn seq(&mut self) -> Result<Vec<Factor>> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            let pos = t.pos;
            let atom = match t.tok {
                Tok::Close | Tok::CloseBracket | Tok::Comma => break,
                Tok::Power(_) => return Err(err(pos, "exponent without a base")),
                Tok::Var(index) => {
                    self.at += 1;
                    Expr::Var { index, pos }
                }
                Tok::Name => {
                    let name = t.text.clone();
                    self.at += 1;
                    Expr::Const { name, pos }
                }
                Tok::Open => {
                    self.at += 1;
                    let inner = self.seq()?;
                    match self.peek() {
                        Some(Token { tok: Tok::Close, .. }) => self.at += 1,
                        Some(t) => return Err(err(t.pos, format!("expected ')' to close '(' at position {pos}, found {:?}", t.text))),
                        None => return Err(err(pos, "unbalanced '(': missing ')'")),
                    }
                    Expr::Group(inner)
                }
                Tok::OpenBracket => {
                    self.at += 1;
                    let left = self.seq()?;
                    match self.peek() {
                        Some(Token { tok: Tok::Comma, .. }) => self.at += 1,
                        Some(t) => return Err(err(t.pos, format!("expected ',' in commutator, found {:?}", t.text))),
                        None => return Err(err(pos, "unbalanced '[': missing ','")),
                    }
                    let right = self.seq()?;
                    match self.peek() {
                        Some(Token { tok: Tok::CloseBracket, .. }) => self.at += 1,
                        Some(t) => return Err(err(t.pos, format!("expected ']' to close '[' at position {pos}, found {:?}", t.text))),
                        None => return Err(err(pos, "unbalanced '[': missing ']'")),
                    }
                    Expr::Commutator(left, right)
                }
            };
            let mut power = 1;
            if let Some(Token { tok: Tok::Power(p), .. }) = self.peek() {
                power = *p;
                self.at += 1;
            }
            out.push(Factor { atom, power });
        }
        Ok(out)
    }
}

/// Parses word text into a syntax tree.
pub fn parse_word(input: &str) -> Result<Vec<Factor>> {
    let tokens = lex(input)?;
    let mut p = Parser { tokens, at: 0 };
    let seq = p.seq()?;
    if let Some(t) = p.peek() {
        let what = match t.tok {
            Tok::Close => "unbalanced ')'",
            Tok::CloseBracket => "unbalanced ']'",
            _ => "unexpected ','",
        };
        return Err(err(t.pos, what));
    }
    Ok(seq)
}

/// Replaces names by constants and expands powers and commutators, without
/// any reduction.
pub fn resolve(factors: &[Factor], constants: &HashMap<String, Element>) -> Result<Vec<Part>> {
    let mut out = Vec::new();
    for f in factors {
        let base = resolve_atom(&f.atom, constants)?;
        let unit: Vec<Part> = if f.power < 0 { invert(&base) } else { base };
        for _ in 0..f.power.unsigned_abs() {
            out.extend(unit.iter().cloned());
        }
    }
    Ok(out)
}

fn invert(parts: &[Part]) -> Vec<Part> {
    parts.iter().rev().map(Part::inverse).collect()
}

fn resolve_atom(atom: &Expr, constants: &HashMap<String, Element>) -> Result<Vec<Part>> {
    Ok(match atom {
        Expr::Var { index, .. } => vec![Part::Var(Letter::new(*index, Sign::Plus))],
        Expr::Const { name, pos } => {
            let g = constants
                .get(name)
                .ok_or_else(|| err(*pos, format!("unknown constant {name:?}")))?;
            vec![Part::Const(g.clone())]
        }
        Expr::Group(inner) => resolve(inner, constants)?,
        Expr::Commutator(a, b) => {
            let a = resolve(a, constants)?;
            let b = resolve(b, constants)?;
            let mut out = a.clone();
            out.extend(b.iter().cloned());
            out.extend(invert(&a));
            out.extend(invert(&b));
            out
        }
    })
}

/// [`parse_word`] followed by [`resolve`].
pub fn parse_parts(input: &str, constants: &HashMap<String, Element>) -> Result<Vec<Part>> {
    resolve(&parse_word(input)?, constants)
}
