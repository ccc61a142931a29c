//! Words in free groups and in free products `G ∗ F_d`.
//!
//! A [`FreeProductWord`] alternates group constants and variable letters and
//! is kept in canonical reduced form. A word is *normalized* when it
//! evaluates to the identity at `(1, …, 1)`; normalized words factor as
//! products of basic words `g x_i^{±1} g⁻¹`.

pub mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec, Membership};
use crate::MatrixQ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `x_index^{±1}` with a 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Letter { index, sign }
    }

    pub fn plus(index: usize) -> Self {
        Self::new(index, Sign::Plus)
    }

    pub fn minus(index: usize) -> Self {
        Self::new(index, Sign::Minus)
    }

    pub fn inverse(self) -> Self {
        Letter { index: self.index, sign: self.sign.flip() }
    }

    /// Position in the alphabet `x1, x1^-1, x2, x2^-1, …`.
    pub fn code(self) -> usize {
        2 * (self.index - 1) + usize::from(self.sign == Sign::Minus)
    }

    pub fn from_code(code: usize) -> Self {
        Letter {
            index: code / 2 + 1,
            sign: if code.is_multiple_of(2) { Sign::Plus } else { Sign::Minus },
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "x{}", self.index),
            Sign::Minus => write!(f, "x{}^-1", self.index),
        }
    }
}

/// A reduced word in the free group on `x_1, …, x_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    /// Rejects words with an adjacent cancelling pair.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if let Some(p) = letters.windows(2).position(|w| w[0] == w[1].inverse()) {
            return Err(Error::NotReduced(p));
        }
        Ok(FreeWord { letters })
    }

    /// Freely reduces an arbitrary sequence of letters.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Length first, then lexicographic in the alphabet order of [`Letter::code`].
    pub fn shortlex_key(&self) -> (usize, Vec<usize>) {
        (self.letters.len(), self.letters.iter().map(|l| l.code()).collect())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Number of reduced words of length exactly `len` in rank `r`: `2r (2r-1)^{len-1}`.
pub fn reduced_count(rank: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    2 * rank as u64 * (2 * rank as u64 - 1).pow(len as u32 - 1)
}

/// Every nonempty reduced word of length at most `max_len`, shortest first
/// and lexicographic within a length.
pub fn enumerate_reduced(rank: usize, max_len: usize) -> ReducedWords {
    assert!(rank >= 1, "rank must be positive");
    ReducedWords { rank, max_len, current: if max_len == 0 { None } else { Some(vec![0]) } }
}

#[derive(Debug, Clone)]
pub struct ReducedWords {
    rank: usize,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl ReducedWords {
    fn smallest_after(prev: Option<usize>) -> usize {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    fn advance(&self, codes: &mut Vec<usize>) -> bool {
        let alphabet = 2 * self.rank;
        let mut p = codes.len();
        while p > 0 {
            p -= 1;
            let forbidden = if p > 0 { Some(codes[p - 1] ^ 1) } else { None };
            let mut c = codes[p] + 1;
            if Some(c) == forbidden {
                c += 1;
            }
            if c < alphabet {
                codes[p] = c;
                for q in p + 1..codes.len() {
                    codes[q] = Self::smallest_after(Some(codes[q - 1]));
                }
                return true;
            }
        }
        let len = codes.len() + 1;
        if len > self.max_len {
            return false;
        }
        codes.clear();
        for q in 0..len {
            codes.push(Self::smallest_after(q.checked_sub(1).map(|i| codes[i])));
        }
        true
    }
}

impl Iterator for ReducedWords {
    type Item = FreeWord;

    fn next(&mut self) -> Option<FreeWord> {
        let mut codes = self.current.take()?;
        let word = FreeWord { letters: codes.iter().map(|&c| Letter::from_code(c)).collect() };
        if self.advance(&mut codes) {
            self.current = Some(codes);
        }
        Some(word)
    }
}

/// One factor of a word with coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    Const(Element),
    Var(Letter),
}

impl Part {
    pub fn inverse(&self) -> Part {
        match self {
            Part::Const(g) => Part::Const(g.inverse()),
            Part::Var(l) => Part::Var(l.inverse()),
        }
    }
}

/// An element of `G ∗ F_d` in canonical reduced form: adjacent constants are
/// merged, identity constants are dropped, and adjacent inverse letters cancel.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeProductWord {
    parts: Vec<Part>,
}

impl FreeProductWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn reduce(parts: impl IntoIterator<Item = Part>) -> Self {
        let mut out: Vec<Part> = Vec::new();
        for part in parts {
            match part {
                Part::Const(g) => {
                    if let Some(Part::Const(top)) = out.last_mut() {
                        let merged = top.mul(&g);
                        if merged.is_identity() {
                            out.pop();
                        } else {
                            *top = merged;
                        }
                    } else if !g.is_identity() {
                        out.push(Part::Const(g));
                    }
                }
                Part::Var(l) => {
                    if out.last() == Some(&Part::Var(l.inverse())) {
                        out.pop();
                    } else {
                        out.push(Part::Var(l));
                    }
                }
            }
        }
        FreeProductWord { parts: out }
    }

    pub fn from_free_word(w: &FreeWord) -> Self {
        FreeProductWord { parts: w.letters().iter().map(|&l| Part::Var(l)).collect() }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.parts.iter().all(|p| matches!(p, Part::Const(_)))
    }

    /// Largest variable index that occurs.
    pub fn arity(&self) -> usize {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Var(l) => Some(l.index),
                Part::Const(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        FreeProductWord { parts: self.parts.iter().rev().map(Part::inverse).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::reduce(self.parts.iter().chain(&other.parts).cloned())
    }

    /// `w(1, …, 1)`, or `None` when that product is the identity.
    pub fn value_at_identity(&self) -> Option<Element> {
        constant_product(&self.parts)
    }

    /// The word map evaluated at `assignment[i-1]` for `x_i`.
    pub fn evaluate(&self, assignment: &[MatrixQ], spec: GroupSpec) -> Result<Element> {
        let values = assignment
            .iter()
            .map(|m| Element::new(spec, m.clone()))
            .collect::<Result<Vec<_>>>()?;
        self.evaluate_elements(&values, spec)
    }

    pub fn evaluate_elements(&self, assignment: &[Element], spec: GroupSpec) -> Result<Element> {
        let mut acc = Element::identity(spec);
        for part in &self.parts {
            let factor = match part {
                Part::Const(g) => {
                    if g.spec() != spec {
                        return Err(Error::MembershipViolation {
                            group: spec.to_string(),
                            reason: format!("constant belongs to {}", g.spec()),
                        });
                    }
                    g.clone()
                }
                Part::Var(l) => {
                    let v = assignment.get(l.index - 1).ok_or(Error::DimensionMismatch {
                        expected: self.arity(),
                        found: assignment.len(),
                    })?;
                    if v.spec() != spec {
                        return Err(Error::MembershipViolation {
                            group: spec.to_string(),
                            reason: format!("x{} is assigned an element of {}", l.index, v.spec()),
                        });
                    }
                    match l.sign {
                        Sign::Plus => v.clone(),
                        Sign::Minus => v.inverse(),
                    }
                }
            };
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }

    /// `w(1, …, 1)⁻¹ · w`, reduced.
    pub fn normalize(&self) -> Self {
        match self.value_at_identity() {
            None => self.clone(),
            Some(c) => Self::reduce(
                std::iter::once(Part::Const(c.inverse())).chain(self.parts.iter().cloned()),
            ),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.value_at_identity().is_none()
    }

    pub fn decompose_basic(&self, spec: GroupSpec) -> Result<Vec<BasicWord>> {
        decompose_basic(&self.parts, spec)
    }
}

fn constant_product(parts: &[Part]) -> Option<Element> {
    let mut acc: Option<Element> = None;
    for p in parts {
        if let Part::Const(g) = p {
            acc = Some(match acc {
                None => g.clone(),
                Some(a) => a.mul(g),
            });
        }
    }
    acc.filter(|a| !a.is_identity())
}

/// `coefficient · x_index^{sign} · coefficient⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicWord {
    pub coefficient: Element,
    pub letter: Letter,
}

impl BasicWord {
    pub fn to_word(&self) -> FreeProductWord {
        FreeProductWord::reduce([
            Part::Const(self.coefficient.clone()),
            Part::Var(self.letter),
            Part::Const(self.coefficient.inverse()),
        ])
    }

    /// Types `x_i` and `x_i⁻¹` with the same coefficient cancel.
    pub fn cancels(&self, other: &BasicWord) -> bool {
        self.letter == other.letter.inverse() && self.coefficient == other.coefficient
    }
}

/// Splits a normalized word `g_0 y_1 g_1 ⋯ y_n g_n` (any, possibly
/// unreduced, sequence of parts) into basic words with coefficients
/// `g_0 g_1 ⋯ g_{j-1}`; adjacent mutually inverse basic words with equal
/// coefficient are then cancelled.
pub fn decompose_basic(parts: &[Part], spec: GroupSpec) -> Result<Vec<BasicWord>> {
    if constant_product(parts).is_some() {
        return Err(Error::NotNormalized);
    }
    let mut prefix = Element::identity(spec);
    let mut out: Vec<BasicWord> = Vec::new();
    for p in parts {
        match p {
            Part::Const(g) => prefix = prefix.mul(g),
            Part::Var(l) => {
                let b = BasicWord { coefficient: prefix.clone(), letter: *l };
                if out.last().is_some_and(|top| top.cancels(&b)) {
                    out.pop();
                } else {
                    out.push(b);
                }
            }
        }
    }
    Ok(out)
}

/// Product of basic words, reduced.
pub fn basic_product(words: &[BasicWord]) -> FreeProductWord {
    FreeProductWord::reduce(words.iter().flat_map(|b| b.to_word().parts))
}

impl fmt::Display for FreeProductWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match p {
                Part::Var(l) => write!(f, "{l}")?,
                Part::Const(g) => {
                    let rows: Vec<String> = g
                        .matrix()
                        .rows()
                        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                        .collect();
                    write!(f, "[{}]", rows.join(";"))?;
                }
            }
        }
        Ok(())
    }
}

/// Checks that every constant of `w` passes membership in `spec`.
pub fn check_constants(w: &FreeProductWord, spec: GroupSpec) -> Result<()> {
    for p in w.parts() {
        if let Part::Const(g) = p {
            if let Membership::Violates(reason) = spec.membership(g.matrix())? {
                return Err(Error::MembershipViolation { group: spec.to_string(), reason });
            }
        }
    }
    Ok(())
}
