//! Agendas, propositional constraints and model enumeration.
//!
//! Concrete syntax: identifiers `[A-Za-z_][A-Za-z0-9_]*`, operators `!`,
//! `&`, `|`, `->`, `<->` and parentheses. Precedence from tightest to
//! loosest is `!`, `&`, `|`, `->`, `<->`; `&` and `|` associate to the
//! left, `->` and `<->` to the right.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::judgment::{Judgment, MAX_JUDGMENT_LEN};

/// Default limit on the number of issues for exhaustive enumeration.
pub const DEFAULT_MAX_ISSUES: usize = 20;

/// An ordered list of distinct issue names. Issue `i` of every judgment over
/// this agenda refers to `issues()[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agenda {
    issues: Vec<String>,
    index: HashMap<String, usize>,
}

impl Agenda {
    pub fn new<S: Into<String>>(issues: impl IntoIterator<Item = S>) -> Result<Self> {
        let issues: Vec<String> = issues.into_iter().map(Into::into).collect();
        if issues.is_empty() {
            return Err(Error::InvalidAgenda("an agenda needs at least one issue".into()));
        }
        if issues.len() > MAX_JUDGMENT_LEN {
            return Err(Error::Capacity {
                what: "agenda size",
                actual: issues.len(),
                limit: MAX_JUDGMENT_LEN,
            });
        }
        let mut index = HashMap::with_capacity(issues.len());
        for (i, name) in issues.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidAgenda(format!("`{name}` is not a valid issue identifier")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidAgenda(format!("duplicate issue `{name}`")));
            }
        }
        Ok(Agenda { issues, index })
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn issues(&self) -> &[String] {
        &self.issues
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Every assignment in `{0,1}^m`, in lexicographic order.
    pub fn all_judgments(&self) -> impl Iterator<Item = Judgment> {
        let m = self.len();
        (0..1u64 << m).map(move |i| Judgment::from_index(i, m))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Propositional formula over the issues of an agenda. Variables hold the
/// issue position, so a formula is only meaningful next to its agenda.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(issue: usize) -> Self {
        Formula::Var(issue)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// `issue ∨ ¬issue`.
    pub fn tautology(issue: usize) -> Self {
        Formula::or(Formula::var(issue), Formula::not(Formula::var(issue)))
    }

    /// Left-folded conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Disjunction of full minterms, one per model. The result has exactly
    /// `models` as its models over an agenda of `issues` issues.
    pub fn from_models(issues: usize, models: &[Judgment]) -> Result<Self> {
        let minterms = models.iter().map(|j| {
            Formula::conjunction((0..issues).map(|i| {
                if j.get(i) {
                    Formula::var(i)
                } else {
                    Formula::not(Formula::var(i))
                }
            }))
            .expect("agenda has at least one issue")
        });
        Formula::disjunction(minterms).ok_or(Error::Contradiction)
    }

    pub fn evaluate(&self, j: &Judgment) -> bool {
        match self {
            Formula::Var(i) => j.get(*i),
            Formula::Not(f) => !f.evaluate(j),
            Formula::And(a, b) => a.evaluate(j) && b.evaluate(j),
            Formula::Or(a, b) => a.evaluate(j) || b.evaluate(j),
            Formula::Implies(a, b) => !a.evaluate(j) || b.evaluate(j),
            Formula::Iff(a, b) => a.evaluate(j) == b.evaluate(j),
        }
    }

    /// Largest issue index referenced by the formula.
    pub fn max_var(&self) -> usize {
        match self {
            Formula::Var(i) => *i,
            Formula::Not(f) => f.max_var(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    /// Renders the formula with issue names, using the minimum number of
    /// parentheses needed to parse back to the same tree.
    pub fn display<'a>(&'a self, agenda: &'a Agenda) -> impl fmt::Display + 'a {
        Printer { f: self, agenda }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Var(_) => 6,
        }
    }
}

struct Printer<'a> {
    f: &'a Formula,
    agenda: &'a Agenda,
}

impl Printer<'_> {
    fn write(&self, f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, a, b, right_assoc) = match f {
            Formula::Var(i) => return out.write_str(&self.agenda.issues()[*i]),
            Formula::Not(inner) => {
                out.write_str("!")?;
                return self.child(inner, inner.precedence() < f.precedence(), out);
            }
            Formula::And(a, b) => ("&", a, b, false),
            Formula::Or(a, b) => ("|", a, b, false),
            Formula::Implies(a, b) => ("->", a, b, true),
            Formula::Iff(a, b) => ("<->", a, b, true),
        };
        let p = f.precedence();
        self.child(a, a.precedence() < p || (right_assoc && a.precedence() == p), out)?;
        write!(out, " {op} ")?;
        self.child(b, b.precedence() < p || (!right_assoc && b.precedence() == p), out)
    }

    fn child(&self, f: &Formula, parens: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if parens {
            out.write_str("(")?;
            self.write(f, out)?;
            out.write_str(")")
        } else {
            self.write(f, out)
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        let token = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                pos += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if text[pos..].starts_with("->") => {
                pos += 1;
                Token::Implies
            }
            b'<' if text[pos..].starts_with("<->") => {
                pos += 2;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos + 1 < bytes.len() && (bytes[pos + 1].is_ascii_alphanumeric() || bytes[pos + 1] == b'_') {
                    pos += 1;
                }
                Token::Ident(text[start..=pos].to_string())
            }
            _ => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unexpected character `{}`", text[pos..].chars().next().unwrap_or('?')),
                })
            }
        };
        pos += 1;
        tokens.push((start, token));
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    agenda: &'a Agenda,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.implies()?;
        if self.eat(&Token::Iff) {
            Ok(Formula::iff(lhs, self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            Ok(Formula::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                let issue = self
                    .agenda
                    .position(&name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                self.pos += 1;
                Ok(Formula::var(issue))
            }
            Some(t) => Err(self.error(format!("unexpected token {t:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

pub fn parse_formula(text: &str, agenda: &Agenda) -> Result<Formula> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
        agenda,
    };
    let f = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(f)
}

/// All models of `constraint` in lexicographic order, with the default
/// issue cap.
pub fn enumerate_models(agenda: &Agenda, constraint: &Formula) -> Result<Vec<Judgment>> {
    enumerate_models_capped(agenda, constraint, DEFAULT_MAX_ISSUES)
}

pub fn enumerate_models_capped(agenda: &Agenda, constraint: &Formula, max_issues: usize) -> Result<Vec<Judgment>> {
    if agenda.len() > max_issues {
        return Err(Error::Capacity {
            what: "agenda size",
            actual: agenda.len(),
            limit: max_issues,
        });
    }
    if constraint.max_var() >= agenda.len() {
        return Err(Error::invalid("constraint references an issue outside the agenda"));
    }
    let models: Vec<Judgment> = agenda.all_judgments().filter(|j| constraint.evaluate(j)).collect();
    if models.is_empty() {
        return Err(Error::Contradiction);
    }
    Ok(models)
}

/// An agenda together with its constraint; the contents of an agenda file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framework {
    pub agenda: Agenda,
    pub constraint: Formula,
}

impl Framework {
    pub fn new(agenda: Agenda, constraint: Formula) -> Result<Self> {
        if constraint.max_var() >= agenda.len() {
            return Err(Error::invalid("constraint references an issue outside the agenda"));
        }
        Ok(Framework { agenda, constraint })
    }

    /// Parses the agenda file format:
    ///
    /// ```text
    /// issues: p1 p2 p3
    /// constraint: (p1 & p2) <-> p3
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let issues = lines
            .next()
            .and_then(|l| l.strip_prefix("issues:"))
            .ok_or_else(|| Error::invalid("agenda file: first line must start with `issues:`"))?;
        let constraint = lines
            .next()
            .and_then(|l| l.strip_prefix("constraint:"))
            .ok_or_else(|| Error::invalid("agenda file: second line must start with `constraint:`"))?;
        if lines.next().is_some() {
            return Err(Error::invalid("agenda file: unexpected content after the constraint"));
        }
        let agenda = Agenda::new(issues.split_whitespace())?;
        let constraint = parse_formula(constraint, &agenda)?;
        Ok(Framework { agenda, constraint })
    }

    pub fn to_text(&self) -> String {
        format!(
            "issues: {}\nconstraint: {}\n",
            self.agenda.issues().join(" "),
            self.constraint.display(&self.agenda)
        )
    }

    pub fn models(&self) -> Result<Vec<Judgment>> {
        enumerate_models(&self.agenda, &self.constraint)
    }

    pub fn is_rational(&self, j: &Judgment) -> bool {
        j.len() == self.agenda.len() && self.constraint.evaluate(j)
    }

    /// The doctrinal paradox: `(p1 & p2) <-> p3` over `[p1, p2, p3]`.
    pub fn doctrinal_paradox() -> Self {
        Framework::parse("issues: p1 p2 p3\nconstraint: (p1 & p2) <-> p3").expect("well-formed")
    }
}
