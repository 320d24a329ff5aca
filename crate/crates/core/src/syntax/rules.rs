use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::cursor::{Cursor, Role};
use super::data::decode_utf8;
use super::lexer::Tok;
use super::{ParseError, Position};
use crate::term::{Pattern, PatternTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Conclusion {
    Patterns(Vec<Pattern>),
    /// `{@false}`: a match of the conditions makes the store inconsistent.
    Falsity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: Option<String>,
    pub conditions: Vec<Pattern>,
    pub conclusion: Conclusion,
}

impl Rule {
    pub fn new(conditions: Vec<Pattern>, conclusion: Conclusion) -> Self {
        Rule {
            name: None,
            conditions,
            conclusion,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn is_falsity(&self) -> bool {
        self.conclusion == Conclusion::Falsity
    }

    pub fn conclusions(&self) -> &[Pattern] {
        match &self.conclusion {
            Conclusion::Patterns(ps) => ps,
            Conclusion::Falsity => &[],
        }
    }

    /// The first conclusion variable that no condition binds, if any.
    pub fn unsafe_variable(&self) -> Option<&str> {
        let bound: BTreeSet<&str> = self.conditions.iter().flat_map(Pattern::variables).collect();
        self.conclusions()
            .iter()
            .flat_map(Pattern::variables)
            .find(|v| !bound.contains(v))
    }

    /// Every constant term in conditions and conclusions.
    pub fn constants(&self) -> impl Iterator<Item = &Term> {
        self.conditions
            .iter()
            .chain(self.conclusions())
            .flat_map(|p| p.positions())
            .filter_map(|pt| match pt {
                PatternTerm::Const(t) => Some(t),
                PatternTerm::Var(_) => None,
            })
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, ps: &[Pattern]) -> fmt::Result {
    f.write_str("{")?;
    for (i, p) in ps.iter().enumerate() {
        if i > 0 {
            f.write_str(". ")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, &self.conditions)?;
        f.write_str(" => ")?;
        match &self.conclusion {
            Conclusion::Patterns(ps) => write_formula(f, ps)?,
            Conclusion::Falsity => f.write_str("{@false}")?,
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleDocument {
    pub prefixes: BTreeMap<String, String>,
    pub rules: Vec<Rule>,
}

fn pattern(cur: &mut Cursor) -> Result<(Pattern, [Position; 3]), ParseError> {
    let (s, s_at) = cur.term(Role::Subject)?;
    let (p, p_at) = cur.term(Role::Predicate)?;
    let (o, o_at) = cur.term(Role::Object)?;
    Ok((Pattern { subject: s, predicate: p, object: o }, [s_at, p_at, o_at]))
}

type Located = Vec<(Pattern, [Position; 3])>;

/// `pattern ("." pattern)* ["."]` up to the closing brace, which is consumed.
fn formula_body(cur: &mut Cursor) -> Result<Located, ParseError> {
    let mut out = Vec::new();
    loop {
        if cur.eat(&Tok::RBrace) {
            if out.is_empty() {
                return Err(ParseError::syntax(cur.pos(), "empty formula"));
            }
            return Ok(out);
        }
        out.push(pattern(cur)?);
        if !cur.eat(&Tok::Dot) && cur.peek() != Some(&Tok::RBrace) {
            return Err(cur.unexpected("'.' or '}'"));
        }
    }
}

fn rule(cur: &mut Cursor, name: Option<String>, ordinal: usize) -> Result<Rule, ParseError> {
    cur.expect(&Tok::LBrace, "'{'")?;
    let conditions = formula_body(cur)?;
    cur.expect(&Tok::Implies, "'=>'")?;
    cur.expect(&Tok::LBrace, "'{'")?;
    let (conclusion, located) = if cur.eat(&Tok::AtFalse) {
        cur.expect(&Tok::RBrace, "'}' after @false")?;
        (Conclusion::Falsity, Vec::new())
    } else {
        let located = formula_body(cur)?;
        let ps = located.iter().map(|(p, _)| p.clone()).collect();
        (Conclusion::Patterns(ps), located)
    };
    cur.expect(&Tok::Dot, "'.' after the rule")?;

    let label = name.clone().unwrap_or_else(|| format!("#{ordinal}"));
    let rule = Rule {
        name,
        conditions: conditions.into_iter().map(|(p, _)| p).collect(),
        conclusion,
    };
    for (p, at) in &located {
        for (pt, at) in p.positions().into_iter().zip(at) {
            if let PatternTerm::Const(Term::Blank(b)) = pt {
                return Err(ParseError::ExistentialConclusion {
                    line: at.line,
                    column: at.column,
                    rule: label,
                    label: b.clone(),
                });
            }
        }
    }
    if let Some(var) = rule.unsafe_variable() {
        let at = located
            .iter()
            .flat_map(|(p, at)| p.positions().into_iter().zip(*at))
            .find(|(pt, _)| pt.as_var() == Some(var))
            .map(|(_, at)| at)
            .unwrap_or_else(|| cur.pos());
        return Err(ParseError::UnsafeRule {
            line: at.line,
            column: at.column,
            rule: label,
            variable: var.to_owned(),
        });
    }
    Ok(rule)
}

/// Parses a rule document. A `#@name <ident>` comment names the rule after it.
pub fn parse_rules(text: &str) -> Result<RuleDocument, ParseError> {
    let mut cur = Cursor::new(text, true)?;
    let mut doc = RuleDocument::default();
    let mut pending_name = None;
    while let Some(tok) = cur.peek() {
        match tok {
            Tok::AtPrefix => {
                cur.next();
                cur.prefix_directive()?;
            }
            Tok::NameAnnotation(name) => {
                pending_name = Some(name.clone());
                cur.next();
            }
            _ => {
                let ordinal = doc.rules.len() + 1;
                doc.rules.push(rule(&mut cur, pending_name.take(), ordinal)?);
            }
        }
    }
    doc.prefixes = std::mem::take(&mut cur.prefixes);
    Ok(doc)
}

/// [`parse_rules`] over raw bytes; invalid UTF-8 is a positioned syntax error.
pub fn parse_rules_bytes(bytes: &[u8]) -> Result<RuleDocument, ParseError> {
    parse_rules(decode_utf8(bytes)?)
}

/// Parses a basic graph pattern: triple patterns separated by `.`, using
/// only the built-in prefixes.
pub fn parse_patterns(text: &str) -> Result<Vec<Pattern>, ParseError> {
    let mut cur = Cursor::new(text, true)?;
    let mut out = Vec::new();
    while cur.peek().is_some() {
        out.push(pattern(&mut cur)?.0);
        if !cur.eat(&Tok::Dot) && cur.peek().is_some() {
            return Err(cur.unexpected("'.' between patterns"));
        }
    }
    Ok(out)
}
