use std::collections::BTreeMap;

use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseError, Position};
use crate::term::{PatternTerm, Term};
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Subject,
    Predicate,
    Object,
}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    idx: usize,
    end: Position,
    pub(crate) prefixes: BTreeMap<String, String>,
    pub(crate) allow_vars: bool,
}

fn end_position(text: &str) -> Position {
    let mut pos = Position { line: 1, column: 1 };
    for c in text.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    }
    pos
}

impl Cursor {
    pub(crate) fn new(text: &str, allow_vars: bool) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: tokenize(text)?,
            idx: 0,
            end: end_position(text),
            prefixes: BTreeMap::new(),
            allow_vars,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    /// Position of the next token, or of end of input.
    pub(crate) fn pos(&self) -> Position {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    pub(crate) fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".into(),
        };
        ParseError::syntax(self.pos(), format!("expected {expected}, found {found}"))
    }

    pub(crate) fn expect(&mut self, tok: &Tok, expected: &str) -> Result<Position, ParseError> {
        let at = self.pos();
        if self.eat(tok) {
            Ok(at)
        } else {
            Err(self.unexpected(expected))
        }
    }

    /// Parses the remainder of `@prefix name: <iri> .` after the keyword.
    pub(crate) fn prefix_directive(&mut self) -> Result<(), ParseError> {
        let name = match self.next() {
            Some((Tok::PName { prefix, local }, _)) if local.is_empty() => prefix,
            _ => {
                self.idx = self.idx.saturating_sub(1);
                return Err(self.unexpected("prefix name ending in ':'"));
            }
        };
        let iri = match self.next() {
            Some((Tok::IriRef(iri), _)) => iri,
            _ => {
                self.idx = self.idx.saturating_sub(1);
                return Err(self.unexpected("namespace IRI"));
            }
        };
        self.expect(&Tok::Dot, "'.'")?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn resolve(&self, prefix: &str, local: &str, at: Position) -> Result<String, ParseError> {
        if let Some(ns) = self.prefixes.get(prefix) {
            return Ok(format!("{ns}{local}"));
        }
        vocab::expand_builtin(prefix, local)
            .ok_or_else(|| ParseError::syntax(at, format!("undeclared prefix '{prefix}:'")))
    }

    fn iri(&mut self, what: &str) -> Result<String, ParseError> {
        let at = self.pos();
        match self.next() {
            Some((Tok::IriRef(iri), _)) => Ok(iri),
            Some((Tok::PName { prefix, local }, _)) => self.resolve(&prefix, &local, at),
            _ => {
                self.idx = self.idx.saturating_sub(1);
                Err(self.unexpected(what))
            }
        }
    }

    pub(crate) fn term(&mut self, role: Role) -> Result<(PatternTerm, Position), ParseError> {
        let at = self.pos();
        let Some((tok, _)) = self.next() else {
            return Err(self.unexpected("a term"));
        };
        let term = match tok {
            Tok::IriRef(iri) => Term::Iri(iri),
            Tok::PName { prefix, local } => Term::Iri(self.resolve(&prefix, &local, at)?),
            Tok::Blank(label) => Term::Blank(label),
            Tok::A if role == Role::Predicate => Term::iri(vocab::rdf::TYPE),
            Tok::Var(name) if self.allow_vars => return Ok((PatternTerm::Var(name), at)),
            Tok::Str { lexical, lang } => {
                if self.eat(&Tok::DoubleCaret) {
                    if lang.is_some() {
                        return Err(ParseError::syntax(
                            at,
                            "literal cannot have both a language tag and a datatype",
                        ));
                    }
                    let dt = self.iri("datatype IRI")?;
                    Term::typed(lexical, dt)
                } else if let Some(tag) = lang {
                    Term::lang(lexical, tag)
                } else {
                    Term::literal(lexical)
                }
            }
            Tok::Var(name) => {
                return Err(ParseError::syntax(
                    at,
                    format!("variable ?{name} not allowed here"),
                ))
            }
            _ => {
                self.idx -= 1;
                return Err(self.unexpected("a term"));
            }
        };
        Ok((PatternTerm::Const(term), at))
    }
}
