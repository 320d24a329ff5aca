use super::cursor::{Cursor, Role};
use super::lexer::Tok;
use super::{ParseError, Position};
use crate::term::{Graph, PatternTerm, Term, Triple};

#[derive(Debug, Clone, Default)]
pub struct DataOptions {
    /// Blank labels are rewritten to `<source>-<label>`, keeping documents
    /// loaded into one store apart. Non-alphanumeric characters are dropped;
    /// an empty id leaves labels unchanged.
    pub source: String,
    /// Accept generalized triples (literal subjects, non-IRI predicates),
    /// as written by generalized-mode serialization.
    pub generalized: bool,
}

impl DataOptions {
    pub fn source(source: &str) -> Self {
        DataOptions {
            source: source.to_owned(),
            generalized: false,
        }
    }

    pub fn generalized(mut self) -> Self {
        self.generalized = true;
        self
    }
}

/// Parses a strict data document, standardizing blank labels apart with `source`.
pub fn parse_data(text: &str, source: &str) -> Result<Graph, ParseError> {
    parse_data_with(text, &DataOptions::source(source))
}

/// Like [`parse_data_with`], reporting invalid UTF-8 as a positioned syntax error.
pub fn parse_data_bytes(bytes: &[u8], options: &DataOptions) -> Result<Graph, ParseError> {
    let text = decode_utf8(bytes)?;
    parse_data_with(text, options)
}

pub(crate) fn decode_utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let valid = String::from_utf8_lossy(&bytes[..e.valid_up_to()]);
        let mut at = Position { line: 1, column: 1 };
        for c in valid.chars() {
            if c == '\n' {
                at.line += 1;
                at.column = 1;
            } else {
                at.column += 1;
            }
        }
        ParseError::syntax(at, "invalid UTF-8")
    })
}

pub fn parse_data_with(text: &str, options: &DataOptions) -> Result<Graph, ParseError> {
    let source: String = options
        .source
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect();
    let mut cur = Cursor::new(text, false)?;
    let mut graph = Graph::new();
    while let Some(tok) = cur.peek() {
        match tok {
            Tok::AtPrefix => {
                cur.next();
                cur.prefix_directive()?;
            }
            Tok::NameAnnotation(_) => {
                cur.next();
            }
            _ => {
                let (s, s_at) = cur.term(Role::Subject)?;
                let (p, p_at) = cur.term(Role::Predicate)?;
                let (o, _) = cur.term(Role::Object)?;
                cur.expect(&Tok::Dot, "'.' after the object")?;
                let [s, p, o] = [s, p, o].map(|pt| match pt {
                    PatternTerm::Const(t) => standardize(t, &source),
                    PatternTerm::Var(_) => unreachable!("variables are rejected by the cursor"),
                });
                if !options.generalized {
                    if s.is_literal() {
                        return Err(strictness(s_at, "a literal cannot be a subject"));
                    }
                    if !p.is_iri() {
                        return Err(strictness(p_at, "a predicate must be an IRI"));
                    }
                }
                graph.insert(Triple::new(s, p, o));
            }
        }
    }
    Ok(graph)
}

fn strictness(at: Position, message: &str) -> ParseError {
    ParseError::Strictness {
        line: at.line,
        column: at.column,
        message: message.to_owned(),
    }
}

fn standardize(t: Term, source: &str) -> Term {
    match t {
        Term::Blank(label) if !source.is_empty() => Term::Blank(format!("{source}-{label}")),
        t => t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab;

    const XSD_INT: &str = "http://www.w3.org/2001/XMLSchema#int";

    #[test]
    fn typed_literal_object() {
        let g = parse_data(
            "<http://ex.org/a> <http://ex.org/p> \"1\"^^<http://www.w3.org/2001/XMLSchema#int> .",
            "",
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.object, Term::typed("1", XSD_INT));
    }

    #[test]
    fn empty_document() {
        assert!(parse_data("", "f0").unwrap().is_empty());
        assert!(parse_data("  # only a comment\n", "f0").unwrap().is_empty());
    }

    #[test]
    fn missing_object_is_syntax_error() {
        let err = parse_data("<http://ex.org/a> <http://ex.org/p>", "").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 36, .. }), "{err}");
    }

    #[test]
    fn missing_period_is_syntax_error() {
        let err = parse_data("<http://ex.org/a> <http://ex.org/p> <http://ex.org/b>", "");
        assert!(matches!(err, Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn prefixes_and_a_keyword() {
        let g = parse_data(
            "@prefix ex: <http://ex.org/> .\nex:a a ex:C .\nex:a rdfs:label \"x\"@en .\nex:a a ex:C .",
            "",
        )
        .unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Triple::new(
            Term::iri("http://ex.org/a"),
            Term::iri(vocab::rdf::TYPE),
            Term::iri("http://ex.org/C"),
        )));
    }

    #[test]
    fn undeclared_prefix() {
        let err = parse_data("ex:a ex:p ex:b .", "").unwrap_err();
        assert_eq!(err.position(), Position { line: 1, column: 1 });
    }

    #[test]
    fn strictness_errors() {
        let err = parse_data("\"x\" <http://ex.org/p> <http://ex.org/a> .", "").unwrap_err();
        assert!(matches!(err, ParseError::Strictness { line: 1, column: 1, .. }));
        let err = parse_data("<http://ex.org/a> _:p <http://ex.org/a> .", "").unwrap_err();
        assert!(matches!(err, ParseError::Strictness { line: 1, column: 19, .. }));
        let g = parse_data_with(
            "\"x\" _:p <http://ex.org/a> .",
            &DataOptions::default().generalized(),
        )
        .unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn variables_rejected_in_data() {
        assert!(parse_data("?s <http://ex.org/p> <http://ex.org/a> .", "").is_err());
    }

    #[test]
    fn blank_labels_standardized_per_source() {
        let text = "_:b1 <http://ex.org/p> _:b2 .";
        let g0 = parse_data(text, "f0").unwrap();
        let g1 = parse_data(text, "f1").unwrap();
        let t0 = g0.iter().next().unwrap();
        assert_eq!(t0.subject, Term::blank("f0-b1"));
        assert!(g0.iter().all(|t| !g1.contains(t)));
        let keep = parse_data(text, "").unwrap();
        assert_eq!(keep.iter().next().unwrap().subject, Term::blank("b1"));
    }

    #[test]
    fn invalid_utf8_is_positioned() {
        let err = parse_data_bytes(b"\n<http://e/a>\xff", &DataOptions::default()).unwrap_err();
        assert_eq!(err.position(), Position { line: 2, column: 13 });
    }
}
