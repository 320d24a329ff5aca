//! Tokenizer shared by the data, rule, and query-pattern grammars.

use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Str { lexical: String, lang: Option<String> },
    DoubleCaret,
    Var(String),
    Blank(String),
    A,
    LBrace,
    RBrace,
    Implies,
    Dot,
    AtPrefix,
    AtFalse,
    /// `#@name <ident>` comment, naming the rule that follows.
    NameAnnotation(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::IriRef(iri) => format!("IRI <{iri}>"),
            Tok::PName { prefix, local } => format!("prefixed name {prefix}:{local}"),
            Tok::Str { .. } => "literal".into(),
            Tok::DoubleCaret => "'^^'".into(),
            Tok::Var(v) => format!("variable ?{v}"),
            Tok::Blank(b) => format!("blank node _:{b}"),
            Tok::A => "'a'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Implies => "'=>'".into(),
            Tok::Dot => "'.'".into(),
            Tok::AtPrefix => "'@prefix'".into(),
            Tok::AtFalse => "'@false'".into(),
            Tok::NameAnnotation(_) => "rule name annotation".into(),
        }
    }
}

pub(crate) type Spanned = (Tok, Position);

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

impl Lexer {
    fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, at: Position, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: at.line,
            column: at.column,
            message: msg.into(),
        }
    }

    fn run(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let start = self.pos();
            match c {
                c if c.is_whitespace() => {
                    self.bump();
                }
                '#' => {
                    if let Some(name) = self.comment() {
                        out.push((Tok::NameAnnotation(name), start));
                    }
                }
                '<' => {
                    self.bump();
                    let iri = self.iri_body(start)?;
                    out.push((Tok::IriRef(iri), start));
                }
                '"' | '\'' => {
                    let lexical = self.string(start)?;
                    let lang = if self.peek() == Some('@') {
                        self.bump();
                        Some(self.lang_tag(start)?)
                    } else {
                        None
                    };
                    out.push((Tok::Str { lexical, lang }, start));
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.err(start, "expected '^^'"));
                    }
                    out.push((Tok::DoubleCaret, start));
                }
                '?' => {
                    self.bump();
                    let name = self.take_while(is_name_char);
                    if name.is_empty() {
                        return Err(self.err(start, "empty variable name"));
                    }
                    out.push((Tok::Var(name), start));
                }
                '{' => {
                    self.bump();
                    out.push((Tok::LBrace, start));
                }
                '}' => {
                    self.bump();
                    out.push((Tok::RBrace, start));
                }
                '.' => {
                    self.bump();
                    out.push((Tok::Dot, start));
                }
                '=' => {
                    self.bump();
                    if self.bump() != Some('>') {
                        return Err(self.err(start, "expected '=>'"));
                    }
                    out.push((Tok::Implies, start));
                }
                '@' => {
                    self.bump();
                    let word = self.take_while(|c| c.is_ascii_alphabetic());
                    let tok = match word.as_str() {
                        "prefix" => Tok::AtPrefix,
                        "false" => Tok::AtFalse,
                        _ => return Err(self.err(start, format!("unknown keyword '@{word}'"))),
                    };
                    out.push((tok, start));
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.local_name();
                    if label.is_empty() {
                        return Err(self.err(start, "empty blank node label"));
                    }
                    out.push((Tok::Blank(label), start));
                }
                ':' => {
                    self.bump();
                    let local = self.local_name();
                    out.push((
                        Tok::PName {
                            prefix: String::new(),
                            local,
                        },
                        start,
                    ));
                }
                c if is_name_start(c) => {
                    let prefix = self.take_while(|c| is_name_char(c) || c == '.');
                    if self.peek() == Some(':') {
                        if prefix.ends_with('.') {
                            return Err(self.err(start, "prefix may not end with '.'"));
                        }
                        self.bump();
                        let local = self.local_name();
                        out.push((Tok::PName { prefix, local }, start));
                    } else if prefix == "a" {
                        out.push((Tok::A, start));
                    } else {
                        return Err(self.err(start, format!("unexpected word '{prefix}'")));
                    }
                }
                other => {
                    return Err(self.err(start, format!("unexpected character {other:?}")));
                }
            }
        }
        Ok(out)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Name characters, with `.` allowed anywhere but at the end.
    fn local_name(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            let inner_dot = c == '.' && self.peek_at(1).is_some_and(|n| is_name_char(n) || n == ':');
            if !(is_name_char(c) || c == ':' || inner_dot) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn comment(&mut self) -> Option<String> {
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            text.push(c);
            self.bump();
        }
        let rest = text.strip_prefix("#@name")?;
        if !rest.starts_with(char::is_whitespace) {
            return None;
        }
        let mut words = rest.split_whitespace();
        let name = words.next()?;
        Some(name.to_owned())
    }

    fn hex_escape(&mut self, digits: usize, start: Position) -> Result<char, ParseError> {
        let mut value: u32 = 0;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err(start, "malformed unicode escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.err(start, "escape is not a unicode scalar value"))
    }

    fn iri_body(&mut self, start: Position) -> Result<String, ParseError> {
        let mut iri = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(start, "unterminated IRI"));
            };
            match c {
                '>' => break,
                '\\' => {
                    let esc = self.pos();
                    let decoded = match self.bump() {
                        Some('u') => self.hex_escape(4, esc)?,
                        Some('U') => self.hex_escape(8, esc)?,
                        _ => return Err(self.err(esc, "invalid escape in IRI")),
                    };
                    iri.push(decoded);
                }
                '\0'..=' ' | '<' | '"' | '{' | '}' | '|' | '^' | '`' => {
                    return Err(self.err(start, format!("character {c:?} not allowed in IRI")));
                }
                c => iri.push(c),
            }
        }
        if !has_scheme(&iri) {
            return Err(self.err(start, format!("IRI <{iri}> is not absolute")));
        }
        Ok(iri)
    }

    fn string(&mut self, start: Position) -> Result<String, ParseError> {
        let quote = self.bump().unwrap_or('"');
        let mut s = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(start, "unterminated string literal"));
            };
            match c {
                c if c == quote => break,
                '\n' | '\r' => return Err(self.err(start, "newline in string literal")),
                '\\' => {
                    let esc = self.pos();
                    let decoded = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4, esc)?,
                        Some('U') => self.hex_escape(8, esc)?,
                        _ => return Err(self.err(esc, "invalid escape in string literal")),
                    };
                    s.push(decoded);
                }
                c => s.push(c),
            }
        }
        Ok(s)
    }

    fn lang_tag(&mut self, start: Position) -> Result<String, ParseError> {
        let primary = self.take_while(|c| c.is_ascii_alphabetic());
        if primary.is_empty() {
            return Err(self.err(start, "empty language tag"));
        }
        let mut tag = primary;
        while self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.bump();
            tag.push('-');
            tag.push_str(&self.take_while(|c| c.is_ascii_alphanumeric()));
        }
        Ok(tag)
    }
}

fn has_scheme(iri: &str) -> bool {
    let mut chars = iri.chars();
    if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return false;
    }
    for c in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.') => {}
            _ => return false,
        }
    }
    false
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    Lexer {
        chars: text.chars().collect(),
        idx: 0,
        line: 1,
        column: 1,
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn rule_tokens() {
        assert_eq!(
            toks("{?S ?P ?O} => {?P a rdf:Property}."),
            vec![
                Tok::LBrace,
                Tok::Var("S".into()),
                Tok::Var("P".into()),
                Tok::Var("O".into()),
                Tok::RBrace,
                Tok::Implies,
                Tok::LBrace,
                Tok::Var("P".into()),
                Tok::A,
                Tok::PName {
                    prefix: "rdf".into(),
                    local: "Property".into()
                },
                Tok::RBrace,
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn trailing_dot_is_not_part_of_local_name() {
        assert_eq!(
            toks("ex:a."),
            vec![
                Tok::PName {
                    prefix: "ex".into(),
                    local: "a".into()
                },
                Tok::Dot
            ]
        );
        assert_eq!(
            toks("ex:a.b"),
            vec![Tok::PName {
                prefix: "ex".into(),
                local: "a.b".into()
            }]
        );
    }

    #[test]
    fn literal_with_lang_and_escapes() {
        assert_eq!(
            toks(r#""aA\n"@en-GB"#),
            vec![Tok::Str {
                lexical: "aA\n".into(),
                lang: Some("en-GB".into())
            }]
        );
    }

    #[test]
    fn annotations_and_comments() {
        assert_eq!(
            toks("# plain comment\n#@name rdfs-domain  (row 2)\n."),
            vec![Tok::NameAnnotation("rdfs-domain".into()), Tok::Dot]
        );
        assert_eq!(toks("#@named x\n"), vec![]);
    }

    #[test]
    fn positions_are_one_based() {
        let spanned = tokenize("\n  <http://e/x>").unwrap();
        assert_eq!(spanned[0].1, Position { line: 2, column: 3 });
    }

    #[test]
    fn errors_are_positioned() {
        let err = tokenize("<http://e/x> \n  <rel>").unwrap_err();
        assert_eq!(err.position(), Position { line: 2, column: 3 });
        assert!(tokenize("\"open").is_err());
        assert!(tokenize("?").is_err());
        assert!(tokenize("@base").is_err());
        assert!(tokenize("\"x\"@").is_err());
        assert!(tokenize("<http://e/\\u12>").is_err());
        assert!(tokenize("<http://e/\\uD800>").is_err());
    }
}
