use std::fmt::Write as _;
use std::str::FromStr;

use crate::term::Graph;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputMode {
    /// Only triples with an IRI or blank subject and an IRI predicate.
    #[default]
    Strict,
    /// Every triple, in the same surface syntax.
    Generalized,
}

impl FromStr for OutputMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(OutputMode::Strict),
            "generalized" => Ok(OutputMode::Generalized),
            other => Err(format!("unknown output mode '{other}'")),
        }
    }
}

/// One N-Triples line per triple, sorted by subject, predicate, object.
pub fn serialize_graph(g: &Graph, mode: OutputMode) -> String {
    let mut out = String::new();
    for t in g {
        if mode == OutputMode::Strict && !t.is_strict() {
            continue;
        }
        let _ = writeln!(out, "{t}");
    }
    out
}
