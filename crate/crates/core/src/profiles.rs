//! Shipped rule profiles and the vocabulary support report.
//!
//! | profile | rule files |
//! |---------|------------|
//! | `none`  | only user rules |
//! | `rdf`   | `rdf.n3` |
//! | `rdfs`  | `rdfs.n3` |
//! | `owlp`  | `rdfs.n3`, `owlp-properties.n3`, `owlp-classes.n3` |
//!
//! User rule files are appended after the built-in ones. All rules fire in one
//! saturating stratum, and no axiomatic triples are preloaded.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::syntax::{parse_rules, ParseError, Rule};
use crate::term::Term;
use crate::vocab;

pub const PROFILE_NAMES: [&str; 4] = ["none", "rdf", "rdfs", "owlp"];

struct Builtin {
    file: &'static str,
    text: &'static str,
}

const RDF: Builtin = Builtin {
    file: "rdf.n3",
    text: include_str!("../profiles/rdf.n3"),
};
const RDFS: Builtin = Builtin {
    file: "rdfs.n3",
    text: include_str!("../profiles/rdfs.n3"),
};
const OWLP_PROPERTIES: Builtin = Builtin {
    file: "owlp-properties.n3",
    text: include_str!("../profiles/owlp-properties.n3"),
};
const OWLP_CLASSES: Builtin = Builtin {
    file: "owlp-classes.n3",
    text: include_str!("../profiles/owlp-classes.n3"),
};
const PAPER_LITERAL: Builtin = Builtin {
    file: "paper-literal.n3",
    text: include_str!("../profiles/paper-literal.n3"),
};

/// Text of a shipped rule file, by file name (e.g. `"rdfs.n3"`).
pub fn builtin_rule_file(file: &str) -> Option<&'static str> {
    [RDF, RDFS, OWLP_PROPERTIES, OWLP_CLASSES, PAPER_LITERAL]
        .into_iter()
        .find(|b| b.file == file)
        .map(|b| b.text)
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("unknown profile '{0}' (expected one of none, rdf, rdfs, owlp)")]
    UnknownProfile(String),
    #[error("cannot read rule file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{error}")]
    Parse { file: String, error: ParseError },
}

/// A named, ordered rule set. Immutable after loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub name: String,
    pub rule_files: Vec<String>,
    /// Every rule has a name: its `#@name` annotation, or `<file>#<ordinal>`.
    pub rules: Vec<Rule>,
    /// Constant IRIs mentioned by the rules.
    pub vocabulary: BTreeSet<String>,
}

impl Profile {
    pub fn empty(name: &str) -> Self {
        Profile {
            name: name.to_owned(),
            rule_files: Vec::new(),
            rules: Vec::new(),
            vocabulary: BTreeSet::new(),
        }
    }

    /// Builds a profile from rules given directly, naming unnamed ones `<name>#<n>`.
    pub fn from_rules(name: &str, rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut p = Profile::empty(name);
        for (i, mut r) in rules.into_iter().enumerate() {
            if r.name.is_none() {
                r.name = Some(format!("{name}#{}", i + 1));
            }
            p.rules.push(r);
        }
        p.refresh_vocabulary();
        p
    }

    /// Parses `text` and appends its rules.
    pub fn add_rule_text(&mut self, file: &str, text: &str) -> Result<(), ProfileError> {
        let doc = parse_rules(text).map_err(|error| ProfileError::Parse {
            file: file.to_owned(),
            error,
        })?;
        let stem = Path::new(file)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.to_owned());
        for (i, mut rule) in doc.rules.into_iter().enumerate() {
            if rule.name.is_none() {
                rule.name = Some(format!("{stem}#{}", i + 1));
            }
            self.rules.push(rule);
        }
        self.rule_files.push(file.to_owned());
        self.refresh_vocabulary();
        Ok(())
    }

    pub fn add_rule_file(&mut self, path: &Path) -> Result<(), ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
            path: path.to_owned(),
            source,
        })?;
        self.add_rule_text(&path.display().to_string(), &text)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name.as_deref() == Some(name))
    }

    /// Every constant term of every rule.
    pub fn constants(&self) -> BTreeSet<Term> {
        self.rules
            .iter()
            .flat_map(Rule::constants)
            .cloned()
            .collect()
    }

    fn refresh_vocabulary(&mut self) {
        self.vocabulary = self
            .rules
            .iter()
            .flat_map(Rule::constants)
            .filter_map(Term::as_iri)
            .map(str::to_owned)
            .collect();
    }
}

/// Loads a shipped profile followed by `extra_rule_files`.
///
/// With `paper_literal`, the uncorrected transcriptions in `paper-literal.n3`
/// replace the built-in rules of the same name.
pub fn load_profile(
    name: &str,
    extra_rule_files: &[PathBuf],
    paper_literal: bool,
) -> Result<Profile, ProfileError> {
    let builtins: &[Builtin] = match name {
        "none" => &[],
        "rdf" => &[RDF],
        "rdfs" => &[RDFS],
        "owlp" => &[RDFS, OWLP_PROPERTIES, OWLP_CLASSES],
        other => return Err(ProfileError::UnknownProfile(other.to_owned())),
    };
    let mut profile = Profile::empty(name);
    for b in builtins {
        profile.add_rule_text(b.file, b.text)?;
    }
    if paper_literal {
        let mut literal = Profile::empty("paper-literal");
        literal.add_rule_text(PAPER_LITERAL.file, PAPER_LITERAL.text)?;
        for replacement in literal.rules {
            if let Some(slot) = profile
                .rules
                .iter_mut()
                .find(|r| r.name == replacement.name)
            {
                *slot = replacement;
            }
        }
        profile.refresh_vocabulary();
    }
    for path in extra_rule_files {
        profile.add_rule_file(path)?;
    }
    Ok(profile)
}

/// Vocabulary rows of the OWL profile comparison, with the OWL-P column.
pub const OWL_PROFILE_TERMS: [(&str, bool); 43] = [
    ("owl:AllDifferent", false),
    ("owl:AllDisjointClasses", false),
    ("owl:AllDisjointProperties", false),
    ("owl:allValuesFrom", false),
    ("owl:assertionProperty", false),
    ("owl:AsymmetricProperty", true),
    ("owl:cardinality", false),
    ("owl:complementOf", false),
    ("owl:DatatypeProperty", true),
    ("owl:differentFrom", true),
    ("owl:disjointUnionOf", false),
    ("owl:disjointWith", true),
    ("owl:equivalentClass", true),
    ("owl:equivalentProperty", true),
    ("owl:FunctionalProperty", true),
    ("owl:hasKey", false),
    ("owl:hasSelf", false),
    ("owl:hasValue", false),
    ("owl:intersectionOf", false),
    ("owl:InverseFunctionalProperty", true),
    ("owl:inverseOf", true),
    ("owl:IrreflexiveProperty", true),
    ("owl:maxCardinality", false),
    ("owl:minCardinality", false),
    ("owl:ObjectProperty", true),
    ("owl:oneOf", false),
    ("owl:propertyChainAxiom", false),
    ("owl:propertyDisjointWith", true),
    ("owl:qualifiedCardinality", false),
    ("owl:qualifiedMaxCardinality", false),
    ("owl:qualifiedMinCardinality", false),
    ("owl:sameAs", true),
    ("owl:someValuesFrom", false),
    ("owl:sourceIndividual", false),
    ("owl:SymmetricProperty", true),
    ("owl:targetIndividual", false),
    ("owl:targetValue", false),
    ("owl:TransitiveProperty", true),
    ("owl:unionOf", false),
    ("rdfs:domain", true),
    ("rdfs:range", true),
    ("rdfs:subClassOf", true),
    ("rdfs:subPropertyOf", true),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub term: &'static str,
    pub iri: String,
    pub supported: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileReport {
    pub profile: String,
    pub rows: Vec<ReportRow>,
}

impl ProfileReport {
    pub fn supported_terms(&self) -> BTreeSet<&'static str> {
        self.rows
            .iter()
            .filter(|r| r.supported)
            .map(|r| r.term)
            .collect()
    }
}

/// Tab-separated: a header line, then `term\tyes|no` per row.
impl fmt::Display for ProfileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "term\t{}", self.profile)?;
        for row in &self.rows {
            writeln!(f, "{}\t{}", row.term, if row.supported { "yes" } else { "no" })?;
        }
        Ok(())
    }
}

/// For each compared vocabulary term, whether some rule of `p` mentions it.
pub fn profile_report(p: &Profile) -> ProfileReport {
    let rows = OWL_PROFILE_TERMS
        .iter()
        .map(|&(term, _)| {
            let (prefix, local) = term.split_once(':').expect("curie");
            let iri = vocab::expand_builtin(prefix, local).expect("built-in prefix");
            let supported = p.vocabulary.contains(&iri);
            ReportRow {
                term,
                iri,
                supported,
            }
        })
        .collect();
    ProfileReport {
        profile: p.name.clone(),
        rows,
    }
}
