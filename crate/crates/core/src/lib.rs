//! A deductive RDF graph store.
//!
//! Data is read from N-Triples (with `@prefix` abbreviations), rules from a
//! flat N3 fragment, and the entailments of a rule profile are materialized
//! by semi-naive forward chaining. Rules concluding `@false` detect
//! inconsistency. Queries are basic graph patterns over the closure.
//!
//! ```
//! use n3store::{engine, profiles, syntax};
//!
//! let data = syntax::parse_data(
//!     "<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .",
//!     "f0",
//! ).unwrap();
//! let profile = profiles::load_profile("rdfs", &[], false).unwrap();
//! let result = engine::materialize(&data, &profile, &engine::Options::default()).unwrap();
//! assert!(result.consistent);
//! let rows = engine::query(&result, &syntax::parse_patterns(
//!     "<http://ex.org/p> a ?class",
//! ).unwrap()).unwrap();
//! // rdf:Property and rdfs:Resource
//! assert_eq!(rows.len(), 2);
//! ```

pub mod engine;
pub mod profiles;
pub mod store;
pub mod syntax;
pub mod term;
pub mod vocab;

pub use store::TripleStore;
pub use term::{apply_binding, is_strict, Binding, Graph, Literal, Pattern, PatternTerm, Term, Triple};
