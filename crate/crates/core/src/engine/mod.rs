//! Forward-chaining materialization, consistency checking, querying and
//! derivation traces.
//!
//! [`materialize`] evaluates rules semi-naively: each round only considers
//! rule instances with at least one condition matched by a triple derived
//! in the previous round (the asserted graph in round 0). Within a round all
//! rule bodies are matched against the same frozen store, optionally in
//! parallel, and conclusions are inserted afterwards in rule order.
//!
//! [`materialize_naive`] re-evaluates every rule against the whole graph
//! until nothing changes. It shares no matching code with the semi-naive
//! path and serves as its reference.
//!
//! Inference is eager; there is no query-time (lazy) mode.
//!
//! When a `@false` rule matches, evaluation stops: the result is marked
//! inconsistent, carries the witnessing rule and binding, and its closure is
//! reset to the asserted triples.

mod naive;
mod seminaive;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::profiles::Profile;
use crate::store::{IdTriple, TripleStore};
use crate::term::{Binding, Graph, Pattern, Triple};

pub use naive::materialize_naive;
pub use seminaive::materialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of inferred (not asserted) triples.
    pub max_triples: usize,
    pub max_rounds: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_triples: 1_000_000,
            max_rounds: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub limits: Limits,
    /// Record one derivation per inferred triple, for [`explain`].
    pub trace: bool,
    /// Match rule bodies on the rayon pool within each round.
    pub parallel: bool,
    /// Track every (rule, binding) firing to count repeats across rounds.
    pub audit_firings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            limits: Limits::default(),
            trace: false,
            parallel: true,
            audit_firings: false,
        }
    }
}

impl Options {
    pub fn traced() -> Self {
        Options {
            trace: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    MaxTriples,
    MaxRounds,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::MaxTriples => "max-triples",
            LimitKind::MaxRounds => "max-rounds",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("resource limit exceeded: {kind} = {limit}")]
    ResourceLimit { kind: LimitKind, limit: usize },
    #[error("rule {rule}: ?{variable} occurs in the conclusion but in no condition")]
    UnsafeRule { rule: String, variable: String },
    #[error("rule {rule} has no conditions")]
    EmptyRule { rule: String },
    #[error("the store is inconsistent")]
    InconsistentStore,
    #[error("empty graph pattern")]
    EmptyQuery,
    #[error("materialization ran without tracing")]
    TracingDisabled,
}

/// A `@false` rule instance found in the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub binding: Binding,
    /// The rule's conditions under `binding`.
    pub premises: Vec<Triple>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} matched with {}", self.rule, self.binding)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Rule instances evaluated (solutions of rule bodies).
    pub firings: u64,
    /// Firings of a (rule, binding) pair already fired in an earlier round.
    /// Only counted with [`Options::audit_firings`].
    pub repeated_firings: u64,
}

/// One rule application: `rule` applied to `premises` concluded `conclusion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Triple,
    pub rule: String,
    pub premises: Vec<Triple>,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.conclusion, self.rule)?;
        for p in &self.premises {
            write!(f, "\n    {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Trace {
    /// First derivation of each inferred triple: rule index and premises.
    pub(crate) steps: HashMap<IdTriple, (usize, Vec<IdTriple>)>,
}

#[derive(Debug, Clone)]
pub struct InferenceResult {
    /// Asserted plus inferred triples, generalized triples included.
    pub closure: Graph,
    pub consistent: bool,
    pub violation: Option<Violation>,
    pub inferred_count: usize,
    pub iterations: usize,
    pub stats: Stats,
    store: Option<TripleStore>,
    trace: Option<Trace>,
    rule_names: Vec<String>,
}

impl InferenceResult {
    /// The triples that were inferred rather than asserted.
    pub fn inferred(&self, asserted: &Graph) -> Graph {
        self.closure
            .iter()
            .filter(|t| !asserted.contains(t))
            .cloned()
            .collect()
    }
}

pub(crate) fn rule_names(p: &Profile) -> Vec<String> {
    p.rules
        .iter()
        .enumerate()
        .map(|(i, r)| r.name.clone().unwrap_or_else(|| format!("#{}", i + 1)))
        .collect()
}

pub(crate) fn validate(p: &Profile) -> Result<(), EngineError> {
    for (rule, name) in p.rules.iter().zip(rule_names(p)) {
        if rule.conditions.is_empty() {
            return Err(EngineError::EmptyRule { rule: name });
        }
        if let Some(v) = rule.unsafe_variable() {
            return Err(EngineError::UnsafeRule {
                rule: name,
                variable: v.to_owned(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consistency {
    pub consistent: bool,
    pub violation: Option<Violation>,
}

/// Same verdict as `materialize(g, p, options).consistent`.
pub fn check_consistency(
    g: &Graph,
    p: &Profile,
    options: &Options,
) -> Result<Consistency, EngineError> {
    let options = Options {
        trace: false,
        ..*options
    };
    let r = materialize(g, p, &options)?;
    Ok(Consistency {
        consistent: r.consistent,
        violation: r.violation,
    })
}

/// Bindings of the basic graph pattern `ps` over the closure.
pub fn query(result: &InferenceResult, ps: &[Pattern]) -> Result<Vec<Binding>, EngineError> {
    if !result.consistent {
        return Err(EngineError::InconsistentStore);
    }
    if ps.is_empty() {
        return Err(EngineError::EmptyQuery);
    }
    Ok(match &result.store {
        Some(store) => store.match_conjunction(ps, None),
        None => TripleStore::from_graph(&result.closure).match_conjunction(ps, None),
    })
}

/// A well-founded derivation chain for `t`: every premise of every step is
/// asserted or concluded by an earlier step, and the last step concludes
/// `t`. Empty when `t` was asserted or is not in the closure.
pub fn explain(result: &InferenceResult, t: &Triple) -> Result<Vec<Derivation>, EngineError> {
    let (Some(trace), Some(store)) = (&result.trace, &result.store) else {
        return Err(EngineError::TracingDisabled);
    };
    let Some(root) = store.ids_of(t).filter(|ids| trace.steps.contains_key(ids)) else {
        return Ok(Vec::new());
    };
    let mut done: HashSet<IdTriple> = HashSet::new();
    let mut order = Vec::new();
    // (triple, premises already pushed)
    let mut stack = vec![(root, false)];
    while let Some((ids, expanded)) = stack.pop() {
        if done.contains(&ids) {
            continue;
        }
        let Some((_, premises)) = trace.steps.get(&ids) else {
            continue;
        };
        if expanded {
            done.insert(ids);
            order.push(ids);
        } else {
            stack.push((ids, true));
            for p in premises.iter().rev() {
                if !done.contains(p) && trace.steps.contains_key(p) {
                    stack.push((*p, false));
                }
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|ids| {
            let (rule, premises) = &trace.steps[&ids];
            Derivation {
                conclusion: store.triple(ids),
                rule: result.rule_names[*rule].clone(),
                premises: premises.iter().map(|&p| store.triple(p)).collect(),
            }
        })
        .collect())
}
