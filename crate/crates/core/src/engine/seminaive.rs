use std::collections::HashSet;

use rayon::prelude::*;

use super::{
    rule_names, validate, EngineError, InferenceResult, LimitKind, Options, Stats, Trace,
    Violation,
};
use crate::profiles::Profile;
use crate::store::{delta_variant, Compiled, IdPattern, IdTriple, Index, Join, Slot, TermId, TripleStore};
use crate::term::Graph;

struct CompiledRule {
    body: Vec<IdPattern>,
    head: Vec<IdPattern>,
    vars: Vec<String>,
    falsity: bool,
}

fn compile(store: &mut TripleStore, p: &Profile) -> Vec<CompiledRule> {
    p.rules
        .iter()
        .map(|rule| {
            let mut compiled = Compiled::build(&rule.conditions, |t| Some(store.interner.intern(t)))
                .expect("interning never fails");
            let head = compiled.compile_more(rule.conclusions(), |t| store.interner.intern(t));
            CompiledRule {
                body: compiled.patterns,
                head,
                vars: compiled.vars,
                falsity: rule.is_falsity(),
            }
        })
        .collect()
}

fn instantiate(p: &IdPattern, values: &[TermId]) -> IdTriple {
    p.map(|slot| match slot {
        Slot::Const(id) => id,
        Slot::Var(v) => values[v],
    })
}

/// Solutions (slot values) of one rule body with at least one conjunct in `delta`.
fn fire(rule: &CompiledRule, full: &Index, delta: &Index, stop_at_first: bool) -> (Vec<Vec<TermId>>, u64) {
    let n = rule.body.len();
    let mut out = Vec::new();
    let mut scans = 0;
    for k in 0..n {
        let sources = delta_variant(n, k);
        let join = Join {
            full,
            delta: Some(delta),
            patterns: &rule.body,
            sources: &sources,
            nvars: rule.vars.len(),
        };
        scans += join.run(|values| {
            if !(stop_at_first && !out.is_empty()) {
                out.push(values.to_vec());
            }
        });
        if stop_at_first && !out.is_empty() {
            break;
        }
    }
    (out, scans)
}

/// Semi-naive materialization; set-equal to [`super::materialize_naive`].
pub fn materialize(g: &Graph, p: &Profile, options: &Options) -> Result<InferenceResult, EngineError> {
    validate(p)?;
    let names = rule_names(p);
    let mut store = TripleStore::new();
    let mut delta = Index::default();
    for t in g {
        let ids = store.intern_triple(t);
        store.index.insert(ids);
        delta.insert(ids);
    }
    let rules = compile(&mut store, p);
    let mut trace = options.trace.then(Trace::default);
    let mut audit: HashSet<(usize, Vec<TermId>)> = HashSet::new();
    let mut stats = Stats::default();
    let mut inferred = 0usize;
    let mut rounds = 0usize;

    while delta.len() > 0 {
        rounds += 1;
        if rounds > options.limits.max_rounds {
            return Err(EngineError::ResourceLimit {
                kind: LimitKind::MaxRounds,
                limit: options.limits.max_rounds,
            });
        }
        let full = &store.index;
        let eval = |rule: &CompiledRule| fire(rule, full, &delta, rule.falsity);
        let outputs: Vec<(Vec<Vec<TermId>>, u64)> = if options.parallel {
            rules.par_iter().map(eval).collect()
        } else {
            rules.iter().map(eval).collect()
        };
        store.add_scans(outputs.iter().map(|(_, s)| s).sum());

        if let Some((i, values)) = rules
            .iter()
            .zip(&outputs)
            .enumerate()
            .find_map(|(i, (r, (sols, _)))| (r.falsity && !sols.is_empty()).then(|| (i, &sols[0])))
        {
            let rule = &rules[i];
            let violation = Violation {
                rule: names[i].clone(),
                binding: store.binding(&rule.vars, values),
                premises: rule.body.iter().map(|b| store.triple(instantiate(b, values))).collect(),
            };
            stats.firings += outputs.iter().map(|(s, _)| s.len() as u64).sum::<u64>();
            return Ok(InferenceResult {
                closure: g.clone(),
                consistent: false,
                violation: Some(violation),
                inferred_count: 0,
                iterations: rounds,
                stats,
                store: None,
                trace: None,
                rule_names: names,
            });
        }

        let mut next = Index::default();
        for (i, (rule, (solutions, _))) in rules.iter().zip(outputs).enumerate() {
            stats.firings += solutions.len() as u64;
            for values in solutions {
                for head in &rule.head {
                    let t = instantiate(head, &values);
                    if store.index.insert(t) {
                        next.insert(t);
                        inferred += 1;
                        if inferred > options.limits.max_triples {
                            return Err(EngineError::ResourceLimit {
                                kind: LimitKind::MaxTriples,
                                limit: options.limits.max_triples,
                            });
                        }
                        if let Some(trace) = trace.as_mut() {
                            let premises = rule.body.iter().map(|b| instantiate(b, &values)).collect();
                            trace.steps.insert(t, (i, premises));
                        }
                    }
                }
                if options.audit_firings && !audit.insert((i, values)) {
                    stats.repeated_firings += 1;
                }
            }
        }
        delta = next;
    }

    Ok(InferenceResult {
        closure: store.to_graph(),
        consistent: true,
        violation: None,
        inferred_count: inferred,
        iterations: rounds,
        stats,
        store: Some(store),
        trace,
        rule_names: names,
    })
}
