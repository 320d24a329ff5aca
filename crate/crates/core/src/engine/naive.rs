use std::collections::HashMap;

use super::{rule_names, validate, EngineError, InferenceResult, LimitKind, Options, Stats, Violation};
use crate::profiles::Profile;
use crate::syntax::Rule;
use crate::term::{Binding, Graph, Pattern, PatternTerm, Term, Triple};

/// Triples of one iteration's snapshot, grouped by each position.
struct Snapshot<'a> {
    all: Vec<&'a Triple>,
    by_position: [HashMap<&'a Term, Vec<&'a Triple>>; 3],
}

impl<'a> Snapshot<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut by_position: [HashMap<&Term, Vec<&Triple>>; 3] = Default::default();
        for t in g {
            for (map, term) in by_position.iter_mut().zip(t.terms()) {
                map.entry(term).or_default().push(t);
            }
        }
        Snapshot {
            all: g.iter().collect(),
            by_position,
        }
    }

    /// The shortest list of triples agreeing with one resolved position.
    fn candidates(&self, resolved: [Option<&Term>; 3]) -> &[&'a Triple] {
        let mut best: &[&Triple] = &self.all;
        for (map, term) in self.by_position.iter().zip(resolved) {
            if let Some(term) = term {
                let list = map.get(term).map(Vec::as_slice).unwrap_or(&[]);
                if list.len() < best.len() {
                    best = list;
                }
            }
        }
        best
    }
}

#[derive(Clone, Copy)]
enum Pos<'r> {
    Const(&'r Term),
    Var(usize),
}

/// A rule body with variables numbered in order of first occurrence.
struct Body<'r> {
    patterns: Vec<[Pos<'r>; 3]>,
    vars: Vec<&'r str>,
}

impl<'r> Body<'r> {
    fn new(rule: &'r Rule) -> Self {
        let mut vars: Vec<&str> = Vec::new();
        let mut patterns = Vec::new();
        for p in &rule.conditions {
            patterns.push(p.positions().map(|pt| match pt {
                PatternTerm::Const(t) => Pos::Const(t),
                PatternTerm::Var(v) => Pos::Var(match vars.iter().position(|x| x == v) {
                    Some(i) => i,
                    None => {
                        vars.push(v);
                        vars.len() - 1
                    }
                }),
            }));
        }
        Body { patterns, vars }
    }

    fn binding(&self, values: &[Option<&Term>]) -> Binding {
        self.vars
            .iter()
            .zip(values)
            .map(|(v, t)| (*v, t.expect("complete solution").clone()))
            .collect()
    }
}

fn resolve<'a>(pos: Pos<'a>, values: &[Option<&'a Term>]) -> Option<&'a Term> {
    match pos {
        Pos::Const(t) => Some(t),
        Pos::Var(i) => values[i],
    }
}

/// All solutions of the body over the snapshot, by backtracking. The
/// conjunct with the most resolved positions is tried first.
fn solve<'a>(
    snap: &Snapshot<'a>,
    body: &Body<'a>,
    remaining: &mut Vec<usize>,
    values: &mut Vec<Option<&'a Term>>,
    emit: &mut dyn FnMut(&[Option<&'a Term>]),
) {
    if remaining.is_empty() {
        emit(values);
        return;
    }
    let score = |i: usize| {
        body.patterns[i]
            .iter()
            .filter(|&&pos| resolve(pos, values).is_some())
            .count()
    };
    let mut best = 0;
    for k in 1..remaining.len() {
        if score(remaining[k]) > score(remaining[best]) {
            best = k;
        }
    }
    let i = remaining.remove(best);
    let pattern = body.patterns[i];
    let resolved = pattern.map(|pos| resolve(pos, values));
    for t in snap.candidates(resolved) {
        let mut fresh: Vec<usize> = Vec::new();
        let mut ok = true;
        for (pos, term) in pattern.iter().zip(t.terms()) {
            match *pos {
                Pos::Const(c) => ok = c == term,
                Pos::Var(v) => match values[v] {
                    Some(bound) => ok = bound == term,
                    None => {
                        values[v] = Some(term);
                        fresh.push(v);
                    }
                },
            }
            if !ok {
                break;
            }
        }
        if ok {
            solve(snap, body, remaining, values, emit);
        }
        for v in fresh {
            values[v] = None;
        }
    }
    remaining.insert(best, i);
}

fn solutions<'a>(snap: &Snapshot<'a>, body: &Body<'a>, emit: &mut dyn FnMut(&[Option<&'a Term>])) {
    let mut values = vec![None; body.vars.len()];
    let mut remaining: Vec<usize> = (0..body.patterns.len()).collect();
    solve(snap, body, &mut remaining, &mut values, emit);
}

fn instantiate(p: &Pattern, body: &Body<'_>, values: &[Option<&Term>]) -> Triple {
    let term = |pt: &PatternTerm| match pt {
        PatternTerm::Const(t) => t.clone(),
        PatternTerm::Var(v) => {
            let i = body.vars.iter().position(|x| x == v).expect("safe rule");
            values[i].expect("complete solution").clone()
        }
    };
    Triple::new(term(&p.subject), term(&p.predicate), term(&p.object))
}

/// Reference fixpoint: every rule against the whole graph, until an
/// iteration adds nothing.
pub fn materialize_naive(
    g: &Graph,
    p: &Profile,
    options: &Options,
) -> Result<InferenceResult, EngineError> {
    validate(p)?;
    let names = rule_names(p);
    let mut closure = g.clone();
    let mut stats = Stats::default();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > options.limits.max_rounds {
            return Err(EngineError::ResourceLimit {
                kind: LimitKind::MaxRounds,
                limit: options.limits.max_rounds,
            });
        }
        let mut new = Vec::new();
        {
            let closure_ref = &closure;
            let snap = Snapshot::new(closure_ref);
            for (rule, name) in p.rules.iter().zip(&names) {
                let body = Body::new(rule);
                if rule.is_falsity() {
                    let mut witness = None;
                    solutions(&snap, &body, &mut |values| {
                        stats.firings += 1;
                        if witness.is_none() {
                            witness = Some(body.binding(values));
                        }
                    });
                    if let Some(b) = witness {
                        let premises = rule
                            .conditions
                            .iter()
                            .map(|c| c.apply(&b).expect("safe rule"))
                            .collect();
                        return Ok(InferenceResult {
                            closure: g.clone(),
                            consistent: false,
                            violation: Some(Violation {
                                rule: name.clone(),
                                binding: b,
                                premises,
                            }),
                            inferred_count: 0,
                            iterations,
                            stats,
                            store: None,
                            trace: None,
                            rule_names: names,
                        });
                    }
                    continue;
                }
                solutions(&snap, &body, &mut |values| {
                    stats.firings += 1;
                    for head in rule.conclusions() {
                        let t = instantiate(head, &body, values);
                        if !closure_ref.contains(&t) {
                            new.push(t);
                        }
                    }
                });
            }
        }
        let mut added = 0;
        for t in new {
            if closure.insert(t) {
                added += 1;
            }
        }
        if closure.len() - g.len() > options.limits.max_triples {
            return Err(EngineError::ResourceLimit {
                kind: LimitKind::MaxTriples,
                limit: options.limits.max_triples,
            });
        }
        if added == 0 {
            break;
        }
    }
    Ok(InferenceResult {
        inferred_count: closure.len() - g.len(),
        closure,
        consistent: true,
        violation: None,
        iterations,
        stats,
        store: None,
        trace: None,
        rule_names: names,
    })
}
