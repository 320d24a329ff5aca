//! Indexed in-memory triple store.
//!
//! Terms are interned to dense `u32` ids and each triple is kept in three
//! orderings (SPO, POS, OSP). Any combination of bound positions is a prefix
//! of one of them, so a lookup visits exactly the triples agreeing with the
//! bound positions and nothing else.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::term::{Binding, Graph, Pattern, PatternTerm, Term, Triple};

pub(crate) type TermId = u32;
pub(crate) type IdTriple = [TermId; 3];

#[derive(Debug, Clone, Default)]
pub(crate) struct Interner {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
}

impl Interner {
    pub(crate) fn intern(&mut self, t: &Term) -> TermId {
        if let Some(&id) = self.ids.get(t) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("term id space exhausted");
        self.terms.push(t.clone());
        self.ids.insert(t.clone(), id);
        id
    }

    pub(crate) fn get(&self, t: &Term) -> Option<TermId> {
        self.ids.get(t).copied()
    }

    pub(crate) fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }
}

/// The three permutation indexes over id triples.
#[derive(Debug, Clone, Default)]
pub(crate) struct Index {
    spo: BTreeSet<IdTriple>,
    pos: BTreeSet<IdTriple>,
    osp: BTreeSet<IdTriple>,
}

fn prefix_range(a: Option<TermId>, b: Option<TermId>) -> RangeInclusive<IdTriple> {
    match (a, b) {
        (Some(a), Some(b)) => [a, b, 0]..=[a, b, TermId::MAX],
        (Some(a), None) => [a, 0, 0]..=[a, TermId::MAX, TermId::MAX],
        _ => [0, 0, 0]..=[TermId::MAX; 3],
    }
}

impl Index {
    pub(crate) fn insert(&mut self, [s, p, o]: IdTriple) -> bool {
        if !self.spo.insert([s, p, o]) {
            return false;
        }
        self.pos.insert([p, o, s]);
        self.osp.insert([o, s, p]);
        true
    }

    pub(crate) fn contains(&self, t: &IdTriple) -> bool {
        self.spo.contains(t)
    }

    pub(crate) fn len(&self) -> usize {
        self.spo.len()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = &IdTriple> {
        self.spo.iter()
    }

    /// Calls `f` on every triple agreeing with the bound positions, in
    /// index order. Returns the number of index entries visited.
    pub(crate) fn scan(&self, mask: [Option<TermId>; 3], mut f: impl FnMut(IdTriple)) -> u64 {
        let mut visited = 0;
        match mask {
            [Some(s), Some(p), Some(o)] => {
                if self.spo.contains(&[s, p, o]) {
                    visited = 1;
                    f([s, p, o]);
                }
            }
            [None, Some(p), o] => {
                for &[p, o, s] in self.pos.range(prefix_range(Some(p), o)) {
                    visited += 1;
                    f([s, p, o]);
                }
            }
            [s, None, Some(o)] => {
                for &[o, s, p] in self.osp.range(prefix_range(Some(o), s)) {
                    visited += 1;
                    f([s, p, o]);
                }
            }
            [s, p, None] => {
                for &t in self.spo.range(prefix_range(s, p)) {
                    visited += 1;
                    f(t);
                }
            }
        }
        visited
    }
}

/// A pattern position after compilation: an interned constant or a variable slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Slot {
    Const(TermId),
    Var(usize),
}

pub(crate) type IdPattern = [Slot; 3];

/// Which triples a conjunct may match during a semi-naive join.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Source {
    /// Every stored triple.
    Full,
    /// Only triples in the delta.
    Delta,
    /// Stored triples outside the delta.
    Old,
}

/// Term-level patterns compiled against an interner, with variable names
/// mapped to slots in order of first occurrence.
pub(crate) struct Compiled {
    pub(crate) patterns: Vec<IdPattern>,
    pub(crate) vars: Vec<String>,
}

impl Compiled {
    /// Returns `None` if some constant is not interned (the patterns cannot match).
    pub(crate) fn lookup(interner: &Interner, ps: &[Pattern]) -> Option<Self> {
        Self::build(ps, |t| interner.get(t))
    }

    pub(crate) fn build(
        ps: &[Pattern],
        mut id_of: impl FnMut(&Term) -> Option<TermId>,
    ) -> Option<Self> {
        let mut vars: Vec<String> = Vec::new();
        let mut patterns = Vec::with_capacity(ps.len());
        for p in ps {
            let mut slots = [Slot::Var(0); 3];
            for (slot, pt) in slots.iter_mut().zip(p.positions()) {
                *slot = match pt {
                    PatternTerm::Const(t) => Slot::Const(id_of(t)?),
                    PatternTerm::Var(name) => {
                        let i = vars.iter().position(|v| v == name).unwrap_or_else(|| {
                            vars.push(name.clone());
                            vars.len() - 1
                        });
                        Slot::Var(i)
                    }
                };
            }
            patterns.push(slots);
        }
        Some(Compiled { patterns, vars })
    }

    /// Extends slot numbering with variables that only occur in `extra`.
    pub(crate) fn compile_more(
        &mut self,
        extra: &[Pattern],
        mut id_of: impl FnMut(&Term) -> TermId,
    ) -> Vec<IdPattern> {
        extra
            .iter()
            .map(|p| {
                let mut slots = [Slot::Var(0); 3];
                for (slot, pt) in slots.iter_mut().zip(p.positions()) {
                    *slot = match pt {
                        PatternTerm::Const(t) => Slot::Const(id_of(t)),
                        PatternTerm::Var(name) => {
                            let i = self.vars.iter().position(|v| v == name).unwrap_or_else(|| {
                                self.vars.push(name.clone());
                                self.vars.len() - 1
                            });
                            Slot::Var(i)
                        }
                    };
                }
                slots
            })
            .collect()
    }
}

/// Backtracking join over compiled conjuncts.
///
/// Conjuncts are picked greedily: most bound positions first, delta
/// conjuncts breaking ties, then earliest in the list. `emit` receives the
/// slot values of every solution.
pub(crate) struct Join<'a> {
    pub(crate) full: &'a Index,
    pub(crate) delta: Option<&'a Index>,
    pub(crate) patterns: &'a [IdPattern],
    pub(crate) sources: &'a [Source],
    pub(crate) nvars: usize,
}

impl Join<'_> {
    pub(crate) fn run(&self, mut emit: impl FnMut(&[TermId])) -> u64 {
        let mut slots = vec![None; self.nvars];
        let mut remaining: Vec<usize> = (0..self.patterns.len()).collect();
        let mut scans = 0;
        let mut values = vec![0; self.nvars];
        self.step(&mut remaining, &mut slots, &mut scans, &mut |slots| {
            for (v, s) in values.iter_mut().zip(slots) {
                *v = s.unwrap_or(TermId::MAX);
            }
            emit(&values)
        });
        scans
    }

    fn bound(slot: Slot, slots: &[Option<TermId>]) -> Option<TermId> {
        match slot {
            Slot::Const(id) => Some(id),
            Slot::Var(i) => slots[i],
        }
    }

    fn step(
        &self,
        remaining: &mut Vec<usize>,
        slots: &mut Vec<Option<TermId>>,
        scans: &mut u64,
        emit: &mut dyn FnMut(&[Option<TermId>]),
    ) {
        if remaining.is_empty() {
            emit(slots);
            return;
        }
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let bound = self.patterns[i]
                    .iter()
                    .filter(|&&s| Self::bound(s, slots).is_some())
                    .count();
                let delta = usize::from(self.sources[i] == Source::Delta);
                (k, bound * 2 + delta)
            })
            .rev()
            .max_by_key(|&(_, score)| score)
            .expect("nonempty");
        let i = remaining.remove(pick);
        let pattern = self.patterns[i];
        let mask = pattern.map(|s| Self::bound(s, slots));
        let (index, exclude) = match self.sources[i] {
            Source::Full => (self.full, None),
            Source::Delta => (self.delta.expect("delta source without delta"), None),
            Source::Old => (self.full, self.delta),
        };
        let mut newly: Vec<usize> = Vec::with_capacity(3);
        let visited = index.scan(mask, |t| {
            if exclude.is_some_and(|d| d.contains(&t)) {
                return;
            }
            newly.clear();
            let mut ok = true;
            for (slot, value) in pattern.iter().zip(t) {
                if let Slot::Var(v) = *slot {
                    match slots[v] {
                        Some(bound) if bound != value => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            slots[v] = Some(value);
                            newly.push(v);
                        }
                    }
                }
            }
            if ok {
                self.step(remaining, slots, scans, emit);
            }
            for &v in &newly {
                slots[v] = None;
            }
        });
        *scans += visited;
        remaining.insert(pick, i);
    }
}

/// Sources for the `k`-th semi-naive variant of an `n`-conjunct body:
/// conjuncts before `k` match old triples, `k` matches the delta, the rest
/// match everything. Every premise combination touching the delta is
/// produced by exactly one variant.
pub(crate) fn delta_variant(n: usize, k: usize) -> Vec<Source> {
    (0..n)
        .map(|j| match j.cmp(&k) {
            std::cmp::Ordering::Less => Source::Old,
            std::cmp::Ordering::Equal => Source::Delta,
            std::cmp::Ordering::Greater => Source::Full,
        })
        .collect()
}

/// Set of triples with SPO/POS/OSP indexes over interned terms.
///
/// Readers take `&self`; mutation needs `&mut self`, so a match can never
/// observe a store modified mid-iteration.
#[derive(Debug, Default)]
pub struct TripleStore {
    pub(crate) interner: Interner,
    pub(crate) index: Index,
    scans: AtomicU64,
}

impl Clone for TripleStore {
    fn clone(&self) -> Self {
        TripleStore {
            interner: self.interner.clone(),
            index: self.index.clone(),
            scans: AtomicU64::new(self.scan_count()),
        }
    }
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut store = Self::new();
        for t in g {
            store.insert(t.clone());
        }
        store
    }

    /// Returns true iff `t` was not already stored.
    pub fn insert(&mut self, t: Triple) -> bool {
        let ids = self.intern_triple(&t);
        self.index.insert(ids)
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.ids_of(t).is_some_and(|ids| self.index.contains(&ids))
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.index.iter().map(|&ids| self.triple(ids))
    }

    pub fn to_graph(&self) -> Graph {
        self.iter().collect()
    }

    /// Index entries visited by lookups since creation or the last reset.
    pub fn scan_count(&self) -> u64 {
        self.scans.load(Ordering::Relaxed)
    }

    pub fn reset_scan_count(&self) {
        self.scans.store(0, Ordering::Relaxed);
    }

    pub(crate) fn add_scans(&self, n: u64) {
        self.scans.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn intern_triple(&mut self, t: &Triple) -> IdTriple {
        t.terms().map(|term| self.interner.intern(term))
    }

    pub(crate) fn ids_of(&self, t: &Triple) -> Option<IdTriple> {
        let [s, p, o] = t.terms().map(|term| self.interner.get(term));
        Some([s?, p?, o?])
    }

    pub(crate) fn triple(&self, [s, p, o]: IdTriple) -> Triple {
        Triple::new(
            self.interner.term(s).clone(),
            self.interner.term(p).clone(),
            self.interner.term(o).clone(),
        )
    }

    pub(crate) fn binding(&self, vars: &[String], values: &[TermId]) -> Binding {
        vars.iter()
            .zip(values)
            .map(|(v, &id)| (v.clone(), self.interner.term(id).clone()))
            .collect()
    }

    /// Bindings over the variables of `p` whose instance of `p` is stored.
    pub fn match_pattern(&self, p: &Pattern) -> Vec<Binding> {
        self.match_conjunction(std::slice::from_ref(p), None)
    }

    /// Bindings satisfying every pattern at once, without duplicates.
    ///
    /// With `delta`, only bindings where at least one pattern is matched by
    /// a stored triple that is also in `delta` are returned.
    pub fn match_conjunction(&self, ps: &[Pattern], delta: Option<&Graph>) -> Vec<Binding> {
        let Some(compiled) = Compiled::lookup(&self.interner, ps) else {
            return Vec::new();
        };
        let nvars = compiled.vars.len();
        let mut seen: HashSet<Vec<TermId>> = HashSet::new();
        let mut out = Vec::new();
        let mut collect = |values: &[TermId]| {
            if seen.insert(values.to_vec()) {
                out.push(self.binding(&compiled.vars, values));
            }
        };
        match delta {
            None => {
                let sources = vec![Source::Full; ps.len()];
                let join = Join {
                    full: &self.index,
                    delta: None,
                    patterns: &compiled.patterns,
                    sources: &sources,
                    nvars,
                };
                self.add_scans(join.run(&mut collect));
            }
            Some(delta) => {
                let mut delta_index = Index::default();
                for t in delta {
                    if let Some(ids) = self.ids_of(t).filter(|ids| self.index.contains(ids)) {
                        delta_index.insert(ids);
                    }
                }
                for k in 0..ps.len() {
                    let sources = delta_variant(ps.len(), k);
                    let join = Join {
                        full: &self.index,
                        delta: Some(&delta_index),
                        patterns: &compiled.patterns,
                        sources: &sources,
                        nvars,
                    };
                    self.add_scans(join.run(&mut collect));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::{rdf, rdfs};

    fn ex(local: &str) -> Term {
        Term::iri(format!("http://ex.org/{local}"))
    }

    fn var(name: &str) -> PatternTerm {
        PatternTerm::var(name)
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(ex(s), ex(p), ex(o))
    }

    #[test]
    fn insert_reports_novelty() {
        let mut store = TripleStore::new();
        assert!(store.insert(t("a", "p", "b")));
        assert_eq!(store.len(), 1);
        assert!(!store.insert(t("a", "p", "b")));
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn generalized_triples_are_stored() {
        let mut store = TripleStore::new();
        let lit = Triple::new(Term::literal("x"), Term::iri(rdf::TYPE), Term::iri(rdfs::RESOURCE));
        assert!(store.insert(lit.clone()));
        assert!(store.contains(&lit));
    }

    #[test]
    fn match_single_binding() {
        let store = TripleStore::from_graph(
            &[Triple::new(ex("A"), Term::iri(rdf::TYPE), Term::iri(rdfs::CLASS))]
                .into_iter()
                .collect(),
        );
        let p = Pattern::new(var("x"), Term::iri(rdf::TYPE), Term::iri(rdfs::CLASS));
        assert_eq!(
            store.match_pattern(&p),
            vec![[("x", ex("A"))].into_iter().collect::<Binding>()]
        );
    }

    #[test]
    fn repeated_variables_bind_consistently() {
        let store =
            TripleStore::from_graph(&[t("a", "p", "a"), t("a", "p", "b")].into_iter().collect());
        let p = Pattern::new(var("Q"), ex("p"), var("Q"));
        assert_eq!(
            store.match_pattern(&p),
            vec![[("Q", ex("a"))].into_iter().collect::<Binding>()]
        );
    }

    #[test]
    fn all_variables_enumerate() {
        let store = TripleStore::from_graph(
            &[t("a", "p", "b"), t("b", "p", "c"), t("c", "q", "a")].into_iter().collect(),
        );
        let p = Pattern::new(var("s"), var("p"), var("o"));
        assert_eq!(store.match_pattern(&p).len(), 3);
    }

    #[test]
    fn domain_join() {
        let domain = Term::iri(rdfs::DOMAIN);
        let store = TripleStore::from_graph(
            &[
                Triple::new(ex("p"), domain.clone(), ex("C")),
                t("a", "p", "b"),
            ]
            .into_iter()
            .collect(),
        );
        let ps = [
            Pattern::new(var("P"), domain, var("C")),
            Pattern::new(var("S"), var("P"), var("O")),
        ];
        let expected: Binding = [("P", ex("p")), ("C", ex("C")), ("S", ex("a")), ("O", ex("b"))]
            .into_iter()
            .collect();
        assert_eq!(store.match_conjunction(&ps, None), vec![expected]);
    }

    #[test]
    fn unsatisfiable_and_empty_delta() {
        let store = TripleStore::from_graph(&[t("a", "p", "b")].into_iter().collect());
        let ps = [Pattern::new(var("x"), ex("p"), var("y")), Pattern::new(var("y"), ex("p"), var("z"))];
        assert!(store.match_conjunction(&ps, None).is_empty());
        let unknown = [Pattern::new(var("x"), ex("nowhere"), var("y"))];
        assert!(store.match_conjunction(&unknown, None).is_empty());
        let one = [Pattern::new(var("x"), ex("p"), var("y"))];
        assert!(store.match_conjunction(&one, Some(&Graph::new())).is_empty());
    }

    #[test]
    fn delta_restriction() {
        let store = TripleStore::from_graph(
            &[t("a", "p", "b"), t("b", "p", "c"), t("c", "p", "d")].into_iter().collect(),
        );
        let ps = [Pattern::new(var("x"), ex("p"), var("y")), Pattern::new(var("y"), ex("p"), var("z"))];
        let all = store.match_conjunction(&ps, None);
        assert_eq!(all.len(), 2);
        let delta: Graph = [t("c", "p", "d")].into_iter().collect();
        let restricted = store.match_conjunction(&ps, Some(&delta));
        assert_eq!(restricted.len(), 1);
        assert_eq!(restricted[0].get("z"), Some(&ex("d")));
    }

    #[test]
    fn scans_only_matching_entries() {
        let mut store = TripleStore::new();
        for i in 0..20 {
            store.insert(t(&format!("s{i}"), &format!("p{}", i % 4), &format!("o{}", i % 5)));
        }
        store.reset_scan_count();
        let rows = store.match_pattern(&Pattern::new(var("s"), ex("p1"), var("o")));
        assert_eq!(rows.len(), 5);
        assert_eq!(store.scan_count(), 5);
        store.reset_scan_count();
        let rows = store.match_pattern(&Pattern::new(var("s"), var("p"), ex("o2")));
        assert_eq!(rows.len(), 4);
        assert_eq!(store.scan_count(), 4);
    }
}
