//! Shared fixtures for integration tests: the randomized graph corpus and
//! brute-force reference checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use n3store::profiles::Profile;
use n3store::{Binding, Graph, Pattern, PatternTerm, Term, Triple};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";

pub fn ex(local: &str) -> Term {
    Term::iri(format!("http://ex.org/{local}"))
}

const PROPERTY_SEEDS: [&str; 12] = [
    "rdf:type",
    "rdfs:subClassOf",
    "rdfs:subPropertyOf",
    "rdfs:domain",
    "rdfs:range",
    "owl:sameAs",
    "owl:differentFrom",
    "owl:inverseOf",
    "owl:equivalentClass",
    "owl:equivalentProperty",
    "owl:propertyDisjointWith",
    "owl:disjointWith",
];

const CLASS_SEEDS: [&str; 12] = [
    "rdfs:Class",
    "rdfs:Datatype",
    "rdfs:ContainerMembershipProperty",
    "rdf:Property",
    "owl:Class",
    "owl:ObjectProperty",
    "owl:DatatypeProperty",
    "owl:TransitiveProperty",
    "owl:SymmetricProperty",
    "owl:FunctionalProperty",
    "owl:InverseFunctionalProperty",
    "owl:IrreflexiveProperty",
];

fn curie(c: &str) -> Term {
    let (prefix, local) = c.split_once(':').unwrap();
    let ns = match prefix {
        "rdf" => RDF,
        "rdfs" => RDFS,
        _ => OWL,
    };
    Term::iri(format!("{ns}{local}"))
}

/// One random graph: at most 30 triples over at most 10 IRIs (some from
/// the RDFS/OWL vocabulary) and at most 3 literals.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n_vocab = rng.gen_range(1..=5);
    let n_plain = rng.gen_range(2..=10 - n_vocab);
    let mut vocab: Vec<&str> = PROPERTY_SEEDS.iter().chain(&CLASS_SEEDS).copied().collect();
    vocab.shuffle(rng);
    // keep rdf:type likely, it drives most class and property rules
    if rng.gen_bool(0.7) && !vocab[..n_vocab].contains(&"rdf:type") {
        vocab[0] = "rdf:type";
    }
    let mut iris: Vec<Term> = vocab[..n_vocab].iter().map(|c| curie(c)).collect();
    iris.extend((0..n_plain).map(|i| ex(&format!("e{i}"))));
    let literals: Vec<Term> = (0..rng.gen_range(0..=3))
        .map(|i| match i {
            0 => Term::literal("v"),
            1 => Term::lang("v", "en"),
            _ => Term::typed("1", "http://www.w3.org/2001/XMLSchema#int"),
        })
        .collect();
    let plain = &iris[n_vocab..];
    let n = rng.gen_range(0..=30);
    let mut g = Graph::new();
    for _ in 0..n {
        let s = plain.choose(rng).unwrap().clone();
        let p = if rng.gen_bool(0.5) {
            iris[..n_vocab].choose(rng).unwrap().clone()
        } else {
            plain.choose(rng).unwrap().clone()
        };
        let o = if !literals.is_empty() && rng.gen_bool(0.15) {
            literals.choose(rng).unwrap().clone()
        } else {
            iris.choose(rng).unwrap().clone()
        };
        g.insert(Triple::new(s, p, o));
    }
    g
}

pub fn corpus(seed: u64, count: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng)).collect()
}

/// Brute force: bindings of one pattern by filtering every triple.
pub fn brute_force_match(g: &Graph, p: &Pattern) -> BTreeSet<Binding> {
    let mut out = BTreeSet::new();
    'triples: for t in g {
        let mut b = Binding::new();
        for (pt, term) in p.positions().into_iter().zip(t.terms()) {
            match pt {
                PatternTerm::Const(c) if c != term => continue 'triples,
                PatternTerm::Const(_) => {}
                PatternTerm::Var(v) => match b.get(v) {
                    Some(bound) if bound != term => continue 'triples,
                    Some(_) => {}
                    None => {
                        b.insert(v.clone(), term.clone());
                    }
                },
            }
        }
        out.insert(b);
    }
    out
}

/// Fails unless every closure term is an input term or a rule constant.
pub fn assert_term_bound(input: &Graph, profile: &Profile, closure: &Graph) {
    let mut allowed = input.terms();
    allowed.extend(profile.constants());
    for t in closure {
        for term in t.terms() {
            assert!(allowed.contains(term), "{t} uses {term}, outside input terms and rule constants");
        }
    }
    let n = allowed.len();
    assert!(closure.len() <= n * n * n);
}

/// The sameAs pairs over terms of `input`.
pub fn same_as_relation(input: &Graph, closure: &Graph) -> BTreeSet<(Term, Term)> {
    let terms = input.terms();
    let same = curie("owl:sameAs");
    closure
        .iter()
        .filter(|t| t.predicate == same && terms.contains(&t.subject) && terms.contains(&t.object))
        .map(|t| (t.subject.clone(), t.object.clone()))
        .collect()
}

/// Fails unless the sameAs relation on input terms is an equivalence.
pub fn assert_same_as_equivalence(input: &Graph, closure: &Graph) {
    let rel = same_as_relation(input, closure);
    for term in input.terms() {
        assert!(rel.contains(&(term.clone(), term.clone())), "not reflexive at {term}");
    }
    for (a, b) in &rel {
        assert!(rel.contains(&(b.clone(), a.clone())), "not symmetric at {a} {b}");
        for (c, d) in rel.range((b.clone(), Term::Iri(String::new()))..) {
            if c != b {
                break;
            }
            assert!(rel.contains(&(a.clone(), d.clone())), "not transitive at {a} {b} {d}");
        }
    }
}
