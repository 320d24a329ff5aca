use n3store::profiles::builtin_rule_file;
use n3store::syntax::{
    parse_data_bytes, parse_data_with, parse_rules, parse_rules_bytes, serialize_graph,
    DataOptions, OutputMode, ParseError,
};
use n3store::{Graph, Term, Triple};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn iri() -> impl Strategy<Value = Term> {
    // includes characters that must be written as \u escapes
    "[a-z0-9 <>\"{}|^`\\\\é\u{1F600}]{0,6}".prop_map(|local| Term::iri(format!("http://ex.org/{local}")))
}

fn literal() -> impl Strategy<Value = Term> {
    let lexical = "(\\PC|[\n\r\t\"'\\\\\u{0}\u{7f}]){0,8}";
    prop_oneof![
        lexical.prop_map(Term::literal),
        (lexical, "[a-z]{1,3}(-[a-z0-9]{1,4})?").prop_map(|(l, tag)| Term::lang(l, tag)),
        (lexical, iri()).prop_map(|(l, dt)| Term::typed(l, dt.as_iri().unwrap())),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => iri(),
        1 => "[a-z][a-z0-9_-]{0,4}".prop_map(Term::blank),
        2 => literal(),
    ]
}

fn graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec((term(), term(), term()), 0..20)
        .prop_map(|ts| ts.into_iter().map(|(s, p, o)| Triple::new(s, p, o)).collect())
}

fn reparse(text: &str, generalized: bool) -> Graph {
    let options = DataOptions::source("");
    let options = if generalized { options.generalized() } else { options };
    parse_data_with(text, &options).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn generalized_round_trip(g in graph()) {
        let text = serialize_graph(&g, OutputMode::Generalized);
        let back = reparse(&text, true);
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back, OutputMode::Generalized), text);
    }

    #[test]
    fn strict_output_is_strict_and_stable(g in graph()) {
        let text = serialize_graph(&g, OutputMode::Strict);
        let back = reparse(&text, false);
        let strict: Graph = g.iter().filter(|t| t.is_strict()).cloned().collect();
        prop_assert_eq!(&back, &strict);
        prop_assert_eq!(serialize_graph(&back, OutputMode::Strict), text);
    }
}

#[test]
fn builtin_rule_files_round_trip() {
    for file in ["rdf.n3", "rdfs.n3", "owlp-properties.n3", "owlp-classes.n3", "paper-literal.n3"] {
        let doc = parse_rules(builtin_rule_file(file).unwrap()).unwrap();
        let text: String = doc
            .rules
            .iter()
            .map(|r| format!("#@name {}\n{r}\n", r.name.as_deref().unwrap()))
            .collect();
        let again = parse_rules(&text).unwrap_or_else(|e| panic!("{file}: {e}\n{text}"));
        assert_eq!(again.rules, doc.rules, "{file}");
    }
}

fn assert_positioned(e: &ParseError, input: &[u8]) {
    let at = e.position();
    let lines = input.iter().filter(|&&b| b == b'\n').count() + 1;
    assert!(at.line >= 1 && at.column >= 1, "{e}");
    assert!(at.line <= lines, "{e} beyond {lines} lines");
    assert!(e.to_string().starts_with(&format!("{}:{}", at.line, at.column)), "{e}");
}

/// Random inputs built from N3 fragments and raw bytes.
fn fuzz_input(rng: &mut ChaCha8Rng) -> Vec<u8> {
    const PIECES: [&str; 24] = [
        "<http://ex.org/a>", "<rel>", "ex:", "rdf:type", "_:b", "?x", "\"s\"", "'t'", "@en",
        "^^", "a", "{", "}", "=>", ".", "@prefix", "@false", "#@name r", "#c\n", "\n", " ",
        "\\u00", "\"\\", "<",
    ];
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(0..12) {
        if rng.gen_bool(0.7) {
            out.extend_from_slice(PIECES[rng.gen_range(0..PIECES.len())].as_bytes());
        } else {
            out.push(rng.gen());
        }
    }
    out
}

#[test]
fn fuzzed_parsers_fail_with_positions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let generalized = DataOptions::source("f0").generalized();
    for _ in 0..20_000 {
        let input = fuzz_input(&mut rng);
        if let Err(e) = parse_data_bytes(&input, &generalized) {
            assert_positioned(&e, &input);
        }
        if let Err(e) = parse_rules_bytes(&input) {
            assert_positioned(&e, &input);
        }
    }
}
