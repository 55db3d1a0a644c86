//! The curated alignment tables against the vendored ontologies.

mod common;

use ontobench_core::alignment::{load_alignments, OntologyId};

fn table() -> ontobench_core::alignment::AlignmentTable {
    let dir = common::fixtures().join("alignment");
    load_alignments(&[dir.join("haystack.csv"), dir.join("brick.csv")], common::haystack(), common::brick()).unwrap()
}

fn camel(token: &str) -> String {
    let mut out = String::new();
    for (i, w) in token.split_whitespace().enumerate() {
        if i == 0 {
            out.push_str(&w.to_lowercase());
        } else {
            let mut c = w.chars();
            out.extend(c.next().map(|f| f.to_ascii_uppercase()));
            out.push_str(&c.as_str().to_lowercase());
        }
    }
    out
}

fn brick_name(token: &str) -> String {
    token
        .split_whitespace()
        .map(|w| {
            let mut c = w.chars();
            c.next().map(|f| f.to_ascii_uppercase()).into_iter().chain(c).collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("_")
}

#[test]
fn loads_cleanly_with_both_ontologies() {
    let t = table();
    assert!(t.len() > 100);
    for ont in OntologyId::ALL {
        assert!(t.entries().any(|e| e.ontology == ont && e.target.is_none()));
    }
}

#[test]
fn haystack_gaps_have_no_def() {
    let hs = common::haystack();
    for e in table().entries().filter(|e| e.ontology == OntologyId::Haystack && e.target.is_none()) {
        let name = camel(&e.token);
        assert!(hs.get_str(&name).is_none(), "{} is a gap but ^{name} exists", e.token);
        let missing_word = e.token.split_whitespace().any(|w| hs.get_str(&w.to_lowercase()).is_none());
        assert!(missing_word, "every word of {} is a def; a conjunct could express it", e.token);
    }
}

#[test]
fn brick_gaps_have_no_class() {
    let b = common::brick();
    for e in table().entries().filter(|e| e.ontology == OntologyId::Brick && e.target.is_none()) {
        let iri = b.expand(&brick_name(&e.token));
        assert!(!b.is_entity(&iri), "{} is a gap but {} exists", e.token, iri.local_name());
    }
    assert!(!b.is_entity(&b.expand("Condenser_Water_System")));
}

#[test]
fn loops_align_to_brick_systems() {
    let b = common::brick();
    assert!(b.systems.contains(&b.expand("Hot_Water_System")));
    assert!(b.kind_of(&b.expand("Hot_Water_System")).is_none());
    assert!(b.is_entity(&b.expand("Chilled_Water_System")));
}
