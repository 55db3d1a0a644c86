//! The vendored Haystack def libraries against the counts recorded by the
//! independent converter in `tools/convert_haystack_defs.py`.

use std::path::PathBuf;

use ontobench_core::model::Symbol;
use ontobench_core::trio::{build_namespace, load_haystack_dir, parse_trio_lenient, serialize};
use serde_json::Value;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn oracle() -> Value {
    let text = std::fs::read_to_string(data().join("oracles/haystack.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn sym(s: &str) -> Symbol {
    Symbol::parse(s).unwrap()
}

#[test]
fn vendored_libs_parse_without_errors() {
    let dir = data().join("haystack");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|x| x == "trio") {
            let text = std::fs::read_to_string(&path).unwrap();
            let p = parse_trio_lenient(&text, &path.display().to_string());
            assert!(p.errors.is_empty(), "{:?}", p.errors);
        }
    }
}

#[test]
fn def_counts_match_oracle() {
    let o = oracle();
    let ns = load_haystack_dir(&data().join("haystack")).unwrap();
    assert_eq!(ns.len() as u64, o["def_count"].as_u64().unwrap());
    for (lib, n) in o["libs"].as_object().unwrap() {
        assert_eq!(ns.libs()[lib].len() as u64, n.as_u64().unwrap(), "lib {lib}");
    }
    ns.check_acyclic().unwrap();
}

#[test]
fn samples_match_oracle() {
    let o = oracle();
    let ns = load_haystack_dir(&data().join("haystack")).unwrap();
    for (name, sample) in o["samples"].as_object().unwrap() {
        let def = ns.get(&sym(name)).unwrap();
        let is: Vec<String> = def.supertypes.iter().map(|s| s.to_string()).collect();
        let want: Vec<String> = sample["is"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        assert_eq!(is, want, "{name}");
        assert_eq!(def.child_protos.len() as u64, sample["children"].as_u64().unwrap(), "{name}");
    }
    let refs: Vec<String> = ns
        .defs()
        .filter(|d| d.supertypes.iter().any(|s| s.as_str() == "ref"))
        .map(|d| d.symbol.to_string())
        .collect();
    let want: Vec<String> = o["ref_defs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    assert_eq!(refs, want);
}

#[test]
fn ahu_is_equipment() {
    let ns = load_haystack_dir(&data().join("haystack")).unwrap();
    let closure = ns.supertype_closure(&sym("ahu")).unwrap();
    assert!(closure.contains(&sym("equip")));
    assert!(ns.get_str("equipRef").unwrap().refs.get("of") == Some(&sym("equip")));
}

#[test]
fn vendored_round_trip_and_order_independence() {
    let dir = data().join("haystack");
    let mut libs = Vec::new();
    for name in ["ph", "phIct", "phIoT", "phScience"] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.trio"))).unwrap();
        let p = parse_trio_lenient(&text, name);
        let again = parse_trio_lenient(&serialize(&p.records), name);
        let pairs = |r: &Vec<ontobench_core::trio::TrioRecord>| r.iter().map(|r| r.pairs.clone()).collect::<Vec<_>>();
        assert_eq!(pairs(&p.records), pairs(&again.records), "{name}");
        libs.push((name.to_string(), p.records));
    }
    let forward = build_namespace(libs.clone()).unwrap();
    libs.reverse();
    let backward = build_namespace(libs).unwrap();
    assert_eq!(forward, backward);
}
