//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the `cargo test` output.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ontobench_core::alignment::OntologyId;
use ontobench_core::metrics::{decision_rule, pct_half_up, significance, FacetOutcome, FacetVector, Significance};
use ontobench_core::model::{ClassLabel, HaystackDef, HaystackNamespace, Symbol};
use ontobench_core::report::{emit_reports, run_pipeline, Format, ReportBundle};
use ontobench_core::trio::{lib_sizes, parse_trio_lenient};
use ontobench_core::turtle::{extract_brick_schema, parse_turtle, BrickVocabulary};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn hvac440_bundle() -> ReportBundle {
    let tmp = tempfile::tempdir().unwrap();
    run_pipeline(&common::config("hvac440", tmp.path())).unwrap()
}

// ---- decision rule

#[derive(Clone, Copy, PartialEq, Debug)]
enum O {
    M,
    G,
    N,
}

/// The rule written out per case from the classification text, without
/// reusing the library's gap counting.
fn oracle_label(v: [O; 5]) -> ClassLabel {
    let [ec, pc, et, mct, svc] = v;
    if !v.contains(&O::G) {
        return ClassLabel::Maps;
    }
    let minor = [et, mct, svc];
    let one_minor = (minor[0] == O::G) as u8 + (minor[1] == O::G) as u8 + (minor[2] == O::G) as u8 == 1;
    match (ec, pc) {
        (O::M, O::M) if one_minor => ClassLabel::PartiallyMaps,
        _ => ClassLabel::DoesNotMap,
    }
}

fn to_vector(v: [O; 5]) -> FacetVector {
    let f = |o: O| match o {
        O::M => FacetOutcome::Mapped,
        O::G => FacetOutcome::Gap(Vec::new()),
        O::N => FacetOutcome::NotApplicable,
    };
    FacetVector {
        equipment_class: f(v[0]),
        point_class: f(v[1]),
        equipment_type: f(v[2]),
        measurement_control_type: f(v[3]),
        service: f(v[4]),
    }
}

fn all_vectors() -> Vec<[O; 5]> {
    let mut out = Vec::with_capacity(243);
    for n in 0..243u32 {
        let mut v = [O::M; 5];
        let mut x = n;
        for slot in v.iter_mut() {
            *slot = [O::M, O::G, O::N][(x % 3) as usize];
            x /= 3;
        }
        out.push(v);
    }
    out
}

fn decision_rule_oracle() -> Outcome {
    let start = Instant::now();
    let vectors = all_vectors();
    let mut tally: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    for v in &vectors {
        let got = decision_rule(&to_vector(*v));
        ensure(got == oracle_label(*v), format!("{v:?}: got {got:?}, expected {:?}", oracle_label(*v)))?;
        *tally.entry(got).or_default() += 1;
    }
    let elapsed = start.elapsed();
    ensure(tally.values().sum::<usize>() == 243, "labels do not partition the space")?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("243/243 vectors agree ({tally:?}) in {elapsed:?}"))
}

// ---- significance

fn significance_boundary() -> Outcome {
    let nine = significance(9, 440).map_err(|e| e.to_string())?;
    let eight = significance(8, 440).map_err(|e| e.to_string())?;
    ensure(nine == Significance::Significant, "9/440 is not significant")?;
    ensure(eight == Significance::Insignificant, "8/440 is significant")?;
    let b = hvac440_bundle();
    let h = b.completeness(OntologyId::Haystack).ok_or("no haystack report")?;
    let probe = |c: &str| h.gaps.iter().find(|g| g.concept == c).map(|g| (g.count, g.significant));
    ensure(probe("Limit") == Some((9, true)), format!("Limit probe {:?}", probe("Limit")))?;
    ensure(probe("Reset") == Some((8, false)), format!("Reset probe {:?}", probe("Reset")))?;
    Ok("significance(9,440)=Significant, significance(8,440)=Insignificant; fixture probes agree".into())
}

// ---- expressiveness

fn expressiveness() -> Outcome {
    let b = hvac440_bundle();
    let n = b.key_relationships.expressed.len();
    ensure(n == 27, format!("{n} key relationships, expected 27"))?;
    let get = |o| b.expressiveness.get(o).map(|e| (e.mapped, e.total, e.pct));
    let (brick, hay) = (get(OntologyId::Brick), get(OntologyId::Haystack));
    ensure(brick == Some((27, 27, 100)), format!("Brick {brick:?}"))?;
    ensure(hay == Some((26, 27, 96)), format!("Haystack {hay:?}"))?;
    Ok("Brick 27/27 = 100%, Haystack 26/27 = 96%".into())
}

// ---- completeness table

const PUBLISHED_RATES: [(&str, u32, u32, u32, u32); 6] = [
    ("AHU", 32, 67, 56, 82),
    ("Chiller", 54, 70, 55, 60),
    ("Boiler", 74, 87, 74, 77),
    ("Loop", 27, 55, 42, 77),
    ("Terminal Units", 54, 77, 75, 84),
    ("Total", 43, 69, 59, 77),
];

/// Back-solved (selected, maps, partial) per system for each ontology.
const COUNTS: [(u64, [u64; 2], [u64; 2]); 6] = [
    (174, [55, 61], [98, 44]),
    (67, [36, 11], [37, 3]),
    (47, [35, 6], [35, 1]),
    (73, [20, 20], [31, 25]),
    (79, [43, 18], [59, 7]),
    (440, [189, 116], [260, 80]),
];

fn completeness_rates() -> Outcome {
    for ((name, hm, hp, bm, bp), (n, h, k)) in PUBLISHED_RATES.iter().zip(COUNTS) {
        let cells = (pct_half_up(h[0], n), pct_half_up(h[0] + h[1], n), pct_half_up(k[0], n), pct_half_up(k[0] + k[1], n));
        ensure(cells == (*hm, *hp, *bm, *bp), format!("{name}: counts give {cells:?}"))?;
    }
    let b = hvac440_bundle();
    let (h, k) = (b.completeness(OntologyId::Haystack).ok_or("no haystack")?, b.completeness(OntologyId::Brick).ok_or("no brick")?);
    let mut cells = 0;
    for (i, (name, hm, hp, bm, bp)) in PUBLISHED_RATES.iter().enumerate() {
        let (hr, kr) = (h.rows.get(i).ok_or("missing row")?, k.rows.get(i).ok_or("missing row")?);
        ensure(hr.label() == *name && kr.label() == *name, format!("row {i} is {}", hr.label()))?;
        let got = (hr.pct_maps, hr.pct_maps_or_partial, kr.pct_maps, kr.pct_maps_or_partial);
        ensure(got == (*hm, *hp, *bm, *bp), format!("{name}: pipeline gives {got:?}"))?;
        ensure(hr.selected as u64 == COUNTS[i].0, format!("{name}: {} selected", hr.selected))?;
        cells += 4;
    }
    Ok(format!("{cells}/24 cells exact from counts and from the 440-point pipeline"))
}

// ---- gap goldens

const GOLDEN: [&str; 7] = [
    "completeness_haystack.csv",
    "completeness_haystack_counts.csv",
    "completeness_brick.csv",
    "completeness_brick_counts.csv",
    "gaps_haystack.csv",
    "gaps_brick.csv",
    "unresolved_tokens.csv",
];

fn gap_goldens() -> Outcome {
    let mut compared = 0;
    for fixture in ["mini", "hvac440"] {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let bundle = run_pipeline(&common::config(fixture, tmp.path())).map_err(|e| e.to_string())?;
        emit_reports(&bundle, &[Format::Csv], tmp.path()).map_err(|e| e.to_string())?;
        for f in GOLDEN {
            let got = fs::read(tmp.path().join(f)).map_err(|e| e.to_string())?;
            let want = fs::read(common::fixtures().join(fixture).join("golden").join(f)).map_err(|e| e.to_string())?;
            ensure(got == want, format!("{fixture}/{f} differs from golden"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} files byte-identical to the independent computation"))
}

// ---- parsers

fn oracle(name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(common::data().join("oracles").join(name)).unwrap()).unwrap()
}

fn parser_robustness() -> Outcome {
    let hdir = common::data().join("haystack");
    let mut files: Vec<_> = fs::read_dir(&hdir).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    for f in &files {
        let text = fs::read_to_string(f).map_err(|e| e.to_string())?;
        let p = parse_trio_lenient(&text, &f.display().to_string());
        ensure(p.errors.is_empty(), format!("{}: {} errors", f.display(), p.errors.len()))?;
    }
    let ho = oracle("haystack.json");
    let ns = common::haystack();
    ensure(ns.len() as u64 == ho["def_count"].as_u64().unwrap_or(0), format!("{} defs", ns.len()))?;
    for (lib, n) in lib_sizes(ns) {
        let want = ho["libs"][&lib].as_u64();
        ensure(want == Some(n as u64), format!("lib {lib}: {n} defs, oracle {want:?}"))?;
    }

    let bo = oracle("brick.json");
    let text = fs::read_to_string(common::data().join("brick/Brick-1.1.0.ttl")).map_err(|e| e.to_string())?;
    let store = parse_turtle(&text).map_err(|e| e.to_string())?;
    ensure(store.len() as u64 == bo["triple_count"].as_u64().unwrap_or(0), format!("{} triples", store.len()))?;
    let schema = extract_brick_schema(&store, &BrickVocabulary::from_store(&store)).map_err(|e| e.to_string())?;
    let roots: u64 = schema.class_count_by_root().values().map(|&n| n as u64).sum();
    ensure(roots == bo["class_count_under_roots"].as_u64().unwrap_or(0), format!("{roots} classes under roots"))?;

    let trio_n = common::fuzz::trio(100_000, 0xacce).map_err(|input| format!("trio parser panicked on {input:?}"))?;
    let ttl_n = common::fuzz::turtle(100_000, 0xacce).map_err(|input| format!("turtle parser panicked on {input:?}"))?;
    Ok(format!(
        "0 errors; {} defs, {} triples, {roots} classes match oracles; {trio_n}+{ttl_n} fuzz inputs, no panics",
        ns.len(),
        store.len()
    ))
}

// ---- structural invariants

fn random_dag(rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = rng.gen_range(1..30);
    (0..n)
        .map(|i| {
            let mut ps: Vec<usize> = (0..rng.gen_range(0..4)).filter(|_| i > 0).map(|_| rng.gen_range(0..i)).collect();
            ps.sort();
            ps.dedup();
            ps
        })
        .collect()
}

fn structural_invariants() -> Outcome {
    const CASES: usize = 1000;
    let ns = common::haystack();
    ns.check_acyclic().map_err(|e| e.to_string())?;
    let b = common::brick();
    b.check_acyclic().map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for (iri, rel) in &b.relationships {
        if let Some(inv) = &rel.inverse {
            ensure(b.relationships.get(inv).and_then(|r| r.inverse.as_ref()) == Some(iri), format!("{iri} not symmetric"))?;
            pairs += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x57);
    let sym = |i: usize| Symbol::parse(&format!("n{i}")).unwrap();
    for _ in 0..CASES {
        let dag = random_dag(&mut rng);
        let defs: Vec<HaystackDef> = dag
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                let mut d = HaystackDef::new(sym(i));
                d.supertypes = ps.iter().map(|&p| sym(p)).collect();
                d
            })
            .collect();
        let mut doc = String::from("@prefix brick: <http://b#> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\nbrick:Equipment a owl:Class .\nbrick:Location a owl:Class .\nbrick:Measurable a owl:Class .\nbrick:Point a owl:Class .\nbrick:C0 rdfs:subClassOf brick:Point .\n");
        for (i, ps) in dag.iter().enumerate() {
            for p in ps {
                doc.push_str(&format!("brick:C{i} rdfs:subClassOf brick:C{p} .\n"));
            }
            if i > 0 && rng.gen_bool(0.5) {
                doc.push_str(&format!("brick:r{i} a owl:ObjectProperty .\nbrick:s{i} a owl:ObjectProperty .\nbrick:r{i} owl:inverseOf brick:s{i} .\n"));
            }
        }
        let edges: Vec<(usize, usize)> = dag.iter().enumerate().flat_map(|(i, ps)| ps.iter().map(move |&p| (i, p))).collect();

        let ok = HaystackNamespace::new(vec![("lib".into(), defs.clone())]).map_err(|e| e.to_string())?;
        ok.check_acyclic().map_err(|e| e.to_string())?;
        let store = parse_turtle(&doc).map_err(|e| e.to_string())?;
        let schema = extract_brick_schema(&store, &BrickVocabulary::from_store(&store)).map_err(|e| e.to_string())?;
        schema.check_acyclic().map_err(|e| e.to_string())?;
        for (iri, rel) in &schema.relationships {
            let back = rel.inverse.as_ref().and_then(|i| schema.relationships.get(i)).and_then(|r| r.inverse.as_ref());
            ensure(rel.inverse.is_none() || back == Some(iri), format!("random schema: {iri} not symmetric"))?;
        }
        if !edges.is_empty() {
            let (child, parent) = edges[rng.gen_range(0..edges.len())];
            let mut looped = defs;
            looped[parent].supertypes.push(sym(child));
            ensure(HaystackNamespace::new(vec![("lib".into(), looped)]).is_err(), "haystack cycle not detected")?;
            let store = parse_turtle(&format!("{doc}brick:C{parent} rdfs:subClassOf brick:C{child} .\n")).map_err(|e| e.to_string())?;
            ensure(extract_brick_schema(&store, &BrickVocabulary::from_store(&store)).is_err(), "brick cycle not detected")?;
        }
    }

    let rank = |l: ClassLabel| match l {
        ClassLabel::DoesNotMap => 0,
        ClassLabel::PartiallyMaps => 1,
        ClassLabel::Maps => 2,
    };
    let vectors = all_vectors();
    let mut checked = 0;
    for _ in 0..CASES {
        let v = vectors[rng.gen_range(0..vectors.len())];
        let gaps: Vec<usize> = (0..5).filter(|&k| v[k] == O::G).collect();
        if gaps.is_empty() {
            continue;
        }
        let mut w = v;
        w[gaps[rng.gen_range(0..gaps.len())]] = O::M;
        let (before, after) = (decision_rule(&to_vector(v)), decision_rule(&to_vector(w)));
        ensure(rank(after) >= rank(before), format!("{v:?} -> {w:?}: {before:?} -> {after:?}"))?;
        checked += 1;
    }
    // and every single improvement exhaustively
    for v in &vectors {
        for k in (0..5).filter(|&k| v[k] == O::G) {
            let mut w = *v;
            w[k] = O::M;
            ensure(rank(decision_rule(&to_vector(w))) >= rank(decision_rule(&to_vector(*v))), format!("{v:?} at {k}"))?;
        }
    }
    Ok(format!(
        "vendored graphs acyclic, {pairs} inverse-paired Brick relationships symmetric; {CASES} random hierarchies; {checked} random + all single-facet improvements monotone"
    ))
}

// ---- performance

fn performance() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = common::config("hvac440", tmp.path());
    let start = Instant::now();
    // fresh loads, not the cached ontologies
    let bundle = run_pipeline(&cfg).map_err(|e| e.to_string())?;
    emit_reports(&bundle, &[Format::Csv, Format::Markdown, Format::Json], tmp.path()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(bundle.selection.len() == 440, format!("{} points", bundle.selection.len()))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("440-point pipeline with all reports in {elapsed:?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("Decision-rule oracle", decision_rule_oracle),
        ("Significance boundary", significance_boundary),
        ("Expressiveness reproduction", expressiveness),
        ("Completeness-rate arithmetic", completeness_rates),
        ("Gap aggregation oracle", gap_goldens),
        ("Parser robustness", parser_robustness),
        ("Structural invariants", structural_invariants),
        ("Performance", performance),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
