use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::graph::{find_cycle, reach};
use super::{ModelError, Symbol, ZincScalar};

/// Where a record came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: usize,
    pub end_line: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.file, self.start_line, self.end_line)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaystackDef {
    pub symbol: Symbol,
    /// The `is` association.
    pub supertypes: Vec<Symbol>,
    /// Pairs with no structural meaning, kept verbatim.
    pub meta: BTreeMap<String, ZincScalar>,
    /// Symbol-valued pairs other than `def`, `is` and `lib` (e.g. `of`, `tagOn` singletons).
    pub refs: BTreeMap<String, Symbol>,
    pub child_protos: Vec<BTreeSet<Symbol>>,
    pub lib: String,
    #[serde(skip)]
    pub span: SourceSpan,
}

impl HaystackDef {
    pub fn new(symbol: Symbol) -> HaystackDef {
        HaystackDef {
            symbol,
            supertypes: Vec::new(),
            meta: BTreeMap::new(),
            refs: BTreeMap::new(),
            child_protos: Vec::new(),
            lib: String::new(),
            span: SourceSpan::default(),
        }
    }

    pub fn with_is(mut self, supers: &[&str]) -> HaystackDef {
        self.supertypes = supers.iter().map(|s| Symbol::parse(s).expect("valid symbol")).collect();
        self
    }

    /// Symbols named by a pair, whether held in `refs` or as a list in `meta`.
    pub fn symbols_of(&self, name: &str) -> Vec<Symbol> {
        if let Some(s) = self.refs.get(name) {
            return vec![s.clone()];
        }
        self.meta
            .get(name)
            .map(|v| v.symbols().into_iter().filter_map(|s| Symbol::parse(s).ok()).collect())
            .unwrap_or_default()
    }
}

/// All defs from a set of libs, indexed by symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaystackNamespace {
    libs: BTreeMap<String, Vec<Symbol>>,
    defs: BTreeMap<Symbol, HaystackDef>,
}

impl HaystackNamespace {
    /// Assemble libs into a namespace, checking uniqueness, supertype
    /// resolution and acyclicity. The result does not depend on lib order.
    pub fn new(libs: Vec<(String, Vec<HaystackDef>)>) -> Result<HaystackNamespace, ModelError> {
        let mut lib_index: BTreeMap<String, Vec<Symbol>> = BTreeMap::new();
        let mut defs: BTreeMap<Symbol, HaystackDef> = BTreeMap::new();
        for (lib, lib_defs) in libs {
            let entry = lib_index.entry(lib.clone()).or_default();
            for mut def in lib_defs {
                def.lib = lib.clone();
                if let Some(prev) = defs.get(&def.symbol) {
                    // report the pair in a fixed order so the message is order-independent
                    let (a, b) = if (&prev.span.file, prev.span.start_line) <= (&def.span.file, def.span.start_line) {
                        (prev.span.clone(), def.span.clone())
                    } else {
                        (def.span.clone(), prev.span.clone())
                    };
                    return Err(ModelError::DuplicateDef { symbol: def.symbol.to_string(), first: a, second: b });
                }
                entry.push(def.symbol.clone());
                defs.insert(def.symbol.clone(), def);
            }
        }
        for list in lib_index.values_mut() {
            list.sort();
        }
        for def in defs.values() {
            for sup in &def.supertypes {
                if !defs.contains_key(sup) {
                    return Err(ModelError::UnresolvedSupertype {
                        symbol: def.symbol.to_string(),
                        target: sup.to_string(),
                        span: def.span.clone(),
                    });
                }
            }
        }
        let ns = HaystackNamespace { libs: lib_index, defs };
        if let Some(cycle) = find_cycle(&ns.edges()) {
            return Err(ModelError::Cycle(cycle.iter().map(|s| s.to_string()).collect()));
        }
        Ok(ns)
    }

    fn edges(&self) -> BTreeMap<Symbol, Vec<Symbol>> {
        self.defs.iter().map(|(k, d)| (k.clone(), d.supertypes.clone())).collect()
    }

    pub fn get(&self, s: &Symbol) -> Option<&HaystackDef> {
        self.defs.get(s)
    }

    pub fn get_str(&self, s: &str) -> Option<&HaystackDef> {
        Symbol::parse(s).ok().and_then(|s| self.defs.get(&s).map(|d| d as &HaystackDef))
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.defs.contains_key(s)
    }

    pub fn defs(&self) -> impl Iterator<Item = &HaystackDef> {
        self.defs.values()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn libs(&self) -> &BTreeMap<String, Vec<Symbol>> {
        &self.libs
    }

    /// `version` meta of each lib def (`lib:<name>`), when present.
    pub fn lib_versions(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for lib in self.libs.keys() {
            let v = self
                .get_str(&format!("lib:{lib}"))
                .and_then(|d| d.meta.get("version"))
                .and_then(|v| v.as_str())
                .unwrap_or("unknown");
            out.insert(lib.clone(), v.to_string());
        }
        out
    }

    /// Reflexive-transitive closure over `is`.
    pub fn supertype_closure(&self, s: &Symbol) -> Result<BTreeSet<Symbol>, ModelError> {
        if !self.defs.contains_key(s) {
            return Err(ModelError::UnknownSymbol(s.to_string()));
        }
        let mut seen = BTreeSet::new();
        let mut todo = vec![s];
        while let Some(n) = todo.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if let Some(d) = self.defs.get(n) {
                todo.extend(d.supertypes.iter().filter(|m| !seen.contains(*m)));
            }
        }
        Ok(seen)
    }

    /// True when `s` resolves and its closure contains `ancestor`.
    pub fn is_a(&self, s: &Symbol, ancestor: &str) -> bool {
        self.supertype_closure(s)
            .map(|c| c.iter().any(|x| x.as_str() == ancestor))
            .unwrap_or(false)
    }

    /// Acyclicity check over the supertype graph. Construction already
    /// guarantees it; exposed for property tests.
    pub fn check_acyclic(&self) -> Result<(), ModelError> {
        match find_cycle(&self.edges()) {
            Some(c) => Err(ModelError::Cycle(c.iter().map(|s| s.to_string()).collect())),
            None => Ok(()),
        }
    }

    /// All descendants of `s` (defs whose closure contains it).
    pub fn subtypes(&self, s: &Symbol) -> BTreeSet<Symbol> {
        let mut down: BTreeMap<Symbol, Vec<Symbol>> = BTreeMap::new();
        for d in self.defs.values() {
            for sup in &d.supertypes {
                down.entry(sup.clone()).or_default().push(d.symbol.clone());
            }
        }
        reach(&down, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        Symbol::parse(s).unwrap()
    }

    fn ns(defs: Vec<HaystackDef>) -> Result<HaystackNamespace, ModelError> {
        HaystackNamespace::new(vec![("test".into(), defs)])
    }

    #[test]
    fn chain_closure() {
        let n = ns(vec![
            HaystackDef::new(sym("a")),
            HaystackDef::new(sym("b")).with_is(&["a"]),
            HaystackDef::new(sym("c")).with_is(&["b"]),
        ])
        .unwrap();
        let c = n.supertype_closure(&sym("c")).unwrap();
        assert_eq!(c, [sym("a"), sym("b"), sym("c")].into_iter().collect());
        assert_eq!(n.supertype_closure(&sym("a")).unwrap(), [sym("a")].into_iter().collect());
        assert!(n.supertype_closure(&sym("zzz")).is_err());
    }

    #[test]
    fn duplicate_and_unresolved() {
        let e = ns(vec![HaystackDef::new(sym("a")), HaystackDef::new(sym("a"))]).unwrap_err();
        assert!(matches!(e, ModelError::DuplicateDef { .. }));
        let e = ns(vec![HaystackDef::new(sym("b")).with_is(&["a"])]).unwrap_err();
        assert!(matches!(e, ModelError::UnresolvedSupertype { .. }));
    }

    #[test]
    fn cycle_rejected() {
        let e = ns(vec![
            HaystackDef::new(sym("a")).with_is(&["b"]),
            HaystackDef::new(sym("b")).with_is(&["a"]),
        ])
        .unwrap_err();
        assert!(matches!(e, ModelError::Cycle(_)));
    }
}
