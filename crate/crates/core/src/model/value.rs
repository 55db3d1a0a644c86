use std::collections::BTreeMap;

use serde::Serialize;

/// A scalar value as it appears on the right-hand side of a Trio pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "val", rename_all = "lowercase")]
pub enum ZincScalar {
    Marker,
    Null,
    Bool(bool),
    Number { value: f64, unit: Option<String> },
    Str(String),
    Uri(String),
    /// `^name`; the text is stored without the caret.
    Symbol(String),
    List(Vec<ZincScalar>),
    Dict(BTreeMap<String, ZincScalar>),
}

impl ZincScalar {
    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            ZincScalar::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ZincScalar::Str(s) => Some(s),
            _ => None,
        }
    }

    /// Symbols held directly or inside a list, in order.
    pub fn symbols(&self) -> Vec<&str> {
        match self {
            ZincScalar::Symbol(s) => vec![s.as_str()],
            ZincScalar::List(items) => items.iter().filter_map(ZincScalar::as_symbol).collect(),
            _ => Vec::new(),
        }
    }
}
