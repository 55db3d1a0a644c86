use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Whether a symbol is a single tag or a `-`-joined conjunct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Atomic,
    Conjunct,
}

/// A Haystack def name such as `ahu` or `discharge-air-temp`.
///
/// Each `-`-separated part starts with an ASCII lowercase letter and
/// continues with ASCII letters, digits, `_` or `:` (the colon appears in
/// names like `lib:phIoT`). Comparison is exact and case-sensitive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Symbol(String);

impl Symbol {
    pub fn parse(text: &str) -> Result<Symbol, ModelError> {
        validate(text)?;
        Ok(Symbol(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> SymbolKind {
        if self.0.contains('-') {
            SymbolKind::Conjunct
        } else {
            SymbolKind::Atomic
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.kind() == SymbolKind::Atomic
    }

    /// The ordered parts of a conjunct, or the symbol itself when atomic.
    pub fn parts(&self) -> Vec<Symbol> {
        self.0.split('-').map(|p| Symbol(p.to_string())).collect()
    }
}

/// Split a symbol's text into its conjunct parts.
pub fn symbol_parts(text: &str) -> Result<Vec<Symbol>, ModelError> {
    Ok(Symbol::parse(text)?.parts())
}

fn validate(text: &str) -> Result<(), ModelError> {
    let bad = |why: &str| ModelError::MalformedSymbol {
        text: text.to_string(),
        reason: why.to_string(),
    };
    if text.is_empty() {
        return Err(bad("empty symbol"));
    }
    for part in text.split('-') {
        let mut chars = part.chars();
        match chars.next() {
            None => return Err(bad("empty conjunct part")),
            Some(c) if c.is_ascii_lowercase() => {}
            Some(_) => return Err(bad("part must start with a lowercase ASCII letter")),
        }
        if let Some(c) = chars.find(|c| !(c.is_ascii_alphanumeric() || *c == '_' || *c == ':')) {
            return Err(bad(&format!("invalid character {c:?}")));
        }
    }
    Ok(())
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "^{}", self.0)
    }
}

impl TryFrom<String> for Symbol {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        validate(&value)?;
        Ok(Symbol(value))
    }
}

impl From<Symbol> for String {
    fn from(s: Symbol) -> String {
        s.0
    }
}

impl std::str::FromStr for Symbol {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::parse(s)
    }
}
