//! Trio reader/writer and assembly of Haystack def libraries.
//!
//! A Trio file is a sequence of records separated by lines of three or more
//! dashes. Each line of a record is `name` (a marker), `name: value`, or
//! `name:` followed by an indented block that forms a multi-line string.
//! A `[` or `{` value may continue over following lines until its brackets
//! balance. Lines starting with `//` are comments.

mod zinc;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{HaystackDef, HaystackNamespace, ModelError, SourceSpan, Symbol, ZincScalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TrioRecord {
    pub pairs: Vec<(String, ZincScalar)>,
    pub span: SourceSpan,
}

impl TrioRecord {
    pub fn get(&self, name: &str) -> Option<&ZincScalar> {
        self.pairs.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrioError {
    #[error("{file}:{line}:{col}: {message}")]
    Syntax { file: String, line: usize, col: usize, message: String },
    #[error("{file}:{line}: {message}")]
    Record { file: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl TrioError {
    pub fn line(&self) -> Option<usize> {
        match self {
            TrioError::Syntax { line, .. } | TrioError::Record { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Every error found in one load, in file order.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}", display_all(.0))]
pub struct TrioErrors(pub Vec<TrioError>);

fn display_all(errors: &[TrioError]) -> String {
    errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")
}

/// Records that parsed cleanly plus the errors from those that did not.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrioParse {
    pub records: Vec<TrioRecord>,
    pub errors: Vec<TrioError>,
}

/// Parse, failing if any record had an error.
pub fn parse_trio(text: &str) -> Result<Vec<TrioRecord>, TrioErrors> {
    let p = parse_trio_lenient(text, "<input>");
    if p.errors.is_empty() {
        Ok(p.records)
    } else {
        Err(TrioErrors(p.errors))
    }
}

/// Parse with recovery at record separators. A record with an error is
/// dropped and the error collected; later records are still read.
pub fn parse_trio_lenient(text: &str, file: &str) -> TrioParse {
    let mut p = Parser { file, out: TrioParse::default(), rec: RecordState::default() };
    let lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    let mut n = 0;
    while n < lines.len() {
        let line = lines[n];
        let lineno = n + 1;
        n += 1;
        if let Some(name) = p.rec.block_name.clone() {
            if line.starts_with(' ') || line.starts_with('\t') {
                let body = line.strip_prefix("  ").or_else(|| line.strip_prefix('\t')).unwrap_or(&line[1..]);
                p.rec.block_lines.push(body.to_string());
                p.rec.last_line = lineno;
                continue;
            }
            let value = ZincScalar::Str(std::mem::take(&mut p.rec.block_lines).join("\n"));
            p.rec.block_name = None;
            p.push_pair(name, value, lineno - 1);
        }
        if is_separator(line) {
            p.finish_record();
            continue;
        }
        if line.trim().is_empty() || line.starts_with("//") {
            continue;
        }
        if p.rec.failed {
            continue;
        }
        if p.rec.start_line == 0 {
            p.rec.start_line = lineno;
        }
        p.rec.last_line = lineno;
        if line.starts_with(' ') || line.starts_with('\t') {
            p.record_error(lineno, 1, "unexpected indentation");
            continue;
        }
        let name_end = line.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(line.len());
        let name = &line[..name_end];
        if !zinc::is_name(name) {
            p.record_error(lineno, 1, "expected a tag name");
            continue;
        }
        let rest = &line[name_end..];
        if rest.trim().is_empty() {
            p.push_pair(name.to_string(), ZincScalar::Marker, lineno);
            continue;
        }
        let Some(after) = rest.strip_prefix(':') else {
            p.record_error(lineno, name_end + 1, "expected ':' after tag name");
            continue;
        };
        let value_text = after.trim_start();
        if value_text.trim_end().is_empty() {
            p.rec.block_name = Some(name.to_string());
            continue;
        }
        let col0 = line.chars().count() - value_text.chars().count() + 1;
        let mut text = value_text.to_string();
        // bracketed values may continue over following lines
        if bracket_depth(&text) > 0 {
            while bracket_depth(&text) > 0 && n < lines.len() && !is_separator(lines[n]) {
                text.push('\n');
                text.push_str(lines[n]);
                p.rec.last_line = n + 1;
                n += 1;
            }
        }
        match zinc::parse_value(&text) {
            Ok(v) => p.push_pair(name.to_string(), v, p.rec.last_line),
            Err(e) => {
                let first = value_text.chars().next().unwrap_or(' ');
                if !text.contains('\n') && (first.is_alphabetic() || (first as u32) > 127) {
                    // unquoted Trio string
                    p.push_pair(name.to_string(), ZincScalar::Str(text.trim_end().to_string()), lineno);
                } else {
                    let (dl, dc) = offset_to_pos(&text, e.offset);
                    let col = if dl == 0 { col0 + dc } else { dc + 1 };
                    p.record_error(lineno + dl, col, &e.message);
                }
            }
        }
    }
    if let Some(name) = p.rec.block_name.take() {
        let value = ZincScalar::Str(std::mem::take(&mut p.rec.block_lines).join("\n"));
        let last = p.rec.last_line;
        p.push_pair(name, value, last);
    }
    p.finish_record();
    p.out
}

fn is_separator(line: &str) -> bool {
    let t = line.trim_end();
    t.len() >= 3 && t.bytes().all(|b| b == b'-')
}

/// Net depth of `[`/`{` outside strings and uris. A newline ends a string.
fn bracket_depth(text: &str) -> i64 {
    let mut depth = 0i64;
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in text.chars() {
        if let Some(q) = quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q || c == '\n' {
                quote = None;
            }
            continue;
        }
        match c {
            '"' | '`' => quote = Some(c),
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            _ => {}
        }
    }
    depth
}

fn offset_to_pos(text: &str, offset: usize) -> (usize, usize) {
    let mut line = 0;
    let mut col = 0;
    for c in text.chars().take(offset) {
        if c == '\n' {
            line += 1;
            col = 0;
        } else {
            col += 1;
        }
    }
    (line, col)
}

#[derive(Default)]
struct RecordState {
    pairs: Vec<(String, ZincScalar)>,
    names: BTreeSet<String>,
    start_line: usize,
    last_line: usize,
    failed: bool,
    block_name: Option<String>,
    block_lines: Vec<String>,
}

struct Parser<'a> {
    file: &'a str,
    out: TrioParse,
    rec: RecordState,
}

impl Parser<'_> {
    fn push_pair(&mut self, name: String, value: ZincScalar, line: usize) {
        if self.rec.failed {
            return;
        }
        if !self.rec.names.insert(name.clone()) {
            self.out.errors.push(TrioError::Record {
                file: self.file.to_string(),
                line,
                message: format!("duplicate tag {name:?} in record"),
            });
            self.rec.failed = true;
            return;
        }
        self.rec.pairs.push((name, value));
    }

    fn record_error(&mut self, line: usize, col: usize, message: &str) {
        self.out.errors.push(TrioError::Syntax {
            file: self.file.to_string(),
            line,
            col,
            message: message.to_string(),
        });
        self.rec.failed = true;
    }

    fn finish_record(&mut self) {
        let rec = std::mem::take(&mut self.rec);
        if !rec.failed && !rec.pairs.is_empty() {
            self.out.records.push(TrioRecord {
                pairs: rec.pairs,
                span: SourceSpan { file: self.file.to_string(), start_line: rec.start_line, end_line: rec.last_line },
            });
        }
    }
}

/// Write records back out in Trio form. Every string is quoted, so the
/// output reparses to the same records.
pub fn serialize(records: &[TrioRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for (name, value) in &r.pairs {
            out.push_str(name);
            if *value != ZincScalar::Marker {
                out.push_str(": ");
                zinc::write_value(value, &mut out);
            }
            out.push('\n');
        }
        out.push_str("---\n");
    }
    out
}

/// True when a pair name and value can be written and read back unchanged.
pub fn is_writable(name: &str, value: &ZincScalar) -> bool {
    fn ok(v: &ZincScalar) -> bool {
        match v {
            ZincScalar::Number { value, unit } => {
                value.is_finite() && unit.as_deref().map(zinc::is_valid_unit).unwrap_or(true)
            }
            ZincScalar::Symbol(s) => {
                let mut c = s.chars();
                matches!(c.next(), Some(f) if f.is_ascii_alphabetic())
                    && c.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '-'))
            }
            ZincScalar::Str(s) => !s.chars().any(|c| (0xd800..0xe000).contains(&(c as u32))),
            ZincScalar::Uri(s) => !s.contains('\n') && !s.ends_with('\\'),
            ZincScalar::List(items) => items.iter().all(ok),
            ZincScalar::Dict(m) => m.iter().all(|(k, v)| zinc::is_name(k) && ok(v)),
            _ => true,
        }
    }
    zinc::is_name(name) && ok(value)
}

/// Turn one lib's records into defs.
pub fn records_to_defs(records: &[TrioRecord]) -> Result<Vec<HaystackDef>, TrioErrors> {
    let mut defs = Vec::new();
    let mut errors = Vec::new();
    for r in records {
        match record_to_def(r) {
            Ok(d) => defs.push(d),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(defs)
    } else {
        Err(TrioErrors(errors))
    }
}

fn record_to_def(r: &TrioRecord) -> Result<HaystackDef, TrioError> {
    let err = |message: String| TrioError::Record { file: r.span.file.clone(), line: r.span.start_line, message };
    let sym = |text: &str| Symbol::parse(text).map_err(|e| err(e.to_string()));
    let def_text = r
        .get("def")
        .and_then(ZincScalar::as_symbol)
        .ok_or_else(|| err("record has no `def` symbol literal".into()))?;
    let mut def = HaystackDef::new(sym(def_text)?);
    def.span = r.span.clone();
    for (name, value) in &r.pairs {
        match (name.as_str(), value) {
            ("def", _) => {}
            ("is", ZincScalar::Symbol(s)) => def.supertypes.push(sym(s)?),
            ("is", ZincScalar::List(items)) => {
                for item in items {
                    let s = item.as_symbol().ok_or_else(|| err("`is` list must hold symbols".into()))?;
                    def.supertypes.push(sym(s)?);
                }
            }
            ("is", _) => return Err(err("`is` must be a symbol or list of symbols".into())),
            ("children", ZincScalar::List(items)) => {
                for item in items {
                    let ZincScalar::Dict(m) = item else {
                        return Err(err("`children` must be a list of dicts".into()));
                    };
                    if m.is_empty() {
                        return Err(err("empty child proto".into()));
                    }
                    let tags = m.keys().map(|k| sym(k)).collect::<Result<BTreeSet<_>, _>>()?;
                    def.child_protos.push(tags);
                }
            }
            ("children", _) => return Err(err("`children` must be a list of dicts".into())),
            ("lib", v) => {
                def.meta.insert(name.clone(), v.clone());
            }
            (_, ZincScalar::Symbol(s)) => {
                def.refs.insert(name.clone(), sym(s)?);
            }
            (_, v) => {
                def.meta.insert(name.clone(), v.clone());
            }
        }
    }
    Ok(def)
}

/// Build a namespace from per-lib record lists.
pub fn build_namespace(libs: Vec<(String, Vec<TrioRecord>)>) -> Result<HaystackNamespace, TrioErrors> {
    let mut all = Vec::new();
    let mut errors = Vec::new();
    for (lib, records) in libs {
        match records_to_defs(&records) {
            Ok(defs) => all.push((lib, defs)),
            Err(TrioErrors(e)) => errors.extend(e),
        }
    }
    if !errors.is_empty() {
        return Err(TrioErrors(errors));
    }
    HaystackNamespace::new(all).map_err(|e| TrioErrors(vec![e.into()]))
}

/// Load every `*.trio` file in `dir`; each file is one lib named by its stem.
/// Files are parsed concurrently.
pub fn load_haystack_dir(dir: &Path) -> Result<HaystackNamespace, TrioErrors> {
    let io = |path: &Path, e: std::io::Error| {
        TrioErrors(vec![TrioError::Io { path: path.display().to_string(), message: e.to_string() }])
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "trio"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(TrioErrors(vec![TrioError::Io {
            path: dir.display().to_string(),
            message: "no .trio files found".into(),
        }]));
    }
    let texts = files
        .iter()
        .map(|f| fs::read_to_string(f).map_err(|e| io(f, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let parsed: Vec<TrioParse> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .zip(&texts)
            .map(|(f, t)| {
                let name = f.display().to_string();
                s.spawn(move || parse_trio_lenient(t, &name))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_default()).collect()
    });
    let mut libs = Vec::new();
    let mut errors = Vec::new();
    for (f, p) in files.iter().zip(parsed) {
        errors.extend(p.errors);
        let lib = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        libs.push((lib, p.records));
    }
    if !errors.is_empty() {
        return Err(TrioErrors(errors));
    }
    build_namespace(libs)
}

/// Count of defs per lib, for reporting.
pub fn lib_sizes(ns: &HaystackNamespace) -> BTreeMap<String, usize> {
    ns.libs().iter().map(|(k, v)| (k.clone(), v.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> ZincScalar {
        ZincScalar::Symbol(s.into())
    }

    #[test]
    fn two_pair_record() {
        let r = parse_trio("def: ^ahu\nis: ^equip\n---\n").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].pairs, vec![("def".into(), sym("ahu")), ("is".into(), sym("equip"))]);
        assert_eq!((r[0].span.start_line, r[0].span.end_line), (1, 2));
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_trio("").unwrap(), vec![]);
        assert_eq!(parse_trio("---\n\n---\n// only a comment\n").unwrap(), vec![]);
    }

    #[test]
    fn unterminated_string_is_located() {
        let e = parse_trio("doc: \"unclosed").unwrap_err();
        assert_eq!(e.0.len(), 1);
        match &e.0[0] {
            TrioError::Syntax { line, col, message, .. } => {
                assert_eq!(*line, 1);
                assert_eq!(*col, 6);
                assert!(message.contains("unterminated"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_skips_only_that_record() {
        let p = parse_trio_lenient("def: ^a\ndef: ^b\n---\ndef: ^c\n", "x.trio");
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.records[0].get("def"), Some(&sym("c")));
        assert_eq!(p.errors.len(), 1);
        assert_eq!(p.errors[0].line(), Some(2));
    }

    #[test]
    fn block_string_and_multiline_list() {
        let text = "def: ^x\ndoc:\n  line one\n    indented\n  \nchildren: [\n  {a b},\n  {c},\n  ]\nmarker\n---\n";
        let r = parse_trio(text).unwrap();
        assert_eq!(r[0].get("doc"), Some(&ZincScalar::Str("line one\n  indented\n".into())));
        match r[0].get("children") {
            Some(ZincScalar::List(items)) => assert_eq!(items.len(), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(r[0].get("marker"), Some(&ZincScalar::Marker));
        assert_eq!(r[0].span.end_line, 10);
    }

    #[test]
    fn unquoted_string_value() {
        let r = parse_trio("dis: Main AHU\n").unwrap();
        assert_eq!(r[0].get("dis"), Some(&ZincScalar::Str("Main AHU".into())));
    }

    #[test]
    fn unbalanced_bracket_reported() {
        let e = parse_trio("def: ^x\nis: [^a, ^b\n---\n").unwrap_err();
        assert!(e.to_string().contains("']'"), "{e}");
    }

    #[test]
    fn namespace_from_records() {
        let r = parse_trio("def: ^equip\n---\ndef: ^ahu\nis: ^equip\n").unwrap();
        let ns = build_namespace(vec![("t".into(), r)]).unwrap();
        let c = ns.supertype_closure(&Symbol::parse("ahu").unwrap()).unwrap();
        assert!(c.contains(&Symbol::parse("equip").unwrap()));
    }

    #[test]
    fn namespace_cycle_error() {
        let r = parse_trio("def: ^a\nis: ^b\n---\ndef: ^b\nis: ^a\n").unwrap();
        let e = build_namespace(vec![("t".into(), r)]).unwrap_err();
        assert!(matches!(e.0[0], TrioError::Model(ModelError::Cycle(_))));
    }

    #[test]
    fn record_without_def_is_an_error() {
        let r = parse_trio("dis: \"x\"\n").unwrap();
        assert!(build_namespace(vec![("t".into(), r)]).is_err());
    }

    #[test]
    fn def_fields_split() {
        let r = parse_trio(
            "def: ^equipRef\nis: [^ref]\nof: ^equip\ntagOn: [^point, ^equip]\nlib: ^lib:ph\ndoc: \"d\"\n---\ndef: ^ref\n---\ndef: ^equip\n---\ndef: ^point\n---\ndef: ^lib:ph\n",
        )
        .unwrap();
        let ns = build_namespace(vec![("ph".into(), r)]).unwrap();
        let d = ns.get_str("equipRef").unwrap();
        assert_eq!(d.refs.keys().collect::<Vec<_>>(), ["of"]);
        assert!(d.meta.contains_key("lib") && d.meta.contains_key("doc") && d.meta.contains_key("tagOn"));
        assert_eq!(d.symbols_of("tagOn").len(), 2);
    }

    #[test]
    fn serialize_round_trip() {
        let text = "def: ^x\ndoc:\n  two\n  lines\nn: 12.5kW\nl: [1, \"a\", {b c:^d}]\nu: `http://x`\n---\nm\n";
        let a = parse_trio(text).unwrap();
        let b = parse_trio(&serialize(&a)).unwrap();
        let strip = |v: Vec<TrioRecord>| v.into_iter().map(|r| r.pairs).collect::<Vec<_>>();
        assert_eq!(strip(a), strip(b));
    }
}
