//! Reader and writer for the Zinc scalar subset used on Trio value lines.

use std::collections::BTreeMap;

use crate::model::ZincScalar;

/// A value-level syntax error; `offset` counts chars from the start of the
/// value text.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ValueError {
    pub offset: usize,
    pub message: String,
}

const MAX_DEPTH: usize = 64;

pub(crate) fn parse_value(text: &str) -> Result<ZincScalar, ValueError> {
    let chars: Vec<char> = text.chars().collect();
    let mut r = Reader { s: &chars, i: 0 };
    r.skip_ws();
    let v = r.value(0)?;
    r.skip_ws();
    if r.i < r.s.len() {
        return Err(r.err("unexpected trailing characters"));
    }
    Ok(v)
}

pub(crate) fn is_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(f) if f.is_ascii_alphabetic()) && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Reader<'a> {
    s: &'a [char],
    i: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.s.get(self.i + k).copied()
    }

    fn err(&self, message: &str) -> ValueError {
        ValueError { offset: self.i, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
            self.i += 1;
        }
    }

    fn at_delim(&self, k: usize) -> bool {
        matches!(self.peek_at(k), None | Some(' ' | '\t' | '\n' | '\r' | ',' | ']' | '}'))
    }

    fn value(&mut self, depth: usize) -> Result<ZincScalar, ValueError> {
        if depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.err("expected a value")),
        };
        match c {
            'M' | 'N' | 'T' | 'F' if self.at_delim(1) => {
                self.i += 1;
                Ok(match c {
                    'M' => ZincScalar::Marker,
                    'N' => ZincScalar::Null,
                    'T' => ZincScalar::Bool(true),
                    _ => ZincScalar::Bool(false),
                })
            }
            '^' => {
                self.i += 1;
                let start = self.i;
                if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    return Err(self.err("expected symbol name after '^'"));
                }
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '-')) {
                    self.i += 1;
                }
                Ok(ZincScalar::Symbol(self.s[start..self.i].iter().collect()))
            }
            '"' => self.string().map(ZincScalar::Str),
            '`' => self.uri().map(ZincScalar::Uri),
            '[' => self.list(depth),
            '{' => self.dict(depth),
            c if c.is_ascii_digit() || (c == '-' && matches!(self.peek_at(1), Some(d) if d.is_ascii_digit())) => self.number(),
            _ => Err(self.err(&format!("unexpected character {c:?}"))),
        }
    }

    fn escape(&mut self) -> Result<char, ValueError> {
        // positioned just after the backslash
        let e = self.peek().ok_or_else(|| self.err("unterminated string"))?;
        self.i += 1;
        Ok(match e {
            'n' => '\n',
            't' => '\t',
            'r' => '\r',
            'b' => '\u{8}',
            'f' => '\u{c}',
            '"' | '\\' | '$' | '`' | '\'' => e,
            'u' => {
                let hex: String = self.s.get(self.i..self.i + 4).map(|h| h.iter().collect()).unwrap_or_default();
                let code = u32::from_str_radix(&hex, 16).ok().filter(|_| hex.len() == 4);
                let ch = code.and_then(char::from_u32).ok_or_else(|| self.err("invalid \\u escape"))?;
                self.i += 4;
                ch
            }
            _ => {
                self.i -= 1;
                return Err(self.err(&format!("invalid escape \\{e}")));
            }
        })
    }

    fn string(&mut self) -> Result<String, ValueError> {
        let open = self.i;
        self.i += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    return Err(ValueError { offset: open, message: "unterminated string".into() });
                }
                Some('"') => {
                    self.i += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    self.i += 1;
                    out.push(self.escape()?);
                }
                Some(c) => {
                    out.push(c);
                    self.i += 1;
                }
            }
        }
    }

    fn uri(&mut self) -> Result<String, ValueError> {
        let open = self.i;
        self.i += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    return Err(ValueError { offset: open, message: "unterminated uri".into() });
                }
                Some('`') => {
                    self.i += 1;
                    return Ok(out);
                }
                Some('\\') if self.peek_at(1) == Some('`') => {
                    out.push('`');
                    self.i += 2;
                }
                Some(c) => {
                    out.push(c);
                    self.i += 1;
                }
            }
        }
    }

    fn number(&mut self) -> Result<ZincScalar, ValueError> {
        let start = self.i;
        if self.peek() == Some('-') {
            self.i += 1;
        }
        self.digits();
        if self.peek() == Some('.') && matches!(self.peek_at(1), Some(d) if d.is_ascii_digit()) {
            self.i += 1;
            self.digits();
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let k = if matches!(self.peek_at(1), Some('+' | '-')) { 2 } else { 1 };
            if matches!(self.peek_at(k), Some(d) if d.is_ascii_digit()) {
                self.i += k;
                self.digits();
            }
        }
        let text: String = self.s[start..self.i].iter().collect();
        let value: f64 = text.parse().map_err(|_| ValueError { offset: start, message: "invalid number".into() })?;
        if !value.is_finite() {
            return Err(ValueError { offset: start, message: "number out of range".into() });
        }
        let ustart = self.i;
        if matches!(self.peek(), Some(c) if is_unit_start(c)) {
            self.i += 1;
            while matches!(self.peek(), Some(c) if is_unit_char(c)) {
                self.i += 1;
            }
        }
        let unit = (self.i > ustart).then(|| self.s[ustart..self.i].iter().collect());
        Ok(ZincScalar::Number { value, unit })
    }

    fn digits(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
    }

    fn list(&mut self, depth: usize) -> Result<ZincScalar, ValueError> {
        self.i += 1;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(self.err("unbalanced '[': missing ']'")),
                Some(']') => {
                    self.i += 1;
                    return Ok(ZincScalar::List(items));
                }
                _ => {}
            }
            items.push(self.value(depth + 1)?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.i += 1,
                Some(']') => {}
                None => return Err(self.err("unbalanced '[': missing ']'")),
                Some(c) => return Err(self.err(&format!("expected ',' or ']' but found {c:?}"))),
            }
        }
    }

    fn dict(&mut self, depth: usize) -> Result<ZincScalar, ValueError> {
        self.i += 1;
        let mut map = BTreeMap::new();
        loop {
            while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r' | ',')) {
                self.i += 1;
            }
            match self.peek() {
                None => return Err(self.err("unbalanced '{': missing '}'")),
                Some('}') => {
                    self.i += 1;
                    return Ok(ZincScalar::Dict(map));
                }
                _ => {}
            }
            let start = self.i;
            if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                return Err(self.err("expected a tag name"));
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.i += 1;
            }
            let name: String = self.s[start..self.i].iter().collect();
            let value = if self.peek() == Some(':') {
                self.i += 1;
                self.skip_ws();
                self.value(depth + 1)?
            } else {
                ZincScalar::Marker
            };
            if map.insert(name, value).is_some() {
                return Err(ValueError { offset: start, message: "duplicate name in dict".into() });
            }
            if !matches!(self.peek(), None | Some(' ' | '\t' | '\n' | '\r' | ',' | '}')) {
                return Err(self.err("expected separator in dict"));
            }
        }
    }
}

// `e`/`E` cannot start a unit, otherwise `1e5` would be ambiguous.
fn is_unit_start(c: char) -> bool {
    (c.is_ascii_alphabetic() && c != 'e' && c != 'E') || matches!(c, '%' | '_' | '/' | '$') || (c as u32) > 127
}

fn is_unit_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '%' | '_' | '/' | '$') || (c as u32) > 127
}

pub(crate) fn is_valid_unit(u: &str) -> bool {
    let mut c = u.chars();
    matches!(c.next(), Some(f) if is_unit_start(f)) && c.all(is_unit_char)
}

pub(crate) fn write_value(v: &ZincScalar, out: &mut String) {
    match v {
        ZincScalar::Marker => out.push('M'),
        ZincScalar::Null => out.push('N'),
        ZincScalar::Bool(b) => out.push(if *b { 'T' } else { 'F' }),
        ZincScalar::Number { value, unit } => {
            out.push_str(&value.to_string());
            if let Some(u) = unit {
                out.push_str(u);
            }
        }
        ZincScalar::Str(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    '\r' => out.push_str("\\r"),
                    c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        ZincScalar::Uri(s) => {
            out.push('`');
            out.push_str(&s.replace('`', "\\`"));
            out.push('`');
        }
        ZincScalar::Symbol(s) => {
            out.push('^');
            out.push_str(s);
        }
        ZincScalar::List(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, out);
            }
            out.push(']');
        }
        ZincScalar::Dict(map) => {
            out.push('{');
            for (k, (name, val)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(name);
                if *val != ZincScalar::Marker {
                    out.push(':');
                    write_value(val, out);
                }
            }
            out.push('}');
        }
    }
}
