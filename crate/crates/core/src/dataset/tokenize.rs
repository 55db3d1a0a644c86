use super::DatasetError;

/// Split a point name into words.
///
/// Boundaries: any non-alphanumeric character (dropped), lower→Upper,
/// letter↔digit, and inside an uppercase run before the last capital when a
/// lowercase letter follows (`AHUSupply` → `AHU`, `Supply`). Tokens keep
/// their case, so joining them gives back the name minus separators.
pub fn tokenize_point_name(name: &str) -> Result<Vec<String>, DatasetError> {
    if name.is_empty() {
        return Err(DatasetError::EmptyName);
    }
    let chars: Vec<char> = name.chars().collect();
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for (k, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if let Some(p) = cur.chars().last() {
            let next = chars.get(k + 1).copied();
            let split = (p.is_lowercase() && c.is_uppercase())
                || (p.is_alphabetic() && c.is_numeric())
                || (p.is_numeric() && c.is_alphabetic())
                || (p.is_uppercase() && c.is_uppercase() && next.is_some_and(|n| n.is_lowercase()));
            if split {
                tokens.push(std::mem::take(&mut cur));
            }
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    if tokens.is_empty() {
        return Err(DatasetError::NoWords(name.to_string()));
    }
    Ok(tokens)
}
