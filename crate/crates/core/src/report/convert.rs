use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{Iri, Symbol};
use crate::turtle::{BrickError, BrickSchema};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TagConversion {
    pub class: Iri,
    pub tags: BTreeSet<Symbol>,
    pub warnings: Vec<String>,
}

/// Haystack-style tags for a Brick class: its associated tags, plus those
/// of its ancestors when `inherit` is set.
pub fn convert_brick_class_to_tags(schema: &BrickSchema, iri: &Iri, inherit: bool) -> Result<TagConversion, BrickError> {
    let tags = schema.class_tags(iri, inherit)?;
    let mut warnings = Vec::new();
    if tags.is_empty() {
        warnings.push(format!("{} has no associated tags", iri.local_name()));
    }
    Ok(TagConversion { class: iri.clone(), tags, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::tests::tiny_brick;

    #[test]
    fn declared_inherited_unknown() {
        let b = tiny_brick();
        let ts = b.expand("Temperature_Sensor");
        let declared = convert_brick_class_to_tags(&b, &ts, false).unwrap();
        let names: Vec<&str> = declared.tags.iter().map(|t| t.as_str()).collect();
        assert_eq!(names, ["point", "sensor", "temperature"]);
        assert!(declared.tags.is_subset(&b.tag_vocabulary));
        let root = convert_brick_class_to_tags(&b, &b.expand("Equipment"), true).unwrap();
        assert!(root.tags.is_empty() && !root.warnings.is_empty());
        assert!(convert_brick_class_to_tags(&b, &b.expand("Nope"), true).is_err());
    }
}
