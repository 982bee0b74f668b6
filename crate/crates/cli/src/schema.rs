//! JSON Schemas for the report envelope and each command's `outputs`.

use serde_json::Value;

pub const REPORT: &str = include_str!("../schemas/report.json");

const TABLE: &[(&str, &str)] = &[
    ("info", include_str!("../schemas/info.json")),
    ("rowsum", include_str!("../schemas/rowsum.json")),
    ("product", include_str!("../schemas/product.json")),
    ("bounds", include_str!("../schemas/bounds.json")),
    ("regions", include_str!("../schemas/regions.json")),
    ("rho", include_str!("../schemas/rho.json")),
    ("cw-cert", include_str!("../schemas/cw-cert.json")),
    ("verify-paper", include_str!("../schemas/verify-paper.json")),
];

/// Schema of the envelope every command prints.
pub fn report_schema() -> Value {
    serde_json::from_str(REPORT).expect("embedded schema is valid JSON")
}

/// Schema of `outputs` for a command name such as `"bounds minc"`; subcommands
/// share the schema of their group.
pub fn output_schema(command: &str) -> Option<Value> {
    let group = command.split_whitespace().next()?;
    TABLE
        .iter()
        .find(|(name, _)| *name == group)
        .map(|(_, s)| serde_json::from_str(s).expect("embedded schema is valid JSON"))
}

/// Names with a published schema.
pub fn schema_names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|(n, _)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_parse() {
        report_schema();
        for n in schema_names() {
            assert!(output_schema(n).is_some(), "{n}");
        }
        assert!(output_schema("bounds minc-power").is_some());
        assert!(output_schema("nope").is_none());
    }
}
