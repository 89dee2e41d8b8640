//! Regenerates `corpus/` from the catalogue: `cargo run --example write_corpus`.

use std::fs;
use std::path::Path;

use pillowcase_core::catalog::{move_pairs, tangles};
use serde_json::Value;

/// One key per line, values compact.
fn layout(v: &Value, indent: usize) -> String {
    let Value::Object(map) = v else { return v.to_string() };
    let pad = " ".repeat(indent + 2);
    let lines: Vec<String> = map
        .iter()
        .map(|(k, v)| match v {
            Value::Object(_) => format!("{pad}\"{k}\": {}", layout(v, indent + 2)),
            _ => format!("{pad}\"{k}\": {v}"),
        })
        .collect();
    format!("{{\n{}\n{}}}", lines.join(",\n"), " ".repeat(indent))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    fs::create_dir_all(root.join("tangles"))?;
    fs::create_dir_all(root.join("pairs"))?;
    for t in tangles() {
        let text = layout(&t.diagram()?.to_value(), 0);
        fs::write(root.join("tangles").join(format!("{}.json", t.name)), text + "\n")?;
    }
    for p in move_pairs() {
        let (a, b) = p.diagrams()?;
        let doc = serde_json::json!({ "move": p.mv, "first": a.to_value(), "second": b.to_value() });
        fs::write(root.join("pairs").join(format!("{}.json", p.name)), layout(&doc, 0) + "\n")?;
    }
    Ok(())
}
