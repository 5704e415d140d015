//! Canonical serializer for the `.rm` format.
//!
//! The output is the one true form: byte-identical for equal models, so
//! serialized models diff cleanly under version control. Entities are
//! grouped into kind buckets (organizations, humans, responsibilities,
//! resources) and sorted by id within each bucket; relationships keep model
//! insertion order; `group` shorthand is never re-synthesized.

use std::fmt::Write;

use crate::model::{EntityKind, Model, RelKind, Violation};

/// Serialization refused because the model breaks a structural rule.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SerializeError {
    #[error("model is not well-formed: {}", format_violations(.violations))]
    InvalidModel { violations: Vec<Violation> },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Renders the canonical `.rm` document for a well-formed model.
pub fn serialize(model: &Model) -> Result<String, SerializeError> {
    let violations = model.validate();
    if !violations.is_empty() {
        return Err(SerializeError::InvalidModel { violations });
    }

    let mut out = String::new();
    writeln!(out, "model \"{}\" {{", escape(&model.name)).unwrap();

    let buckets: [&[EntityKind]; 4] = [
        &[EntityKind::OrganizationalAgent],
        &[EntityKind::HumanAgent],
        &[EntityKind::Responsibility],
        &[
            EntityKind::InformationResource,
            EntityKind::PhysicalResource,
        ],
    ];
    for bucket in buckets {
        // The entity map is ordered by id, so each bucket comes out sorted.
        for entity in model.entities.values().filter(|e| bucket.contains(&e.kind)) {
            write!(out, "  {} {}", entity.kind.keyword(), entity.id).unwrap();
            if !entity.label.is_empty() {
                write!(out, " \"{}\"", escape(&entity.label)).unwrap();
            }
            if let Some(owner) = &entity.owner {
                write!(out, " owner {owner}").unwrap();
            }
            out.push('\n');
        }
    }

    for rel in &model.relationships {
        let joiner = if rel.kind == RelKind::Association {
            "--"
        } else {
            "->"
        };
        write!(
            out,
            "  {} {} {} {}",
            rel.kind.keyword(),
            rel.source,
            joiner,
            rel.target
        )
        .unwrap();
        if let Some(note) = &rel.annotation {
            write!(out, " : \"{}\"", escape(note)).unwrap();
        }
        out.push('\n');
    }

    out.push_str("}\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out
}
