//! Rendering: models as Graphviz DOT, diffs and boundary reports as
//! Markdown. Every renderer is a pure function with byte-stable output.
//!
//! DOT conventions map the drawn notation onto standard shapes:
//!
//! | Element              | DOT                                             |
//! |----------------------|-------------------------------------------------|
//! | human agent          | `shape=triangle`                                |
//! | organizational agent | `shape=triangle, style=filled` (fill tells the two agent shapes apart) |
//! | responsibility       | `shape=box, style=rounded`                      |
//! | resource             | `shape=box`, label in square brackets `[Name]`  |
//! | organization members | dashed cluster per owning organization          |
//! | responsible-for      | directed edge, `arrowhead=box` (square end)     |
//! | has                  | directed edge, `arrowhead=dot` (circular end)   |
//! | association          | undirected edge (`dir=none`), annotation as label |

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::analysis::{BoundaryReport, ModelDiff};
use crate::model::{Entity, EntityKind, Model, RelKey, RelKind, Relationship, Violation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("model is not well-formed: {} violation(s), first: {}", .violations.len(), .violations[0])]
    InvalidModel { violations: Vec<Violation> },
}

/// Renders a well-formed model as a Graphviz DOT document. Nodes are sorted
/// by id (grouped into dashed per-organization clusters), edges follow model
/// insertion order.
pub fn to_dot(model: &Model) -> Result<String, ReportError> {
    render_dot(model, &BTreeSet::new(), &BTreeSet::new())
}

/// Like [`to_dot`], with the diff's added entities and relationships drawn
/// in red — the "what is new in the to-be model" view.
pub fn to_dot_highlighted(model: &Model, diff: &ModelDiff) -> Result<String, ReportError> {
    let added_entities: BTreeSet<&str> =
        diff.added_entities.iter().map(|e| e.id.as_str()).collect();
    let added_relationships: BTreeSet<RelKey> = diff
        .added_relationships
        .iter()
        .map(Relationship::key)
        .collect();
    render_dot(model, &added_entities, &added_relationships)
}

fn render_dot(
    model: &Model,
    added_entities: &BTreeSet<&str>,
    added_relationships: &BTreeSet<RelKey>,
) -> Result<String, ReportError> {
    let violations = model.validate();
    if !violations.is_empty() {
        return Err(ReportError::InvalidModel { violations });
    }

    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(&model.name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();

    let node_line = |entity: &Entity, indent: &str| {
        let mut attrs = match entity.kind {
            EntityKind::HumanAgent => "shape=triangle".to_string(),
            EntityKind::OrganizationalAgent => {
                "shape=triangle, style=filled, fillcolor=lightgrey".to_string()
            }
            EntityKind::Responsibility => "shape=box, style=rounded".to_string(),
            EntityKind::InformationResource | EntityKind::PhysicalResource => {
                "shape=box".to_string()
            }
        };
        let label = if entity.kind.is_resource() {
            format!("[{}]", entity.display())
        } else {
            entity.display().to_string()
        };
        write!(attrs, ", label=\"{}\"", dot_escape(&label)).unwrap();
        if added_entities.contains(entity.id.as_str()) {
            attrs.push_str(", color=red");
        }
        format!(
            "{indent}\"{}\" [{attrs}];\n",
            dot_escape(entity.id.as_str())
        )
    };

    // One dashed cluster per organization: the organization node plus every
    // entity it owns. The entity map is id-ordered, so iteration is stable.
    let orgs: Vec<&Entity> = model
        .entities
        .values()
        .filter(|e| e.kind == EntityKind::OrganizationalAgent)
        .collect();
    for org in &orgs {
        writeln!(
            out,
            "  subgraph \"cluster_{}\" {{",
            dot_escape(org.id.as_str())
        )
        .unwrap();
        writeln!(out, "    label=\"{}\";", dot_escape(org.display())).unwrap();
        writeln!(out, "    style=dashed;").unwrap();
        out.push_str(&node_line(org, "    "));
        for entity in model.entities.values() {
            if entity.owner.as_ref() == Some(&org.id) {
                out.push_str(&node_line(entity, "    "));
            }
        }
        writeln!(out, "  }}").unwrap();
    }
    for entity in model.entities.values() {
        if entity.kind != EntityKind::OrganizationalAgent && entity.owner.is_none() {
            out.push_str(&node_line(entity, "  "));
        }
    }

    for rel in &model.relationships {
        let mut attrs = match rel.kind {
            RelKind::ResponsibleFor => "arrowhead=box".to_string(),
            RelKind::Has => "arrowhead=dot".to_string(),
            RelKind::Association => "dir=none".to_string(),
        };
        if let Some(note) = &rel.annotation {
            write!(attrs, ", label=\"{}\"", dot_escape(note)).unwrap();
        }
        if added_relationships.contains(&rel.key()) {
            attrs.push_str(", color=red");
        }
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [{attrs}];",
            dot_escape(rel.source.as_str()),
            dot_escape(rel.target.as_str())
        )
        .unwrap();
    }

    out.push_str("}\n");
    Ok(out)
}

fn dot_escape(s: &str) -> String {
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

/// Renders a diff as Markdown: one table per non-empty section, or
/// "No changes." for the empty diff.
pub fn diff_report(diff: &ModelDiff) -> String {
    if diff.is_empty() {
        return "No changes.\n".to_string();
    }

    let mut out = String::from("# Model changes\n");

    let entity_table = |out: &mut String, heading: &str, entities: &[Entity]| {
        if entities.is_empty() {
            return;
        }
        write!(out, "\n## {heading}\n\n").unwrap();
        out.push_str("| Id | Kind | Label | Owner |\n");
        out.push_str("| --- | --- | --- | --- |\n");
        for entity in entities {
            writeln!(
                out,
                "| {} | {} | {} | {} |",
                md_escape(entity.id.as_str()),
                entity.kind,
                md_escape(&entity.label),
                md_escape(entity.owner.as_ref().map(|o| o.as_str()).unwrap_or("")),
            )
            .unwrap();
        }
    };
    entity_table(&mut out, "Added entities", &diff.added_entities);
    entity_table(&mut out, "Removed entities", &diff.removed_entities);

    if !diff.changed_entities.is_empty() {
        out.push_str("\n## Changed entities\n\n");
        out.push_str("| Id | Change |\n");
        out.push_str("| --- | --- |\n");
        for (before, after) in &diff.changed_entities {
            writeln!(
                out,
                "| {} | {} |",
                md_escape(before.id.as_str()),
                md_escape(&describe_change(before, after))
            )
            .unwrap();
        }
    }

    let rel_table = |out: &mut String, heading: &str, rels: &[Relationship]| {
        if rels.is_empty() {
            return;
        }
        write!(out, "\n## {heading}\n\n").unwrap();
        out.push_str("| Kind | Source | Target | Annotation |\n");
        out.push_str("| --- | --- | --- | --- |\n");
        for rel in rels {
            writeln!(
                out,
                "| {} | {} | {} | {} |",
                rel.kind,
                md_escape(rel.source.as_str()),
                md_escape(rel.target.as_str()),
                md_escape(rel.annotation.as_deref().unwrap_or("")),
            )
            .unwrap();
        }
    };
    rel_table(&mut out, "Added relationships", &diff.added_relationships);
    rel_table(
        &mut out,
        "Removed relationships",
        &diff.removed_relationships,
    );

    out
}

fn describe_change(before: &Entity, after: &Entity) -> String {
    let mut changes = Vec::new();
    if before.kind != after.kind {
        changes.push(format!("kind: {} to {}", before.kind, after.kind));
    }
    if before.label != after.label {
        changes.push(format!(
            "label: \"{}\" to \"{}\"",
            before.label, after.label
        ));
    }
    if before.owner != after.owner {
        let show = |owner: &Option<crate::model::EntityId>| {
            owner
                .as_ref()
                .map(|o| o.to_string())
                .unwrap_or_else(|| "(none)".to_string())
        };
        changes.push(format!(
            "owner: {} to {}",
            show(&before.owner),
            show(&after.owner)
        ));
    }
    changes.join("; ")
}

/// Renders a control-boundary partition as Markdown: three tables (always
/// present, possibly empty) for in-control, out-of-control with the owning
/// organization, and ownership-unknown closure members.
pub fn boundary_report_md(report: &BoundaryReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# Control boundary for {}",
        md_escape(report.agent.as_str())
    )
    .unwrap();

    out.push_str("\n## In control\n\n| Entity |\n| --- |\n");
    for entity in &report.in_control {
        writeln!(out, "| {} |", md_escape(entity.as_str())).unwrap();
    }

    out.push_str("\n## Out of control\n\n| Entity | Owning organization |\n| --- | --- |\n");
    for (entity, org) in &report.out_of_control {
        writeln!(
            out,
            "| {} | {} |",
            md_escape(entity.as_str()),
            md_escape(org.as_str())
        )
        .unwrap();
    }

    out.push_str("\n## Ownership unknown\n\n| Entity |\n| --- |\n");
    for entity in &report.unknown {
        writeln!(out, "| {} |", md_escape(entity.as_str())).unwrap();
    }

    out
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}
