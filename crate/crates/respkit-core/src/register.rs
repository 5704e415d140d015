//! The risk register: triage of enumerated clause skeletons into full risk
//! rows, merge across re-enumerations, canonical `.rmreg` persistence, and
//! CSV export.
//!
//! A register tracks one model. Clauses are keyed by their content-derived
//! `clause_id`, so re-enumerating after a model edit matches old clauses to
//! new skeletons: surviving clauses keep every triage field byte-for-byte,
//! vanished ones are flagged `orphaned` but never deleted (risk knowledge
//! must survive model churn), and new ones start `Open`.
//!
//! The `.rmreg` file is TOML with a `format_version` field, written in a
//! canonical byte-stable order so registers diff cleanly under version
//! control. Triage happens by editing that file (or calling [`triage`]); the
//! schema is one `[[clauses]]` table per clause.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::ScopeNote;
use crate::hazard::{HazardKeyword, RiskClauseSkeleton, Target};
use crate::model::{EntityId, RelKey, RelKind};

/// Likelihood/severity level. The register stores exactly what the analyst
/// recorded; `Medium` exists because two-point scales are unusable in
/// practice, and it degrades gracefully to Low/High reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rating {
    Low,
    Medium,
    High,
}

impl Rating {
    pub fn name(self) -> &'static str {
        match self {
            Rating::Low => "Low",
            Rating::Medium => "Medium",
            Rating::High => "High",
        }
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Rating {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Rating::Low, Rating::Medium, Rating::High]
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rating `{s}` (expected Low, Medium or High)"))
    }
}

/// Clause lifecycle. Transitions are not restricted — analysts may reopen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    #[default]
    Open,
    Triaged,
    Accepted,
    Mitigated,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Open => "Open",
            Status::Triaged => "Triaged",
            Status::Accepted => "Accepted",
            Status::Mitigated => "Mitigated",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Status::Open,
            Status::Triaged,
            Status::Accepted,
            Status::Mitigated,
        ]
        .into_iter()
        .find(|st| st.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| {
            format!("unknown status `{s}` (expected Open, Triaged, Accepted or Mitigated)")
        })
    }
}

/// One register row: the enumerated skeleton plus analyst triage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiskClause {
    pub skeleton: RiskClauseSkeleton,
    pub condition: String,
    /// Consequences and liabilities, combined as in the register table.
    pub consequences: String,
    pub likelihood: Option<Rating>,
    pub severity: Option<Rating>,
    pub action: String,
    pub status: Status,
    /// Set when the skeleton vanished from a later enumeration; the clause
    /// is retained for its triage knowledge.
    pub orphaned: bool,
}

impl RiskClause {
    fn open(skeleton: RiskClauseSkeleton) -> Self {
        RiskClause {
            skeleton,
            condition: String::new(),
            consequences: String::new(),
            likelihood: None,
            severity: None,
            action: String::new(),
            status: Status::Open,
            orphaned: false,
        }
    }
}

/// A model's risk register: clauses keyed by `clause_id`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Register {
    pub model_name: String,
    pub clauses: BTreeMap<String, RiskClause>,
}

/// Outcome counts of a [`merge`]: ids present in both old register and new
/// skeletons (`kept`), new skeletons (`added`), and the total number of
/// clauses flagged orphaned after the merge (`orphaned`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeSummary {
    pub kept: usize,
    pub added: usize,
    pub orphaned: usize,
}

impl fmt::Display for MergeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kept={} added={} orphaned={}",
            self.kept, self.added, self.orphaned
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RegisterError {
    #[error("duplicate clause id `{id}`")]
    DuplicateClauseId { id: String },
    #[error("no clause with id `{id}`")]
    UnknownClause { id: String },
    #[error("{field} must not be blank")]
    EmptyField { field: &'static str },
    #[error("register file is not valid TOML: {0}")]
    Malformed(String),
    #[error("unsupported register format_version {found} (this build reads version 1)")]
    UnsupportedVersion { found: u32 },
    #[error("clause `{id}` is invalid: {reason}")]
    InvalidClause { id: String, reason: String },
}

/// Builds a fresh register of `Open` clauses, one per skeleton.
pub fn init_register(
    model_name: impl Into<String>,
    skeletons: &[RiskClauseSkeleton],
) -> Result<Register, RegisterError> {
    let mut clauses = BTreeMap::new();
    for skeleton in skeletons {
        let id = skeleton.clause_id.clone();
        if clauses
            .insert(id.clone(), RiskClause::open(skeleton.clone()))
            .is_some()
        {
            return Err(RegisterError::DuplicateClauseId { id });
        }
    }
    Ok(Register {
        model_name: model_name.into(),
        clauses,
    })
}

/// Records analyst judgment on one clause and marks it `Triaged`. The
/// condition and consequences must carry text — a triaged clause without
/// them is not a risk record.
pub fn triage(
    register: &Register,
    clause_id: &str,
    condition: &str,
    consequences: &str,
    likelihood: Rating,
    severity: Rating,
    action: &str,
) -> Result<Register, RegisterError> {
    if condition.trim().is_empty() {
        return Err(RegisterError::EmptyField { field: "condition" });
    }
    if consequences.trim().is_empty() {
        return Err(RegisterError::EmptyField {
            field: "consequences",
        });
    }
    let mut next = register.clone();
    let clause = next
        .clauses
        .get_mut(clause_id)
        .ok_or_else(|| RegisterError::UnknownClause {
            id: clause_id.to_string(),
        })?;
    clause.condition = condition.to_string();
    clause.consequences = consequences.to_string();
    clause.likelihood = Some(likelihood);
    clause.severity = Some(severity);
    clause.action = action.to_string();
    clause.status = Status::Triaged;
    Ok(next)
}

/// Reconciles a register with a re-enumeration. Surviving clause ids keep
/// all triage fields byte-identically (their skeleton text is refreshed and
/// any orphan flag cleared); new ids become `Open` clauses; ids absent from
/// the new skeletons are flagged orphaned, never deleted.
pub fn merge(
    register: &Register,
    new_skeletons: &[RiskClauseSkeleton],
) -> (Register, MergeSummary) {
    let mut next = register.clone();
    let mut summary = MergeSummary::default();

    let incoming: BTreeMap<&str, &RiskClauseSkeleton> = new_skeletons
        .iter()
        .map(|s| (s.clause_id.as_str(), s))
        .collect();

    for (id, clause) in &mut next.clauses {
        match incoming.get(id.as_str()) {
            Some(skeleton) => {
                clause.skeleton = (*skeleton).clone();
                clause.orphaned = false;
                summary.kept += 1;
            }
            None => {
                clause.orphaned = true;
            }
        }
    }
    for (id, skeleton) in incoming {
        if !next.clauses.contains_key(id) {
            next.clauses
                .insert(id.to_string(), RiskClause::open((*skeleton).clone()));
            summary.added += 1;
        }
    }
    summary.orphaned = next.clauses.values().filter(|c| c.orphaned).count();
    (next, summary)
}

/// Renders the register as RFC 4180 CSV with LF line endings, one row per
/// clause in clause-id order. The Risk cell reads `<Likelihood>/<Severity>`
/// when both ratings are set and is empty otherwise; orphaned clauses carry
/// an ` (orphaned)` suffix in the Status cell.
pub fn export_csv(register: &Register) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer
        .write_record([
            "Target",
            "Hazard Keyword",
            "Condition",
            "Consequences / Liabilities",
            "Risk (Li/Sev)",
            "Recommended Action",
            "Status",
        ])
        .expect("writing to a Vec cannot fail");
    for clause in register.clauses.values() {
        let risk = match (clause.likelihood, clause.severity) {
            (Some(li), Some(sev)) => format!("{li}/{sev}"),
            _ => String::new(),
        };
        let status = if clause.orphaned {
            format!("{} (orphaned)", clause.status)
        } else {
            clause.status.to_string()
        };
        writer
            .write_record([
                clause.skeleton.target_display.as_str(),
                clause.skeleton.keyword.name(),
                clause.condition.as_str(),
                clause.consequences.as_str(),
                risk.as_str(),
                clause.action.as_str(),
                status.as_str(),
            ])
            .expect("writing to a Vec cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("no flush failure on Vec"))
        .expect("CSV output is UTF-8")
}

/// On-disk register document. `format_version` gates future schema changes.
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct RegisterDoc {
    format_version: u32,
    model: String,
    #[serde(default)]
    clauses: Vec<ClauseDoc>,
}

/// Flat clause record: entity targets carry `target_entity`, relationship
/// targets carry the `target_rel_*` fields.
#[derive(Serialize, Deserialize)]
struct ClauseDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_entity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rel_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rel_source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rel_target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rel_annotation: Option<String>,
    display: String,
    keyword: String,
    scope: String,
    status: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    orphaned: bool,
    condition: String,
    consequences: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    likelihood: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    severity: Option<String>,
    action: String,
}

/// Serializes to the canonical `.rmreg` text (byte-stable: clauses in id
/// order, fields in fixed order).
pub fn to_rmreg(register: &Register) -> String {
    let doc = RegisterDoc {
        format_version: FORMAT_VERSION,
        model: register.model_name.clone(),
        clauses: register
            .clauses
            .values()
            .map(|clause| {
                let (target_entity, rel) = match &clause.skeleton.target {
                    Target::Entity(id) => (Some(id.to_string()), None),
                    Target::Relationship(key) => (None, Some(key)),
                };
                ClauseDoc {
                    id: clause.skeleton.clause_id.clone(),
                    target_entity,
                    target_rel_kind: rel.map(|k| k.kind.keyword().to_string()),
                    target_rel_source: rel.map(|k| k.source.to_string()),
                    target_rel_target: rel.map(|k| k.target.to_string()),
                    target_rel_annotation: rel.and_then(|k| k.annotation.clone()),
                    display: clause.skeleton.target_display.clone(),
                    keyword: clause.skeleton.keyword.name().to_string(),
                    scope: clause.skeleton.scope_note.to_string(),
                    status: clause.status.to_string(),
                    orphaned: clause.orphaned,
                    condition: clause.condition.clone(),
                    consequences: clause.consequences.clone(),
                    likelihood: clause.likelihood.map(|r| r.name().to_string()),
                    severity: clause.severity.map(|r| r.name().to_string()),
                    action: clause.action.clone(),
                }
            })
            .collect(),
    };
    toml::to_string(&doc).expect("register serializes to TOML")
}

/// Parses and validates `.rmreg` text.
pub fn from_rmreg(text: &str) -> Result<Register, RegisterError> {
    let doc: RegisterDoc =
        toml::from_str(text).map_err(|e| RegisterError::Malformed(e.message().to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(RegisterError::UnsupportedVersion {
            found: doc.format_version,
        });
    }

    let mut clauses = BTreeMap::new();
    for entry in doc.clauses {
        let id = entry.id.clone();
        let invalid = |reason: String| RegisterError::InvalidClause {
            id: id.clone(),
            reason,
        };

        let target = match (&entry.target_entity, &entry.target_rel_kind) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "both target_entity and target_rel_* are set".into(),
                ))
            }
            (Some(entity), None) => {
                Target::Entity(EntityId::new(entity.clone()).map_err(|e| invalid(e.to_string()))?)
            }
            (None, Some(kind)) => {
                let kind = RelKind::ALL
                    .into_iter()
                    .find(|k| k.keyword() == kind)
                    .ok_or_else(|| invalid(format!("unknown relationship kind `{kind}`")))?;
                let source = entry
                    .target_rel_source
                    .as_deref()
                    .ok_or_else(|| invalid("target_rel_source is missing".into()))?;
                let target = entry
                    .target_rel_target
                    .as_deref()
                    .ok_or_else(|| invalid("target_rel_target is missing".into()))?;
                Target::Relationship(RelKey {
                    kind,
                    source: EntityId::new(source).map_err(|e| invalid(e.to_string()))?,
                    target: EntityId::new(target).map_err(|e| invalid(e.to_string()))?,
                    annotation: entry.target_rel_annotation.clone(),
                })
            }
            (None, None) => {
                return Err(invalid(
                    "neither target_entity nor target_rel_* is set".into(),
                ))
            }
        };

        let keyword: HazardKeyword = entry.keyword.parse().map_err(invalid)?;
        let scope_note: ScopeNote = entry.scope.parse().map_err(invalid)?;
        let status: Status = entry.status.parse().map_err(invalid)?;
        let likelihood = entry
            .likelihood
            .as_deref()
            .map(str::parse::<Rating>)
            .transpose()
            .map_err(invalid)?;
        let severity = entry
            .severity
            .as_deref()
            .map(str::parse::<Rating>)
            .transpose()
            .map_err(invalid)?;

        if status > Status::Open
            && (entry.condition.trim().is_empty()
                || entry.consequences.trim().is_empty()
                || likelihood.is_none()
                || severity.is_none())
        {
            return Err(invalid(format!(
                "status {status} requires condition, consequences and both ratings"
            )));
        }

        let clause = RiskClause {
            skeleton: RiskClauseSkeleton {
                clause_id: entry.id.clone(),
                target,
                target_display: entry.display,
                keyword,
                scope_note,
            },
            condition: entry.condition,
            consequences: entry.consequences,
            likelihood,
            severity,
            action: entry.action,
            status,
            orphaned: entry.orphaned,
        };
        if clauses.insert(entry.id.clone(), clause).is_some() {
            return Err(RegisterError::DuplicateClauseId { id: entry.id });
        }
    }
    Ok(Register {
        model_name: doc.model,
        clauses,
    })
}
