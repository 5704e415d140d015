//! Hazard-keyword enumeration: crossing analysis targets (entities and
//! relationships) with the seven hazard keywords to produce risk-clause
//! skeletons awaiting analyst triage.
//!
//! The keywords form a HAZOP-style checklist of failure modes. Which
//! keywords apply to which target category is analyst policy, captured in an
//! [`ApplicabilityMatrix`] (default: every keyword applies to every
//! category). Each produced skeleton carries a stable, content-derived
//! `clause_id`, so registers survive re-enumeration after model edits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::analysis::{inter_org_relationships, relationship_scope, ScopeNote};
use crate::model::{EntityId, EntityKind, Model, RelKey, RelKind, Violation};

/// The seven hazard keywords, in canonical checklist order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HazardKeyword {
    Early,
    Late,
    Never,
    Incapable,
    Insufficient,
    Impaired,
    Changes,
}

impl HazardKeyword {
    pub const ALL: [HazardKeyword; 7] = [
        HazardKeyword::Early,
        HazardKeyword::Late,
        HazardKeyword::Never,
        HazardKeyword::Incapable,
        HazardKeyword::Insufficient,
        HazardKeyword::Impaired,
        HazardKeyword::Changes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HazardKeyword::Early => "Early",
            HazardKeyword::Late => "Late",
            HazardKeyword::Never => "Never",
            HazardKeyword::Incapable => "Incapable",
            HazardKeyword::Insufficient => "Insufficient",
            HazardKeyword::Impaired => "Impaired",
            HazardKeyword::Changes => "Changes",
        }
    }

    /// One-line definition of the failure mode the keyword probes.
    pub fn gloss(self) -> &'static str {
        match self {
            HazardKeyword::Early => "Occurrence of entity/relationship before required.",
            HazardKeyword::Late => "Occurrence of entity/relationship after required.",
            HazardKeyword::Never => "Non-occurrence of entity/relationship.",
            HazardKeyword::Incapable => {
                "Occurrence did not take place although attempts were made to fulfill the obligation."
            }
            HazardKeyword::Insufficient => {
                "Occurrence of the entity/relationship at an incorrect level."
            }
            HazardKeyword::Impaired => {
                "Occurrence of the entity/relationship in an incorrect manner."
            }
            HazardKeyword::Changes => "The entity/relationship changes on a permanent basis.",
        }
    }
}

impl fmt::Display for HazardKeyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for HazardKeyword {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HazardKeyword::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown hazard keyword `{s}`"))
    }
}

/// The glosses as a map, for reports and prompts.
pub fn keyword_glosses() -> BTreeMap<HazardKeyword, &'static str> {
    HazardKeyword::ALL
        .into_iter()
        .map(|k| (k, k.gloss()))
        .collect()
}

/// What a risk clause refers to: one entity or one relationship.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Entity(EntityId),
    Relationship(RelKey),
}

impl Target {
    /// The stable text used inside clause ids: the entity id, or the
    /// relationship signature (orientation-normalized for associations).
    pub fn id_or_signature(&self) -> String {
        match self {
            Target::Entity(id) => id.to_string(),
            Target::Relationship(key) => key.signature(),
        }
    }
}

/// Enumeration scope: every element, or only boundary-crossing ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    InterOrg,
}

/// A target category of the applicability matrix: one of the five entity
/// kinds or the three relationship kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TargetCategory {
    Entity(EntityKind),
    Relationship(RelKind),
}

impl TargetCategory {
    pub const ALL: [TargetCategory; 8] = [
        TargetCategory::Entity(EntityKind::HumanAgent),
        TargetCategory::Entity(EntityKind::OrganizationalAgent),
        TargetCategory::Entity(EntityKind::Responsibility),
        TargetCategory::Entity(EntityKind::InformationResource),
        TargetCategory::Entity(EntityKind::PhysicalResource),
        TargetCategory::Relationship(RelKind::ResponsibleFor),
        TargetCategory::Relationship(RelKind::Has),
        TargetCategory::Relationship(RelKind::Association),
    ];

    /// The category's key in matrix files: the statement keyword of the
    /// textual format (`org`, `human`, ..., `responsible`, `has`, `assoc`).
    pub fn keyword(self) -> &'static str {
        match self {
            TargetCategory::Entity(kind) => kind.keyword(),
            TargetCategory::Relationship(kind) => kind.keyword(),
        }
    }
}

/// Which hazard keywords apply to which target category. Total: every
/// category is always mapped (possibly to the empty set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplicabilityMatrix {
    map: BTreeMap<TargetCategory, BTreeSet<HazardKeyword>>,
}

impl Default for ApplicabilityMatrix {
    /// Every keyword applies to every category.
    fn default() -> Self {
        ApplicabilityMatrix {
            map: TargetCategory::ALL
                .into_iter()
                .map(|cat| (cat, HazardKeyword::ALL.into_iter().collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix file is not valid TOML: {0}")]
    Parse(String),
    #[error(
        "unknown target category `{0}` (expected an entity or relationship statement keyword)"
    )]
    UnknownCategory(String),
    #[error("category `{category}` must map to an array of keyword strings")]
    InvalidValue { category: String },
    #[error("category `{category}` lists unknown hazard keyword `{keyword}`")]
    UnknownKeyword { category: String, keyword: String },
}

impl ApplicabilityMatrix {
    /// Loads restrictions from a TOML document mapping category keywords to
    /// arrays of hazard keywords, e.g. `org = ["Changes", "Incapable"]`.
    /// Dotted statement keywords need quoting: `"resource.info" = [...]`.
    /// Categories not mentioned keep the full keyword set; an explicit empty
    /// array switches a category off.
    pub fn from_toml_str(text: &str) -> Result<Self, MatrixError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| MatrixError::Parse(e.message().to_string()))?;
        let mut matrix = ApplicabilityMatrix::default();
        for (key, value) in table {
            let category = TargetCategory::ALL
                .into_iter()
                .find(|cat| cat.keyword() == key)
                .ok_or_else(|| MatrixError::UnknownCategory(key.clone()))?;
            let entries = value.as_array().ok_or_else(|| MatrixError::InvalidValue {
                category: key.clone(),
            })?;
            let mut keywords = BTreeSet::new();
            for entry in entries {
                let name = entry.as_str().ok_or_else(|| MatrixError::InvalidValue {
                    category: key.clone(),
                })?;
                let keyword: HazardKeyword =
                    name.parse().map_err(|_| MatrixError::UnknownKeyword {
                        category: key.clone(),
                        keyword: name.to_string(),
                    })?;
                keywords.insert(keyword);
            }
            matrix.map.insert(category, keywords);
        }
        Ok(matrix)
    }

    /// Keywords applicable to a category, in canonical order.
    pub fn applicable(&self, category: TargetCategory) -> &BTreeSet<HazardKeyword> {
        &self.map[&category]
    }
}

/// The (target, keyword) half of a risk clause, awaiting triage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiskClauseSkeleton {
    /// Content-derived stable id:
    /// `riskclause:<model-name>:<target-id-or-rel-signature>:<keyword>`.
    pub clause_id: String,
    pub target: Target,
    /// Human-readable target text for reports and CSV (entity label, or a
    /// rendered relationship description).
    pub target_display: String,
    pub keyword: HazardKeyword,
    pub scope_note: ScopeNote,
}

/// A suggestive triage prompt built from the keyword gloss and the target
/// label. It frames the question; conditions and consequences stay analyst
/// judgments.
pub fn prompt(skeleton: &RiskClauseSkeleton) -> String {
    format!(
        "Consider {} for \"{}\": {}",
        skeleton.keyword.name(),
        skeleton.target_display,
        skeleton.keyword.gloss()
    )
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HazardError {
    #[error("model `{model}` is not well-formed: {count} violation(s), first: {first}")]
    InvalidModel {
        model: String,
        count: usize,
        first: String,
    },
}

fn ensure_valid(model: &Model) -> Result<(), HazardError> {
    let violations: Vec<Violation> = model.validate();
    match violations.first() {
        None => Ok(()),
        Some(first) => Err(HazardError::InvalidModel {
            model: model.name.clone(),
            count: violations.len(),
            first: first.to_string(),
        }),
    }
}

/// Analysis targets in deterministic order: entities (sorted by id) then
/// relationships (model insertion order). Under [`Scope::InterOrg`] only
/// boundary-crossing relationships and the entities incident to them are
/// produced.
pub fn enumerate_targets(model: &Model, scope: Scope) -> Result<Vec<Target>, HazardError> {
    ensure_valid(model)?;
    let mut targets = Vec::new();
    match scope {
        Scope::All => {
            targets.extend(model.entities.keys().cloned().map(Target::Entity));
            targets.extend(
                model
                    .relationships
                    .iter()
                    .map(|r| Target::Relationship(r.key())),
            );
        }
        Scope::InterOrg => {
            let inter = inter_org_relationships(model);
            let incident: BTreeSet<EntityId> = inter
                .iter()
                .flat_map(|r| [r.source.clone(), r.target.clone()])
                .collect();
            targets.extend(incident.into_iter().map(Target::Entity));
            targets.extend(inter.iter().map(|r| Target::Relationship(r.key())));
        }
    }
    Ok(targets)
}

/// The cross product of [`enumerate_targets`] with the applicable keywords:
/// one skeleton per (target, keyword), in target order then canonical
/// keyword order, with stable clause ids and boundary scope notes.
pub fn enumerate_clauses(
    model: &Model,
    scope: Scope,
    matrix: &ApplicabilityMatrix,
) -> Result<Vec<RiskClauseSkeleton>, HazardError> {
    let targets = enumerate_targets(model, scope)?;

    let inter = inter_org_relationships(model);
    let incident: BTreeSet<&EntityId> = inter.iter().flat_map(|r| [&r.source, &r.target]).collect();
    let rel_scopes: BTreeMap<RelKey, ScopeNote> = model
        .relationships
        .iter()
        .map(|r| (r.key(), relationship_scope(model, r)))
        .collect();

    let mut clauses = Vec::new();
    for target in targets {
        let (category, display, scope_note) = match &target {
            Target::Entity(id) => {
                let entity = &model.entities[id.as_str()];
                let note = if model
                    .owner_org(id.as_str())
                    .expect("target exists")
                    .is_none()
                {
                    ScopeNote::OwnershipUnknown
                } else if incident.contains(id) {
                    ScopeNote::InterOrganizational
                } else {
                    ScopeNote::IntraOrganizational
                };
                (
                    TargetCategory::Entity(entity.kind),
                    entity.display().to_string(),
                    note,
                )
            }
            Target::Relationship(key) => (
                TargetCategory::Relationship(key.kind),
                rel_display(model, key),
                rel_scopes[key],
            ),
        };
        for keyword in matrix.applicable(category) {
            clauses.push(RiskClauseSkeleton {
                clause_id: format!(
                    "riskclause:{}:{}:{}",
                    model.name,
                    target.id_or_signature(),
                    keyword.name().to_ascii_lowercase()
                ),
                target: target.clone(),
                target_display: display.clone(),
                keyword: *keyword,
                scope_note,
            });
        }
    }
    Ok(clauses)
}

/// Readable relationship text for reports: display labels joined by the
/// relationship's phrase, with association annotations in parentheses.
fn rel_display(model: &Model, key: &RelKey) -> String {
    let source = model.display_of(key.source.as_str());
    let target = model.display_of(key.target.as_str());
    let mut text = match key.kind {
        RelKind::ResponsibleFor => format!("{source} responsible for {target}"),
        RelKind::Has => format!("{source} has {target}"),
        RelKind::Association => format!("{source} -- {target}"),
    };
    if let Some(note) = &key.annotation {
        text.push_str(&format!(" (\"{note}\")"));
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, Relationship};

    fn id(s: &str) -> EntityId {
        EntityId::new(s).unwrap()
    }

    /// org A, org B; responsibility R (A); resource X (B); has R→X,
    /// assoc A––B. 3 entities + 2 relationships... plus B = 4 entities.
    fn sample() -> Model {
        Model::new("m")
            .add_entity(Entity::new(id("A"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(Entity::new(id("B"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(
                Entity::new(id("R"), EntityKind::Responsibility)
                    .with_label("Keep Service Running")
                    .with_owner(id("A")),
            )
            .unwrap()
            .add_entity(Entity::new(id("X"), EntityKind::PhysicalResource).with_owner(id("B")))
            .unwrap()
            .add_relationship(Relationship::has(id("R"), id("X")))
            .unwrap()
            .add_relationship(Relationship::assoc_annotated(id("A"), id("B"), "contract"))
            .unwrap()
    }

    #[test]
    fn glosses_are_the_seven_canonical_lines() {
        let glosses = keyword_glosses();
        assert_eq!(glosses.len(), 7);
        assert_eq!(
            glosses[&HazardKeyword::Early],
            "Occurrence of entity/relationship before required."
        );
        assert_eq!(
            glosses[&HazardKeyword::Late],
            "Occurrence of entity/relationship after required."
        );
        assert_eq!(
            glosses[&HazardKeyword::Never],
            "Non-occurrence of entity/relationship."
        );
        assert_eq!(
            glosses[&HazardKeyword::Incapable],
            "Occurrence did not take place although attempts were made to fulfill the obligation."
        );
        assert_eq!(
            glosses[&HazardKeyword::Insufficient],
            "Occurrence of the entity/relationship at an incorrect level."
        );
        assert_eq!(
            glosses[&HazardKeyword::Impaired],
            "Occurrence of the entity/relationship in an incorrect manner."
        );
        assert_eq!(
            glosses[&HazardKeyword::Changes],
            "The entity/relationship changes on a permanent basis."
        );
    }

    #[test]
    fn canonical_order_is_declaration_order() {
        let mut sorted = HazardKeyword::ALL;
        sorted.sort();
        assert_eq!(sorted, HazardKeyword::ALL);
        assert_eq!(HazardKeyword::ALL[0], HazardKeyword::Early);
        assert_eq!(HazardKeyword::ALL[6], HazardKeyword::Changes);
    }

    #[test]
    fn keyword_parsing_is_case_insensitive() {
        assert_eq!(
            "insufficient".parse::<HazardKeyword>().unwrap(),
            HazardKeyword::Insufficient
        );
        assert_eq!(
            "Changes".parse::<HazardKeyword>().unwrap(),
            HazardKeyword::Changes
        );
        assert!("sometimes".parse::<HazardKeyword>().is_err());
    }

    #[test]
    fn default_matrix_is_total() {
        let matrix = ApplicabilityMatrix::default();
        for category in TargetCategory::ALL {
            assert_eq!(matrix.applicable(category).len(), 7, "{category:?}");
        }
    }

    #[test]
    fn matrix_toml_restricts_only_named_categories() {
        let matrix = ApplicabilityMatrix::from_toml_str(
            "org = [\"Changes\", \"Incapable\"]\n\"resource.info\" = []\n",
        )
        .unwrap();
        let org = matrix.applicable(TargetCategory::Entity(EntityKind::OrganizationalAgent));
        assert_eq!(
            org.iter().copied().collect::<Vec<_>>(),
            vec![HazardKeyword::Incapable, HazardKeyword::Changes],
            "canonical order regardless of file order"
        );
        assert!(matrix
            .applicable(TargetCategory::Entity(EntityKind::InformationResource))
            .is_empty());
        assert_eq!(
            matrix
                .applicable(TargetCategory::Relationship(RelKind::Has))
                .len(),
            7,
            "omitted categories keep the default"
        );
    }

    #[test]
    fn matrix_toml_rejects_unknown_names() {
        assert!(matches!(
            ApplicabilityMatrix::from_toml_str("widget = [\"Early\"]"),
            Err(MatrixError::UnknownCategory(_))
        ));
        assert!(matches!(
            ApplicabilityMatrix::from_toml_str("org = [\"Sometimes\"]"),
            Err(MatrixError::UnknownKeyword { .. })
        ));
        assert!(matches!(
            ApplicabilityMatrix::from_toml_str("org = \"Early\""),
            Err(MatrixError::InvalidValue { .. })
        ));
        assert!(matches!(
            ApplicabilityMatrix::from_toml_str("org = [\"Early\""),
            Err(MatrixError::Parse(_))
        ));
    }

    #[test]
    fn targets_all_counts_entities_then_relationships() {
        let m = sample();
        let targets = enumerate_targets(&m, Scope::All).unwrap();
        assert_eq!(targets.len(), 6, "4 entities + 2 relationships");
        assert_eq!(
            targets[..4]
                .iter()
                .map(Target::id_or_signature)
                .collect::<Vec<_>>(),
            vec!["A", "B", "R", "X"]
        );
        assert_eq!(targets[4].id_or_signature(), "has:R->X");
        assert_eq!(targets[5].id_or_signature(), "assoc:A--B:contract");
    }

    #[test]
    fn targets_inter_org_empty_for_single_organization() {
        let m = Model::new("solo")
            .add_entity(Entity::new(id("A"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(Entity::new(id("R"), EntityKind::Responsibility).with_owner(id("A")))
            .unwrap()
            .add_relationship(Relationship::responsible(id("A"), id("R")))
            .unwrap();
        assert!(enumerate_targets(&m, Scope::InterOrg).unwrap().is_empty());
    }

    #[test]
    fn targets_inter_org_are_boundary_edges_plus_incident_entities() {
        let m = sample();
        let targets = enumerate_targets(&m, Scope::InterOrg).unwrap();
        let texts: Vec<String> = targets.iter().map(Target::id_or_signature).collect();
        assert_eq!(
            texts,
            vec!["A", "B", "R", "X", "has:R->X", "assoc:A--B:contract"],
            "every element of this sample crosses the A/B boundary"
        );
    }

    #[test]
    fn enumeration_count_is_cross_product() {
        let m = sample();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        assert_eq!(clauses.len(), 6 * 7);

        // Spec of the count law on a concrete 3-entity, 2-relationship model.
        let m2 = Model::new("m2")
            .add_entity(Entity::new(id("A"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(Entity::new(id("R"), EntityKind::Responsibility).with_owner(id("A")))
            .unwrap()
            .add_entity(Entity::new(id("X"), EntityKind::InformationResource).with_owner(id("A")))
            .unwrap()
            .add_relationship(Relationship::responsible(id("A"), id("R")))
            .unwrap()
            .add_relationship(Relationship::has(id("R"), id("X")))
            .unwrap();
        let targets = enumerate_targets(&m2, Scope::All).unwrap();
        assert_eq!(targets.len(), 5);
        let clauses = enumerate_clauses(&m2, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        assert_eq!(clauses.len(), 35);
    }

    #[test]
    fn clause_ids_are_stable_and_content_derived() {
        let m = sample();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        assert_eq!(clauses[0].clause_id, "riskclause:m:A:early");
        let assoc_changes = clauses
            .iter()
            .find(|c| {
                c.keyword == HazardKeyword::Changes
                    && matches!(&c.target, Target::Relationship(k) if k.kind == RelKind::Association)
            })
            .unwrap();
        assert_eq!(
            assoc_changes.clause_id,
            "riskclause:m:assoc:A--B:contract:changes"
        );
    }

    #[test]
    fn clause_order_is_target_then_keyword() {
        let m = sample();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let first_target: Vec<HazardKeyword> = clauses[..7].iter().map(|c| c.keyword).collect();
        assert_eq!(first_target, HazardKeyword::ALL.to_vec());
        assert!(clauses[..7].iter().all(|c| c.target == clauses[0].target));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let m = sample();
        let a = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let b = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inter_org_clauses_are_subset_of_all() {
        let m = sample();
        let matrix = ApplicabilityMatrix::default();
        let all: BTreeSet<(Target, HazardKeyword)> = enumerate_clauses(&m, Scope::All, &matrix)
            .unwrap()
            .into_iter()
            .map(|c| (c.target, c.keyword))
            .collect();
        let inter: BTreeSet<(Target, HazardKeyword)> =
            enumerate_clauses(&m, Scope::InterOrg, &matrix)
                .unwrap()
                .into_iter()
                .map(|c| (c.target, c.keyword))
                .collect();
        assert!(inter.is_subset(&all));
    }

    #[test]
    fn matrix_restriction_removes_exactly_the_named_pairs() {
        let m = sample();
        let full = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let restricted_matrix =
            ApplicabilityMatrix::from_toml_str("responsibility = [\"Early\", \"Late\", \"Never\", \"Incapable\", \"Insufficient\", \"Impaired\"]").unwrap();
        let restricted = enumerate_clauses(&m, Scope::All, &restricted_matrix).unwrap();
        assert_eq!(full.len() - restricted.len(), 1);
        let missing: Vec<&RiskClauseSkeleton> = full
            .iter()
            .filter(|c| !restricted.iter().any(|r| r.clause_id == c.clause_id))
            .collect();
        assert_eq!(missing.len(), 1);
        assert_eq!(missing[0].keyword, HazardKeyword::Changes);
        assert_eq!(missing[0].target, Target::Entity(id("R")));
    }

    #[test]
    fn scope_notes_follow_ownership() {
        let m = sample()
            .add_entity(Entity::new(id("U"), EntityKind::InformationResource))
            .unwrap();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let note_of = |target: &Target| {
            clauses
                .iter()
                .find(|c| &c.target == target)
                .unwrap()
                .scope_note
        };
        assert_eq!(
            note_of(&Target::Entity(id("R"))),
            ScopeNote::InterOrganizational
        );
        assert_eq!(
            note_of(&Target::Entity(id("U"))),
            ScopeNote::OwnershipUnknown
        );
        let has_key = m.relationships[0].key();
        assert_eq!(
            note_of(&Target::Relationship(has_key)),
            ScopeNote::InterOrganizational
        );
    }

    #[test]
    fn intra_entities_marked_intra() {
        let m = Model::new("solo")
            .add_entity(Entity::new(id("A"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(Entity::new(id("R"), EntityKind::Responsibility).with_owner(id("A")))
            .unwrap()
            .add_relationship(Relationship::responsible(id("A"), id("R")))
            .unwrap();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        assert!(clauses
            .iter()
            .all(|c| c.scope_note == ScopeNote::IntraOrganizational));
    }

    #[test]
    fn target_display_uses_labels() {
        let m = sample();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let r_clause = clauses
            .iter()
            .find(|c| c.target == Target::Entity(id("R")))
            .unwrap();
        assert_eq!(r_clause.target_display, "Keep Service Running");
        let has_clause = clauses
            .iter()
            .find(|c| matches!(&c.target, Target::Relationship(k) if k.kind == RelKind::Has))
            .unwrap();
        assert_eq!(has_clause.target_display, "Keep Service Running has X");
        let assoc_clause = clauses
            .iter()
            .find(
                |c| matches!(&c.target, Target::Relationship(k) if k.kind == RelKind::Association),
            )
            .unwrap();
        assert_eq!(assoc_clause.target_display, "A -- B (\"contract\")");
    }

    #[test]
    fn prompt_frames_keyword_and_target() {
        let m = sample();
        let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
        let clause = clauses
            .iter()
            .find(|c| {
                c.target == Target::Entity(id("R")) && c.keyword == HazardKeyword::Insufficient
            })
            .unwrap();
        assert_eq!(
            prompt(clause),
            "Consider Insufficient for \"Keep Service Running\": \
             Occurrence of the entity/relationship at an incorrect level."
        );
    }

    #[test]
    fn invalid_model_is_refused() {
        let mut m = sample();
        m.relationships
            .push(Relationship::assoc(id("A"), id("Ghost")));
        let err = enumerate_targets(&m, Scope::All).unwrap_err();
        assert!(matches!(err, HazardError::InvalidModel { .. }));
        assert!(enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).is_err());
    }
}
