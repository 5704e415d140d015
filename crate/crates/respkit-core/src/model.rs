//! The responsibility-model graph: entity and relationship taxonomies,
//! organizational ownership, and structural validation.
//!
//! A [`Model`] is an immutable value. The `add_*` operations return a new
//! model and never touch their input, so models can be shared freely across
//! threads. [`Model::validate`] re-checks every structural rule after
//! programmatic construction or deserialization of edited text.

use std::collections::BTreeMap;
use std::fmt;

/// The five entity kinds of the notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    HumanAgent,
    OrganizationalAgent,
    Responsibility,
    InformationResource,
    PhysicalResource,
}

impl EntityKind {
    /// All kinds, in canonical order.
    pub const ALL: [EntityKind; 5] = [
        EntityKind::HumanAgent,
        EntityKind::OrganizationalAgent,
        EntityKind::Responsibility,
        EntityKind::InformationResource,
        EntityKind::PhysicalResource,
    ];

    pub fn is_agent(self) -> bool {
        matches!(
            self,
            EntityKind::HumanAgent | EntityKind::OrganizationalAgent
        )
    }

    pub fn is_resource(self) -> bool {
        matches!(
            self,
            EntityKind::InformationResource | EntityKind::PhysicalResource
        )
    }

    /// Keyword used in the textual format.
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::HumanAgent => "human",
            EntityKind::OrganizationalAgent => "org",
            EntityKind::Responsibility => "responsibility",
            EntityKind::InformationResource => "resource.info",
            EntityKind::PhysicalResource => "resource.phys",
        }
    }

    /// Human-readable kind name for messages and reports.
    pub fn display_name(self) -> &'static str {
        match self {
            EntityKind::HumanAgent => "human agent",
            EntityKind::OrganizationalAgent => "organizational agent",
            EntityKind::Responsibility => "responsibility",
            EntityKind::InformationResource => "information resource",
            EntityKind::PhysicalResource => "physical resource",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// An entity identifier: a non-empty token `[A-Za-z_][A-Za-z0-9_]*`.
///
/// The token rule is enforced at construction so that every model can be
/// written back out by the serializer and re-read.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(EntityId(id))
        } else {
            Err(ModelError::InvalidIdentifier { id })
        }
    }

    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for EntityId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityId::new(s)
    }
}

impl std::borrow::Borrow<str> for EntityId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for EntityId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A node of the model graph: an agent, a responsibility, or a resource.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    /// Display text; empty means "use the id".
    pub label: String,
    /// Owning organization, when known. Organizational agents never carry one.
    pub owner: Option<EntityId>,
}

impl Entity {
    pub fn new(id: EntityId, kind: EntityKind) -> Self {
        Entity {
            id,
            kind,
            label: String::new(),
            owner: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_owner(mut self, owner: EntityId) -> Self {
        self.owner = Some(owner);
        self
    }

    /// Label when present, id otherwise.
    pub fn display(&self) -> &str {
        if self.label.is_empty() {
            self.id.as_str()
        } else {
            &self.label
        }
    }
}

/// The three relationship kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelKind {
    ResponsibleFor,
    Has,
    Association,
}

impl RelKind {
    pub const ALL: [RelKind; 3] = [RelKind::ResponsibleFor, RelKind::Has, RelKind::Association];

    /// Keyword used in the textual format.
    pub fn keyword(self) -> &'static str {
        match self {
            RelKind::ResponsibleFor => "responsible",
            RelKind::Has => "has",
            RelKind::Association => "assoc",
        }
    }

    /// Checks the endpoint-kind constraint table for this relationship kind.
    ///
    /// The table is total: every (kind, source, target) triple is decided.
    pub fn permits(self, source: EntityKind, target: EntityKind) -> Result<(), KindConstraint> {
        match self {
            RelKind::ResponsibleFor => {
                if !source.is_agent() {
                    Err(KindConstraint {
                        kind: self,
                        end: Endpoint::Source,
                        found: source,
                        requirement: "a human or organizational agent",
                    })
                } else if target != EntityKind::Responsibility {
                    Err(KindConstraint {
                        kind: self,
                        end: Endpoint::Target,
                        found: target,
                        requirement: "a responsibility",
                    })
                } else {
                    Ok(())
                }
            }
            RelKind::Has => {
                if !(source.is_agent() || source == EntityKind::Responsibility) {
                    Err(KindConstraint {
                        kind: self,
                        end: Endpoint::Source,
                        found: source,
                        requirement: "an agent or responsibility",
                    })
                } else if !target.is_resource() {
                    Err(KindConstraint {
                        kind: self,
                        end: Endpoint::Target,
                        found: target,
                        requirement: "an information or physical resource",
                    })
                } else {
                    Ok(())
                }
            }
            RelKind::Association => Ok(()),
        }
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Which end of a relationship a constraint refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Target,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Source => "source",
            Endpoint::Target => "target",
        })
    }
}

/// A violated endpoint-kind constraint, carrying which rule failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindConstraint {
    pub kind: RelKind,
    pub end: Endpoint,
    pub found: EntityKind,
    pub requirement: &'static str,
}

impl fmt::Display for KindConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} must be {}, found {}",
            self.kind, self.end, self.requirement, self.found
        )
    }
}

/// An edge of the model graph.
///
/// Associations are drawn undirected: the stored (source, target) orientation
/// only affects serialization order, while duplicate detection, diffing and
/// clause identity treat `a -- b` and `b -- a` as the same edge (see
/// [`Relationship::key`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relationship {
    pub kind: RelKind,
    pub source: EntityId,
    pub target: EntityId,
    /// Free-text clarification; only associations carry one.
    pub annotation: Option<String>,
}

impl Relationship {
    pub fn responsible(source: EntityId, target: EntityId) -> Self {
        Relationship {
            kind: RelKind::ResponsibleFor,
            source,
            target,
            annotation: None,
        }
    }

    pub fn has(source: EntityId, target: EntityId) -> Self {
        Relationship {
            kind: RelKind::Has,
            source,
            target,
            annotation: None,
        }
    }

    pub fn assoc(source: EntityId, target: EntityId) -> Self {
        Relationship {
            kind: RelKind::Association,
            source,
            target,
            annotation: None,
        }
    }

    pub fn assoc_annotated(source: EntityId, target: EntityId, note: impl Into<String>) -> Self {
        Relationship {
            kind: RelKind::Association,
            source,
            target,
            annotation: Some(note.into()),
        }
    }

    /// Canonical identity key. Association endpoints are order-normalized so
    /// a reversed association compares equal.
    pub fn key(&self) -> RelKey {
        let (a, b) = if self.kind == RelKind::Association && self.target < self.source {
            (self.target.clone(), self.source.clone())
        } else {
            (self.source.clone(), self.target.clone())
        };
        RelKey {
            kind: self.kind,
            source: a,
            target: b,
            annotation: self.annotation.clone(),
        }
    }

    /// Stable textual signature, e.g. `has:TimelySupportResolution->LeasedLine`
    /// or `assoc:CompanyB--CompanyC:support contract`. Built from the
    /// canonical key, so it is orientation-independent for associations.
    pub fn signature(&self) -> String {
        self.key().signature()
    }
}

impl fmt::Display for Relationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joiner = if self.kind == RelKind::Association {
            "--"
        } else {
            "->"
        };
        write!(
            f,
            "{} {} {} {}",
            self.kind, self.source, joiner, self.target
        )?;
        if let Some(note) = &self.annotation {
            write!(f, " : \"{note}\"")?;
        }
        Ok(())
    }
}

/// Canonical relationship identity: kind, order-normalized endpoints,
/// annotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelKey {
    pub kind: RelKind,
    pub source: EntityId,
    pub target: EntityId,
    pub annotation: Option<String>,
}

impl RelKey {
    pub fn signature(&self) -> String {
        let joiner = if self.kind == RelKind::Association {
            "--"
        } else {
            "->"
        };
        let mut sig = format!("{}:{}{}{}", self.kind, self.source, joiner, self.target);
        if let Some(note) = &self.annotation {
            sig.push(':');
            sig.push_str(note);
        }
        sig
    }
}

impl fmt::Display for RelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joiner = if self.kind == RelKind::Association {
            "--"
        } else {
            "->"
        };
        write!(
            f,
            "{} {} {} {}",
            self.kind, self.source, joiner, self.target
        )?;
        if let Some(note) = &self.annotation {
            write!(f, " : \"{note}\"")?;
        }
        Ok(())
    }
}

/// A named graph of entities and relationships.
///
/// Entities live in an ordered map keyed by id; relationships keep their
/// insertion order, which the serializer and all analyses preserve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub entities: BTreeMap<EntityId, Entity>,
    pub relationships: Vec<Relationship>,
}

/// Errors raised by the checked `add_*` constructors.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid identifier `{id}`")]
    InvalidIdentifier { id: String },
    #[error("duplicate entity id `{id}`")]
    DuplicateId { id: EntityId },
    #[error("entity `{id}` names unknown owner `{owner}`")]
    UnknownOwner { id: EntityId, owner: EntityId },
    #[error("entity `{id}` has owner `{owner}` which is {found}, not an organizational agent")]
    OwnerNotOrganization {
        id: EntityId,
        owner: EntityId,
        found: EntityKind,
    },
    #[error("organizational agent `{id}` must not carry an owner")]
    OrgWithOwner { id: EntityId },
    #[error("relationship endpoint `{id}` does not exist")]
    UnknownEndpoint { id: EntityId },
    #[error("{constraint}")]
    KindMismatch { constraint: KindConstraint },
    #[error("self-loop on `{id}`")]
    SelfLoop { id: EntityId },
    #[error("duplicate relationship `{signature}`")]
    DuplicateRelationship { signature: String },
    #[error("annotation on `{signature}`: only associations may carry one")]
    AnnotationNotAssociation { signature: String },
}

/// One violated structural rule, reported by [`Model::validate`] and
/// [`Model::warnings`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// Stable rule identifier, kebab-case.
    pub rule: &'static str,
    /// The offending entity id or relationship signature.
    pub element: String,
    pub message: String,
}

impl Violation {
    fn new(rule: &'static str, element: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            rule,
            element: element.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.rule, self.element, self.message)
    }
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model {
            name: name.into(),
            entities: BTreeMap::new(),
            relationships: Vec::new(),
        }
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    /// Returns a new model with the entity added; `self` is unchanged.
    pub fn add_entity(&self, entity: Entity) -> Result<Model, ModelError> {
        if self.entities.contains_key(entity.id.as_str()) {
            return Err(ModelError::DuplicateId { id: entity.id });
        }
        if let Some(owner) = &entity.owner {
            if entity.kind == EntityKind::OrganizationalAgent {
                return Err(ModelError::OrgWithOwner { id: entity.id });
            }
            match self.entities.get(owner.as_str()) {
                None => {
                    return Err(ModelError::UnknownOwner {
                        id: entity.id,
                        owner: owner.clone(),
                    })
                }
                Some(e) if e.kind != EntityKind::OrganizationalAgent => {
                    return Err(ModelError::OwnerNotOrganization {
                        id: entity.id,
                        owner: owner.clone(),
                        found: e.kind,
                    })
                }
                Some(_) => {}
            }
        }
        let mut next = self.clone();
        next.entities.insert(entity.id.clone(), entity);
        Ok(next)
    }

    /// Returns a new model with the relationship appended in insertion order;
    /// `self` is unchanged.
    pub fn add_relationship(&self, rel: Relationship) -> Result<Model, ModelError> {
        if rel.annotation.is_some() && rel.kind != RelKind::Association {
            return Err(ModelError::AnnotationNotAssociation {
                signature: rel.signature(),
            });
        }
        if rel.source == rel.target {
            return Err(ModelError::SelfLoop { id: rel.source });
        }
        let source =
            self.entities
                .get(rel.source.as_str())
                .ok_or_else(|| ModelError::UnknownEndpoint {
                    id: rel.source.clone(),
                })?;
        let target =
            self.entities
                .get(rel.target.as_str())
                .ok_or_else(|| ModelError::UnknownEndpoint {
                    id: rel.target.clone(),
                })?;
        rel.kind
            .permits(source.kind, target.kind)
            .map_err(|constraint| ModelError::KindMismatch { constraint })?;
        let key = rel.key();
        if self.relationships.iter().any(|r| r.key() == key) {
            return Err(ModelError::DuplicateRelationship {
                signature: rel.signature(),
            });
        }
        let mut next = self.clone();
        next.relationships.push(rel);
        Ok(next)
    }

    /// Checks every structural invariant and returns the violations, sorted
    /// by (rule, element). Empty iff the model is well-formed.
    ///
    /// Unowned entities are not a violation; they surface through
    /// [`Model::warnings`] instead.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        for entity in self.entities.values() {
            match (&entity.owner, entity.kind) {
                (Some(_), EntityKind::OrganizationalAgent) => out.push(Violation::new(
                    "org-with-owner",
                    entity.id.as_str(),
                    format!(
                        "organizational agent `{}` must not carry an owner",
                        entity.id
                    ),
                )),
                (Some(owner), _) => match self.entities.get(owner.as_str()) {
                    None => out.push(Violation::new(
                        "unknown-owner",
                        entity.id.as_str(),
                        format!("owner `{owner}` of `{}` does not exist", entity.id),
                    )),
                    Some(o) if o.kind != EntityKind::OrganizationalAgent => {
                        out.push(Violation::new(
                            "owner-not-organization",
                            entity.id.as_str(),
                            format!("owner `{owner}` of `{}` is {}", entity.id, o.kind),
                        ))
                    }
                    Some(_) => {}
                },
                (None, _) => {}
            }
        }

        let mut seen: BTreeMap<RelKey, usize> = BTreeMap::new();
        for rel in &self.relationships {
            let sig = rel.signature();
            if rel.annotation.is_some() && rel.kind != RelKind::Association {
                out.push(Violation::new(
                    "annotation-not-association",
                    sig.clone(),
                    "only associations may carry an annotation".to_string(),
                ));
            }
            if rel.source == rel.target {
                out.push(Violation::new(
                    "self-loop",
                    sig.clone(),
                    format!("`{}` relates to itself", rel.source),
                ));
            }
            let mut endpoints_ok = true;
            for id in [&rel.source, &rel.target] {
                if !self.entities.contains_key(id.as_str()) {
                    endpoints_ok = false;
                    out.push(Violation::new(
                        "unknown-endpoint",
                        sig.clone(),
                        format!("endpoint `{id}` does not exist"),
                    ));
                }
            }
            if endpoints_ok {
                let src = self.entities[rel.source.as_str()].kind;
                let tgt = self.entities[rel.target.as_str()].kind;
                if let Err(constraint) = rel.kind.permits(src, tgt) {
                    out.push(Violation::new(
                        "kind-mismatch",
                        sig.clone(),
                        constraint.to_string(),
                    ));
                }
            }
            let count = seen.entry(rel.key()).or_insert(0);
            *count += 1;
            if *count == 2 {
                out.push(Violation::new(
                    "duplicate-relationship",
                    sig,
                    "relationship occurs more than once".to_string(),
                ));
            }
        }

        out.sort();
        out
    }

    /// Advisory findings that do not make the model ill-formed: currently
    /// entities of unknown ownership (early-stage models are incomplete).
    pub fn warnings(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .entities
            .values()
            .filter(|e| e.kind != EntityKind::OrganizationalAgent && e.owner.is_none())
            .map(|e| {
                Violation::new(
                    "unowned-entity",
                    e.id.as_str(),
                    format!("{} `{}` has no owning organization", e.kind, e.id),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// The organization an entity belongs to: an organizational agent is its
    /// own organization, anything else resolves through its `owner`.
    pub fn owner_org(&self, entity_id: &str) -> Result<Option<&EntityId>, ModelError> {
        let entity = self
            .entities
            .get(entity_id)
            .ok_or_else(|| ModelError::UnknownEndpoint {
                id: EntityId(entity_id.to_string()),
            })?;
        if entity.kind == EntityKind::OrganizationalAgent {
            Ok(Some(&entity.id))
        } else {
            Ok(entity.owner.as_ref())
        }
    }

    /// Display text for an entity, falling back to the id for unknown ids.
    pub fn display_of<'a>(&'a self, id: &'a str) -> &'a str {
        self.entities.get(id).map(|e| e.display()).unwrap_or(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> EntityId {
        EntityId::new(s).unwrap()
    }

    fn base_model() -> Model {
        Model::new("m")
            .add_entity(Entity::new(id("CompanyB"), EntityKind::OrganizationalAgent))
            .unwrap()
            .add_entity(
                Entity::new(id("SupportManager"), EntityKind::HumanAgent)
                    .with_owner(id("CompanyB")),
            )
            .unwrap()
            .add_entity(
                Entity::new(id("TimelySupportResolution"), EntityKind::Responsibility)
                    .with_owner(id("CompanyB")),
            )
            .unwrap()
            .add_entity(Entity::new(id("LeasedLine"), EntityKind::PhysicalResource))
            .unwrap()
    }

    #[test]
    fn add_entity_with_owner() {
        let m = Model::new("m")
            .add_entity(Entity::new(id("CompanyB"), EntityKind::OrganizationalAgent))
            .unwrap();
        let m = m
            .add_entity(
                Entity::new(id("SupportManager"), EntityKind::HumanAgent)
                    .with_owner(id("CompanyB")),
            )
            .unwrap();
        assert_eq!(m.entities.len(), 2);
    }

    #[test]
    fn add_entity_rejects_duplicate_id() {
        let m = base_model();
        let err = m
            .add_entity(Entity::new(id("CompanyB"), EntityKind::HumanAgent))
            .unwrap_err();
        assert_eq!(err, ModelError::DuplicateId { id: id("CompanyB") });
    }

    #[test]
    fn add_entity_rejects_unknown_owner() {
        let err = Model::new("m")
            .add_entity(Entity::new(id("X"), EntityKind::HumanAgent).with_owner(id("Nowhere")))
            .unwrap_err();
        assert!(matches!(err, ModelError::UnknownOwner { .. }));
    }

    #[test]
    fn add_entity_rejects_non_org_owner() {
        let m = base_model();
        let err = m
            .add_entity(
                Entity::new(id("X"), EntityKind::HumanAgent).with_owner(id("SupportManager")),
            )
            .unwrap_err();
        assert!(matches!(err, ModelError::OwnerNotOrganization { .. }));
    }

    #[test]
    fn add_entity_rejects_org_with_owner() {
        let m = base_model();
        let err = m
            .add_entity(
                Entity::new(id("Telco"), EntityKind::OrganizationalAgent)
                    .with_owner(id("CompanyB")),
            )
            .unwrap_err();
        assert_eq!(err, ModelError::OrgWithOwner { id: id("Telco") });
    }

    #[test]
    fn add_relationship_accepts_responsible_org_to_responsibility() {
        let m = base_model();
        let m = m
            .add_relationship(Relationship::responsible(
                id("CompanyB"),
                id("TimelySupportResolution"),
            ))
            .unwrap();
        assert_eq!(m.relationships.len(), 1);
    }

    #[test]
    fn add_relationship_rejects_kind_mismatch_with_constraint() {
        let m = base_model();
        let err = m
            .add_relationship(Relationship::has(
                id("TimelySupportResolution"),
                id("SupportManager"),
            ))
            .unwrap_err();
        match err {
            ModelError::KindMismatch { constraint } => {
                assert_eq!(constraint.kind, RelKind::Has);
                assert_eq!(constraint.end, Endpoint::Target);
                assert_eq!(constraint.found, EntityKind::HumanAgent);
            }
            other => panic!("expected KindMismatch, got {other:?}"),
        }
    }

    #[test]
    fn add_relationship_rejects_self_loop() {
        let m = base_model();
        let err = m
            .add_relationship(Relationship::assoc(id("LeasedLine"), id("LeasedLine")))
            .unwrap_err();
        assert_eq!(
            err,
            ModelError::SelfLoop {
                id: id("LeasedLine")
            }
        );
    }

    #[test]
    fn add_relationship_rejects_unknown_endpoint() {
        let m = base_model();
        let err = m
            .add_relationship(Relationship::assoc(id("LeasedLine"), id("Ghost")))
            .unwrap_err();
        assert_eq!(err, ModelError::UnknownEndpoint { id: id("Ghost") });
    }

    #[test]
    fn duplicate_association_detected_in_either_orientation() {
        let m = base_model()
            .add_relationship(Relationship::assoc(id("SupportManager"), id("LeasedLine")))
            .unwrap();
        let err = m
            .add_relationship(Relationship::assoc(id("LeasedLine"), id("SupportManager")))
            .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateRelationship { .. }));
    }

    #[test]
    fn annotated_association_with_different_text_is_not_a_duplicate() {
        let m = base_model()
            .add_relationship(Relationship::assoc_annotated(
                id("SupportManager"),
                id("LeasedLine"),
                "uses",
            ))
            .unwrap();
        let m = m
            .add_relationship(Relationship::assoc_annotated(
                id("SupportManager"),
                id("LeasedLine"),
                "owns",
            ))
            .unwrap();
        assert_eq!(m.relationships.len(), 2);
    }

    #[test]
    fn annotation_rejected_outside_association() {
        let m = base_model();
        let rel = Relationship {
            kind: RelKind::Has,
            source: id("TimelySupportResolution"),
            target: id("LeasedLine"),
            annotation: Some("note".into()),
        };
        let err = m.add_relationship(rel).unwrap_err();
        assert!(matches!(err, ModelError::AnnotationNotAssociation { .. }));
    }

    #[test]
    fn add_operations_do_not_mutate_input() {
        let m = base_model();
        let before = m.clone();
        let _ = m.add_entity(Entity::new(id("Extra"), EntityKind::HumanAgent));
        let _ = m.add_relationship(Relationship::responsible(
            id("SupportManager"),
            id("TimelySupportResolution"),
        ));
        assert_eq!(m, before);
    }

    #[test]
    fn endpoint_constraint_table_is_total() {
        // 3 kinds x 5 source kinds x 5 target kinds = 75 decided cases.
        let mut accepted = 0;
        for kind in RelKind::ALL {
            for src in EntityKind::ALL {
                for tgt in EntityKind::ALL {
                    let decision = kind.permits(src, tgt);
                    let expected = match kind {
                        RelKind::ResponsibleFor => {
                            src.is_agent() && tgt == EntityKind::Responsibility
                        }
                        RelKind::Has => {
                            (src.is_agent() || src == EntityKind::Responsibility)
                                && tgt.is_resource()
                        }
                        RelKind::Association => true,
                    };
                    assert_eq!(
                        decision.is_ok(),
                        expected,
                        "{kind:?} {src:?} -> {tgt:?} decided wrongly"
                    );
                    if expected {
                        accepted += 1;
                    }
                }
            }
        }
        assert_eq!(accepted, 2 + 6 + 25);
    }

    #[test]
    fn validate_empty_on_checked_construction() {
        let m = base_model()
            .add_relationship(Relationship::responsible(
                id("SupportManager"),
                id("TimelySupportResolution"),
            ))
            .unwrap()
            .add_relationship(Relationship::has(
                id("TimelySupportResolution"),
                id("LeasedLine"),
            ))
            .unwrap();
        assert!(m.validate().is_empty());
    }

    #[test]
    fn validate_reports_hand_built_breakage_in_rule_order() {
        // Bypass the checked constructors to simulate deserialized edits.
        let mut m = base_model();
        m.relationships.push(Relationship::responsible(
            id("SupportManager"),
            id("LeasedLine"), // kind-mismatch: target not a responsibility
        ));
        m.relationships.push(Relationship::has(
            id("TimelySupportResolution"),
            id("Ghost"), // unknown endpoint
        ));
        m.entities.insert(
            id("Rogue"),
            Entity::new(id("Rogue"), EntityKind::HumanAgent).with_owner(id("SupportManager")),
        );
        let violations = m.validate();
        let rules: Vec<&str> = violations.iter().map(|v| v.rule).collect();
        assert_eq!(
            rules,
            vec![
                "kind-mismatch",
                "owner-not-organization",
                "unknown-endpoint"
            ]
        );
    }

    #[test]
    fn validate_flags_duplicates_once_per_extra_occurrence() {
        let mut m = base_model();
        let rel = Relationship::has(id("TimelySupportResolution"), id("LeasedLine"));
        m.relationships.push(rel.clone());
        m.relationships.push(rel);
        let violations = m.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].rule, "duplicate-relationship");
    }

    #[test]
    fn warnings_list_unowned_entities_only() {
        let m = base_model();
        let warnings = m.warnings();
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].rule, "unowned-entity");
        assert_eq!(warnings[0].element, "LeasedLine");
    }

    #[test]
    fn owner_org_resolution() {
        let m = base_model();
        assert_eq!(
            m.owner_org("CompanyB").unwrap(),
            Some(&id("CompanyB")),
            "organization owns itself"
        );
        assert_eq!(
            m.owner_org("SupportManager").unwrap(),
            Some(&id("CompanyB"))
        );
        assert_eq!(m.owner_org("LeasedLine").unwrap(), None);
        assert!(m.owner_org("Ghost").is_err());
    }

    #[test]
    fn owner_org_idempotent_through_organizations() {
        let m = base_model();
        for eid in m.entities.keys() {
            if let Some(org) = m.owner_org(eid.as_str()).unwrap() {
                assert_eq!(m.owner_org(org.as_str()).unwrap(), Some(org));
            }
        }
    }

    #[test]
    fn entity_id_token_rule() {
        assert!(EntityId::new("CompanyB").is_ok());
        assert!(EntityId::new("_x9").is_ok());
        assert!(EntityId::new("").is_err());
        assert!(EntityId::new("9lives").is_err());
        assert!(EntityId::new("with space").is_err());
        assert!(EntityId::new("dot.ted").is_err());
    }
}
