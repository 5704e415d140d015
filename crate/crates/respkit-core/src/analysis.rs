//! Structural analyses over responsibility models: dependency closure,
//! control-boundary partition, inter-organizational relationship extraction,
//! and as-is/to-be diffing.
//!
//! The closure is the machine form of "ultimately dependent upon": the set
//! of entities reachable from a root by following `responsible` edges from
//! agent to responsibility, `has` edges from holder to resource, and
//! associations (symmetric by default, matching their undirected drawing).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::model::{Entity, EntityId, EntityKind, Model, RelKey, RelKind, Relationship};

/// How association edges participate in closure traversal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AssocTraversal {
    /// Associations are ignored.
    None,
    /// Associations are followed source→target only.
    Forward,
    /// Associations are followed in both directions (the default; matches
    /// the undirected notation).
    #[default]
    Both,
}

/// Edge-kind selection for [`dependency_closure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    pub follow_has: bool,
    pub follow_responsible: bool,
    pub follow_assoc: AssocTraversal,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            follow_has: true,
            follow_responsible: true,
            follow_assoc: AssocTraversal::Both,
        }
    }
}

impl ClosureConfig {
    /// True when no edge kind is followed at all — such a config is refused
    /// rather than silently producing empty closures.
    pub fn follows_nothing(&self) -> bool {
        !self.follow_has && !self.follow_responsible && self.follow_assoc == AssocTraversal::None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("entity `{id}` does not exist in model `{model}`")]
    UnknownEntity { id: String, model: String },
    #[error("entity `{id}` is {found}, not a human or organizational agent")]
    NotAnAgent { id: EntityId, found: EntityKind },
    #[error("closure configuration follows no relationship kind")]
    NoTraversal,
}

/// Whether an element crosses an organizational boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScopeNote {
    InterOrganizational,
    IntraOrganizational,
    OwnershipUnknown,
}

impl ScopeNote {
    pub fn as_str(self) -> &'static str {
        match self {
            ScopeNote::InterOrganizational => "inter-organizational",
            ScopeNote::IntraOrganizational => "intra-organizational",
            ScopeNote::OwnershipUnknown => "ownership-unknown",
        }
    }
}

impl fmt::Display for ScopeNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScopeNote {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inter-organizational" => Ok(ScopeNote::InterOrganizational),
            "intra-organizational" => Ok(ScopeNote::IntraOrganizational),
            "ownership-unknown" => Ok(ScopeNote::OwnershipUnknown),
            other => Err(format!("unknown scope note `{other}`")),
        }
    }
}

/// Partition of an agent's dependency closure by control.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub agent: EntityId,
    /// Closure members owned by the agent's own organization.
    pub in_control: BTreeSet<EntityId>,
    /// Closure members owned by some other organization, with that owner.
    pub out_of_control: BTreeSet<(EntityId, EntityId)>,
    /// Closure members whose ownership is unknown.
    pub unknown: BTreeSet<EntityId>,
}

/// Differences between two models, matched by entity id and by relationship
/// canonical key (associations compare symmetrically).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelDiff {
    pub added_entities: Vec<Entity>,
    pub removed_entities: Vec<Entity>,
    /// Pairs (before, after) sharing an id but differing in kind, label or
    /// owner.
    pub changed_entities: Vec<(Entity, Entity)>,
    pub added_relationships: Vec<Relationship>,
    pub removed_relationships: Vec<Relationship>,
}

impl ModelDiff {
    pub fn is_empty(&self) -> bool {
        self.added_entities.is_empty()
            && self.removed_entities.is_empty()
            && self.changed_entities.is_empty()
            && self.added_relationships.is_empty()
            && self.removed_relationships.is_empty()
    }
}

/// Dependency shift for one root across an as-is/to-be pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureDelta {
    /// In the `after` closure but not the `before` closure.
    pub gained: BTreeSet<EntityId>,
    /// In the `before` closure but not the `after` closure.
    pub lost: BTreeSet<EntityId>,
}

/// Entities reachable from `root` (excluding `root` itself, even through
/// cycles), following edges per `cfg`. Computed as a breadth-first fixpoint,
/// so cycles are permitted.
pub fn dependency_closure(
    model: &Model,
    root: &str,
    cfg: &ClosureConfig,
) -> Result<BTreeSet<EntityId>, AnalysisError> {
    if cfg.follows_nothing() {
        return Err(AnalysisError::NoTraversal);
    }
    let root = model
        .entities
        .get(root)
        .ok_or_else(|| AnalysisError::UnknownEntity {
            id: root.to_string(),
            model: model.name.clone(),
        })?;

    let mut successors: BTreeMap<&EntityId, Vec<&EntityId>> = BTreeMap::new();
    for rel in &model.relationships {
        let forward = match rel.kind {
            RelKind::ResponsibleFor => cfg.follow_responsible,
            RelKind::Has => cfg.follow_has,
            RelKind::Association => cfg.follow_assoc != AssocTraversal::None,
        };
        if forward {
            successors.entry(&rel.source).or_default().push(&rel.target);
        }
        if rel.kind == RelKind::Association && cfg.follow_assoc == AssocTraversal::Both {
            successors.entry(&rel.target).or_default().push(&rel.source);
        }
    }

    let mut visited: BTreeSet<&EntityId> = BTreeSet::new();
    let mut queue: VecDeque<&EntityId> = VecDeque::new();
    queue.push_back(&root.id);
    while let Some(current) = queue.pop_front() {
        for next in successors.get(current).into_iter().flatten() {
            if visited.insert(next) {
                queue.push_back(next);
            }
        }
    }
    visited.remove(&root.id);
    Ok(visited.into_iter().cloned().collect())
}

/// Partitions an agent's dependency closure into in-control, out-of-control
/// (with the owning organization) and ownership-unknown buckets.
pub fn control_boundary(
    model: &Model,
    agent: &str,
    cfg: &ClosureConfig,
) -> Result<BoundaryReport, AnalysisError> {
    let agent_entity = model
        .entities
        .get(agent)
        .ok_or_else(|| AnalysisError::UnknownEntity {
            id: agent.to_string(),
            model: model.name.clone(),
        })?;
    if !agent_entity.kind.is_agent() {
        return Err(AnalysisError::NotAnAgent {
            id: agent_entity.id.clone(),
            found: agent_entity.kind,
        });
    }

    let agent_org = org_of(model, agent).cloned();
    let mut report = BoundaryReport {
        agent: agent_entity.id.clone(),
        in_control: BTreeSet::new(),
        out_of_control: BTreeSet::new(),
        unknown: BTreeSet::new(),
    };
    for member in dependency_closure(model, agent, cfg)? {
        match (org_of(model, member.as_str()), &agent_org) {
            (None, _) => {
                report.unknown.insert(member);
            }
            (Some(org), Some(own)) if org == own => {
                report.in_control.insert(member);
            }
            (Some(org), _) => {
                let org = org.clone();
                report.out_of_control.insert((member, org));
            }
        }
    }
    Ok(report)
}

/// Relationships crossing an organizational boundary: both endpoint
/// organizations known and different, or exactly one unknown (kept so that
/// incomplete ownership cannot hide a dependency). Order follows model
/// insertion order.
pub fn inter_org_relationships(model: &Model) -> Vec<Relationship> {
    model
        .relationships
        .iter()
        .filter(|rel| {
            matches!(
                endpoint_orgs(model, rel),
                (Some(a), Some(b)) if a != b
            ) || matches!(endpoint_orgs(model, rel), (None, Some(_)) | (Some(_), None))
        })
        .cloned()
        .collect()
}

/// Boundary classification of one relationship.
pub fn relationship_scope(model: &Model, rel: &Relationship) -> ScopeNote {
    match endpoint_orgs(model, rel) {
        (Some(a), Some(b)) if a != b => ScopeNote::InterOrganizational,
        (Some(_), Some(_)) => ScopeNote::IntraOrganizational,
        _ => ScopeNote::OwnershipUnknown,
    }
}

fn endpoint_orgs<'m>(
    model: &'m Model,
    rel: &Relationship,
) -> (Option<&'m EntityId>, Option<&'m EntityId>) {
    (
        org_of(model, rel.source.as_str()),
        org_of(model, rel.target.as_str()),
    )
}

fn org_of<'m>(model: &'m Model, id: &str) -> Option<&'m EntityId> {
    model.owner_org(id).ok().flatten()
}

/// Structural difference between two models. Entities match by id;
/// relationships by canonical key. Renames therefore appear as
/// remove+add — the match key is the id, never the label.
pub fn diff(before: &Model, after: &Model) -> ModelDiff {
    let mut out = ModelDiff::default();

    for (bid, bentity) in &before.entities {
        match after.entities.get(bid.as_str()) {
            None => out.removed_entities.push(bentity.clone()),
            Some(aentity) if aentity != bentity => {
                out.changed_entities
                    .push((bentity.clone(), aentity.clone()));
            }
            Some(_) => {}
        }
    }
    for (aid, aentity) in &after.entities {
        if !before.entities.contains_key(aid.as_str()) {
            out.added_entities.push(aentity.clone());
        }
    }

    let before_keys: BTreeSet<RelKey> = before.relationships.iter().map(|r| r.key()).collect();
    let after_keys: BTreeSet<RelKey> = after.relationships.iter().map(|r| r.key()).collect();
    out.removed_relationships = before
        .relationships
        .iter()
        .filter(|r| !after_keys.contains(&r.key()))
        .cloned()
        .collect();
    out.added_relationships = after
        .relationships
        .iter()
        .filter(|r| !before_keys.contains(&r.key()))
        .cloned()
        .collect();
    out.added_relationships.sort_by_key(Relationship::key);
    out.removed_relationships.sort_by_key(Relationship::key);
    // Entity vectors are already id-sorted: they come from ordered maps.
    out
}

/// Closure difference for one root across two models: what the root comes
/// to depend on (`gained`) and what it stops depending on (`lost`).
pub fn closure_delta(
    before: &Model,
    after: &Model,
    root: &str,
    cfg: &ClosureConfig,
) -> Result<ClosureDelta, AnalysisError> {
    let before_closure = dependency_closure(before, root, cfg)?;
    let after_closure = dependency_closure(after, root, cfg)?;
    Ok(ClosureDelta {
        gained: after_closure.difference(&before_closure).cloned().collect(),
        lost: before_closure.difference(&after_closure).cloned().collect(),
    })
}
