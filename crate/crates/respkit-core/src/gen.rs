//! Pseudo-random model generation for property tests and benchmarks.
//! Generated models are well-formed by construction (every insert goes
//! through the same checked operations the parser uses) and deterministic
//! for a fixed RNG seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Entity, EntityId, EntityKind, Model, RelKind, Relationship};

// Labels deliberately include the characters the DSL and exporters must
// escape: quotes, backslashes, newlines, commas, hashes, non-ASCII.
const LABEL_POOL: &[&str] = &[
    "Maintain Data Acquisition System",
    "say \"hi\"",
    "back\\slash",
    "comma, separated, values",
    "# not a comment",
    "line\nbreak",
    "Förvaltningsansvar",
    "trailing space ",
];

const ANNOTATION_POOL: &[&str] = &[
    "contract",
    "support contract",
    "depends on",
    "\"quoted\" note",
    "a, b { c }",
];

/// Generates a well-formed model with `1..=max_entities` entities and at
/// most `max_rels` relationships. Identifiers are `e0`, `e1`, ... in
/// declaration order; kinds, owners, labels, and relationship endpoints are
/// drawn from the RNG, so structure varies freely while every output still
/// satisfies the notation rules.
pub fn random_model(rng: &mut impl Rng, max_entities: usize, max_rels: usize) -> Model {
    let name = if rng.gen_bool(0.125) {
        format!("model \"{}\"\\tricky", rng.gen_range(0..1000))
    } else {
        format!("m{}", rng.gen_range(0..1000))
    };
    let mut model = Model::new(name);

    let entity_count = rng.gen_range(1..=max_entities.max(1));
    let mut orgs: Vec<EntityId> = Vec::new();
    for i in 0..entity_count {
        let id = EntityId::new(format!("e{i}")).unwrap();
        let kind = *EntityKind::ALL.choose(rng).unwrap();
        let mut entity = Entity::new(id.clone(), kind);
        if rng.gen_bool(0.5) {
            entity = entity.with_label(*LABEL_POOL.choose(rng).unwrap());
        }
        if kind != EntityKind::OrganizationalAgent && !orgs.is_empty() && rng.gen_bool(0.5) {
            entity = entity.with_owner(orgs.choose(rng).unwrap().clone());
        }
        if kind == EntityKind::OrganizationalAgent {
            orgs.push(id.clone());
        }
        model = model.add_entity(entity).unwrap();
    }

    let ids: Vec<EntityId> = model
        .entities
        .keys()
        .map(|k| EntityId::new(k.as_str()).unwrap())
        .collect();
    for _ in 0..max_rels {
        let source = ids.choose(rng).unwrap().clone();
        let target = ids.choose(rng).unwrap().clone();
        let rel = match [RelKind::ResponsibleFor, RelKind::Has, RelKind::Association]
            .choose(rng)
            .unwrap()
        {
            RelKind::ResponsibleFor => Relationship::responsible(source, target),
            RelKind::Has => Relationship::has(source, target),
            RelKind::Association => {
                if rng.gen_bool(0.5) {
                    Relationship::assoc_annotated(
                        source,
                        target,
                        *ANNOTATION_POOL.choose(rng).unwrap(),
                    )
                } else {
                    Relationship::assoc(source, target)
                }
            }
        };
        // Rejection sampling: self-loops, kind mismatches, and duplicates
        // simply don't make it into the model.
        if let Ok(next) = model.add_relationship(rel) {
            model = next;
        }
    }

    model
}
