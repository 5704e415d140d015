//! End-to-end checks over the two bundled scenario fixtures: an in-house
//! deployment and its cloud migration. Expected closures, boundaries,
//! diffs, and clause counts below were worked out by hand from the fixture
//! text and are frozen here as oracles.

use std::collections::BTreeSet;
use std::path::PathBuf;

use respkit_core::{
    closure_delta, control_boundary, dependency_closure, diff, enumerate_clauses,
    inter_org_relationships, parse, serialize, ApplicabilityMatrix, ClosureConfig, EntityId,
    HazardKeyword, Model, RelKind, RiskClauseSkeleton, Scope, Target, TargetCategory,
};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn load(name: &str) -> Model {
    let parsed = parse(&fixture(name)).expect("fixture parses");
    assert!(
        parsed.warnings.is_empty(),
        "fixture warnings: {:?}",
        parsed.warnings
    );
    parsed.model
}

fn names(set: &BTreeSet<EntityId>) -> Vec<&str> {
    set.iter().map(|id| id.as_str()).collect()
}

#[test]
fn as_is_parses_with_expected_shape() {
    let m = load("cos-asis.rm");
    assert_eq!(m.name, "cos-asis");
    assert_eq!(m.entities.len(), 18);
    assert_eq!(m.relationships.len(), 18);
    assert_eq!(m.validate(), vec![]);
}

#[test]
fn to_be_parses_with_expected_shape() {
    let m = load("cos-tobe.rm");
    assert_eq!(m.name, "cos-tobe");
    assert_eq!(m.entities.len(), 22);
    assert_eq!(m.relationships.len(), 22);
    assert_eq!(m.validate(), vec![]);
}

#[test]
fn fixtures_round_trip_canonically() {
    for name in ["cos-asis.rm", "cos-tobe.rm"] {
        let m = load(name);
        let canonical = serialize(&m).unwrap();
        let reparsed = parse(&canonical).unwrap().model;
        assert_eq!(reparsed, m, "{name}: parse(serialize(m)) == m");
        assert_eq!(
            serialize(&reparsed).unwrap(),
            canonical,
            "{name}: canonical fixpoint"
        );
    }
}

#[test]
fn support_manager_closure_before_and_after() {
    let cfg = ClosureConfig::default();
    let asis = dependency_closure(&load("cos-asis.rm"), "SupportManager", &cfg).unwrap();
    assert_eq!(
        names(&asis),
        [
            "ApplicationServer",
            "DatabaseServer",
            "LeasedLine",
            "TimelySupportResolution"
        ]
    );
    let tobe = dependency_closure(&load("cos-tobe.rm"), "SupportManager", &cfg).unwrap();
    assert_eq!(
        names(&tobe),
        [
            "EC2Docs",
            "EC2Infrastructure",
            "EC2Support",
            "TimelySupportResolution"
        ]
    );
}

#[test]
fn migration_shifts_the_support_manager_closure() {
    let delta = closure_delta(
        &load("cos-asis.rm"),
        &load("cos-tobe.rm"),
        "SupportManager",
        &ClosureConfig::default(),
    )
    .unwrap();
    assert_eq!(
        names(&delta.gained),
        ["EC2Docs", "EC2Infrastructure", "EC2Support"]
    );
    assert_eq!(
        names(&delta.lost),
        ["ApplicationServer", "DatabaseServer", "LeasedLine"]
    );
}

#[test]
fn to_be_boundary_puts_amazon_resources_out_of_control() {
    let report = control_boundary(
        &load("cos-tobe.rm"),
        "SupportManager",
        &ClosureConfig::default(),
    )
    .unwrap();
    assert_eq!(names(&report.in_control), ["TimelySupportResolution"]);
    let out: Vec<(&str, &str)> = report
        .out_of_control
        .iter()
        .map(|(e, o)| (e.as_str(), o.as_str()))
        .collect();
    assert_eq!(
        out,
        [
            ("EC2Docs", "Amazon"),
            ("EC2Infrastructure", "Amazon"),
            ("EC2Support", "Amazon")
        ]
    );
    assert!(report.unknown.is_empty());
}

#[test]
fn to_be_crosses_organizations_eleven_times() {
    let m = load("cos-tobe.rm");
    let inter = inter_org_relationships(&m);
    assert_eq!(inter.len(), 11);
    assert_eq!(
        inter[0].signature(),
        "has:TimelySupportResolution->EC2Infrastructure"
    );
    assert_eq!(
        inter.last().unwrap().signature(),
        "assoc:Amazon--CompanyB:EC2 service agreement"
    );
    assert_eq!(
        inter
            .iter()
            .filter(|r| r.kind == RelKind::Association)
            .count(),
        4
    );
    assert_eq!(inter.iter().filter(|r| r.kind == RelKind::Has).count(), 7);
}

#[test]
fn inter_org_enumeration_yields_182_clauses() {
    let m = load("cos-tobe.rm");
    let clauses = enumerate_clauses(&m, Scope::InterOrg, &ApplicabilityMatrix::default()).unwrap();
    // 15 entities touch an inter-organizational relationship, plus the 11
    // crossing relationships themselves: 26 targets x 7 keywords.
    assert_eq!(clauses.len(), 182);
    for clause in &clauses {
        assert_eq!(clause.scope_note.as_str(), "inter-organizational");
    }
    let ids: BTreeSet<&str> = clauses.iter().map(|c| c.clause_id.as_str()).collect();
    for expected in [
        "riskclause:cos-tobe:EC2Docs:insufficient",
        "riskclause:cos-tobe:ProvisionVMInstances:late",
        "riskclause:cos-tobe:ProvisionVMInstances:never",
        "riskclause:cos-tobe:EC2PricingModel:changes",
        "riskclause:cos-tobe:EC2ServiceOffering:changes",
        "riskclause:cos-tobe:assoc:CompanyB--CompanyC:support contract:changes",
        "riskclause:cos-tobe:ISPConnectivity:impaired",
    ] {
        assert!(ids.contains(expected), "missing {expected}");
    }
}

#[test]
fn full_enumeration_covers_every_element() {
    let m = load("cos-tobe.rm");
    let clauses = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
    assert_eq!(clauses.len(), (22 + 22) * 7);
}

fn category_of(m: &Model, c: &RiskClauseSkeleton) -> TargetCategory {
    match &c.target {
        Target::Entity(id) => TargetCategory::Entity(m.entities[id.as_str()].kind),
        Target::Relationship(key) => TargetCategory::Relationship(key.kind),
    }
}

#[test]
fn example_matrix_restricts_enumeration() {
    let matrix = ApplicabilityMatrix::from_toml_str(&fixture("example-matrix.toml")).unwrap();
    let m = load("cos-tobe.rm");
    let all = enumerate_clauses(&m, Scope::All, &ApplicabilityMatrix::default()).unwrap();
    let restricted = enumerate_clauses(&m, Scope::All, &matrix).unwrap();
    assert!(restricted.len() < all.len());
    assert!(restricted
        .iter()
        .all(|c| matrix.applicable(category_of(&m, c)).contains(&c.keyword)));
    // `responsible = []` suppresses assignment edges entirely.
    assert!(!restricted
        .iter()
        .any(|c| c.clause_id.contains(":responsible:")));
    // Organizations keep only Changes.
    assert!(restricted
        .iter()
        .filter(|c| c.clause_id.contains(":Amazon:") || c.clause_id.ends_with(":CompanyB:changes"))
        .all(|c| c.keyword == HazardKeyword::Changes));
}

#[test]
fn readme_language_example_parses_cleanly() {
    let readme =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md"))
            .unwrap();
    let start = readme
        .find("# Anything after # is a comment.")
        .expect("example present");
    let end = readme[start..].find("```").expect("fenced block closes") + start;
    let snippet = &readme[start..end];
    let parsed = parse(snippet).expect("README example parses");
    assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    assert_eq!(parsed.model.name, "expedition");
    assert_eq!(parsed.model.entities.len(), 7);
    assert_eq!(parsed.model.relationships.len(), 5);
}

#[test]
fn migration_diff_matches_the_story() {
    let d = diff(&load("cos-asis.rm"), &load("cos-tobe.rm"));
    let added: Vec<&str> = d.added_entities.iter().map(|e| e.id.as_str()).collect();
    let removed: Vec<&str> = d.removed_entities.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(
        added,
        [
            "Amazon",
            "CustomerISP",
            "EC2Docs",
            "EC2Infrastructure",
            "EC2PricingModel",
            "EC2ServiceOffering",
            "EC2Support",
            "ISPConnectivity",
            "MaintainBillingModel",
            "ProvideConnectivity",
            "ProvisionVMInstances",
        ]
    );
    assert_eq!(
        removed,
        [
            "ApplicationServer",
            "DatabaseServer",
            "LeasedLine",
            "MaintainPricingModel",
            "SupportLeasedLine",
            "TapeDrive",
            "Telco",
        ]
    );
    assert_eq!(d.changed_entities.len(), 1);
    let (before, after) = &d.changed_entities[0];
    assert_eq!(before.id.as_str(), "MaintainSystem");
    assert_eq!(before.label, "Maintain Data Acquisition System");
    assert_eq!(after.label, "Deploy and Maintain Data Acquisition System");
}
