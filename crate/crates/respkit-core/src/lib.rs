//! Responsibility modelling for sociotechnical risk analysis of
//! coalitions-of-systems.
//!
//! The crate is organized around a small pipeline:
//!
//! 1. [`model`] — the typed graph of agents, responsibilities, resources and
//!    their relationships, with organizational ownership and validation.
//! 2. [`dsl`] — the `.rm` textual format: parser with recovering
//!    diagnostics and a canonical, byte-stable serializer.
//! 3. [`analysis`] — dependency closures, control-boundary partitions,
//!    inter-organizational relationship extraction, and model diffing.
//! 4. [`hazard`] — enumeration of risk-clause skeletons by crossing analysis
//!    targets with the seven hazard keywords under an applicability matrix.
//! 5. [`register`] — a persistent, triageable risk register (`.rmreg`) with
//!    CSV export.
//! 6. [`report`] — DOT diagrams and Markdown reports.
//!
//! All operations are pure: models, registers and reports are immutable
//! values, so everything here can be shared across threads freely.

pub mod analysis;
pub mod dsl;
pub mod fsutil;
pub mod gen;
pub mod hazard;
pub mod model;
pub mod register;
pub mod report;

pub use analysis::{
    closure_delta, control_boundary, dependency_closure, diff, inter_org_relationships,
    AnalysisError, AssocTraversal, BoundaryReport, ClosureConfig, ClosureDelta, ModelDiff,
    ScopeNote,
};
pub use dsl::{parse, serialize, ParseDiagnostic, Parsed, SerializeError, Severity, SourceSpan};
pub use hazard::{
    enumerate_clauses, enumerate_targets, keyword_glosses, ApplicabilityMatrix, HazardError,
    HazardKeyword, RiskClauseSkeleton, Scope, Target, TargetCategory,
};
pub use model::{
    Entity, EntityId, EntityKind, Model, ModelError, RelKey, RelKind, Relationship, Violation,
};
pub use register::{
    export_csv, from_rmreg, init_register, merge, to_rmreg, triage, MergeSummary, Rating, Register,
    RegisterError, RiskClause, Status,
};
pub use report::{boundary_report_md, diff_report, to_dot, to_dot_highlighted, ReportError};
