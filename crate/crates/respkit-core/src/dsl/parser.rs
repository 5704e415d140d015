//! Recovering parser for the `.rm` format.
//!
//! Parsing is two-pass: entity statements are collected and resolved first
//! (so owners and relationship endpoints may be declared in any order), then
//! relationship statements are applied in file order with `group` shorthand
//! expanded as a cross product. Every statement is parsed independently, so
//! one malformed line never hides errors on later lines.

use std::collections::BTreeMap;

use super::lexer::{lex_line, Token, TokenKind};
use super::{ParseDiagnostic, Parsed, Severity, SourceSpan};
use crate::model::{
    Endpoint, Entity, EntityId, EntityKind, Model, ModelError, RelKind, Relationship,
};

/// Parses a `.rm` document into a validated [`Model`].
///
/// On success the returned [`Parsed`] carries the model plus
/// warning-severity diagnostics (rule `unowned-entity`). Any error-severity
/// diagnostic means no model: the full diagnostic list is returned instead,
/// sorted by source position.
pub fn parse(source: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let mut diags: Vec<ParseDiagnostic> = Vec::new();

    let mut lines: Vec<(usize, Vec<Token>)> = Vec::new();
    for (idx, raw) in source.split('\n').enumerate() {
        let line_no = idx + 1;
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        let (tokens, lex_diags) = lex_line(line_no, text);
        diags.extend(lex_diags);
        lines.push((line_no, tokens));
    }
    let last_line = lines.len().max(1);

    // Locate the header and the closing brace; everything between is the body.
    let mut iter = lines.into_iter().filter(|(_, tokens)| !tokens.is_empty());
    let mut body: Vec<(usize, Vec<Token>)> = Vec::new();
    let mut name = String::new();
    let mut closed = false;

    match iter.next() {
        None => {
            diags.push(error(
                SourceSpan::new(1, 1, 1),
                "expected-model-header",
                "document contains no `model \"<name>\" {` header".to_string(),
            ));
        }
        Some((line_no, tokens)) => match parse_header(line_no, &tokens) {
            Ok((header_name, closed_inline)) => {
                name = header_name;
                closed = closed_inline;
            }
            Err(diag) => diags.push(diag),
        },
    }

    for (line_no, tokens) in iter {
        if closed {
            diags.push(error(
                SourceSpan::new(line_no, tokens[0].column, tokens[0].length),
                "content-after-close",
                "content after the closing `}` of the model".to_string(),
            ));
        } else if tokens.len() == 1 && tokens[0].kind == TokenKind::RBrace {
            closed = true;
        } else {
            body.push((line_no, tokens));
        }
    }
    if !closed && diags.iter().all(|d| d.rule != "expected-model-header") {
        diags.push(error(
            SourceSpan::new(last_line, 1, 1),
            "unclosed-model",
            "model block is missing its closing `}`".to_string(),
        ));
    }

    // Classify and parse statements.
    let mut entity_decls: Vec<EntityDecl> = Vec::new();
    let mut rel_decls: Vec<RelDecl> = Vec::new();
    for (line_no, tokens) in &body {
        let mut cursor = Cursor::new(*line_no, tokens);
        let keyword = match cursor.peek_word() {
            Some(word) => word.to_string(),
            None => {
                diags.push(error(
                    cursor.here(),
                    "malformed-statement",
                    format!(
                        "expected a statement keyword, found {}",
                        cursor.describe_next()
                    ),
                ));
                continue;
            }
        };
        let result = match keyword.as_str() {
            "org" | "human" | "responsibility" | "resource.info" | "resource.phys" => {
                parse_entity_statement(&mut cursor).map(|decl| entity_decls.push(decl))
            }
            "responsible" | "has" | "assoc" => parse_rel_statement(&mut cursor, false)
                .map(|mut decls| rel_decls.append(&mut decls)),
            "group" => {
                cursor.advance();
                let inner = match cursor.peek_word() {
                    Some("responsible") | Some("has") | Some("assoc") => {
                        parse_rel_statement(&mut cursor, true)
                    }
                    _ => Err(error(
                        cursor.here(),
                        "malformed-statement",
                        format!(
                            "expected `responsible`, `has` or `assoc` after `group`, found {}",
                            cursor.describe_next()
                        ),
                    )),
                };
                inner.map(|mut decls| rel_decls.append(&mut decls))
            }
            other => Err(error(
                SourceSpan::new(*line_no, tokens[0].column, tokens[0].length),
                "unknown-keyword",
                format!("unknown statement keyword `{other}`"),
            )),
        };
        if let Err(diag) = result {
            diags.push(diag);
        }
    }

    // Entity pass: insert in declaration order, then resolve owners so that
    // forward references work.
    let mut model = Model::new(name);
    let mut decl_spans: BTreeMap<EntityId, SourceSpan> = BTreeMap::new();
    let mut inserted: Vec<&EntityDecl> = Vec::new();
    for decl in &entity_decls {
        if model.entities.contains_key(decl.id.as_str()) {
            diags.push(error(
                decl.id_span,
                "duplicate-id",
                format!("entity id `{}` is already declared", decl.id),
            ));
            continue;
        }
        decl_spans.insert(decl.id.clone(), decl.id_span);
        model.entities.insert(
            decl.id.clone(),
            Entity {
                id: decl.id.clone(),
                kind: decl.kind,
                label: decl.label.clone(),
                owner: None,
            },
        );
        inserted.push(decl);
    }
    for decl in inserted {
        let Some((owner, owner_span)) = &decl.owner else {
            continue;
        };
        if decl.kind == EntityKind::OrganizationalAgent {
            diags.push(error(
                *owner_span,
                "org-with-owner",
                format!("organizational agent `{}` must not carry an owner", decl.id),
            ));
            continue;
        }
        match model.entities.get(owner.as_str()).map(|e| e.kind) {
            None => diags.push(error(
                *owner_span,
                "unknown-owner",
                format!("owner `{owner}` is not declared in this model"),
            )),
            Some(kind) if kind != EntityKind::OrganizationalAgent => diags.push(error(
                *owner_span,
                "owner-not-organization",
                format!("owner `{owner}` is {kind}, not an organizational agent"),
            )),
            Some(_) => {
                model
                    .entities
                    .get_mut(decl.id.as_str())
                    .expect("entity was just inserted")
                    .owner = Some(owner.clone());
            }
        }
    }

    // Relationship pass, in file order.
    for decl in &rel_decls {
        let rel = Relationship {
            kind: decl.kind,
            source: decl.source.0.clone(),
            target: decl.target.0.clone(),
            annotation: decl.annotation.clone(),
        };
        match model.add_relationship(rel) {
            Ok(next) => model = next,
            Err(e) => diags.push(model_error_diag(e, decl)),
        }
    }

    diags.sort_by_key(|d| (d.span.line, d.span.column));
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(diags);
    }
    debug_assert!(model.validate().is_empty());

    let warnings = model
        .warnings()
        .into_iter()
        .map(|v| ParseDiagnostic {
            severity: Severity::Warning,
            span: decl_spans
                .get(v.element.as_str())
                .copied()
                .unwrap_or(SourceSpan::new(1, 1, 1)),
            rule: "unowned-entity",
            message: v.message,
        })
        .collect();
    Ok(Parsed { model, warnings })
}

struct EntityDecl {
    id: EntityId,
    id_span: SourceSpan,
    kind: EntityKind,
    label: String,
    owner: Option<(EntityId, SourceSpan)>,
}

struct RelDecl {
    kind: RelKind,
    keyword_span: SourceSpan,
    source: (EntityId, SourceSpan),
    target: (EntityId, SourceSpan),
    annotation: Option<String>,
}

fn error(span: SourceSpan, rule: &'static str, message: String) -> ParseDiagnostic {
    ParseDiagnostic {
        severity: Severity::Error,
        span,
        rule,
        message,
    }
}

fn parse_header(line_no: usize, tokens: &[Token]) -> Result<(String, bool), ParseDiagnostic> {
    let mut cursor = Cursor::new(line_no, tokens);
    let header_error = |cursor: &Cursor| {
        error(
            SourceSpan::new(line_no, tokens[0].column, tokens[0].length),
            "expected-model-header",
            format!(
                "expected `model \"<name>\" {{`, found {}",
                cursor.describe_next()
            ),
        )
    };
    if cursor.peek_word() != Some("model") {
        return Err(header_error(&cursor));
    }
    cursor.advance();
    let name = match cursor.peek() {
        Some(Token {
            kind: TokenKind::Str(s),
            ..
        }) => s.clone(),
        _ => return Err(header_error(&cursor)),
    };
    cursor.advance();
    if !matches!(cursor.peek().map(|t| &t.kind), Some(TokenKind::LBrace)) {
        return Err(header_error(&cursor));
    }
    cursor.advance();
    // `model "m" { }` on one line is the canonical empty document.
    let closed_inline = matches!(cursor.peek().map(|t| &t.kind), Some(TokenKind::RBrace));
    if closed_inline {
        cursor.advance();
    }
    cursor.expect_end()?;
    Ok((name, closed_inline))
}

fn parse_entity_statement(cursor: &mut Cursor) -> Result<EntityDecl, ParseDiagnostic> {
    let keyword = cursor.peek_word().expect("caller checked the keyword");
    let kind = match keyword {
        "org" => EntityKind::OrganizationalAgent,
        "human" => EntityKind::HumanAgent,
        "responsibility" => EntityKind::Responsibility,
        "resource.info" => EntityKind::InformationResource,
        "resource.phys" => EntityKind::PhysicalResource,
        other => unreachable!("not an entity keyword: {other}"),
    };
    cursor.advance();
    let (id, id_span) = cursor.expect_ident("entity id")?;
    let label = match cursor.peek() {
        Some(Token {
            kind: TokenKind::Str(s),
            ..
        }) => {
            let label = s.clone();
            cursor.advance();
            label
        }
        _ => String::new(),
    };
    let owner = if cursor.peek_word() == Some("owner") {
        cursor.advance();
        Some(cursor.expect_ident("owner organization id")?)
    } else {
        None
    };
    cursor.expect_end()?;
    Ok(EntityDecl {
        id,
        id_span,
        kind,
        label,
        owner,
    })
}

/// Parses `responsible|has|assoc` statements. With `grouped` set, either or
/// both sides may be a `{ id, id, ... }` list (at least one side must be),
/// and the statement expands to the cross product of the two sides.
fn parse_rel_statement(
    cursor: &mut Cursor,
    grouped: bool,
) -> Result<Vec<RelDecl>, ParseDiagnostic> {
    let keyword_span = cursor.here();
    let (kind, joiner) = match cursor.peek_word() {
        Some("responsible") => (RelKind::ResponsibleFor, TokenKind::Arrow),
        Some("has") => (RelKind::Has, TokenKind::Arrow),
        Some("assoc") => (RelKind::Association, TokenKind::DashDash),
        other => unreachable!("not a relationship keyword: {other:?}"),
    };
    cursor.advance();

    let sources = parse_side(cursor, grouped)?;
    match cursor.peek() {
        Some(token) if token.kind == joiner => cursor.advance(),
        _ => {
            let expected = if kind == RelKind::Association {
                "`--`"
            } else {
                "`->`"
            };
            return Err(error(
                cursor.here(),
                "malformed-statement",
                format!("expected {expected}, found {}", cursor.describe_next()),
            ));
        }
    }
    let targets = parse_side(cursor, grouped)?;

    let annotation = if matches!(cursor.peek().map(|t| &t.kind), Some(TokenKind::Colon)) {
        if kind != RelKind::Association {
            return Err(error(
                cursor.here(),
                "annotation-not-association",
                "only `assoc` relationships may carry an annotation".to_string(),
            ));
        }
        cursor.advance();
        match cursor.peek() {
            Some(Token {
                kind: TokenKind::Str(s),
                ..
            }) => {
                let note = s.clone();
                cursor.advance();
                Some(note)
            }
            _ => {
                return Err(error(
                    cursor.here(),
                    "malformed-statement",
                    format!(
                        "expected a quoted annotation after `:`, found {}",
                        cursor.describe_next()
                    ),
                ))
            }
        }
    } else {
        None
    };
    cursor.expect_end()?;

    if grouped && sources.braced == Braced::No && targets.braced == Braced::No {
        return Err(error(
            keyword_span,
            "group-without-braces",
            "`group` needs a `{ ... }` list on at least one side".to_string(),
        ));
    }

    let mut decls = Vec::new();
    for source in &sources.ids {
        for target in &targets.ids {
            decls.push(RelDecl {
                kind,
                keyword_span,
                source: source.clone(),
                target: target.clone(),
                annotation: annotation.clone(),
            });
        }
    }
    Ok(decls)
}

#[derive(PartialEq)]
enum Braced {
    Yes,
    No,
}

struct Side {
    ids: Vec<(EntityId, SourceSpan)>,
    braced: Braced,
}

fn parse_side(cursor: &mut Cursor, grouped: bool) -> Result<Side, ParseDiagnostic> {
    if grouped && matches!(cursor.peek().map(|t| &t.kind), Some(TokenKind::LBrace)) {
        let open_span = cursor.here();
        cursor.advance();
        let mut ids = Vec::new();
        loop {
            match cursor.peek().map(|t| &t.kind) {
                Some(TokenKind::RBrace) => {
                    cursor.advance();
                    break;
                }
                Some(TokenKind::Comma) => {
                    cursor.advance();
                }
                Some(_) => ids.push(cursor.expect_ident("entity id")?),
                None => {
                    return Err(error(
                        cursor.here(),
                        "malformed-statement",
                        "brace list is missing its closing `}`".to_string(),
                    ))
                }
            }
        }
        if ids.is_empty() {
            return Err(error(
                open_span,
                "empty-group",
                "brace list must contain at least one entity id".to_string(),
            ));
        }
        Ok(Side {
            ids,
            braced: Braced::Yes,
        })
    } else {
        let id = cursor.expect_ident("entity id")?;
        Ok(Side {
            ids: vec![id],
            braced: Braced::No,
        })
    }
}

fn model_error_diag(err: ModelError, decl: &RelDecl) -> ParseDiagnostic {
    let (span, rule, message) = match &err {
        ModelError::UnknownEndpoint { id } => {
            let span = if *id == decl.source.0 {
                decl.source.1
            } else {
                decl.target.1
            };
            (
                span,
                "unknown-endpoint",
                format!("entity `{id}` is not declared in this model"),
            )
        }
        ModelError::SelfLoop { .. } => (decl.target.1, "self-loop", err.to_string()),
        ModelError::KindMismatch { constraint } => {
            let span = match constraint.end {
                Endpoint::Source => decl.source.1,
                Endpoint::Target => decl.target.1,
            };
            (span, "kind-mismatch", err.to_string())
        }
        ModelError::DuplicateRelationship { .. } => {
            (decl.keyword_span, "duplicate-relationship", err.to_string())
        }
        // The grammar prevents the remaining variants from reaching
        // add_relationship; keep a defensive fallback.
        _ => (decl.keyword_span, "malformed-statement", err.to_string()),
    };
    error(span, rule, message)
}

/// Token cursor over one statement line.
struct Cursor<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, tokens: &'a [Token]) -> Self {
        Cursor {
            line,
            tokens,
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_word(&self) -> Option<&'a str> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Word(w),
                ..
            }) => Some(w.as_str()),
            _ => None,
        }
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    /// Span of the next token, or a 1-character span just past the last one.
    fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(token) => token.span(self.line),
            None => {
                let column = self.tokens.last().map(|t| t.column + t.length).unwrap_or(1);
                SourceSpan::new(self.line, column, 1)
            }
        }
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            Some(token) => token.kind.describe(),
            None => "end of line".to_string(),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(EntityId, SourceSpan), ParseDiagnostic> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Word(w),
                ..
            }) => {
                let span = self.here();
                match EntityId::new(w.clone()) {
                    Ok(id) => {
                        self.advance();
                        Ok((id, span))
                    }
                    Err(_) => Err(error(
                        span,
                        "invalid-identifier",
                        format!("`{w}` is not a valid identifier ([A-Za-z_][A-Za-z0-9_]*)"),
                    )),
                }
            }
            _ => Err(error(
                self.here(),
                "malformed-statement",
                format!("expected {what}, found {}", self.describe_next()),
            )),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseDiagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(error(
                self.here(),
                "unexpected-trailing-tokens",
                format!("unexpected {} after the statement", self.describe_next()),
            )),
        }
    }
}
