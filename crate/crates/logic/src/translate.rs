//! Sentence-to-expression translation boundary.
//!
//! A [`TranslatorClient`] turns one sentence into one functional-form expression
//! plus a glossary mapping atoms to the phrases they stand for. A
//! [`TranslationSession`] keeps atom names consistent across the sentences of one
//! document: a phrase seen before keeps its earlier atom, and a reused atom name
//! with a new meaning gets a fresh name.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_expression, LogicalExpr};

pub const API_KEY_ENV: &str = "SATRL_TRANSLATOR_API_KEY";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
pub const DEFAULT_INSTRUCTION_TEMPLATE: &str = "functional-prefix-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationRequest {
    pub sentence: String,
    pub session_id: String,
    pub instruction_template: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TranslationResponse {
    pub expression: String,
    /// `(atom, phrase)` pairs.
    pub glossary: Vec<(String, String)>,
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("translator unavailable: {0}")]
    TranslatorUnavailable(String),
    #[error("malformed translation ({reason}); raw reply: {raw:?}")]
    MalformedTranslation { raw: String, reason: String },
}

pub trait TranslatorClient: Send + Sync {
    fn translate(&self, request: &TranslationRequest) -> Result<TranslationResponse, TranslateError>;
}

impl<T: TranslatorClient + ?Sized> TranslatorClient for &T {
    fn translate(&self, request: &TranslationRequest) -> Result<TranslationResponse, TranslateError> {
        (**self).translate(request)
    }
}

impl<T: TranslatorClient + ?Sized> TranslatorClient for Box<T> {
    fn translate(&self, request: &TranslationRequest) -> Result<TranslationResponse, TranslateError> {
        (**self).translate(request)
    }
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture file: {0}")]
    Io(#[from] std::io::Error),
    #[error("fixture line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Offline translator answering from a fixture table.
///
/// Fixture lines are `sentence TAB expression TAB atom=phrase;atom=phrase`; the
/// glossary column may be omitted. Blank lines and lines starting with `#` are skipped.
#[derive(Debug, Clone, Default)]
pub struct StubTranslator {
    table: HashMap<String, TranslationResponse>,
}

impl StubTranslator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sentence: &str, expression: &str, glossary: &[(&str, &str)]) {
        self.table.insert(
            sentence.trim().to_string(),
            TranslationResponse {
                expression: expression.to_string(),
                glossary: glossary
                    .iter()
                    .map(|(a, p)| (a.to_string(), p.to_string()))
                    .collect(),
            },
        );
    }

    pub fn from_fixture_text(text: &str) -> Result<Self, FixtureError> {
        let mut stub = StubTranslator::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let bad = |message: String| FixtureError::Format { line: i + 1, message };
            if !(2..=3).contains(&cols.len()) {
                return Err(bad(format!("expected 2 or 3 tab-separated columns, found {}", cols.len())));
            }
            let mut glossary = Vec::new();
            for entry in cols.get(2).unwrap_or(&"").split(';').filter(|e| !e.trim().is_empty()) {
                let (atom, phrase) = entry
                    .split_once('=')
                    .ok_or_else(|| bad(format!("glossary entry `{entry}` lacks `=`")))?;
                glossary.push((atom.trim().to_string(), phrase.trim().to_string()));
            }
            stub.table.insert(
                cols[0].trim().to_string(),
                TranslationResponse {
                    expression: cols[1].trim().to_string(),
                    glossary,
                },
            );
        }
        Ok(stub)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, FixtureError> {
        Self::from_fixture_text(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl TranslatorClient for StubTranslator {
    fn translate(&self, request: &TranslationRequest) -> Result<TranslationResponse, TranslateError> {
        self.table
            .get(request.sentence.trim())
            .cloned()
            .ok_or_else(|| TranslateError::MalformedTranslation {
                raw: String::new(),
                reason: format!("no fixture for sentence {:?}", request.sentence),
            })
    }
}

/// JSON-over-HTTP translator.
///
/// Posts `{sentence, session_id, instruction_template, model}` and expects
/// `{expression, glossary}` back, where `glossary` is an object of atom to phrase.
pub struct HttpTranslator {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

#[derive(Serialize)]
struct HttpRequestBody<'a> {
    #[serde(flatten)]
    request: &'a TranslationRequest,
    model: &'a str,
}

#[derive(Deserialize)]
struct HttpResponseBody {
    expression: String,
    #[serde(default)]
    glossary: serde_json::Map<String, serde_json::Value>,
}

impl HttpTranslator {
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key: Option<String>,
        timeout: Duration,
    ) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build();
        HttpTranslator {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key,
            agent: ureq::Agent::new_with_config(config),
        }
    }

    /// Reads the credential from `SATRL_TRANSLATOR_API_KEY`.
    pub fn from_env(endpoint: impl Into<String>, model: impl Into<String>, timeout: Duration) -> Self {
        Self::new(endpoint, model, std::env::var(API_KEY_ENV).ok(), timeout)
    }
}

impl TranslatorClient for HttpTranslator {
    fn translate(&self, request: &TranslationRequest) -> Result<TranslationResponse, TranslateError> {
        let unavailable = |e: ureq::Error| TranslateError::TranslatorUnavailable(e.to_string());
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(HttpRequestBody {
                request,
                model: &self.model,
            })
            .map_err(unavailable)?;
        let status = resp.status().as_u16();
        let raw = resp.body_mut().read_to_string().map_err(unavailable)?;
        if matches!(status, 401 | 403) || status >= 500 {
            return Err(TranslateError::TranslatorUnavailable(format!(
                "HTTP {status}: {raw}"
            )));
        }
        if status >= 400 {
            return Err(TranslateError::MalformedTranslation {
                raw,
                reason: format!("HTTP {status}"),
            });
        }
        let body: HttpResponseBody = match serde_json::from_str(&raw) {
            Ok(b) => b,
            Err(e) => {
                return Err(TranslateError::MalformedTranslation {
                    raw,
                    reason: e.to_string(),
                })
            }
        };
        let mut glossary = Vec::with_capacity(body.glossary.len());
        for (atom, phrase) in body.glossary {
            match phrase {
                serde_json::Value::String(p) => glossary.push((atom, p)),
                other => {
                    return Err(TranslateError::MalformedTranslation {
                        raw,
                        reason: format!("glossary entry for {atom} is not a string: {other}"),
                    })
                }
            }
        }
        Ok(TranslationResponse {
            expression: body.expression,
            glossary,
        })
    }
}

/// Lowercased, whitespace-collapsed phrase without a leading article or trailing punctuation.
fn normalize_phrase(p: &str) -> String {
    let lower = p.to_lowercase();
    let words: Vec<&str> = lower
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!' | '?' | '"')))
        .filter(|w| !w.is_empty())
        .collect();
    let skip = usize::from(matches!(words.first(), Some(&("a" | "an" | "the"))) && words.len() > 1);
    words[skip..].join(" ")
}

/// Glossary state shared by the sentences of one document.
#[derive(Debug, Clone)]
pub struct TranslationSession {
    id: String,
    template: String,
    glossary: Vec<(String, String)>,
    by_phrase: HashMap<String, String>,
    by_atom: HashMap<String, String>,
}

impl TranslationSession {
    pub fn new(id: impl Into<String>) -> Self {
        Self::with_template(id, DEFAULT_INSTRUCTION_TEMPLATE)
    }

    pub fn with_template(id: impl Into<String>, template: impl Into<String>) -> Self {
        TranslationSession {
            id: id.into(),
            template: template.into(),
            glossary: Vec::new(),
            by_phrase: HashMap::new(),
            by_atom: HashMap::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// `(atom, phrase)` in registration order, after renaming.
    pub fn glossary(&self) -> &[(String, String)] {
        &self.glossary
    }

    pub fn phrase(&self, atom: &str) -> Option<&str> {
        self.glossary
            .iter()
            .find(|(a, _)| a == atom)
            .map(|(_, p)| p.as_str())
    }

    /// Translates and parses one sentence, then reconciles its atoms with the session glossary.
    /// The returned response carries the reconciled expression and glossary.
    pub fn translate(
        &mut self,
        client: &dyn TranslatorClient,
        sentence: &str,
    ) -> Result<(LogicalExpr, TranslationResponse), TranslateError> {
        let request = TranslationRequest {
            sentence: sentence.to_string(),
            session_id: self.id.clone(),
            instruction_template: self.template.clone(),
        };
        let response = client.translate(&request)?;
        let mut expr = parse_expression(&response.expression).map_err(|e| {
            TranslateError::MalformedTranslation {
                raw: response.expression.clone(),
                reason: e.to_string(),
            }
        })?;

        let mut in_expr: HashSet<String> = HashSet::new();
        expr.visit_atoms(&mut |a| {
            in_expr.insert(a.to_string());
        });
        let mut renames: HashMap<String, String> = HashMap::new();
        let mut taken: HashSet<String> = HashSet::new();
        let mut glossary = Vec::with_capacity(response.glossary.len());
        for (atom, phrase) in &response.glossary {
            let key = normalize_phrase(phrase);
            let target = if let Some(existing) = self.by_phrase.get(&key) {
                existing.clone()
            } else {
                let target = if self.by_atom.contains_key(atom) || taken.contains(atom) {
                    self.fresh_name(atom, &in_expr, &taken)
                } else {
                    atom.clone()
                };
                self.by_phrase.insert(key.clone(), target.clone());
                self.by_atom.insert(target.clone(), key);
                self.glossary.push((target.clone(), phrase.clone()));
                target
            };
            taken.insert(target.clone());
            if &target != atom {
                renames.insert(atom.clone(), target.clone());
            }
            glossary.push((target, phrase.clone()));
        }
        if !renames.is_empty() {
            expr.rename_atoms(&|a| renames.get(a).cloned());
        }
        Ok((
            expr.clone(),
            TranslationResponse {
                expression: expr.to_string(),
                glossary,
            },
        ))
    }

    fn fresh_name(&self, base: &str, in_expr: &HashSet<String>, taken: &HashSet<String>) -> String {
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|c| !self.by_atom.contains_key(c) && !in_expr.contains(c) && !taken.contains(c))
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circus_stub() -> StubTranslator {
        let mut s = StubTranslator::new();
        s.insert(
            "The circus has a Ferris wheel or a rollercoaster.",
            "Or(P, Q)",
            &[("P", "a Ferris wheel"), ("Q", "a rollercoaster")],
        );
        s.insert("The clown is happy.", "P", &[("P", "the clown is happy")]);
        s.insert(
            "If the circus has a rollercoaster, the clown is happy.",
            "Implies(P, Q)",
            &[("P", "the rollercoaster"), ("Q", "The clown is happy")],
        );
        s.insert("Broken.", "And(P", &[]);
        s
    }

    #[test]
    fn stub_answers_fixture_table() {
        let stub = circus_stub();
        let mut session = TranslationSession::new("t");
        let (e, r) = session
            .translate(&stub, "The circus has a Ferris wheel or a rollercoaster.")
            .unwrap();
        assert_eq!(e.to_string(), "Or(P, Q)");
        assert_eq!(r.glossary.len(), 2);
    }

    #[test]
    fn unknown_sentence_is_malformed() {
        let mut session = TranslationSession::new("t");
        let err = session.translate(&circus_stub(), "Nobody knows this.").unwrap_err();
        assert!(matches!(err, TranslateError::MalformedTranslation { .. }));
    }

    #[test]
    fn unparseable_reply_keeps_raw_text() {
        let mut session = TranslationSession::new("t");
        match session.translate(&circus_stub(), "Broken.") {
            Err(TranslateError::MalformedTranslation { raw, .. }) => assert_eq!(raw, "And(P"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn session_reuses_and_separates_atoms() {
        let stub = circus_stub();
        let mut session = TranslationSession::new("t");
        session
            .translate(&stub, "The circus has a Ferris wheel or a rollercoaster.")
            .unwrap();
        // `P` now means "clown is happy", which is new: it must not collide with the Ferris wheel.
        let (e, _) = session.translate(&stub, "The clown is happy.").unwrap();
        assert_eq!(e.to_string(), "P_1");
        // Both phrases are known: rollercoaster is Q, clown is P_1.
        let (e, r) = session
            .translate(&stub, "If the circus has a rollercoaster, the clown is happy.")
            .unwrap();
        assert_eq!(e.to_string(), "Implies(Q, P_1)");
        assert_eq!(r.expression, "Implies(Q, P_1)");
        assert_eq!(session.glossary().len(), 3);
        assert_eq!(session.phrase("P_1"), Some("the clown is happy"));
    }

    #[test]
    fn fixture_text_parsing() {
        let stub = StubTranslator::from_fixture_text(
            "# comment\nIt rains.\tR\tR=it rains\n\nNo glossary.\tS\r\n",
        )
        .unwrap();
        assert_eq!(stub.len(), 2);
        assert!(matches!(
            StubTranslator::from_fixture_text("just one column"),
            Err(FixtureError::Format { line: 1, .. })
        ));
        assert!(matches!(
            StubTranslator::from_fixture_text("a\tP\tP-phrase"),
            Err(FixtureError::Format { line: 1, .. })
        ));
    }

    #[test]
    fn phrase_normalization() {
        assert_eq!(normalize_phrase("  The  Clown is happy. "), "clown is happy");
        assert_eq!(normalize_phrase("a rollercoaster"), "rollercoaster");
        assert_eq!(normalize_phrase("A"), "a");
    }
}
