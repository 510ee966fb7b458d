//! End-to-end compilation from text (or expression files) to simplified CNF.

use satrl_core::CnfFormula;
use thiserror::Error;

use crate::convert::{to_cnf_with_cap, ConvertError, DEFAULT_CLAUSE_CAP};
use crate::expr::{parse_expression, LogicalExpr, ParseError};
use crate::simplify::simplify_cnf;
use crate::split::{SentenceSplitter, SplitError};
use crate::symbols::SymbolTable;
use crate::translate::{TranslateError, TranslationSession, TranslatorClient};

#[derive(Debug, Error)]
#[error("sentence {index} ({sentence:?}): {error}")]
pub struct SentenceError {
    /// Zero-based position in the split output.
    pub index: usize,
    pub sentence: String,
    pub error: TranslateError,
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("{} sentence(s) failed to translate: {}", .0.len(), join(.0))]
    Sentences(Vec<SentenceError>),
    #[error("expression line {line}: {error}")]
    Parse { line: usize, error: ParseError },
    #[error("no expressions to compile")]
    NoExpressions,
    #[error(transparent)]
    Convert(#[from] ConvertError),
}

fn join(errors: &[SentenceError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub splitter: SentenceSplitter,
    pub session_id: String,
    pub clause_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            splitter: SentenceSplitter::default(),
            session_id: "document".to_string(),
            clause_cap: DEFAULT_CLAUSE_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompiledDocument {
    pub sentences: Vec<String>,
    pub expressions: Vec<LogicalExpr>,
    pub symbols: SymbolTable,
    /// `(atom, phrase)` pairs from the translation session; empty for expression input.
    pub glossary: Vec<(String, String)>,
    /// CNF before simplification.
    pub raw_cnf: CnfFormula,
    pub cnf: CnfFormula,
}

impl CompiledDocument {
    pub fn phrase(&self, atom: &str) -> Option<&str> {
        self.glossary
            .iter()
            .find(|(a, _)| a == atom)
            .map(|(_, p)| p.as_str())
    }
}

pub fn compile_document(
    text: &str,
    client: &dyn TranslatorClient,
) -> Result<CompiledDocument, CompileError> {
    compile_document_with(text, client, &CompileOptions::default())
}

/// Splits, translates every sentence (collecting all failures), then conjoins,
/// converts and simplifies.
pub fn compile_document_with(
    text: &str,
    client: &dyn TranslatorClient,
    options: &CompileOptions,
) -> Result<CompiledDocument, CompileError> {
    let sentences = options.splitter.split(text)?;
    let mut session = TranslationSession::new(options.session_id.clone());
    let mut expressions = Vec::with_capacity(sentences.len());
    let mut errors = Vec::new();
    for (index, sentence) in sentences.iter().enumerate() {
        match session.translate(client, sentence) {
            Ok((e, _)) => expressions.push(e),
            Err(error) => errors.push(SentenceError {
                index,
                sentence: sentence.clone(),
                error,
            }),
        }
    }
    if !errors.is_empty() {
        return Err(CompileError::Sentences(errors));
    }
    let mut doc = compile_with_cap(expressions, options.clause_cap)?;
    doc.sentences = sentences;
    doc.glossary = session.glossary().to_vec();
    Ok(doc)
}

/// Parses an expression file: one expression per line, blank lines and `#` lines skipped.
pub fn parse_expression_file(text: &str) -> Result<Vec<LogicalExpr>, CompileError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            parse_expression(l).map_err(|error| CompileError::Parse { line: i + 1, error })
        })
        .collect()
}

/// Conjoins `expressions` and produces raw and simplified CNF.
pub fn compile_expressions(expressions: Vec<LogicalExpr>) -> Result<CompiledDocument, CompileError> {
    compile_with_cap(expressions, DEFAULT_CLAUSE_CAP)
}

fn compile_with_cap(
    expressions: Vec<LogicalExpr>,
    cap: usize,
) -> Result<CompiledDocument, CompileError> {
    if expressions.is_empty() {
        return Err(CompileError::NoExpressions);
    }
    let mut symbols = SymbolTable::from_exprs(&expressions);
    let whole = LogicalExpr::conjunction(expressions.clone());
    let raw_cnf = to_cnf_with_cap(&whole, &mut symbols, cap)?;
    let cnf = simplify_cnf(&raw_cnf);
    Ok(CompiledDocument {
        sentences: Vec::new(),
        expressions,
        symbols,
        glossary: Vec::new(),
        raw_cnf,
        cnf,
    })
}
