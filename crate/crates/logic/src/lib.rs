//! Natural-language-to-CNF compilation.
//!
//! Text is split into sentences, each sentence is translated into a
//! functional-form expression such as `And(Not(P), Or(Q, R))` by a
//! [`TranslatorClient`], the expressions are conjoined, converted to CNF by
//! distribution and finally simplified by redundancy removal.

pub mod convert;
pub mod expr;
pub mod pipeline;
pub mod simplify;
pub mod split;
pub mod symbols;
pub mod translate;

pub use convert::{to_cnf, to_cnf_with_cap, ConvertError, DEFAULT_CLAUSE_CAP};
pub use expr::{parse_expression, LogicalExpr, OpKind, ParseError};
pub use pipeline::{
    compile_document, compile_document_with, compile_expressions, parse_expression_file, CompileError, CompileOptions, CompiledDocument,
    SentenceError,
};
pub use simplify::simplify_cnf;
pub use split::{split_sentences, SentenceSplitter, SplitError};
pub use symbols::SymbolTable;
pub use translate::{
    FixtureError, HttpTranslator, StubTranslator, TranslateError, TranslationRequest, TranslationResponse,
    TranslationSession, TranslatorClient,
};
