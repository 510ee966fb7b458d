//! Rule-based sentence splitting.
//!
//! A sentence ends at `.`, `!` or `?` when followed by whitespace and an uppercase
//! letter, or by the end of the text. A period that closes a listed abbreviation
//! never ends a sentence.

use thiserror::Error;

pub const DEFAULT_ABBREVIATIONS: [&str; 5] = ["Mr.", "Mrs.", "Dr.", "e.g.", "i.e."];
pub const DEFAULT_MAX_WORDS: usize = 450;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("input text is empty")]
    EmptyInput,
    #[error("input has {words} words, more than the limit of {limit}")]
    TooLong { words: usize, limit: usize },
}

#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    pub abbreviations: Vec<String>,
    /// `None` disables the length check.
    pub max_words: Option<usize>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        SentenceSplitter {
            abbreviations: DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
            max_words: Some(DEFAULT_MAX_WORDS),
        }
    }
}

impl SentenceSplitter {
    pub fn split(&self, text: &str) -> Result<Vec<String>, SplitError> {
        if text.trim().is_empty() {
            return Err(SplitError::EmptyInput);
        }
        let words = text.split_whitespace().count();
        if let Some(limit) = self.max_words {
            if words > limit {
                return Err(SplitError::TooLong { words, limit });
            }
        }

        let mut out = Vec::new();
        let mut start = 0;
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        for (k, &(i, c)) in chars.iter().enumerate() {
            if !matches!(c, '.' | '!' | '?') {
                continue;
            }
            let end = i + c.len_utf8();
            let rest = &text[end..];
            let boundary = match chars.get(k + 1) {
                None => true,
                Some(&(_, next)) if next.is_whitespace() => {
                    let after = rest.trim_start();
                    after.is_empty() || after.chars().next().is_some_and(char::is_uppercase)
                }
                Some(_) => false,
            };
            if !boundary || (c == '.' && self.is_abbreviation(&text[start..end])) {
                continue;
            }
            let sentence = text[start..end].trim();
            if !sentence.is_empty() {
                out.push(sentence.to_string());
            }
            start = end;
        }
        let tail = text[start..].trim();
        if !tail.is_empty() {
            out.push(tail.to_string());
        }
        Ok(out)
    }

    /// Whether the last whitespace-delimited token of `prefix` is an abbreviation.
    fn is_abbreviation(&self, prefix: &str) -> bool {
        let token = prefix.rsplit(char::is_whitespace).next().unwrap_or("");
        let token = token.trim_start_matches(['(', '"', '\'']);
        self.abbreviations.iter().any(|a| a == token)
    }
}

/// Splits with the default abbreviation list and word limit.
pub fn split_sentences(text: &str) -> Result<Vec<String>, SplitError> {
    SentenceSplitter::default().split(text)
}
