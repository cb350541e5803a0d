use serde::{Deserialize, Serialize};

use super::pos::{PosTag, Token};
use super::tokenize::is_punctuation;

/// Minimum word count is exclusive: a sentence needs more than this many.
pub const MIN_WORDS_EXCLUSIVE: usize = 7;

/// Numeric share (percent of word tokens) at or above which a sentence is
/// rejected as a listing row.
pub const MAX_NUMERIC_PERCENT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectionReason {
    TooShort,
    NoVerb,
    ListingHeader,
    NumericDominant,
}

/// Applies the target-side filter rules in order and returns the first one
/// that fails:
///
/// 1. more than seven word tokens,
/// 2. at least one `VERB` or `AUX`,
/// 3. no trailing colon (schedule and listing headers),
/// 4. under 30% of word tokens numeric.
pub fn check_eligibility(text: &str, tokens: &[Token]) -> Result<(), RejectionReason> {
    let words: Vec<&Token> = tokens.iter().filter(|t| !is_punctuation(&t.text)).collect();
    if words.len() <= MIN_WORDS_EXCLUSIVE {
        return Err(RejectionReason::TooShort);
    }
    if !tokens.iter().any(|t| t.pos.is_verbal()) {
        return Err(RejectionReason::NoVerb);
    }
    if text.trim_end().ends_with(':') {
        return Err(RejectionReason::ListingHeader);
    }
    let numeric = words.iter().filter(|t| t.pos == PosTag::Num || t.text.starts_with(char::is_numeric)).count();
    if numeric * 100 >= MAX_NUMERIC_PERCENT * words.len() {
        return Err(RejectionReason::NumericDominant);
    }
    Ok(())
}
