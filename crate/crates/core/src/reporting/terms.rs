use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linguistic::{is_punctuation, tokenize, SentenceKey};
use crate::matcher::MatchRecord;

const BUILTIN_STOPWORDS: &str = include_str!("../../data/stopwords/en.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFrequency {
    pub term: String,
    pub count: u64,
}

/// Lowercase stopword set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// One term per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn builtin_english() -> Self {
        Self::parse(BUILTIN_STOPWORDS)
    }

    pub fn from_file(path: &Path) -> std::io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }
}

impl<S: AsRef<str>> FromIterator<S> for Stopwords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stopwords(iter.into_iter().map(|s| s.as_ref().to_lowercase()).collect())
    }
}

/// The `top_k` target sentences with the most attributed pairs, ties broken
/// by key.
pub fn top_reused_sentences<'a>(
    attributed: impl IntoIterator<Item = &'a MatchRecord>,
    top_k: usize,
) -> Vec<(SentenceKey, usize)> {
    let mut counts: BTreeMap<&SentenceKey, usize> = BTreeMap::new();
    for r in attributed {
        *counts.entry(&r.target_key).or_default() += 1;
    }
    let mut ranked: Vec<(SentenceKey, usize)> = counts.into_iter().map(|(k, n)| (k.clone(), n)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(top_k);
    ranked
}

fn keep(term: &str, stopwords: &Stopwords) -> bool {
    term.chars().count() >= 2
        && !is_punctuation(term)
        && !term.chars().all(|c| c.is_numeric())
        && !stopwords.contains(term)
}

/// Term counts over `sentences`, sorted by count (descending) then term.
pub fn term_frequencies<'a>(sentences: impl IntoIterator<Item = &'a str>, stopwords: &Stopwords) -> Vec<TermFrequency> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for sentence in sentences {
        let lower = sentence.to_lowercase();
        for token in tokenize(&lower) {
            if keep(token, stopwords) {
                *counts.entry(token.to_owned()).or_default() += 1;
            }
        }
    }
    let mut out: Vec<TermFrequency> = counts.into_iter().map(|(term, count)| TermFrequency { term, count }).collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.term.cmp(&b.term)));
    out
}

/// Term counts over the most reused target sentences. `text_of` resolves a
/// sentence key to its text; unresolved keys are skipped.
pub fn reused_term_frequencies<'a, 'b>(
    attributed: impl IntoIterator<Item = &'a MatchRecord>,
    text_of: impl Fn(&SentenceKey) -> Option<&'b str>,
    top_k_sentences: usize,
    stopwords: &Stopwords,
) -> Vec<TermFrequency> {
    let top = top_reused_sentences(attributed, top_k_sentences);
    term_frequencies(top.iter().filter_map(|(k, _)| text_of(k)), stopwords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(term: &str, count: u64) -> TermFrequency {
        TermFrequency { term: term.into(), count }
    }

    #[test]
    fn counting_and_order() {
        let stop: Stopwords = ["a"].into_iter().collect();
        assert_eq!(
            term_frequencies(["a big storm", "a big deal"], &stop),
            vec![tf("big", 2), tf("deal", 1), tf("storm", 1)]
        );
    }

    #[test]
    fn filters() {
        let stop = Stopwords::builtin_english();
        assert!(term_frequencies(["The and of, to."], &stop).is_empty());
        assert_eq!(term_frequencies(["In 2020 X voted: 51 %"], &stop), vec![tf("voted", 1)]);
    }

    #[test]
    fn permutation_invariant() {
        let stop = Stopwords::default();
        let a = term_frequencies(["red fox jumps", "lazy dog sleeps", "red dog"], &stop);
        let b = term_frequencies(["red dog", "red fox jumps", "lazy dog sleeps"], &stop);
        assert_eq!(a, b);
    }
}
