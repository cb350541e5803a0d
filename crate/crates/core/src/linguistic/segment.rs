//! Rule-based sentence splitting with per-language non-breaking prefixes.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

const BUILTIN: &[(&str, &str)] = &[
    ("en", include_str!("../../data/prefixes/en.txt")),
    ("de", include_str!("../../data/prefixes/de.txt")),
    ("fr", include_str!("../../data/prefixes/fr.txt")),
    ("it", include_str!("../../data/prefixes/it.txt")),
    ("pl", include_str!("../../data/prefixes/pl.txt")),
    ("sr", include_str!("../../data/prefixes/sr.txt")),
    ("hr", include_str!("../../data/prefixes/hr.txt")),
];

const NUMERIC_ONLY: &str = "#NUMERIC_ONLY#";

/// Words that do not end a sentence when followed by a period.
#[derive(Debug, Clone, Default)]
pub struct PrefixSet {
    always: HashSet<String>,
    before_digit: HashSet<String>,
}

impl PrefixSet {
    /// Parses the plain-text list format: one prefix per line, `#` starts a
    /// comment line, an optional trailing period is ignored and a trailing
    /// `#NUMERIC_ONLY#` restricts the entry to positions before a digit.
    pub fn parse(text: &str) -> Self {
        let mut set = PrefixSet::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, numeric) = match line.strip_suffix(NUMERIC_ONLY) {
                Some(w) => (w.trim(), true),
                None => (line, false),
            };
            let word = word.strip_suffix('.').unwrap_or(word).to_owned();
            if numeric {
                set.before_digit.insert(word);
            } else {
                set.always.insert(word);
            }
        }
        set
    }

    pub fn from_file(path: &Path) -> io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn len(&self) -> usize {
        self.always.len() + self.before_digit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn blocks(&self, word: &str, next: char) -> bool {
        self.always.contains(word) || (next.is_ascii_digit() && self.before_digit.contains(word))
    }
}

/// Sentence splitter holding one prefix list per language.
#[derive(Debug, Clone, Default)]
pub struct Segmenter {
    prefixes: HashMap<String, PrefixSet>,
}

impl Segmenter {
    /// Segmenter with the shipped prefix lists.
    pub fn builtin() -> Self {
        let prefixes = BUILTIN.iter().map(|(lang, text)| ((*lang).to_owned(), PrefixSet::parse(text))).collect();
        Segmenter { prefixes }
    }

    /// Replaces (or adds) the prefix list for `language`.
    pub fn with_prefixes(mut self, language: &str, prefixes: PrefixSet) -> Self {
        self.prefixes.insert(language.to_owned(), prefixes);
        self
    }

    pub fn prefixes(&self, language: &str) -> Option<&PrefixSet> {
        self.prefixes.get(language)
    }

    /// Splits cleaned text into trimmed sentence slices. Languages without a
    /// prefix list still get the acronym rule.
    pub fn split<'t>(&self, text: &'t str, language: &str) -> Vec<&'t str> {
        static EMPTY: std::sync::LazyLock<PrefixSet> = std::sync::LazyLock::new(PrefixSet::default);
        split_sentences(text, self.prefixes.get(language).unwrap_or(&EMPTY))
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '»' | '”' | '’')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '«' | '“' | '‘' | '„')
}

/// `U.S`, `E.U`, `J`: uppercase letters joined by single periods.
fn is_acronym(word: &str) -> bool {
    !word.is_empty()
        && word.split('.').all(|part| {
            let mut chars = part.chars();
            matches!((chars.next(), chars.next()), (Some(c), None) if c.is_uppercase())
        })
}

/// Splits `text` at `.`, `!` or `?` (plus any closing quotes or brackets)
/// followed by whitespace and then an uppercase letter, an opening quote or a
/// digit. A single period after a non-breaking prefix or an uppercase
/// acronym is not a boundary.
pub fn split_sentences<'t>(text: &'t str, prefixes: &PrefixSet) -> Vec<&'t str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }

        let mut j = i;
        while j < chars.len() && is_terminator(chars[j].1) {
            j += 1;
        }
        let closers_from = j;
        while j < chars.len() && is_closing(chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(p, _)| p);

        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        if k == j || k == chars.len() {
            i = j.max(i + 1);
            continue;
        }
        let next = chars[k].1;
        if !(next.is_uppercase() || is_opening(next) || next.is_ascii_digit()) {
            i = j;
            continue;
        }

        let single_period = c == '.' && closers_from == i + 1 && closers_from == j;
        if single_period {
            let word_start =
                text[..pos].rfind(char::is_whitespace).map_or(0, |w| w + text[w..].chars().next().unwrap().len_utf8());
            let word = text[word_start..pos].trim_start_matches(is_opening);
            if !word.is_empty() && (prefixes.blocks(word, next) || is_acronym(word)) {
                i = j;
                continue;
            }
        }

        let sentence = text[start..end].trim();
        if !sentence.is_empty() {
            sentences.push(sentence);
        }
        start = end;
        i = k;
    }

    let rest = text[start..].trim();
    if !rest.is_empty() {
        sentences.push(rest);
    }
    sentences
}
