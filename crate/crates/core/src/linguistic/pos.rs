//! Coarse part-of-speech tagging: a built-in English heuristic tagger and a
//! join against externally computed tags.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::tokenize::is_punctuation;
use super::LinguisticError;

/// Universal coarse POS tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl PosTag {
    pub fn is_verbal(self) -> bool {
        matches!(self, PosTag::Verb | PosTag::Aux)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Adj => "ADJ",
            PosTag::Adp => "ADP",
            PosTag::Adv => "ADV",
            PosTag::Aux => "AUX",
            PosTag::Cconj => "CCONJ",
            PosTag::Det => "DET",
            PosTag::Intj => "INTJ",
            PosTag::Noun => "NOUN",
            PosTag::Num => "NUM",
            PosTag::Part => "PART",
            PosTag::Pron => "PRON",
            PosTag::Propn => "PROPN",
            PosTag::Punct => "PUNCT",
            PosTag::Sconj => "SCONJ",
            PosTag::Sym => "SYM",
            PosTag::Verb => "VERB",
            PosTag::X => "X",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = LinguisticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| LinguisticError::BadTag(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub pos: PosTag,
}

const AUX: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do", "does", "did",
    "will", "would", "shall", "should", "can", "could", "may", "might", "must", "ought", "wo", "ca",
];
const PRON: &[&str] = &[
    "i",
    "me",
    "you",
    "he",
    "him",
    "she",
    "her",
    "it",
    "we",
    "us",
    "they",
    "them",
    "myself",
    "yourself",
    "himself",
    "herself",
    "itself",
    "ourselves",
    "themselves",
    "mine",
    "yours",
    "hers",
    "ours",
    "theirs",
    "who",
    "whom",
    "whose",
    "what",
    "which",
    "someone",
    "somebody",
    "something",
    "anyone",
    "anybody",
    "anything",
    "everyone",
    "everybody",
    "everything",
    "nobody",
    "nothing",
    "none",
    "it's",
    "he's",
    "she's",
    "they're",
    "we're",
    "i'm",
    "you're",
];
const POSSESSIVE: &[&str] = &["my", "your", "his", "its", "our", "their"];
const DET: &[&str] = &[
    "a", "an", "the", "this", "these", "those", "each", "every", "some", "any", "no", "all", "both", "either",
    "neither", "another", "such", "several", "many", "much", "few", "most", "more", "less", "other",
];
const ADP: &[&str] = &[
    "of",
    "in",
    "on",
    "at",
    "by",
    "for",
    "with",
    "about",
    "against",
    "between",
    "into",
    "through",
    "during",
    "before",
    "after",
    "above",
    "below",
    "to",
    "from",
    "up",
    "down",
    "over",
    "under",
    "near",
    "since",
    "until",
    "within",
    "without",
    "across",
    "along",
    "among",
    "around",
    "behind",
    "beyond",
    "despite",
    "like",
    "per",
    "toward",
    "towards",
    "upon",
    "via",
    "amid",
    "following",
    "including",
    "regarding",
    "according",
];
const CCONJ: &[&str] = &["and", "or", "but", "nor", "yet", "plus"];
const SCONJ: &[&str] = &[
    "that", "if", "because", "while", "although", "though", "unless", "whether", "when", "where", "as", "once", "than",
    "whereas",
];
const PART: &[&str] = &["not", "n't", "'s", "’s"];
const INTJ: &[&str] = &["oh", "yes", "hello", "wow", "ok", "okay"];
const ADV: &[&str] = &[
    "also",
    "very",
    "too",
    "so",
    "just",
    "still",
    "already",
    "now",
    "then",
    "here",
    "there",
    "today",
    "yesterday",
    "tomorrow",
    "again",
    "ever",
    "never",
    "always",
    "often",
    "soon",
    "later",
    "only",
    "even",
    "almost",
    "however",
    "well",
    "back",
    "away",
    "abroad",
    "ago",
    "together",
    "instead",
    "meanwhile",
    "moreover",
    "furthermore",
    "nevertheless",
    "how",
    "why",
    "perhaps",
    "quite",
    "rather",
    "else",
    "further",
    "yet",
    "tonight",
    "forward",
];
const ADJ: &[&str] = &[
    "new",
    "old",
    "good",
    "bad",
    "big",
    "small",
    "large",
    "high",
    "low",
    "long",
    "short",
    "great",
    "little",
    "young",
    "early",
    "late",
    "important",
    "major",
    "main",
    "last",
    "first",
    "next",
    "second",
    "third",
    "former",
    "public",
    "foreign",
    "national",
    "international",
    "local",
    "political",
    "economic",
    "social",
    "european",
    "military",
    "possible",
    "likely",
    "strong",
    "heavy",
    "free",
    "full",
    "key",
    "senior",
    "recent",
    "current",
    "total",
    "annual",
    "daily",
    "weekly",
    "further",
    "same",
    "different",
    "serious",
    "severe",
    "general",
    "official",
    "own",
];
const NUMBER_WORDS: &[&str] = &[
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
    "thirty",
    "forty",
    "fifty",
    "sixty",
    "seventy",
    "eighty",
    "ninety",
    "hundred",
    "thousand",
    "million",
    "billion",
    "trillion",
    "dozen",
    "half",
];
const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "ible", "less", "ical", "ish", "ian"];

fn set(words: &[&'static str]) -> HashSet<&'static str> {
    words.iter().copied().collect()
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Consonant-vowel-consonant ending, the shape that may double its final
/// consonant before -ed/-ing (stop, plan). `w`, `x`, `y` never double.
fn cvc(lemma: &str) -> bool {
    let b = lemma.as_bytes();
    b.len() >= 3
        && !is_vowel(b[b.len() - 1])
        && !matches!(b[b.len() - 1], b'w' | b'x' | b'y')
        && is_vowel(b[b.len() - 2])
        && !is_vowel(b[b.len() - 3])
}

/// Regular inflections of an English verb lemma. Doubled and undoubled
/// variants are both generated for CVC endings.
fn inflect(lemma: &str) -> Vec<String> {
    let mut forms = vec![lemma.to_owned()];
    let bytes = lemma.as_bytes();
    let last = *bytes.last().unwrap_or(&b' ');
    let consonant_y = last == b'y' && bytes.len() >= 2 && !is_vowel(bytes[bytes.len() - 2]);

    if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with('z')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
        || lemma.ends_with('o')
    {
        forms.push(format!("{lemma}es"));
    } else if consonant_y {
        forms.push(format!("{}ies", &lemma[..lemma.len() - 1]));
    } else {
        forms.push(format!("{lemma}s"));
    }

    if last == b'e' {
        forms.push(format!("{lemma}d"));
    } else if consonant_y {
        forms.push(format!("{}ied", &lemma[..lemma.len() - 1]));
    } else {
        forms.push(format!("{lemma}ed"));
    }

    if let Some(stem) = lemma.strip_suffix("ie") {
        forms.push(format!("{stem}ying"));
    } else if last == b'e' && !lemma.ends_with("ee") && lemma.len() > 2 {
        forms.push(format!("{}ing", &lemma[..lemma.len() - 1]));
    } else {
        forms.push(format!("{lemma}ing"));
    }

    if cvc(lemma) {
        let d = last as char;
        forms.push(format!("{lemma}{d}ed"));
        forms.push(format!("{lemma}{d}ing"));
    }
    forms
}

struct VerbForms {
    base: HashSet<String>,
    other: HashSet<String>,
}

static EN_VERBS: LazyLock<VerbForms> = LazyLock::new(|| {
    let mut base = HashSet::new();
    let mut other = HashSet::new();
    for line in include_str!("../../data/lexicon/en_verbs.txt").lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let lemma = parts.next().unwrap();
        let mut forms = inflect(lemma).into_iter();
        base.insert(forms.next().unwrap());
        // 3rd person -s forms are as noun-like as the base after a determiner.
        base.insert(forms.next().unwrap());
        other.extend(forms);
        other.extend(parts.map(str::to_owned));
    }
    VerbForms { base, other }
});

struct EnglishLexicon {
    aux: HashSet<&'static str>,
    pron: HashSet<&'static str>,
    possessive: HashSet<&'static str>,
    det: HashSet<&'static str>,
    adp: HashSet<&'static str>,
    cconj: HashSet<&'static str>,
    sconj: HashSet<&'static str>,
    part: HashSet<&'static str>,
    intj: HashSet<&'static str>,
    adv: HashSet<&'static str>,
    adj: HashSet<&'static str>,
    numbers: HashSet<&'static str>,
}

static EN: LazyLock<EnglishLexicon> = LazyLock::new(|| EnglishLexicon {
    aux: set(AUX),
    pron: set(PRON),
    possessive: set(POSSESSIVE),
    det: set(DET),
    adp: set(ADP),
    cconj: set(CCONJ),
    sconj: set(SCONJ),
    part: set(PART),
    intj: set(INTJ),
    adv: set(ADV),
    adj: set(ADJ),
    numbers: set(NUMBER_WORDS),
});

fn shape_tag(token: &str) -> Option<PosTag> {
    let first = token.chars().next()?;
    if is_punctuation(token) {
        let sym = matches!(
            first,
            '$' | '%'
                | '+'
                | '<'
                | '='
                | '>'
                | '^'
                | '`'
                | '|'
                | '~'
                | '€'
                | '£'
                | '¥'
                | '©'
                | '®'
                | '°'
                | '§'
                | '#'
                | '&'
                | '*'
        );
        return Some(if sym { PosTag::Sym } else { PosTag::Punct });
    }
    if first.is_numeric() {
        return Some(PosTag::Num);
    }
    None
}

fn tag_english(tokens: &[&str]) -> Vec<PosTag> {
    let en = &*EN;
    let verbs = &*EN_VERBS;
    let mut tags: Vec<PosTag> = Vec::with_capacity(tokens.len());

    for (i, token) in tokens.iter().enumerate() {
        if let Some(tag) = shape_tag(token) {
            tags.push(tag);
            continue;
        }
        let lower = token.to_lowercase();
        let w = lower.as_str();
        let prev = tags.last().copied();
        let after_determiner = matches!(prev, Some(PosTag::Det | PosTag::Adj))
            || (i > 0 && en.possessive.contains(tokens[i - 1].to_lowercase().as_str()));
        let capitalized = token.chars().next().is_some_and(char::is_uppercase);

        let tag = if en.numbers.contains(w) {
            PosTag::Num
        } else if en.aux.contains(w) || w.ends_with("n't") || w.ends_with("n’t") {
            PosTag::Aux
        } else if en.pron.contains(w) {
            PosTag::Pron
        } else if en.possessive.contains(w) || en.det.contains(w) {
            PosTag::Det
        } else if en.adp.contains(w) {
            PosTag::Adp
        } else if en.cconj.contains(w) {
            PosTag::Cconj
        } else if en.sconj.contains(w) {
            PosTag::Sconj
        } else if en.part.contains(w) {
            PosTag::Part
        } else if en.intj.contains(w) {
            PosTag::Intj
        } else if en.adv.contains(w) {
            PosTag::Adv
        } else if verbs.base.contains(w) {
            if after_determiner {
                PosTag::Noun
            } else {
                PosTag::Verb
            }
        } else if verbs.other.contains(w) {
            if after_determiner && w.ends_with("ing") {
                PosTag::Noun
            } else {
                PosTag::Verb
            }
        } else if capitalized {
            PosTag::Propn
        } else if en.adj.contains(w) || ADJ_SUFFIXES.iter().any(|s| w.len() > s.len() + 2 && w.ends_with(s)) {
            PosTag::Adj
        } else if w.len() > 4 && w.ends_with("ly") {
            PosTag::Adv
        } else if w.len() > 4 && w.ends_with("ed") && w.chars().all(char::is_alphabetic) {
            PosTag::Verb
        } else if w.chars().all(char::is_alphabetic) {
            PosTag::Noun
        } else {
            PosTag::X
        };
        tags.push(tag);
    }
    tags
}

/// Word-to-tag lookup table for languages without built-in rules.
#[derive(Debug, Clone, Default)]
pub struct Lexicon(HashMap<String, PosTag>);

impl Lexicon {
    /// Parses `word TAG` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, LinguisticError> {
        let mut map = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) =
                line.rsplit_once(char::is_whitespace).ok_or_else(|| LinguisticError::BadTag(line.to_owned()))?;
            map.insert(word.trim().to_lowercase(), tag.parse()?);
        }
        Ok(Lexicon(map))
    }

    pub fn from_file(path: &Path) -> Result<Self, LinguisticError> {
        let text = fs::read_to_string(path).map_err(|source| LinguisticError::Io { path: path.to_owned(), source })?;
        Self::parse(&text)
    }
}

/// Approximate tagger: closed-class word lists and a verb lexicon for
/// English, optional lexicon files for other languages, shape rules for
/// punctuation and numbers everywhere.
#[derive(Debug, Clone, Default)]
pub struct HeuristicTagger {
    lexicons: HashMap<String, Lexicon>,
}

impl HeuristicTagger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lexicon(mut self, language: &str, lexicon: Lexicon) -> Self {
        self.lexicons.insert(language.to_owned(), lexicon);
        self
    }

    pub fn tag(&self, tokens: &[&str], language: &str) -> Vec<PosTag> {
        if let Some(lex) = self.lexicons.get(language) {
            return tokens
                .iter()
                .map(|t| shape_tag(t).or_else(|| lex.0.get(&t.to_lowercase()).copied()).unwrap_or(PosTag::X))
                .collect();
        }
        if language == "en" {
            return tag_english(tokens);
        }
        tokens.iter().map(|t| shape_tag(t).unwrap_or(PosTag::X)).collect()
    }
}

#[derive(Debug, Deserialize)]
struct AnnotationRecord {
    article_id: String,
    sentence_idx: usize,
    tags: Vec<PosTag>,
}

/// Pre-computed tags keyed by article id and sentence index.
#[derive(Debug, Clone, Default)]
pub struct ExternalAnnotations {
    tags: HashMap<(String, usize), Vec<PosTag>>,
}

impl ExternalAnnotations {
    /// Parses JSONL records `{"article_id", "sentence_idx", "tags"}`.
    pub fn parse(text: &str) -> Result<Self, LinguisticError> {
        let mut tags = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: AnnotationRecord =
                serde_json::from_str(line).map_err(|source| LinguisticError::BadAnnotation { line: i + 1, source })?;
            tags.insert((rec.article_id, rec.sentence_idx), rec.tags);
        }
        Ok(ExternalAnnotations { tags })
    }

    pub fn from_file(path: &Path) -> Result<Self, LinguisticError> {
        let text = fs::read_to_string(path).map_err(|source| LinguisticError::Io { path: path.to_owned(), source })?;
        Self::parse(&text)
    }

    pub fn get(&self, article_id: &str, idx: usize) -> Option<&[PosTag]> {
        self.tags.get(&(article_id.to_owned(), idx)).map(Vec::as_slice)
    }
}

/// Source of POS tags for sentence annotation.
#[derive(Debug, Clone)]
pub enum Annotator {
    Heuristic(HeuristicTagger),
    External(ExternalAnnotations),
}

impl Default for Annotator {
    fn default() -> Self {
        Annotator::Heuristic(HeuristicTagger::new())
    }
}

impl Annotator {
    /// Tags `tokens` of sentence `idx` in article `article_id`.
    pub fn annotate(
        &self,
        tokens: &[&str],
        language: &str,
        article_id: &str,
        idx: usize,
    ) -> Result<Vec<Token>, LinguisticError> {
        let tags = match self {
            Annotator::Heuristic(tagger) => tagger.tag(tokens, language),
            Annotator::External(ext) => {
                let tags = ext
                    .get(article_id, idx)
                    .ok_or_else(|| LinguisticError::AnnotationMissing { article_id: article_id.to_owned(), idx })?;
                if tags.len() != tokens.len() {
                    return Err(LinguisticError::AnnotationLength {
                        article_id: article_id.to_owned(),
                        idx,
                        expected: tokens.len(),
                        found: tags.len(),
                    });
                }
                tags.to_vec()
            }
        };
        Ok(tokens.iter().zip(tags).map(|(t, pos)| Token { text: (*t).to_owned(), pos }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::PosTag::*;
    use super::*;

    fn en(tokens: &[&str]) -> Vec<PosTag> {
        HeuristicTagger::new().tag(tokens, "en")
    }

    #[test]
    fn lexicon_fixtures() {
        assert_eq!(en(&["is", "a", "schedule"]), [Aux, Det, Noun]);
        assert_eq!(en(&["Follow", "us", "also", "on"]), [Verb, Pron, Adv, Adp]);
        assert!(en(&[]).is_empty());
    }

    #[test]
    fn inflections() {
        assert_eq!(en(&["talks", "resumed"]), [Verb, Verb]);
        assert_eq!(en(&["police", "stopped", "cars"]), [Noun, Verb, Noun]);
        assert_eq!(en(&["he", "was", "planning"]), [Pron, Aux, Verb]);
        assert_eq!(en(&["they", "studied", "it"]), [Pron, Verb, Pron]);
        assert_eq!(en(&["she", "said"]), [Pron, Verb]);
        assert_eq!(en(&["the", "report", "and", "the", "meeting"]), [Det, Noun, Cconj, Det, Noun]);
    }

    #[test]
    fn inflect_rules() {
        assert!(inflect("stop").contains(&"stopped".to_owned()));
        assert!(inflect("visit").contains(&"visited".to_owned()));
        assert!(inflect("die").contains(&"dying".to_owned()));
        assert!(inflect("carry").contains(&"carries".to_owned()));
        assert!(inflect("carry").contains(&"carried".to_owned()));
        assert!(inflect("close").contains(&"closing".to_owned()));
        assert!(inflect("agree").contains(&"agreeing".to_owned()));
        assert!(inflect("push").contains(&"pushes".to_owned()));
    }

    #[test]
    fn shapes() {
        assert_eq!(en(&["7", ":", "30am", "$", "2pm"]), [Num, Punct, Num, Sym, Num]);
        assert_eq!(en(&["John", "Doe"]), [Propn, Propn]);
    }

    #[test]
    fn other_languages() {
        let tagger = HeuristicTagger::new();
        assert_eq!(tagger.tag(&["Vlada", "je", "5", "."], "hr"), [X, X, Num, Punct]);
        let lex = Lexicon::parse("# hr\nvlada NOUN\nje AUX\n").unwrap();
        let tagger = tagger.with_lexicon("hr", lex);
        assert_eq!(tagger.tag(&["Vlada", "je", "5", "."], "hr"), [Noun, Aux, Num, Punct]);
    }

    #[test]
    fn external_annotations() {
        let ext = ExternalAnnotations::parse(r#"{"article_id":"a1","sentence_idx":0,"tags":["PRON","VERB"]}"#).unwrap();
        let ann = Annotator::External(ext);
        let toks = ann.annotate(&["We", "won"], "en", "a1", 0).unwrap();
        assert_eq!(toks[1].pos, Verb);
        assert!(matches!(
            ann.annotate(&["We", "won"], "en", "a1", 1),
            Err(LinguisticError::AnnotationMissing { idx: 1, .. })
        ));
        assert!(matches!(
            ann.annotate(&["We"], "en", "a1", 0),
            Err(LinguisticError::AnnotationLength { expected: 1, found: 2, .. })
        ));
    }

    #[test]
    fn tag_parsing() {
        assert_eq!("PROPN".parse::<PosTag>().unwrap(), Propn);
        assert!("noun".parse::<PosTag>().is_err());
    }
}
