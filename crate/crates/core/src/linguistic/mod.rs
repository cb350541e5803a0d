//! Sentence segmentation, tokenization, POS annotation and the target-side
//! eligibility filter.

mod eligibility;
mod pos;
mod segment;
mod tokenize;

pub use eligibility::{check_eligibility, RejectionReason, MAX_NUMERIC_PERCENT, MIN_WORDS_EXCLUSIVE};
pub use pos::{Annotator, ExternalAnnotations, HeuristicTagger, Lexicon, PosTag, Token};
pub use segment::{split_sentences, PrefixSet, Segmenter};
pub use tokenize::{count_words, is_punctuation, tokenize};

use std::fmt;
use std::io;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Article, Corpus, Role};

#[derive(Debug, Error)]
pub enum LinguisticError {
    #[error("no external annotation for sentence {article_id}#{idx}")]
    AnnotationMissing { article_id: String, idx: usize },
    #[error("annotation for {article_id}#{idx} has {found} tags, sentence has {expected} tokens")]
    AnnotationLength { article_id: String, idx: usize, expected: usize, found: usize },
    #[error("unknown POS tag {0:?}")]
    BadTag(String),
    #[error("annotation line {line}: {source}")]
    BadAnnotation {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("expected a {expected} corpus, got {found}")]
    RoleMismatch { expected: Role, found: Role },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Identifies a sentence as `article_id#idx`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentenceKey(String);

impl SentenceKey {
    pub fn new(article_id: &str, idx: usize) -> Self {
        SentenceKey(format!("{article_id}#{idx}"))
    }

    /// Parses `article_id#idx`; the index is taken after the last `#`.
    pub fn parse(key: &str) -> Option<Self> {
        let (_, idx) = key.rsplit_once('#')?;
        idx.parse::<usize>().ok()?;
        Some(SentenceKey(key.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn article_id(&self) -> &str {
        self.0.rsplit_once('#').map_or(&self.0, |(id, _)| id)
    }

    pub fn idx(&self) -> usize {
        self.0.rsplit_once('#').and_then(|(_, i)| i.parse().ok()).expect("keys are built from an index")
    }
}

impl fmt::Display for SentenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub article_id: String,
    pub idx: usize,
    pub text: String,
    pub n_tokens: usize,
}

impl Sentence {
    pub fn key(&self) -> SentenceKey {
        SentenceKey::new(&self.article_id, self.idx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub sentence: Sentence,
    pub tokens: Vec<Token>,
    pub eligible: bool,
    pub rejection_reason: Option<RejectionReason>,
}

/// Splits an article body into indexed sentences.
pub fn segment_article(article: &Article, segmenter: &Segmenter) -> Vec<Sentence> {
    segmenter
        .split(&article.body, &article.language)
        .into_iter()
        .enumerate()
        .map(|(idx, text)| Sentence {
            article_id: article.id.clone(),
            idx,
            text: text.to_owned(),
            n_tokens: count_words(&tokenize(text)),
        })
        .collect()
}

/// All sentences of every article, in corpus order.
pub fn segment_corpus(corpus: &Corpus, segmenter: &Segmenter) -> Vec<Sentence> {
    corpus.articles().iter().flat_map(|a| segment_article(a, segmenter)).collect()
}

/// Tokenizes, tags and judges one sentence.
pub fn annotate_sentence(
    sentence: Sentence,
    language: &str,
    annotator: &Annotator,
) -> Result<AnnotatedSentence, LinguisticError> {
    let words = tokenize(&sentence.text);
    let tokens = annotator.annotate(&words, language, &sentence.article_id, sentence.idx)?;
    let verdict = check_eligibility(&sentence.text, &tokens);
    Ok(AnnotatedSentence { sentence, tokens, eligible: verdict.is_ok(), rejection_reason: verdict.err() })
}

/// Re-evaluates the eligibility rules for an annotated sentence.
pub fn is_eligible(annotated: &AnnotatedSentence) -> (bool, Option<RejectionReason>) {
    match check_eligibility(&annotated.sentence.text, &annotated.tokens) {
        Ok(()) => (true, None),
        Err(reason) => (false, Some(reason)),
    }
}

/// Annotates every sentence of a corpus, eligible or not.
pub fn annotate_corpus(
    corpus: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
) -> Result<Vec<AnnotatedSentence>, LinguisticError> {
    let mut out = Vec::new();
    for article in corpus.articles() {
        for sentence in segment_article(article, segmenter) {
            out.push(annotate_sentence(sentence, &article.language, annotator)?);
        }
    }
    Ok(out)
}

/// Eligible sentences of a target corpus. Source corpora are rejected: their
/// sentences are matched unfiltered.
pub fn filter_target_sentences(
    corpus: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
) -> Result<Vec<AnnotatedSentence>, LinguisticError> {
    if corpus.role() != Role::Target {
        return Err(LinguisticError::RoleMismatch { expected: Role::Target, found: corpus.role() });
    }
    filter_sentences(corpus, segmenter, annotator)
}

/// Eligible sentences of any corpus, for runs that also filter sources.
pub fn filter_sentences(
    corpus: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
) -> Result<Vec<AnnotatedSentence>, LinguisticError> {
    let mut all = annotate_corpus(corpus, segmenter, annotator)?;
    all.retain(|s| s.eligible);
    Ok(all)
}
