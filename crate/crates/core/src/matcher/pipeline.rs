use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    build_date_blocks, flag_false_positives, match_block, select_earliest_source, BlockEntry, MatchError, MatchSet,
    SearchStats, DEFAULT_THRESHOLD,
};
use crate::corpus::{Corpus, Role};
use crate::embedding::{embed_batch, EmbeddingProvider, VectorStore};
use crate::linguistic::{annotate_sentence, segment_article, AnnotatedSentence, Annotator, Segmenter, Sentence};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    pub threshold: f32,
    /// Worker threads for annotation, embedding and block search.
    pub parallelism: usize,
    /// Apply the eligibility filter to source sentences as well.
    pub filter_sources: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig { threshold: DEFAULT_THRESHOLD, parallelism: 1, filter_sources: false }
    }
}

/// Everything downstream analysis needs from a matching run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub match_set: MatchSet,
    /// Every target sentence, eligible or not, in corpus order.
    pub target_sentences: Vec<AnnotatedSentence>,
    /// Every source sentence in corpus order.
    pub source_sentences: Vec<Sentence>,
    pub store: VectorStore,
}

impl PipelineOutput {
    pub fn eligible_targets(&self) -> impl Iterator<Item = &AnnotatedSentence> {
        self.target_sentences.iter().filter(|s| s.eligible)
    }
}

fn annotate_all(
    corpus: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
) -> Result<Vec<AnnotatedSentence>, MatchError> {
    let per_article: Vec<Vec<AnnotatedSentence>> = corpus
        .articles()
        .par_iter()
        .map(|a| {
            segment_article(a, segmenter)
                .into_iter()
                .map(|s| annotate_sentence(s, &a.language, annotator))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(per_article.into_iter().flatten().collect())
}

fn run(
    target: &Corpus,
    source: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
    provider: &dyn EmbeddingProvider,
    config: &MatchConfig,
) -> Result<PipelineOutput, MatchError> {
    let target_sentences = annotate_all(target, segmenter, annotator)?;
    let (source_sentences, source_kept): (Vec<Sentence>, Vec<Sentence>) = if config.filter_sources {
        let annotated = annotate_all(source, segmenter, annotator)?;
        let kept = annotated.iter().filter(|s| s.eligible).map(|s| s.sentence.clone()).collect();
        (annotated.into_iter().map(|s| s.sentence).collect(), kept)
    } else {
        let all: Vec<Sentence> =
            source.articles().par_iter().flat_map_iter(|a| segment_article(a, segmenter)).collect();
        (all.clone(), all)
    };

    let target_entries = target_sentences.iter().filter(|s| s.eligible).map(|s| {
        let article = target.get(&s.sentence.article_id).expect("sentence comes from corpus");
        BlockEntry::new(s.sentence.key(), article.timestamp())
    });
    let source_entries = source_kept.iter().map(|s| {
        let article = source.get(&s.article_id).expect("sentence comes from corpus");
        BlockEntry::new(s.key(), article.timestamp())
    });
    let blocks = build_date_blocks(target_entries, source_entries);
    log::info!("{} date blocks", blocks.len());

    // Only sentences that take part in some block need a vector.
    let mut texts: BTreeMap<String, &str> = BTreeMap::new();
    let by_key: BTreeMap<String, &str> = target_sentences
        .iter()
        .map(|s| &s.sentence)
        .chain(source_kept.iter())
        .map(|s| (s.key().as_str().to_owned(), s.text.as_str()))
        .collect();
    for block in &blocks {
        for e in block.targets.iter().chain(&block.sources) {
            texts.insert(e.key.as_str().to_owned(), by_key[e.key.as_str()]);
        }
    }
    let keys: Vec<&String> = texts.keys().collect();
    let values: Vec<&str> = texts.values().copied().collect();
    let batch = provider.max_batch().max(1);
    let vectors: Vec<_> = values
        .par_chunks(batch)
        .map(|chunk| embed_batch(chunk, provider))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut store = VectorStore::new(provider.meta().clone());
    for (key, vector) in keys.into_iter().zip(vectors) {
        store.insert(key.clone(), vector)?;
    }

    let search = SearchStats { blocks: blocks.len(), comparisons: blocks.iter().map(|b| b.comparisons()).sum() };
    let raw: Vec<_> = blocks
        .par_iter()
        .map(|b| match_block(b, &store, config.threshold))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let flagged = flag_false_positives(raw);
    let attributed = select_earliest_source(flagged.clone());
    let match_set = MatchSet::from_stages(config.threshold, flagged, &attributed, search);
    log::info!(
        "{} raw pairs, {} after temporal rule, {} attributed",
        match_set.accounting.raw.pairs,
        match_set.accounting.true_matches.pairs,
        match_set.accounting.earliest.pairs
    );

    Ok(PipelineOutput { match_set, target_sentences, source_sentences, store })
}

/// Runs segmentation, eligibility filtering, embedding, same-date blocking,
/// matching, temporal flagging and attribution.
pub fn match_pipeline(
    target: &Corpus,
    source: &Corpus,
    segmenter: &Segmenter,
    annotator: &Annotator,
    provider: &dyn EmbeddingProvider,
    config: &MatchConfig,
) -> Result<PipelineOutput, MatchError> {
    if target.role() != Role::Target {
        return Err(MatchError::RoleMismatch { expected: Role::Target, found: target.role() });
    }
    if source.role() != Role::Source {
        return Err(MatchError::RoleMismatch { expected: Role::Source, found: source.role() });
    }
    if !(config.threshold > 0.0 && config.threshold < 1.0) {
        return Err(MatchError::InvalidThreshold(config.threshold));
    }
    if config.parallelism == 0 {
        return Err(MatchError::InvalidParallelism);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| MatchError::ThreadPool(e.to_string()))?;
    pool.install(|| run(target, source, segmenter, annotator, provider, config))
}
