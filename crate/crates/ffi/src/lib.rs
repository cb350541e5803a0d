//! C ABI over the `newsreuse` pipeline.
//!
//! Every fallible function returns an [`NrStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`nr_last_error`]. Corpora and match sets are opaque handles that
//! the caller releases with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use newsreuse::analysis::{chi_square_independence, position_bin, AnalysisError, ContingencyTable};
use newsreuse::cli::{self, CliError};
use newsreuse::config::Config;
use newsreuse::corpus::{self, Corpus, LanguageSet, Role};
use newsreuse::embedding::{cosine_similarity, hash_embed, HashEmbedder, Vector};
use newsreuse::linguistic::{Annotator, Segmenter};
use newsreuse::matcher::{match_pipeline, MatchConfig, MatchSet, StageCounts};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    MissingInput = 3,
    Parse = 4,
    Provider = 5,
    Invariant = 6,
    InvalidArgument = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrRole {
    Target = 0,
    Source = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrPositionBin {
    Beginning = 0,
    Middle = 1,
    End = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NrChiSquare {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NrStageCounts {
    pub target_articles: u64,
    pub source_articles: u64,
    pub target_sentences: u64,
    pub source_sentences: u64,
    pub pairs: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NrAccounting {
    pub raw: NrStageCounts,
    pub true_matches: NrStageCounts,
    pub earliest: NrStageCounts,
    pub false_positives: NrStageCounts,
}

/// Opaque corpus handle.
pub struct NrCorpus(Corpus);

/// Opaque match set handle.
pub struct NrMatchSet(MatchSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(NrStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(NrStatus::NullArgument, format!("{what} is null"))
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e.exit_code() {
            cli::EXIT_MISSING_INPUT => NrStatus::MissingInput,
            cli::EXIT_PARSE => NrStatus::Parse,
            cli::EXIT_PROVIDER => NrStatus::Provider,
            _ => NrStatus::Invariant,
        };
        Failure(status, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure(NrStatus::InvalidArgument, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NrStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside newsreuse".into());
            NrStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(NrStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn stage(s: &StageCounts) -> NrStageCounts {
    NrStageCounts {
        target_articles: s.target_articles as u64,
        source_articles: s.source_articles as u64,
        target_sentences: s.target_sentences as u64,
        source_sentences: s.source_sentences as u64,
        pairs: s.pairs as u64,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn nr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cleans raw article text. The result is freed with [`nr_string_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn nr_clean_text(text: *const c_char, out: *mut *mut c_char) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let cleaned = corpus::clean_text(str_arg(text, "text")?);
        *out = CString::new(cleaned).map_err(|e| Failure(NrStatus::Invariant, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Writes the `dim`-dimensional hash embedding of `text` into `out`, which
/// must hold at least `dim` floats.
///
/// # Safety
/// `text` must be NUL-terminated and `out` must point to `out_len` floats.
#[no_mangle]
pub unsafe extern "C" fn nr_hash_embed(text: *const c_char, dim: usize, out: *mut f32, out_len: usize) -> NrStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        if out_len < dim {
            return Err(Failure(NrStatus::BufferTooSmall, format!("buffer holds {out_len} floats, need {dim}")));
        }
        let v = hash_embed(text, dim).map_err(|e| Failure(NrStatus::InvalidArgument, e.to_string()))?;
        std::slice::from_raw_parts_mut(out, dim).copy_from_slice(v.values());
        Ok(())
    })
}

/// Cosine similarity of two vectors of length `len`.
///
/// # Safety
/// `a` and `b` must each point to `len` floats.
#[no_mangle]
pub unsafe extern "C" fn nr_cosine(a: *const f32, b: *const f32, len: usize, out: *mut f32) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let a = Vector::new(slice_arg(a, len, "a")?.to_vec());
        let b = Vector::new(slice_arg(b, len, "b")?.to_vec());
        *out = cosine_similarity(&a, &b).map_err(|e| Failure(NrStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}

/// Chi-square test of independence on a row-major `rows` x `cols` table.
///
/// # Safety
/// `counts` must point to `rows * cols` values.
#[no_mangle]
pub unsafe extern "C" fn nr_chi_square(
    counts: *const u64,
    rows: usize,
    cols: usize,
    out: *mut NrChiSquare,
) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let n =
            rows.checked_mul(cols).ok_or_else(|| Failure(NrStatus::InvalidArgument, "table size overflows".into()))?;
        let flat = slice_arg(counts, n, "counts")?;
        let grid: Vec<Vec<u64>> =
            if cols == 0 { vec![Vec::new(); rows] } else { flat.chunks(cols).map(<[u64]>::to_vec).collect() };
        let r = chi_square_independence(&ContingencyTable::from_counts(grid)?)?;
        *out = NrChiSquare { statistic: r.statistic, df: r.df, p_value: r.p_value };
        Ok(())
    })
}

/// Position bin of sentence `idx` in an article of `n` sentences.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_position_bin(idx: usize, n: usize, out: *mut NrPositionBin) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = match position_bin(idx, n)?.index() {
            0 => NrPositionBin::Beginning,
            1 => NrPositionBin::Middle,
            _ => NrPositionBin::End,
        };
        Ok(())
    })
}

/// Loads a JSONL corpus. `languages` is a comma-separated list of language
/// codes, or NULL for the default set.
///
/// # Safety
/// `path` and a non-NULL `languages` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nr_corpus_load(
    path: *const c_char,
    role: NrRole,
    languages: *const c_char,
    out: *mut *mut NrCorpus,
) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        let languages = if languages.is_null() {
            LanguageSet::default()
        } else {
            LanguageSet::new(str_arg(languages, "languages")?.split(',').map(str::trim).filter(|s| !s.is_empty()))
        };
        let role = match role {
            NrRole::Target => Role::Target,
            NrRole::Source => Role::Source,
        };
        let c = corpus::load_corpus(Path::new(path), role, &languages).map_err(CliError::from)?;
        *out = Box::into_raw(Box::new(NrCorpus(c)));
        Ok(())
    })
}

/// Number of articles in the corpus; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nr_corpus_len(corpus: *const NrCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `corpus` must be NULL or a handle from [`nr_corpus_load`], freed once.
#[no_mangle]
pub unsafe extern "C" fn nr_corpus_free(corpus: *mut NrCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Runs matching with the built-in hash embedder and heuristic tagger.
///
/// # Safety
/// `target` and `source` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nr_match_run(
    target: *const NrCorpus,
    source: *const NrCorpus,
    threshold: f32,
    dim: usize,
    parallelism: usize,
    out: *mut *mut NrMatchSet,
) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let target = target.as_ref().ok_or_else(|| Failure::null("target"))?;
        let source = source.as_ref().ok_or_else(|| Failure::null("source"))?;
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Failure(NrStatus::InvalidArgument, format!("threshold {threshold} is outside (0, 1)")));
        }
        let config = MatchConfig { threshold, parallelism: parallelism.max(1), filter_sources: false };
        let output = match_pipeline(
            &target.0,
            &source.0,
            &Segmenter::builtin(),
            &Annotator::default(),
            &HashEmbedder::new(dim),
            &config,
        )
        .map_err(CliError::from)?;
        *out = Box::into_raw(Box::new(NrMatchSet(output.match_set)));
        Ok(())
    })
}

/// Number of raw pairs, false positives included; 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nr_match_set_len(set: *const NrMatchSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.records.len())
}

/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nr_match_set_accounting(set: *const NrMatchSet, out: *mut NrAccounting) -> NrStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let a = &set.as_ref().ok_or_else(|| Failure::null("set"))?.0.accounting;
        *out = NrAccounting {
            raw: stage(&a.raw),
            true_matches: stage(&a.true_matches),
            earliest: stage(&a.earliest),
            false_positives: stage(&a.false_positives),
        };
        Ok(())
    })
}

/// Writes every record as one JSON object per line.
///
/// # Safety
/// `set` must be a live handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nr_match_set_write_jsonl(set: *const NrMatchSet, path: *const c_char) -> NrStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| Failure::null("set"))?;
        let path = str_arg(path, "path")?;
        let io = |e: std::io::Error| Failure(NrStatus::Invariant, format!("{path}: {e}"));
        let file = File::create(path).map_err(io)?;
        set.0.write_jsonl(BufWriter::new(file)).map_err(io)
    })
}

/// # Safety
/// `set` must be NULL or a handle from [`nr_match_run`], freed once.
#[no_mangle]
pub unsafe extern "C" fn nr_match_set_free(set: *mut NrMatchSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Runs the full pipeline from a JSON config file and writes every artifact.
/// Returns the command-line exit code (0 on success).
///
/// # Safety
/// `config_path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nr_run_config(config_path: *const c_char) -> c_int {
    let mut code = cli::EXIT_OK;
    let status = guard(|| {
        let path = str_arg(config_path, "config_path")?;
        let result = Config::load(Path::new(path))
            .map_err(CliError::from)
            .and_then(|c| c.validate().map(|()| c).map_err(CliError::from))
            .and_then(|c| cli::run(&c));
        if let Err(e) = result {
            code = e.exit_code();
            return Err(e.into());
        }
        Ok(())
    });
    match status {
        NrStatus::Ok => cli::EXIT_OK,
        NrStatus::NullArgument | NrStatus::InvalidUtf8 => cli::EXIT_MISSING_INPUT,
        NrStatus::Panic => cli::EXIT_INVARIANT,
        _ => code,
    }
}
