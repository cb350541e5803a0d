//! Article data model and JSONL corpus ingestion.

mod clean;

pub use clean::clean_text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which side of the reuse relation a corpus plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Articles whose provenance is analyzed; timestamped at creation.
    Target,
    /// Incoming agency articles; timestamped at receipt.
    Source,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Target => "target",
            Role::Source => "source",
        })
    }
}

impl FromStr for Role {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "target" => Ok(Role::Target),
            "source" => Ok(Role::Source),
            other => Err(CorpusError::BadRole(other.to_owned())),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("bad timestamp in `{field}`: {value:?} is not RFC 3339")]
    BadTimestamp { field: &'static str, value: String },
    #[error("language {0:?} is not in the configured language set")]
    BadLanguage(String),
    #[error("unknown role {0:?}")]
    BadRole(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("duplicate article id {id:?} at line {line}")]
    DuplicateId { id: String, line: usize },
    #[error("line {line}: article has role {found}, expected {expected}")]
    RoleMismatch { line: usize, expected: Role, found: Role },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CorpusError {
    /// Line number of the offending record, if the error came from a file.
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::AtLine { line, .. }
            | CorpusError::DuplicateId { line, .. }
            | CorpusError::RoleMismatch { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Set of accepted ISO-639-1 language codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageSet(BTreeSet<String>);

impl LanguageSet {
    pub fn new<I, S>(codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        LanguageSet(codes.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, code: &str) -> bool {
        self.0.contains(code)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl Default for LanguageSet {
    /// English target output plus the six source-agency languages.
    fn default() -> Self {
        LanguageSet::new(["en", "it", "pl", "fr", "de", "sr", "hr"])
    }
}

/// One timestamped news item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub id: String,
    pub role: Role,
    pub agency: String,
    pub language: String,
    pub created_at: Option<DateTime<Utc>>,
    pub received_at: Option<DateTime<Utc>>,
    pub headline: String,
    pub body: String,
    pub category: Option<String>,
}

impl Article {
    /// The timestamp that matters for the article's role: creation time for
    /// targets, receipt time for sources.
    pub fn timestamp(&self) -> DateTime<Utc> {
        let ts = match self.role {
            Role::Target => self.created_at,
            Role::Source => self.received_at,
        };
        ts.expect("role timestamp is validated at parse time")
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<String>,
    role: Option<String>,
    agency: Option<String>,
    language: Option<String>,
    created_at: Option<String>,
    received_at: Option<String>,
    headline: Option<String>,
    body: Option<String>,
    category: Option<String>,
}

#[derive(Serialize)]
struct OutRecord<'a> {
    id: &'a str,
    role: Role,
    agency: &'a str,
    language: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_at: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    received_at: Option<String>,
    headline: &'a str,
    body: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    category: Option<&'a str>,
}

/// Formats a timestamp the way corpora are written back out: UTC, six
/// fractional digits, `Z` suffix.
pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Micros, true)
}

/// Serde adapter writing timestamps with [`format_timestamp`].
pub mod micros {
    use chrono::{DateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_timestamp(ts))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        DateTime::parse_from_rfc3339(&raw).map(|ts| ts.with_timezone(&Utc)).map_err(serde::de::Error::custom)
    }
}

fn parse_timestamp(field: &'static str, value: &str) -> Result<DateTime<Utc>, CorpusError> {
    DateTime::parse_from_rfc3339(value)
        .map(|ts| ts.with_timezone(&Utc))
        .map_err(|_| CorpusError::BadTimestamp { field, value: value.to_owned() })
}

/// Builds an [`Article`] from one JSON object, cleaning its headline and body.
pub fn parse_article_record(value: serde_json::Value, languages: &LanguageSet) -> Result<Article, CorpusError> {
    let raw: RawRecord = serde_json::from_value(value)?;

    let id = raw.id.filter(|s| !s.is_empty()).ok_or(CorpusError::MissingField("id"))?;
    let role: Role = raw.role.ok_or(CorpusError::MissingField("role"))?.parse()?;
    let agency = raw.agency.ok_or(CorpusError::MissingField("agency"))?;
    let language = raw.language.ok_or(CorpusError::MissingField("language"))?;
    let body = raw.body.ok_or(CorpusError::MissingField("body"))?;

    let created_at = raw.created_at.as_deref().map(|v| parse_timestamp("created_at", v)).transpose()?;
    let received_at = raw.received_at.as_deref().map(|v| parse_timestamp("received_at", v)).transpose()?;
    match role {
        Role::Target if created_at.is_none() => return Err(CorpusError::MissingField("created_at")),
        Role::Source if received_at.is_none() => return Err(CorpusError::MissingField("received_at")),
        _ => {}
    }

    if !languages.contains(&language) {
        return Err(CorpusError::BadLanguage(language));
    }

    Ok(Article {
        id,
        role,
        agency,
        language,
        created_at,
        received_at,
        headline: clean_text(raw.headline.as_deref().unwrap_or_default()),
        body: clean_text(&body),
        category: raw.category,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub articles: usize,
    pub by_language: BTreeMap<String, usize>,
    pub by_agency: BTreeMap<String, usize>,
}

impl CorpusStats {
    fn compute(articles: &[Article]) -> Self {
        let mut stats = CorpusStats { articles: articles.len(), ..Default::default() };
        for a in articles {
            *stats.by_language.entry(a.language.clone()).or_default() += 1;
            *stats.by_agency.entry(a.agency.clone()).or_default() += 1;
        }
        stats
    }
}

/// An immutable, role-homogeneous collection of articles.
#[derive(Debug, Clone)]
pub struct Corpus {
    role: Role,
    articles: Vec<Article>,
    stats: CorpusStats,
    index: HashMap<String, usize>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role && self.articles == other.articles
    }
}

impl Corpus {
    /// Builds a corpus from already-parsed articles, enforcing role
    /// homogeneity and id uniqueness. Line numbers in errors are 1-based
    /// positions in `articles`.
    pub fn from_articles(role: Role, articles: Vec<Article>) -> Result<Self, CorpusError> {
        let mut index = HashMap::with_capacity(articles.len());
        for (i, a) in articles.iter().enumerate() {
            if a.role != role {
                return Err(CorpusError::RoleMismatch { line: i + 1, expected: role, found: a.role });
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId { id: a.id.clone(), line: i + 1 });
            }
        }
        let stats = CorpusStats::compute(&articles);
        Ok(Corpus { role, articles, stats, index })
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Article> {
        self.index.get(id).map(|&i| &self.articles[i])
    }

    /// Serializes the corpus as JSONL, one article per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for a in &self.articles {
            let rec = OutRecord {
                id: &a.id,
                role: a.role,
                agency: &a.agency,
                language: &a.language,
                created_at: a.created_at.as_ref().map(format_timestamp),
                received_at: a.received_at.as_ref().map(format_timestamp),
                headline: &a.headline,
                body: &a.body,
                category: a.category.as_deref(),
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Parses JSONL text into a corpus of the given role.
pub fn parse_corpus(text: &str, role: Role, languages: &LanguageSet) -> Result<Corpus, CorpusError> {
    let mut articles = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let at_line = |e: CorpusError| CorpusError::AtLine { line: line_no, source: Box::new(e) };
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| at_line(e.into()))?;
        let article = parse_article_record(value, languages).map_err(at_line)?;
        if article.role != role {
            return Err(CorpusError::RoleMismatch { line: line_no, expected: role, found: article.role });
        }
        if seen.insert(article.id.clone(), line_no).is_some() {
            return Err(CorpusError::DuplicateId { id: article.id, line: line_no });
        }
        articles.push(article);
    }
    if articles.is_empty() {
        log::warn!("{role} corpus is empty");
    }
    Corpus::from_articles(role, articles)
}

/// Loads a JSONL corpus file.
pub fn load_corpus(path: &Path, role: Role, languages: &LanguageSet) -> Result<Corpus, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_owned(), source })?;
    parse_corpus(&text, role, languages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn langs() -> LanguageSet {
        LanguageSet::default()
    }

    #[test]
    fn parses_well_formed_target() {
        let a = parse_article_record(
            json!({"id":"a1","role":"target","agency":"STA","language":"en",
                   "created_at":"2023-10-07T08:15:00.000001Z","headline":"H","body":"B."}),
            &langs(),
        )
        .unwrap();
        assert_eq!(a.id, "a1");
        assert_eq!(a.role, Role::Target);
        assert_eq!(format_timestamp(&a.timestamp()), "2023-10-07T08:15:00.000001Z");
        assert_eq!(a.body, "B.");
    }

    #[test]
    fn offsets_are_normalized_to_utc() {
        let a = parse_article_record(
            json!({"id":"s","role":"source","agency":"ANSA","language":"it",
                   "received_at":"2023-10-07T01:30:00+02:00","body":"x"}),
            &langs(),
        )
        .unwrap();
        assert_eq!(format_timestamp(&a.timestamp()), "2023-10-06T23:30:00.000000Z");
    }

    #[test]
    fn target_without_created_at() {
        let err = parse_article_record(
            json!({"id":"a1","role":"target","agency":"STA","language":"en","headline":"H","body":"B."}),
            &langs(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::MissingField("created_at")));
    }

    #[test]
    fn bad_timestamp_and_language() {
        let err = parse_article_record(
            json!({"id":"a1","role":"target","agency":"STA","language":"en",
                   "created_at":"07/10/2023","body":"B."}),
            &langs(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::BadTimestamp { field: "created_at", .. }));

        let err = parse_article_record(
            json!({"id":"a1","role":"target","agency":"STA","language":"sl",
                   "created_at":"2023-10-07T08:15:00Z","body":"B."}),
            &langs(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::BadLanguage(ref l) if l == "sl"));
    }

    #[test]
    fn headline_and_body_are_cleaned() {
        let a = parse_article_record(
            json!({"id":"a1","role":"target","agency":"STA","language":"en",
                   "created_at":"2023-10-07T08:15:00Z","headline":"<b>Big</b> news",
                   "body":"<p>Write to x@y.org.</p>"}),
            &langs(),
        )
        .unwrap();
        assert_eq!(a.headline, "Big news");
        assert_eq!(a.body, "Write to .");
    }

    fn line(id: &str) -> String {
        format!(
            r#"{{"id":"{id}","role":"target","agency":"STA","language":"en","created_at":"2023-10-07T08:15:00Z","headline":"H","body":"B."}}"#
        )
    }

    #[test]
    fn loads_three_articles() {
        let text = [line("a1"), line("a2"), String::new(), line("a3")].join("\n");
        let c = parse_corpus(&text, Role::Target, &langs()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.stats().by_language["en"], 3);
        assert_eq!(c.stats().by_agency["STA"], 3);
        assert!(c.get("a2").is_some());
    }

    #[test]
    fn duplicate_ids_rejected_with_line() {
        let text = [line("a1"), line("a2"), line("a1")].join("\n");
        let err = parse_corpus(&text, Role::Target, &langs()).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId { ref id, line: 3 } if id == "a1"));
    }

    #[test]
    fn record_errors_carry_line_numbers() {
        let text = [line("a1"), "{not json".to_owned()].join("\n");
        let err = parse_corpus(&text, Role::Target, &langs()).unwrap_err();
        assert_eq!(err.line(), Some(2));
    }

    #[test]
    fn empty_file_is_valid() {
        let c = parse_corpus("", Role::Source, &langs()).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn role_mismatch() {
        let err = parse_corpus(&line("a1"), Role::Source, &langs()).unwrap_err();
        assert!(matches!(err, CorpusError::RoleMismatch { line: 1, .. }));
    }

    #[test]
    fn jsonl_round_trip() {
        let text = [line("a1"), line("a2")].join("\n");
        let c = parse_corpus(&text, Role::Target, &langs()).unwrap();
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let again = parse_corpus(std::str::from_utf8(&buf).unwrap(), Role::Target, &langs()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.stats(), again.stats());
    }
}
