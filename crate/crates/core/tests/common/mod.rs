//! Synthetic corpora with planted reuse.
#![allow(dead_code)]

use std::path::Path;

use chrono::{DateTime, TimeZone, Utc};
use newsreuse::corpus::{parse_corpus, Corpus, LanguageSet, Role};
use rand::Rng;
use serde_json::json;

pub fn at(day: u32, hour: u32, minute: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 3, day, hour, minute, 0).unwrap()
}

fn word<R: Rng>(rng: &mut R) -> String {
    const CONSONANTS: &[u8] = b"bcdfghjklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let syllables = rng.gen_range(2..=4);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        w.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
    }
    w
}

/// Eligible sentence of invented words around one verb, e.g.
/// "Bazo kelitu rano announced pefuda limo sarute dako."
pub fn sentence<R: Rng>(rng: &mut R) -> String {
    let mut words: Vec<String> = (0..8).map(|_| word(rng)).collect();
    words.insert(3, "announced".to_owned());
    let mut s = words.join(" ");
    s[..1].make_ascii_uppercase();
    s.push('.');
    s
}

/// Too short to be eligible.
pub fn short_sentence<R: Rng>(rng: &mut R) -> String {
    let mut s = format!("{} {}", word(rng), word(rng));
    s[..1].make_ascii_uppercase();
    s.push('.');
    s
}

#[derive(Debug, Clone)]
pub struct Doc {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub sentences: Vec<String>,
    pub language: String,
}

impl Doc {
    pub fn new(id: &str, timestamp: DateTime<Utc>, sentences: Vec<String>) -> Self {
        Doc { id: id.to_owned(), timestamp, sentences, language: "en".to_owned() }
    }

    pub fn body(&self) -> String {
        self.sentences.join(" ")
    }
}

pub fn jsonl(role: Role, docs: &[Doc]) -> String {
    let mut out = String::new();
    for d in docs {
        let ts = d.timestamp.to_rfc3339();
        let mut v = json!({
            "id": d.id,
            "role": role.to_string(),
            "agency": if role == Role::Target { "STA" } else { "FA" },
            "language": d.language,
            "headline": format!("Headline {}", d.id),
            "body": d.body(),
        });
        let field = if role == Role::Target { "created_at" } else { "received_at" };
        v[field] = json!(ts);
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn corpus(role: Role, docs: &[Doc]) -> Corpus {
    parse_corpus(&jsonl(role, docs), role, &LanguageSet::default()).unwrap()
}

pub fn write_corpus(path: &Path, role: Role, docs: &[Doc]) {
    std::fs::write(path, jsonl(role, docs)).unwrap();
}

/// The two rules in one fixture: target `t-late` copies a sentence carried by
/// sources `a` (08:00) and `b` (09:00); target `t-early` copies a sentence
/// from `c` before `c` was received.
pub struct TemporalFixture {
    pub targets: Vec<Doc>,
    pub sources: Vec<Doc>,
}

pub fn temporal_fixture<R: Rng>(rng: &mut R) -> TemporalFixture {
    let shared = sentence(rng);
    let leaked = sentence(rng);
    let sources = vec![
        Doc::new("a", at(2, 8, 0), vec![sentence(rng), shared.clone(), sentence(rng)]),
        Doc::new("b", at(2, 9, 0), vec![shared.clone(), sentence(rng)]),
        Doc::new("c", at(2, 12, 0), vec![sentence(rng), leaked.clone()]),
    ];
    let targets = vec![
        Doc::new("t-late", at(2, 10, 0), vec![sentence(rng), sentence(rng), shared]),
        Doc::new("t-early", at(2, 11, 0), vec![leaked, sentence(rng)]),
    ];
    TemporalFixture { targets, sources }
}

/// `n_targets` target articles of which the first `n_reused` each copy one
/// sentence from a distinct source article received an hour earlier.
pub struct RateFixture {
    pub targets: Vec<Doc>,
    pub sources: Vec<Doc>,
}

pub fn rate_fixture<R: Rng>(rng: &mut R, n_targets: usize, n_reused: usize, n_sources: usize) -> RateFixture {
    assert!(n_reused <= n_targets && n_reused <= n_sources);
    let sources: Vec<Doc> = (0..n_sources)
        .map(|i| Doc::new(&format!("s{i:02}"), at(5, 8, i as u32), (0..4).map(|_| sentence(rng)).collect()))
        .collect();
    let targets = (0..n_targets)
        .map(|i| {
            let mut sents: Vec<String> = (0..5).map(|_| sentence(rng)).collect();
            if i < n_reused {
                sents[2] = sources[i].sentences[1].clone();
            }
            Doc::new(&format!("t{i:02}"), at(5, 9, i as u32), sents)
        })
        .collect();
    RateFixture { targets, sources }
}
