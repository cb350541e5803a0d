use std::collections::BTreeMap;

use super::{MatchRecord, MatchStatus};

/// Marks a record `FalsePositive` when the target article was created
/// strictly before the source article was received; everything else is
/// `True`. Equal timestamps are kept.
pub fn flag_false_positives(mut records: Vec<MatchRecord>) -> Vec<MatchRecord> {
    for r in &mut records {
        r.status =
            if r.target_created_at < r.source_received_at { MatchStatus::FalsePositive } else { MatchStatus::True };
    }
    records
}

/// For each target sentence keeps only the records pointing at the earliest
/// received source article (ties broken by the smaller article id) and marks
/// them `EarliestAttributed`. Several sentences of that article may survive.
///
/// `FalsePositive` records are not candidates and are dropped.
pub fn select_earliest_source(records: Vec<MatchRecord>) -> Vec<MatchRecord> {
    let mut groups: BTreeMap<String, Vec<MatchRecord>> = BTreeMap::new();
    for r in records.into_iter().filter(|r| r.status != MatchStatus::FalsePositive) {
        groups.entry(r.target_key.as_str().to_owned()).or_default().push(r);
    }

    let mut out = Vec::new();
    for (_, group) in groups {
        let winner = group
            .iter()
            .map(|r| (r.source_received_at, r.source_key.article_id()))
            .min()
            .map(|(ts, id)| (ts, id.to_owned()))
            .expect("groups are non-empty");
        out.extend(
            group
                .into_iter()
                .filter(|r| r.source_received_at == winner.0 && r.source_key.article_id() == winner.1)
                .map(|mut r| {
                    r.status = MatchStatus::EarliestAttributed;
                    r
                }),
        );
    }
    out.sort_by(|a, b| (&a.target_key, &a.source_key).cmp(&(&b.target_key, &b.source_key)));
    out
}
