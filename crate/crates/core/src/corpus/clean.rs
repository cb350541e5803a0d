//! Markup and contact-detail scrubbing for raw article text.

use std::sync::LazyLock;

use regex::{Captures, Regex};

static TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^>]*>").unwrap());

static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}").unwrap());

// Optional `+`, then at least seven digits. Consecutive digits may be separated
// by one space, dash or dot, or by a parenthesis (optionally padded by a space
// on its outer side), which covers `+386 1 234 5678` and `(01) 234-5678`.
static PHONE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\+?\(?[0-9](?:(?:[ .\-]|\) ?| ?\()?[0-9]){6,}").unwrap());

// Calendar dates that the phone pattern would otherwise swallow.
static DATE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?:[0-9]{4}-[0-9]{2}-[0-9]{2}|[0-9]{1,2}[./][0-9]{1,2}[./][0-9]{4}|[0-9]{4}[./][0-9]{1,2}[./][0-9]{1,2})$",
    )
    .unwrap()
});

static SPACES: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+").unwrap());

fn clean_once(raw: &str) -> String {
    let text = TAG.replace_all(raw, " ");
    let text = EMAIL.replace_all(&text, "");
    let text = PHONE.replace_all(&text, |caps: &Captures<'_>| {
        let span = &caps[0];
        if DATE.is_match(span) {
            span.to_owned()
        } else {
            String::new()
        }
    });
    let text = SPACES.replace_all(&text, " ");
    text.trim().to_owned()
}

/// Strips HTML tags, e-mail addresses and phone numbers, then normalizes
/// whitespace.
///
/// The rules are applied in order (tags, e-mails, phones, whitespace collapse,
/// trim). A removal can bring two fragments together that form a new match
/// (two digit groups that were separated by a tag, for instance), so the pass
/// is repeated until the text stops changing. Every pass that changes the
/// text shortens it, which bounds the loop.
pub fn clean_text(raw: &str) -> String {
    let mut current = clean_once(raw);
    loop {
        let next = clean_once(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strips_tags() {
        assert_eq!(clean_text("<p>Talks resumed.</p>"), "Talks resumed.");
        assert_eq!(clean_text("a<br/>b"), "a b");
    }

    #[test]
    fn strips_emails() {
        assert_eq!(clean_text("Contact a.b@agency.example today"), "Contact today");
    }

    #[test]
    fn strips_phone_numbers() {
        assert_eq!(clean_text("Call +386 1 234 5678 now"), "Call now");
        assert_eq!(clean_text("Phone (01) 234-5678."), "Phone .");
        assert_eq!(clean_text("fax 01.234.56.78"), "fax");
    }

    #[test]
    fn keeps_short_numbers_and_dates() {
        assert_eq!(clean_text("On 2023-10-07 at 10:15"), "On 2023-10-07 at 10:15");
        assert_eq!(clean_text("On 07.10.2023, 12,166 people"), "On 07.10.2023, 12,166 people");
        assert_eq!(clean_text("Room 123 456"), "Room 123 456");
    }

    #[test]
    fn empty_input() {
        assert_eq!(clean_text(""), "");
        assert_eq!(clean_text(" \n\t "), "");
    }

    #[test]
    fn digits_joined_by_tag_removal_are_caught() {
        // "12" and "34567" are two spaces apart after the tag pass, then one
        // space apart after collapsing.
        let once = clean_once("x 12<b>34567 y");
        assert_eq!(clean_text("x 12<b>34567 y"), clean_text(&once));
        assert_eq!(clean_text("x 12<b>34567 y"), "x y");
    }

    proptest! {
        #[test]
        fn idempotent(s in "[a-zA-Z0-9 <>@.+()\\-\n]{0,60}") {
            let once = clean_text(&s);
            prop_assert_eq!(clean_text(&once), once);
        }

        #[test]
        fn introduces_only_spaces(s in "\\PC{0,60}") {
            let out = clean_text(&s);
            for c in out.chars() {
                prop_assert!(c == ' ' || s.contains(c));
            }
        }
    }
}
