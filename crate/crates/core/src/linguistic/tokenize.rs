fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '’')
}

/// Splits sentence text into word tokens (maximal runs of letters and digits,
/// keeping apostrophes that sit between two such characters) and
/// single-character punctuation tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut word_start: Option<usize> = None;
    let mut chars = text.char_indices().peekable();

    while let Some((pos, c)) = chars.next() {
        if is_word_char(c) {
            word_start.get_or_insert(pos);
            continue;
        }
        if is_apostrophe(c) && word_start.is_some() {
            if let Some(&(_, next)) = chars.peek() {
                if is_word_char(next) {
                    continue;
                }
            }
        }
        if let Some(start) = word_start.take() {
            tokens.push(&text[start..pos]);
        }
        if !c.is_whitespace() {
            tokens.push(&text[pos..pos + c.len_utf8()]);
        }
    }
    if let Some(start) = word_start {
        tokens.push(&text[start..]);
    }
    tokens
}

/// Whether a token is punctuation (or another symbol) rather than a word.
pub fn is_punctuation(token: &str) -> bool {
    token.chars().next().is_some_and(|c| !is_word_char(c))
}

/// Number of word tokens, which is what the length rule counts.
pub fn count_words(tokens: &[&str]) -> usize {
    tokens.iter().filter(|t| !is_punctuation(t)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_tokens() {
        let t = tokenize("Follow us also on:");
        assert_eq!(t, ["Follow", "us", "also", "on", ":"]);
        assert_eq!(count_words(&t), 4);
    }

    #[test]
    fn internal_apostrophes() {
        assert_eq!(tokenize("don't stop"), ["don't", "stop"]);
        assert_eq!(tokenize("the agency’s report"), ["the", "agency’s", "report"]);
        assert_eq!(tokenize("'quoted' word"), ["'", "quoted", "'", "word"]);
        assert_eq!(tokenize("players'"), ["players", "'"]);
    }

    #[test]
    fn times_split_on_colons() {
        // 7 : 30am to 2pm : John Doe
        let t = tokenize("7:30am to 2pm: John Doe");
        assert_eq!(t, ["7", ":", "30am", "to", "2pm", ":", "John", "Doe"]);
        assert_eq!(count_words(&t), 6);
    }

    #[test]
    fn unicode_letters() {
        assert_eq!(tokenize("Šef je rekao, đaci"), ["Šef", "je", "rekao", ",", "đaci"]);
        assert!(tokenize("").is_empty());
    }
}
