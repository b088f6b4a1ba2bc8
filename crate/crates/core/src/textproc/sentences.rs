use crate::error::{Error, Result};

/// Lowercased tokens (with their trailing period) that never end a sentence.
const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "etc.", "al.", "et.", "vs.", "cf.", "fig.", "figs.", "eq.", "eqs.", "no.", "nos.", "vol.", "pp.",
    "p.", "ch.", "sec.", "approx.", "resp.", "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.", "inc.", "ltd.",
    "co.", "corp.", "dept.", "univ.", "ca.", "viz.", "ref.", "refs.", "min.", "max.", "avg.", "est.", "jan.", "feb.",
    "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",
];

/// Split an abstract into sentences.
///
/// A sentence ends at `.`, `!` or `?` (optionally followed by closing quotes or
/// brackets) when the next non-space character is an uppercase letter or a
/// digit. Periods ending a known abbreviation or a single-letter initial do not
/// split. Whitespace inside sentences is collapsed to single spaces.
pub fn split_sentences(body: &str) -> Result<Vec<String>> {
    let text = normalize_whitespace(body);
    if text.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut end = i + 1;
            while end < chars.len() && matches!(chars[end], '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}') {
                end += 1;
            }
            let boundary = end + 1 < chars.len()
                && chars[end] == ' '
                && (chars[end + 1].is_uppercase() || chars[end + 1].is_ascii_digit());
            if boundary && !(c == '.' && is_abbreviation(&chars[start..=i])) {
                let sentence: String = chars[start..end].iter().collect();
                sentences.push(sentence.trim().to_string());
                start = end + 1;
                i = start;
                continue;
            }
        }
        i += 1;
    }
    let tail: String = chars[start..].iter().collect();
    let tail = tail.trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    Ok(sentences)
}

pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// `span` runs from the sentence start through the period.
fn is_abbreviation(span: &[char]) -> bool {
    let word_start = span
        .iter()
        .rposition(|c| c.is_whitespace() || *c == '(')
        .map(|p| p + 1)
        .unwrap_or(0);
    let word = &span[word_start..];
    // single-letter initials such as "J." in "J. Smith"
    if word.len() == 2 && word[0].is_uppercase() {
        return true;
    }
    let word: String = word.iter().collect::<String>().to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_terminal_periods() {
        assert_eq!(split_sentences("A b. C d.").unwrap(), vec!["A b.", "C d."]);
    }

    #[test]
    fn no_terminator() {
        assert_eq!(split_sentences("One sentence only").unwrap(), vec!["One sentence only"]);
    }

    #[test]
    fn abbreviation_does_not_split() {
        assert_eq!(
            split_sentences("We use e.g. graphs. They work.").unwrap(),
            vec!["We use e.g. graphs.", "They work."]
        );
        assert_eq!(
            split_sentences("As shown by Smith et al. The result holds.").unwrap(),
            vec!["As shown by Smith et al. The result holds."]
        );
        assert_eq!(
            split_sentences("See Fig. 2 for details. Done.").unwrap(),
            vec!["See Fig. 2 for details.", "Done."]
        );
    }

    #[test]
    fn initials_do_not_split() {
        assert_eq!(
            split_sentences("Work by J. Smith is cited. Next.").unwrap(),
            vec!["Work by J. Smith is cited.", "Next."]
        );
    }

    #[test]
    fn question_exclamation_and_digits() {
        assert_eq!(
            split_sentences("Does it work? Yes! 42 cases pass.").unwrap(),
            vec!["Does it work?", "Yes!", "42 cases pass."]
        );
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(
            split_sentences("Values near 3.5 or so. end").unwrap(),
            vec!["Values near 3.5 or so. end"]
        );
    }

    #[test]
    fn whitespace_is_collapsed() {
        assert_eq!(
            split_sentences("  First\n\tline.\n Second   line. ").unwrap(),
            vec!["First line.", "Second line."]
        );
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(split_sentences("  \n "), Err(Error::EmptyDocument)));
    }
}
