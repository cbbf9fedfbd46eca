//! Word tokenizer for lexicon matching.

/// A lowercased word with its ordinal position in the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// Lowercases, splits on anything that is not a letter or an apostrophe,
/// strips leading/trailing apostrophes, and drops empty results.
///
/// Internal apostrophes survive so entries like `couldn't` match; hyphens
/// and dashes split.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<Token>| {
        let trimmed = current.trim_matches('\'');
        if !trimmed.is_empty() {
            let position = tokens.len();
            tokens.push(Token {
                surface: trimmed.to_string(),
                position,
            });
        }
        current.clear();
    };
    for ch in text.chars() {
        if ch.is_alphabetic() || ch == '\'' {
            current.extend(ch.to_lowercase());
        } else {
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn hand_tokenization() {
        assert_eq!(
            surfaces("I couldn't\u{2014}wouldn't\u{2014}stop."),
            vec!["i", "couldn't", "wouldn't", "stop"]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn case_folding() {
        assert_eq!(surfaces("Hello, HELLO"), vec!["hello", "hello"]);
    }

    #[test]
    fn hyphens_split_apostrophes_survive() {
        assert_eq!(
            surfaces("rock'n'roll re-entry"),
            vec!["rock'n'roll", "re", "entry"]
        );
    }

    #[test]
    fn outer_apostrophes_stripped() {
        assert_eq!(surfaces("'ello 'tis said'"), vec!["ello", "tis", "said"]);
        // All-apostrophe runs vanish entirely.
        assert!(tokenize("'' ' ''' ").is_empty());
    }

    #[test]
    fn digits_split() {
        assert_eq!(surfaces("room101 is2nd"), vec!["room", "is", "nd"]);
    }

    #[test]
    fn positions_are_ordinal() {
        let tokens = tokenize("one two three");
        let positions: Vec<usize> = tokens.iter().map(|t| t.position).collect();
        assert_eq!(positions, vec![0, 1, 2]);
    }
}
