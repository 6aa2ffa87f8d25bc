use serde::{Deserialize, Serialize};

/// Classification of a whitespace-delimited token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Plain,
    Hashtag,
    Mention,
    Url,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Token as written. Plain tokens have leading/trailing punctuation
    /// stripped; URLs have trailing sentence punctuation stripped.
    pub text: String,
    pub kind: TokenKind,
}

impl Token {
    /// Case-folded identity of the token: hashtag and mention bodies
    /// without their sigil, plain tokens lowered, URLs verbatim.
    pub fn folded(&self) -> String {
        match self.kind {
            TokenKind::Plain => self.text.to_lowercase(),
            TokenKind::Hashtag | TokenKind::Mention => sigil_body(&self.text).to_lowercase(),
            TokenKind::Url => self.text.clone(),
        }
    }

    /// Folded form that stays distinct across kinds (`#win` vs `win`).
    pub(crate) fn word_key(&self) -> String {
        match self.kind {
            TokenKind::Plain | TokenKind::Url => self.folded(),
            TokenKind::Hashtag => format!("#{}", self.folded()),
            TokenKind::Mention => format!("@{}", self.folded()),
        }
    }
}

/// Ordered tokens of one post with per-kind views.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenList {
    pub tokens: Vec<Token>,
}

impl TokenList {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    fn of_kind(&self, kind: TokenKind) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.kind == kind)
    }

    /// Plain tokens in original case.
    pub fn plain(&self) -> Vec<&str> {
        self.of_kind(TokenKind::Plain).map(|t| t.text.as_str()).collect()
    }

    pub fn plain_folded(&self) -> Vec<String> {
        self.of_kind(TokenKind::Plain).map(Token::folded).collect()
    }

    /// Hashtag bodies, `#` stripped and case-folded, with repetition.
    pub fn hashtags(&self) -> Vec<String> {
        self.of_kind(TokenKind::Hashtag).map(Token::folded).collect()
    }

    /// Mention bodies, `@` stripped and case-folded, with repetition.
    pub fn mentions(&self) -> Vec<String> {
        self.of_kind(TokenKind::Mention).map(Token::folded).collect()
    }

    pub fn urls(&self) -> Vec<&str> {
        self.of_kind(TokenKind::Url).map(|t| t.text.as_str()).collect()
    }

    pub fn folded(&self) -> Vec<String> {
        self.tokens.iter().map(Token::folded).collect()
    }

    pub fn count(&self, kind: TokenKind) -> usize {
        self.of_kind(kind).count()
    }
}

pub(crate) fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{2010}'..='\u{2027}' | '\u{2030}'..='\u{205E}'
            | '\u{00A1}' | '\u{00AB}' | '\u{00BB}' | '\u{00BF}'
            | '\u{3001}' | '\u{3002}')
}

fn is_tag_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn sigil_body(s: &str) -> &str {
    let rest = &s[1..];
    let end = rest
        .char_indices()
        .find(|&(_, c)| !is_tag_char(c))
        .map_or(rest.len(), |(i, _)| i);
    &rest[..end]
}

fn starts_with_sigil(s: &str, sigil: char) -> bool {
    let mut chars = s.chars();
    chars.next() == Some(sigil) && chars.next().is_some_and(is_tag_char)
}

pub(crate) fn is_url_like(s: &str) -> bool {
    let head: String = s.chars().take(8).collect::<String>().to_ascii_lowercase();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

const URL_TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '"', '\''];

/// Split on Unicode whitespace and classify each piece.
///
/// Order of tests: URL, hashtag, mention, plain. A piece that is all
/// punctuation is not a token.
pub fn tokenize(text: &str) -> TokenList {
    let tokens = text
        .split_whitespace()
        .filter_map(|raw| {
            if is_url_like(raw) {
                let url = raw.trim_end_matches(URL_TRAILING);
                return Some(Token {
                    text: url.to_string(),
                    kind: TokenKind::Url,
                });
            }
            if starts_with_sigil(raw, '#') {
                return Some(Token {
                    text: format!("#{}", sigil_body(raw)),
                    kind: TokenKind::Hashtag,
                });
            }
            if starts_with_sigil(raw, '@') {
                return Some(Token {
                    text: format!("@{}", sigil_body(raw)),
                    kind: TokenKind::Mention,
                });
            }
            let word = raw.trim_matches(is_punct);
            (!word.is_empty()).then(|| Token {
                text: word.to_string(),
                kind: TokenKind::Plain,
            })
        })
        .collect();
    TokenList { tokens }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_tweet() {
        let t = tokenize("RT @bob check #Win http://x.co");
        assert_eq!(t.plain(), vec!["RT", "check"]);
        assert_eq!(t.mentions(), vec!["bob"]);
        assert_eq!(t.hashtags(), vec!["win"]);
        assert_eq!(t.urls(), vec!["http://x.co"]);
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n ").is_empty());
    }

    #[test]
    fn repeated_words() {
        let t = tokenize("win win win");
        assert_eq!(t.plain().len(), 3);
        let unique: std::collections::BTreeSet<_> = t.plain_folded().into_iter().collect();
        assert_eq!(unique.len(), 1);
    }

    #[test]
    fn punctuation_handling() {
        let t = tokenize("\"Hello,\" don't -- (stop). www.example.com/a, #tag! @you:");
        assert_eq!(t.plain(), vec!["Hello", "don't", "stop"]);
        assert_eq!(t.urls(), vec!["www.example.com/a"]);
        assert_eq!(t.hashtags(), vec!["tag"]);
        assert_eq!(t.mentions(), vec!["you"]);
    }

    #[test]
    fn bare_sigils_are_not_tags() {
        let t = tokenize("# @ #! @.");
        assert!(t.is_empty());
        let t = tokenize("#_x @_y");
        assert_eq!(t.hashtags(), vec!["_x"]);
        assert_eq!(t.mentions(), vec!["_y"]);
    }

    #[test]
    fn unicode_whitespace_and_case() {
        let t = tokenize("Ünïcode\u{3000}#ÉTÉ\u{00A0}HTTPS://A.B/c");
        assert_eq!(t.plain_folded(), vec!["ünïcode"]);
        assert_eq!(t.hashtags(), vec!["été"]);
        assert_eq!(t.urls(), vec!["HTTPS://A.B/c"]);
    }
}
