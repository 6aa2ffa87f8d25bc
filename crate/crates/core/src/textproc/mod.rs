//! Shared text substrate: tokenization, stemming, URL handling.

mod porter;
mod tokenize;
mod urls;

use std::collections::BTreeSet;

pub use porter::porter_stem;
pub use tokenize::{tokenize, Token, TokenKind, TokenList};
pub use urls::{
    domain_matches, expand_url, extract_domain, ShortenerList, UrlResolver, DEFAULT_SHORTENERS,
    MAX_EXPANSION_HOPS,
};

use crate::corpus::{Corpus, Post};

/// Porter stems of every case-folded plain token in the corpus.
pub fn unique_stems(corpus: &Corpus) -> BTreeSet<String> {
    corpus
        .posts()
        .iter()
        .flat_map(|p| tokenize(&p.text).plain_folded())
        .map(|w| porter_stem(&w))
        .collect()
}

/// Distinct case-folded hashtag bodies in the corpus.
pub fn unique_hashtags(corpus: &Corpus) -> BTreeSet<String> {
    corpus
        .posts()
        .iter()
        .flat_map(|p| tokenize(&p.text).hashtags())
        .collect()
}

/// URLs of a post: the pre-extracted list when present, else the URL
/// tokens of its text.
pub fn post_urls(post: &Post) -> Vec<String> {
    match &post.urls {
        Some(urls) => urls.clone(),
        None => tokenize(&post.text)
            .urls()
            .into_iter()
            .map(str::to_string)
            .collect(),
    }
}

/// Whole-token keyword matcher over plain tokens and hashtag bodies.
///
/// Multi-word keywords match a contiguous run of plain tokens; single
/// words also match a hashtag body. Mentions and URLs never match.
#[derive(Debug, Clone)]
pub struct KeywordMatcher {
    keywords: Vec<Vec<String>>,
}

impl KeywordMatcher {
    pub fn new<S: AsRef<str>>(keywords: &[S]) -> Self {
        let keywords = keywords
            .iter()
            .map(|k| {
                k.as_ref()
                    .split_whitespace()
                    .map(|w| w.trim_start_matches('#').trim_matches(tokenize::is_punct).to_lowercase())
                    .filter(|w| !w.is_empty())
                    .collect::<Vec<_>>()
            })
            .filter(|k| !k.is_empty())
            .collect();
        KeywordMatcher { keywords }
    }

    pub fn matches(&self, text: &str) -> bool {
        let tokens = tokenize(text);
        // None breaks a phrase run (mention/URL between words).
        let words: Vec<Option<String>> = tokens
            .tokens
            .iter()
            .map(|t| match t.kind {
                TokenKind::Plain => Some(t.folded()),
                _ => None,
            })
            .collect();
        let hashtags: BTreeSet<String> = tokens.hashtags().into_iter().collect();
        self.keywords.iter().any(|kw| {
            (kw.len() == 1 && hashtags.contains(&kw[0]))
                || words.windows(kw.len()).any(|w| {
                    w.iter()
                        .zip(kw)
                        .all(|(tok, k)| tok.as_deref() == Some(k.as_str()))
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyword_whole_token() {
        let m = KeywordMatcher::new(&["boston"]);
        assert!(m.matches("boston blasts update"));
        assert!(m.matches("BOSTON!"));
        assert!(!m.matches("bostonian news"));
        let m = KeywordMatcher::new(&["ira"]);
        assert!(!m.matches("an irate reader"));
    }

    #[test]
    fn keyword_hashtag_body() {
        let m = KeywordMatcher::new(&["bostonblasts"]);
        assert!(m.matches("#bostonblasts"));
        assert!(m.matches("#BostonBlasts now"));
        let m = KeywordMatcher::new(&["#royalbaby"]);
        assert!(m.matches("a #RoyalBaby is born"));
        assert!(m.matches("royalbaby"));
    }

    #[test]
    fn keyword_phrase() {
        let m = KeywordMatcher::new(&["nelson mandela"]);
        assert!(m.matches("RIP Nelson Mandela."));
        assert!(!m.matches("nelson said mandela"));
        assert!(!m.matches("nelson @x mandela"));
    }

    #[test]
    fn mentions_and_urls_do_not_match() {
        let m = KeywordMatcher::new(&["boston"]);
        assert!(!m.matches("@boston http://boston.com"));
    }
}
