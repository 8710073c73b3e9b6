//! Claim chunking.
//!
//! The default chunker cuts a claim before every function-word boundary
//! (auxiliary/copula/modal verbs, prepositions, coordinating
//! conjunctions, and punctuation tokens), then repairs the result: a chunk
//! with no content word is merged into its successor (or backward when it
//! is last), and a chunk longer than the span cap is split into evenly
//! sized pieces. Chunks are returned as contiguous token ranges that
//! partition the claim in order.

use std::collections::BTreeSet;
use std::ops::Range;
use std::sync::OnceLock;

/// Splits a claim into contiguous token ranges.
pub trait Chunker {
    fn chunk(&self, tokens: &[String]) -> Vec<Range<usize>>;
}

const AUXILIARIES: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "has", "have", "had", "do", "does",
    "did", "can", "could", "may", "might", "must", "shall", "should", "will", "would",
];

const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "over", "under",
    "between", "during", "until", "after", "before", "against", "through", "above", "below",
    "near", "across", "around", "about", "upon", "within", "without", "toward", "towards",
    "since", "per", "via", "than",
];

const CONJUNCTIONS: &[&str] = &["and", "but", "or", "nor", "yet", "so"];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "its", "his", "her", "their", "our", "my",
    "your", "some", "any", "each", "every",
];

fn boundary_words() -> &'static BTreeSet<&'static str> {
    static SET: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        AUXILIARIES
            .iter()
            .chain(PREPOSITIONS)
            .chain(CONJUNCTIONS)
            .copied()
            .collect()
    })
}

fn is_punctuation(token: &str) -> bool {
    !token.chars().any(char::is_alphanumeric)
}

/// Does a new chunk start at this token?
pub fn is_boundary(token: &str) -> bool {
    is_punctuation(token) || boundary_words().contains(token.to_lowercase().as_str())
}

/// Content words keep a chunk alive; boundary words, determiners, and
/// punctuation do not.
pub fn is_content_word(token: &str) -> bool {
    !is_punctuation(token)
        && !boundary_words().contains(token.to_lowercase().as_str())
        && !DETERMINERS.contains(&token.to_lowercase().as_str())
}

/// Merge chunks without content words into their successor; a trailing
/// contentless run merges backward instead. Ranges must be contiguous.
pub fn merge_contentless(tokens: &[String], chunks: Vec<Range<usize>>) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    let mut carry: Option<Range<usize>> = None;
    for chunk in chunks {
        let has_content = tokens[chunk.clone()].iter().any(|t| is_content_word(t));
        let merged = match carry.take() {
            Some(c) => c.start..chunk.end,
            None => chunk,
        };
        if has_content {
            out.push(merged);
        } else {
            carry = Some(merged);
        }
    }
    if let Some(c) = carry {
        match out.last_mut() {
            Some(last) => last.end = c.end,
            None => out.push(c),
        }
    }
    out
}

/// Split every chunk longer than `max` into evenly sized pieces.
pub fn split_oversized(chunks: Vec<Range<usize>>, max: usize) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    for chunk in chunks {
        let len = chunk.len();
        if len <= max {
            out.push(chunk);
            continue;
        }
        let parts = len.div_ceil(max);
        let base = len / parts;
        let extra = len % parts;
        let mut start = chunk.start;
        for part in 0..parts {
            let size = base + usize::from(part < extra);
            out.push(start..start + size);
            start += size;
        }
    }
    out
}

/// The default function-word boundary chunker.
#[derive(Debug, Clone)]
pub struct BoundaryChunker {
    pub max_words: usize,
}

impl Default for BoundaryChunker {
    fn default() -> BoundaryChunker {
        BoundaryChunker { max_words: 7 }
    }
}

impl Chunker for BoundaryChunker {
    fn chunk(&self, tokens: &[String]) -> Vec<Range<usize>> {
        if tokens.is_empty() {
            return Vec::new();
        }
        let mut cuts = vec![0];
        for (i, token) in tokens.iter().enumerate().skip(1) {
            if is_boundary(token) {
                cuts.push(i);
            }
        }
        cuts.push(tokens.len());
        let raw: Vec<Range<usize>> = cuts.windows(2).map(|w| w[0]..w[1]).collect();
        split_oversized(merge_contentless(tokens, raw), self.max_words)
    }
}
