//! Chunk-to-evidence alignment.
//!
//! Every claim chunk is scored against every evidence sentence: each chunk
//! word takes its best-scoring sentence word, the chunk's span in a
//! sentence is the range from the first to the last word that aligned at
//! or above the word floor, and the sentence score is the mean best score
//! over *all* chunk words (so unmatched words drag the mean down). The
//! chunk is assigned the best-scoring sentence span; the caller turns
//! sub-threshold assignments into deletions.

use crate::proof::EvidenceSentence;
use std::collections::BTreeSet;
use std::ops::Range;

/// Word-to-word similarity in `[0, 1]`.
pub trait WordSimilarity {
    fn score(&self, claim_word: &str, evidence_word: &str) -> f64;
}

/// Default similarity: exact match scores 1.0, a case-insensitive match
/// 0.9, anything else the Jaccard overlap of character trigrams over the
/// lowercased words padded with `^` and `$`.
#[derive(Debug, Default, Clone)]
pub struct LexicalSimilarity;

fn trigrams(word: &str) -> BTreeSet<String> {
    let padded: Vec<char> = std::iter::once('^')
        .chain(word.chars())
        .chain(std::iter::once('$'))
        .collect();
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

impl WordSimilarity for LexicalSimilarity {
    fn score(&self, claim_word: &str, evidence_word: &str) -> f64 {
        if claim_word == evidence_word {
            return 1.0;
        }
        let (a, b) = (claim_word.to_lowercase(), evidence_word.to_lowercase());
        if a == b {
            return 0.9;
        }
        let (ta, tb) = (trigrams(&a), trigrams(&b));
        let intersection = ta.intersection(&tb).count();
        let union = ta.len() + tb.len() - intersection;
        if union == 0 {
            0.0
        } else {
            intersection as f64 / union as f64
        }
    }
}

/// A chunk's chosen span in one evidence sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanAlignment {
    pub sentence_index: usize,
    pub range: Range<usize>,
    /// Mean best word score over all chunk words.
    pub score: f64,
    /// (claim word, evidence word) for the words that aligned at or above
    /// the floor, in chunk order.
    pub word_pairs: Vec<(String, String)>,
}

/// Best span for a chunk across all sentences; ties prefer the earlier
/// sentence. `None` when no sentence aligns any chunk word at or above
/// `word_floor`.
pub fn align_chunk(
    chunk: &[String],
    sentences: &[EvidenceSentence],
    similarity: &dyn WordSimilarity,
    word_floor: f64,
) -> Option<SpanAlignment> {
    let mut best: Option<SpanAlignment> = None;
    for (sentence_index, sentence) in sentences.iter().enumerate() {
        let Some(candidate) = align_in_sentence(chunk, sentence, sentence_index, similarity, word_floor)
        else {
            continue;
        };
        if best.as_ref().map_or(true, |b| candidate.score > b.score) {
            best = Some(candidate);
        }
    }
    best
}

fn align_in_sentence(
    chunk: &[String],
    sentence: &EvidenceSentence,
    sentence_index: usize,
    similarity: &dyn WordSimilarity,
    word_floor: f64,
) -> Option<SpanAlignment> {
    if chunk.is_empty() || sentence.tokens.is_empty() {
        return None;
    }
    let mut total = 0.0;
    let mut lo = usize::MAX;
    let mut hi = 0;
    let mut word_pairs = Vec::new();
    for word in chunk {
        let mut best_score = 0.0;
        let mut best_index = 0;
        for (i, evidence_word) in sentence.tokens.iter().enumerate() {
            let s = similarity.score(word, evidence_word);
            if s > best_score {
                best_score = s;
                best_index = i;
            }
        }
        total += best_score;
        if best_score >= word_floor {
            lo = lo.min(best_index);
            hi = hi.max(best_index + 1);
            word_pairs.push((word.clone(), sentence.tokens[best_index].clone()));
        }
    }
    if word_pairs.is_empty() {
        return None;
    }
    Some(SpanAlignment {
        sentence_index,
        range: lo..hi,
        score: total / chunk.len() as f64,
        word_pairs,
    })
}
