//! From aligned chunks to an ordered mutation sequence.
//!
//! Each chunk becomes either a substitution (its chosen evidence span met
//! the score threshold) or a deletion. Where consecutive substitutions
//! switch evidence sentences, the claim implicitly relies on the link that
//! connects the two sentences; if the linking mention is not already part
//! of a chosen span, an insertion mutation carrying the mention's span in
//! the from-sentence is added at the switch point.

use super::align::SpanAlignment;
use crate::proof::{find_contiguous, tokenize, EvidenceSentence};
use crate::records::LinkRecord;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    Substitution,
    Insertion,
    Deletion,
}

/// A token range inside one evidence sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanRef {
    pub sentence_index: usize,
    pub range: Range<usize>,
}

/// One claim mutation, in claim order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mutation {
    pub kind: MutationKind,
    /// Claim token range; `None` for insertions.
    pub claim_range: Option<Range<usize>>,
    /// Evidence span; `None` for deletions.
    pub evidence: Option<SpanRef>,
    /// Aligned word pairs retained from alignment (substitutions only).
    pub word_pairs: Vec<(String, String)>,
}

impl Mutation {
    fn substitution(claim_range: Range<usize>, alignment: &SpanAlignment) -> Mutation {
        Mutation {
            kind: MutationKind::Substitution,
            claim_range: Some(claim_range),
            evidence: Some(SpanRef {
                sentence_index: alignment.sentence_index,
                range: alignment.range.clone(),
            }),
            word_pairs: alignment.word_pairs.clone(),
        }
    }

    fn deletion(claim_range: Range<usize>) -> Mutation {
        Mutation {
            kind: MutationKind::Deletion,
            claim_range: Some(claim_range),
            evidence: None,
            word_pairs: Vec::new(),
        }
    }

    fn insertion(span: SpanRef) -> Mutation {
        Mutation {
            kind: MutationKind::Insertion,
            claim_range: None,
            evidence: Some(span),
            word_pairs: Vec::new(),
        }
    }

    pub fn evidence_tokens<'a>(&self, sentences: &'a [EvidenceSentence]) -> Option<&'a [String]> {
        self.evidence
            .as_ref()
            .map(|s| &sentences[s.sentence_index].tokens[s.range.clone()])
    }
}

/// Assemble the mutation sequence for a claim.
///
/// `chunks` and `alignments` run in parallel; `links` holds each
/// sentence's outgoing links, parallel to `sentences`; `threshold` is the
/// minimum span score below which a chunk becomes a deletion.
pub fn build_mutation_seq(
    chunks: &[Range<usize>],
    alignments: &[Option<SpanAlignment>],
    sentences: &[EvidenceSentence],
    links: &[Vec<LinkRecord>],
    threshold: f64,
) -> Vec<Mutation> {
    debug_assert_eq!(chunks.len(), alignments.len());
    debug_assert_eq!(sentences.len(), links.len());

    let base: Vec<Mutation> = chunks
        .iter()
        .zip(alignments)
        .map(|(chunk, alignment)| match alignment {
            Some(a) if a.score >= threshold => Mutation::substitution(chunk.clone(), a),
            _ => Mutation::deletion(chunk.clone()),
        })
        .collect();

    // Insertions go between consecutive substitutions whose evidence
    // sentences differ (any deletions in between do not interrupt the
    // pair); each maps to an index in `base` to insert before.
    let substitution_indices: Vec<usize> = base
        .iter()
        .enumerate()
        .filter(|(_, m)| m.kind == MutationKind::Substitution)
        .map(|(i, _)| i)
        .collect();
    let mut insertions: Vec<(usize, Mutation)> = Vec::new();
    for pair in substitution_indices.windows(2) {
        let (from_idx, to_idx) = (pair[0], pair[1]);
        let from = base[from_idx].evidence.as_ref().unwrap().sentence_index;
        let to = base[to_idx].evidence.as_ref().unwrap().sentence_index;
        if from == to {
            continue;
        }
        let Some(link) = links[from].iter().find(|l| l.to == sentences[to].sid) else {
            continue;
        };
        let mention = tokenize(&link.mention);
        if mention.is_empty() || mention_in_chosen_span(&mention, &base, sentences) {
            continue;
        }
        let Some(at) = find_contiguous(&sentences[from].tokens, &mention) else {
            continue;
        };
        insertions.push((
            to_idx,
            Mutation::insertion(SpanRef {
                sentence_index: from,
                range: at..at + mention.len(),
            }),
        ));
    }

    let mut out = Vec::with_capacity(base.len() + insertions.len());
    let mut pending = insertions.into_iter().peekable();
    for (i, mutation) in base.into_iter().enumerate() {
        while pending.peek().is_some_and(|(target, _)| *target == i) {
            out.push(pending.next().unwrap().1);
        }
        out.push(mutation);
    }
    out
}

fn mention_in_chosen_span(
    mention: &[String],
    base: &[Mutation],
    sentences: &[EvidenceSentence],
) -> bool {
    base.iter().any(|m| {
        m.evidence_tokens(sentences)
            .is_some_and(|span| find_contiguous(span, mention).is_some())
    })
}
