//! The annotation pipeline: claim in, proof out.
//!
//! A claim is chunked, each chunk is aligned to its best evidence span,
//! the resulting mutation sequence gets operators from the rule list, and
//! any remaining free slots are completed from the gold label. When the
//! record carries a transformation tag, completions are filtered so the
//! tagged rewrite is reflected by the right operator — at the rewritten
//! region when a factoid pins one down (strict), anywhere otherwise
//! (relaxed). The first surviving completion becomes the proof.

pub mod align;
pub mod assign;
pub mod chunk;
pub mod filter;
pub mod mutation;
pub mod region;

use crate::kb::KbStore;
use crate::markup;
use crate::natlog::{NatOp, VeracityLabel, EMITTABLE_NATOPS};
use crate::proof::{tokenize, EvidenceSentence, Proof, ProofStep};
use crate::records::{
    ClaimRecord, LinkRecord, ProofRecord, ProofStatus, StepRecord, UnresolvedReason,
};
use align::{align_chunk, LexicalSimilarity, SpanAlignment};
use assign::assign_initial;
use chunk::{BoundaryChunker, Chunker};
use filter::{fill_by_label, filter_relaxed, filter_strict, required_op};
use mutation::{build_mutation_seq, Mutation, MutationKind};
use region::{locate_mutated_region, RegionError};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// How transformation filtering anchors the required operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterMode {
    /// Require the operator at a mutation overlapping the factoid region;
    /// records without a factoid stay unresolved.
    Strict,
    /// Require the operator anywhere in the sequence.
    Relaxed,
    /// Strict when the record has a factoid, relaxed otherwise.
    #[default]
    Auto,
}

impl FilterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterMode::Strict => "strict",
            FilterMode::Relaxed => "relaxed",
            FilterMode::Auto => "auto",
        }
    }
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FilterMode {
    type Err = String;

    fn from_str(s: &str) -> Result<FilterMode, String> {
        match s {
            "strict" => Ok(FilterMode::Strict),
            "relaxed" => Ok(FilterMode::Relaxed),
            "auto" => Ok(FilterMode::Auto),
            other => Err(format!(
                "unknown filter mode {other:?}; expected strict, relaxed, or auto"
            )),
        }
    }
}

/// Tunable pipeline parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotateConfig {
    /// Minimum span score for a chunk to count as substituted rather than
    /// deleted.
    pub threshold: f64,
    /// Minimum word similarity for a word to join a span alignment.
    pub align_word_floor: f64,
    /// Maximum words per claim chunk and per evidence span.
    pub span_max_words: usize,
    pub filter_mode: FilterMode,
    /// Maximum label completions materialized per record.
    pub candidate_cap: usize,
    /// Evidence sentences considered per record; the rest are ignored.
    pub max_evidence: usize,
    /// Operator order tried when completing free slots.
    pub priority: Vec<NatOp>,
}

impl Default for AnnotateConfig {
    fn default() -> AnnotateConfig {
        AnnotateConfig {
            threshold: 0.5,
            align_word_floor: 0.3,
            span_max_words: 7,
            filter_mode: FilterMode::Auto,
            candidate_cap: 256,
            max_evidence: 5,
            priority: EMITTABLE_NATOPS.to_vec(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnnotateError {
    #[error("record {id}: claim has no tokens")]
    EmptyClaim { id: String },
}

/// Runs the pipeline over claim records against one knowledge store.
pub struct Annotator<'k> {
    kb: &'k KbStore,
    config: AnnotateConfig,
    chunker: BoundaryChunker,
    similarity: LexicalSimilarity,
}

impl<'k> Annotator<'k> {
    pub fn new(kb: &'k KbStore, config: AnnotateConfig) -> Annotator<'k> {
        let chunker = BoundaryChunker {
            max_words: config.span_max_words,
        };
        Annotator {
            kb,
            config,
            chunker,
            similarity: LexicalSimilarity,
        }
    }

    pub fn config(&self) -> &AnnotateConfig {
        &self.config
    }

    /// Annotate one record. Inputs that cannot be processed at all are an
    /// error; inputs where no proof survives produce an unresolved record.
    pub fn annotate(&self, record: &ClaimRecord) -> Result<ProofRecord, AnnotateError> {
        let claim_tokens = tokenize(&record.claim);
        if claim_tokens.is_empty() {
            return Err(AnnotateError::EmptyClaim {
                id: record.id.clone(),
            });
        }
        let sentences = record.sentences(self.config.max_evidence);
        let links: Vec<Vec<LinkRecord>> = record
            .evidence
            .iter()
            .take(self.config.max_evidence)
            .map(|e| e.links.clone())
            .collect();
        let chunks = self.chunker.chunk(&claim_tokens);
        let alignments: Vec<Option<SpanAlignment>> = chunks
            .iter()
            .map(|c| {
                align_chunk(
                    &claim_tokens[c.clone()],
                    &sentences,
                    &self.similarity,
                    self.config.align_word_floor,
                )
            })
            .collect();
        let mutations = build_mutation_seq(
            &chunks,
            &alignments,
            &sentences,
            &links,
            self.config.threshold,
        );
        let slots = assign_initial(&mutations, &claim_tokens, &sentences, self.kb);

        let outcome = match record.label {
            None => Ok(slots
                .iter()
                .map(|s| s.unwrap_or(self.config.priority[0]))
                .collect::<Vec<NatOp>>()),
            Some(gold) => self.complete_with_label(record, &claim_tokens, &mutations, &slots, gold),
        };

        Ok(match outcome {
            Ok(ops) => {
                let proof = build_proof(&claim_tokens, &mutations, &ops, &sentences);
                if let Some(gold) = record.label {
                    debug_assert_eq!(
                        proof.verdict(),
                        gold,
                        "completions are built to reach the gold label"
                    );
                }
                ProofRecord {
                    id: record.id.clone(),
                    claim: record.claim.clone(),
                    status: ProofStatus::Resolved,
                    reason: None,
                    label: record.label,
                    predicted_label: Some(proof.verdict()),
                    proof: Some(markup::serialize(&proof)),
                    steps: Some(proof.steps.iter().map(StepRecord::from_step).collect()),
                    sources: Some(proof.sources()),
                    gold_evidence: record.gold_evidence.clone(),
                }
            }
            Err(reason) => ProofRecord {
                id: record.id.clone(),
                claim: record.claim.clone(),
                status: ProofStatus::Unresolved,
                reason: Some(reason),
                label: record.label,
                predicted_label: None,
                proof: None,
                steps: None,
                sources: None,
                gold_evidence: record.gold_evidence.clone(),
            },
        })
    }

    fn complete_with_label(
        &self,
        record: &ClaimRecord,
        claim_tokens: &[String],
        mutations: &[Mutation],
        slots: &[Option<NatOp>],
        gold: VeracityLabel,
    ) -> Result<Vec<NatOp>, UnresolvedReason> {
        let candidates = fill_by_label(slots, gold, &self.config.priority, self.config.candidate_cap);
        if candidates.sequences.is_empty() {
            return Err(UnresolvedReason::NoCandidates);
        }
        let Some(transformation) = record.transformation else {
            return Ok(candidates.sequences.into_iter().next().unwrap());
        };
        let required = required_op(transformation, gold);
        let strict = match self.config.filter_mode {
            FilterMode::Strict => true,
            FilterMode::Relaxed => false,
            FilterMode::Auto => record.factoid.is_some(),
        };
        let survivors = if strict {
            let Some(factoid) = &record.factoid else {
                return Err(UnresolvedReason::RegionRequired);
            };
            let region = match locate_mutated_region(claim_tokens, &tokenize(factoid)) {
                Ok(region) => region,
                Err(RegionError::Identical) => return Err(UnresolvedReason::FactoidIdentical),
            };
            filter_strict(&candidates.sequences, mutations, &region, required)
        } else {
            filter_relaxed(&candidates.sequences, required)
        };
        match survivors.first() {
            Some(&i) => Ok(candidates.sequences[i].clone()),
            None => Err(UnresolvedReason::NoSurvivors),
        }
    }
}

fn build_proof(
    claim_tokens: &[String],
    mutations: &[Mutation],
    ops: &[NatOp],
    sentences: &[EvidenceSentence],
) -> Proof {
    debug_assert_eq!(mutations.len(), ops.len());
    let steps = mutations
        .iter()
        .zip(ops)
        .map(|(m, &op)| {
            let sid = m
                .evidence
                .as_ref()
                .map(|s| sentences[s.sentence_index].sid.clone());
            match m.kind {
                MutationKind::Substitution => ProofStep::substitution(
                    claim_tokens[m.claim_range.clone().unwrap()].to_vec(),
                    m.evidence_tokens(sentences).unwrap().to_vec(),
                    op,
                    sid,
                ),
                MutationKind::Insertion => {
                    ProofStep::insertion(m.evidence_tokens(sentences).unwrap().to_vec(), op, sid)
                }
                MutationKind::Deletion => {
                    ProofStep::deletion(claim_tokens[m.claim_range.clone().unwrap()].to_vec(), op)
                }
            }
        })
        .collect();
    Proof {
        claim_tokens: claim_tokens.to_vec(),
        steps,
    }
}
