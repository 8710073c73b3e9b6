//! JSON line formats for claims, proofs, and predictions.
//!
//! Batch commands stream these records one JSON object per line. Field
//! order in the serialized output follows declaration order here, which
//! keeps reruns byte-identical.

use crate::natlog::{NatOp, VeracityLabel};
use crate::proof::{tokenize, EvidenceSentence, Proof, ProofStep, DEL_SENTINEL, INS_SENTINEL};
use serde::{Deserialize, Serialize};

/// How a claim was mutated away from the text its evidence states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transformation {
    SubstituteSimilar,
    SubstituteDissimilar,
    Paraphrasing,
    Negation,
    ToSpecific,
    ToGeneral,
}

/// Why annotation produced no proof for a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnresolvedReason {
    /// No operator assignment reaches the gold label.
    NoCandidates,
    /// Candidates exist but none passes the transformation filter.
    NoSurvivors,
    /// Strict filtering was requested but no factoid provides a region.
    RegionRequired,
    /// The factoid equals the claim, so there is no mutated region.
    FactoidIdentical,
}

/// A hyperlink inside an evidence sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    /// Surface text of the link in its sentence.
    pub mention: String,
    /// Sentence id the link points to.
    pub to: String,
}

/// One evidence sentence with a stable id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub sid: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<LinkRecord>,
}

/// Input record: a claim with its retrieved evidence and, optionally, the
/// gold annotation fields that guide proof generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub claim: String,
    #[serde(default)]
    pub evidence: Vec<EvidenceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<VeracityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transformation: Option<Transformation>,
    /// Where the transformation tag came from (e.g. gold annotation or a
    /// tagger); informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transformation_source: Option<String>,
    /// The claim as the evidence would state it; anchors the mutated
    /// region for strict filtering.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factoid: Option<String>,
    /// Gold evidence as alternative sets of sentence ids; any one set fully
    /// predicted counts as correct evidence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_evidence: Option<Vec<Vec<String>>>,
}

impl ClaimRecord {
    /// Tokenized evidence sentences, capped at `max` (listing order).
    pub fn sentences(&self, max: usize) -> Vec<EvidenceSentence> {
        self.evidence
            .iter()
            .take(max)
            .map(|e| EvidenceSentence::new(e.sid.clone(), &e.text))
            .collect()
    }
}

/// One proof step on the wire. Sentinel sides are spelled with the markup
/// sentinels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub claim: String,
    pub evidence: String,
    pub op: NatOp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl StepRecord {
    pub fn from_step(step: &ProofStep) -> StepRecord {
        StepRecord {
            claim: step.claim_text(),
            evidence: step.evidence_text(),
            op: step.op,
            source: step.source.clone(),
        }
    }

    pub fn to_step(&self) -> ProofStep {
        ProofStep {
            claim_tokens: if self.claim == INS_SENTINEL {
                Vec::new()
            } else {
                tokenize(&self.claim)
            },
            evidence_tokens: if self.evidence == DEL_SENTINEL {
                Vec::new()
            } else {
                tokenize(&self.evidence)
            },
            op: self.op,
            source: self.source.clone(),
        }
    }
}

/// Annotation status of a [`ProofRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    Resolved,
    Unresolved,
}

/// Output of annotation: either a finished proof or the reason none was
/// produced. Gold fields are passed through for later evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofRecord {
    pub id: String,
    pub claim: String,
    pub status: ProofStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<UnresolvedReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<VeracityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_label: Option<VeracityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_evidence: Option<Vec<Vec<String>>>,
}

impl ProofRecord {
    /// Rebuild the in-memory proof from the step records, if resolved.
    pub fn to_proof(&self) -> Option<Proof> {
        let steps = self.steps.as_ref()?;
        Some(Proof {
            claim_tokens: tokenize(&self.claim),
            steps: steps.iter().map(StepRecord::to_step).collect(),
        })
    }
}

/// Output of verification, one per input proof record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub predicted_label: Option<VeracityLabel>,
    pub predicted_evidence: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<VeracityLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Vec<String>>,
}

/// Emitted in place of a normal output line when one input record fails;
/// the batch continues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchErrorRecord {
    pub id: Option<String>,
    pub status: String,
    pub error: String,
}

impl BatchErrorRecord {
    pub fn new(id: Option<String>, error: impl Into<String>) -> BatchErrorRecord {
        BatchErrorRecord {
            id,
            status: "error".to_owned(),
            error: error.into(),
        }
    }
}
