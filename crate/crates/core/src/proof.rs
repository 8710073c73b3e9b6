//! Proof data structures.
//!
//! A proof decomposes a claim into spans, pairs each span with a span of
//! evidence text (or a sentinel when one side has no counterpart), and
//! labels each pair with a natural-logic operator. The operator states how
//! the evidence span relates to the claim span; folding the operators in
//! order (see [`crate::natlog::verdict`]) yields the verdict.

use crate::natlog::{self, NatOp, VeracityLabel};

/// Claim-side sentinel token: the step inserts evidence-only content.
pub const INS_SENTINEL: &str = "<INS>";
/// Evidence-side sentinel token: the claim span has no evidence counterpart.
pub const DEL_SENTINEL: &str = "<DEL>";

/// Split text into tokens on ASCII/Unicode whitespace. All span matching in
/// this crate is over these tokens; no further normalization is applied.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

/// An evidence sentence with a stable id, pre-tokenized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceSentence {
    pub sid: String,
    pub tokens: Vec<String>,
}

impl EvidenceSentence {
    pub fn new(sid: impl Into<String>, text: &str) -> EvidenceSentence {
        EvidenceSentence {
            sid: sid.into(),
            tokens: tokenize(text),
        }
    }
}

/// Index of the first occurrence of `needle` as a contiguous subsequence of
/// `haystack`, or `None`.
pub fn find_contiguous(haystack: &[String], needle: &[String]) -> Option<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return None;
    }
    (0..=haystack.len() - needle.len()).find(|&i| &haystack[i..i + needle.len()] == needle)
}

/// The first sentence (in listing order) containing `span` contiguously.
pub fn resolve_source<'a>(
    sentences: &'a [EvidenceSentence],
    span: &[String],
) -> Option<&'a EvidenceSentence> {
    sentences
        .iter()
        .find(|s| find_contiguous(&s.tokens, span).is_some())
}

/// One step of a proof.
///
/// `claim_tokens` is empty exactly when the step is an insertion (evidence
/// content with no claim counterpart); `evidence_tokens` is empty exactly
/// when it is a deletion (claim content with no evidence counterpart). The
/// grammar rejects genuinely empty spans, so emptiness encodes the sentinel
/// unambiguously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub claim_tokens: Vec<String>,
    pub evidence_tokens: Vec<String>,
    pub op: NatOp,
    /// Id of the evidence sentence the evidence span was found in.
    /// `None` for deletion steps.
    pub source: Option<String>,
}

impl ProofStep {
    pub fn substitution(
        claim_tokens: Vec<String>,
        evidence_tokens: Vec<String>,
        op: NatOp,
        source: Option<String>,
    ) -> ProofStep {
        ProofStep {
            claim_tokens,
            evidence_tokens,
            op,
            source,
        }
    }

    pub fn insertion(evidence_tokens: Vec<String>, op: NatOp, source: Option<String>) -> ProofStep {
        ProofStep {
            claim_tokens: Vec::new(),
            evidence_tokens,
            op,
            source,
        }
    }

    pub fn deletion(claim_tokens: Vec<String>, op: NatOp) -> ProofStep {
        ProofStep {
            claim_tokens,
            evidence_tokens: Vec::new(),
            op,
            source: None,
        }
    }

    pub fn is_insertion(&self) -> bool {
        self.claim_tokens.is_empty()
    }

    pub fn is_deletion(&self) -> bool {
        self.evidence_tokens.is_empty()
    }

    /// Claim side as text; the insertion sentinel for insertion steps.
    pub fn claim_text(&self) -> String {
        if self.is_insertion() {
            INS_SENTINEL.to_owned()
        } else {
            self.claim_tokens.join(" ")
        }
    }

    /// Evidence side as text; the deletion sentinel for deletion steps.
    pub fn evidence_text(&self) -> String {
        if self.is_deletion() {
            DEL_SENTINEL.to_owned()
        } else {
            self.evidence_tokens.join(" ")
        }
    }
}

/// A complete proof for one claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub claim_tokens: Vec<String>,
    pub steps: Vec<ProofStep>,
}

impl Proof {
    /// The operator sequence, in step order.
    pub fn ops(&self) -> Vec<NatOp> {
        self.steps.iter().map(|s| s.op).collect()
    }

    /// Fold the operators into a verdict.
    pub fn verdict(&self) -> VeracityLabel {
        natlog::verdict(&self.ops())
    }

    /// Do the non-insertion claim spans concatenate to exactly the claim?
    pub fn covers_claim(&self) -> bool {
        let covered: Vec<&String> = self
            .steps
            .iter()
            .filter(|s| !s.is_insertion())
            .flat_map(|s| s.claim_tokens.iter())
            .collect();
        covered.len() == self.claim_tokens.len()
            && covered.iter().zip(&self.claim_tokens).all(|(a, b)| *a == b)
    }

    /// Distinct evidence sentence ids, in order of first use.
    pub fn sources(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for step in &self.steps {
            if let Some(sid) = &step.source {
                if !seen.contains(sid) {
                    seen.push(sid.clone());
                }
            }
        }
        seen
    }
}
