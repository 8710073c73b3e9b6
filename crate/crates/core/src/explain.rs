//! Human-readable explanations of finished proofs.
//!
//! Every step maps to a fixed sentence chosen by its operator and whether
//! the step inserts or deletes material. The cover operator never appears
//! in generated proofs and has no sentence; explaining a proof that
//! somehow contains one is an error rather than a misleading sentence.

use crate::natlog::{NatOp, VeracityLabel};
use crate::proof::{Proof, ProofStep};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplainError {
    #[error("step {step}: the cover operator has no explanation")]
    CoverUnrenderable { step: usize },
}

/// One explained step: the step's surface plus its fixed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepExplanation {
    pub claim: String,
    pub evidence: String,
    pub op: NatOp,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub note: String,
}

/// A fully explained proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub verdict: VeracityLabel,
    pub steps: Vec<StepExplanation>,
}

/// The fixed sentence for one step. `index` is the step's position,
/// reported when the operator cannot be explained.
pub fn describe_step(step: &ProofStep, index: usize) -> Result<&'static str, ExplainError> {
    Ok(match step.op {
        NatOp::Equivalence => "Equivalent Spans",
        NatOp::ForwardEntailment => {
            if step.is_insertion() {
                "(Insert) New information from evidence"
            } else {
                "Claim span follows from evidence span"
            }
        }
        NatOp::ReverseEntailment => "Incomplete Evidence",
        NatOp::Negation => {
            if step.is_deletion() {
                "Claim span negated (Deletion)"
            } else {
                "Evidence span refutes claim span"
            }
        }
        NatOp::Alternation => "Evidence span contradicts the claim span",
        NatOp::Independence => {
            if step.is_deletion() {
                "No related evidence found (Deletion)"
            } else {
                "Unrelated claim span and evidence span"
            }
        }
        NatOp::Cover => return Err(ExplainError::CoverUnrenderable { step: index }),
    })
}

/// Explain every step and fold the verdict.
pub fn explain(proof: &Proof) -> Result<Explanation, ExplainError> {
    let steps = proof
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            Ok(StepExplanation {
                claim: step.claim_text(),
                evidence: step.evidence_text(),
                op: step.op,
                source: step.source.clone(),
                note: describe_step(step, i)?.to_owned(),
            })
        })
        .collect::<Result<Vec<_>, ExplainError>>()?;
    Ok(Explanation {
        verdict: proof.verdict(),
        steps,
    })
}

/// Plain-text rendering: one numbered line per step, then the verdict.
pub fn render_text(explanation: &Explanation) -> String {
    let mut out = String::new();
    for (i, step) in explanation.steps.iter().enumerate() {
        out.push_str(&format!(
            "{}. {{ {} }} [ {} ] {}  {}\n",
            i + 1,
            step.claim,
            step.evidence,
            step.op.token(),
            step.note
        ));
    }
    out.push_str(&format!("verdict: {}\n", explanation.verdict.as_str()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::tokenize;

    fn sub(claim: &str, evidence: &str, op: NatOp) -> ProofStep {
        ProofStep::substitution(tokenize(claim), tokenize(evidence), op, Some("e1".to_owned()))
    }

    #[test]
    fn every_operator_maps_to_its_fixed_sentence() {
        use NatOp::*;
        let cases = [
            (sub("a", "a", Equivalence), "Equivalent Spans"),
            (sub("a", "b", ForwardEntailment), "Claim span follows from evidence span"),
            (sub("a", "b", ReverseEntailment), "Incomplete Evidence"),
            (sub("a", "b", Negation), "Evidence span refutes claim span"),
            (sub("a", "b", Alternation), "Evidence span contradicts the claim span"),
            (sub("a", "b", Independence), "Unrelated claim span and evidence span"),
        ];
        for (step, expected) in &cases {
            assert_eq!(describe_step(step, 0), Ok(*expected));
        }
    }

    #[test]
    fn sentinel_steps_use_their_own_sentences() {
        use NatOp::*;
        let ins = ProofStep::insertion(tokenize("Spanish Empire"), ForwardEntailment, None);
        assert_eq!(describe_step(&ins, 0), Ok("(Insert) New information from evidence"));
        let del_neg = ProofStep::deletion(tokenize(", never released ,"), Negation);
        assert_eq!(describe_step(&del_neg, 0), Ok("Claim span negated (Deletion)"));
        let del_ind = ProofStep::deletion(tokenize("of Peru ."), Independence);
        assert_eq!(describe_step(&del_ind, 0), Ok("No related evidence found (Deletion)"));
        let del_rev = ProofStep::deletion(tokenize("of Peru ."), ReverseEntailment);
        assert_eq!(describe_step(&del_rev, 0), Ok("Incomplete Evidence"));
    }

    #[test]
    fn cover_steps_are_an_error_with_their_position() {
        let step = sub("a", "b", NatOp::Cover);
        assert_eq!(
            describe_step(&step, 3),
            Err(ExplainError::CoverUnrenderable { step: 3 })
        );
        let proof = Proof {
            claim_tokens: tokenize("a b"),
            steps: vec![sub("a", "a", NatOp::Equivalence), sub("b", "c", NatOp::Cover)],
        };
        assert_eq!(
            explain(&proof),
            Err(ExplainError::CoverUnrenderable { step: 1 })
        );
    }

    #[test]
    fn rendered_text_lists_steps_and_verdict() {
        let proof = Proof {
            claim_tokens: tokenize("The Trial is a short story by Franz Kafka ."),
            steps: vec![
                sub("The Trial", "The Trial", NatOp::Equivalence),
                sub("is a short story", "is a novel", NatOp::Alternation),
                sub("by Franz Kafka .", "by Franz Kafka .", NatOp::Equivalence),
            ],
        };
        let explanation = explain(&proof).unwrap();
        assert_eq!(explanation.verdict, VeracityLabel::Refutes);
        let text = render_text(&explanation);
        assert_eq!(
            text,
            "1. { The Trial } [ The Trial ] ≡  Equivalent Spans\n\
             2. { is a short story } [ is a novel ] |  Evidence span contradicts the claim span\n\
             3. { by Franz Kafka . } [ by Franz Kafka . ] ≡  Equivalent Spans\n\
             verdict: REFUTES\n"
        );
    }

    #[test]
    fn sentinels_render_in_text_with_their_markers() {
        let proof = Proof {
            claim_tokens: tokenize("a"),
            steps: vec![
                sub("a", "a", NatOp::Equivalence),
                ProofStep::insertion(tokenize("more detail"), NatOp::ForwardEntailment, Some("e2".to_owned())),
            ],
        };
        let text = render_text(&explain(&proof).unwrap());
        assert!(text.contains("{ <INS> } [ more detail ] <"), "{text}");
        let json = serde_json::to_string(&explain(&proof).unwrap()).unwrap();
        assert!(json.contains("\"verdict\":\"SUPPORTS\""), "{json}");
        assert!(json.contains("\"op\":\"<\""), "{json}");
        assert!(json.contains("\"source\":\"e2\""), "{json}");
    }
}
