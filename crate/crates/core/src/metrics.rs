//! Evaluation metrics over verdicts, evidence, and rationales.

use crate::natlog::{NatOp, VeracityLabel};
use crate::proof::Proof;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("no items to score")]
    EmptyInput,
    #[error("no eligible pairs: every base verdict is absent or undecided")]
    NoEligible,
}

/// One scored prediction joined with its gold annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalItem {
    /// `None` when the system produced no verdict; always scored wrong.
    pub predicted_label: Option<VeracityLabel>,
    pub predicted_evidence: Vec<String>,
    pub gold_label: VeracityLabel,
    /// Alternative gold evidence sets; any one fully covered counts.
    pub gold_evidence: Vec<Vec<String>>,
}

/// Fraction of items whose predicted label equals the gold label.
pub fn label_accuracy(items: &[EvalItem]) -> Result<f64, MetricsError> {
    if items.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let correct = items
        .iter()
        .filter(|i| i.predicted_label == Some(i.gold_label))
        .count();
    Ok(correct as f64 / items.len() as f64)
}

/// Label accuracy that additionally demands correct evidence: the label
/// must match and, unless the gold label needs no evidence, some gold
/// evidence set must be a subset of the predicted evidence. An empty gold
/// set is trivially covered. Never exceeds [`label_accuracy`].
pub fn fever_score(items: &[EvalItem]) -> Result<f64, MetricsError> {
    if items.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let correct = items
        .iter()
        .filter(|i| i.predicted_label == Some(i.gold_label) && evidence_satisfied(i))
        .count();
    Ok(correct as f64 / items.len() as f64)
}

fn evidence_satisfied(item: &EvalItem) -> bool {
    if item.gold_label == VeracityLabel::NotEnoughInfo {
        return true;
    }
    let predicted: BTreeSet<&str> = item.predicted_evidence.iter().map(String::as_str).collect();
    item.gold_evidence
        .iter()
        .any(|set| set.iter().all(|sid| predicted.contains(sid.as_str())))
}

/// What the stability error rate divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SerDenominator {
    /// Pairs whose base verdict decides the claim (supported or refuted).
    #[default]
    Eligible,
    /// All pairs.
    All,
}

impl SerDenominator {
    pub fn as_str(self) -> &'static str {
        match self {
            SerDenominator::Eligible => "eligible",
            SerDenominator::All => "all",
        }
    }
}

impl fmt::Display for SerDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SerDenominator {
    type Err = String;

    fn from_str(s: &str) -> Result<SerDenominator, String> {
        match s {
            "eligible" => Ok(SerDenominator::Eligible),
            "all" => Ok(SerDenominator::All),
            other => Err(format!(
                "unknown denominator {other:?}; expected eligible or all"
            )),
        }
    }
}

/// Stability error rate over (base, augmented) verdict pairs: how often a
/// decided base verdict changes under an augmented restatement of the same
/// claim. A pair is eligible when the base verdict is SUPPORTS or REFUTES;
/// it errs when it is eligible and the augmented verdict differs (an
/// absent augmented verdict differs).
pub fn stability_error_rate(
    pairs: &[(Option<VeracityLabel>, Option<VeracityLabel>)],
    denominator: SerDenominator,
) -> Result<f64, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let eligible = |base: &Option<VeracityLabel>| {
        matches!(
            base,
            Some(VeracityLabel::Supports) | Some(VeracityLabel::Refutes)
        )
    };
    let errors = pairs
        .iter()
        .filter(|(base, augmented)| eligible(base) && augmented != base)
        .count();
    let denom = match denominator {
        SerDenominator::Eligible => {
            let n = pairs.iter().filter(|(base, _)| eligible(base)).count();
            if n == 0 {
                return Err(MetricsError::NoEligible);
            }
            n
        }
        SerDenominator::All => pairs.len(),
    };
    Ok(errors as f64 / denom as f64)
}

/// The evidence words a proof actually leans on: lowercased evidence-side
/// tokens of every step that is neither an equivalence nor a deletion,
/// minus all lowercased claim words.
pub fn extract_rationale(proof: &Proof) -> BTreeSet<String> {
    let claim_words: BTreeSet<String> = proof
        .claim_tokens
        .iter()
        .map(|w| w.to_lowercase())
        .collect();
    proof
        .steps
        .iter()
        .filter(|s| s.op != NatOp::Equivalence && !s.is_deletion())
        .flat_map(|s| s.evidence_tokens.iter().map(|w| w.to_lowercase()))
        .filter(|w| !claim_words.contains(w))
        .collect()
}

/// Set-based F1 between predicted and gold rationale tokens. Two empty
/// sets agree perfectly; one empty set scores zero.
pub fn token_f1(predicted: &BTreeSet<String>, gold: &BTreeSet<String>) -> f64 {
    match (predicted.is_empty(), gold.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        (false, false) => {}
    }
    let overlap = predicted.intersection(gold).count();
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / predicted.len() as f64;
    let recall = overlap as f64 / gold.len() as f64;
    2.0 * precision * recall / (precision + recall)
}
