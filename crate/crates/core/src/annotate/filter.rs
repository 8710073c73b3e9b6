//! Completing partially assigned sequences from the gold label, and
//! pruning the completions with transformation knowledge.
//!
//! Rule-assigned operators are fixed; the free slots are filled with every
//! combination whose folded verdict equals the gold label. A dynamic
//! program over the seven fold states counts the exact number of such
//! completions and enumerates them lazily (slot by slot, operators in
//! priority order) up to a cap. When the item records how its claim was
//! rewritten, the completions are filtered: the operator the rewrite
//! implies must appear at a mutation overlapping the rewritten region
//! (strict) or anywhere in the sequence (relaxed).

use super::mutation::Mutation;
use crate::natlog::{join, project, NatOp, VeracityLabel};
use crate::records::Transformation;
use std::ops::Range;

/// Completions of a partially assigned sequence that reach the gold label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    /// Enumerated sequences in slot-by-slot priority order, truncated to
    /// the enumeration cap.
    pub sequences: Vec<Vec<NatOp>>,
    /// Exact number of completions, independent of the cap.
    pub total: u128,
}

/// Fill every unassigned slot so the folded verdict equals `gold`.
///
/// `priority` is the operator order tried at each free slot, so it fixes
/// the enumeration order; `cap` bounds how many sequences are materialized
/// (`total` still counts all of them).
pub fn fill_by_label(
    slots: &[Option<NatOp>],
    gold: VeracityLabel,
    priority: &[NatOp],
    cap: usize,
) -> CandidateSet {
    let n = slots.len();
    // counts[i][s]: completions of slots[i..] when the fold over slots[..i]
    // currently sits at the operator with index s.
    let mut counts = vec![[0u128; 7]; n + 1];
    for (state, slot) in counts[n].iter_mut().enumerate() {
        *slot = u128::from(project(state_op(state)) == gold);
    }
    for i in (0..n).rev() {
        for state in 0..7 {
            counts[i][state] = match slots[i] {
                Some(op) => counts[i + 1][join(state_op(state), op).index()],
                None => priority
                    .iter()
                    .map(|&op| counts[i + 1][join(state_op(state), op).index()])
                    .fold(0u128, u128::saturating_add),
            };
        }
    }

    let total = counts[0][NatOp::Equivalence.index()];
    let mut sequences = Vec::new();
    if total > 0 && cap > 0 {
        let mut prefix = Vec::with_capacity(n);
        enumerate(
            slots,
            priority,
            &counts,
            cap,
            NatOp::Equivalence,
            &mut prefix,
            &mut sequences,
        );
    }
    CandidateSet { sequences, total }
}

fn state_op(index: usize) -> NatOp {
    crate::natlog::ALL_NATOPS[index]
}

fn enumerate(
    slots: &[Option<NatOp>],
    priority: &[NatOp],
    counts: &[[u128; 7]],
    cap: usize,
    state: NatOp,
    prefix: &mut Vec<NatOp>,
    out: &mut Vec<Vec<NatOp>>,
) {
    if out.len() == cap {
        return;
    }
    let i = prefix.len();
    if i == slots.len() {
        out.push(prefix.clone());
        return;
    }
    let choices: &[NatOp] = match &slots[i] {
        Some(op) => std::slice::from_ref(op),
        None => priority,
    };
    for &op in choices {
        let next = join(state, op);
        if counts[i + 1][next.index()] == 0 {
            continue;
        }
        prefix.push(op);
        enumerate(slots, priority, counts, cap, next, prefix, out);
        prefix.pop();
        if out.len() == cap {
            return;
        }
    }
}

/// Operator a recorded rewrite implies for the step that covers it.
pub fn required_op(transformation: Transformation, gold: VeracityLabel) -> NatOp {
    use Transformation::*;
    use VeracityLabel::*;
    match (transformation, gold) {
        (SubstituteSimilar, Supports) => NatOp::ForwardEntailment,
        (SubstituteSimilar, Refutes) => NatOp::Alternation,
        (SubstituteSimilar, NotEnoughInfo) => NatOp::ReverseEntailment,
        (SubstituteDissimilar, Supports) => NatOp::ForwardEntailment,
        (SubstituteDissimilar, Refutes) => NatOp::Alternation,
        (SubstituteDissimilar, NotEnoughInfo) => NatOp::Independence,
        (Paraphrasing, Supports) => NatOp::Equivalence,
        (Paraphrasing, Refutes) => NatOp::Alternation,
        (Paraphrasing, NotEnoughInfo) => NatOp::Independence,
        (Negation, _) => NatOp::Negation,
        (ToSpecific, _) => NatOp::ForwardEntailment,
        (ToGeneral, _) => NatOp::ReverseEntailment,
    }
}

/// Whether a mutation's claim range touches the rewritten region. An empty
/// region is a point between tokens: it touches the ranges that properly
/// contain its position. Insertions carry no claim range and never touch.
pub fn overlaps_region(claim_range: Option<&Range<usize>>, region: &Range<usize>) -> bool {
    let Some(range) = claim_range else {
        return false;
    };
    if region.is_empty() {
        range.start <= region.start && region.start < range.end
    } else {
        range.start.max(region.start) < range.end.min(region.end)
    }
}

/// Candidates whose operator at some region-overlapping mutation equals
/// `required`; returns indices into `candidates`.
pub fn filter_strict(
    candidates: &[Vec<NatOp>],
    mutations: &[Mutation],
    region: &Range<usize>,
    required: NatOp,
) -> Vec<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, seq)| {
            seq.iter().zip(mutations).any(|(&op, m)| {
                op == required && overlaps_region(m.claim_range.as_ref(), region)
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Candidates containing `required` anywhere; returns indices.
pub fn filter_relaxed(candidates: &[Vec<NatOp>], required: NatOp) -> Vec<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, seq)| seq.contains(&required))
        .map(|(i, _)| i)
        .collect()
}
