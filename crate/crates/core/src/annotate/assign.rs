//! Initial operator assignment for a mutation sequence.
//!
//! Each mutation is matched against an ordered rule list; the first rule
//! that fires decides its operator. Substitutions that no rule covers stay
//! unassigned and are completed later from the gold label. Insertions and
//! deletions always receive an operator here.
//!
//! Rule order for substitutions: exact equality, equality after dropping
//! one negation word, phrase paraphrase, word-pair paraphrase, shared
//! alias entity, relation instance, taxonomy. For insertions and
//! deletions: a negation word in the present side wins, otherwise the
//! sentinel default (insertion narrows, deletion widens).

use super::mutation::{Mutation, MutationKind};
use crate::kb::KbStore;
use crate::natlog::NatOp;
use crate::proof::{find_contiguous, tokenize, EvidenceSentence};

/// Assign operators to every mutation; `None` marks a substitution that
/// must be completed from the gold label.
pub fn assign_initial(
    mutations: &[Mutation],
    claim_tokens: &[String],
    sentences: &[EvidenceSentence],
    kb: &KbStore,
) -> Vec<Option<NatOp>> {
    mutations
        .iter()
        .map(|m| match m.kind {
            MutationKind::Substitution => {
                let claim_span = &claim_tokens[m.claim_range.clone().unwrap()];
                let evidence_span = m.evidence_tokens(sentences).unwrap();
                substitution_op(claim_span, evidence_span, &m.word_pairs, kb)
            }
            MutationKind::Deletion => {
                let claim_span = &claim_tokens[m.claim_range.clone().unwrap()];
                Some(sentinel_op(claim_span, kb, NatOp::ReverseEntailment))
            }
            MutationKind::Insertion => {
                let evidence_span = m.evidence_tokens(sentences).unwrap();
                Some(sentinel_op(evidence_span, kb, NatOp::ForwardEntailment))
            }
        })
        .collect()
}

fn substitution_op(
    claim_span: &[String],
    evidence_span: &[String],
    word_pairs: &[(String, String)],
    kb: &KbStore,
) -> Option<NatOp> {
    if equal_ignore_case(claim_span, evidence_span) {
        return Some(NatOp::Equivalence);
    }
    if equal_after_dropping_one_negation(claim_span, evidence_span, kb) {
        return Some(NatOp::Negation);
    }
    if let Some(op) = kb.paraphrase(&claim_span.join(" "), &evidence_span.join(" ")) {
        return Some(op);
    }
    for (claim_word, evidence_word) in word_pairs {
        if let Some(op) = kb.paraphrase(claim_word, evidence_word) {
            return Some(op);
        }
    }
    if let (Some(claim_entity), Some(evidence_entity)) = (
        longest_match(claim_span, |p| kb.surface_entity(p)),
        longest_match(evidence_span, |p| kb.surface_entity(p)),
    ) {
        if claim_entity == evidence_entity {
            return Some(NatOp::Equivalence);
        }
    }
    if let Some(op) = relation_instance_op(claim_span, evidence_span, kb) {
        return Some(op);
    }
    if let (Some(claim_node), Some(evidence_node)) = (
        longest_match(claim_span, |p| kb.node(p)),
        longest_match(evidence_span, |p| kb.node(p)),
    ) {
        return kb.hierarchy_relation(claim_node, evidence_node).natop();
    }
    None
}

fn sentinel_op(present_span: &[String], kb: &KbStore, default: NatOp) -> NatOp {
    if present_span.iter().any(|w| kb.is_negation(w)) {
        NatOp::Negation
    } else {
        default
    }
}

fn equal_ignore_case(a: &[String], b: &[String]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.to_lowercase() == y.to_lowercase())
}

/// True when removing exactly one negation word from one side makes the
/// spans equal.
fn equal_after_dropping_one_negation(a: &[String], b: &[String], kb: &KbStore) -> bool {
    let drop_matches = |longer: &[String], shorter: &[String]| {
        (0..longer.len()).any(|i| {
            kb.is_negation(&longer[i]) && {
                let mut rest: Vec<String> = longer.to_vec();
                rest.remove(i);
                equal_ignore_case(&rest, shorter)
            }
        })
    };
    drop_matches(a, b) || drop_matches(b, a)
}

/// Longest (then leftmost) sub-phrase of `span` that `lookup` recognizes.
fn longest_match<'k>(
    span: &[String],
    lookup: impl Fn(&str) -> Option<&'k str>,
) -> Option<&'k str> {
    for len in (1..=span.len()).rev() {
        for start in 0..=span.len() - len {
            if let Some(hit) = lookup(&span[start..start + len].join(" ")) {
                return Some(hit);
            }
        }
    }
    None
}

/// First relation instance whose endpoints appear on opposite sides;
/// edges oriented claim-as-source are tried before claim-as-target.
fn relation_instance_op(
    claim_span: &[String],
    evidence_span: &[String],
    kb: &KbStore,
) -> Option<NatOp> {
    let claim_lower = lowered(claim_span);
    let evidence_lower = lowered(evidence_span);
    for (source, target, relation) in kb.relation_instances() {
        if contains_phrase(&claim_lower, source) && contains_phrase(&evidence_lower, target) {
            return Some(kb.relation_ops(relation)?.claim_to_evidence);
        }
    }
    for (source, target, relation) in kb.relation_instances() {
        if contains_phrase(&claim_lower, target) && contains_phrase(&evidence_lower, source) {
            return Some(kb.relation_ops(relation)?.evidence_to_claim);
        }
    }
    None
}

fn lowered(span: &[String]) -> Vec<String> {
    span.iter().map(|w| w.to_lowercase()).collect()
}

fn contains_phrase(lowered_span: &[String], phrase: &str) -> bool {
    let needle = tokenize(&phrase.to_lowercase());
    find_contiguous(lowered_span, &needle).is_some()
}
