//! Textual proof markup.
//!
//! A proof is written as one or more triples:
//!
//! ```text
//! { claim words } [ evidence words ] OP
//! ```
//!
//! all whitespace-separated, e.g.
//!
//! ```text
//! { The Trial } [ The Trial ] ≡ { is a short story } [ is a novel ] | { by Franz Kafka . } [ by Franz Kafka . ] ≡
//! ```
//!
//! The claim side of a triple may instead be the single sentinel `<INS>`
//! (the evidence span has no claim counterpart) and the evidence side may
//! be `<DEL>` (the claim span has no evidence counterpart), but never both
//! in one triple. Spans must be non-empty and may not contain the meta
//! tokens `{`, `}`, `[`, `]` or a sentinel as an ordinary word, which also
//! means a proof whose spans would contain those words cannot be written in
//! this markup. Parsing checks that the non-insertion claim spans
//! concatenate to exactly the claim and resolves every evidence span to the
//! first listed evidence sentence containing it.

use crate::natlog::NatOp;
use crate::proof::{
    find_contiguous, resolve_source, tokenize, EvidenceSentence, Proof, ProofStep, DEL_SENTINEL,
    INS_SENTINEL,
};
use thiserror::Error;

/// Errors rejecting a markup string.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkupError {
    /// The token stream does not fit the triple grammar.
    #[error("grammar error at token {index}: {message}")]
    Grammar { index: usize, message: String },
    /// The claim spans do not concatenate to the claim.
    #[error("claim spans cover {covered:?} but the claim is {claim:?}")]
    Coverage { covered: String, claim: String },
    /// An evidence span occurs in no evidence sentence.
    #[error("evidence span {span:?} not found in any evidence sentence")]
    SpanNotFound { span: String },
    /// The operator position holds an unknown token.
    #[error("unknown operator token {token:?} at token {index}")]
    UnknownOp { index: usize, token: String },
}

/// Suspicious but accepted constructs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkupWarning {
    /// A deletion step carries an operator other than `>` or `!`.
    DeletionOp { step: usize, op: NatOp },
    /// An insertion step carries an operator other than `<` or `!`.
    InsertionOp { step: usize, op: NatOp },
}

const META_TOKENS: [&str; 4] = ["{", "}", "[", "]"];

fn grammar(index: usize, message: impl Into<String>) -> MarkupError {
    MarkupError::Grammar {
        index,
        message: message.into(),
    }
}

/// Serialize a proof to markup. Inverse of [`parse`] for proofs whose spans
/// avoid meta tokens and sentinels as ordinary words.
pub fn serialize(proof: &Proof) -> String {
    proof
        .steps
        .iter()
        .map(|step| {
            format!(
                "{{ {} }} [ {} ] {}",
                step.claim_text(),
                step.evidence_text(),
                step.op.token()
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse markup against a claim and its evidence sentences.
///
/// Returns the proof plus warnings for sentinel steps with unusual
/// operators. Evidence spans (including insertion spans) are resolved to
/// the first sentence containing them; deletion steps have no source.
pub fn parse(
    markup: &str,
    claim: &str,
    sentences: &[EvidenceSentence],
) -> Result<(Proof, Vec<MarkupWarning>), MarkupError> {
    let tokens = tokenize(markup);
    let claim_tokens = tokenize(claim);
    if tokens.is_empty() {
        return Err(grammar(0, "empty markup: expected at least one triple"));
    }

    let mut steps = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let step_start = i;
        expect(&tokens, &mut i, "{")?;
        let claim_side = collect_span(&tokens, &mut i, "}", INS_SENTINEL, DEL_SENTINEL)?;
        expect(&tokens, &mut i, "[")?;
        let evidence_side = collect_span(&tokens, &mut i, "]", DEL_SENTINEL, INS_SENTINEL)?;
        if claim_side.is_none() && evidence_side.is_none() {
            return Err(grammar(
                step_start,
                "a triple may not be both an insertion and a deletion",
            ));
        }
        let op_index = i;
        let op_token = tokens
            .get(i)
            .ok_or_else(|| grammar(i, "unexpected end of markup: expected an operator"))?;
        let op = NatOp::parse_token(op_token).ok_or_else(|| MarkupError::UnknownOp {
            index: op_index,
            token: op_token.clone(),
        })?;
        i += 1;
        steps.push(ProofStep {
            claim_tokens: claim_side.unwrap_or_default(),
            evidence_tokens: evidence_side.unwrap_or_default(),
            op,
            source: None,
        });
    }

    let covered: Vec<String> = steps
        .iter()
        .filter(|s| !s.is_insertion())
        .flat_map(|s| s.claim_tokens.iter().cloned())
        .collect();
    if covered != claim_tokens {
        return Err(MarkupError::Coverage {
            covered: covered.join(" "),
            claim: claim_tokens.join(" "),
        });
    }

    let mut warnings = Vec::new();
    for (idx, step) in steps.iter_mut().enumerate() {
        if step.is_deletion() {
            if !matches!(step.op, NatOp::ReverseEntailment | NatOp::Negation) {
                warnings.push(MarkupWarning::DeletionOp {
                    step: idx,
                    op: step.op,
                });
            }
            continue;
        }
        if step.is_insertion() && !matches!(step.op, NatOp::ForwardEntailment | NatOp::Negation) {
            warnings.push(MarkupWarning::InsertionOp {
                step: idx,
                op: step.op,
            });
        }
        match resolve_source(sentences, &step.evidence_tokens) {
            Some(sentence) => step.source = Some(sentence.sid.clone()),
            None => {
                return Err(MarkupError::SpanNotFound {
                    span: step.evidence_tokens.join(" "),
                })
            }
        }
    }

    Ok((
        Proof {
            claim_tokens,
            steps,
        },
        warnings,
    ))
}

fn expect(tokens: &[String], i: &mut usize, wanted: &str) -> Result<(), MarkupError> {
    match tokens.get(*i) {
        Some(tok) if tok == wanted => {
            *i += 1;
            Ok(())
        }
        Some(tok) => Err(grammar(*i, format!("expected {wanted:?}, found {tok:?}"))),
        None => Err(grammar(
            *i,
            format!("unexpected end of markup: expected {wanted:?}"),
        )),
    }
}

/// Collect span words up to `closer`. Returns `None` for a sentinel span
/// (`own_sentinel` alone between the brackets); `foreign_sentinel` is the
/// other side's sentinel and is illegal here.
fn collect_span(
    tokens: &[String],
    i: &mut usize,
    closer: &str,
    own_sentinel: &str,
    foreign_sentinel: &str,
) -> Result<Option<Vec<String>>, MarkupError> {
    let mut words = Vec::new();
    let mut sentinel = false;
    loop {
        let tok = tokens
            .get(*i)
            .ok_or_else(|| grammar(*i, format!("unexpected end of markup: expected {closer:?}")))?;
        if tok == closer {
            if sentinel {
                *i += 1;
                return Ok(None);
            }
            if words.is_empty() {
                return Err(grammar(*i, "empty span"));
            }
            *i += 1;
            return Ok(Some(words));
        }
        if sentinel {
            return Err(grammar(
                *i,
                format!("a sentinel span admits no further words, found {tok:?}"),
            ));
        }
        if tok == own_sentinel {
            if !words.is_empty() {
                return Err(grammar(
                    *i,
                    format!("{own_sentinel} must be the only word in its span"),
                ));
            }
            sentinel = true;
        } else if tok == foreign_sentinel {
            return Err(grammar(
                *i,
                format!("{foreign_sentinel} is not valid on this side of a triple"),
            ));
        } else if META_TOKENS.contains(&tok.as_str()) {
            return Err(grammar(
                *i,
                format!("meta token {tok:?} may not appear inside a span"),
            ));
        } else {
            words.push(tok.clone());
        }
        *i += 1;
    }
}

/// Convenience check used by generators: is `span` present in `sentence`?
pub fn span_in_sentence(sentence: &EvidenceSentence, span: &[String]) -> bool {
    find_contiguous(&sentence.tokens, span).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natlog::{NatOp, VeracityLabel};

    fn kafka_sentences() -> Vec<EvidenceSentence> {
        vec![EvidenceSentence::new(
            "e1",
            "The Trial is a novel by Franz Kafka .",
        )]
    }

    const KAFKA_CLAIM: &str = "The Trial is a short story by Franz Kafka .";
    const KAFKA_MARKUP: &str = "{ The Trial } [ The Trial ] ≡ \
         { is a short story } [ is a novel ] | \
         { by Franz Kafka . } [ by Franz Kafka . ] ≡";

    #[test]
    fn parse_three_step_proof() {
        let (proof, warnings) = parse(KAFKA_MARKUP, KAFKA_CLAIM, &kafka_sentences()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(
            proof.ops(),
            vec![NatOp::Equivalence, NatOp::Alternation, NatOp::Equivalence]
        );
        assert_eq!(proof.verdict(), VeracityLabel::Refutes);
        assert!(proof.covers_claim());
        assert_eq!(proof.sources(), vec!["e1".to_owned()]);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let (proof, _) = parse(KAFKA_MARKUP, KAFKA_CLAIM, &kafka_sentences()).unwrap();
        let rendered = serialize(&proof);
        let (again, _) = parse(&rendered, KAFKA_CLAIM, &kafka_sentences()).unwrap();
        assert_eq!(proof, again);
    }

    #[test]
    fn ascii_equivalence_alias_is_accepted() {
        let markup = "{ The Trial } [ The Trial ] == \
             { is a short story } [ is a novel ] | \
             { by Franz Kafka . } [ by Franz Kafka . ] ==";
        let (proof, _) = parse(markup, KAFKA_CLAIM, &kafka_sentences()).unwrap();
        assert_eq!(proof.steps[0].op, NatOp::Equivalence);
    }

    #[test]
    fn sentinel_steps_parse_with_sources() {
        let sentences = vec![
            EvidenceSentence::new("e1", "It stood for the Spanish Empire ."),
            EvidenceSentence::new("e2", "It fell in 1898 ."),
        ];
        let markup = "{ It fell } [ It fell ] ≡ \
             { <INS> } [ Spanish Empire ] < \
             { in 1898 . } [ in 1898 . ] ≡";
        let (proof, warnings) = parse(markup, "It fell in 1898 .", &sentences).unwrap();
        assert!(warnings.is_empty());
        assert!(proof.steps[1].is_insertion());
        assert_eq!(proof.steps[1].source.as_deref(), Some("e1"));
        assert_eq!(proof.sources(), vec!["e2".to_owned(), "e1".to_owned()]);
    }

    #[test]
    fn deletion_step_has_no_source() {
        let sentences = vec![EvidenceSentence::new("e1", "Lima is the capital .")];
        let markup = "{ Lima is the capital } [ Lima is the capital ] ≡ \
             { of Peru . } [ <DEL> ] >";
        let (proof, warnings) =
            parse(markup, "Lima is the capital of Peru .", &sentences).unwrap();
        assert!(warnings.is_empty());
        assert!(proof.steps[1].is_deletion());
        assert_eq!(proof.steps[1].source, None);
        assert_eq!(proof.verdict(), VeracityLabel::NotEnoughInfo);
    }

    #[test]
    fn unusual_sentinel_operators_warn_but_parse() {
        let sentences = vec![EvidenceSentence::new("e1", "Lima is the capital .")];
        let markup = "{ Lima is the capital } [ Lima is the capital ] ≡ \
             { of Peru . } [ <DEL> ] #";
        let (_, warnings) = parse(markup, "Lima is the capital of Peru .", &sentences).unwrap();
        assert_eq!(
            warnings,
            vec![MarkupWarning::DeletionOp {
                step: 1,
                op: NatOp::Independence
            }]
        );
    }

    #[test]
    fn grammar_violations_are_rejected() {
        let sentences = kafka_sentences();
        let claim = "The Trial .";
        let cases: Vec<(&str, fn(&MarkupError) -> bool)> = vec![
            // missing opening brace
            ("The Trial } [ The Trial ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // empty claim span
            ("{ } [ The Trial ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // empty evidence span
            ("{ The Trial . } [ ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // truncated before operator
            ("{ The Trial . } [ The Trial ]", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // sentinel on both sides
            ("{ <INS> } [ <DEL> ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // sentinel mixed with words
            ("{ <INS> The Trial . } [ novel ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // wrong-side sentinel
            ("{ The Trial . } [ <INS> ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // nested meta token
            ("{ The { Trial . } [ novel ] ≡", |e| {
                matches!(e, MarkupError::Grammar { .. })
            }),
            // empty markup
            ("", |e| matches!(e, MarkupError::Grammar { .. })),
            // unknown operator
            ("{ The Trial . } [ The Trial ] ?", |e| {
                matches!(e, MarkupError::UnknownOp { .. })
            }),
        ];
        for (markup, check) in cases {
            let err = parse(markup, claim, &sentences).unwrap_err();
            assert!(check(&err), "markup {markup:?} produced {err:?}");
        }
    }

    #[test]
    fn coverage_mismatch_is_rejected() {
        let err = parse(
            "{ The Trial } [ The Trial ] ≡",
            "The Trial is a novel .",
            &kafka_sentences(),
        )
        .unwrap_err();
        assert!(matches!(err, MarkupError::Coverage { .. }), "{err:?}");

        // Out-of-order spans are a coverage error too.
        let err = parse(
            "{ Trial . } [ The Trial ] ≡ { The } [ The Trial ] ≡",
            "The Trial .",
            &kafka_sentences(),
        )
        .unwrap_err();
        assert!(matches!(err, MarkupError::Coverage { .. }), "{err:?}");
    }

    #[test]
    fn missing_evidence_span_is_rejected() {
        let err = parse(
            "{ The Trial . } [ The Castle ] ≡",
            "The Trial .",
            &kafka_sentences(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            MarkupError::SpanNotFound {
                span: "The Castle".to_owned()
            }
        );
    }

    #[test]
    fn trailing_insertion_is_accepted() {
        let sentences = kafka_sentences();
        let markup = "{ The Trial . } [ The Trial ] ≡ { <INS> } [ novel ] <";
        let (proof, _) = parse(markup, "The Trial .", &sentences).unwrap();
        assert_eq!(proof.steps.len(), 2);
        assert!(proof.steps[1].is_insertion());
    }

    #[test]
    fn cover_operator_round_trips() {
        let markup = "{ The Trial . } [ The Trial ] ~";
        let (proof, _) = parse(markup, "The Trial .", &kafka_sentences()).unwrap();
        assert_eq!(proof.steps[0].op, NatOp::Cover);
        assert_eq!(serialize(&proof), markup);
    }
}
