//! Constrained decoding for proof markup.
//!
//! A [`Constrainer`] tracks a partially emitted proof, token by token, and
//! at every point reports exactly which tokens may come next so that a
//! generator choosing only from that set always produces markup that
//! parses against the claim and evidence:
//!
//! * claim spans consume the claim left to right, at most
//!   `max_span_words` words per span, or are the insertion sentinel;
//! * evidence spans walk a trie of the contiguous n-grams (up to
//!   `max_span_words` words) of the evidence sentences, or are the deletion
//!   sentinel;
//! * operator positions admit the six produced operators, in a fixed
//!   priority order.
//!
//! The automaton finishes exactly when the claim is exhausted and the
//! current triple is closed, so it never emits a trailing insertion. The
//! markup parser accepts a superset of what the automaton can emit (longer
//! spans, the cover operator, trailing insertions).

use crate::natlog::{NatOp, EMITTABLE_NATOPS};
use crate::proof::{tokenize, EvidenceSentence, DEL_SENTINEL, INS_SENTINEL};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstrainError {
    /// The claim has no tokens, so no proof can cover it.
    #[error("the claim has no tokens")]
    EmptyClaim,
    /// A claim or evidence token collides with markup syntax.
    #[error("token {token:?} collides with markup syntax and cannot be decoded")]
    MetaToken { token: String },
    /// A stepped token is not currently allowed.
    #[error("token {token:?} is not allowed here; allowed: {}", allowed.join(" "))]
    IllegalToken { token: String, allowed: Vec<String> },
}

const RESERVED: [&str; 6] = ["{", "}", "[", "]", INS_SENTINEL, DEL_SENTINEL];

#[derive(Default, Debug)]
struct TrieNode {
    children: BTreeMap<String, TrieNode>,
}

impl TrieNode {
    fn insert(&mut self, gram: &[String]) {
        let mut node = self;
        for word in gram {
            node = node.children.entry(word.clone()).or_default();
        }
    }

    fn walk(&self, path: &[String]) -> Option<&TrieNode> {
        let mut node = self;
        for word in path {
            node = node.children.get(word)?;
        }
        Some(node)
    }
}

/// Trie of the contiguous n-grams (lengths 1..=cap) of a set of sentences.
#[derive(Debug)]
pub struct SpanTrie {
    root: TrieNode,
}

impl SpanTrie {
    pub fn build(sentences: &[EvidenceSentence], cap: usize) -> Result<SpanTrie, ConstrainError> {
        let mut root = TrieNode::default();
        for sentence in sentences {
            for token in &sentence.tokens {
                if RESERVED.contains(&token.as_str()) {
                    return Err(ConstrainError::MetaToken {
                        token: token.clone(),
                    });
                }
            }
            for start in 0..sentence.tokens.len() {
                let end = (start + cap).min(sentence.tokens.len());
                root.insert(&sentence.tokens[start..end]);
            }
        }
        Ok(SpanTrie { root })
    }

    fn has_words(&self) -> bool {
        !self.root.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Phase {
    ExpectOpenClaim,
    /// Just after `{`: no claim word taken yet.
    ClaimOpened,
    /// At least one claim word taken in the current span.
    InClaim { taken: usize },
    /// The insertion sentinel was taken; only `}` may follow.
    ClaimSentinel,
    ExpectOpenEvidence { ins: bool },
    /// Inside `[ … ]`; `path` is the trie walk so far (empty right after
    /// `[`), `del` marks a taken deletion sentinel.
    InEvidence { ins: bool, del: bool, path: Vec<String> },
    ExpectNatOp,
    Done,
}

/// Token-level automaton for one claim/evidence pair.
#[derive(Debug)]
pub struct Constrainer {
    claim: Vec<String>,
    trie: SpanTrie,
    max_span_words: usize,
    cursor: usize,
    phase: Phase,
}

/// Result of a successful [`Constrainer::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Continue,
    Done,
}

impl Constrainer {
    pub fn new(
        claim: &str,
        sentences: &[EvidenceSentence],
        max_span_words: usize,
    ) -> Result<Constrainer, ConstrainError> {
        let claim = tokenize(claim);
        if claim.is_empty() {
            return Err(ConstrainError::EmptyClaim);
        }
        for token in &claim {
            if RESERVED.contains(&token.as_str()) {
                return Err(ConstrainError::MetaToken {
                    token: token.clone(),
                });
            }
        }
        let trie = SpanTrie::build(sentences, max_span_words)?;
        Ok(Constrainer {
            claim,
            trie,
            max_span_words,
            cursor: 0,
            phase: Phase::ExpectOpenClaim,
        })
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Tokens legal at this point, in a fixed deterministic order. Empty
    /// exactly when the automaton is done.
    pub fn allowed_next(&self) -> Vec<String> {
        match &self.phase {
            Phase::ExpectOpenClaim => vec!["{".to_owned()],
            Phase::ClaimOpened => {
                let mut out = vec![self.claim[self.cursor].clone()];
                // An insertion needs a real evidence span to pair with.
                if self.trie.has_words() {
                    out.push(INS_SENTINEL.to_owned());
                }
                out
            }
            Phase::InClaim { taken } => {
                let mut out = Vec::new();
                if *taken < self.max_span_words && self.cursor < self.claim.len() {
                    out.push(self.claim[self.cursor].clone());
                }
                out.push("}".to_owned());
                out
            }
            Phase::ClaimSentinel => vec!["}".to_owned()],
            Phase::ExpectOpenEvidence { .. } => vec!["[".to_owned()],
            Phase::InEvidence { ins, del, path } => {
                if *del {
                    return vec!["]".to_owned()];
                }
                let node = self
                    .trie
                    .root
                    .walk(path)
                    .expect("evidence path was stepped through the trie");
                let mut out = Vec::new();
                if path.is_empty() && !*ins {
                    out.push(DEL_SENTINEL.to_owned());
                }
                out.extend(node.children.keys().cloned());
                if !path.is_empty() || *del {
                    out.push("]".to_owned());
                }
                out
            }
            Phase::ExpectNatOp => EMITTABLE_NATOPS
                .iter()
                .map(|op| op.token().to_owned())
                .collect(),
            Phase::Done => Vec::new(),
        }
    }

    /// Consume one token; errors leave the state unchanged.
    pub fn step(&mut self, token: &str) -> Result<StepOutcome, ConstrainError> {
        // `==` is accepted wherever `≡` is, and only there, unless the
        // operand texts themselves contain it as a word.
        let effective = if self.phase == Phase::ExpectNatOp && token == "==" {
            "≡"
        } else {
            token
        };
        let allowed = self.allowed_next();
        if !allowed.iter().any(|t| t == effective) {
            return Err(ConstrainError::IllegalToken {
                token: token.to_owned(),
                allowed,
            });
        }
        self.phase = match std::mem::replace(&mut self.phase, Phase::Done) {
            Phase::ExpectOpenClaim => Phase::ClaimOpened,
            Phase::ClaimOpened => {
                if effective == INS_SENTINEL {
                    Phase::ClaimSentinel
                } else {
                    self.cursor += 1;
                    Phase::InClaim { taken: 1 }
                }
            }
            Phase::InClaim { taken } => {
                if effective == "}" {
                    Phase::ExpectOpenEvidence { ins: false }
                } else {
                    self.cursor += 1;
                    Phase::InClaim { taken: taken + 1 }
                }
            }
            Phase::ClaimSentinel => Phase::ExpectOpenEvidence { ins: true },
            Phase::ExpectOpenEvidence { ins } => Phase::InEvidence {
                ins,
                del: false,
                path: Vec::new(),
            },
            Phase::InEvidence { ins, del, mut path } => {
                if effective == "]" {
                    Phase::ExpectNatOp
                } else if effective == DEL_SENTINEL {
                    Phase::InEvidence {
                        ins,
                        del: true,
                        path,
                    }
                } else {
                    path.push(effective.to_owned());
                    Phase::InEvidence { ins, del, path }
                }
            }
            Phase::ExpectNatOp => {
                debug_assert!(NatOp::parse_token(effective).is_some());
                if self.cursor == self.claim.len() {
                    Phase::Done
                } else {
                    Phase::ExpectOpenClaim
                }
            }
            Phase::Done => unreachable!("done admits no tokens"),
        };
        if self.is_done() {
            Ok(StepOutcome::Done)
        } else {
            Ok(StepOutcome::Continue)
        }
    }
}

/// Line protocol over the automaton, used by the command-line interface:
/// `NEXT?` prints the allowed tokens space-separated (`DONE` once
/// finished); `STEP <token>` advances and prints `OK`, `OK DONE`, or
/// `ERR <message>`.
pub fn run_protocol<R: BufRead, W: Write>(
    constrainer: &mut Constrainer,
    input: R,
    mut output: W,
) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "NEXT?" {
            if constrainer.is_done() {
                writeln!(output, "DONE")?;
            } else {
                writeln!(output, "{}", constrainer.allowed_next().join(" "))?;
            }
        } else if let Some(token) = line.strip_prefix("STEP ") {
            match constrainer.step(token.trim()) {
                Ok(StepOutcome::Done) => writeln!(output, "OK DONE")?,
                Ok(StepOutcome::Continue) => writeln!(output, "OK")?,
                Err(err) => writeln!(output, "ERR {err}")?,
            }
        } else {
            writeln!(output, "ERR unrecognized command {line:?}")?;
        }
        output.flush()?;
    }
    Ok(())
}
