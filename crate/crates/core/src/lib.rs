//! Natural-logic proof engine for claim verification.
//!
//! A claim is verified against retrieved evidence by rewriting it span by
//! span into an evidence-grounded sentence. Every rewrite step carries a
//! natural-logic operator describing how the step changes what the sentence
//! asserts; folding the operators through the relation-composition table
//! yields one of three verdicts: SUPPORTS, REFUTES, or NOT ENOUGH INFO.
//!
//! The crate provides:
//!
//! - [`natlog`]: the seven-operator algebra, composition (join) and the
//!   verdict fold, plus a set-theoretic reference model used by the tests.
//! - [`proof`] / [`markup`]: the proof data model and its textual markup
//!   (`{ claim span } [ evidence span ] OP` triples).
//! - [`constrain`]: a token-level automaton that restricts generation to
//!   well-formed proofs over a given claim and evidence.
//! - [`kb`]: tab-separated lexical resources (paraphrases, aliases, typed
//!   relations, a concept hierarchy, a negation lexicon).
//! - [`annotate`]: the heuristic pipeline that turns claim/evidence pairs
//!   into proofs (chunking, alignment, operator assignment, label- and
//!   transformation-consistent filtering).
//! - [`metrics`]: label accuracy, evidence-aware accuracy, evidence
//!   sensitivity, and rationale overlap scores.
//! - [`explain`]: fixed-phrase natural-language rendering of proof steps.
//! - [`records`] / [`batch`]: JSONL record schemas and the streaming batch
//!   runners used by the command-line tool.

pub mod annotate;
pub mod batch;
pub mod constrain;
pub mod explain;
pub mod kb;
pub mod markup;
pub mod metrics;
pub mod natlog;
pub mod proof;
pub mod records;
