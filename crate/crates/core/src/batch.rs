//! Line-oriented batch processing over JSONL streams.
//!
//! One JSON record per line in, one per line out. A record that fails —
//! unparseable, or internally inconsistent — becomes an error record on
//! its output line and the batch continues; only I/O failures abort.

use crate::annotate::Annotator;
use crate::records::{BatchErrorRecord, ClaimRecord, PredictionRecord, ProofRecord, ProofStatus};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::io::{self, BufRead, Write};

/// Outcome counts for one batch run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchSummary {
    /// Records that produced a normal output line.
    pub ok: usize,
    /// Records that produced an error line.
    pub failed: usize,
}

/// Parse every non-blank line of a JSONL stream. Each entry carries its
/// 1-based line number and either the record or the parse error message.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(
    reader: R,
) -> io::Result<Vec<(usize, Result<T, String>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push((
            i + 1,
            serde_json::from_str(&line).map_err(|e| e.to_string()),
        ));
    }
    Ok(out)
}

fn write_line<W: Write, T: Serialize>(writer: &mut W, record: &T) -> io::Result<()> {
    let json = serde_json::to_string(record).expect("output records always serialize");
    writer.write_all(json.as_bytes())?;
    writer.write_all(b"\n")
}

/// Annotate a stream of claim records into a stream of proof records.
pub fn annotate_stream<R: BufRead, W: Write>(
    annotator: &Annotator<'_>,
    input: R,
    output: &mut W,
) -> io::Result<BatchSummary> {
    let mut summary = BatchSummary::default();
    for (line_no, parsed) in read_jsonl::<ClaimRecord, R>(input)? {
        match parsed {
            Err(message) => {
                summary.failed += 1;
                let error = format!("line {line_no}: {message}");
                write_line(output, &BatchErrorRecord::new(None, error))?;
            }
            Ok(record) => match annotator.annotate(&record) {
                Ok(proof_record) => {
                    summary.ok += 1;
                    write_line(output, &proof_record)?;
                }
                Err(err) => {
                    summary.failed += 1;
                    write_line(output, &BatchErrorRecord::new(Some(record.id), err.to_string()))?;
                }
            },
        }
    }
    Ok(summary)
}

/// Re-derive a prediction from a stored proof record, checking the record
/// against its own proof.
pub fn verify_record(record: &ProofRecord) -> Result<PredictionRecord, String> {
    let prediction = |label, evidence| PredictionRecord {
        id: record.id.clone(),
        predicted_label: label,
        predicted_evidence: evidence,
        label: record.label,
        evidence: record.gold_evidence.clone().unwrap_or_default(),
    };
    match record.status {
        ProofStatus::Unresolved => {
            if record.steps.is_some() || record.proof.is_some() {
                return Err("unresolved record carries a proof".to_owned());
            }
            Ok(prediction(None, Vec::new()))
        }
        ProofStatus::Resolved => {
            let Some(proof) = record.to_proof() else {
                return Err("resolved record has no steps".to_owned());
            };
            if !proof.covers_claim() {
                return Err("proof steps do not cover the claim".to_owned());
            }
            let verdict = proof.verdict();
            if let Some(stored) = record.predicted_label {
                if stored != verdict {
                    return Err(format!(
                        "stored verdict {} disagrees with recomputed {}",
                        stored.as_str(),
                        verdict.as_str()
                    ));
                }
            }
            Ok(prediction(Some(verdict), proof.sources()))
        }
    }
}

/// Verify a stream of proof records into a stream of predictions.
pub fn verify_stream<R: BufRead, W: Write>(input: R, output: &mut W) -> io::Result<BatchSummary> {
    let mut summary = BatchSummary::default();
    for (line_no, parsed) in read_jsonl::<ProofRecord, R>(input)? {
        match parsed {
            Err(message) => {
                summary.failed += 1;
                let error = format!("line {line_no}: {message}");
                write_line(output, &BatchErrorRecord::new(None, error))?;
            }
            Ok(record) => match verify_record(&record) {
                Ok(prediction) => {
                    summary.ok += 1;
                    write_line(output, &prediction)?;
                }
                Err(error) => {
                    summary.failed += 1;
                    write_line(output, &BatchErrorRecord::new(Some(record.id), error))?;
                }
            },
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotate::AnnotateConfig;
    use crate::kb::KbStore;
    use crate::natlog::{NatOp, VeracityLabel};
    use crate::records::StepRecord;

    fn run_annotate(input: &str) -> (String, BatchSummary) {
        let kb = KbStore::default();
        let annotator = Annotator::new(&kb, AnnotateConfig::default());
        let mut out = Vec::new();
        let summary = annotate_stream(&annotator, input.as_bytes(), &mut out).unwrap();
        (String::from_utf8(out).unwrap(), summary)
    }

    #[test]
    fn annotate_stream_writes_one_line_per_record_and_continues_past_errors() {
        let input = concat!(
            r#"{"id":"a","claim":"The sky is blue .","evidence":[{"sid":"e1","text":"The sky is blue ."}]}"#,
            "\n",
            "not json\n",
            "\n",
            r#"{"id":"b","claim":"   "}"#,
            "\n",
        );
        let (out, summary) = run_annotate(input);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(summary, BatchSummary { ok: 1, failed: 2 });
        let first: ProofRecord = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first.status, ProofStatus::Resolved);
        let second: BatchErrorRecord = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(second.id, None);
        assert!(second.error.starts_with("line 2:"), "{}", second.error);
        let third: BatchErrorRecord = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(third.id.as_deref(), Some("b"));
    }

    fn resolved_record() -> ProofRecord {
        ProofRecord {
            id: "r1".to_owned(),
            claim: "The sky is blue .".to_owned(),
            status: ProofStatus::Resolved,
            reason: None,
            label: Some(VeracityLabel::Supports),
            predicted_label: Some(VeracityLabel::Supports),
            proof: None,
            steps: Some(vec![
                StepRecord {
                    claim: "The sky".to_owned(),
                    evidence: "The sky".to_owned(),
                    op: NatOp::Equivalence,
                    source: Some("e1".to_owned()),
                },
                StepRecord {
                    claim: "is blue .".to_owned(),
                    evidence: "is blue .".to_owned(),
                    op: NatOp::Equivalence,
                    source: Some("e1".to_owned()),
                },
            ]),
            sources: Some(vec!["e1".to_owned()]),
            gold_evidence: Some(vec![vec!["e1".to_owned()]]),
        }
    }

    #[test]
    fn verify_recomputes_the_verdict_and_evidence() {
        let record = resolved_record();
        let prediction = verify_record(&record).unwrap();
        assert_eq!(prediction.predicted_label, Some(VeracityLabel::Supports));
        assert_eq!(prediction.predicted_evidence, vec!["e1".to_owned()]);
        assert_eq!(prediction.evidence, vec![vec!["e1".to_owned()]]);
    }

    #[test]
    fn verify_rejects_interior_inconsistencies() {
        let mut stale = resolved_record();
        stale.predicted_label = Some(VeracityLabel::Refutes);
        let err = verify_record(&stale).unwrap_err();
        assert!(err.contains("disagrees"), "{err}");

        let mut gap = resolved_record();
        gap.steps.as_mut().unwrap().remove(1);
        let err = verify_record(&gap).unwrap_err();
        assert!(err.contains("cover"), "{err}");

        let mut no_steps = resolved_record();
        no_steps.steps = None;
        assert!(verify_record(&no_steps).is_err());

        let mut ghost = resolved_record();
        ghost.status = ProofStatus::Unresolved;
        assert!(verify_record(&ghost).unwrap_err().contains("unresolved"));
    }

    #[test]
    fn verify_passes_unresolved_records_through_as_empty_predictions() {
        let record = ProofRecord {
            id: "u1".to_owned(),
            claim: "x .".to_owned(),
            status: ProofStatus::Unresolved,
            reason: None,
            label: Some(VeracityLabel::Refutes),
            predicted_label: None,
            proof: None,
            steps: None,
            sources: None,
            gold_evidence: None,
        };
        let prediction = verify_record(&record).unwrap();
        assert_eq!(prediction.predicted_label, None);
        assert!(prediction.predicted_evidence.is_empty());
        assert_eq!(prediction.label, Some(VeracityLabel::Refutes));
    }

    #[test]
    fn verify_stream_round_trip() {
        let record = resolved_record();
        let line = serde_json::to_string(&record).unwrap();
        let input = format!("{line}\nnot json\n");
        let mut out = Vec::new();
        let summary = verify_stream(input.as_bytes(), &mut out).unwrap();
        assert_eq!(summary, BatchSummary { ok: 1, failed: 1 });
        let text = String::from_utf8(out).unwrap();
        let first: PredictionRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first.id, "r1");
    }
}
