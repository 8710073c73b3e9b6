//! Locate the claim tokens that a recorded rewrite changed.
//!
//! A claim that was produced by rewriting a source sentence (the factoid)
//! differs from it in one contiguous region. The region is recovered by
//! stripping the longest common prefix and suffix: for claim length `n`,
//! prefix `p`, and suffix `s` (capped so the two never overlap), the
//! mutated region is `p..n - s`. The range may be empty, which marks a
//! pure insertion or deletion point at `p`.

use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    /// The claim and the factoid are the same token sequence, so there is
    /// no rewrite to locate.
    #[error("claim and factoid are identical; no mutated region exists")]
    Identical,
}

/// Token range of `claim` not shared with `factoid`.
pub fn locate_mutated_region(
    claim: &[String],
    factoid: &[String],
) -> Result<Range<usize>, RegionError> {
    if claim == factoid {
        return Err(RegionError::Identical);
    }
    let prefix = claim
        .iter()
        .zip(factoid)
        .take_while(|(c, f)| c == f)
        .count();
    let max_suffix = claim.len().min(factoid.len()) - prefix;
    let suffix = claim
        .iter()
        .rev()
        .zip(factoid.iter().rev())
        .take_while(|(c, f)| c == f)
        .count()
        .min(max_suffix);
    Ok(prefix..claim.len() - suffix)
}
