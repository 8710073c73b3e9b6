//! The seven-operator natural-logic algebra.
//!
//! Each operator states a set-theoretic relation between two denotations
//! (see [`set_model`] for the executable definitions). Proof steps carry an
//! operator; composing the operators of consecutive steps with [`join`] and
//! projecting the final relation gives the verdict for a whole proof.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A natural-logic relation between two spans (or two sentences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatOp {
    /// `≡` — the two sides denote the same thing.
    Equivalence,
    /// `⊑` — the first side is strictly more specific.
    ForwardEntailment,
    /// `⊒` — the first side is strictly more general.
    ReverseEntailment,
    /// `⋏` — disjoint and jointly exhaustive (complements).
    Negation,
    /// `↕` — disjoint but not exhaustive (mutually exclusive alternatives).
    Alternation,
    /// `⌣` — overlapping and jointly exhaustive.
    Cover,
    /// `#` — none of the above; no usable relation.
    Independence,
}

/// All seven operators, in canonical declaration order.
pub const ALL_NATOPS: [NatOp; 7] = [
    NatOp::Equivalence,
    NatOp::ForwardEntailment,
    NatOp::ReverseEntailment,
    NatOp::Negation,
    NatOp::Alternation,
    NatOp::Cover,
    NatOp::Independence,
];

/// The six operators a proof generator may emit. Cover is representable in
/// parsed proofs but is never produced: its verdict contribution collapses
/// to Independence, so emitting it would only obscure the sequence.
pub const EMITTABLE_NATOPS: [NatOp; 6] = [
    NatOp::Equivalence,
    NatOp::ForwardEntailment,
    NatOp::ReverseEntailment,
    NatOp::Alternation,
    NatOp::Negation,
    NatOp::Independence,
];

impl NatOp {
    /// Canonical single-token serialization used in proof markup.
    pub fn token(self) -> &'static str {
        match self {
            NatOp::Equivalence => "≡",
            NatOp::ForwardEntailment => "<",
            NatOp::ReverseEntailment => ">",
            NatOp::Negation => "!",
            NatOp::Alternation => "|",
            NatOp::Cover => "~",
            NatOp::Independence => "#",
        }
    }

    /// Parse a markup or resource-file token. Accepts the canonical tokens,
    /// the ASCII alias `==` for `≡`, and the mnemonic aliases used in
    /// tab-separated resource files (`EQ`, `FWD`, `REV`, `NEG`, `ALT`,
    /// `COV`, `IND`).
    pub fn parse_token(tok: &str) -> Option<NatOp> {
        Some(match tok {
            "≡" | "==" | "EQ" => NatOp::Equivalence,
            "<" | "FWD" => NatOp::ForwardEntailment,
            ">" | "REV" => NatOp::ReverseEntailment,
            "!" | "NEG" => NatOp::Negation,
            "|" | "ALT" => NatOp::Alternation,
            "~" | "COV" => NatOp::Cover,
            "#" | "IND" => NatOp::Independence,
            _ => return None,
        })
    }

    /// Descriptive name, for error messages.
    pub fn name(self) -> &'static str {
        match self {
            NatOp::Equivalence => "equivalence",
            NatOp::ForwardEntailment => "forward entailment",
            NatOp::ReverseEntailment => "reverse entailment",
            NatOp::Negation => "negation",
            NatOp::Alternation => "alternation",
            NatOp::Cover => "cover",
            NatOp::Independence => "independence",
        }
    }

    /// The converse relation: swap the two sides.
    pub fn converse(self) -> NatOp {
        match self {
            NatOp::ForwardEntailment => NatOp::ReverseEntailment,
            NatOp::ReverseEntailment => NatOp::ForwardEntailment,
            other => other,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            NatOp::Equivalence => 0,
            NatOp::ForwardEntailment => 1,
            NatOp::ReverseEntailment => 2,
            NatOp::Negation => 3,
            NatOp::Alternation => 4,
            NatOp::Cover => 5,
            NatOp::Independence => 6,
        }
    }
}

impl fmt::Display for NatOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Serialize for NatOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.token())
    }
}

impl<'de> Deserialize<'de> for NatOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        NatOp::parse_token(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown operator token {s:?}")))
    }
}

/// Three-way verdict for a claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VeracityLabel {
    Supports,
    Refutes,
    NotEnoughInfo,
}

impl VeracityLabel {
    /// The exact label strings used in data files.
    pub fn as_str(self) -> &'static str {
        match self {
            VeracityLabel::Supports => "SUPPORTS",
            VeracityLabel::Refutes => "REFUTES",
            VeracityLabel::NotEnoughInfo => "NOT ENOUGH INFO",
        }
    }

    /// Parse a label string. `NOT_ENOUGH_INFO` is accepted as an alias.
    pub fn parse(s: &str) -> Option<VeracityLabel> {
        Some(match s {
            "SUPPORTS" => VeracityLabel::Supports,
            "REFUTES" => VeracityLabel::Refutes,
            "NOT ENOUGH INFO" | "NOT_ENOUGH_INFO" => VeracityLabel::NotEnoughInfo,
            _ => return None,
        })
    }
}

impl fmt::Display for VeracityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for VeracityLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for VeracityLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VeracityLabel::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown label {s:?}")))
    }
}

/// Composition table: `JOIN[a][b]` is the strongest single relation implied
/// by `a` holding between x and y and `b` holding between y and z. Cells
/// where several outcomes are possible collapse to Independence.
///
/// The table is not hand-written: it is derived from [`set_model`] by
/// enumerating every subset triple of universes up to size six and keeping
/// a cell only when the outcome is unique (the derivation is re-run and
/// checked against this constant in the test suite). Rows/columns follow
/// [`ALL_NATOPS`] order.
#[rustfmt::skip]
const JOIN: [[NatOp; 7]; 7] = {
    use NatOp::{Alternation as Alt, Cover as Cov, Equivalence as Eq,
                ForwardEntailment as Fwd, Independence as Ind,
                Negation as Neg, ReverseEntailment as Rev};
    [
        // right:  Eq   Fwd  Rev  Neg  Alt  Cov  Ind
        /* Eq  */ [Eq,  Fwd, Rev, Neg, Alt, Cov, Ind],
        /* Fwd */ [Fwd, Fwd, Ind, Alt, Alt, Ind, Ind],
        /* Rev */ [Rev, Ind, Rev, Cov, Ind, Cov, Ind],
        /* Neg */ [Neg, Cov, Alt, Eq,  Ind, Ind, Ind],
        /* Alt */ [Alt, Ind, Alt, Ind, Ind, Ind, Ind],
        /* Cov */ [Cov, Cov, Ind, Ind, Ind, Ind, Ind],
        /* Ind */ [Ind, Ind, Ind, Ind, Ind, Ind, Ind],
    ]
};

/// Compose the running relation with the next step's operator.
pub fn join(current: NatOp, next: NatOp) -> NatOp {
    JOIN[current.index()][next.index()]
}

/// Project a final relation to a verdict.
pub fn project(relation: NatOp) -> VeracityLabel {
    match relation {
        NatOp::Equivalence | NatOp::ForwardEntailment => VeracityLabel::Supports,
        NatOp::Negation | NatOp::Alternation => VeracityLabel::Refutes,
        NatOp::ReverseEntailment | NatOp::Cover | NatOp::Independence => {
            VeracityLabel::NotEnoughInfo
        }
    }
}

/// Fold a whole operator sequence into a verdict: start from Equivalence,
/// join each operator in order, project the result. The empty sequence is
/// an unchanged claim, i.e. SUPPORTS.
pub fn verdict(seq: &[NatOp]) -> VeracityLabel {
    project(seq.iter().fold(NatOp::Equivalence, |acc, &op| join(acc, op)))
}

pub mod set_model {
    //! Executable set-theoretic reference model.
    //!
    //! Denotations are subsets of a small finite universe, encoded as bit
    //! masks. [`relation_of`] classifies a pair of subsets by checking the
    //! defining conditions in a fixed order: equivalence first, then the
    //! disjointness/exhaustiveness relations (negation before alternation
    //! and cover), then the strict containments, with independence as the
    //! fallback. The order only matters for degenerate operands (the empty
    //! set and the full universe), which this order files under the
    //! symmetric relations; it is what makes the derived [`super::join`]
    //! table sound over *every* subset triple, degenerate ones included.

    use super::NatOp;

    /// A pair of subsets of a finite universe, as bit masks. `universe`
    /// must have all its low `size` bits set; `x` and `y` must be subsets.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub struct SetModel {
        pub x: u32,
        pub y: u32,
        pub universe: u32,
    }

    impl SetModel {
        pub fn new(x: u32, y: u32, universe: u32) -> SetModel {
            debug_assert_eq!(x & !universe, 0, "x must be a subset of the universe");
            debug_assert_eq!(y & !universe, 0, "y must be a subset of the universe");
            SetModel { x, y, universe }
        }
    }

    /// The unique relation whose defining condition holds for the pair.
    pub fn relation_of(m: SetModel) -> NatOp {
        let SetModel { x, y, universe: u } = m;
        if x == y {
            NatOp::Equivalence
        } else if x & y == 0 && x | y == u {
            NatOp::Negation
        } else if x & y == 0 {
            NatOp::Alternation
        } else if x | y == u {
            NatOp::Cover
        } else if x & !y & u == 0 {
            NatOp::ForwardEntailment
        } else if y & !x & u == 0 {
            NatOp::ReverseEntailment
        } else {
            NatOp::Independence
        }
    }
}
