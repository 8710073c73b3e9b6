//! Lexical knowledge store.
//!
//! Five optional tab-separated tables feed proof annotation:
//!
//! * `paraphrases` — `lhs<TAB>rhs<TAB>OP`: a phrase (or word) pair with the
//!   operator relating the evidence-side `rhs` to the claim-side `lhs`.
//! * `aliases` — `canonical<TAB>alias`: alternative surface forms of one
//!   entity.
//! * `relations` — `id<TAB>OP_CLAIM_TO_EVIDENCE<TAB>OP_EVIDENCE_TO_CLAIM`:
//!   named binary relations with the operator to use for each orientation;
//!   the two operators must be converses of each other.
//! * `hierarchy` — `child<TAB>parent<TAB>edge_type`: rows whose edge type
//!   is `instance_of`, `part_of`, or `subclass_of` build an acyclic
//!   taxonomy; any other edge type records an instance
//!   (`source<TAB>target<TAB>relation_id`) of a named relation.
//! * `negation` — one negation word per line.
//!
//! All files are UTF-8; blank lines and lines whose first non-blank
//! character is `#` are skipped; duplicate keys keep the last row and
//! produce a warning. Operator columns accept the markup tokens as well as
//! the mnemonics `EQ`, `FWD`, `REV`, `NEG`, `ALT`, `COV`, `IND`.

use crate::natlog::NatOp;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Edge types that build the taxonomy; anything else names a relation.
pub const TAXONOMY_EDGE_TYPES: [&str; 3] = ["instance_of", "part_of", "subclass_of"];

/// How far taxonomy queries look for ancestors.
pub const ANCESTOR_DEPTH: usize = 3;

#[derive(Debug, Error)]
pub enum KbError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Schema {
        file: String,
        line: usize,
        message: String,
    },
    #[error("taxonomy contains a cycle through {node:?}")]
    Cycle { node: String },
    #[error("relation instance {origin:?} -> {target:?} uses undefined relation {relation:?}")]
    UndefinedRelation {
        origin: String,
        target: String,
        relation: String,
    },
}

/// Non-fatal observations made while loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbWarning {
    pub file: String,
    pub line: usize,
    pub detail: String,
}

impl fmt::Display for KbWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.detail)
    }
}

/// The operators attached to a named relation, one per orientation.
/// `claim_to_evidence` applies when the claim-side phrase is the instance
/// edge's source; `evidence_to_claim` when it is the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationOps {
    pub claim_to_evidence: NatOp,
    pub evidence_to_claim: NatOp,
}

/// Result of a taxonomy query between a claim-side and an evidence-side
/// node. Operators read evidence-to-claim, like every proof operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HierarchyRelation {
    /// No usable connection.
    NoInfo,
    /// One node is an ancestor of the other within [`ANCESTOR_DEPTH`].
    ParentChild(NatOp),
    /// Distinct nodes with a common ancestor within [`ANCESTOR_DEPTH`] of
    /// each.
    Sibling,
    /// Same taxonomy component, but nothing closer.
    Connected,
}

impl HierarchyRelation {
    pub fn natop(self) -> Option<NatOp> {
        match self {
            HierarchyRelation::NoInfo => None,
            HierarchyRelation::ParentChild(op) => Some(op),
            HierarchyRelation::Sibling => Some(NatOp::Alternation),
            HierarchyRelation::Connected => Some(NatOp::Independence),
        }
    }
}

/// Paths to the source tables; every table is optional.
#[derive(Debug, Default, Clone)]
pub struct KbSources {
    pub paraphrases: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub relations: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,
    pub negation: Option<PathBuf>,
}

/// In-memory store over all tables, plus lookup indices.
///
/// Serializes (e.g. for snapshots) to a stable, fully sorted JSON document;
/// use [`KbStore::from_snapshot_json`] to restore one, which rebuilds the
/// skipped indices.
#[derive(Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct KbStore {
    /// Lowercased claim phrase -> lowercased evidence phrase -> operator.
    paraphrases: BTreeMap<String, BTreeMap<String, NatOp>>,
    /// Canonical name -> all surface forms (the canonical name included).
    aliases: BTreeMap<String, BTreeSet<String>>,
    /// Relation id -> operators.
    relations: BTreeMap<String, RelationOps>,
    /// Taxonomy: child -> parent -> edge type.
    hierarchy: BTreeMap<String, BTreeMap<String, String>>,
    /// Relation instances: source -> target -> relation id.
    relation_instances: BTreeMap<String, BTreeMap<String, String>>,
    /// Lowercased negation words.
    negation: BTreeSet<String>,

    /// Lowercased surface form -> canonical name.
    #[serde(skip)]
    surface_index: BTreeMap<String, String>,
    /// Lowercased taxonomy node name -> node name.
    #[serde(skip)]
    node_index: BTreeMap<String, String>,
    /// Taxonomy node -> undirected component id.
    #[serde(skip)]
    components: BTreeMap<String, usize>,
}

impl KbStore {
    /// Load all configured tables and build the indices.
    pub fn load(sources: &KbSources) -> Result<(KbStore, Vec<KbWarning>), KbError> {
        let mut store = KbStore::default();
        let mut warnings = Vec::new();
        if let Some(path) = &sources.paraphrases {
            let text = read(path)?;
            store.load_paraphrases_text(&label(path), &text, &mut warnings)?;
        }
        if let Some(path) = &sources.aliases {
            let text = read(path)?;
            store.load_aliases_text(&label(path), &text, &mut warnings)?;
        }
        if let Some(path) = &sources.relations {
            let text = read(path)?;
            store.load_relations_text(&label(path), &text, &mut warnings)?;
        }
        if let Some(path) = &sources.hierarchy {
            let text = read(path)?;
            store.load_hierarchy_text(&label(path), &text, &mut warnings)?;
        }
        if let Some(path) = &sources.negation {
            let text = read(path)?;
            store.load_negation_text(&label(path), &text, &mut warnings)?;
        }
        store.finalize()?;
        Ok((store, warnings))
    }

    /// Restore a store from its JSON snapshot.
    pub fn from_snapshot_json(json: &str) -> Result<KbStore, serde_json::Error> {
        let mut store: KbStore = serde_json::from_str(json)?;
        store
            .finalize()
            .map_err(|e| serde::de::Error::custom(e.to_string()))?;
        Ok(store)
    }

    /// Stable, sorted snapshot of the tables. Byte-identical across runs
    /// for the same content.
    pub fn to_snapshot_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("plain data serializes");
        json.push('\n');
        json
    }

    pub fn load_paraphrases_text(
        &mut self,
        file: &str,
        text: &str,
        warnings: &mut Vec<KbWarning>,
    ) -> Result<(), KbError> {
        for (line_no, fields) in rows(text) {
            let [lhs, rhs, op] = take_fields(file, line_no, &fields)?;
            let op = parse_op(file, line_no, op)?;
            let (lhs, rhs) = (lhs.to_lowercase(), rhs.to_lowercase());
            let slot = self.paraphrases.entry(lhs.clone()).or_default();
            if slot.insert(rhs.clone(), op).is_some() {
                warnings.push(KbWarning {
                    file: file.to_owned(),
                    line: line_no,
                    detail: format!("duplicate paraphrase ({lhs:?}, {rhs:?}); keeping this row"),
                });
            }
        }
        Ok(())
    }

    pub fn load_aliases_text(
        &mut self,
        file: &str,
        text: &str,
        warnings: &mut Vec<KbWarning>,
    ) -> Result<(), KbError> {
        // Tracks, per surface form, which entity claimed it, so that a
        // re-listed surface moves to the later entity with a warning.
        let mut seen: BTreeMap<String, String> = BTreeMap::new();
        for (canonical, surfaces) in &self.aliases {
            for surface in surfaces {
                seen.insert(surface.to_lowercase(), canonical.clone());
            }
        }
        for (line_no, fields) in rows(text) {
            let [canonical, alias] = take_fields(file, line_no, &fields)?;
            for surface in [canonical, alias] {
                let key = surface.to_lowercase();
                match seen.get(&key) {
                    Some(owner) if owner != canonical => {
                        warnings.push(KbWarning {
                            file: file.to_owned(),
                            line: line_no,
                            detail: format!(
                                "surface {surface:?} moves from entity {owner:?} to {canonical:?}"
                            ),
                        });
                        if let Some(set) = self.aliases.get_mut(owner) {
                            set.retain(|s| s.to_lowercase() != key);
                        }
                    }
                    Some(_) if surface == alias => {
                        warnings.push(KbWarning {
                            file: file.to_owned(),
                            line: line_no,
                            detail: format!("duplicate alias {alias:?} for {canonical:?}"),
                        });
                    }
                    _ => {}
                }
                seen.insert(key, canonical.to_owned());
            }
            let set = self.aliases.entry(canonical.to_owned()).or_default();
            set.insert(canonical.to_owned());
            set.insert(alias.to_owned());
        }
        Ok(())
    }

    pub fn load_relations_text(
        &mut self,
        file: &str,
        text: &str,
        warnings: &mut Vec<KbWarning>,
    ) -> Result<(), KbError> {
        for (line_no, fields) in rows(text) {
            let [id, forward, backward] = take_fields(file, line_no, &fields)?;
            let claim_to_evidence = parse_op(file, line_no, forward)?;
            let evidence_to_claim = parse_op(file, line_no, backward)?;
            if evidence_to_claim != claim_to_evidence.converse() {
                return Err(KbError::Schema {
                    file: file.to_owned(),
                    line: line_no,
                    message: format!(
                        "relation {id:?}: {} and {} are not converses",
                        claim_to_evidence.token(),
                        evidence_to_claim.token()
                    ),
                });
            }
            let previous = self.relations.insert(
                id.to_owned(),
                RelationOps {
                    claim_to_evidence,
                    evidence_to_claim,
                },
            );
            if previous.is_some() {
                warnings.push(KbWarning {
                    file: file.to_owned(),
                    line: line_no,
                    detail: format!("duplicate relation {id:?}; keeping this row"),
                });
            }
        }
        Ok(())
    }

    pub fn load_hierarchy_text(
        &mut self,
        file: &str,
        text: &str,
        warnings: &mut Vec<KbWarning>,
    ) -> Result<(), KbError> {
        for (line_no, fields) in rows(text) {
            let [child, parent, edge_type] = take_fields(file, line_no, &fields)?;
            if child == parent {
                return Err(KbError::Schema {
                    file: file.to_owned(),
                    line: line_no,
                    message: format!("self edge on {child:?}"),
                });
            }
            let existing_taxonomy = self
                .hierarchy
                .get_mut(child)
                .map_or(false, |m| m.remove(parent).is_some());
            let existing_instance = self
                .relation_instances
                .get_mut(child)
                .map_or(false, |m| m.remove(parent).is_some());
            if existing_taxonomy || existing_instance {
                warnings.push(KbWarning {
                    file: file.to_owned(),
                    line: line_no,
                    detail: format!(
                        "duplicate edge ({child:?}, {parent:?}); keeping this row"
                    ),
                });
            }
            if TAXONOMY_EDGE_TYPES.contains(&edge_type) {
                self.hierarchy
                    .entry(child.to_owned())
                    .or_default()
                    .insert(parent.to_owned(), edge_type.to_owned());
            } else {
                self.relation_instances
                    .entry(child.to_owned())
                    .or_default()
                    .insert(parent.to_owned(), edge_type.to_owned());
            }
        }
        Ok(())
    }

    pub fn load_negation_text(
        &mut self,
        file: &str,
        text: &str,
        warnings: &mut Vec<KbWarning>,
    ) -> Result<(), KbError> {
        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let word = raw.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            if word.split_whitespace().count() != 1 {
                return Err(KbError::Schema {
                    file: file.to_owned(),
                    line: line_no,
                    message: format!("expected one word per line, found {word:?}"),
                });
            }
            if !self.negation.insert(word.to_lowercase()) {
                warnings.push(KbWarning {
                    file: file.to_owned(),
                    line: line_no,
                    detail: format!("duplicate negation word {word:?}"),
                });
            }
        }
        Ok(())
    }

    /// Validate cross-table references, reject taxonomy cycles, and build
    /// the lookup indices. Called by [`KbStore::load`] and
    /// [`KbStore::from_snapshot_json`].
    pub fn finalize(&mut self) -> Result<(), KbError> {
        for (source, targets) in &self.relation_instances {
            for (target, relation) in targets {
                if !self.relations.contains_key(relation) {
                    return Err(KbError::UndefinedRelation {
                        origin: source.clone(),
                        target: target.clone(),
                        relation: relation.clone(),
                    });
                }
            }
        }
        self.check_acyclic()?;

        self.surface_index = self
            .aliases
            .iter()
            .flat_map(|(canonical, surfaces)| {
                surfaces
                    .iter()
                    .map(move |s| (s.to_lowercase(), canonical.clone()))
            })
            .collect();

        let mut nodes = BTreeSet::new();
        for (child, parents) in &self.hierarchy {
            nodes.insert(child.clone());
            nodes.extend(parents.keys().cloned());
        }
        self.node_index = nodes
            .iter()
            .map(|n| (n.to_lowercase(), n.clone()))
            .collect();

        self.components = self.label_components(&nodes);
        Ok(())
    }

    fn check_acyclic(&self) -> Result<(), KbError> {
        // Iterative depth-first search with an explicit on-path set.
        let mut done: BTreeSet<&str> = BTreeSet::new();
        for start in self.hierarchy.keys() {
            if done.contains(start.as_str()) {
                continue;
            }
            let mut on_path: Vec<&str> = Vec::new();
            let mut stack: Vec<(&str, bool)> = vec![(start, false)];
            while let Some((node, exiting)) = stack.pop() {
                if exiting {
                    on_path.pop();
                    done.insert(node);
                    continue;
                }
                if done.contains(node) {
                    continue;
                }
                if on_path.contains(&node) {
                    return Err(KbError::Cycle {
                        node: node.to_owned(),
                    });
                }
                on_path.push(node);
                stack.push((node, true));
                if let Some(parents) = self.hierarchy.get(node) {
                    for parent in parents.keys().rev() {
                        stack.push((parent, false));
                    }
                }
            }
        }
        Ok(())
    }

    fn label_components(&self, nodes: &BTreeSet<String>) -> BTreeMap<String, usize> {
        let mut adjacency: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (child, parents) in &self.hierarchy {
            for parent in parents.keys() {
                adjacency.entry(child).or_default().push(parent);
                adjacency.entry(parent).or_default().push(child);
            }
        }
        let mut components = BTreeMap::new();
        let mut next_id = 0;
        for node in nodes {
            if components.contains_key(node) {
                continue;
            }
            let mut queue = VecDeque::from([node.as_str()]);
            while let Some(current) = queue.pop_front() {
                if components.insert(current.to_owned(), next_id).is_none() {
                    if let Some(neighbors) = adjacency.get(current) {
                        queue.extend(
                            neighbors
                                .iter()
                                .filter(|n| !components.contains_key(**n)),
                        );
                    }
                }
            }
            next_id += 1;
        }
        components
    }

    /// Operator for a paraphrase pair (claim phrase, evidence phrase);
    /// case-insensitive.
    pub fn paraphrase(&self, claim_phrase: &str, evidence_phrase: &str) -> Option<NatOp> {
        self.paraphrases
            .get(&claim_phrase.to_lowercase())?
            .get(&evidence_phrase.to_lowercase())
            .copied()
    }

    /// Canonical entity owning a surface form; case-insensitive.
    pub fn surface_entity(&self, phrase: &str) -> Option<&str> {
        self.surface_index
            .get(&phrase.to_lowercase())
            .map(String::as_str)
    }

    /// Taxonomy node matching a phrase; case-insensitive.
    pub fn node(&self, phrase: &str) -> Option<&str> {
        self.node_index
            .get(&phrase.to_lowercase())
            .map(String::as_str)
    }

    pub fn relation_ops(&self, id: &str) -> Option<RelationOps> {
        self.relations.get(id).copied()
    }

    /// All relation instance edges, sorted by (source, target).
    pub fn relation_instances(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.relation_instances.iter().flat_map(|(source, targets)| {
            targets
                .iter()
                .map(move |(target, relation)| (source.as_str(), target.as_str(), relation.as_str()))
        })
    }

    pub fn is_negation(&self, word: &str) -> bool {
        self.negation.contains(&word.to_lowercase())
    }

    pub fn has_negation_words(&self) -> bool {
        !self.negation.is_empty()
    }

    /// Proper ancestors of a node with their minimum edge distance, up to
    /// `depth` edges away.
    fn ancestors(&self, node: &str, depth: usize) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        let mut frontier = VecDeque::from([(node.to_owned(), 0usize)]);
        while let Some((current, dist)) = frontier.pop_front() {
            if dist == depth {
                continue;
            }
            if let Some(parents) = self.hierarchy.get(&current) {
                for parent in parents.keys() {
                    if parent != node && !out.contains_key(parent) {
                        out.insert(parent.clone(), dist + 1);
                        frontier.push_back((parent.clone(), dist + 1));
                    }
                }
            }
        }
        out
    }

    /// Relate a claim-side node to an evidence-side node through the
    /// taxonomy. Checks, in order: identity (no information — plain
    /// equality is handled elsewhere), ancestry within [`ANCESTOR_DEPTH`]
    /// in either direction, a shared ancestor within [`ANCESTOR_DEPTH`] of
    /// each, and finally bare connectivity.
    pub fn hierarchy_relation(&self, claim_node: &str, evidence_node: &str) -> HierarchyRelation {
        if claim_node == evidence_node {
            return HierarchyRelation::NoInfo;
        }
        let claim_up = self.ancestors(claim_node, ANCESTOR_DEPTH);
        if claim_up.contains_key(evidence_node) {
            // The claim names the more specific concept, so the evidence
            // is strictly more general than the claim requires.
            return HierarchyRelation::ParentChild(NatOp::ReverseEntailment);
        }
        let evidence_up = self.ancestors(evidence_node, ANCESTOR_DEPTH);
        if evidence_up.contains_key(claim_node) {
            return HierarchyRelation::ParentChild(NatOp::ForwardEntailment);
        }
        if claim_up.keys().any(|a| evidence_up.contains_key(a)) {
            return HierarchyRelation::Sibling;
        }
        match (
            self.components.get(claim_node),
            self.components.get(evidence_node),
        ) {
            (Some(a), Some(b)) if a == b => HierarchyRelation::Connected,
            _ => HierarchyRelation::NoInfo,
        }
    }
}

fn read(path: &Path) -> Result<String, KbError> {
    std::fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Data rows of a tab-separated file: (1-based line number, trimmed fields).
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<String>)> + '_ {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        Some((i + 1, raw.split('\t').map(|f| f.trim().to_owned()).collect()))
    })
}

fn take_fields<'a, const N: usize>(
    file: &str,
    line: usize,
    fields: &'a [String],
) -> Result<[&'a str; N], KbError> {
    if fields.len() != N {
        return Err(KbError::Schema {
            file: file.to_owned(),
            line,
            message: format!("expected {N} tab-separated fields, found {}", fields.len()),
        });
    }
    let mut out = [""; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        if field.is_empty() {
            return Err(KbError::Schema {
                file: file.to_owned(),
                line,
                message: "empty field".to_owned(),
            });
        }
        *slot = field;
    }
    Ok(out)
}

fn parse_op(file: &str, line: usize, token: &str) -> Result<NatOp, KbError> {
    NatOp::parse_token(token).ok_or_else(|| KbError::Schema {
        file: file.to_owned(),
        line,
        message: format!("unknown operator token {token:?}"),
    })
}
