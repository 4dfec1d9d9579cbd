//! Serializable verdicts, counterexamples, and report schemas.
//!
//! Reports are plain data with a stable field order and no timestamps,
//! durations, or absolute paths, so byte-identical runs are reproducible
//! from identical manifests. The manifest hash is FNV-1a over the
//! manifest's own JSON encoding.

use serde::{Deserialize, Serialize};

use crate::enumerate::{Bounds, Cut, Slice};
use crate::ops::Val;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Worst of two verdicts; Fail dominates Inconclusive dominates Pass.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Pass, Pass) => Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Val>>,
}

impl Counterexample {
    pub fn text(description: impl Into<String>) -> Self {
        Counterexample { description: description.into(), term: None, table: None }
    }
}

/// Outcome of one verification suite. `instances` counts individual checked
/// statements; notes record coverage limits such as slice cuts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub verdict: Verdict,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteOutcome {
            name: name.into(),
            verdict: Verdict::Pass,
            instances: 0,
            failures: 0,
            first_counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> Counterexample) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            self.verdict = Verdict::Fail;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceStats {
    pub arity: usize,
    pub members: usize,
    pub saturated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<Cut>,
    pub work: u64,
    pub depth_counts: Vec<usize>,
}

impl SliceStats {
    pub fn of(slice: &Slice) -> Self {
        SliceStats {
            arity: slice.arity(),
            members: slice.len(),
            saturated: slice.saturated(),
            cut: slice.cut(),
            work: slice.work(),
            depth_counts: slice.depth_counts().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InventoryStats {
    pub spoilt: usize,
    pub partial: bool,
    pub slices: Vec<SliceStats>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub subject: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// One join or meet comparison between the fragments of two ideals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairCheck {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub expected: Vec<usize>,
    pub actual: Vec<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Eval-verified witness terms backing the check, when it produces any.
    pub witnesses: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealReport {
    pub ideal: Vec<usize>,
    pub signature: Vec<usize>,
    pub slices: Vec<SliceStats>,
    pub soundness: CheckOutcome,
    pub completeness: CheckOutcome,
    /// Witness term per ideal member, in member order.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub lattice: String,
    pub ground_size: usize,
    pub bounds: Bounds,
    pub inventory: InventoryStats,
    /// Why a bounded spoilt inventory suffices as the 𝒮 part of the
    /// generator lists.
    pub spoilt_truncation_note: String,
    /// Why finite joins and meets settle the complete (infinitary) claim.
    pub completeness_note: String,
    pub ideals: Vec<IdealReport>,
    pub injectivity: CheckOutcome,
    pub joins: Vec<PairCheck>,
    pub meets: Vec<PairCheck>,
    pub fail_count: u64,
    pub inconclusive_count: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct When4Report {
    pub retained_terms: u64,
    pub truncated: bool,
    pub reduced_representations: u64,
    pub checked_representations: u64,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
    pub anchored: Vec<SuiteOutcome>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructionStats {
    pub elements: usize,
    pub ground_size: usize,
    pub family: String,
    pub phi_count: usize,
    pub mediator_count: usize,
    pub noncovering_witnesses: Vec<Val>,
    pub range_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub lattice_source: String,
    pub lattice_hash: String,
    pub family: String,
    pub suites: Vec<String>,
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault_inject: Option<String>,
    pub determinism: String,
}

pub const DETERMINISM_NOTE: &str =
    "seed-free: no randomness, no timestamps, no environment in outputs; \
     identical manifests reproduce byte-identical reports";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub manifest_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<Vec<SuiteOutcome>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub when4: Option<When4Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingReport>,
    pub fail_count: u64,
    pub inconclusive_count: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn hash_hex(bytes: &[u8]) -> String {
    format!("{:016x}", fnv1a64(bytes))
}

pub fn manifest_hash(manifest: &RunManifest) -> String {
    let encoded = serde_json::to_string(manifest).expect("manifests serialize");
    hash_hex(encoded.as_bytes())
}
