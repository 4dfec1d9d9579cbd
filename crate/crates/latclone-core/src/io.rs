//! JSON exchange formats for lattices, index families, and operations.
//!
//! The documents deliberately carry a little redundancy (the `A` block of a
//! family, the derivable ground size of an operation table); loading
//! cross-checks it so a hand-edited file that drifted out of sync is
//! rejected instead of silently reinterpreted.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{FamilyError, GroundSet, IndexFamily};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::ops::{OpError, Operation, Val};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not valid JSON: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("{0}")]
    Invalid(String),
}

impl IoError {
    /// True for failures of content (bad order, bad family, bad table), as
    /// opposed to unreadable files or malformed JSON.
    pub fn is_validation(&self) -> bool {
        !matches!(self, IoError::Io { .. } | IoError::Parse { .. })
    }
}

/// A finite lattice as an element list plus `x <= y` pairs. Reflexive
/// pairs may be omitted; the relation must otherwise be a lattice order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub leq: Vec<(usize, usize)>,
}

impl LatticeDoc {
    pub fn from_lattice(lattice: &FiniteLattice) -> Self {
        LatticeDoc {
            elements: lattice.names().to_vec(),
            leq: lattice.strict_pairs(),
        }
    }

    pub fn into_lattice(self) -> Result<FiniteLattice, IoError> {
        Ok(FiniteLattice::complete_from_order(self.elements, &self.leq)?)
    }
}

/// An index family over the ground set `{0, .., ground_size-1}`. The keys
/// of `sets` are element indices rendered as strings; `a` restates the
/// non-distinguished part of the ground set and is checked on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub ground_size: usize,
    #[serde(rename = "A")]
    pub a: Vec<Val>,
    pub sets: BTreeMap<String, Vec<Val>>,
}

impl FamilyDoc {
    pub fn from_family(family: &IndexFamily) -> Self {
        FamilyDoc {
            ground_size: family.ground().size(),
            a: family.ground().a_members(),
            sets: family
                .sets()
                .iter()
                .enumerate()
                .map(|(p, set)| (p.to_string(), set.clone()))
                .collect(),
        }
    }

    pub fn into_family(self) -> Result<IndexFamily, IoError> {
        let ground = GroundSet::new(self.ground_size)?;
        if self.a != ground.a_members() {
            return Err(IoError::Invalid(format!(
                "the A block {:?} does not match the ground set of size {}, whose A is {:?}",
                self.a,
                self.ground_size,
                ground.a_members()
            )));
        }
        let len = self.sets.len();
        let mut sets = vec![None; len];
        for (key, set) in self.sets {
            let p: usize = key.parse().map_err(|_| {
                IoError::Invalid(format!("set key {key:?} is not an element index"))
            })?;
            let slot = sets.get_mut(p).ok_or_else(|| {
                IoError::Invalid(format!("set key {p} outside the contiguous range 0..{len}"))
            })?;
            if slot.replace(set).is_some() {
                return Err(IoError::Invalid(format!("set key {p} appears twice")));
            }
        }
        let sets = sets
            .into_iter()
            .map(|s| s.expect("every slot filled once by the loop above"))
            .collect();
        Ok(IndexFamily::new(ground, sets)?)
    }
}

/// A finitary operation as a dense table, last variable fastest. The
/// ground size is the arity-th root of the table length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpDoc {
    pub arity: usize,
    pub table: Vec<Val>,
}

impl OpDoc {
    pub fn from_op(op: &Operation) -> Self {
        OpDoc { arity: op.arity(), table: op.table().to_vec() }
    }

    pub fn into_op(self) -> Result<Operation, IoError> {
        if self.arity == 0 {
            return Err(IoError::Invalid("operations here are at least unary".into()));
        }
        let ground = (self.table.len() as f64).powf(1.0 / self.arity as f64).round() as usize;
        if ground.checked_pow(self.arity as u32) != Some(self.table.len()) {
            return Err(IoError::Invalid(format!(
                "table length {} is not a perfect arity-{} power",
                self.table.len(),
                self.arity
            )));
        }
        Ok(Operation::new(self.arity, ground, self.table)?)
    }
}

/// One mediator table together with its triple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MediatorDoc {
    pub p: usize,
    pub q1: usize,
    pub q2: usize,
    #[serde(flatten)]
    pub op: OpDoc,
}

/// The full construction for one lattice: everything `build` writes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub lattice: LatticeDoc,
    pub family: FamilyDoc,
    pub phis: Vec<OpDoc>,
    pub mediators: Vec<MediatorDoc>,
    pub noncovering_witnesses: Vec<Val>,
}

/// Witness terms deriving each φ_p of an ideal from the ideal's generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealWitnessDoc {
    pub ideal: Vec<usize>,
    pub witnesses: Vec<String>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes pretty-printed JSON with a trailing newline through a
/// sibling temp file and a rename, so readers never observe a torn write.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report types");
    text.push('\n');
    write_text_atomic(path, &text)
}

pub fn write_text_atomic(path: &Path, text: &str) -> Result<(), IoError> {
    let io_err = |source| IoError::Io { path: path.display().to_string(), source };
    let file_name = path
        .file_name()
        .ok_or_else(|| IoError::Invalid(format!("{} has no file name", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, text).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::all_ideals;

    #[test]
    fn lattice_doc_round_trips() {
        let lat = fixtures::m3();
        let doc = LatticeDoc::from_lattice(&lat);
        let back = doc.into_lattice().unwrap();
        assert_eq!(back.names(), lat.names());
        for x in 0..lat.size() {
            for y in 0..lat.size() {
                assert_eq!(back.leq(x, y), lat.leq(x, y));
                assert_eq!(back.join(x, y), lat.join(x, y));
            }
        }
    }

    #[test]
    fn lattice_doc_accepts_omitted_reflexive_pairs() {
        let doc = LatticeDoc {
            elements: vec!["bot".into(), "top".into()],
            leq: vec![(0, 1)],
        };
        let lat = doc.into_lattice().unwrap();
        assert!(lat.leq(0, 0));
        assert_eq!(lat.top(), 1);
    }

    #[test]
    fn non_lattice_order_is_a_validation_error() {
        // two incomparable elements with no top
        let doc = LatticeDoc {
            elements: vec!["a".into(), "b".into()],
            leq: vec![],
        };
        let err = doc.into_lattice().unwrap_err();
        assert!(err.is_validation(), "{err}");
    }

    #[test]
    fn family_doc_round_trips() {
        let sys = fixtures::singleton_system(&fixtures::b2());
        let doc = FamilyDoc::from_family(sys.family());
        let back = doc.into_family().unwrap();
        assert_eq!(back.sets(), sys.family().sets());
        assert_eq!(back.ground().size(), sys.ground_size());
    }

    #[test]
    fn family_doc_rejects_wrong_a_block() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let mut doc = FamilyDoc::from_family(sys.family());
        doc.a = vec![3];
        assert!(doc.into_family().is_err());
    }

    #[test]
    fn family_doc_rejects_gap_in_set_keys() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let mut doc = FamilyDoc::from_family(sys.family());
        let set = doc.sets.remove("0").unwrap();
        doc.sets.insert("7".into(), set);
        assert!(doc.into_family().is_err());
    }

    #[test]
    fn op_doc_round_trips_and_checks_length() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let doc = OpDoc::from_op(sys.phi(0));
        let back = doc.into_op().unwrap();
        assert_eq!(&back, sys.phi(0));

        let bad = OpDoc { arity: 2, table: vec![0; 35] };
        assert!(bad.into_op().is_err());
    }

    #[test]
    fn atomic_write_then_read_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("doc.json");
        let doc = LatticeDoc::from_lattice(&fixtures::n5());
        write_json_atomic(&path, &doc).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.ends_with('\n'));
        let back: LatticeDoc = read_json(&path).unwrap();
        assert_eq!(back.elements, doc.elements);
        assert!(!dir.path().join("doc.json.tmp").exists());
    }

    #[test]
    fn missing_file_and_bad_json_are_distinguished() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.json");
        match read_json::<LatticeDoc>(&missing) {
            Err(IoError::Io { .. }) => {}
            other => panic!("expected an io error, got {other:?}"),
        }
        let garbled = dir.path().join("garbled.json");
        fs::write(&garbled, "{ not json").unwrap();
        match read_json::<LatticeDoc>(&garbled) {
            Err(e @ IoError::Parse { .. }) => assert!(!e.is_validation()),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn ideal_witness_doc_serializes_terms() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let ideal = &all_ideals(sys.lattice())[1];
        let doc = IdealWitnessDoc {
            ideal: ideal.members().to_vec(),
            witnesses: ideal
                .members()
                .iter()
                .map(|&p| {
                    crate::embedding::derive_phi_witness(&sys, ideal.members(), p)
                        .unwrap()
                        .to_string()
                })
                .collect(),
        };
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("phi_0(x1)"));
    }
}
