//! The distracted / spoilt calculus.
//!
//! A unary operation is distracted when it sends some working point into
//! {2,4}. A member t of the generated clone is unspoilt when plugging
//! unary members into its coordinates can land the composite in Φ, and
//! spoilt otherwise. The classifier searches assignments drawn from
//! Φ ∪ {id} only; completeness of that restriction is itself one of the
//! verified lemma statements, and `classify_spoilt_over_pool` provides the
//! slow cross-check against an arbitrary unary pool on small systems.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::enumerate::{enumerate_closure, Bounds, Closure};
use crate::family::GroundSet;
use crate::generators::GeneratorSystem;
use crate::ops::{Operation, Val};
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("distraction is a unary notion, got arity {0}")]
    NotUnary(usize),
}

/// True when `f` maps some point of `A` into {2,4}.
pub fn is_distracted(f: &Operation, ground: &GroundSet) -> Result<bool, ClassifyError> {
    if f.arity() != 1 {
        return Err(ClassifyError::NotUnary(f.arity()));
    }
    Ok(ground.a_members().iter().any(|&a| matches!(f.table()[a as usize], 2 | 4)))
}

/// One coordinate of a spoilt-search assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnaryChoice {
    Id,
    Phi(usize),
}

impl fmt::Display for UnaryChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnaryChoice::Id => write!(f, "id"),
            UnaryChoice::Phi(p) => write!(f, "phi_{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpoiltVerdict {
    Spoilt,
    /// The first assignment, in lexicographic order with the leftmost
    /// coordinate most significant and Id before the φ's, whose composite
    /// lands in Φ, together with which φ it hits.
    Unspoilt { witness: Vec<UnaryChoice>, phi: usize },
}

impl SpoiltVerdict {
    pub fn is_spoilt(&self) -> bool {
        matches!(self, SpoiltVerdict::Spoilt)
    }
}

/// Reusable spoilt decision procedure for one generator system. Prebuilds
/// the φ lookup; the per-arity assignment index tables are built once per
/// batch, which is what makes classifying a six-figure slice affordable.
pub struct SpoiltClassifier<'a> {
    sys: &'a GeneratorSystem,
    phi_index: HashMap<&'a [Val], usize>,
}

impl<'a> SpoiltClassifier<'a> {
    pub fn new(sys: &'a GeneratorSystem) -> Self {
        let mut phi_index = HashMap::new();
        for (p, op) in sys.phis().iter().enumerate() {
            phi_index.entry(op.table()).or_insert(p);
        }
        SpoiltClassifier { sys, phi_index }
    }

    fn options(&self) -> usize {
        self.sys.phis().len() + 1
    }

    /// For every assignment, in search order, the composed table index of
    /// each ground point: composite[x] = f.table[indices[x]].
    fn indices_for(&self, arity: usize) -> Vec<Vec<usize>> {
        let g = self.sys.ground_size();
        let options = self.options();
        let mut digits = vec![0usize; arity];
        let mut out = Vec::with_capacity(options.pow(arity as u32));
        loop {
            let mut idx = vec![0usize; g];
            for (x, slot) in idx.iter_mut().enumerate() {
                let mut acc = 0usize;
                for &c in &digits {
                    let v = if c == 0 {
                        x as Val
                    } else {
                        self.sys.phi(c - 1).table()[x]
                    };
                    acc = acc * g + v as usize;
                }
                *slot = acc;
            }
            out.push(idx);
            let mut pos = arity;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < options {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    fn decode(&self, rank: usize, arity: usize) -> Vec<UnaryChoice> {
        let options = self.options();
        let mut digits = vec![0usize; arity];
        let mut rest = rank;
        for slot in digits.iter_mut().rev() {
            *slot = rest % options;
            rest /= options;
        }
        digits
            .into_iter()
            .map(|c| if c == 0 { UnaryChoice::Id } else { UnaryChoice::Phi(c - 1) })
            .collect()
    }

    fn classify_with(&self, indices: &[Vec<usize>], f: &Operation) -> SpoiltVerdict {
        let g = self.sys.ground_size();
        let mut composite = vec![0 as Val; g];
        for (rank, idx) in indices.iter().enumerate() {
            for (slot, &i) in composite.iter_mut().zip(idx.iter()) {
                *slot = f.table()[i];
            }
            if let Some(&p) = self.phi_index.get(&composite[..]) {
                return SpoiltVerdict::Unspoilt {
                    witness: self.decode(rank, f.arity()),
                    phi: p,
                };
            }
        }
        SpoiltVerdict::Spoilt
    }

    pub fn classify(&self, f: &Operation) -> SpoiltVerdict {
        self.classify_with(&self.indices_for(f.arity()), f)
    }

    /// Every assignment whose composite lands in Φ, in search order, with
    /// the φ it hits. Empty exactly when `f` is spoilt.
    pub fn all_witnesses(&self, f: &Operation) -> Vec<(Vec<UnaryChoice>, usize)> {
        let g = self.sys.ground_size();
        let mut composite = vec![0 as Val; g];
        let mut found = Vec::new();
        for (rank, idx) in self.indices_for(f.arity()).iter().enumerate() {
            for (slot, &i) in composite.iter_mut().zip(idx.iter()) {
                *slot = f.table()[i];
            }
            if let Some(&p) = self.phi_index.get(&composite[..]) {
                found.push((self.decode(rank, f.arity()), p));
            }
        }
        found
    }

    /// Classifies a batch of same-arity operations, sharing the assignment
    /// tables across the whole batch.
    pub fn classify_ops(&self, ops: &[Operation]) -> Vec<SpoiltVerdict> {
        let Some(first) = ops.first() else {
            return Vec::new();
        };
        let indices = self.indices_for(first.arity());
        ops.iter()
            .map(|f| {
                assert_eq!(f.arity(), first.arity(), "batch must share one arity");
                self.classify_with(&indices, f)
            })
            .collect()
    }
}

pub fn classify_spoilt(f: &Operation, sys: &GeneratorSystem) -> SpoiltVerdict {
    SpoiltClassifier::new(sys).classify(f)
}

/// Slow fallback: search assignments over an arbitrary unary pool instead
/// of Φ ∪ {id}, returning pool indices of the first assignment whose
/// composite lands in `phis`. Cross-validates the restricted search on
/// systems small enough to afford pool^arity composites.
pub fn classify_spoilt_over_pool(
    f: &Operation,
    phis: &[Operation],
    pool: &[Operation],
) -> Option<Vec<u32>> {
    assert!(!pool.is_empty(), "pool must contain at least one unary operation");
    let g = f.ground();
    for u in pool {
        assert_eq!(u.arity(), 1, "pool entries must be unary");
        assert_eq!(u.ground(), g, "pool entries must share the ground set");
    }
    let phi_tables: HashMap<&[Val], ()> =
        phis.iter().map(|op| (op.table(), ())).collect();
    let n = f.arity();
    let mut digits = vec![0usize; n];
    let mut composite = vec![0 as Val; g];
    loop {
        for (x, slot) in composite.iter_mut().enumerate() {
            let mut acc = 0usize;
            for &c in &digits {
                acc = acc * g + pool[c].table()[x] as usize;
            }
            *slot = f.table()[acc];
        }
        if phi_tables.contains_key(&composite[..]) {
            return Some(digits.iter().map(|&c| c as u32).collect());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < pool.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// The bounded spoilt inventory: the enumerated closure of Φ ∪ 𝓜, a
/// verdict for every member, and the spoilt members collected arity-major
/// in slice order, ready to serve as fragment generators.
#[derive(Debug)]
pub struct Inventory {
    closure: Closure,
    verdicts: Vec<Vec<SpoiltVerdict>>,
    spoilt_ops: Vec<Operation>,
    spoilt_sources: Vec<(usize, u32)>,
    partial: bool,
}

impl Inventory {
    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn verdicts(&self, arity: usize) -> &[SpoiltVerdict] {
        &self.verdicts[arity - 1]
    }

    pub fn spoilt_ops(&self) -> &[Operation] {
        &self.spoilt_ops
    }

    /// (arity, member id) provenance per spoilt inventory entry.
    pub fn spoilt_sources(&self) -> &[(usize, u32)] {
        &self.spoilt_sources
    }

    pub fn spoilt_count(&self) -> usize {
        self.spoilt_ops.len()
    }

    /// Witness term of the i-th spoilt entry, from the closure provenance.
    pub fn spoilt_term(&self, i: usize) -> Term {
        let (arity, id) = self.spoilt_sources[i];
        self.closure.slice(arity).term(id)
    }

    /// Member ids of the unspoilt part of one slice.
    pub fn unspoilt_ids(&self, arity: usize) -> Vec<u32> {
        self.verdicts(arity)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_spoilt())
            .map(|(id, _)| id as u32)
            .collect()
    }

    /// True when some slice was cut, so the inventory lists only part of
    /// the spoilt members within bounds.
    pub fn partial(&self) -> bool {
        self.partial
    }
}

pub fn spoilt_inventory(sys: &GeneratorSystem, bounds: &Bounds) -> Inventory {
    let closure = enumerate_closure(&sys.generators(), sys.ground_size(), bounds);
    let classifier = SpoiltClassifier::new(sys);
    let mut verdicts = Vec::with_capacity(closure.slices().len());
    let mut spoilt_ops = Vec::new();
    let mut spoilt_sources = Vec::new();
    for slice in closure.slices() {
        let slice_verdicts = classifier.classify_ops(slice.ops());
        for (id, verdict) in slice_verdicts.iter().enumerate() {
            if verdict.is_spoilt() {
                spoilt_ops.push(slice.op(id as u32).clone());
                spoilt_sources.push((slice.arity(), id as u32));
            }
        }
        verdicts.push(slice_verdicts);
    }
    let partial = closure.any_cut();
    Inventory { closure, verdicts, spoilt_ops, spoilt_sources, partial }
}
