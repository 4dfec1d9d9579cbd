//! Bounded closure enumeration.
//!
//! A slice is everything of one arity reachable from a generator list by
//! superposition, explored breadth-first by term depth. Members are
//! deduplicated extensionally; the first application producing a table is
//! its recorded witness, and the generator-major, tuple-lexicographic
//! sweep order makes every witness deterministic, cut or no cut.
//!
//! Three sweep-skipping rules keep desk-scale runs tractable without
//! changing the produced members or their witnesses. They rest on table
//! facts that are checked at planning time rather than assumed. All
//! generators output only distinguished points, so every composite member
//! does too, while projections always hit the point 3; hence "member id
//! past the seeded projections" and "non-projection table" coincide. Then:
//!
//! * all φ tables agree on the distinguished points, so later φ's are
//!   applied only to projection children (anywhere else they reproduce
//!   what the first φ already produced at the same spot of the sweep),
//! * all mediators agree wherever their first argument is distinguished,
//!   so later mediators only see tuples whose first child is a projection,
//! * a spoilt generator fed only non-projections factors through its
//!   restriction to the distinguished points, so spoilt generators are
//!   grouped by that restriction and only the first of each group sees
//!   all-non-projection tuples.
//!
//! When a planning check fails (a deliberately corrupted table, say), the
//! affected rule is dropped and the sweep stays exhaustive there. The
//! reference enumerator never plans any skips at all; agreement between
//! the two on small systems is part of the test suite.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::family::DISTINGUISHED;
use crate::generators::GenLabel;
use crate::ops::{compose_tables, table_len, Operation, Val};
use crate::term::Term;

/// Enumeration limits. `budget` caps distinct operations per slice;
/// `work_cap` caps table cells written per slice, so slices of different
/// arity spend comparable time before cutting. Whichever is hit first cuts
/// the slice at a deterministic spot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_arity: usize,
    pub depth: usize,
    pub budget: usize,
    pub work_cap: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_arity: 2, depth: 3, budget: 200_000, work_cap: 2_000_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cut {
    Budget { at_depth: usize },
    WorkCap { at_depth: usize },
}

/// How a member entered the slice: seeded projection, or a generator
/// applied to earlier members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Projection(usize),
    Apply { label: GenLabel, children: Vec<u32> },
}

/// One arity slice of a bounded closure. Ids below the arity are the
/// seeded projections; everything after is a composite in discovery order.
#[derive(Debug, Clone)]
pub struct Slice {
    arity: usize,
    ground: usize,
    ops: Vec<Operation>,
    origins: Vec<Origin>,
    depths: Vec<u32>,
    index: HashMap<Arc<[Val]>, u32>,
    depth_counts: Vec<usize>,
    work: u64,
    cut: Option<Cut>,
    saturated: bool,
}

impl Slice {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op(&self, id: u32) -> &Operation {
        &self.ops[id as usize]
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn origin(&self, id: u32) -> &Origin {
        &self.origins[id as usize]
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    pub fn depth_of(&self, id: u32) -> usize {
        self.depths[id as usize] as usize
    }

    /// Members per depth level, level 0 being the projections.
    pub fn depth_counts(&self) -> &[usize] {
        &self.depth_counts
    }

    pub fn find_table(&self, table: &[Val]) -> Option<u32> {
        self.index.get(table).copied()
    }

    pub fn find(&self, op: &Operation) -> Option<u32> {
        if op.arity() != self.arity || op.ground() != self.ground {
            return None;
        }
        self.find_table(op.table())
    }

    pub fn is_projection_member(&self, id: u32) -> bool {
        (id as usize) < self.arity
    }

    /// Table cells written while building the slice.
    pub fn work(&self) -> u64 {
        self.work
    }

    pub fn cut(&self) -> Option<Cut> {
        self.cut
    }

    /// True when a full sweep added nothing, so no further depth could
    /// either and the slice is the complete closure at this arity.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// The witness term of a member, rebuilt from its provenance chain.
    pub fn term(&self, id: u32) -> Term {
        match self.origin(id) {
            Origin::Projection(pos) => Term::Var(*pos),
            Origin::Apply { label, children } => {
                Term::Apply(*label, children.iter().map(|&c| self.term(c)).collect())
            }
        }
    }
}

/// All slices up to `bounds.max_arity` for one generator list.
#[derive(Debug, Clone)]
pub struct Closure {
    ground: usize,
    slices: Vec<Slice>,
}

impl Closure {
    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn slice(&self, arity: usize) -> &Slice {
        &self.slices[arity - 1]
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn max_arity(&self) -> usize {
        self.slices.len()
    }

    pub fn total_members(&self) -> usize {
        self.slices.iter().map(Slice::len).sum()
    }

    pub fn any_cut(&self) -> bool {
        self.slices.iter().any(|s| s.cut.is_some())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Full,
    FirstChildProj,
    AnyChildProj,
}

struct Planned {
    label: GenLabel,
    op: Operation,
    mode: Mode,
}

fn phi_tables_agree_off_a(phis: &[&Operation]) -> bool {
    let Some((first, rest)) = phis.split_first() else {
        return true;
    };
    rest.iter().all(|op| {
        DISTINGUISHED
            .iter()
            .all(|&x| op.table()[x as usize] == first.table()[x as usize])
    })
}

fn m_tables_agree_off_a(ms: &[&Operation], ground: usize) -> bool {
    let Some((first, rest)) = ms.split_first() else {
        return true;
    };
    let block = ground * ground;
    rest.iter().all(|op| {
        DISTINGUISHED.iter().all(|&x| {
            let base = x as usize * block;
            op.table()[base..base + block] == first.table()[base..base + block]
        })
    })
}

fn restriction_key(op: &Operation) -> Vec<Val> {
    let k = op.arity();
    let mut key = Vec::with_capacity(4usize.pow(k as u32));
    let mut idx = vec![0usize; k];
    let mut point = vec![0 as Val; k];
    loop {
        for (slot, &i) in point.iter_mut().zip(idx.iter()) {
            *slot = DISTINGUISHED[i];
        }
        key.push(op.eval(&point).expect("distinguished points are in range"));
        let mut pos = k;
        loop {
            if pos == 0 {
                return key;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < 4 {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn plan(gens: &[(GenLabel, Operation)], ground: usize, collapse: bool) -> Vec<Planned> {
    let collapse = collapse
        && ground >= 5
        && gens.iter().all(|(_, op)| {
            op.ground() == ground
                && op.table().iter().all(|v| DISTINGUISHED.contains(v))
        });
    let phis: Vec<&Operation> = gens
        .iter()
        .filter(|(l, op)| matches!(l, GenLabel::Phi(_)) && op.arity() == 1)
        .map(|(_, op)| op)
        .collect();
    let ms: Vec<&Operation> = gens
        .iter()
        .filter(|(l, op)| matches!(l, GenLabel::M { .. }) && op.arity() == 3)
        .map(|(_, op)| op)
        .collect();
    let phi_rule = collapse && phi_tables_agree_off_a(&phis);
    let m_rule = collapse && m_tables_agree_off_a(&ms, ground);
    let mut first_phi = true;
    let mut first_m = true;
    let mut groups: HashSet<Vec<Val>> = HashSet::new();
    gens.iter()
        .map(|(label, op)| {
            assert!(op.arity() <= MAX_GEN_ARITY, "generator arity out of range");
            let mode = if !collapse {
                Mode::Full
            } else {
                match label {
                    GenLabel::Phi(_) if op.arity() == 1 && phi_rule => {
                        if first_phi {
                            first_phi = false;
                            Mode::Full
                        } else {
                            Mode::FirstChildProj
                        }
                    }
                    GenLabel::M { .. } if op.arity() == 3 && m_rule => {
                        if first_m {
                            first_m = false;
                            Mode::Full
                        } else {
                            Mode::FirstChildProj
                        }
                    }
                    GenLabel::Spoilt(_) => {
                        if groups.insert(restriction_key(op)) {
                            Mode::Full
                        } else {
                            Mode::AnyChildProj
                        }
                    }
                    _ => Mode::Full,
                }
            };
            Planned { label: *label, op: op.clone(), mode }
        })
        .collect()
}

const MAX_GEN_ARITY: usize = 8;

struct TupleCfg {
    k: usize,
    total: u32,
    frontier_lo: u32,
    proj_bound: u32,
    first_child_proj: bool,
    any_child_proj: bool,
}

/// Visits qualifying child tuples in lexicographic order. Constraints:
/// some child must come from the newest depth level, and the mode may pin
/// the first child (or demand at least one child) to be a projection.
/// Returns false when the callback aborted the sweep.
fn visit_tuples(
    cfg: &TupleCfg,
    pos: usize,
    has_new: bool,
    has_proj: bool,
    children: &mut [u32],
    f: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if pos == cfg.k {
        return f(children);
    }
    let last = pos + 1 == cfg.k;
    let mut lo = 0u32;
    let mut hi = cfg.total;
    if pos == 0 && cfg.first_child_proj {
        hi = hi.min(cfg.proj_bound);
    }
    if last && !has_new {
        lo = lo.max(cfg.frontier_lo);
    }
    if last && cfg.any_child_proj && !has_proj {
        hi = hi.min(cfg.proj_bound);
    }
    for c in lo..hi {
        children[pos] = c;
        let next_new = has_new || c >= cfg.frontier_lo;
        let next_proj = has_proj || c < cfg.proj_bound;
        if !visit_tuples(cfg, pos + 1, next_new, next_proj, children, f) {
            return false;
        }
    }
    true
}

fn enumerate_slice_impl(
    gens: &[(GenLabel, Operation)],
    ground: usize,
    arity: usize,
    bounds: &Bounds,
    collapse: bool,
) -> Slice {
    assert!(arity >= 1, "slices start at arity 1");
    let planned = plan(gens, ground, collapse);
    let out_len = table_len(ground, arity);

    let mut ops: Vec<Operation> = Vec::new();
    let mut origins: Vec<Origin> = Vec::new();
    let mut depths: Vec<u32> = Vec::new();
    let mut index: HashMap<Arc<[Val]>, u32> = HashMap::new();
    for pos in 1..=arity {
        let op = Operation::projection(ground, arity, pos).expect("positive arity");
        index.insert(op.shared_table(), ops.len() as u32);
        origins.push(Origin::Projection(pos));
        depths.push(0);
        ops.push(op);
    }

    let mut work: u64 = 0;
    let mut cut: Option<Cut> = None;
    let mut saturated = false;
    let mut out_buf = vec![0 as Val; out_len];
    let max_k = planned.iter().map(|g| g.op.arity()).max().unwrap_or(1);
    let mut children_buf = vec![0u32; max_k];
    let mut frontier_lo: u32 = 0;

    'sweeps: for d in 1..=bounds.depth {
        let total = ops.len() as u32;
        for gen in &planned {
            let k = gen.op.arity();
            let cfg = TupleCfg {
                k,
                total,
                frontier_lo,
                proj_bound: arity as u32,
                first_child_proj: gen.mode == Mode::FirstChildProj,
                any_child_proj: gen.mode == Mode::AnyChildProj,
            };
            let gen_table = gen.op.table();
            let label = gen.label;
            let completed =
                visit_tuples(&cfg, 0, false, false, &mut children_buf[..k], &mut |children| {
                    if ops.len() >= bounds.budget {
                        cut = Some(Cut::Budget { at_depth: d });
                        return false;
                    }
                    if work + out_len as u64 > bounds.work_cap {
                        cut = Some(Cut::WorkCap { at_depth: d });
                        return false;
                    }
                    work += out_len as u64;
                    let mut refs: [&[Val]; MAX_GEN_ARITY] = [&[]; MAX_GEN_ARITY];
                    for (slot, &c) in refs.iter_mut().zip(children.iter()) {
                        *slot = ops[c as usize].table();
                    }
                    compose_tables(gen_table, ground, &refs[..children.len()], &mut out_buf);
                    if !index.contains_key(&out_buf[..]) {
                        let shared: Arc<[Val]> = Arc::from(&out_buf[..]);
                        index.insert(Arc::clone(&shared), ops.len() as u32);
                        origins.push(Origin::Apply { label, children: children.to_vec() });
                        depths.push(d as u32);
                        ops.push(Operation::from_shared(arity, ground, shared));
                    }
                    true
                });
            if !completed {
                break 'sweeps;
            }
        }
        frontier_lo = total;
        if ops.len() as u32 == total {
            saturated = true;
            break;
        }
    }

    let max_depth = depths.iter().max().copied().unwrap_or(0) as usize;
    let mut depth_counts = vec![0usize; max_depth + 1];
    for &dd in &depths {
        depth_counts[dd as usize] += 1;
    }
    Slice { arity, ground, ops, origins, depths, index, depth_counts, work, cut, saturated }
}

/// The arity slice of the closure of `gens`, with the sweep-skipping rules
/// active where their planning checks pass.
pub fn enumerate_slice(
    gens: &[(GenLabel, Operation)],
    ground: usize,
    arity: usize,
    bounds: &Bounds,
) -> Slice {
    enumerate_slice_impl(gens, ground, arity, bounds, true)
}

/// Reference enumerator: identical sweep with no skips planned. Slow, kept
/// for cross-checking the rules on small systems.
pub fn enumerate_slice_reference(
    gens: &[(GenLabel, Operation)],
    ground: usize,
    arity: usize,
    bounds: &Bounds,
) -> Slice {
    enumerate_slice_impl(gens, ground, arity, bounds, false)
}

/// Slices for every arity from 1 to `bounds.max_arity`.
pub fn enumerate_closure(
    gens: &[(GenLabel, Operation)],
    ground: usize,
    bounds: &Bounds,
) -> Closure {
    assert!(bounds.max_arity >= 1, "need at least the unary slice");
    let slices = (1..=bounds.max_arity)
        .map(|arity| enumerate_slice(gens, ground, arity, bounds))
        .collect();
    Closure { ground, slices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::term::{SymbolTable, Term};

    fn x() -> Term {
        Term::var(1)
    }

    #[test]
    fn chain2_unary_slice_saturates_at_four_members() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let slice =
            enumerate_slice(&sys.generators(), sys.ground_size(), 1, &Bounds::default());
        assert_eq!(slice.len(), 4);
        assert!(slice.saturated());
        assert_eq!(slice.cut(), None);
        assert_eq!(slice.depth_counts(), &[1, 3]);
        assert_eq!(slice.op(1), sys.phi(0));
        assert_eq!(slice.op(2), sys.phi(1));
        assert_eq!(slice.op(3).table(), &[4, 4, 2, 4, 4, 4]);
        assert_eq!(slice.term(3), Term::m(0, 0, 0, x(), x(), x()));
    }

    #[test]
    fn witness_terms_evaluate_to_their_members() {
        let sys = fixtures::singleton_system(&fixtures::chain(3));
        let symbols = SymbolTable::new(&sys);
        for arity in 1..=2 {
            let slice = enumerate_slice(
                &sys.generators(),
                sys.ground_size(),
                arity,
                &Bounds { depth: 2, ..Bounds::default() },
            );
            for id in 0..slice.len() as u32 {
                let term = slice.term(id);
                assert!(term.depth() <= slice.depth_of(id));
                assert_eq!(&term.eval(&symbols, arity).unwrap(), slice.op(id));
            }
        }
    }

    #[test]
    fn skipping_rules_match_the_reference_sweep() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let gens = sys.generators();
        for arity in 1..=2 {
            let fast = enumerate_slice(&gens, sys.ground_size(), arity, &Bounds::default());
            let slow = enumerate_slice_reference(
                &gens,
                sys.ground_size(),
                arity,
                &Bounds::default(),
            );
            assert_eq!(fast.ops(), slow.ops());
            assert_eq!(fast.origins(), slow.origins());
            assert_eq!(fast.saturated(), slow.saturated());
            assert_eq!(fast.cut(), slow.cut());
            assert!(fast.work() <= slow.work());
        }
    }

    #[test]
    fn budget_cut_is_recorded() {
        let sys = fixtures::singleton_system(&fixtures::m3());
        let bounds = Bounds { budget: 5, ..Bounds::default() };
        let slice = enumerate_slice(&sys.generators(), sys.ground_size(), 1, &bounds);
        assert_eq!(slice.len(), 5);
        assert_eq!(slice.cut(), Some(Cut::Budget { at_depth: 1 }));
        assert!(!slice.saturated());
    }

    #[test]
    fn work_cap_cut_is_recorded() {
        let sys = fixtures::singleton_system(&fixtures::m3());
        let bounds = Bounds { work_cap: 25, ..Bounds::default() };
        let slice = enumerate_slice(&sys.generators(), sys.ground_size(), 1, &bounds);
        assert_eq!(slice.work(), 18, "two whole tables of 9 cells fit under 25");
        assert_eq!(slice.cut(), Some(Cut::WorkCap { at_depth: 1 }));
        assert!(!slice.saturated());
    }

    #[test]
    fn depth_zero_gives_projections_only() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let bounds = Bounds { depth: 0, ..Bounds::default() };
        let slice = enumerate_slice(&sys.generators(), sys.ground_size(), 3, &bounds);
        assert_eq!(slice.len(), 3);
        assert!((0..3).all(|id| slice.is_projection_member(id)));
        assert_eq!(slice.cut(), None);
    }

    #[test]
    fn binary_slice_contains_dummy_extensions_of_phi() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let slice =
            enumerate_slice(&sys.generators(), sys.ground_size(), 2, &Bounds::default());
        for p in 0..2 {
            for pos in 1..=2 {
                let padded = sys.phi(p).add_dummies(2, pos).unwrap();
                assert!(slice.find(&padded).is_some());
            }
        }
    }

    #[test]
    fn closure_collects_all_arities() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let closure = enumerate_closure(&sys.generators(), sys.ground_size(), &Bounds::default());
        assert_eq!(closure.max_arity(), 2);
        assert_eq!(closure.slice(1).arity(), 1);
        assert_eq!(closure.slice(2).arity(), 2);
        assert!(!closure.any_cut());
    }
}
