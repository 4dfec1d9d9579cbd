//! Ground sets and the indexed set families that drive the gadget tables.
//!
//! The ground set is `{0, .., size-1}` with the four distinguished points
//! 0, 1, 2, 4 reserved for the gadget case analysis; everything else,
//! including 3, forms the working region `A`. An index family assigns to
//! each lattice element `p` a nonempty subset `A_p` of `A`. The construction
//! needs the family to be non-covering: each `A_p` must stick out of the
//! union of all the others.

use crate::ops::Val;
use thiserror::Error;

pub const DISTINGUISHED: [Val; 4] = [0, 1, 2, 4];

/// Largest representable ground set; values are stored as bytes.
pub const MAX_GROUND: usize = 250;

/// Default cap applied when deriving ground sets whose size grows with the
/// family, as `independent_family` does.
pub const DEFAULT_GROUND_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("ground set needs at least 5 elements, got {0}")]
    GroundTooSmall(usize),
    #[error("ground set size {requested} exceeds the cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
    #[error("family must have at least one index")]
    NoIndices,
    #[error("set for index {index} is empty")]
    EmptySet { index: usize },
    #[error("set for index {index} contains {value}, which is not in A")]
    NotInA { index: usize, value: Val },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self, FamilyError> {
        if size < 5 {
            return Err(FamilyError::GroundTooSmall(size));
        }
        if size > MAX_GROUND {
            return Err(FamilyError::SizeLimit { requested: size, cap: MAX_GROUND });
        }
        Ok(GroundSet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn in_a(&self, v: Val) -> bool {
        (v as usize) < self.size && !DISTINGUISHED.contains(&v)
    }

    /// Members of `A` in increasing order: 3, then 5, 6, ...
    pub fn a_members(&self) -> Vec<Val> {
        (0..self.size as Val).filter(|&v| self.in_a(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFamily {
    ground: GroundSet,
    sets: Vec<Vec<Val>>,
}

impl IndexFamily {
    pub fn new(ground: GroundSet, sets: Vec<Vec<Val>>) -> Result<Self, FamilyError> {
        if sets.is_empty() {
            return Err(FamilyError::NoIndices);
        }
        let mut cleaned = Vec::with_capacity(sets.len());
        for (index, set) in sets.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(FamilyError::EmptySet { index });
            }
            if let Some(&bad) = set.iter().find(|&&v| !ground.in_a(v)) {
                return Err(FamilyError::NotInA { index, value: bad });
            }
            cleaned.push(set);
        }
        Ok(IndexFamily { ground, sets: cleaned })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, index: usize) -> &[Val] {
        &self.sets[index]
    }

    pub fn member(&self, index: usize, v: Val) -> bool {
        self.sets[index].binary_search(&v).is_ok()
    }

    pub fn sets(&self) -> &[Vec<Val>] {
        &self.sets
    }
}

/// Pairwise disjoint singletons: index `i` gets the `i`-th member of `A`.
/// The ground set is exactly large enough, `size = p_size + 4`.
pub fn singleton_family(p_size: usize) -> Result<IndexFamily, FamilyError> {
    if p_size == 0 {
        return Err(FamilyError::NoIndices);
    }
    let ground = GroundSet::new(p_size + 4)?;
    let a = ground.a_members();
    debug_assert_eq!(a.len(), p_size);
    let sets = a.iter().map(|&v| vec![v]).collect();
    IndexFamily::new(ground, sets)
}

/// An independent family: `A` has one point per subset of the index set,
/// and `A_p` collects the points whose subset contains `p`. Any Boolean
/// combination of the `A_p` is then realized, which is what independence
/// asks for. Needs `2^p_size + 4` ground elements, so a cap is enforced.
pub fn independent_family(p_size: usize, ground_cap: usize) -> Result<IndexFamily, FamilyError> {
    if p_size == 0 {
        return Err(FamilyError::NoIndices);
    }
    if p_size >= usize::BITS as usize {
        return Err(FamilyError::SizeLimit { requested: usize::MAX, cap: ground_cap });
    }
    let requested = (1usize << p_size) + 4;
    if requested > ground_cap {
        return Err(FamilyError::SizeLimit { requested, cap: ground_cap });
    }
    let ground = GroundSet::new(requested)?;
    let a = ground.a_members();
    debug_assert_eq!(a.len(), 1 << p_size);
    let sets = (0..p_size)
        .map(|i| {
            a.iter()
                .enumerate()
                .filter(|(subset, _)| subset & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    IndexFamily::new(ground, sets)
}

/// Outcome of the non-covering check. For each index the report either
/// records a witness point of `A_p` outside every other set, or lists the
/// index as a violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCoveringReport {
    pub witnesses: Vec<Option<Val>>,
    pub violations: Vec<usize>,
}

impl NonCoveringReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_noncovering(family: &IndexFamily) -> NonCoveringReport {
    let mut witnesses = Vec::with_capacity(family.len());
    let mut violations = Vec::new();
    for p in 0..family.len() {
        let witness = family
            .set(p)
            .iter()
            .copied()
            .find(|&v| (0..family.len()).all(|q| q == p || !family.member(q, v)));
        if witness.is_none() {
            violations.push(p);
        }
        witnesses.push(witness);
    }
    NonCoveringReport { witnesses, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_set_rejects_small_sizes() {
        assert_eq!(GroundSet::new(4).unwrap_err(), FamilyError::GroundTooSmall(4));
        assert!(GroundSet::new(5).is_ok());
    }

    #[test]
    fn a_starts_at_three_and_skips_four() {
        let g = GroundSet::new(9).unwrap();
        assert_eq!(g.a_members(), vec![3, 5, 6, 7, 8]);
        assert!(g.in_a(3));
        assert!(!g.in_a(4));
        assert!(!g.in_a(9));
    }

    #[test]
    fn singleton_family_of_two() {
        let fam = singleton_family(2).unwrap();
        assert_eq!(fam.ground().size(), 6);
        assert_eq!(fam.set(0), &[3]);
        assert_eq!(fam.set(1), &[5]);
        assert!(check_noncovering(&fam).ok());
    }

    #[test]
    fn singleton_family_of_five() {
        let fam = singleton_family(5).unwrap();
        assert_eq!(fam.ground().size(), 9);
        let all: Vec<Val> = (0..5).map(|p| fam.set(p)[0]).collect();
        assert_eq!(all, vec![3, 5, 6, 7, 8]);
    }

    #[test]
    fn independent_family_shapes() {
        let fam = independent_family(2, DEFAULT_GROUND_CAP).unwrap();
        assert_eq!(fam.ground().size(), 8);
        // A = {3, 5, 6, 7} standing for subsets {}, {p0}, {p1}, {p0,p1}
        assert_eq!(fam.set(0), &[5, 7]);
        assert_eq!(fam.set(1), &[6, 7]);
        assert!(check_noncovering(&fam).ok());

        let fam1 = independent_family(1, DEFAULT_GROUND_CAP).unwrap();
        assert_eq!(fam1.ground().size(), 6);
        assert_eq!(fam1.set(0), &[5]);
    }

    #[test]
    fn independent_family_respects_cap() {
        let err = independent_family(4, DEFAULT_GROUND_CAP).unwrap_err();
        assert_eq!(err, FamilyError::SizeLimit { requested: 20, cap: DEFAULT_GROUND_CAP });
        assert!(independent_family(4, 32).is_ok());
    }

    #[test]
    fn noncovering_flags_a_covered_set() {
        let ground = GroundSet::new(7).unwrap();
        // A = {3, 5, 6}; the middle set is covered by the union of the others
        let fam = IndexFamily::new(
            ground,
            vec![vec![3, 5], vec![3, 6], vec![6]],
        )
        .unwrap();
        let report = check_noncovering(&fam);
        assert!(!report.ok());
        assert_eq!(report.violations, vec![1, 2]);
        assert_eq!(report.witnesses[0], Some(5));
    }

    #[test]
    fn family_rejects_values_outside_a() {
        let ground = GroundSet::new(6).unwrap();
        let err = IndexFamily::new(ground, vec![vec![4]]).unwrap_err();
        assert_eq!(err, FamilyError::NotInA { index: 0, value: 4 });
    }
}
