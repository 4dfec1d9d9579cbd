//! The gadget generators: unary characteristic functions and ternary
//! mediators.
//!
//! For each lattice element p, the unary gadget φ_p acts on A as the
//! characteristic function of A_p and pins the distinguished points: 2 is
//! fixed, while 0, 1 and 4 all map to 4. A mediator m_p^{q1,q2} exists
//! whenever p <= q1 v q2. Fed a point x together with the values φ_{q1}(x)
//! and φ_{q2}(x) it answers φ_p(x); on inputs that show a 2 in some
//! coordinate while the last two stay clear of {1,4} it answers 2; on
//! everything else it answers 4. The first two cases can overlap, and the
//! constructor checks pointwise that they prescribe the same value there,
//! so well-definedness is a verified table property rather than an
//! assumption.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::family::{check_noncovering, IndexFamily, DISTINGUISHED};
use crate::lattice::{FiniteLattice, Ideal};
use crate::ops::{Operation, Val};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("no index set for element {0}")]
    UnknownIndex(usize),
    #[error("family indexes {family} sets but the lattice has {lattice} elements")]
    FamilyMismatch { lattice: usize, family: usize },
    #[error("family is not non-covering: A_{0} is covered by the other sets")]
    Covered(usize),
    #[error("triple ({p}, {q1}, {q2}) is inadmissible: {p} is not below {q1} v {q2}")]
    InadmissibleTriple { p: usize, q1: usize, q2: usize },
    #[error(
        "mediator cases disagree at ({x}, {y}, {z}): m_{p}^{{{q1},{q2}}} \
         would need both {a} and {b}"
    )]
    WellDefinednessViolation {
        p: usize,
        q1: usize,
        q2: usize,
        x: Val,
        y: Val,
        z: Val,
        a: Val,
        b: Val,
    },
}

/// Provenance label attached to a generator. The derived order (φ's by
/// element, then mediators by triple, then spoilt inventory entries) is the
/// export and enumeration order, so determinism of every downstream report
/// leans on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenLabel {
    Phi(usize),
    M { p: usize, q1: usize, q2: usize },
    Spoilt(usize),
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenLabel::Phi(p) => write!(f, "phi_{p}"),
            GenLabel::M { p, q1, q2 } => write!(f, "m_{p}^{{{q1},{q2}}}"),
            GenLabel::Spoilt(i) => write!(f, "s{i}"),
        }
    }
}

/// The unary gadget for element `p` of the family.
pub fn build_phi(family: &IndexFamily, p: usize) -> Result<Operation, GenError> {
    if p >= family.len() {
        return Err(GenError::UnknownIndex(p));
    }
    let g = family.ground().size();
    let table: Vec<Val> = (0..g)
        .map(|x| {
            let x = x as Val;
            if x == 2 {
                2
            } else if !family.ground().in_a(x) {
                4
            } else if family.member(p, x) {
                1
            } else {
                0
            }
        })
        .collect();
    Ok(Operation::new(1, g, table).expect("phi tables are well-formed by construction"))
}

/// The ternary mediator for an admissible triple, built from the φ tables.
pub fn build_m(
    lattice: &FiniteLattice,
    phi: &[Operation],
    p: usize,
    q1: usize,
    q2: usize,
) -> Result<Operation, GenError> {
    if !lattice.leq(p, lattice.join(q1, q2)) {
        return Err(GenError::InadmissibleTriple { p, q1, q2 });
    }
    let g = phi[p].ground();
    let tp = phi[p].table();
    let t1 = phi[q1].table();
    let t2 = phi[q2].table();
    let mut table = Vec::with_capacity(g * g * g);
    for x in 0..g {
        let (fp, f1, f2) = (tp[x], t1[x], t2[x]);
        for y in 0..g {
            let y = y as Val;
            for z in 0..g {
                let z = z as Val;
                let matches_phis = y == f1 && z == f2;
                let sees_two = (x == 2 || y == 2 || z == 2)
                    && y != 1
                    && y != 4
                    && z != 1
                    && z != 4;
                if matches_phis && sees_two && fp != 2 {
                    return Err(GenError::WellDefinednessViolation {
                        p,
                        q1,
                        q2,
                        x: x as Val,
                        y,
                        z,
                        a: fp,
                        b: 2,
                    });
                }
                table.push(if matches_phis {
                    fp
                } else if sees_two {
                    2
                } else {
                    4
                });
            }
        }
    }
    Ok(Operation::new(3, g, table).expect("m tables are well-formed by construction"))
}

/// All gadgets for one lattice/family pair: every φ_p plus every admissible
/// mediator, with triple lookup. Mediators are kept per triple even when
/// their tables coincide, since the term calculus identifies gadgets by
/// label, not by table.
#[derive(Debug, Clone)]
pub struct GeneratorSystem {
    lattice: FiniteLattice,
    family: IndexFamily,
    phi: Vec<Operation>,
    m_triples: Vec<(usize, usize, usize)>,
    m_ops: Vec<Operation>,
    m_lookup: HashMap<(usize, usize, usize), usize>,
}

impl GeneratorSystem {
    pub fn build(lattice: FiniteLattice, family: IndexFamily) -> Result<Self, GenError> {
        if family.len() != lattice.size() {
            return Err(GenError::FamilyMismatch {
                lattice: lattice.size(),
                family: family.len(),
            });
        }
        let covering = check_noncovering(&family);
        if let Some(&p) = covering.violations.first() {
            return Err(GenError::Covered(p));
        }
        let phi: Vec<Operation> = (0..lattice.size())
            .map(|p| build_phi(&family, p))
            .collect::<Result<_, _>>()?;
        let mut m_triples = Vec::new();
        let mut m_ops = Vec::new();
        let mut m_lookup = HashMap::new();
        for p in 0..lattice.size() {
            for q1 in 0..lattice.size() {
                for q2 in 0..lattice.size() {
                    if !lattice.leq(p, lattice.join(q1, q2)) {
                        continue;
                    }
                    m_lookup.insert((p, q1, q2), m_ops.len());
                    m_triples.push((p, q1, q2));
                    m_ops.push(build_m(&lattice, &phi, p, q1, q2)?);
                }
            }
        }
        let sys = GeneratorSystem { lattice, family, phi, m_triples, m_ops, m_lookup };
        sys.assert_m_agree_off_a();
        Ok(sys)
    }

    /// Every mediator takes the same values on triples whose first
    /// coordinate is a distinguished point (the cases no longer mention p,
    /// q1, q2 there). The closure enumeration applies a single
    /// representative mediator to such inputs, so this is checked once at
    /// build time instead of assumed.
    fn assert_m_agree_off_a(&self) {
        let g = self.ground_size();
        let Some((first, rest)) = self.m_ops.split_first() else {
            return;
        };
        for m in rest {
            for &x in DISTINGUISHED.iter() {
                let base = x as usize * g * g;
                for offset in 0..g * g {
                    assert_eq!(
                        m.table()[base + offset],
                        first.table()[base + offset],
                        "mediators must agree where the first coordinate is distinguished"
                    );
                }
            }
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn family(&self) -> &IndexFamily {
        &self.family
    }

    pub fn ground_size(&self) -> usize {
        self.family.ground().size()
    }

    pub fn phi(&self, p: usize) -> &Operation {
        &self.phi[p]
    }

    pub fn phis(&self) -> &[Operation] {
        &self.phi
    }

    pub fn m(&self, p: usize, q1: usize, q2: usize) -> Option<&Operation> {
        self.m_lookup.get(&(p, q1, q2)).map(|&i| &self.m_ops[i])
    }

    pub fn m_triples(&self) -> &[(usize, usize, usize)] {
        &self.m_triples
    }

    pub fn m_ops(&self) -> &[Operation] {
        &self.m_ops
    }

    pub fn m_count(&self) -> usize {
        self.m_ops.len()
    }

    /// Labeled generator list for the whole system, in export order.
    pub fn generators(&self) -> Vec<(GenLabel, Operation)> {
        let mut out = Vec::with_capacity(self.phi.len() + self.m_ops.len());
        for (p, op) in self.phi.iter().enumerate() {
            out.push((GenLabel::Phi(p), op.clone()));
        }
        for (i, &(p, q1, q2)) in self.m_triples.iter().enumerate() {
            out.push((GenLabel::M { p, q1, q2 }, self.m_ops[i].clone()));
        }
        out
    }

    /// Corrupts one cell of φ_p for robustness testing: the first member of
    /// A_p has its value flipped from 1 to 0. Mediator tables are left
    /// alone, so the system becomes inconsistent and the verification
    /// suites must notice. Returns the corrupted point.
    pub fn inject_phi_fault(&mut self, p: usize) -> Result<Val, GenError> {
        if p >= self.phi.len() {
            return Err(GenError::UnknownIndex(p));
        }
        let point = self.family.set(p)[0];
        let mut table = self.phi[p].table().to_vec();
        table[point as usize] = 0;
        self.phi[p] =
            Operation::new(1, self.ground_size(), table).expect("same table shape");
        Ok(point)
    }
}

/// Generator list over an explicit set of elements: their φ's, every
/// mediator, and the supplied spoilt inventory. The member set need not be
/// an ideal; join verification feeds it the union of two ideals.
pub fn generators_for_members(
    sys: &GeneratorSystem,
    members: &[usize],
    spoilt: &[Operation],
) -> Vec<(GenLabel, Operation)> {
    let mut out = Vec::with_capacity(members.len() + sys.m_count() + spoilt.len());
    for &p in members {
        out.push((GenLabel::Phi(p), sys.phi(p).clone()));
    }
    for (i, &(p, q1, q2)) in sys.m_triples().iter().enumerate() {
        out.push((GenLabel::M { p, q1, q2 }, sys.m_ops()[i].clone()));
    }
    for (i, op) in spoilt.iter().enumerate() {
        out.push((GenLabel::Spoilt(i), op.clone()));
    }
    out
}

/// The generating set for the fragment attached to an ideal: the φ_p with p
/// in the ideal, every mediator, and the supplied spoilt inventory.
pub fn generators_for_ideal(
    sys: &GeneratorSystem,
    ideal: &Ideal,
    spoilt: &[Operation],
) -> Vec<(GenLabel, Operation)> {
    generators_for_members(sys, ideal.members(), spoilt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{singleton_family, GroundSet};
    use crate::fixtures;
    use crate::lattice::principal_ideal;

    fn chain2_system() -> GeneratorSystem {
        let lat = fixtures::chain(2);
        let fam = singleton_family(lat.size()).unwrap();
        GeneratorSystem::build(lat, fam).unwrap()
    }

    #[test]
    fn chain2_phi_tables() {
        let sys = chain2_system();
        assert_eq!(sys.phi(0).table(), &[4, 4, 2, 1, 4, 0]);
        assert_eq!(sys.phi(1).table(), &[4, 4, 2, 0, 4, 1]);
    }

    #[test]
    fn phi_pins_distinguished_points() {
        for (_, lat) in fixtures::all() {
            let fam = singleton_family(lat.size()).unwrap();
            let sys = GeneratorSystem::build(lat, fam).unwrap();
            for p in 0..sys.lattice().size() {
                let phi = sys.phi(p);
                assert_eq!(phi.eval(&[2]).unwrap(), 2);
                for x in [0, 1, 4] {
                    assert_eq!(phi.eval(&[x]).unwrap(), 4);
                }
            }
        }
    }

    #[test]
    fn admissible_triple_counts() {
        let expected =
            [("one", 1), ("chain2", 7), ("chain3", 22), ("b2", 49), ("m3", 94), ("n5", 93)];
        for (name, lat) in fixtures::all() {
            let fam = singleton_family(lat.size()).unwrap();
            let sys = GeneratorSystem::build(lat, fam).unwrap();
            let want = expected.iter().find(|(n, _)| *n == name).unwrap().1;
            assert_eq!(sys.m_count(), want, "mediator count for {name}");
        }
    }

    #[test]
    fn chain2_mediator_values() {
        let sys = chain2_system();
        let m = sys.m(1, 1, 0).unwrap();
        assert_eq!(m.eval(&[3, 0, 1]).unwrap(), 0);
        assert_eq!(m.eval(&[5, 1, 4]).unwrap(), 4);
    }

    #[test]
    fn every_mediator_fixes_two() {
        for (_, lat) in fixtures::all() {
            let fam = singleton_family(lat.size()).unwrap();
            let sys = GeneratorSystem::build(lat, fam).unwrap();
            for m in sys.m_ops() {
                assert_eq!(m.eval(&[2, 2, 2]).unwrap(), 2);
            }
        }
    }

    #[test]
    fn mediator_recovers_phi_from_phi_values() {
        for (_, lat) in fixtures::all() {
            let fam = singleton_family(lat.size()).unwrap();
            let sys = GeneratorSystem::build(lat, fam).unwrap();
            for (i, &(p, q1, q2)) in sys.m_triples().iter().enumerate() {
                let m = &sys.m_ops()[i];
                for x in 0..sys.ground_size() as Val {
                    let y = sys.phi(q1).eval(&[x]).unwrap();
                    let z = sys.phi(q2).eval(&[x]).unwrap();
                    assert_eq!(
                        m.eval(&[x, y, z]).unwrap(),
                        sys.phi(p).eval(&[x]).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn inadmissible_triple_rejected() {
        let sys = chain2_system();
        assert!(sys.m(1, 0, 0).is_none());
        let err = build_m(sys.lattice(), sys.phis(), 1, 0, 0).unwrap_err();
        assert_eq!(err, GenError::InadmissibleTriple { p: 1, q1: 0, q2: 0 });
    }

    #[test]
    fn generator_ranges_stay_distinguished() {
        for (_, lat) in fixtures::all() {
            let fam = singleton_family(lat.size()).unwrap();
            let sys = GeneratorSystem::build(lat, fam).unwrap();
            for (label, op) in sys.generators() {
                for &v in op.table() {
                    assert!(
                        DISTINGUISHED.contains(&v),
                        "{label} takes the value {v} outside {{0,1,2,4}}"
                    );
                }
            }
        }
    }

    #[test]
    fn ideal_generators_for_chain2_bottom() {
        let sys = chain2_system();
        let ideal = principal_ideal(sys.lattice(), 0).unwrap();
        let gens = generators_for_ideal(&sys, &ideal, &[]);
        assert_eq!(gens.len(), 8);
        assert_eq!(gens[0].0, GenLabel::Phi(0));
        assert!(gens[1..].iter().all(|(l, _)| matches!(l, GenLabel::M { .. })));
    }

    #[test]
    fn label_order_is_phi_then_m_then_spoilt() {
        let mut labels = vec![
            GenLabel::Spoilt(0),
            GenLabel::M { p: 0, q1: 1, q2: 0 },
            GenLabel::Phi(1),
            GenLabel::M { p: 0, q1: 0, q2: 0 },
            GenLabel::Phi(0),
        ];
        labels.sort();
        assert_eq!(
            labels,
            vec![
                GenLabel::Phi(0),
                GenLabel::Phi(1),
                GenLabel::M { p: 0, q1: 0, q2: 0 },
                GenLabel::M { p: 0, q1: 1, q2: 0 },
                GenLabel::Spoilt(0),
            ]
        );
    }

    #[test]
    fn fault_injection_flips_one_cell() {
        let mut sys = chain2_system();
        let clean = sys.phi(0).clone();
        let point = sys.inject_phi_fault(0).unwrap();
        assert_eq!(point, 3);
        let dirty = sys.phi(0);
        let diffs: Vec<usize> = (0..clean.table().len())
            .filter(|&i| clean.table()[i] != dirty.table()[i])
            .collect();
        assert_eq!(diffs, vec![3]);
        assert_eq!(dirty.table()[3], 0);
    }

    #[test]
    fn rejects_covered_family() {
        let ground = GroundSet::new(7).unwrap();
        let fam = IndexFamily::new(ground, vec![vec![3, 5], vec![3], vec![5]]).unwrap();
        let err = GeneratorSystem::build(fixtures::chain(3), fam).unwrap_err();
        assert_eq!(err, GenError::Covered(0));
    }

    #[test]
    fn rejects_size_mismatch() {
        let fam = singleton_family(3).unwrap();
        let err = GeneratorSystem::build(fixtures::chain(2), fam).unwrap_err();
        assert_eq!(err, GenError::FamilyMismatch { lattice: 2, family: 3 });
    }
}
