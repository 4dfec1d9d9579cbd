//! Finite lattices presented by their full order relation, and their ideals.
//!
//! Elements are indices `0..n` into a name table. The order is stored as a
//! dense `leq` matrix; join and meet tables are computed once during
//! validation so later lookups are constant time. Ideals here are the
//! nonempty subsets that are closed downward and under binary joins; in a
//! finite lattice every such subset is the down-set of its largest element,
//! so they are in bijection with the elements themselves.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice must have at least one element")]
    Empty,
    #[error("element index {0} out of range")]
    UnknownElement(usize),
    #[error("not a partial order: {reason} at pair ({x}, {y})")]
    NotAPartialOrder { x: usize, y: usize, reason: String },
    #[error("not a lattice: elements {x} and {y} have no {kind}")]
    NotALattice { x: usize, y: usize, kind: &'static str },
    #[error("generator set is empty")]
    EmptyGenerator,
    #[error("not an ideal: {reason}")]
    NotAnIdeal { reason: String },
}

/// A finite lattice with precomputed join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from the full order relation given as `leq` pairs
    /// `(x, y)` meaning `x <= y`. Reflexive pairs may be omitted; they are
    /// added automatically. The relation must already be transitive and
    /// antisymmetric, and every pair of elements must have a least upper
    /// bound and a greatest lower bound.
    pub fn complete_from_order(
        names: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(x, y) in pairs {
            if x >= n {
                return Err(LatticeError::UnknownElement(x));
            }
            if y >= n {
                return Err(LatticeError::UnknownElement(y));
            }
            leq[x * n + y] = true;
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x * n + y] && leq[y * n + x] {
                    return Err(LatticeError::NotAPartialOrder {
                        x,
                        y,
                        reason: "antisymmetry violated".into(),
                    });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !leq[x * n + y] {
                    continue;
                }
                for z in 0..n {
                    if leq[y * n + z] && !leq[x * n + z] {
                        return Err(LatticeError::NotAPartialOrder {
                            x,
                            y: z,
                            reason: format!("transitivity violated via {y}"),
                        });
                    }
                }
            }
        }
        let mut join = vec![0usize; n * n];
        let mut meet = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                join[x * n + y] = Self::bound(n, &leq, x, y, true)
                    .ok_or(LatticeError::NotALattice { x, y, kind: "join" })?;
                meet[x * n + y] = Self::bound(n, &leq, x, y, false)
                    .ok_or(LatticeError::NotALattice { x, y, kind: "meet" })?;
            }
        }
        let mut bottom = 0;
        let mut top = 0;
        for x in 1..n {
            bottom = meet[bottom * n + x];
            top = join[top * n + x];
        }
        Ok(FiniteLattice { names, n, leq, join, meet, bottom, top })
    }

    fn bound(n: usize, leq: &[bool], x: usize, y: usize, upper: bool) -> Option<usize> {
        let rel = |a: usize, b: usize| if upper { leq[a * n + b] } else { leq[b * n + a] };
        let candidates: Vec<usize> = (0..n).filter(|&z| rel(x, z) && rel(y, z)).collect();
        let extreme: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&z| candidates.iter().all(|&w| rel(z, w)))
            .collect();
        match extreme.as_slice() {
            [z] => Some(*z),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// All order pairs `x <= y` with `x != y`, for serialization.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if x != y && self.leq(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The covering relation: pairs `(x, y)` where `y` covers `x`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                let between = (0..self.n)
                    .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// A nonempty, down-closed, join-closed subset, kept as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Ideal {
    members: Vec<usize>,
}

impl Ideal {
    /// Validates that `members` forms an ideal of `lattice`.
    pub fn new(lattice: &FiniteLattice, members: &[usize]) -> Result<Self, LatticeError> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(LatticeError::NotAnIdeal { reason: "empty member set".into() });
        }
        for &p in &sorted {
            if p >= lattice.size() {
                return Err(LatticeError::UnknownElement(p));
            }
        }
        for &p in &sorted {
            for q in 0..lattice.size() {
                if lattice.leq(q, p) && sorted.binary_search(&q).is_err() {
                    return Err(LatticeError::NotAnIdeal {
                        reason: format!("not down-closed: {q} <= {p} is missing"),
                    });
                }
            }
            for &q in &sorted {
                let j = lattice.join(p, q);
                if sorted.binary_search(&j).is_err() {
                    return Err(LatticeError::NotAnIdeal {
                        reason: format!("not join-closed: {p} v {q} = {j} is missing"),
                    });
                }
            }
        }
        Ok(Ideal { members: sorted })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The largest member; every ideal of a finite lattice is its down-set.
    pub fn max_member(&self) -> usize {
        *self.members.last().expect("ideals are nonempty")
    }
}

/// The down-set of a single element.
pub fn principal_ideal(lattice: &FiniteLattice, p: usize) -> Result<Ideal, LatticeError> {
    if p >= lattice.size() {
        return Err(LatticeError::UnknownElement(p));
    }
    let members: Vec<usize> = (0..lattice.size()).filter(|&z| lattice.leq(z, p)).collect();
    Ok(Ideal { members })
}

/// The least ideal containing `gens`: the down-closure of the join-closure.
pub fn generated_ideal(lattice: &FiniteLattice, gens: &[usize]) -> Result<Ideal, LatticeError> {
    if gens.is_empty() {
        return Err(LatticeError::EmptyGenerator);
    }
    for &p in gens {
        if p >= lattice.size() {
            return Err(LatticeError::UnknownElement(p));
        }
    }
    let n = lattice.size();
    let mut in_closure = vec![false; n];
    for &p in gens {
        in_closure[p] = true;
    }
    loop {
        let mut grew = false;
        let current: Vec<usize> = (0..n).filter(|&z| in_closure[z]).collect();
        for &x in &current {
            for &y in &current {
                let j = lattice.join(x, y);
                if !in_closure[j] {
                    in_closure[j] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let joined: Vec<usize> = (0..n).filter(|&z| in_closure[z]).collect();
    let members: Vec<usize> = (0..n)
        .filter(|&z| joined.iter().any(|&u| lattice.leq(z, u)))
        .collect();
    Ok(Ideal { members })
}

pub fn ideal_join(lattice: &FiniteLattice, a: &Ideal, b: &Ideal) -> Ideal {
    let mut gens: Vec<usize> = a.members().to_vec();
    gens.extend_from_slice(b.members());
    generated_ideal(lattice, &gens).expect("union of ideals is a nonempty generator set")
}

pub fn ideal_meet(lattice: &FiniteLattice, a: &Ideal, b: &Ideal) -> Ideal {
    let members: Vec<usize> =
        a.members().iter().copied().filter(|&p| b.contains(p)).collect();
    debug_assert!(members.contains(&lattice.bottom()));
    Ideal { members }
}

/// Every ideal, listed once, in element order of its largest member.
///
/// The count always equals the lattice size and the inclusion order on the
/// result is isomorphic to the lattice itself; both facts are exercised by
/// the test suite against a brute-force subset scan.
pub fn all_ideals(lattice: &FiniteLattice) -> Vec<Ideal> {
    (0..lattice.size())
        .map(|p| principal_ideal(lattice, p).expect("element index in range"))
        .collect()
}
