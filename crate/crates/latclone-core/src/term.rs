//! Terms over the generator symbols: evaluation, leaf extraction, and
//! reduction.
//!
//! Projections never appear as explicit nodes; variables play their role,
//! which keeps the leaf calculus honest (a leaf is a subterm involving
//! exactly one generator symbol, and explicit projection nodes would
//! manufacture spurious shapes). Reduction removes every redex of the form
//! `m_p^{q1,q2}(s, phi_{q1}(s), phi_{q2}(s))`, replacing it by `phi_p(s)`;
//! since the replacement is a φ node over an already reduced subterm, one
//! post-order pass reaches the fixpoint. Evaluation preservation under
//! reduction is a tested contract, not an assumption.

use std::fmt;

use thiserror::Error;

use crate::generators::{GenLabel, GeneratorSystem};
use crate::ops::{OpError, Operation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("malformed term: {0}")]
    Malformed(String),
}

impl From<OpError> for TermError {
    fn from(e: OpError) -> Self {
        TermError::Malformed(e.to_string())
    }
}

/// Resolves generator labels to operation tables. Spoilt labels index into
/// a caller-supplied inventory, so the same term type serves both the bare
/// system and fragment enumerations.
pub struct SymbolTable<'a> {
    sys: &'a GeneratorSystem,
    spoilt: &'a [Operation],
}

impl<'a> SymbolTable<'a> {
    pub fn new(sys: &'a GeneratorSystem) -> Self {
        SymbolTable { sys, spoilt: &[] }
    }

    pub fn with_spoilt(sys: &'a GeneratorSystem, spoilt: &'a [Operation]) -> Self {
        SymbolTable { sys, spoilt }
    }

    pub fn ground(&self) -> usize {
        self.sys.ground_size()
    }

    pub fn resolve(&self, label: &GenLabel) -> Result<&Operation, TermError> {
        match *label {
            GenLabel::Phi(p) => {
                if p < self.sys.lattice().size() {
                    Ok(self.sys.phi(p))
                } else {
                    Err(TermError::Malformed(format!("no generator phi_{p}")))
                }
            }
            GenLabel::M { p, q1, q2 } => self.sys.m(p, q1, q2).ok_or_else(|| {
                TermError::Malformed(format!("no mediator for ({p}, {q1}, {q2})"))
            }),
            GenLabel::Spoilt(i) => self.spoilt.get(i).ok_or_else(|| {
                TermError::Malformed(format!("spoilt inventory has no entry {i}"))
            }),
        }
    }
}

/// A term over generator symbols and variables. Variables are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Apply(GenLabel, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn phi(p: usize, child: Term) -> Term {
        Term::Apply(GenLabel::Phi(p), vec![child])
    }

    pub fn m(p: usize, q1: usize, q2: usize, x: Term, y: Term, z: Term) -> Term {
        Term::Apply(GenLabel::M { p, q1, q2 }, vec![x, y, z])
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Apply(_, children) => {
                1 + children.iter().map(Term::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Apply(_, children) => {
                1 + children.iter().map(Term::node_count).sum::<usize>()
            }
        }
    }

    /// The variables occurring in the term, sorted and deduplicated.
    pub fn vars(&self) -> Vec<usize> {
        fn walk(t: &Term, out: &mut Vec<usize>) {
            match t {
                Term::Var(i) => out.push(*i),
                Term::Apply(_, children) => children.iter().for_each(|c| walk(c, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The n-ary operation the term denotes, built by recursive
    /// superposition over the symbol table.
    pub fn eval(&self, symbols: &SymbolTable, arity: usize) -> Result<Operation, TermError> {
        match self {
            Term::Var(i) => {
                if *i == 0 || *i > arity {
                    return Err(TermError::Malformed(format!(
                        "variable x{i} out of range for arity {arity}"
                    )));
                }
                Ok(Operation::projection(symbols.ground(), arity, *i)?)
            }
            Term::Apply(label, children) => {
                let op = symbols.resolve(label)?;
                if op.arity() != children.len() {
                    return Err(TermError::Malformed(format!(
                        "{label} expects {} arguments, got {}",
                        op.arity(),
                        children.len()
                    )));
                }
                let args: Vec<Operation> = children
                    .iter()
                    .map(|c| c.eval(symbols, arity))
                    .collect::<Result<_, _>>()?;
                Ok(op.compose(&args)?)
            }
        }
    }

    /// The minimal one-symbol subterms, sorted with multiplicity collapsed.
    pub fn leaves(&self) -> Vec<Term> {
        fn walk(t: &Term, out: &mut Vec<Term>) {
            if let Term::Apply(_, children) = t {
                if children.iter().all(|c| matches!(c, Term::Var(_))) {
                    out.push(t.clone());
                } else {
                    children.iter().for_each(|c| walk(c, out));
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// The elements v such that `phi_v(x_var)` is a leaf of this term.
    pub fn phi_leaves_on_var(&self, var: usize) -> Vec<usize> {
        self.leaves()
            .into_iter()
            .filter_map(|leaf| match leaf {
                Term::Apply(GenLabel::Phi(v), children) => match children.as_slice() {
                    [Term::Var(i)] if *i == var => Some(v),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    }

    /// Replaces `x_i` by `subs[i-1]` everywhere.
    pub fn substitute(&self, subs: &[Term]) -> Result<Term, TermError> {
        match self {
            Term::Var(i) => {
                if *i == 0 {
                    return Err(TermError::Malformed("variable x0 is not valid".into()));
                }
                subs.get(i - 1).cloned().ok_or_else(|| {
                    TermError::Malformed(format!("no substitute for variable x{i}"))
                })
            }
            Term::Apply(label, children) => {
                let subbed: Vec<Term> = children
                    .iter()
                    .map(|c| c.substitute(subs))
                    .collect::<Result<_, _>>()?;
                Ok(Term::Apply(*label, subbed))
            }
        }
    }

    fn redex_head(label: &GenLabel, children: &[Term]) -> Option<(usize, Term)> {
        let GenLabel::M { p, q1, q2 } = label else {
            return None;
        };
        let [s, second, third] = children else {
            return None;
        };
        let Term::Apply(GenLabel::Phi(a), s1) = second else {
            return None;
        };
        let Term::Apply(GenLabel::Phi(b), s2) = third else {
            return None;
        };
        if a == q1 && b == q2 && s1.len() == 1 && s1[0] == *s && s2.len() == 1 && s2[0] == *s
        {
            Some((*p, s.clone()))
        } else {
            None
        }
    }

    /// Rewrites every redex `m_p^{q1,q2}(s, phi_{q1}(s), phi_{q2}(s))` into
    /// `phi_p(s)`, where s is an arbitrary common subterm. One post-order
    /// pass suffices: a rewrite leaves a φ node over an already reduced
    /// subterm, which can complete a redex only at its parent, visited
    /// later.
    pub fn reduce(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Apply(label, children) => {
                let reduced: Vec<Term> = children.iter().map(Term::reduce).collect();
                if let Some((p, s)) = Self::redex_head(label, &reduced) {
                    return Term::phi(p, s);
                }
                Term::Apply(*label, reduced)
            }
        }
    }

    pub fn is_reduced(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Apply(label, children) => {
                children.iter().all(Term::is_reduced)
                    && Self::redex_head(label, children).is_none()
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Apply(label, children) => {
                write!(f, "{label}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn x() -> Term {
        Term::var(1)
    }

    fn y() -> Term {
        Term::var(2)
    }

    #[test]
    fn variable_evaluates_to_identity() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        let id = x().eval(&table, 1).unwrap();
        assert_eq!(id.as_projection(), Some(1));
    }

    #[test]
    fn mediator_applied_to_matching_phis_is_phi() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        for &(p, q1, q2) in sys.m_triples() {
            let term = Term::m(p, q1, q2, x(), Term::phi(q1, x()), Term::phi(q2, x()));
            assert_eq!(&term.eval(&table, 1).unwrap(), sys.phi(p));
        }
    }

    #[test]
    fn phi_composed_with_phi_ranges_over_two_and_four() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        let term = Term::phi(0, Term::phi(1, x()));
        let op = term.eval(&table, 1).unwrap();
        assert!(op.table().iter().all(|v| matches!(v, 2 | 4)));
    }

    #[test]
    fn leaves_of_branching_term() {
        // m_p^{q1,q2}(m_u^{v1,v2}(x, phi_l(y), phi_r(x)), phi_d(y), m_g^{h1,h2}(x,x,x))
        let inner = Term::m(0, 1, 1, x(), Term::phi(1, y()), Term::phi(0, x()));
        let last = Term::m(1, 1, 0, x(), x(), x());
        let term = Term::m(0, 0, 1, inner, Term::phi(0, y()), last.clone());
        let mut expected = vec![
            Term::phi(1, y()),
            Term::phi(0, x()),
            Term::phi(0, y()),
            last,
        ];
        expected.sort();
        assert_eq!(term.leaves(), expected);
    }

    #[test]
    fn leaves_of_single_symbol_and_variables() {
        assert_eq!(Term::phi(0, x()).leaves(), vec![Term::phi(0, x())]);
        assert!(x().leaves().is_empty());
    }

    #[test]
    fn phi_leaves_distinguish_variables() {
        let term = Term::m(0, 1, 1, Term::phi(1, y()), Term::phi(0, x()), Term::phi(1, x()));
        assert_eq!(term.phi_leaves_on_var(2), vec![1]);
        assert_eq!(term.phi_leaves_on_var(1), vec![0, 1]);
    }

    #[test]
    fn reduce_rewrites_simple_redex() {
        let term = Term::m(0, 1, 0, x(), Term::phi(1, x()), Term::phi(0, x()));
        assert_eq!(term.reduce(), Term::phi(0, x()));
        assert!(!term.is_reduced());
    }

    #[test]
    fn reduce_handles_nested_redexes_in_one_pass() {
        // the inner redex collapses to phi_u(x), which completes the outer one
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        let inner = Term::m(1, 1, 0, x(), Term::phi(1, x()), Term::phi(0, x()));
        let outer = Term::m(
            0,
            1,
            0,
            inner.clone(),
            Term::phi(1, inner.clone()),
            Term::phi(0, inner),
        );
        let reduced = outer.reduce();
        assert_eq!(reduced, Term::phi(0, Term::phi(1, x())));
        assert!(reduced.is_reduced());
        assert_eq!(
            outer.eval(&table, 1).unwrap(),
            reduced.eval(&table, 1).unwrap()
        );
    }

    #[test]
    fn reduce_leaves_near_misses_alone() {
        // second argument uses the wrong subterm, so nothing fires
        let term = Term::m(0, 1, 0, x(), Term::phi(1, y()), Term::phi(0, x()));
        assert_eq!(term.reduce(), term);
        assert!(term.is_reduced());
    }

    #[test]
    fn reduce_preserves_evaluation_on_chain2_samples() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        let samples = [
            Term::m(0, 1, 1, x(), Term::phi(1, x()), Term::phi(1, x())),
            Term::m(1, 1, 0, Term::phi(0, x()), Term::phi(1, Term::phi(0, x())), Term::phi(0, Term::phi(0, x()))),
            Term::phi(0, Term::m(0, 0, 0, x(), Term::phi(0, x()), Term::phi(0, x()))),
        ];
        for term in samples {
            let reduced = term.reduce();
            assert!(reduced.is_reduced());
            assert_eq!(
                term.eval(&table, 1).unwrap(),
                reduced.eval(&table, 1).unwrap(),
                "reduction changed the value of {term}"
            );
            assert!(reduced.node_count() <= term.node_count());
        }
    }

    #[test]
    fn substitution_replaces_variables() {
        let term = Term::m(0, 1, 0, x(), y(), Term::phi(0, y()));
        let subbed = term.substitute(&[Term::phi(1, x()), x()]).unwrap();
        assert_eq!(
            subbed,
            Term::m(0, 1, 0, Term::phi(1, x()), x(), Term::phi(0, x()))
        );
        assert!(term.substitute(&[x()]).is_err());
    }

    #[test]
    fn eval_rejects_bad_variables_and_arities() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let table = SymbolTable::new(&sys);
        assert!(Term::var(3).eval(&table, 2).is_err());
        assert!(Term::var(0).eval(&table, 1).is_err());
        let wrong = Term::Apply(GenLabel::Phi(0), vec![x(), y()]);
        assert!(wrong.eval(&table, 2).is_err());
        let missing = Term::Apply(GenLabel::Spoilt(0), vec![x()]);
        assert!(missing.eval(&table, 1).is_err());
    }

    #[test]
    fn display_is_compact() {
        let term = Term::m(1, 1, 0, x(), Term::phi(1, x()), Term::phi(0, y()));
        assert_eq!(term.to_string(), "m_1^{1,0}(x1, phi_1(x1), phi_0(x2))");
    }

    #[test]
    fn depth_and_counts() {
        let term = Term::m(0, 0, 0, x(), Term::phi(0, x()), Term::phi(0, Term::phi(0, x())));
        assert_eq!(term.depth(), 3);
        assert_eq!(term.node_count(), 7);
        assert_eq!(term.vars(), vec![1]);
    }
}
