//! Fragments per ideal and the embedding verdicts.
//!
//! For each ideal I of the lattice, the clone fragment generated by
//! Φ_I ∪ 𝓜 ∪ 𝒮 is enumerated at the run's bounds and summarized by its
//! Φ-signature: the set of p whose φ_p shows up among the unary members.
//! [`verify_embedding`] compares signatures against ideal arithmetic
//! (soundness, completeness, injectivity, joins, meets) and backs every
//! positive claim with eval-checked witness terms. A slice cut by budget
//! or work caps downgrades the checks that relied on it to inconclusive;
//! it never upgrades to a pass.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{spoilt_inventory, Inventory, SpoiltClassifier};
use crate::enumerate::{enumerate_slice, Bounds, Slice};
use crate::family::IndexFamily;
use crate::generators::{generators_for_members, GeneratorSystem};
use crate::lattice::{all_ideals, generated_ideal, ideal_join, ideal_meet, LatticeError};
use crate::ops::Operation;
use crate::report::{
    CheckOutcome, Counterexample, EmbeddingReport, IdealReport, InventoryStats, PairCheck,
    SliceStats, SuiteOutcome, Verdict, When4Report,
};
use crate::term::{SymbolTable, Term};

/// Cap on representation terms retained by [`when4_suite`]. Terms are kept
/// without extensional dedup, so this grows much faster than the operation
/// budget and gets its own default.
pub const DEFAULT_TERM_BUDGET: usize = 20_000;

/// Recorded in every embedding report next to the inventory stats.
pub const SPOILT_TRUNCATION_NOTE: &str = "The spoilt part of each generator list is the \
     bounded inventory enumerated at this run's bounds, not the full set of spoilt \
     members. Spoiltness survives substitution: if f is spoilt and g1..gm are members, \
     any steering of f(g1..gm) into the phi set would steer f itself through the unary \
     members gi(u1..un), so f(g1..gm) is spoilt too. Omitted deeper or wider spoilt \
     members therefore cannot put a new phi into a fragment, and the signature \
     comparisons below do not depend on the truncation.";

/// Recorded in every embedding report; why checking pairs is enough.
pub const COMPLETENESS_NOTE: &str = "Arbitrary joins and meets over a finite lattice of \
     ideals reduce to iterated pairwise ones, so the pairwise checks below settle the \
     complete-lattice form of the claim.";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("element {0} is not in the ideal generated by the given subset")]
    NotInGeneratedIdeal(usize),
    #[error("derived witness term for phi_{0} does not evaluate to phi_{0}")]
    WitnessMismatch(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Lex-first smallest subset of `pool` whose join dominates `p`. The caller
/// guarantees one exists (p lies in the ideal generated by the pool).
fn find_cover(sys: &GeneratorSystem, pool: &[usize], p: usize) -> Vec<usize> {
    let lattice = sys.lattice();
    for k in 1..=pool.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let join = idx[1..]
                .iter()
                .fold(pool[idx[0]], |acc, &i| lattice.join(acc, pool[i]));
            if lattice.leq(p, join) {
                return idx.iter().map(|&i| pool[i]).collect();
            }
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                if idx[pos] < pool.len() - (k - pos) {
                    idx[pos] += 1;
                    for later in pos + 1..k {
                        idx[later] = idx[later - 1] + 1;
                    }
                    break;
                }
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    unreachable!("the full pool covers every element of the ideal it generates")
}

/// A term over the generators attached to `subset` that evaluates to φ_p.
///
/// If p sits in the subset the bare leaf φ_p(x) does it. Otherwise a
/// smallest covering join p ≤ f_1 ∨ … ∨ f_k is located and realized as a
/// chain of mediator applications through the join prefixes, with a final
/// mediator step down to p. The term is evaluated against the system
/// before being returned.
pub fn derive_phi_witness(
    sys: &GeneratorSystem,
    subset: &[usize],
    p: usize,
) -> Result<Term, EmbedError> {
    let lattice = sys.lattice();
    let ideal = generated_ideal(lattice, subset)?;
    if !ideal.contains(p) {
        return Err(EmbedError::NotInGeneratedIdeal(p));
    }
    let x = Term::var(1);
    let term = if subset.contains(&p) {
        Term::phi(p, x)
    } else {
        let mut pool = subset.to_vec();
        pool.sort_unstable();
        pool.dedup();
        let cover = find_cover(sys, &pool, p);
        let mut prefix = cover[0];
        let mut t = Term::phi(cover[0], x.clone());
        for &f in &cover[1..] {
            let up = lattice.join(prefix, f);
            t = Term::m(up, prefix, f, x.clone(), t, Term::phi(f, x.clone()));
            prefix = up;
        }
        if prefix != p {
            t = Term::m(p, prefix, prefix, x, t.clone(), t);
        }
        t
    };
    let op = term
        .eval(&SymbolTable::new(sys), 1)
        .expect("witness terms only use admissible symbols");
    if &op != sys.phi(p) {
        return Err(EmbedError::WitnessMismatch(p));
    }
    Ok(term)
}

/// The bounded closure of Φ_members ∪ 𝓜 ∪ 𝒮, thinned for memory: the unary
/// slice is kept whole (signatures and every meet comparison live there),
/// higher arities keep their stats only.
#[derive(Debug)]
pub struct CloneFragment {
    key: Vec<usize>,
    signature: Vec<usize>,
    unary: Slice,
    stats: Vec<SliceStats>,
    partial: bool,
}

impl CloneFragment {
    /// The lattice elements whose φ's seeded the generator list.
    pub fn key(&self) -> &[usize] {
        &self.key
    }

    /// Sorted p with φ_p among the enumerated unary members.
    pub fn signature(&self) -> &[usize] {
        &self.signature
    }

    pub fn unary(&self) -> &Slice {
        &self.unary
    }

    pub fn stats(&self) -> &[SliceStats] {
        &self.stats
    }

    /// True when any slice hit a budget or work cut.
    pub fn partial(&self) -> bool {
        self.partial
    }

    fn unary_cut(&self) -> bool {
        self.unary.cut().is_some()
    }
}

/// Enumerates the fragment for an explicit member set (an ideal's members,
/// or the union of two ideals' members for join checks).
pub fn clone_fragment(
    sys: &GeneratorSystem,
    members: &[usize],
    spoilt: &[Operation],
    bounds: &Bounds,
) -> CloneFragment {
    let gens = generators_for_members(sys, members, spoilt);
    let ground = sys.ground_size();
    let unary = enumerate_slice(&gens, ground, 1, bounds);
    let mut stats = vec![SliceStats::of(&unary)];
    let mut partial = unary.cut().is_some();
    for arity in 2..=bounds.max_arity {
        let slice = enumerate_slice(&gens, ground, arity, bounds);
        partial |= slice.cut().is_some();
        stats.push(SliceStats::of(&slice));
    }
    let signature = (0..sys.phis().len())
        .filter(|&p| unary.find(sys.phi(p)).is_some())
        .collect();
    let mut key = members.to_vec();
    key.sort_unstable();
    key.dedup();
    CloneFragment { key, signature, unary, stats, partial }
}

fn extras(actual: &[usize], expected: &[usize]) -> Vec<usize> {
    actual.iter().copied().filter(|p| !expected.contains(p)).collect()
}

fn missing(actual: &[usize], expected: &[usize]) -> Vec<usize> {
    expected.iter().copied().filter(|p| !actual.contains(p)).collect()
}

/// Runs checks (soundness, completeness, injectivity, join, meet) for
/// every ideal and every unordered pair of ideals of the system's lattice.
pub fn verify_embedding(
    sys: &GeneratorSystem,
    lattice_label: &str,
    bounds: &Bounds,
) -> EmbeddingReport {
    let inventory = spoilt_inventory(sys, bounds);
    verify_embedding_with(sys, lattice_label, &inventory, bounds)
}

/// Same as [`verify_embedding`] but reuses a prebuilt spoilt inventory at
/// the same bounds.
pub fn verify_embedding_with(
    sys: &GeneratorSystem,
    lattice_label: &str,
    inventory: &Inventory,
    bounds: &Bounds,
) -> EmbeddingReport {
    let lattice = sys.lattice();
    let ideals = all_ideals(lattice);
    let symbols = SymbolTable::new(sys);

    let mut keys: BTreeSet<Vec<usize>> =
        ideals.iter().map(|i| i.members().to_vec()).collect();
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let mut union = [ideals[i].members(), ideals[j].members()].concat();
            union.sort_unstable();
            union.dedup();
            keys.insert(union);
        }
    }
    let key_list: Vec<Vec<usize>> = keys.into_iter().collect();
    let fragments: BTreeMap<Vec<usize>, CloneFragment> = key_list
        .par_iter()
        .map(|k| (k.clone(), clone_fragment(sys, k, inventory.spoilt_ops(), bounds)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut fail_count = 0u64;
    let mut inconclusive_count = 0u64;
    let mut tally = |verdict: Verdict| {
        match verdict {
            Verdict::Fail => fail_count += 1,
            Verdict::Inconclusive => inconclusive_count += 1,
            Verdict::Pass => {}
        }
        verdict
    };

    let mut ideal_reports = Vec::with_capacity(ideals.len());
    for ideal in &ideals {
        let frag = &fragments[ideal.members()];

        let stray = frag.signature().iter().copied().find(|&p| !ideal.contains(p));
        let soundness = match stray {
            Some(p) => {
                let id = frag.unary().find(sys.phi(p)).expect("p came from the signature");
                CheckOutcome {
                    subject: format!("no phi outside the ideal {:?}", ideal.members()),
                    verdict: tally(Verdict::Fail),
                    detail: Some(format!(
                        "phi_{p} reached by {} despite {p} lying outside the ideal",
                        frag.unary().term(id)
                    )),
                }
            }
            None if frag.unary_cut() => CheckOutcome {
                subject: format!("no phi outside the ideal {:?}", ideal.members()),
                verdict: tally(Verdict::Inconclusive),
                detail: Some(format!(
                    "unary slice cut ({:?}); absence is not conclusive",
                    frag.unary().cut().unwrap()
                )),
            },
            None => CheckOutcome {
                subject: format!("no phi outside the ideal {:?}", ideal.members()),
                verdict: tally(Verdict::Pass),
                detail: None,
            },
        };

        let mut witnesses = Vec::with_capacity(ideal.len());
        let mut completeness_verdict = Verdict::Pass;
        let mut completeness_detail = None;
        for &p in ideal.members() {
            match derive_phi_witness(sys, ideal.members(), p) {
                Ok(term) => {
                    if frag.unary().find(sys.phi(p)).is_none() {
                        let (v, d) = if frag.unary_cut() {
                            (
                                Verdict::Inconclusive,
                                format!("phi_{p} fell past the unary cut"),
                            )
                        } else {
                            (
                                Verdict::Fail,
                                format!("phi_{p} missing from the enumerated fragment"),
                            )
                        };
                        completeness_verdict = completeness_verdict.and(v);
                        completeness_detail.get_or_insert(d);
                    }
                    witnesses.push(term.to_string());
                }
                Err(e) => {
                    completeness_verdict = Verdict::Fail;
                    completeness_detail.get_or_insert(e.to_string());
                }
            }
        }
        let completeness = CheckOutcome {
            subject: format!("every phi of the ideal {:?} derivable", ideal.members()),
            verdict: tally(completeness_verdict),
            detail: completeness_detail,
        };

        ideal_reports.push(IdealReport {
            ideal: ideal.members().to_vec(),
            signature: frag.signature().to_vec(),
            slices: frag.stats().to_vec(),
            soundness,
            completeness,
            witnesses,
        });
    }

    let mut injectivity_verdict = Verdict::Pass;
    let mut injectivity_detail = None;
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let fi = &fragments[ideals[i].members()];
            let fj = &fragments[ideals[j].members()];
            let any_cut = fi.unary_cut() || fj.unary_cut();
            if fi.signature() == fj.signature() {
                let v = if any_cut { Verdict::Inconclusive } else { Verdict::Fail };
                injectivity_verdict = injectivity_verdict.and(v);
                injectivity_detail.get_or_insert(format!(
                    "ideals {:?} and {:?} share the signature {:?}",
                    ideals[i].members(),
                    ideals[j].members(),
                    fi.signature()
                ));
            } else if any_cut {
                injectivity_verdict = injectivity_verdict.and(Verdict::Inconclusive);
                injectivity_detail.get_or_insert(format!(
                    "signatures of {:?} and {:?} compared under a unary cut",
                    ideals[i].members(),
                    ideals[j].members()
                ));
            }
        }
    }
    let injectivity = CheckOutcome {
        subject: "signatures pairwise distinct".into(),
        verdict: tally(injectivity_verdict),
        detail: injectivity_detail,
    };

    let mut joins = Vec::new();
    let mut meets = Vec::new();
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let left = &ideals[i];
            let right = &ideals[j];

            let expected = ideal_join(lattice, left, right);
            let mut union = [left.members(), right.members()].concat();
            union.sort_unstable();
            union.dedup();
            let frag = &fragments[&union];
            let actual = frag.signature().to_vec();

            let mut witness_count = 0u64;
            let mut witness_fail = None;
            let mut covered = BTreeSet::new();
            for &q1 in left.members() {
                for &q2 in right.members() {
                    let top = lattice.join(q1, q2);
                    for p in 0..lattice.size() {
                        if !lattice.leq(p, top) {
                            continue;
                        }
                        covered.insert(p);
                        let x = Term::var(1);
                        let term = Term::m(
                            p,
                            q1,
                            q2,
                            x.clone(),
                            Term::phi(q1, x.clone()),
                            Term::phi(q2, x),
                        );
                        let op = term
                            .eval(&symbols, 1)
                            .expect("admissible mediator over one variable");
                        if &op == sys.phi(p) {
                            witness_count += 1;
                        } else if witness_fail.is_none() {
                            witness_fail =
                                Some(format!("{term} does not evaluate to phi_{p}"));
                        }
                    }
                }
            }
            let covered: Vec<usize> = covered.into_iter().collect();

            let (verdict, detail) = if !extras(&actual, expected.members()).is_empty() {
                (
                    Verdict::Fail,
                    Some(format!(
                        "signature carries {:?} beyond the join ideal",
                        extras(&actual, expected.members())
                    )),
                )
            } else if let Some(w) = witness_fail {
                (Verdict::Fail, Some(w))
            } else if covered != expected.members() {
                (
                    Verdict::Fail,
                    Some(format!(
                        "mediator witnesses cover {covered:?}, join ideal is {:?}",
                        expected.members()
                    )),
                )
            } else if !missing(&actual, expected.members()).is_empty() {
                let gone = missing(&actual, expected.members());
                if frag.unary_cut() {
                    (
                        Verdict::Inconclusive,
                        Some(format!("{gone:?} fell past the unary cut")),
                    )
                } else {
                    (
                        Verdict::Fail,
                        Some(format!("{gone:?} missing with an uncut unary slice")),
                    )
                }
            } else if frag.unary_cut() {
                (
                    Verdict::Inconclusive,
                    Some(format!(
                        "signature matches but the unary slice was cut ({:?})",
                        frag.unary().cut().unwrap()
                    )),
                )
            } else {
                (Verdict::Pass, None)
            };
            joins.push(PairCheck {
                left: left.members().to_vec(),
                right: right.members().to_vec(),
                expected: expected.members().to_vec(),
                actual,
                verdict: tally(verdict),
                detail,
                witnesses: witness_count,
            });

            let expected = ideal_meet(lattice, left, right);
            let fi = &fragments[left.members()];
            let fj = &fragments[right.members()];
            let actual: Vec<usize> = fi
                .signature()
                .iter()
                .copied()
                .filter(|p| fj.signature().contains(p))
                .collect();
            let shared = fi
                .unary()
                .ops()
                .iter()
                .filter(|op| fj.unary().find(op).is_some())
                .count();
            let any_cut = fi.unary_cut() || fj.unary_cut();
            let (verdict, detail) = if !extras(&actual, expected.members()).is_empty() {
                (
                    Verdict::Fail,
                    Some(format!(
                        "fragments share {:?} beyond the meet ideal",
                        extras(&actual, expected.members())
                    )),
                )
            } else if !missing(&actual, expected.members()).is_empty() {
                let gone = missing(&actual, expected.members());
                if any_cut {
                    (
                        Verdict::Inconclusive,
                        Some(format!("{gone:?} fell past a unary cut")),
                    )
                } else {
                    (
                        Verdict::Fail,
                        Some(format!("{gone:?} missing with uncut unary slices")),
                    )
                }
            } else if any_cut {
                (
                    Verdict::Inconclusive,
                    Some("signatures intersect as expected under a unary cut".into()),
                )
            } else {
                (Verdict::Pass, Some(format!("{shared} shared unary member tables")))
            };
            meets.push(PairCheck {
                left: left.members().to_vec(),
                right: right.members().to_vec(),
                expected: expected.members().to_vec(),
                actual,
                verdict: tally(verdict),
                detail,
                witnesses: 0,
            });
        }
    }

    EmbeddingReport {
        lattice: lattice_label.to_string(),
        ground_size: sys.ground_size(),
        bounds: bounds.clone(),
        inventory: InventoryStats {
            spoilt: inventory.spoilt_count(),
            partial: inventory.partial(),
            slices: inventory.closure().slices().iter().map(SliceStats::of).collect(),
        },
        spoilt_truncation_note: SPOILT_TRUNCATION_NOTE.to_string(),
        completeness_note: COMPLETENESS_NOTE.to_string(),
        ideals: ideal_reports,
        injectivity,
        joins,
        meets,
        fail_count,
        inconclusive_count,
    }
}

/// Breadth-first representation terms in two variables over Φ ∪ 𝓜, kept
/// without extensional dedup up to `budget` terms.
fn representation_terms(
    sys: &GeneratorSystem,
    depth: usize,
    budget: usize,
) -> (Vec<Term>, bool) {
    let mut terms = vec![Term::var(1), Term::var(2)];
    let mut frontier_lo = 0;
    for _ in 1..=depth {
        let total = terms.len();
        for p in 0..sys.phis().len() {
            for c in frontier_lo..total {
                if terms.len() >= budget {
                    return (terms, true);
                }
                let child = terms[c].clone();
                terms.push(Term::phi(p, child));
            }
        }
        for &(p, q1, q2) in sys.m_triples() {
            for c1 in 0..total {
                for c2 in 0..total {
                    for c3 in 0..total {
                        if c1 < frontier_lo && c2 < frontier_lo && c3 < frontier_lo {
                            continue;
                        }
                        if terms.len() >= budget {
                            return (terms, true);
                        }
                        let t = Term::m(
                            p,
                            q1,
                            q2,
                            terms[c1].clone(),
                            terms[c2].clone(),
                            terms[c3].clone(),
                        );
                        terms.push(t);
                    }
                }
            }
        }
        frontier_lo = total;
    }
    (terms, false)
}

fn anchored_case(
    sys: &GeneratorSystem,
    name: &str,
    shape: &str,
    build: impl Fn(usize, usize, usize) -> Term,
    expect_four: impl Fn(&IndexFamily, usize, usize, u8) -> bool,
    forbid_y_leaves: bool,
) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new(name);
    outcome.note(format!("shape {shape} over every admissible triple"));
    let symbols = SymbolTable::new(sys);
    let fam = sys.family();
    let g = sys.ground_size();
    for &(p, q1, q2) in sys.m_triples() {
        let term = build(p, q1, q2);
        let op = term.eval(&symbols, 2).expect("closed binary term");
        if forbid_y_leaves {
            let leaves = term.phi_leaves_on_var(2);
            outcome.check(leaves.is_empty(), || Counterexample {
                description: format!("({p},{q1},{q2}): unexpected phi leaf on y"),
                term: Some(term.to_string()),
                table: None,
            });
        }
        for a in fam.ground().a_members() {
            let val = op.table()[2 * g + a as usize];
            let want_four = expect_four(fam, q1, q2, a);
            let ok = if want_four { val == 4 } else { val != 4 };
            outcome.check(ok, || Counterexample {
                description: format!(
                    "({p},{q1},{q2}): r(2,{a}) = {val}, expected {}",
                    if want_four { "4" } else { "a value other than 4" }
                ),
                term: Some(term.to_string()),
                table: Some(op.table().to_vec()),
            });
        }
    }
    outcome
}

fn anchored_cases(sys: &GeneratorSystem) -> Vec<SuiteOutcome> {
    let x = || Term::var(1);
    let y = || Term::var(2);
    vec![
        anchored_case(
            sys,
            "anchored_y_x_phiy",
            "m(y, x, phi_q2(y))",
            |p, q1, q2| Term::m(p, q1, q2, y(), x(), Term::phi(q2, y())),
            |fam, _, q2, a| fam.member(q2, a),
            false,
        ),
        anchored_case(
            sys,
            "anchored_x_y_phix",
            "m(x, y, phi_q2(x))",
            |p, q1, q2| Term::m(p, q1, q2, x(), y(), Term::phi(q2, x())),
            |_, _, _, _| false,
            true,
        ),
        anchored_case(
            sys,
            "anchored_x_phiy_phiy",
            "m(x, phi_q1(y), phi_q2(y))",
            |p, q1, q2| {
                Term::m(p, q1, q2, x(), Term::phi(q1, y()), Term::phi(q2, y()))
            },
            |fam, q1, q2, a| fam.member(q1, a) || fam.member(q2, a),
            false,
        ),
    ]
}

/// Checks, for every retained reduced representation r of a binary unspoilt
/// member depending on both variables, that r(2,a) = 4 exactly when a lies
/// in the union of the A_v with φ_v(y) a leaf of r; then replays the three
/// anchored mediator shapes for every admissible triple.
pub fn when4_suite(sys: &GeneratorSystem, bounds: &Bounds, term_budget: usize) -> When4Report {
    let (terms, truncated) = representation_terms(sys, bounds.depth, term_budget);
    let symbols = SymbolTable::new(sys);
    let classifier = SpoiltClassifier::new(sys);
    let fam = sys.family();
    let g = sys.ground_size();
    let a_members = fam.ground().a_members();

    let mut seen: HashSet<Term> = HashSet::new();
    let mut reduced_representations = 0u64;
    let mut checked_representations = 0u64;
    let mut instances = 0u64;
    let mut failures = 0u64;
    let mut first_counterexample = None;
    for t in &terms {
        let r = t.reduce();
        if !seen.insert(r.clone()) {
            continue;
        }
        reduced_representations += 1;
        let op = r.eval(&symbols, 2).expect("closed binary term");
        let essential = op.depends_on(1).expect("binary") && op.depends_on(2).expect("binary");
        if !essential || classifier.classify(&op).is_spoilt() {
            continue;
        }
        checked_representations += 1;
        let leaf_vs = r.phi_leaves_on_var(2);
        for &a in &a_members {
            let in_union = leaf_vs.iter().any(|&v| fam.member(v, a));
            let val = op.table()[2 * g + a as usize];
            instances += 1;
            if (val == 4) != in_union {
                failures += 1;
                if first_counterexample.is_none() {
                    first_counterexample = Some(Counterexample {
                        description: format!(
                            "r(2,{a}) = {val} but {a} is {} the leaf union",
                            if in_union { "inside" } else { "outside" }
                        ),
                        term: Some(r.to_string()),
                        table: Some(op.table().to_vec()),
                    });
                }
            }
        }
    }

    let anchored = anchored_cases(sys);
    let mut verdict = if failures > 0 { Verdict::Fail } else { Verdict::Pass };
    for outcome in &anchored {
        verdict = verdict.and(outcome.verdict);
    }
    When4Report {
        retained_terms: terms.len() as u64,
        truncated,
        reduced_representations,
        checked_representations,
        instances,
        failures,
        first_counterexample,
        anchored,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn x() -> Term {
        Term::var(1)
    }

    #[test]
    fn witness_for_member_of_subset_is_a_leaf() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let term = derive_phi_witness(&sys, &[0, 1], 0).unwrap();
        assert_eq!(term, Term::phi(0, x()));
    }

    #[test]
    fn witness_below_a_single_generator_uses_one_mediator() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let term = derive_phi_witness(&sys, &[1], 0).unwrap();
        assert_eq!(
            term,
            Term::m(0, 1, 1, x(), Term::phi(1, x()), Term::phi(1, x()))
        );
    }

    #[test]
    fn witness_through_a_join_is_two_staged() {
        // M3: bottom 0, atoms 1..3, top 4; c = 3 sits below a ∨ b = top.
        let sys = fixtures::singleton_system(&fixtures::m3());
        let term = derive_phi_witness(&sys, &[1, 2], 3).unwrap();
        let inner = Term::m(4, 1, 2, x(), Term::phi(1, x()), Term::phi(2, x()));
        assert_eq!(term, Term::m(3, 4, 4, x(), inner.clone(), inner));
        let op = term.eval(&SymbolTable::new(&sys), 1).unwrap();
        assert_eq!(&op, sys.phi(3));
    }

    #[test]
    fn witness_outside_the_generated_ideal_is_refused() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        assert_eq!(
            derive_phi_witness(&sys, &[0], 1),
            Err(EmbedError::NotInGeneratedIdeal(1))
        );
    }

    #[test]
    fn bottom_fragment_omits_the_top_phi() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let bounds = Bounds { max_arity: 1, depth: 4, ..Bounds::default() };
        let inventory = spoilt_inventory(&sys, &bounds);
        let frag = clone_fragment(&sys, &[0], inventory.spoilt_ops(), &bounds);
        assert_eq!(frag.signature(), &[0]);
        assert!(frag.unary().find(sys.phi(0)).is_some());
        assert!(frag.unary().find(sys.phi(1)).is_none());
        assert!(!frag.partial());
    }

    fn quick_bounds() -> Bounds {
        Bounds { max_arity: 2, depth: 3, ..Bounds::default() }
    }

    #[test]
    fn chain2_embedding_passes_cleanly() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let report = verify_embedding(&sys, "chain2", &quick_bounds());
        assert_eq!(report.fail_count, 0, "{:#?}", report);
        assert_eq!(report.inconclusive_count, 0);
        assert_eq!(report.ideals.len(), 2);
        assert_eq!(report.ideals[0].signature, vec![0]);
        assert_eq!(report.ideals[1].signature, vec![0, 1]);
        assert_eq!(report.injectivity.verdict, Verdict::Pass);
        assert_eq!(report.joins.len(), 1);
        assert_eq!(report.meets.len(), 1);
        assert!(report.joins[0].witnesses > 0);
    }

    #[test]
    fn one_element_embedding_is_trivial() {
        let sys = fixtures::singleton_system(&fixtures::chain(1));
        let report = verify_embedding(&sys, "one", &quick_bounds());
        assert_eq!(report.fail_count, 0);
        assert_eq!(report.inconclusive_count, 0);
        assert_eq!(report.ideals.len(), 1);
        assert!(report.joins.is_empty());
        assert!(report.meets.is_empty());
    }

    #[test]
    fn corrupted_phi_fails_the_join_witnesses() {
        let mut sys = fixtures::singleton_system(&fixtures::chain(2));
        sys.inject_phi_fault(1).unwrap();
        let report = verify_embedding(&sys, "chain2", &quick_bounds());
        assert!(report.fail_count > 0);
        assert!(report.joins.iter().any(|j| j.verdict == Verdict::Fail));
    }

    #[test]
    fn starved_budget_reports_inconclusive_not_fail() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let bounds = Bounds { max_arity: 1, depth: 3, budget: 3, ..Bounds::default() };
        let report = verify_embedding(&sys, "chain2", &bounds);
        assert_eq!(report.fail_count, 0, "{:#?}", report);
        assert!(report.inconclusive_count > 0);
    }

    #[test]
    fn when4_chain2_passes_and_counts() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let bounds = Bounds { max_arity: 2, depth: 2, ..Bounds::default() };
        let report = when4_suite(&sys, &bounds, 3_000);
        assert_eq!(report.verdict, Verdict::Pass, "{:#?}", report.first_counterexample);
        assert_eq!(report.failures, 0);
        assert!(report.checked_representations > 0);
        assert!(report.instances > 0);
        assert_eq!(report.anchored.len(), 3);
        for outcome in &report.anchored {
            assert_eq!(outcome.verdict, Verdict::Pass, "{}", outcome.name);
        }
    }

    #[test]
    fn when4_term_stream_is_budgeted_and_deterministic() {
        let sys = fixtures::singleton_system(&fixtures::chain(2));
        let (terms, truncated) = representation_terms(&sys, 3, 500);
        assert_eq!(terms.len(), 500);
        assert!(truncated);
        let (again, _) = representation_terms(&sys, 3, 500);
        assert_eq!(terms, again);
        assert_eq!(terms[0], Term::var(1));
        assert_eq!(terms[1], Term::var(2));
        assert_eq!(terms[2], Term::phi(0, Term::var(1)));
    }

    #[test]
    fn corrupted_phi_fails_an_anchored_case() {
        let mut sys = fixtures::singleton_system(&fixtures::chain(2));
        sys.inject_phi_fault(1).unwrap();
        let bounds = Bounds { max_arity: 2, depth: 2, ..Bounds::default() };
        let report = when4_suite(&sys, &bounds, 2_000);
        assert_eq!(report.verdict, Verdict::Fail);
    }
}
