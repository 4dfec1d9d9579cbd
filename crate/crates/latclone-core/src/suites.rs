//! Verification suites over a bounded enumeration of the generated clone.
//!
//! Each suite turns one statement about the construction into an exhaustive
//! check over the enumerated members, and reports instance counts, failures,
//! and a first counterexample with term and table. The quantifiers are
//! bounded: a cut slice limits coverage, which the outcome notes record,
//! but every instance actually examined is checked exactly.
//!
//! Two suites quantify over composite assignments drawn from pools. Those
//! pools are deterministic prefixes (member id order) so reruns see the
//! same instances; pool sizes sit in [`SuiteConfig`].

use crate::classify::{is_distracted, spoilt_inventory, Inventory, SpoiltClassifier};
use crate::enumerate::Bounds;
use crate::family::DISTINGUISHED;
use crate::generators::GeneratorSystem;
use crate::ops::{compose_tables, table_len, Operation, Val};
use crate::report::{Counterexample, SuiteOutcome};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub bounds: Bounds,
    /// Members per slice used as the outer operation in insertion checks.
    pub insert_t_cap: usize,
    /// Context assignments tried around the inserted coordinate.
    pub insert_ctx_cap: usize,
    /// Unspoilt members examined per slice in the unspoilt-member suites.
    pub unspoilt_cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            bounds: Bounds { max_arity: 3, ..Bounds::default() },
            insert_t_cap: 200,
            insert_ctx_cap: 6,
            unspoilt_cap: 50_000,
        }
    }
}

fn plug_unaries(t: &Operation, args: &[&Operation]) -> Operation {
    let g = t.ground();
    let refs: Vec<&[Val]> = args.iter().map(|a| a.table()).collect();
    let mut out = vec![0 as Val; g];
    compose_tables(t.table(), g, &refs, &mut out);
    Operation::new(1, g, out).expect("unary composite over the same ground set")
}

fn note_cuts(outcome: &mut SuiteOutcome, inventory: &Inventory) {
    for slice in inventory.closure().slices() {
        if let Some(cut) = slice.cut() {
            outcome.note(format!(
                "arity {} slice cut ({:?}); {} members enumerated",
                slice.arity(),
                cut,
                slice.len()
            ));
        }
    }
}

/// Non-projection members never take a value outside {0,1,2,4}.
fn suite_range(inventory: &Inventory) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("range");
    note_cuts(&mut outcome, inventory);
    for slice in inventory.closure().slices() {
        for id in slice.arity() as u32..slice.len() as u32 {
            let op = slice.op(id);
            let bad = op.table().iter().copied().find(|v| !DISTINGUISHED.contains(v));
            outcome.check(bad.is_none(), || Counterexample {
                description: format!(
                    "arity {} member {} takes the value {} outside {{0,1,2,4}}",
                    slice.arity(),
                    id,
                    bad.unwrap()
                ),
                term: Some(slice.term(id).to_string()),
                table: Some(op.table().to_vec()),
            });
        }
    }
    outcome
}

/// Every enumerated unary member besides id and the φ's is distracted.
fn suite_unary_distracted(sys: &GeneratorSystem, inventory: &Inventory) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("unary_distracted");
    note_cuts(&mut outcome, inventory);
    let ground = *sys.family().ground();
    let slice = inventory.closure().slice(1);
    for id in 0..slice.len() as u32 {
        let op = slice.op(id);
        if slice.is_projection_member(id) || sys.phis().iter().any(|phi| phi == op) {
            continue;
        }
        outcome.check(is_distracted(op, &ground).expect("unary slice"), || Counterexample {
            description: format!("unary member {id} is neither id, a phi, nor distracted"),
            term: Some(slice.term(id).to_string()),
            table: Some(op.table().to_vec()),
        });
    }
    outcome
}

/// Feeding a distracted unary into any coordinate an enumerated member
/// depends on leaves the composite distracted, whatever fills the other
/// coordinates.
fn suite_insert_distracted(
    sys: &GeneratorSystem,
    inventory: &Inventory,
    config: &SuiteConfig,
) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("insert_distracted");
    note_cuts(&mut outcome, inventory);
    let ground = *sys.family().ground();
    let unary = inventory.closure().slice(1);
    let distracted: Vec<u32> = (0..unary.len() as u32)
        .filter(|&id| is_distracted(unary.op(id), &ground).expect("unary slice"))
        .collect();
    outcome.note(format!(
        "{} distracted unary members, {} outer members per slice, {} contexts",
        distracted.len(),
        config.insert_t_cap,
        config.insert_ctx_cap
    ));
    for slice in inventory.closure().slices() {
        let n = slice.arity();
        for id in 0..slice.len().min(config.insert_t_cap) as u32 {
            let t = slice.op(id);
            for i in 1..=n {
                if !t.depends_on(i).expect("position in range") {
                    continue;
                }
                for &u in &distracted {
                    for r in 0..config.insert_ctx_cap {
                        let args: Vec<&Operation> = (1..=n)
                            .map(|j| {
                                if j == i {
                                    unary.op(u)
                                } else {
                                    unary.op(((r + j) % unary.len()) as u32)
                                }
                            })
                            .collect();
                        let composite = plug_unaries(t, &args);
                        outcome.check(
                            is_distracted(&composite, &ground).expect("unary composite"),
                            || Counterexample {
                                description: format!(
                                    "arity {n} member {id} with distracted unary {u} at \
                                     coordinate {i} (context {r}) is not distracted"
                                ),
                                term: Some(slice.term(id).to_string()),
                                table: Some(composite.table().to_vec()),
                            },
                        );
                    }
                }
            }
        }
    }
    outcome
}

/// Plugging members of Φ ∪ {id} into a mediator yields φ_p exactly for the
/// assignment (id, φ_{q1}, φ_{q2}) and a distracted unary for all others.
fn suite_composition(sys: &GeneratorSystem) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("composition");
    let ground = *sys.family().ground();
    let g = sys.ground_size();
    let mut choices = vec![Operation::projection(g, 1, 1).expect("identity")];
    choices.extend(sys.phis().iter().cloned());
    let display = |c: usize| {
        if c == 0 {
            "id".to_string()
        } else {
            format!("phi_{}", c - 1)
        }
    };
    for (i, &(p, q1, q2)) in sys.m_triples().iter().enumerate() {
        let m = &sys.m_ops()[i];
        for c1 in 0..choices.len() {
            for c2 in 0..choices.len() {
                for c3 in 0..choices.len() {
                    let composite =
                        plug_unaries(m, &[&choices[c1], &choices[c2], &choices[c3]]);
                    let exceptional = (c1, c2, c3) == (0, q1 + 1, q2 + 1);
                    let ok = if exceptional {
                        &composite == sys.phi(p)
                    } else {
                        is_distracted(&composite, &ground).expect("unary composite")
                    };
                    outcome.check(ok, || Counterexample {
                        description: format!(
                            "m_{p}^{{{q1},{q2}}}({}, {}, {}) should {}",
                            display(c1),
                            display(c2),
                            display(c3),
                            if exceptional {
                                format!("equal phi_{p}")
                            } else {
                                "be distracted".to_string()
                            }
                        ),
                        term: None,
                        table: Some(composite.table().to_vec()),
                    });
                }
            }
        }
    }
    outcome
}

/// An unspoilt member that depends on its first coordinate maps every
/// tuple starting with 2 into {2,4}.
fn suite_insert_two(inventory: &Inventory, config: &SuiteConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("insert_two");
    note_cuts(&mut outcome, inventory);
    for slice in inventory.closure().slices() {
        let n = slice.arity();
        let block = table_len(slice.ground(), n - 1);
        for id in inventory.unspoilt_ids(n).into_iter().take(config.unspoilt_cap) {
            let t = slice.op(id);
            if !t.depends_on(1).expect("position in range") {
                continue;
            }
            let row = &t.table()[2 * block..3 * block];
            let bad = row.iter().position(|v| !matches!(v, 2 | 4));
            outcome.check(bad.is_none(), || Counterexample {
                description: format!(
                    "unspoilt arity {n} member {id} maps a tuple with first \
                     coordinate 2 to {}",
                    row[bad.unwrap()]
                ),
                term: Some(slice.term(id).to_string()),
                table: Some(t.table().to_vec()),
            });
        }
    }
    outcome
}

/// For an unspoilt member and each φ it can be steered to, the choice at
/// every coordinate the member depends on is the same across all
/// assignments reaching that φ. A projection can be steered to every φ
/// (the composite is the chosen unary itself), so uniqueness is stated
/// per target; any other member reaches exactly one φ, which the suite
/// additionally checks.
fn suite_uniqueness(
    sys: &GeneratorSystem,
    inventory: &Inventory,
    config: &SuiteConfig,
) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::new("witness_uniqueness");
    note_cuts(&mut outcome, inventory);
    let classifier = SpoiltClassifier::new(sys);
    for slice in inventory.closure().slices() {
        let n = slice.arity();
        for id in inventory.unspoilt_ids(n).into_iter().take(config.unspoilt_cap) {
            let t = slice.op(id);
            let witnesses = classifier.all_witnesses(t);
            if !slice.is_projection_member(id) {
                let target = witnesses[0].1;
                let other = witnesses.iter().map(|&(_, p)| p).find(|&p| p != target);
                outcome.check(other.is_none(), || Counterexample {
                    description: format!(
                        "non-projection arity {n} member {id} can be steered to both \
                         phi_{target} and phi_{}",
                        other.unwrap()
                    ),
                    term: Some(slice.term(id).to_string()),
                    table: Some(t.table().to_vec()),
                });
            }
            for i in 1..=n {
                if !t.depends_on(i).expect("position in range") {
                    continue;
                }
                let mut seen: Vec<Option<crate::classify::UnaryChoice>> =
                    vec![None; sys.phis().len()];
                for (w, target) in &witnesses {
                    let choice = w[i - 1];
                    let prior = seen[*target].replace(choice);
                    outcome.check(prior.is_none_or(|c| c == choice), || Counterexample {
                        description: format!(
                            "arity {n} member {id} reaches phi_{target} choosing both \
                             {} and {} at coordinate {i}",
                            prior.unwrap(),
                            choice
                        ),
                        term: Some(slice.term(id).to_string()),
                        table: Some(t.table().to_vec()),
                    });
                }
            }
        }
    }
    outcome
}

/// Runs every suite against a prebuilt inventory.
pub fn run_lemma_suites_with(
    sys: &GeneratorSystem,
    inventory: &Inventory,
    config: &SuiteConfig,
) -> Vec<SuiteOutcome> {
    vec![
        suite_range(inventory),
        suite_unary_distracted(sys, inventory),
        suite_insert_distracted(sys, inventory, config),
        suite_composition(sys),
        suite_insert_two(inventory, config),
        suite_uniqueness(sys, inventory, config),
    ]
}

/// Enumerates the closure at the configured bounds and runs every suite.
pub fn run_lemma_suites(sys: &GeneratorSystem, config: &SuiteConfig) -> Vec<SuiteOutcome> {
    let inventory = spoilt_inventory(sys, &config.bounds);
    run_lemma_suites_with(sys, &inventory, config)
}
