//! Substituting the witness unaries into all but one variable of an
//! unspoilt member must not disturb the leaves on the remaining variable,
//! even across the reductions the substitution makes possible. The
//! downstream meet argument leans on exactly this.

use latclone_core::classify::{spoilt_inventory, SpoiltVerdict};
use latclone_core::fixtures;
use latclone_core::{Bounds, SpoiltClassifier, SymbolTable, Term, UnaryChoice};

fn choice_term(choice: UnaryChoice) -> Term {
    match choice {
        UnaryChoice::Id => Term::var(1),
        UnaryChoice::Phi(p) => Term::phi(p, Term::var(1)),
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn witness_substitution_preserves_leaves_on_the_kept_variable() {
    for name in ["chain2", "b2"] {
        let sys = fixtures::singleton_system(&fixtures::by_name(name).unwrap());
        let bounds = Bounds { max_arity: 2, depth: 2, ..Bounds::default() };
        let inventory = spoilt_inventory(&sys, &bounds);
        let classifier = SpoiltClassifier::new(&sys);
        let symbols = SymbolTable::new(&sys);
        let slice = inventory.closure().slice(2);
        assert_eq!(slice.cut(), None);

        let mut exercised = 0;
        for id in inventory.unspoilt_ids(2) {
            let op = slice.op(id);
            let witness = match classifier.classify(op) {
                SpoiltVerdict::Unspoilt { witness, .. } => witness,
                SpoiltVerdict::Spoilt => unreachable!("id came from the unspoilt list"),
            };
            let t = slice.term(id).reduce();
            for i in 1..=2 {
                if !op.depends_on(i).unwrap() {
                    continue;
                }
                let subs: Vec<Term> = (1..=2)
                    .map(|j| {
                        if j == i {
                            Term::var(2)
                        } else {
                            choice_term(witness[j - 1])
                        }
                    })
                    .collect();
                let s = t.substitute(&subs).unwrap().reduce();
                assert_eq!(
                    sorted(s.phi_leaves_on_var(2)),
                    sorted(t.phi_leaves_on_var(i)),
                    "{name}: member {id} changed its variable-{i} leaves under \
                     substitution; term {t}, substituted {s}"
                );
                // the reductions must not have changed the function either
                let direct = t.substitute(&subs).unwrap().eval(&symbols, 2).unwrap();
                assert_eq!(s.eval(&symbols, 2).unwrap(), direct);
                exercised += 1;
            }
        }
        assert!(exercised > 0, "{name}: no unspoilt binary members exercised");
    }
}
