//! Embeds finite lattices into clone lattices over finite base sets.
//!
//! Given a finite lattice L, this crate builds a ground set X, an index
//! family over X with the non-covering property, and the gadget operations
//! whose generated clones realize a copy of L inside the lattice of clones
//! on X. Everything the construction promises is then checked by exhaustive
//! computation at desk scale: bounded closure enumeration, classification
//! of the enumerated operations, and signature comparisons per ideal.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: finite lattices, their ideals, and ideal arithmetic.
//! * [`family`]: ground sets and non-covering index families.
//! * [`ops`]: finitary operations as dense value tables.
//! * [`generators`]: the gadgets φ_p and m_p^{q1,q2}.
//! * [`term`]: terms over generator symbols, leaves, reduction.
//! * [`enumerate`]: bounded closure enumeration with extensional dedup.
//! * [`classify`]: the distracted/spoilt calculus.
//! * [`suites`]: the per-statement verification suites.
//! * [`embedding`]: fragments per ideal and the embedding verdicts.
//! * [`report`]: serializable outcome types shared by suites and CLI.
//! * [`io`]: JSON exchange formats.
//! * [`dot`]: Hasse diagram export.
//! * [`fixtures`]: the standard small lattices.

pub mod classify;
pub mod dot;
pub mod embedding;
pub mod enumerate;
pub mod family;
pub mod fixtures;
pub mod generators;
pub mod io;
pub mod lattice;
pub mod ops;
pub mod report;
pub mod suites;
pub mod term;

pub use classify::{Inventory, SpoiltClassifier, SpoiltVerdict, UnaryChoice};
pub use embedding::{clone_fragment, derive_phi_witness, verify_embedding, when4_suite, CloneFragment};
pub use enumerate::{Bounds, Closure, Cut, Slice};
pub use family::{GroundSet, IndexFamily};
pub use generators::{GenLabel, GeneratorSystem};
pub use lattice::{FiniteLattice, Ideal};
pub use ops::{Operation, Val};
pub use report::{RunReport, SuiteOutcome, Verdict};
pub use suites::{run_lemma_suites, run_lemma_suites_with, SuiteConfig};
pub use term::{SymbolTable, Term};
