//! Shared setup for the benchmarks: prebuilt generator systems so the
//! benches time the algorithms, not fixture assembly.

use latclone_core::fixtures;
use latclone_core::GeneratorSystem;

/// The fixtures worth timing, smallest to largest, with singleton families.
pub fn systems() -> Vec<(&'static str, GeneratorSystem)> {
    fixtures::all()
        .into_iter()
        .filter(|(name, _)| ["chain2", "b2", "m3"].contains(name))
        .map(|(name, lattice)| (name, fixtures::singleton_system(&lattice)))
        .collect()
}
