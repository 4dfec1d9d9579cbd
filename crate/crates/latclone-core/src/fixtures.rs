//! Small named lattices used by the test suites, the benchmarks, and the
//! bundled CLI examples.
//!
//! Element ids follow one convention: 0 is bottom, the last id is top, and
//! middle elements are listed in name order. N5 is the pentagon with the
//! long side a < c.

use crate::family::singleton_family;
use crate::generators::GeneratorSystem;
use crate::lattice::FiniteLattice;

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The n-element chain.
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1, "chains need at least one element");
    let names: Vec<String> = match n {
        1 => names(&["bot"]),
        2 => names(&["bot", "top"]),
        3 => names(&["bot", "mid", "top"]),
        _ => (0..n).map(|i| format!("c{i}")).collect(),
    };
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    FiniteLattice::complete_from_order(names, &pairs).expect("chains are lattices")
}

/// The four-element Boolean lattice: two incomparable atoms a, b.
pub fn b2() -> FiniteLattice {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)];
    FiniteLattice::complete_from_order(names(&["bot", "a", "b", "top"]), &pairs)
        .expect("B2 is a lattice")
}

/// The diamond: three pairwise incomparable atoms a, b, c.
pub fn m3() -> FiniteLattice {
    let pairs = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 4),
        (2, 4),
        (3, 4),
    ];
    FiniteLattice::complete_from_order(names(&["bot", "a", "b", "c", "top"]), &pairs)
        .expect("M3 is a lattice")
}

/// The pentagon: a < c on one side, b alone on the other.
pub fn n5() -> FiniteLattice {
    let pairs = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 3),
        (1, 4),
        (2, 4),
        (3, 4),
    ];
    FiniteLattice::complete_from_order(names(&["bot", "a", "b", "c", "top"]), &pairs)
        .expect("N5 is a lattice")
}

/// Every fixture with its short name, smallest first.
pub fn all() -> Vec<(&'static str, FiniteLattice)> {
    vec![
        ("one", chain(1)),
        ("chain2", chain(2)),
        ("chain3", chain(3)),
        ("b2", b2()),
        ("m3", m3()),
        ("n5", n5()),
    ]
}

/// Looks a fixture up by its short name.
pub fn by_name(name: &str) -> Option<FiniteLattice> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, lat)| lat)
}

/// The generator system over the minimal ground set |X| = |L| + 4, which is
/// what every suite runs against unless a family is supplied explicitly.
pub fn singleton_system(lattice: &FiniteLattice) -> GeneratorSystem {
    let family = singleton_family(lattice.size()).expect("fixture sizes are positive");
    GeneratorSystem::build(lattice.clone(), family).expect("fixture systems build")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        let sizes: Vec<usize> = all().iter().map(|(_, lat)| lat.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 5, 5]);
    }

    #[test]
    fn tops_and_bottoms() {
        for (name, lat) in all() {
            assert_eq!(lat.bottom(), 0, "{name}");
            assert_eq!(lat.top(), lat.size() - 1, "{name}");
        }
    }

    #[test]
    fn singleton_system_ground_sizes() {
        for (_, lat) in all() {
            let sys = singleton_system(&lat);
            assert_eq!(sys.ground_size(), lat.size() + 4);
        }
    }
}
