//! Hasse diagrams in DOT form: the input lattice, and its image in the
//! clone lattice with nodes labeled by Φ-signatures.

use crate::lattice::FiniteLattice;

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The Hasse diagram of the lattice, drawn bottom-up.
pub fn lattice_dot(lattice: &FiniteLattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for p in 0..lattice.size() {
        out.push_str(&format!("  e{p} [label=\"{}\"];\n", quote(lattice.name(p))));
    }
    for (lo, hi) in lattice.covers() {
        out.push_str(&format!("  e{lo} -> e{hi};\n"));
    }
    out.push_str("}\n");
    out
}

/// The image of the embedding: one node per principal ideal (element
/// order), labeled by the Φ-signature its fragment exposed, with the same
/// cover edges as the lattice.
pub fn image_dot(lattice: &FiniteLattice, signatures: &[Vec<usize>]) -> String {
    assert_eq!(
        signatures.len(),
        lattice.size(),
        "one signature per principal ideal"
    );
    let mut out = String::from("digraph image {\n  rankdir=BT;\n  node [shape=box];\n");
    for (p, sig) in signatures.iter().enumerate() {
        let label = sig
            .iter()
            .map(|q| format!("phi_{q}"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("  c{p} [label=\"{{{}}}\"];\n", quote(&label)));
    }
    for (lo, hi) in lattice.covers() {
        out.push_str(&format!("  c{lo} -> c{hi};\n"));
    }
    out.push_str("}\n");
    out
}
