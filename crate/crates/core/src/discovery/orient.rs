use std::collections::BTreeSet;

use crate::bnmodel::{Cpdag, Pdag};
use crate::discovery::SepsetMap;

/// Orients `x → z ← y` for every unshielded triple `x − z − y` whose
/// separating set excludes `z`. An edge asked to point both ways stays
/// undirected; directed edges that end up on a directed cycle are reverted
/// too. Returns the graph and the number of contested edges.
pub fn orient_v_structures(skeleton: &Pdag, sepsets: &SepsetMap) -> (Pdag, usize) {
    let n = skeleton.n();
    let mut arrows = BTreeSet::new();
    for z in 0..n {
        let adj = skeleton.adjacent(z);
        for (i, &x) in adj.iter().enumerate() {
            for &y in &adj[i + 1..] {
                if skeleton.is_adjacent(x, y) {
                    continue;
                }
                if !sepsets.get(x, y).unwrap_or(&[]).contains(&z) {
                    arrows.insert((x, z));
                    arrows.insert((y, z));
                }
            }
        }
    }
    let mut g = skeleton.clone();
    let mut conflicts = 0;
    for &(a, b) in &arrows {
        if arrows.contains(&(b, a)) {
            if a < b {
                conflicts += 1;
            }
            continue;
        }
        if skeleton.has_undirected(a, b) {
            g.set_directed(a, b);
        }
    }
    g.undirect_cycles();
    (g, conflicts)
}

/// Closes a partially oriented graph under Meek's rules R1 to R4.
pub fn apply_meek_rules(pdag: &Pdag) -> Cpdag {
    let mut g = pdag.clone();
    g.meek_closure();
    g
}
