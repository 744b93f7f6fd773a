//! Directed acyclic graphs and partially directed graphs over `0..n`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bnmodel::BnError;

/// Directed acyclic graph. Parent and child lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dag {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a DAG from `(from, to)` pairs, rejecting self-loops,
    /// out-of-range nodes and cycles. Duplicate edges are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, BnError> {
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(BnError::UnknownNode(format!("{}", a.max(b))));
            }
            if a == b {
                return Err(BnError::Invalid(format!("self-loop on node {a}")));
            }
            parents[b].push(a);
            children[a].push(b);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let dag = Dag { parents, children };
        if dag.topological_order().is_none() {
            return Err(BnError::Cyclic);
        }
        Ok(dag)
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.children[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// Edges `(from, to)` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, ch) in self.children.iter().enumerate() {
            out.extend(ch.iter().map(|&b| (a, b)));
        }
        out
    }

    /// Kahn ordering with ties broken by index; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        topo_order(self.n(), |v| &self.parents[v], |v| &self.children[v])
    }
}

pub(crate) fn topo_order<'a>(
    n: usize,
    parents: impl Fn(usize) -> &'a [usize],
    children: impl Fn(usize) -> &'a [usize],
) -> Option<Vec<usize>> {
    let mut indeg: Vec<usize> = (0..n).map(|v| parents(v).len()).collect();
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in children(v) {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert(c);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Mark {
    None,
    /// `i → j` when stored at `(i, j)`; the mirror cell holds `Tail`.
    Head,
    Tail,
    Undirected,
}

/// Graph mixing directed and undirected edges, stored as a dense mark
/// matrix. A CPDAG is a `Pdag` closed under the Meek rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pdag {
    n: usize,
    marks: Vec<Mark>,
}

/// Completed PDAG: the representative of a Markov equivalence class.
pub type Cpdag = Pdag;

/// State of the edge between an ordered pair of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Absent,
    /// `a → b`.
    Forward,
    /// `a ← b`.
    Backward,
    Undirected,
}

impl Pdag {
    pub fn empty(n: usize) -> Self {
        Pdag { n, marks: vec![Mark::None; n * n] }
    }

    /// Undirected graph with every pair in `edges` connected.
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Pdag::empty(n);
        for &(a, b) in edges {
            g.set_undirected(a, b);
        }
        g
    }

    /// Skeleton of a DAG with all edges directed as in the DAG.
    pub fn from_dag(dag: &Dag) -> Self {
        let mut g = Pdag::empty(dag.n());
        for (a, b) in dag.edges() {
            g.set_directed(a, b);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, a: usize, b: usize) -> Mark {
        self.marks[a * self.n + b]
    }

    pub fn edge(&self, a: usize, b: usize) -> EdgeKind {
        match self.at(a, b) {
            Mark::None => EdgeKind::Absent,
            Mark::Head => EdgeKind::Forward,
            Mark::Tail => EdgeKind::Backward,
            Mark::Undirected => EdgeKind::Undirected,
        }
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.at(a, b) != Mark::None
    }

    /// `a → b`.
    pub fn has_directed(&self, a: usize, b: usize) -> bool {
        self.at(a, b) == Mark::Head
    }

    pub fn has_undirected(&self, a: usize, b: usize) -> bool {
        self.at(a, b) == Mark::Undirected
    }

    pub fn set_directed(&mut self, a: usize, b: usize) {
        assert!(a != b, "self-loop");
        let n = self.n;
        self.marks[a * n + b] = Mark::Head;
        self.marks[b * n + a] = Mark::Tail;
    }

    pub fn set_undirected(&mut self, a: usize, b: usize) {
        assert!(a != b, "self-loop");
        let n = self.n;
        self.marks[a * n + b] = Mark::Undirected;
        self.marks[b * n + a] = Mark::Undirected;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        let n = self.n;
        self.marks[a * n + b] = Mark::None;
        self.marks[b * n + a] = Mark::None;
    }

    /// All nodes adjacent to `v`, ascending.
    pub fn adjacent(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.is_adjacent(v, u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|a| (a + 1..self.n).filter(|&b| self.is_adjacent(a, b)).count())
            .sum()
    }

    /// Directed edges `(from, to)` in lexicographic order.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.has_directed(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Undirected edges `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_undirected(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether `to` is reachable from `from` along directed edges.
    pub fn directed_path(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                return true;
            }
            for w in 0..self.n {
                if !seen[w] && self.has_directed(v, w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    pub fn has_directed_cycle(&self) -> bool {
        let edges = self.directed_edges();
        edges.iter().any(|&(a, b)| self.directed_path(b, a))
    }

    /// Turns every directed edge that lies on a directed cycle back into an
    /// undirected edge. Returns how many edges were changed.
    pub fn undirect_cycles(&mut self) -> usize {
        let on_cycle: Vec<(usize, usize)> = self
            .directed_edges()
            .into_iter()
            .filter(|&(a, b)| self.directed_path(b, a))
            .collect();
        for &(a, b) in &on_cycle {
            self.set_undirected(a, b);
        }
        on_cycle.len()
    }

    /// Orients `a → b` unless that closes a directed cycle.
    fn orient_if_acyclic(&mut self, a: usize, b: usize) -> bool {
        if self.directed_path(b, a) {
            return false;
        }
        self.set_directed(a, b);
        true
    }

    /// Applies Meek's rules R1 to R4 until no rule fires. An orientation
    /// that would close a directed cycle is skipped.
    pub fn meek_closure(&mut self) {
        let n = self.n;
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    if a == b || !self.has_undirected(a, b) {
                        continue;
                    }
                    if self.meek_applies(a, b) && self.orient_if_acyclic(a, b) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Whether one of R1..R4 orients the undirected edge `a − b` as `a → b`.
    fn meek_applies(&self, a: usize, b: usize) -> bool {
        let n = self.n;
        // R1: c → a − b, c and b non-adjacent.
        if (0..n).any(|c| self.has_directed(c, a) && !self.is_adjacent(c, b) && c != b) {
            return true;
        }
        // R2: a → c → b.
        if (0..n).any(|c| self.has_directed(a, c) && self.has_directed(c, b)) {
            return true;
        }
        // R3: a − c → b, a − d → b, c and d non-adjacent.
        let mids: Vec<usize> = (0..n)
            .filter(|&c| self.has_undirected(a, c) && self.has_directed(c, b))
            .collect();
        for (i, &c) in mids.iter().enumerate() {
            if mids[i + 1..].iter().any(|&d| !self.is_adjacent(c, d)) {
                return true;
            }
        }
        // R4: a − d, c → d → b, a adjacent to c, c and b non-adjacent.
        for d in 0..n {
            if !(self.has_undirected(a, d) && self.has_directed(d, b)) {
                continue;
            }
            if (0..n).any(|c| {
                c != a && c != b && self.has_directed(c, d) && self.is_adjacent(a, c) && !self.is_adjacent(c, b)
            }) {
                return true;
            }
        }
        false
    }
}

/// CPDAG of the Markov equivalence class of `dag`: v-structures are kept
/// directed, the rest of the skeleton starts undirected, then Meek's rules
/// propagate compelled orientations.
pub fn dag_to_cpdag(dag: &Dag) -> Cpdag {
    let n = dag.n();
    let mut g = Pdag::empty(n);
    for (a, b) in dag.edges() {
        g.set_undirected(a, b);
    }
    for c in 0..n {
        let pa = dag.parents(c);
        for (i, &a) in pa.iter().enumerate() {
            for &b in &pa[i + 1..] {
                if !dag.has_edge(a, b) && !dag.has_edge(b, a) {
                    g.set_directed(a, c);
                    g.set_directed(b, c);
                }
            }
        }
    }
    g.meek_closure();
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycle() {
        assert!(matches!(Dag::new(3, &[(0, 1), (1, 2), (2, 0)]), Err(BnError::Cyclic)));
        assert!(Dag::new(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn chain_is_undirected() {
        let dag = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
        let cp = dag_to_cpdag(&dag);
        assert_eq!(cp.undirected_edges(), vec![(0, 1), (1, 2)]);
        assert!(cp.directed_edges().is_empty());
    }

    #[test]
    fn collider_stays_directed() {
        let dag = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let cp = dag_to_cpdag(&dag);
        assert_eq!(cp.directed_edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn single_edge_undirected() {
        let cp = dag_to_cpdag(&Dag::new(2, &[(0, 1)]).unwrap());
        assert!(cp.has_undirected(0, 1));
    }

    #[test]
    fn collider_propagates_r1() {
        // 0 → 2 ← 1, 2 → 3: the last edge is compelled.
        let cp = dag_to_cpdag(&Dag::new(4, &[(0, 2), (1, 2), (2, 3)]).unwrap());
        assert!(cp.has_directed(2, 3));
    }

    #[test]
    fn meek_r1() {
        let mut g = Pdag::empty(3);
        g.set_directed(0, 1);
        g.set_undirected(1, 2);
        g.meek_closure();
        assert!(g.has_directed(1, 2));
    }

    #[test]
    fn meek_r2() {
        let mut g = Pdag::empty(3);
        g.set_directed(0, 1);
        g.set_directed(1, 2);
        g.set_undirected(0, 2);
        g.meek_closure();
        assert!(g.has_directed(0, 2));
    }

    #[test]
    fn meek_r3() {
        // a − c → b, a − d → b, a − b, c and d non-adjacent.
        let (a, b, c, d) = (0, 1, 2, 3);
        let mut g = Pdag::empty(4);
        g.set_undirected(a, b);
        g.set_undirected(a, c);
        g.set_undirected(a, d);
        g.set_directed(c, b);
        g.set_directed(d, b);
        g.meek_closure();
        assert!(g.has_directed(a, b));
    }

    #[test]
    fn closed_graph_unchanged() {
        let cp = dag_to_cpdag(&Dag::new(4, &[(0, 2), (1, 2), (2, 3)]).unwrap());
        let mut again = cp.clone();
        again.meek_closure();
        assert_eq!(cp, again);
    }

    #[test]
    fn cycle_reverted() {
        let mut g = Pdag::empty(4);
        g.set_directed(0, 1);
        g.set_directed(1, 2);
        g.set_directed(2, 0);
        g.set_directed(2, 3);
        assert!(g.has_directed_cycle());
        assert_eq!(g.undirect_cycles(), 3);
        assert!(!g.has_directed_cycle());
        assert!(g.has_directed(2, 3));
    }
}
