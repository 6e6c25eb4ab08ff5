//! Exact, desk-scale decision procedures on subshifts of finite type.
//!
//! A [`SymbolGraph`] presents the shift space of infinite vertex
//! sequences following the edges of a finite digraph. Open sets are
//! modeled as cylinder sets of bounded word length, which makes every
//! quantifier finite: verdicts are exact at the tested resolution `(L, P)`
//! and labeled with it. The shift metric is `d(x, y) = 2^-k` with `k` the
//! first index of disagreement; at word-length resolution `L` the
//! sensitivity constant is `2^-L`.

mod brute;
mod scan;

pub use brute::{
    chaotic, cycle_admissible, devaney_check_bruteforce, orbit_visits_cylinder, touhey_check,
    word_admissible, Budget, DevaneyVerdict, TouheyVerdict,
};
pub use scan::{equivalence_scan, ScanCase, ScanReport};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SftError {
    #[error("graph is empty after pruning to its essential part")]
    Empty,
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("scan bound too large: max_vertices {0} exceeds desk scale 4")]
    ScanTooLarge(usize),
    #[error("malformed graph definition: {0}")]
    Format(String),
}

/// A word over the vertex alphabet; for graphs with at most ten vertices
/// it prints as a digit string.
pub type Word = Vec<usize>;

pub fn word_string(w: &[usize]) -> String {
    if w.iter().all(|&v| v < 10) {
        w.iter().map(|v| v.to_string()).collect()
    } else {
        w.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Finite directed graph whose vertices are symbols. Construction prunes
/// to the essential part: vertices with no outgoing or no incoming edge
/// cannot occur in an infinite sequence and are removed (and recorded).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    pruned: Vec<usize>,
    out_adj: Vec<Vec<usize>>,
    in_deg: Vec<usize>,
}

impl SymbolGraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<SymbolGraph, SftError> {
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(SftError::EdgeOutOfRange(a, b, vertex_count));
            }
            edge_set.insert((a, b));
        }
        // Iteratively drop vertices missing an in- or out-edge.
        let mut alive = vec![true; vertex_count];
        let mut pruned = Vec::new();
        loop {
            let mut out_deg = vec![0usize; vertex_count];
            let mut in_deg = vec![0usize; vertex_count];
            for &(a, b) in &edge_set {
                out_deg[a] += 1;
                in_deg[b] += 1;
            }
            let victim = (0..vertex_count)
                .find(|&v| alive[v] && (out_deg[v] == 0 || in_deg[v] == 0));
            match victim {
                Some(v) => {
                    alive[v] = false;
                    pruned.push(v);
                    edge_set.retain(|&(a, b)| a != v && b != v);
                }
                None => break,
            }
        }
        if edge_set.is_empty() {
            return Err(SftError::Empty);
        }
        let mut out_adj = vec![Vec::new(); vertex_count];
        let mut in_deg = vec![0usize; vertex_count];
        for &(a, b) in &edge_set {
            out_adj[a].push(b);
            in_deg[b] += 1;
        }
        Ok(SymbolGraph {
            vertex_count,
            edges: edge_set,
            pruned,
            out_adj,
            in_deg,
        })
    }

    /// Parses `{vertices: n, edges: [[i, j], ...]}`.
    pub fn from_json_str(text: &str) -> Result<SymbolGraph, SftError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| SftError::Format(e.to_string()))?;
        SymbolGraph::new(file.vertices, file.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Vertices pruned away during construction; empty when the input was
    /// already essential.
    pub fn pruned_vertices(&self) -> &[usize] {
        &self.pruned
    }

    pub fn active_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| !self.out_adj[v].is_empty())
            .collect()
    }

    /// Strongly connected components over active vertices, in a
    /// deterministic order (Tarjan).
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next_index = 0usize;
        let mut components = Vec::new();

        // Iterative Tarjan to keep deep graphs off the call stack.
        enum Frame {
            Enter(usize),
            Resume(usize, usize),
        }
        for root in self.active_vertices() {
            if index[root] != usize::MAX {
                continue;
            }
            let mut frames = vec![Frame::Enter(root)];
            while let Some(frame) = frames.pop() {
                match frame {
                    Frame::Enter(v) => {
                        index[v] = next_index;
                        low[v] = next_index;
                        next_index += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        frames.push(Frame::Resume(v, 0));
                    }
                    Frame::Resume(v, child) => {
                        if let Some(&w) = self.out_adj[v].get(child) {
                            frames.push(Frame::Resume(v, child + 1));
                            if index[w] == usize::MAX {
                                frames.push(Frame::Enter(w));
                            } else if on_stack[w] {
                                low[v] = low[v].min(index[w]);
                            }
                        } else {
                            if low[v] == index[v] {
                                let mut comp = Vec::new();
                                while let Some(w) = stack.pop() {
                                    on_stack[w] = false;
                                    comp.push(w);
                                    if w == v {
                                        break;
                                    }
                                }
                                comp.sort_unstable();
                                components.push(comp);
                            }
                            if let Some(Frame::Resume(parent, _)) = frames.last() {
                                low[*parent] = low[*parent].min(low[v]);
                            }
                        }
                    }
                }
            }
        }
        components.sort();
        components
    }

    pub fn is_strongly_connected(&self) -> bool {
        let active = self.active_vertices();
        let components = self.strongly_connected_components();
        components.len() == 1 && components[0].len() == active.len()
    }

    /// Shortest path between active vertices, as a vertex sequence
    /// including both endpoints.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        self.shortest_path_within(from, to, None)
    }

    fn shortest_path_within(
        &self,
        from: usize,
        to: usize,
        allowed: Option<&BTreeSet<usize>>,
    ) -> Option<Vec<usize>> {
        let ok = |v: usize| allowed.map_or(true, |set| set.contains(&v));
        if !ok(from) || !ok(to) {
            return None;
        }
        let mut prev = vec![usize::MAX; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from);
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to && v != from {
                break;
            }
            for &w in &self.out_adj[v] {
                if ok(w) && !seen[w] {
                    seen[w] = true;
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if from == to {
            return Some(vec![from]);
        }
        if !seen[to] {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Walks from `from` to `to` staying inside `allowed`.
    pub(crate) fn path_inside(
        &self,
        from: usize,
        to: usize,
        allowed: &BTreeSet<usize>,
    ) -> Option<Vec<usize>> {
        self.shortest_path_within(from, to, Some(allowed))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

/// Transitivity decision with an explicit witness either way.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitivityCheck {
    pub transitive: bool,
    pub witness: TransitivityWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransitivityWitness {
    /// Closed walk visiting every edge.
    ClosedWalk(Vec<usize>),
    /// Ordered vertex pair with no connecting path.
    DisconnectedPair(usize, usize),
}

/// A subshift of finite type is topologically transitive exactly when its
/// essential graph is strongly connected.
pub fn is_transitive(g: &SymbolGraph) -> TransitivityCheck {
    let active = g.active_vertices();
    if !g.is_strongly_connected() {
        // Find a witness pair with no path.
        for &a in &active {
            for &b in &active {
                if g.shortest_path(a, b).is_none() {
                    return TransitivityCheck {
                        transitive: false,
                        witness: TransitivityWitness::DisconnectedPair(a, b),
                    };
                }
            }
        }
        unreachable!("a disconnected graph has a disconnected pair");
    }
    // Closed walk through every edge: chain shortest paths between edges.
    let start = active[0];
    let mut walk = vec![start];
    for (a, b) in g.edges() {
        let cur = *walk.last().expect("walk is nonempty");
        let to_edge = g.shortest_path(cur, a).expect("graph is strongly connected");
        walk.extend(&to_edge[1..]);
        walk.push(b);
    }
    let cur = *walk.last().expect("walk is nonempty");
    let back = g.shortest_path(cur, start).expect("graph is strongly connected");
    walk.extend(&back[1..]);
    TransitivityCheck {
        transitive: true,
        witness: TransitivityWitness::ClosedWalk(walk),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete graph on two symbols: the full 2-shift.
    pub(crate) fn full_two_shift() -> SymbolGraph {
        SymbolGraph::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    #[test]
    fn full_shift_is_transitive() {
        let check = is_transitive(&full_two_shift());
        assert!(check.transitive);
        match check.witness {
            TransitivityWitness::ClosedWalk(walk) => {
                // Witness covers all four edges.
                let mut seen = BTreeSet::new();
                for pair in walk.windows(2) {
                    seen.insert((pair[0], pair[1]));
                }
                assert_eq!(seen.len(), 4);
                assert_eq!(walk.first(), walk.last());
            }
            TransitivityWitness::DisconnectedPair(..) => panic!("expected a walk"),
        }
    }

    #[test]
    fn disjoint_loops_are_not_transitive() {
        let g = SymbolGraph::new(2, [(0, 0), (1, 1)]).unwrap();
        let check = is_transitive(&g);
        assert!(!check.transitive);
        assert!(matches!(
            check.witness,
            TransitivityWitness::DisconnectedPair(..)
        ));
    }

    #[test]
    fn three_cycle_is_transitive() {
        let g = SymbolGraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(is_transitive(&g).transitive);
    }

    #[test]
    fn pruning_removes_dead_ends() {
        // Vertex 2 has no outgoing edge; removing it kills 1's only target,
        // leaving only the self-loop at 0.
        let g = SymbolGraph::new(3, [(0, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.pruned_vertices(), &[2, 1]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.active_vertices(), vec![0]);
    }

    #[test]
    fn fully_dead_graph_is_empty() {
        assert!(matches!(
            SymbolGraph::new(2, [(0, 1)]),
            Err(SftError::Empty)
        ));
        assert!(matches!(SymbolGraph::new(3, []), Err(SftError::Empty)));
    }

    #[test]
    fn json_round_trip() {
        let g = SymbolGraph::new(3, [(0, 1), (1, 2), (2, 0), (0, 0)]).unwrap();
        let text = g.to_json_string();
        let back = SymbolGraph::from_json_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn scc_decomposition() {
        let g = SymbolGraph::new(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
        let comps = g.strongly_connected_components();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
        assert!(!g.is_strongly_connected());
    }
}
