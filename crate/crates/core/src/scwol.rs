//! Small categories without loops.
//!
//! Vertices and edges are dense indices. An edge `a` runs from `init(a)` to
//! `term(a)`; a pair `(a, b)` is composable when `init(a) == term(b)`, and its
//! composite `ab` runs from `init(b)` to `term(a)`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::metric::{components, FiniteMetricSpace};
use crate::report::{ValidationReport, ViolationKind};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScwolError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("composition of ({0}, {1}) given twice")]
    DuplicateComposition(String, String),
    #[error("scwol is disconnected; components: {0:?}")]
    Disconnected(Vec<Vec<VertexId>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeRecord {
    name: String,
    init: VertexId,
    term: VertexId,
}

/// A small category without loops, stored explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scwol {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    comp: HashMap<(EdgeId, EdgeId), EdgeId>,
}

#[derive(Default, Debug)]
pub struct ScwolBuilder {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    comp: HashMap<(EdgeId, EdgeId), EdgeId>,
    error: Option<ScwolError>,
}

impl ScwolBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if self.vertices.contains(&name) && self.error.is_none() {
            self.error = Some(ScwolError::DuplicateVertex(name.clone()));
        }
        self.vertices.push(name);
        self.vertices.len() - 1
    }

    pub fn edge(&mut self, name: impl Into<String>, init: VertexId, term: VertexId) -> EdgeId {
        let name = name.into();
        if self.error.is_none() {
            if self.edges.iter().any(|e| e.name == name) {
                self.error = Some(ScwolError::DuplicateEdge(name.clone()));
            } else if init >= self.vertices.len() || term >= self.vertices.len() {
                self.error = Some(ScwolError::VertexOutOfRange(init.max(term)));
            }
        }
        self.edges.push(EdgeRecord { name, init, term });
        self.edges.len() - 1
    }

    /// Declares `comp(a, b) = ab`.
    pub fn compose(&mut self, a: EdgeId, b: EdgeId, ab: EdgeId) -> &mut Self {
        let n = self.edges.len();
        if self.error.is_none() {
            if let Some(&bad) = [a, b, ab].iter().find(|&&e| e >= n) {
                self.error = Some(ScwolError::EdgeOutOfRange(bad));
            } else if self.comp.insert((a, b), ab).is_some() {
                self.error = Some(ScwolError::DuplicateComposition(self.edges[a].name.clone(), self.edges[b].name.clone()));
            }
        }
        self
    }

    pub fn build(self) -> Result<Scwol, ScwolError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        Ok(Scwol { vertices: self.vertices, edges: self.edges, comp: self.comp })
    }
}

impl Scwol {
    pub fn builder() -> ScwolBuilder {
        ScwolBuilder::new()
    }

    /// The one-dimensional scwol of a graph: graph vertices become sinks and a
    /// source `m<k>` is placed in the middle of graph edge `k`, with edges
    /// `e<k>a` and `e<k>b` from it to the two endpoints.
    pub fn from_graph(vertex_names: &[&str], graph_edges: &[(usize, usize)]) -> Result<Scwol, ScwolError> {
        let mut b = ScwolBuilder::new();
        for name in vertex_names {
            b.vertex(*name);
        }
        for (k, &(x, y)) in graph_edges.iter().enumerate() {
            let m = b.vertex(format!("m{k}"));
            b.edge(format!("e{k}a"), m, x);
            b.edge(format!("e{k}b"), m, y);
        }
        b.build()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn init(&self, a: EdgeId) -> VertexId {
        self.edges[a].init
    }

    #[inline]
    pub fn term(&self, a: EdgeId) -> VertexId {
        self.edges[a].term
    }

    #[inline]
    pub fn compose(&self, a: EdgeId, b: EdgeId) -> Option<EdgeId> {
        self.comp.get(&(a, b)).copied()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, a: EdgeId) -> &str {
        &self.edges[a].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertices.len()
    }

    pub fn edges(&self) -> std::ops::Range<EdgeId> {
        0..self.edges.len()
    }

    /// All declared compositions as `(a, b, ab)`, sorted.
    pub fn compositions(&self) -> Vec<(EdgeId, EdgeId, EdgeId)> {
        let mut out: Vec<_> = self.comp.iter().map(|(&(a, b), &ab)| (a, b, ab)).collect();
        out.sort_unstable();
        out
    }

    /// Pairs `(a, b)` with `init(a) == term(b)`.
    pub fn composable_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for a in self.edges() {
            for b in self.edges() {
                if self.init(a) == self.term(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Checks the scwol axioms; every violation is listed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for a in self.edges() {
            if self.init(a) == self.term(a) {
                report.push(
                    ViolationKind::NoLoops,
                    format!("edge {} starts and ends at {}", self.edge_name(a), self.vertex_name(self.init(a))),
                );
            }
        }
        for (a, b) in self.composable_pairs() {
            match self.compose(a, b) {
                None => report.push(
                    ViolationKind::CompositionMissing,
                    format!("({}, {}) is composable but has no composite", self.edge_name(a), self.edge_name(b)),
                ),
                Some(ab) => {
                    if self.init(ab) != self.init(b) || self.term(ab) != self.term(a) {
                        report.push(
                            ViolationKind::CompositionEndpoints,
                            format!(
                                "composite {} of ({}, {}) has wrong endpoints",
                                self.edge_name(ab),
                                self.edge_name(a),
                                self.edge_name(b)
                            ),
                        );
                    }
                }
            }
        }
        for (a, b, _) in self.compositions() {
            if self.init(a) != self.term(b) {
                report.push(
                    ViolationKind::CompositionSpurious,
                    format!("composite given for non-composable pair ({}, {})", self.edge_name(a), self.edge_name(b)),
                );
            }
        }
        for (a, b) in self.composable_pairs() {
            for c in self.edges() {
                if self.init(b) != self.term(c) {
                    continue;
                }
                let left = self.compose(a, b).and_then(|ab| self.compose(ab, c));
                let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        report.push(
                            ViolationKind::Associativity,
                            format!(
                                "({}{}){} = {} but {}({}{}) = {}",
                                self.edge_name(a),
                                self.edge_name(b),
                                self.edge_name(c),
                                self.edge_name(l),
                                self.edge_name(a),
                                self.edge_name(b),
                                self.edge_name(c),
                                self.edge_name(r)
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    /// The composable sequences of length `k`. For `k == 0` each entry is the
    /// one-element tuple `[v]` of a vertex.
    pub fn composable_sequences(&self, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return self.vertices().map(|v| vec![v]).collect();
        }
        let mut by_term: Vec<Vec<EdgeId>> = vec![Vec::new(); self.num_vertices()];
        for b in self.edges() {
            by_term[self.term(b)].push(b);
        }
        let mut out = Vec::new();
        let mut stack: Vec<EdgeId> = Vec::with_capacity(k);
        fn extend(s: &Scwol, by_term: &[Vec<EdgeId>], k: usize, stack: &mut Vec<EdgeId>, out: &mut Vec<Vec<usize>>) {
            if stack.len() == k {
                out.push(stack.clone());
                return;
            }
            let last = *stack.last().expect("stack starts nonempty");
            for &b in &by_term[s.init(last)] {
                stack.push(b);
                extend(s, by_term, k, stack, out);
                stack.pop();
            }
        }
        for a in self.edges() {
            stack.push(a);
            extend(self, &by_term, k, &mut stack, &mut out);
            stack.pop();
        }
        out
    }

    /// Largest `k` with a composable sequence of length `k`.
    ///
    /// In a valid scwol a sequence visits distinct vertices, so the search stops
    /// at `num_vertices`; invalid inputs with cycles report that cap.
    pub fn dimension(&self) -> usize {
        let mut frontier: Vec<bool> = vec![true; self.num_edges()];
        let mut k = 0;
        while frontier.iter().any(|&x| x) && k < self.num_vertices() {
            k += 1;
            let mut next = vec![false; self.num_edges()];
            for a in self.edges().filter(|&a| frontier[a]) {
                for b in self.edges() {
                    if self.term(b) == self.init(a) {
                        next[b] = true;
                    }
                }
            }
            frontier = next;
        }
        k
    }

    fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for a in self.edges() {
            let (x, y) = (self.init(a), self.term(a));
            if x != y && !adj[x].contains(&y) {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        adj
    }

    /// Connected components of the 1-skeleton, each sorted.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        components(&self.adjacency())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Shortest-path metric on vertices of the unit-length 1-skeleton.
    pub fn one_skeleton(&self) -> Result<FiniteMetricSpace, ScwolError> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(ScwolError::Disconnected(comps));
        }
        let edges: Vec<(usize, usize)> = self.edges().map(|a| (self.init(a), self.term(a))).collect();
        FiniteMetricSpace::from_graph(self.vertices.clone(), &edges).map_err(|_| ScwolError::Disconnected(comps))
    }

    /// Breadth-first spanning tree of the 1-skeleton from vertex 0, as edge ids.
    pub fn spanning_tree(&self) -> Result<Vec<EdgeId>, ScwolError> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(ScwolError::Disconnected(comps));
        }
        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); self.num_vertices()];
        for a in self.edges() {
            incident[self.init(a)].push(a);
            incident[self.term(a)].push(a);
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut tree = Vec::new();
        if self.num_vertices() == 0 {
            return Ok(tree);
        }
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &a in &incident[x] {
                let y = if self.init(a) == x { self.term(a) } else { self.init(a) };
                if !seen[y] {
                    seen[y] = true;
                    tree.push(a);
                    queue.push_back(y);
                }
            }
        }
        tree.sort_unstable();
        Ok(tree)
    }

    /// Searches for an isomorphism `self -> other`, returned as vertex and edge maps.
    pub fn find_isomorphism(&self, other: &Scwol) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        if self.num_vertices() != other.num_vertices() || self.num_edges() != other.num_edges() || self.comp.len() != other.comp.len() {
            return None;
        }
        let sig = |s: &Scwol, v: VertexId| {
            let out = s.edges().filter(|&a| s.init(a) == v).count();
            let inc = s.edges().filter(|&a| s.term(a) == v).count();
            (out, inc)
        };
        let mine: Vec<_> = self.vertices().map(|v| sig(self, v)).collect();
        let theirs: Vec<_> = other.vertices().map(|v| sig(other, v)).collect();
        let mut vmap = vec![usize::MAX; self.num_vertices()];
        let mut used = vec![false; other.num_vertices()];
        self.match_vertices(other, 0, &mine, &theirs, &mut vmap, &mut used)
    }

    fn match_vertices(
        &self,
        other: &Scwol,
        v: usize,
        mine: &[(usize, usize)],
        theirs: &[(usize, usize)],
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        if v == self.num_vertices() {
            let mut emap = vec![usize::MAX; self.num_edges()];
            let mut eused = vec![false; other.num_edges()];
            return self.match_edges(other, 0, vmap, &mut emap, &mut eused).then(|| (vmap.clone(), emap));
        }
        for w in other.vertices() {
            if used[w] || mine[v] != theirs[w] {
                continue;
            }
            // edges between already-mapped vertices must have matching multiplicities
            let consistent = (0..v).all(|u| {
                let count = |s: &Scwol, x: usize, y: usize| s.edges().filter(|&a| s.init(a) == x && s.term(a) == y).count();
                count(self, u, v) == count(other, vmap[u], w) && count(self, v, u) == count(other, w, vmap[u])
            });
            if !consistent {
                continue;
            }
            vmap[v] = w;
            used[w] = true;
            if let Some(found) = self.match_vertices(other, v + 1, mine, theirs, vmap, used) {
                return Some(found);
            }
            used[w] = false;
            vmap[v] = usize::MAX;
        }
        None
    }

    fn match_edges(&self, other: &Scwol, a: usize, vmap: &[usize], emap: &mut Vec<usize>, eused: &mut Vec<bool>) -> bool {
        if a == self.num_edges() {
            return self.comp.iter().all(|(&(x, y), &xy)| other.compose(emap[x], emap[y]) == Some(emap[xy]));
        }
        for b in other.edges() {
            if eused[b] || other.init(b) != vmap[self.init(a)] || other.term(b) != vmap[self.term(a)] {
                continue;
            }
            emap[a] = b;
            eused[b] = true;
            if self.match_edges(other, a + 1, vmap, emap, eused) {
                return true;
            }
            eused[b] = false;
        }
        emap[a] = usize::MAX;
        false
    }

    /// Graphviz rendering: one node per vertex, one arrow `init -> term` per edge.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n", escape(name));
        for v in self.vertices() {
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", escape(self.vertex_name(v)));
        }
        for a in self.edges() {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", self.init(a), self.term(a), escape(self.edge_name(a)));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Free-function form of [`Scwol::validate`].
pub fn validate_scwol(s: &Scwol) -> ValidationReport {
    s.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn single_edge() -> Scwol {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        b.edge("a", v0, v1);
        b.build().unwrap()
    }

    /// Edges a: v1 -> v0, b: v2 -> v1, ab: v2 -> v0.
    pub(crate) fn two_simplex() -> Scwol {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let v2 = b.vertex("v2");
        let a = b.edge("a", v1, v0);
        let bb = b.edge("b", v2, v1);
        let ab = b.edge("ab", v2, v0);
        b.compose(a, bb, ab);
        b.build().unwrap()
    }

    #[test]
    fn single_edge_is_valid_and_one_dimensional() {
        let s = single_edge();
        assert!(s.validate().is_valid());
        assert_eq!(s.composable_sequences(1), vec![vec![0]]);
        assert!(s.composable_sequences(2).is_empty());
        assert_eq!(s.dimension(), 1);
        let m = s.one_skeleton().unwrap();
        assert_eq!(m.d(0, 1), 1);
    }

    #[test]
    fn loop_edge_violates_no_loops() {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        b.edge("a", v0, v0);
        let s = b.build().unwrap();
        let r = s.validate();
        assert!(r.has(ViolationKind::NoLoops));
        assert!(r.violations[0].detail.contains('a'));
    }

    #[test]
    fn two_simplex_axioms_by_hand() {
        let s = two_simplex();
        // composable pairs: only (a, b) since init(a) = v1 = term(b)
        assert_eq!(s.composable_pairs(), vec![(0, 1)]);
        assert!(s.validate().is_valid());
        assert_eq!(s.composable_sequences(2), vec![vec![0, 1]]);
        assert!(s.composable_sequences(3).is_empty());
        assert_eq!(s.dimension(), 2);
        let m = s.one_skeleton().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(m.d(x, y), u32::from(x != y));
            }
        }
    }

    #[test]
    fn missing_and_bad_compositions() {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let v2 = b.vertex("v2");
        let a = b.edge("a", v1, v0);
        let bb = b.edge("b", v2, v1);
        let s = b.build().unwrap();
        assert!(s.validate().has(ViolationKind::CompositionMissing));

        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let v2 = b.vertex("v2");
        let a2 = b.edge("a", v1, v0);
        let b2 = b.edge("b", v2, v1);
        b.compose(a2, b2, a2).compose(b2, a2, b2);
        let s = b.build().unwrap();
        let r = s.validate();
        assert!(r.has(ViolationKind::CompositionEndpoints));
        assert!(r.has(ViolationKind::CompositionSpurious));
        let _ = (a, bb);
    }

    #[test]
    fn edgeless_point_has_dimension_zero() {
        let mut b = Scwol::builder();
        b.vertex("p");
        let s = b.build().unwrap();
        assert_eq!(s.dimension(), 0);
        assert_eq!(s.composable_sequences(0), vec![vec![0]]);
        assert!(s.validate().is_valid());
    }

    #[test]
    fn graph_scwols() {
        // path graph on n graph-edges: skeleton length doubles
        for n in 1..6 {
            let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let edges: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
            let s = Scwol::from_graph(&refs, &edges).unwrap();
            assert!(s.validate().is_valid());
            assert_eq!(s.dimension(), 1);
            let m = s.one_skeleton().unwrap();
            assert_eq!(m.d(0, n) as usize, 2 * n);
        }
    }

    #[test]
    fn disconnected_skeleton_is_rejected() {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        b.vertex("v2");
        b.edge("a", v0, v1);
        let s = b.build().unwrap();
        assert!(s.validate().is_valid());
        assert_eq!(s.one_skeleton(), Err(ScwolError::Disconnected(vec![vec![0, 1], vec![2]])));
    }

    #[test]
    fn spanning_tree_of_two_simplex() {
        // BFS from v0 reaches v1 via a and v2 via ab
        assert_eq!(two_simplex().spanning_tree().unwrap(), vec![0, 2]);
        assert_eq!(single_edge().spanning_tree().unwrap(), vec![0]);
    }

    #[test]
    fn isomorphism_search() {
        let s = two_simplex();
        let mut b = Scwol::builder();
        let w2 = b.vertex("w2");
        let w0 = b.vertex("w0");
        let w1 = b.vertex("w1");
        let x = b.edge("x", w2, w0);
        let y = b.edge("y", w1, w0);
        let z = b.edge("z", w2, w1);
        b.compose(y, z, x);
        let t = b.build().unwrap();
        let (vmap, emap) = s.find_isomorphism(&t).unwrap();
        assert_eq!(vmap, vec![w0, w1, w2]);
        assert_eq!(emap, vec![y, z, x]);
        assert!(s.find_isomorphism(&single_edge()).is_none());
    }

    #[test]
    fn builder_errors() {
        let mut b = Scwol::builder();
        b.vertex("v");
        b.vertex("v");
        assert_eq!(b.build(), Err(ScwolError::DuplicateVertex("v".into())));
        let mut b = Scwol::builder();
        b.vertex("v");
        b.edge("a", 0, 3);
        assert_eq!(b.build(), Err(ScwolError::VertexOutOfRange(3)));
    }
}
