//! Finite group actions on scwols and their quotients.

use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

use crate::group::FiniteGroup;
use crate::report::{ValidationReport, ViolationKind};
use crate::scwol::{EdgeId, Scwol, ScwolBuilder, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("expected one permutation per group element ({expected}), got {got}")]
    PermCount { expected: usize, got: usize },
    #[error("permutation for element {element} has length {got}, expected {expected}")]
    PermLength { element: usize, expected: usize, got: usize },
    #[error("generator images do not extend to an action (conflict at element {0})")]
    NotExtendable(usize),
    #[error("generator {0} is not a group element")]
    UnknownGenerator(usize),
    #[error("the action violates the scwol action axioms:\n{0}")]
    Invalid(ValidationReport),
}

/// An action of a finite group on a scwol, stored as one vertex and one edge
/// permutation per group element. `vertex_perm[g][v]` is `g.v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScwolAction {
    group: Arc<FiniteGroup>,
    vertex_perm: Vec<Vec<VertexId>>,
    edge_perm: Vec<Vec<EdgeId>>,
}

/// A quotient scwol together with the projections from the original scwol.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub scwol: Scwol,
    pub vertex_proj: Vec<VertexId>,
    pub edge_proj: Vec<EdgeId>,
}

impl ScwolAction {
    pub fn new(
        group: Arc<FiniteGroup>,
        scwol: &Scwol,
        vertex_perm: Vec<Vec<VertexId>>,
        edge_perm: Vec<Vec<EdgeId>>,
    ) -> Result<Self, ActionError> {
        let n = group.order();
        for perms in [&vertex_perm, &edge_perm] {
            if perms.len() != n {
                return Err(ActionError::PermCount { expected: n, got: perms.len() });
            }
        }
        for (g, (vp, ep)) in vertex_perm.iter().zip(&edge_perm).enumerate() {
            if vp.len() != scwol.num_vertices() {
                return Err(ActionError::PermLength { element: g, expected: scwol.num_vertices(), got: vp.len() });
            }
            if ep.len() != scwol.num_edges() {
                return Err(ActionError::PermLength { element: g, expected: scwol.num_edges(), got: ep.len() });
            }
        }
        Ok(ScwolAction { group, vertex_perm, edge_perm })
    }

    pub fn trivial(group: Arc<FiniteGroup>, scwol: &Scwol) -> Self {
        let n = group.order();
        let vp = vec![scwol.vertices().collect(); n];
        let ep = vec![scwol.edges().collect(); n];
        ScwolAction { group, vertex_perm: vp, edge_perm: ep }
    }

    /// Extends the given generator permutations to the whole group via
    /// `(x g).v = x.(g.v)`; inconsistent data is an error.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        scwol: &Scwol,
        generators: &[(usize, Vec<VertexId>, Vec<EdgeId>)],
    ) -> Result<Self, ActionError> {
        let n = group.order();
        let (nv, ne) = (scwol.num_vertices(), scwol.num_edges());
        for (g, vp, ep) in generators {
            if *g >= n {
                return Err(ActionError::UnknownGenerator(*g));
            }
            if vp.len() != nv || vp.iter().any(|&v| v >= nv) {
                return Err(ActionError::PermLength { element: *g, expected: nv, got: vp.len() });
            }
            if ep.len() != ne || ep.iter().any(|&e| e >= ne) {
                return Err(ActionError::PermLength { element: *g, expected: ne, got: ep.len() });
            }
        }
        let mut vperm: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut eperm: Vec<Option<Vec<usize>>> = vec![None; n];
        vperm[0] = Some((0..nv).collect());
        eperm[0] = Some((0..ne).collect());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (g, gv, ge) in generators {
                let y = group.mul(x, *g);
                let xv = vperm[x].as_ref().expect("visited");
                let xe = eperm[x].as_ref().expect("visited");
                let yv: Vec<usize> = gv.iter().map(|&v| xv[v]).collect();
                let ye: Vec<usize> = ge.iter().map(|&e| xe[e]).collect();
                match (&vperm[y], &eperm[y]) {
                    (None, _) => {
                        vperm[y] = Some(yv);
                        eperm[y] = Some(ye);
                        queue.push_back(y);
                    }
                    (Some(v), Some(e)) if *v == yv && *e == ye => {}
                    _ => return Err(ActionError::NotExtendable(y)),
                }
            }
        }
        let vertex_perm = vperm.into_iter().enumerate().map(|(g, p)| p.ok_or(ActionError::NotExtendable(g))).collect::<Result<_, _>>()?;
        let edge_perm = eperm.into_iter().enumerate().map(|(g, p)| p.ok_or(ActionError::NotExtendable(g))).collect::<Result<_, _>>()?;
        Ok(ScwolAction { group, vertex_perm, edge_perm })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn act_vertex(&self, g: usize, v: VertexId) -> VertexId {
        self.vertex_perm[g][v]
    }

    #[inline]
    pub fn act_edge(&self, g: usize, a: EdgeId) -> EdgeId {
        self.edge_perm[g][a]
    }

    /// Elements fixing vertex `v`, sorted.
    pub fn vertex_stabilizer(&self, v: VertexId) -> Vec<usize> {
        self.group.elements().filter(|&g| self.act_vertex(g, v) == v).collect()
    }

    /// Checks the homomorphism, equivariance, no-inversion and rigidity conditions.
    pub fn validate(&self, s: &Scwol) -> ValidationReport {
        let mut report = ValidationReport::new();
        let g = &self.group;
        let mut perms_ok = true;
        for x in g.elements() {
            for (perm, size, what) in [(&self.vertex_perm[x], s.num_vertices(), "vertices"), (&self.edge_perm[x], s.num_edges(), "edges")] {
                let mut seen = vec![false; size];
                let ok = perm.iter().all(|&i| i < size && !std::mem::replace(&mut seen[i], true));
                if !ok {
                    perms_ok = false;
                    report.push(ViolationKind::NotPermutation, format!("element {} does not permute the {what}", g.label(x)));
                }
            }
        }
        if !perms_ok {
            return report;
        }
        if s.vertices().any(|v| self.act_vertex(0, v) != v) || s.edges().any(|a| self.act_edge(0, a) != a) {
            report.push(ViolationKind::IdentityActsNontrivially, "identity moves a cell");
        }
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                let bad_v = s.vertices().any(|v| self.act_vertex(xy, v) != self.act_vertex(x, self.act_vertex(y, v)));
                let bad_e = s.edges().any(|a| self.act_edge(xy, a) != self.act_edge(x, self.act_edge(y, a)));
                if bad_v || bad_e {
                    report.push(
                        ViolationKind::ActionNotHomomorphism,
                        format!("({}*{}) acts differently from {} after {}", g.label(x), g.label(y), g.label(y), g.label(x)),
                    );
                }
            }
        }
        for x in g.elements() {
            for a in s.edges() {
                let xa = self.act_edge(x, a);
                if self.act_vertex(x, s.init(a)) != s.init(xa) || self.act_vertex(x, s.term(a)) != s.term(xa) {
                    report.push(
                        ViolationKind::NotEquivariant,
                        format!("{} does not commute with init/term on edge {}", g.label(x), s.edge_name(a)),
                    );
                }
                if self.act_vertex(x, s.init(a)) == s.term(a) {
                    report.push(
                        ViolationKind::Inversion,
                        format!("{} sends init({}) to term({})", g.label(x), s.edge_name(a), s.edge_name(a)),
                    );
                }
                if self.act_vertex(x, s.init(a)) == s.init(a) && xa != a {
                    report.push(
                        ViolationKind::Rigidity,
                        format!("{} fixes init({}) but moves {} to {}", g.label(x), s.edge_name(a), s.edge_name(a), s.edge_name(xa)),
                    );
                }
            }
            for (a, b, ab) in s.compositions() {
                if s.compose(self.act_edge(x, a), self.act_edge(x, b)) != Some(self.act_edge(x, ab)) {
                    report.push(
                        ViolationKind::NotEquivariant,
                        format!("{} does not preserve the composite of ({}, {})", g.label(x), s.edge_name(a), s.edge_name(b)),
                    );
                }
            }
        }
        report
    }

    /// Orbit representatives (the smallest index of each orbit) of the vertices.
    pub fn vertex_orbit_reps(&self, s: &Scwol) -> Vec<VertexId> {
        s.vertices().filter(|&v| self.group.elements().all(|g| self.act_vertex(g, v) >= v)).collect()
    }

    pub fn edge_orbit_reps(&self, s: &Scwol) -> Vec<EdgeId> {
        s.edges().filter(|&a| self.group.elements().all(|g| self.act_edge(g, a) >= a)).collect()
    }

    /// The quotient scwol. Orbits are numbered by their smallest member and
    /// named after it.
    pub fn quotient(&self, s: &Scwol) -> Result<Quotient, ActionError> {
        let report = self.validate(s);
        if !report.is_valid() {
            return Err(ActionError::Invalid(report));
        }
        let vreps = self.vertex_orbit_reps(s);
        let ereps = self.edge_orbit_reps(s);
        let rep_of_v = |v: VertexId| self.group.elements().map(|g| self.act_vertex(g, v)).min().expect("nonempty group");
        let rep_of_e = |a: EdgeId| self.group.elements().map(|g| self.act_edge(g, a)).min().expect("nonempty group");
        let vertex_proj: Vec<VertexId> = s.vertices().map(|v| vreps.binary_search(&rep_of_v(v)).expect("rep is listed")).collect();
        let edge_proj: Vec<EdgeId> = s.edges().map(|a| ereps.binary_search(&rep_of_e(a)).expect("rep is listed")).collect();
        let mut b = ScwolBuilder::new();
        for &v in &vreps {
            b.vertex(s.vertex_name(v));
        }
        for &a in &ereps {
            b.edge(s.edge_name(a), vertex_proj[s.init(a)], vertex_proj[s.term(a)]);
        }
        let mut comps = std::collections::BTreeMap::new();
        for (a, bb, ab) in s.compositions() {
            comps.entry((edge_proj[a], edge_proj[bb])).or_insert(edge_proj[ab]);
        }
        for ((a, bb), ab) in comps {
            b.compose(a, bb, ab);
        }
        let scwol = b.build().expect("orbit names are distinct");
        Ok(Quotient { scwol, vertex_proj, edge_proj })
    }
}

/// Free-function form of [`ScwolAction::validate`].
pub fn validate_action(s: &Scwol, act: &ScwolAction) -> ValidationReport {
    act.validate(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sinks A, C, B; sources m1, m2; edges m1->A, m1->C, m2->C, m2->B.
    fn subdivided_segment() -> Scwol {
        let mut b = Scwol::builder();
        let a = b.vertex("A");
        let c = b.vertex("C");
        let bb = b.vertex("B");
        let m1 = b.vertex("m1");
        let m2 = b.vertex("m2");
        b.edge("e1", m1, a);
        b.edge("e2", m1, c);
        b.edge("e3", m2, c);
        b.edge("e4", m2, bb);
        b.build().unwrap()
    }

    fn flip(s: &Scwol) -> ScwolAction {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        ScwolAction::from_generators(z2, s, &[(1, vec![2, 1, 0, 4, 3], vec![3, 2, 1, 0])]).unwrap()
    }

    #[test]
    fn trivial_action_is_valid_and_quotient_is_a_copy() {
        let s = subdivided_segment();
        let act = ScwolAction::trivial(Arc::new(FiniteGroup::trivial()), &s);
        assert!(act.validate(&s).is_valid());
        let q = act.quotient(&s).unwrap();
        assert!(q.scwol.find_isomorphism(&s).is_some());
    }

    #[test]
    fn flip_of_unsubdivided_segment_breaks_rigidity() {
        let mut b = Scwol::builder();
        let a = b.vertex("A");
        let bb = b.vertex("B");
        let m = b.vertex("m");
        b.edge("ea", m, a);
        b.edge("eb", m, bb);
        let s = b.build().unwrap();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let act = ScwolAction::from_generators(z2, &s, &[(1, vec![1, 0, 2], vec![1, 0])]).unwrap();
        let r = act.validate(&s);
        assert!(r.has(ViolationKind::Rigidity));
        assert!(!r.has(ViolationKind::Inversion));
        assert!(matches!(act.quotient(&s), Err(ActionError::Invalid(_))));
    }

    #[test]
    fn flip_of_subdivided_segment() {
        let s = subdivided_segment();
        let act = flip(&s);
        assert!(act.validate(&s).is_valid());
        let q = act.quotient(&s).unwrap();
        assert!(q.scwol.validate().is_valid());
        // vertices: A (orbit {A,B}), C, m1 (orbit {m1,m2})
        assert_eq!(q.scwol.num_vertices(), 3);
        assert_eq!(q.scwol.num_edges(), 2);
        assert_eq!(q.vertex_proj, vec![0, 1, 0, 2, 2]);
        assert_eq!(q.edge_proj, vec![0, 1, 1, 0]);
        assert_eq!(q.scwol.dimension(), s.dimension());
        assert_eq!(act.vertex_stabilizer(1), vec![0, 1]);
    }

    #[test]
    fn free_swap_of_two_edges() {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let w0 = b.vertex("w0");
        let w1 = b.vertex("w1");
        b.edge("a", v0, v1);
        b.edge("b", w0, w1);
        let s = b.build().unwrap();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let act = ScwolAction::from_generators(z2, &s, &[(1, vec![2, 3, 0, 1], vec![1, 0])]).unwrap();
        assert!(act.validate(&s).is_valid());
        let q = act.quotient(&s).unwrap();
        assert_eq!((q.scwol.num_vertices(), q.scwol.num_edges()), (2, 1));
        assert!(q.scwol.validate().is_valid());
    }

    #[test]
    fn inconsistent_generators_are_rejected() {
        let s = subdivided_segment();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        // an order-3 permutation cannot be the image of an involution
        let r = ScwolAction::from_generators(z2, &s, &[(1, vec![1, 2, 0, 3, 4], vec![0, 1, 2, 3])]);
        assert!(matches!(r, Err(ActionError::NotExtendable(_))));
    }
}
