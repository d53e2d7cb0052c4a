//! Complexes of groups over scwols.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{ActionError, Quotient, ScwolAction};
use crate::group::{FiniteGroup, GroupError, GroupHom};
use crate::report::{ValidationReport, ViolationKind};
use crate::scwol::{EdgeId, Scwol, VertexId};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("expected {expected} local groups, got {got}")]
    LocalCount { expected: usize, got: usize },
    #[error("expected {expected} edge homomorphisms, got {got}")]
    HomCount { expected: usize, got: usize },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the scwol is disconnected")]
    Disconnected,
    #[error("the induced complex fails validation:\n{0}")]
    Invalid(ValidationReport),
}

/// Local groups `G_v`, injective edge homomorphisms `psi_a: G_init(a) -> G_term(a)`
/// and twisting elements `g_(a,b)` in `G_term(a)` for composable pairs.
#[derive(Clone, Debug)]
pub struct ComplexOfGroups {
    base: Scwol,
    local: Vec<Arc<FiniteGroup>>,
    edge_hom: Vec<GroupHom>,
    twist: HashMap<(EdgeId, EdgeId), usize>,
}

impl ComplexOfGroups {
    /// Assembles a complex; only counts are checked here, the axioms by [`ComplexOfGroups::validate`].
    pub fn new(
        base: Scwol,
        local: Vec<Arc<FiniteGroup>>,
        edge_hom: Vec<GroupHom>,
        twist: HashMap<(EdgeId, EdgeId), usize>,
    ) -> Result<Self, ComplexError> {
        if local.len() != base.num_vertices() {
            return Err(ComplexError::LocalCount { expected: base.num_vertices(), got: local.len() });
        }
        if edge_hom.len() != base.num_edges() {
            return Err(ComplexError::HomCount { expected: base.num_edges(), got: edge_hom.len() });
        }
        Ok(ComplexOfGroups { base, local, edge_hom, twist })
    }

    /// A complex with trivial local groups over `base`.
    pub fn trivial(base: Scwol) -> Self {
        let g = Arc::new(FiniteGroup::trivial());
        let local = vec![g.clone(); base.num_vertices()];
        let edge_hom = base.edges().map(|_| GroupHom::identity(g.clone())).collect();
        let twist = base.composable_pairs().into_iter().map(|p| (p, 0)).collect();
        ComplexOfGroups { base, local, edge_hom, twist }
    }

    pub fn base(&self) -> &Scwol {
        &self.base
    }

    pub fn local(&self, v: VertexId) -> &Arc<FiniteGroup> {
        &self.local[v]
    }

    pub fn psi(&self, a: EdgeId) -> &GroupHom {
        &self.edge_hom[a]
    }

    /// `g_(a,b)`, defaulting to the identity for pairs without an entry.
    pub fn twist(&self, a: EdgeId, b: EdgeId) -> usize {
        self.twist.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn twists(&self) -> &HashMap<(EdgeId, EdgeId), usize> {
        &self.twist
    }

    pub fn dimension(&self) -> usize {
        self.base.dimension()
    }

    pub fn with_twist(&self, a: EdgeId, b: EdgeId, g: usize) -> Self {
        let mut c = self.clone();
        c.twist.insert((a, b), g);
        c
    }

    pub fn with_hom(&self, a: EdgeId, hom: GroupHom) -> Self {
        let mut c = self.clone();
        c.edge_hom[a] = hom;
        c
    }

    /// Checks the base scwol, each `psi_a`, and both cocycle identities over
    /// all composable pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let s = &self.base;
        let mut report = s.validate();
        let mut homs_ok = true;
        for a in s.edges() {
            let h = &self.edge_hom[a];
            if **h.dom() != *self.local[s.init(a)] || **h.cod() != *self.local[s.term(a)] {
                homs_ok = false;
                report.push(
                    ViolationKind::HomEndpoints,
                    format!("psi_{} does not map G_{} to G_{}", s.edge_name(a), s.vertex_name(s.init(a)), s.vertex_name(s.term(a))),
                );
                continue;
            }
            for mut v in h.check().violations {
                homs_ok = false;
                v.detail = format!("psi_{}: {}", s.edge_name(a), v.detail);
                report.violations.push(v);
            }
        }
        let pairs = s.composable_pairs();
        let mut twists_ok = true;
        for &(a, b) in &pairs {
            match self.twist.get(&(a, b)) {
                None => {
                    twists_ok = false;
                    report.push(ViolationKind::TwistMissing, format!("no g_({},{})", s.edge_name(a), s.edge_name(b)));
                }
                Some(&g) if g >= self.local[s.term(a)].order() => {
                    twists_ok = false;
                    report.push(
                        ViolationKind::TwistOutOfRange,
                        format!("g_({},{}) is not in G_{}", s.edge_name(a), s.edge_name(b), s.vertex_name(s.term(a))),
                    );
                }
                Some(_) => {}
            }
        }
        if !homs_ok || !twists_ok {
            return report;
        }
        for &(a, b) in &pairs {
            let Some(ab) = s.compose(a, b) else { continue };
            if s.init(ab) != s.init(b) || s.term(ab) != s.term(a) {
                continue;
            }
            let target = &self.local[s.term(a)];
            let g = self.twist(a, b);
            for x in self.local[s.init(b)].elements() {
                let lhs = target.conjugate(g, self.edge_hom[ab].apply(x));
                let rhs = self.edge_hom[a].apply(self.edge_hom[b].apply(x));
                if lhs != rhs {
                    report.push(
                        ViolationKind::CocycleConjugation,
                        format!(
                            "Ad(g_({a},{b})) psi_{ab} and psi_{a} psi_{b} differ at {x}: {lhs_l} vs {rhs_l}",
                            a = s.edge_name(a),
                            b = s.edge_name(b),
                            ab = s.edge_name(ab),
                            x = self.local[s.init(b)].label(x),
                            lhs_l = target.label(lhs),
                            rhs_l = target.label(rhs),
                        ),
                    );
                    break;
                }
            }
        }
        for t in s.composable_sequences(3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let (Some(ab), Some(bc)) = (s.compose(a, b), s.compose(b, c)) else { continue };
            if !self.twist.contains_key(&(a, bc)) || !self.twist.contains_key(&(ab, c)) {
                continue;
            }
            let target = &self.local[s.term(a)];
            let lhs = target.mul(self.edge_hom[a].apply(self.twist(b, c)), self.twist(a, bc));
            let rhs = target.mul(self.twist(a, b), self.twist(ab, c));
            if lhs != rhs {
                report.push(
                    ViolationKind::CocycleAssociativity,
                    format!(
                        "psi_{a}(g_({b},{c})) g_({a},{bc}) = {l} but g_({a},{b}) g_({ab},{c}) = {r}",
                        a = s.edge_name(a),
                        b = s.edge_name(b),
                        c = s.edge_name(c),
                        ab = s.edge_name(ab),
                        bc = s.edge_name(bc),
                        l = target.label(lhs),
                        r = target.label(rhs),
                    ),
                );
            }
        }
        report
    }
}

/// Free-function form of [`ComplexOfGroups::validate`].
pub fn validate_complex(c: &ComplexOfGroups) -> ValidationReport {
    c.validate()
}

/// The choices made when building the complex of groups of an action.
#[derive(Clone, Debug)]
pub struct Section {
    /// Chosen lift of each quotient vertex: the smallest vertex in its orbit.
    pub vertex_lift: Vec<VertexId>,
    /// Lift of each quotient edge starting at the lift of its initial vertex.
    pub edge_lift: Vec<EdgeId>,
    /// `h_a` with `h_a . lift(term(a)) = term(lift(a))`, smallest such element.
    pub alignment: Vec<usize>,
    /// Embedding of each local group (a vertex stabilizer) into the acting group.
    pub embedding: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct InducedComplex {
    pub complex: ComplexOfGroups,
    pub quotient: Quotient,
    pub section: Section,
}

/// Builds the complex of groups of a group action over the quotient scwol.
///
/// Local groups are stabilizers of the chosen lifts, `psi_a(x) = h_a^-1 x h_a`
/// and `g_(a,b) = h_a^-1 h_b^-1 h_ab`. The result is validated before returning.
pub fn induced_complex(s: &Scwol, act: &ScwolAction) -> Result<InducedComplex, ComplexError> {
    if !s.is_connected() {
        return Err(ComplexError::Disconnected);
    }
    let quotient = act.quotient(s)?;
    let y = &quotient.scwol;
    let g = act.group();
    let vertex_lift: Vec<VertexId> =
        y.vertices().map(|v| s.vertices().find(|&x| quotient.vertex_proj[x] == v).expect("orbits are nonempty")).collect();
    let mut local = Vec::with_capacity(y.num_vertices());
    let mut embedding = Vec::with_capacity(y.num_vertices());
    for &lift in &vertex_lift {
        let (sub, emb) = g.subgroup(&act.vertex_stabilizer(lift))?;
        local.push(Arc::new(sub));
        embedding.push(emb);
    }
    let index_in = |v: VertexId, x: usize| embedding[v].binary_search(&x).ok();
    let mut edge_lift = Vec::with_capacity(y.num_edges());
    let mut alignment = Vec::with_capacity(y.num_edges());
    for a in y.edges() {
        let start = vertex_lift[y.init(a)];
        let lifted = s
            .edges()
            .find(|&e| quotient.edge_proj[e] == a && s.init(e) == start)
            .expect("every quotient edge lifts at every lift of its initial vertex");
        let target = vertex_lift[y.term(a)];
        let h = g
            .elements()
            .find(|&h| act.act_vertex(h, target) == s.term(lifted))
            .expect("term of the lift lies in the orbit of the chosen lift");
        edge_lift.push(lifted);
        alignment.push(h);
    }
    let mut homs = Vec::with_capacity(y.num_edges());
    for a in y.edges() {
        let (src, dst) = (y.init(a), y.term(a));
        let h = alignment[a];
        let map = embedding[src]
            .iter()
            .map(|&x| {
                let conj = g.mul(g.mul(g.inv(h), x), h);
                index_in(dst, conj).ok_or(GroupError::NotSubgroup)
            })
            .collect::<Result<Vec<_>, _>>()?;
        homs.push(GroupHom::new(local[src].clone(), local[dst].clone(), map)?);
    }
    let mut twist = HashMap::new();
    for (a, b) in y.composable_pairs() {
        let Some(ab) = y.compose(a, b) else { continue };
        let raw = g.mul(g.mul(g.inv(alignment[a]), g.inv(alignment[b])), alignment[ab]);
        let elt = index_in(y.term(a), raw).ok_or(GroupError::NotSubgroup)?;
        twist.insert((a, b), elt);
    }
    let complex = ComplexOfGroups::new(y.clone(), local, homs, twist)?;
    let report = complex.validate();
    if !report.is_valid() {
        return Err(ComplexError::Invalid(report));
    }
    Ok(InducedComplex { complex, quotient, section: Section { vertex_lift, edge_lift, alignment, embedding } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    /// v2 --b--> v1 --a--> v0 with composite ab, locals Z2 < Z4 < Z8.
    fn tower(twist: usize) -> ComplexOfGroups {
        let mut b = Scwol::builder();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let v2 = b.vertex("v2");
        let a = b.edge("a", v1, v0);
        let bb = b.edge("b", v2, v1);
        let ab = b.edge("ab", v2, v0);
        b.compose(a, bb, ab);
        let s = b.build().unwrap();
        let (z8, z4, z2) = (z(8), z(4), z(2));
        let homs = vec![
            GroupHom::from_generator_images(z4.clone(), z8.clone(), &[2]).unwrap(),
            GroupHom::from_generator_images(z2.clone(), z4.clone(), &[2]).unwrap(),
            GroupHom::from_generator_images(z2.clone(), z8.clone(), &[4]).unwrap(),
        ];
        ComplexOfGroups::new(s, vec![z8, z4, z2], homs, HashMap::from([((a, bb), twist)])).unwrap()
    }

    #[test]
    fn graph_of_groups_needs_no_twists() {
        let s = Scwol::from_graph(&["u", "w"], &[(0, 1)]).unwrap();
        let (z2, z3, one) = (z(2), z(3), z(1));
        let homs = vec![GroupHom::new(one.clone(), z2.clone(), vec![0]).unwrap(), GroupHom::new(one.clone(), z3.clone(), vec![0]).unwrap()];
        let c = ComplexOfGroups::new(s, vec![z2, z3, one], homs, HashMap::new()).unwrap();
        assert!(c.validate().is_valid());
        assert!(c.base().composable_pairs().is_empty());
    }

    #[test]
    fn inclusion_tower_is_valid() {
        assert!(tower(0).validate().is_valid());
    }

    #[test]
    fn central_twist_in_abelian_tower_is_still_valid() {
        // Z8 is abelian, so Ad(4) is the identity and the conjugation identity
        // holds; there are no composable triples.
        assert!(tower(4).validate().is_valid());
    }

    #[test]
    fn changing_psi_ab_breaks_the_conjugation_identity() {
        let c = tower(0);
        let (z2, z8) = (c.local(2).clone(), c.local(0).clone());
        // Z2 -> Z8 has only one injective option, so swap in a non-injective map
        let bad = GroupHom::new(z2, z8, vec![0, 0]).unwrap();
        let r = c.with_hom(2, bad).validate();
        assert!(r.has(ViolationKind::NotInjective));
    }

    #[test]
    fn twist_out_of_range_is_reported() {
        let r = tower(9).validate();
        assert!(r.has(ViolationKind::TwistOutOfRange));
    }

    #[test]
    fn trivial_action_induces_trivial_complex() {
        let s = Scwol::from_graph(&["x", "y", "z"], &[(0, 1), (1, 2)]).unwrap();
        let act = ScwolAction::trivial(z(1), &s);
        let ind = induced_complex(&s, &act).unwrap();
        assert!(ind.complex.base().find_isomorphism(&s).is_some());
        assert!(ind.complex.base().vertices().all(|v| ind.complex.local(v).order() == 1));
    }

    #[test]
    fn flip_of_subdivided_segment_induces_z2_at_the_middle() {
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
        let s = b.build().unwrap();
        let act = ScwolAction::from_generators(z(2), &s, &[(1, vec![2, 1, 0, 4, 3], vec![3, 2, 1, 0])]).unwrap();
        let ind = induced_complex(&s, &act).unwrap();
        let y = ind.complex.base();
        let orders: Vec<(String, usize)> = y.vertices().map(|v| (y.vertex_name(v).to_string(), ind.complex.local(v).order())).collect();
        assert_eq!(orders, vec![("A".into(), 1), ("C".into(), 2), ("m1".into(), 1)]);
        assert!(ind.complex.twists().is_empty());
    }
}
