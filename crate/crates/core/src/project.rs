//! Project files: a scwol, local groups, homomorphisms, twists, an optional
//! group action, and run parameters, in TOML.
//!
//! ```toml
//! name = "example"
//!
//! [scwol]
//! vertices = ["u", "w", "m"]
//! edges = [{ name = "e1", init = "m", term = "u" }, { name = "e2", init = "m", term = "w" }]
//!
//! [groups]
//! A = { shorthand = "Z2", labels = ["1", "s"] }
//!
//! [local]
//! u = "A"
//! w = { shorthand = "Z3", labels = ["1", "t", "T"] }
//! m = "1"
//!
//! [params]
//! base = "m"
//! radius = 4
//! ```
//!
//! With an `[action]` table the complex is the one induced by the action on
//! the scwol, and `[local]`, `[homs]` and `[[twists]]` must be absent.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{ActionError, ScwolAction};
use crate::complex::{induced_complex, ComplexError, ComplexOfGroups, InducedComplex};
use crate::group::{FiniteGroup, GroupError, GroupHom};
use crate::report::ValidationReport;
use crate::scwol::{EdgeId, Scwol, ScwolError, VertexId};

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("project file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Scwol(#[from] ScwolError),
    #[error("group `{name}`: {source}")]
    Group { name: String, source: GroupError },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` has no local group")]
    MissingLocal(String),
    #[error("edge `{0}` needs a homomorphism")]
    MissingHom(String),
    #[error("unknown element `{label}` of {group}")]
    UnknownElement { label: String, group: String },
    #[error("{0}")]
    Conflict(String),
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub base: Option<String>,
    pub radius: Option<u32>,
    pub budget: Option<usize>,
    pub scale: Option<u32>,
    pub bound: Option<u32>,
    pub families: Option<usize>,
    pub nmax: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<u32>,
    /// Asymptotic dimension of the local groups and of the development, for bound reports.
    pub local_asdim: Option<usize>,
    pub development_asdim: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeDecl {
    pub name: String,
    pub init: String,
    pub term: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScwolDecl {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDecl>,
    /// `[a, b, ab]` declares `comp(a, b) = ab`.
    #[serde(default)]
    pub compositions: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GroupDecl {
    pub shorthand: Option<String>,
    pub table: Option<Vec<Vec<usize>>>,
    pub permutations: Option<Vec<Vec<usize>>>,
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(GroupDecl),
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum HomDecl {
    /// Images of the generators of the domain, as labels.
    Generators(Vec<String>),
    /// Image of every element, in domain order.
    Map { map: Vec<String> },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TwistDecl {
    pub a: String,
    pub b: String,
    pub g: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ActionGenerator {
    pub element: String,
    /// Images of the vertices, in declaration order.
    pub vertices: Vec<String>,
    /// Images of the edges; inferred from the vertex images when omitted.
    pub edges: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ActionDecl {
    pub group: GroupRef,
    pub generators: Vec<ActionGenerator>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    pub name: Option<String>,
    pub description: Option<String>,
    pub scwol: ScwolDecl,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupDecl>,
    #[serde(default)]
    pub local: BTreeMap<String, GroupRef>,
    #[serde(default)]
    pub homs: BTreeMap<String, HomDecl>,
    #[serde(default)]
    pub twists: Vec<TwistDecl>,
    pub action: Option<ActionDecl>,
    #[serde(default)]
    pub params: Params,
}

/// A loaded project. Construction checks references; the axioms are checked by [`Project::validate`].
#[derive(Clone, Debug)]
pub struct Project {
    pub name: String,
    pub scwol: Scwol,
    pub complex: Option<ComplexOfGroups>,
    pub action: Option<ScwolAction>,
    pub params: Params,
}

fn build_group(name: &str, decl: &GroupDecl) -> Result<FiniteGroup, ProjectError> {
    let wrap = |source| ProjectError::Group { name: name.to_string(), source };
    let given = [decl.shorthand.is_some(), decl.table.is_some(), decl.permutations.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(ProjectError::Conflict(format!("group `{name}` needs exactly one of shorthand, table, permutations")));
    }
    let g = if let Some(s) = &decl.shorthand {
        let mut g = FiniteGroup::parse(s).map_err(wrap)?;
        if g.order() == 1 && decl.labels.is_none() {
            g = g.with_labels(vec!["1".into()]).map_err(wrap)?;
        }
        g
    } else if let Some(t) = &decl.table {
        FiniteGroup::from_table(name, t, None).map_err(wrap)?
    } else {
        FiniteGroup::from_permutations(name, decl.permutations.as_ref().expect("checked")).map_err(wrap)?
    };
    match &decl.labels {
        Some(l) => g.with_labels(l.clone()).map_err(wrap),
        None => Ok(g),
    }
}

fn resolve_group(
    r: &GroupRef,
    named: &BTreeMap<String, Arc<FiniteGroup>>,
    cache: &mut HashMap<String, Arc<FiniteGroup>>,
) -> Result<Arc<FiniteGroup>, ProjectError> {
    match r {
        GroupRef::Named(n) => {
            if let Some(g) = named.get(n) {
                return Ok(g.clone());
            }
            if let Some(g) = cache.get(n) {
                return Ok(g.clone());
            }
            let decl = GroupDecl { shorthand: Some(n.clone()), table: None, permutations: None, labels: None };
            let g = Arc::new(build_group(n, &decl)?);
            cache.insert(n.clone(), g.clone());
            Ok(g)
        }
        GroupRef::Inline(d) => Ok(Arc::new(build_group("inline", d)?)),
    }
}

fn element(g: &FiniteGroup, label: &str) -> Result<usize, ProjectError> {
    g.element(label).ok_or_else(|| ProjectError::UnknownElement { label: label.to_string(), group: g.name().to_string() })
}

impl ProjectFile {
    pub fn parse(text: &str) -> Result<Self, ProjectError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("project files serialize")
    }

    pub fn build_scwol(&self) -> Result<Scwol, ProjectError> {
        let mut b = Scwol::builder();
        for v in &self.scwol.vertices {
            b.vertex(v.as_str());
        }
        let vid = |n: &str| self.scwol.vertices.iter().position(|v| v == n).ok_or_else(|| ProjectError::UnknownVertex(n.to_string()));
        for e in &self.scwol.edges {
            b.edge(e.name.as_str(), vid(&e.init)?, vid(&e.term)?);
        }
        let eid = |n: &str| self.scwol.edges.iter().position(|e| e.name == n).ok_or_else(|| ProjectError::UnknownEdge(n.to_string()));
        for [a, bb, ab] in &self.scwol.compositions {
            b.compose(eid(a)?, eid(bb)?, eid(ab)?);
        }
        Ok(b.build()?)
    }

    pub fn build(&self) -> Result<Project, ProjectError> {
        let scwol = self.build_scwol()?;
        let named: BTreeMap<String, Arc<FiniteGroup>> =
            self.groups.iter().map(|(n, d)| Ok((n.clone(), Arc::new(build_group(n, d)?)))).collect::<Result<_, ProjectError>>()?;
        let mut cache = HashMap::new();
        let name = self.name.clone().unwrap_or_else(|| "project".to_string());
        if let Some(act) = &self.action {
            if !self.local.is_empty() || !self.homs.is_empty() || !self.twists.is_empty() {
                return Err(ProjectError::Conflict("[action] projects derive local groups, homs and twists".into()));
            }
            let group = resolve_group(&act.group, &named, &mut cache)?;
            let gens = act.generators.iter().map(|g| action_generator(&scwol, &group, g)).collect::<Result<Vec<_>, _>>()?;
            let action = ScwolAction::from_generators(group, &scwol, &gens)?;
            return Ok(Project { name, scwol, complex: None, action: Some(action), params: self.params.clone() });
        }
        if self.local.is_empty() && self.homs.is_empty() && self.twists.is_empty() {
            return Ok(Project { name, scwol, complex: None, action: None, params: self.params.clone() });
        }
        for n in self.local.keys() {
            scwol.vertex_by_name(n).ok_or_else(|| ProjectError::UnknownVertex(n.clone()))?;
        }
        let local: Vec<Arc<FiniteGroup>> = scwol
            .vertices()
            .map(|v| {
                let n = scwol.vertex_name(v);
                let r = self.local.get(n).ok_or_else(|| ProjectError::MissingLocal(n.to_string()))?;
                resolve_group(r, &named, &mut cache)
            })
            .collect::<Result<_, _>>()?;
        for n in self.homs.keys() {
            scwol.edge_by_name(n).ok_or_else(|| ProjectError::UnknownEdge(n.clone()))?;
        }
        let homs: Vec<GroupHom> = scwol
            .edges()
            .map(|a| {
                let n = scwol.edge_name(a);
                let (dom, cod) = (local[scwol.init(a)].clone(), local[scwol.term(a)].clone());
                let wrap = |source| ProjectError::Group { name: format!("psi_{n}"), source };
                match self.homs.get(n) {
                    Some(HomDecl::Generators(images)) => {
                        let imgs = images.iter().map(|l| element(&cod, l)).collect::<Result<Vec<_>, _>>()?;
                        GroupHom::from_generator_images(dom, cod, &imgs).map_err(wrap)
                    }
                    Some(HomDecl::Map { map }) => {
                        let imgs = map.iter().map(|l| element(&cod, l)).collect::<Result<Vec<_>, _>>()?;
                        GroupHom::new(dom, cod, imgs).map_err(wrap)
                    }
                    None if dom.order() == 1 => GroupHom::new(dom, cod, vec![0]).map_err(wrap),
                    None if Arc::ptr_eq(&dom, &cod) => Ok(GroupHom::identity(dom)),
                    None => Err(ProjectError::MissingHom(n.to_string())),
                }
            })
            .collect::<Result<_, _>>()?;
        let mut twists = HashMap::new();
        for t in &self.twists {
            let a = scwol.edge_by_name(&t.a).ok_or_else(|| ProjectError::UnknownEdge(t.a.clone()))?;
            let b = scwol.edge_by_name(&t.b).ok_or_else(|| ProjectError::UnknownEdge(t.b.clone()))?;
            let g = element(&local[scwol.term(a)], &t.g)?;
            if twists.insert((a, b), g).is_some() {
                return Err(ProjectError::Conflict(format!("twist ({}, {}) declared twice", t.a, t.b)));
            }
        }
        for pair in scwol.composable_pairs() {
            twists.entry(pair).or_insert(0);
        }
        let complex = ComplexOfGroups::new(scwol.clone(), local, homs, twists)?;
        Ok(Project { name, scwol, complex: Some(complex), action: None, params: self.params.clone() })
    }

    /// A project file describing `c`; local groups are given as full tables.
    pub fn from_complex(name: &str, c: &ComplexOfGroups, params: Params) -> Self {
        let s = c.base();
        let scwol = ScwolDecl {
            vertices: s.vertices().map(|v| s.vertex_name(v).to_string()).collect(),
            edges: s
                .edges()
                .map(|a| EdgeDecl {
                    name: s.edge_name(a).to_string(),
                    init: s.vertex_name(s.init(a)).to_string(),
                    term: s.vertex_name(s.term(a)).to_string(),
                })
                .collect(),
            compositions: s
                .compositions()
                .into_iter()
                .map(|(a, b, ab)| [s.edge_name(a).to_string(), s.edge_name(b).to_string(), s.edge_name(ab).to_string()])
                .collect(),
        };
        let local = s
            .vertices()
            .map(|v| {
                let g = c.local(v);
                let table = g.elements().map(|x| g.elements().map(|y| g.mul(x, y)).collect()).collect();
                let decl = GroupDecl { shorthand: None, table: Some(table), permutations: None, labels: Some(g.labels().to_vec()) };
                (s.vertex_name(v).to_string(), GroupRef::Inline(decl))
            })
            .collect();
        let homs = s
            .edges()
            .map(|a| {
                let h = c.psi(a);
                let map = h.map().iter().map(|&y| h.cod().label(y).to_string()).collect();
                (s.edge_name(a).to_string(), HomDecl::Map { map })
            })
            .collect();
        let mut twist_list: Vec<((EdgeId, EdgeId), usize)> = c.twists().iter().map(|(&k, &g)| (k, g)).filter(|&(_, g)| g != 0).collect();
        twist_list.sort();
        let twists = twist_list
            .into_iter()
            .map(|((a, b), g)| TwistDecl {
                a: s.edge_name(a).to_string(),
                b: s.edge_name(b).to_string(),
                g: c.local(s.term(a)).label(g).to_string(),
            })
            .collect();
        ProjectFile {
            name: Some(name.to_string()),
            description: None,
            scwol,
            groups: BTreeMap::new(),
            local,
            homs,
            twists,
            action: None,
            params,
        }
    }
}

fn action_generator(s: &Scwol, group: &FiniteGroup, g: &ActionGenerator) -> Result<(usize, Vec<VertexId>, Vec<EdgeId>), ProjectError> {
    let x = element(group, &g.element)?;
    let vp: Vec<VertexId> =
        g.vertices.iter().map(|n| s.vertex_by_name(n).ok_or_else(|| ProjectError::UnknownVertex(n.clone()))).collect::<Result<_, _>>()?;
    if vp.len() != s.num_vertices() {
        return Err(ProjectError::Conflict(format!("generator `{}` must list {} vertex images", g.element, s.num_vertices())));
    }
    let ep = match &g.edges {
        Some(list) => {
            list.iter().map(|n| s.edge_by_name(n).ok_or_else(|| ProjectError::UnknownEdge(n.clone()))).collect::<Result<_, _>>()?
        }
        None => s
            .edges()
            .map(|a| {
                let (i, t) = (vp[s.init(a)], vp[s.term(a)]);
                let hits: Vec<EdgeId> = s.edges().filter(|&b| s.init(b) == i && s.term(b) == t).collect();
                match hits.as_slice() {
                    [b] => Ok(*b),
                    _ => Err(ProjectError::Conflict(format!(
                        "generator `{}`: cannot infer the image of edge `{}`; list edge images explicitly",
                        g.element,
                        s.edge_name(a)
                    ))),
                }
            })
            .collect::<Result<_, _>>()?,
    };
    Ok((x, vp, ep))
}

impl Project {
    pub fn load(text: &str) -> Result<Self, ProjectError> {
        ProjectFile::parse(text)?.build()
    }

    /// Checks the scwol, the action if any, and the complex if any.
    pub fn validate(&self) -> ValidationReport {
        if let Some(a) = &self.action {
            let mut r = self.scwol.validate();
            if r.is_valid() {
                r.extend(a.validate(&self.scwol));
            }
            return r;
        }
        match &self.complex {
            Some(c) => c.validate(),
            None => self.scwol.validate(),
        }
    }

    /// The complex of groups: declared, induced from the action, or trivial over the scwol.
    pub fn complex_of_groups(&self) -> Result<ComplexOfGroups, ProjectError> {
        Ok(match (&self.complex, &self.action) {
            (Some(c), _) => c.clone(),
            (None, Some(_)) => self.induced()?.expect("action present").complex,
            (None, None) => ComplexOfGroups::trivial(self.scwol.clone()),
        })
    }

    pub fn induced(&self) -> Result<Option<InducedComplex>, ProjectError> {
        match &self.action {
            Some(a) => Ok(Some(induced_complex(&self.scwol, a)?)),
            None => Ok(None),
        }
    }

    /// The base vertex of the complex named in the parameters, defaulting to vertex 0.
    pub fn base_vertex(&self, c: &ComplexOfGroups) -> Result<VertexId, ProjectError> {
        match &self.params.base {
            Some(n) => c.base().vertex_by_name(n).ok_or_else(|| ProjectError::UnknownVertex(n.clone())),
            None => Ok(0),
        }
    }
}
