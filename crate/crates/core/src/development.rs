//! Ball-local enumeration of the development D(Y) and of the fundamental group.
//!
//! Development vertices are pairs `(c G_v, v)` with `c` a path word from the
//! base vertex, stored by canonical coset representative. The edge `(c G_i(a), a)`
//! runs from `(c G_i(a), i(a))` to `(c a- G_t(a), t(a))`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scwol::{EdgeId, Scwol, ScwolError, VertexId};
use crate::words::{display_letters, Letter, OrientedEdge, PathWord, Pi1Presentation, Undecided, WordError};

#[derive(Debug, Error)]
pub enum DevelopError {
    #[error("could not canonicalize `{word}` within the budget of {budget} words")]
    Undecided { word: String, budget: usize },
    #[error("development is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Scwol(#[from] ScwolError),
}

fn undecided(p: &Pi1Presentation, w: &PathWord, e: Undecided) -> DevelopError {
    DevelopError::Undecided { word: w.display(p.complex()).to_string(), budget: e.budget }
}

fn concat(p: &Pi1Presentation, a: &PathWord, b: &[Letter]) -> PathWord {
    let mut letters = a.letters().to_vec();
    letters.extend_from_slice(b);
    let w = PathWord::from_raw(a.start(), letters);
    debug_assert!(PathWord::new(p.complex(), w.start(), w.letters().to_vec()).is_ok());
    w
}

/// A development vertex `(c G_v, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DevVertex {
    pub coset: PathWord,
    pub vertex: VertexId,
}

/// The development edge `(c G_i(a), a)`, by indices into the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DevEdge {
    pub init: usize,
    pub term: usize,
    pub edge: EdgeId,
}

/// The vertices of D(Y) within skeleton distance `radius` of `(G_base, base)`.
#[derive(Clone, Debug)]
pub struct DevBall {
    pub radius: u32,
    pub vertices: Vec<DevVertex>,
    /// Distance to the center, which is vertex 0.
    pub distance: Vec<u32>,
    /// Every edge of D(Y) with both endpoints in the ball.
    pub edges: Vec<DevEdge>,
    index: HashMap<Vec<Letter>, usize>,
}

impl DevBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, coset: &PathWord) -> Option<usize> {
        self.index.get(coset.letters()).copied()
    }

    pub fn frontier(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.distance[i] == self.radius).collect()
    }

    /// Vertex counts by distance from the center.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for &d in &self.distance {
            out[d as usize] += 1;
        }
        out
    }

    /// Label `[word]v`.
    pub fn label(&self, p: &Pi1Presentation, i: usize) -> String {
        let v = &self.vertices[i];
        format!("[{}]{}", v.coset.display(p.complex()), p.scwol().vertex_name(v.vertex))
    }

    /// Graph metric of the 1-skeleton induced on the ball.
    pub fn metric(&self, p: &Pi1Presentation) -> Result<FiniteMetricSpace, DevelopError> {
        let labels = (0..self.len()).map(|i| self.label(p, i)).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.init, e.term)).collect();
        Ok(FiniteMetricSpace::from_graph(labels, &edges)?)
    }

    /// The enumerated part of D(Y) as a scwol: composites are recorded when all three edges are present.
    pub fn to_scwol(&self, p: &Pi1Presentation) -> Result<Scwol, DevelopError> {
        let y = p.scwol();
        let mut b = Scwol::builder();
        for i in 0..self.len() {
            b.vertex(self.label(p, i));
        }
        let mut by_init: HashMap<(usize, EdgeId), usize> = HashMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            b.edge(format!("({},{})", self.label(p, e.init), y.edge_name(e.edge)), e.init, e.term);
            by_init.insert((e.init, e.edge), k);
        }
        for (kb, eb) in self.edges.iter().enumerate() {
            for (ka, ea) in self.edges.iter().enumerate() {
                if ea.init != eb.term {
                    continue;
                }
                if let Some(ab) = y.compose(ea.edge, eb.edge) {
                    if let Some(&kab) = by_init.get(&(eb.init, ab)) {
                        b.compose(ka, kb, kab);
                    }
                }
            }
        }
        Ok(b.build()?)
    }

    pub fn to_dot(&self, p: &Pi1Presentation) -> String {
        let y = p.scwol();
        let mut out = String::from("digraph development {\n");
        for i in 0..self.len() {
            out.push_str(&format!("  n{} [label=\"{}\" distance={}];\n", i, crate::scwol::escape(&self.label(p, i)), self.distance[i]));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.init, e.term, crate::scwol::escape(y.edge_name(e.edge))));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, p: &Pi1Presentation) -> serde_json::Value {
        #[derive(Serialize)]
        struct V {
            word: String,
            vertex: String,
            distance: u32,
        }
        #[derive(Serialize)]
        struct E {
            init: usize,
            term: usize,
            edge: String,
        }
        let c = p.complex();
        let y = p.scwol();
        let vertices: Vec<V> = self
            .vertices
            .iter()
            .zip(&self.distance)
            .map(|(v, &d)| V { word: v.coset.display(c).to_string(), vertex: y.vertex_name(v.vertex).to_string(), distance: d })
            .collect();
        let edges: Vec<E> = self.edges.iter().map(|e| E { init: e.init, term: e.term, edge: y.edge_name(e.edge).to_string() }).collect();
        serde_json::json!({ "radius": self.radius, "vertices": vertices, "edges": edges })
    }
}

/// Canonical coset of `c` in the development.
pub fn dev_vertex(p: &Pi1Presentation, c: &PathWord, budget: usize) -> Result<DevVertex, DevelopError> {
    let coset = p.canonical_coset(c, budget).map_err(|e| undecided(p, c, e))?;
    Ok(DevVertex { vertex: c.end(p.scwol()), coset })
}

/// Term vertex of the edge `(c G_i(a), a)`.
pub fn edge_term(p: &Pi1Presentation, c: &PathWord, a: EdgeId, budget: usize) -> Result<DevVertex, DevelopError> {
    dev_vertex(p, &concat(p, c, &[Letter::Edge(OrientedEdge::minus(a))]), budget)
}

/// Out-neighbours with their edges, and in-neighbours.
type Neighbours = (Vec<(EdgeId, DevVertex)>, Vec<DevVertex>);

/// Neighbours of `(c G_v, v)` in the 1-skeleton: out-edge terms first, then in-edge inits.
fn neighbours(p: &Pi1Presentation, v: &DevVertex, budget: usize) -> Result<Neighbours, DevelopError> {
    let y = p.scwol();
    let mut outs = Vec::new();
    let mut ins = Vec::new();
    for a in y.edges() {
        if y.init(a) == v.vertex {
            outs.push((a, edge_term(p, &v.coset, a, budget)?));
        }
        if y.term(a) == v.vertex {
            let plus = OrientedEdge::plus(a);
            for x in p.transversal(plus) {
                let mut tail = Vec::new();
                if x != 0 {
                    tail.push(Letter::Elem { vertex: v.vertex, elem: x });
                }
                tail.push(Letter::Edge(plus));
                ins.push(dev_vertex(p, &concat(p, &v.coset, &tail), budget)?);
            }
        }
    }
    Ok((outs, ins))
}

/// Enumerates the ball of radius `radius` about `(G_base, base)` breadth first,
/// expanding each layer in parallel.
pub fn develop_ball(p: &Pi1Presentation, radius: u32, budget: usize) -> Result<DevBall, DevelopError> {
    let base = p.base();
    let center = DevVertex { coset: PathWord::empty(base), vertex: base };
    let mut ball =
        DevBall { radius, vertices: vec![center.clone()], distance: vec![0], edges: Vec::new(), index: HashMap::from([(Vec::new(), 0)]) };
    let mut out_terms: Vec<Option<Vec<(EdgeId, DevVertex)>>> = vec![None];
    let mut layer = vec![0usize];
    for d in 1..=radius {
        let expanded: Vec<_> = layer.par_iter().map(|&i| neighbours(p, &ball.vertices[i], budget)).collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        for (&i, (outs, ins)) in layer.iter().zip(expanded) {
            for w in outs.iter().map(|(_, w)| w).chain(ins.iter()) {
                if !ball.index.contains_key(w.coset.letters()) {
                    if w.coset.end(p.scwol()) != w.vertex {
                        return Err(DevelopError::Inconsistent(format!(
                            "coset word does not end at its vertex: {}",
                            w.coset.display(p.complex())
                        )));
                    }
                    ball.index.insert(w.coset.letters().to_vec(), ball.vertices.len());
                    ball.vertices.push(w.clone());
                    ball.distance.push(d);
                    out_terms.push(None);
                    next.push(ball.vertices.len() - 1);
                }
            }
            out_terms[i] = Some(outs);
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let missing: Vec<usize> = (0..ball.len()).filter(|&i| out_terms[i].is_none()).collect();
    let computed: Vec<(usize, Vec<(EdgeId, DevVertex)>)> = missing
        .par_iter()
        .map(|&i| {
            let v = &ball.vertices[i];
            let y = p.scwol();
            y.edges()
                .filter(|&a| y.init(a) == v.vertex)
                .map(|a| Ok((a, edge_term(p, &v.coset, a, budget)?)))
                .collect::<Result<Vec<_>, DevelopError>>()
                .map(|outs| (i, outs))
        })
        .collect::<Result<_, _>>()?;
    for (i, outs) in computed {
        out_terms[i] = Some(outs);
    }
    for (i, outs) in out_terms.into_iter().enumerate() {
        for (a, w) in outs.expect("all computed") {
            if let Some(&j) = ball.index.get(w.coset.letters()) {
                ball.edges.push(DevEdge { init: i, term: j, edge: a });
            }
        }
    }
    ball.edges.sort();
    Ok(ball)
}

/// `g . (c G_v, v) = (g c G_v, v)` for a loop `g` at the base vertex.
pub fn act(p: &Pi1Presentation, g: &PathWord, v: &DevVertex, budget: usize) -> Result<DevVertex, DevelopError> {
    if g.start() != p.base() || g.end(p.scwol()) != p.base() {
        return Err(WordError::NotALoop {
            expected: p.scwol().vertex_name(p.base()).to_string(),
            found: p.scwol().vertex_name(g.end(p.scwol())).to_string(),
        }
        .into());
    }
    dev_vertex(p, &concat(p, g, v.coset.letters()), budget)
}

fn canonical(p: &Pi1Presentation, w: &PathWord, budget: usize) -> Result<PathWord, DevelopError> {
    p.canonical_element(w, budget).map_err(|e| undecided(p, w, e))
}

/// Elements `g` of the fundamental group with `d(g x0, x0) <= R`, read off a developed ball.
pub fn r_stabilizer(p: &Pi1Presentation, ball: &DevBall, radius: u32, budget: usize) -> Result<Vec<PathWord>, DevelopError> {
    let base = p.base();
    let g0 = p.complex().local(base);
    let words: Vec<PathWord> = ball
        .vertices
        .iter()
        .zip(&ball.distance)
        .filter(|(v, &d)| v.vertex == base && d <= radius)
        .flat_map(|(v, _)| {
            g0.elements().map(move |h| {
                let tail: Vec<Letter> = if h == 0 { vec![] } else { vec![Letter::Elem { vertex: base, elem: h }] };
                concat(p, &v.coset, &tail)
            })
        })
        .collect();
    let mut out: Vec<PathWord> = words.par_iter().map(|w| canonical(p, w, budget)).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Reduced words issuing from the base vertex, by reduced path length `0..=max_len`.
///
/// Enumerates every edge sequence of each length with transversal elements
/// between edges and an arbitrary final element, reduces each, and keeps the
/// words whose length does not drop. Words whose reduction is not certified are
/// returned separately.
pub fn reduced_layers(p: &Pi1Presentation, max_len: usize, budget: usize) -> (Vec<Vec<PathWord>>, Vec<PathWord>) {
    let base = p.base();
    let c = p.complex();
    let y = p.scwol();
    let mut layers = Vec::new();
    let mut undecided = Vec::new();
    // partial words: letters so far, current vertex
    let mut partial: Vec<(Vec<Letter>, VertexId)> = vec![(Vec::new(), base)];
    for k in 0..=max_len {
        let candidates: Vec<PathWord> = partial
            .iter()
            .flat_map(|(letters, v)| {
                c.local(*v).elements().map(move |g| {
                    let mut w = letters.clone();
                    if g != 0 {
                        w.push(Letter::Elem { vertex: *v, elem: g });
                    }
                    PathWord::from_raw(base, w)
                })
            })
            .collect();
        let results: Vec<_> = candidates.par_iter().map(|w| (w, p.reduce(w, budget))).collect();
        let mut set = BTreeSet::new();
        for (w, r) in results {
            if !r.certified() {
                undecided.push(w.clone());
            } else if r.word.path_length() == k {
                set.insert(r.word);
            }
        }
        layers.push(set.into_iter().collect());
        if k == max_len {
            break;
        }
        let mut next = Vec::new();
        for (letters, v) in &partial {
            for eps in p.edges_from(*v) {
                for x in p.transversal(eps) {
                    let mut w = letters.clone();
                    if x != 0 {
                        w.push(Letter::Elem { vertex: *v, elem: x });
                    }
                    w.push(Letter::Edge(eps));
                    next.push((w, eps.term(y)));
                }
            }
        }
        partial = next;
    }
    (layers, undecided)
}

/// Outcome of comparing the R-stabilizer with the set of short reduced loops.
#[derive(Clone, Debug, Serialize)]
pub struct Prop1Report {
    pub radius: u32,
    pub stabilizer_size: usize,
    pub short_loops: usize,
    pub only_in_stabilizer: Vec<String>,
    pub only_in_short_loops: Vec<String>,
    pub undecided: Vec<String>,
}

impl Prop1Report {
    pub fn holds(&self) -> bool {
        self.only_in_stabilizer.is_empty() && self.only_in_short_loops.is_empty()
    }
}

/// Compares `W_R(x0)` computed from the development with the loops of reduced length `<= R`.
pub fn check_prop1(p: &Pi1Presentation, radius: u32, budget: usize) -> Result<Prop1Report, DevelopError> {
    let ball = develop_ball(p, radius, budget)?;
    let stab: HashSet<PathWord> = r_stabilizer(p, &ball, radius, budget)?.into_iter().collect();
    let (layers, undecided) = reduced_layers(p, radius as usize, budget);
    let y = p.scwol();
    let short: HashSet<PathWord> = layers.into_iter().flatten().filter(|w| w.end(y) == p.base()).collect();
    let show = |w: &PathWord| w.display(p.complex()).to_string();
    let mut only_stab: Vec<String> = stab.difference(&short).map(show).collect();
    let mut only_short: Vec<String> = short.difference(&stab).map(show).collect();
    only_stab.sort();
    only_short.sort();
    Ok(Prop1Report {
        radius,
        stabilizer_size: stab.len(),
        short_loops: short.len(),
        only_in_stabilizer: only_stab,
        only_in_short_loops: only_short,
        undecided: undecided.iter().map(show).collect(),
    })
}

/// One layer of the inclusion `K_(j+1) ⊆ ∪_a K_j a G_t(a)`.
#[derive(Clone, Debug, Serialize)]
pub struct LayerCheck {
    pub j: usize,
    pub layer_size: usize,
    pub next_layer_size: usize,
    pub missing: usize,
}

/// Checks the layer decomposition of reduced words for `j < max_j`.
pub fn check_layer_decomposition(p: &Pi1Presentation, max_j: usize, budget: usize) -> Result<Vec<LayerCheck>, DevelopError> {
    let (layers, undecided) = reduced_layers(p, max_j, budget);
    if let Some(w) = undecided.first() {
        return Err(DevelopError::Undecided { word: w.display(p.complex()).to_string(), budget });
    }
    let y = p.scwol();
    let c = p.complex();
    let mut out = Vec::new();
    for j in 0..max_j {
        let products: Vec<PathWord> = layers[j]
            .iter()
            .flat_map(|x| {
                p.edges_from(x.end(y)).into_iter().flat_map(move |eps| {
                    let t = eps.term(y);
                    c.local(t).elements().map(move |g| {
                        let mut tail = vec![Letter::Edge(eps)];
                        if g != 0 {
                            tail.push(Letter::Elem { vertex: t, elem: g });
                        }
                        concat(p, x, &tail)
                    })
                })
            })
            .collect();
        let covered: HashSet<PathWord> = products.par_iter().map(|w| canonical(p, w, budget)).collect::<Result<_, _>>()?;
        let missing = layers[j + 1].iter().filter(|w| !covered.contains(*w)).count();
        out.push(LayerCheck { j, layer_size: layers[j].len(), next_layer_size: layers[j + 1].len(), missing });
    }
    Ok(out)
}

/// A ball in the fundamental group under the word metric.
#[derive(Clone, Debug)]
pub struct GroupBall {
    pub radius: u32,
    /// Canonical loops at the base vertex; the identity is element 0.
    pub elements: Vec<PathWord>,
    pub norms: Vec<u32>,
    pub space: FiniteMetricSpace,
}

impl GroupBall {
    /// Indices of the given elements.
    pub fn indices_of(&self, words: &[PathWord]) -> Vec<usize> {
        let index: HashMap<&PathWord, usize> = self.elements.iter().enumerate().map(|(i, w)| (w, i)).collect();
        words.iter().filter_map(|w| index.get(w).copied()).collect()
    }
}

/// Generators of the fundamental group: nontrivial local elements and
/// edge symbols of edges outside the maximal tree, each as a loop at the base.
pub fn generators(p: &Pi1Presentation) -> Vec<PathWord> {
    let c = p.complex();
    let y = p.scwol();
    let mut gens = Vec::new();
    for v in y.vertices() {
        for g in c.local(v).elements().skip(1) {
            gens.push(p.vertex_element_loop(v, g));
        }
    }
    for a in y.edges().filter(|&a| !p.in_tree(a)) {
        gens.push(p.edge_loop(OrientedEdge::plus(a)));
        gens.push(p.edge_loop(OrientedEdge::minus(a)));
    }
    gens
}

fn cayley_ball(p: &Pi1Presentation, gens: &[PathWord], radius: u32, budget: usize) -> Result<(Vec<PathWord>, Vec<u32>), DevelopError> {
    let y = p.scwol();
    let identity = PathWord::empty(p.base());
    let mut elements = vec![identity.clone()];
    let mut norms = vec![0];
    let mut seen: HashSet<PathWord> = HashSet::from([identity]);
    let mut layer = vec![0usize];
    for d in 1..=radius {
        let products: Vec<(usize, usize)> = layer.iter().flat_map(|&i| (0..gens.len()).map(move |k| (i, k))).collect();
        let next_words: Vec<PathWord> = products
            .par_iter()
            .map(|&(i, k)| {
                let w = elements[i].concat(&gens[k], y).expect("loops compose");
                canonical(p, &w, budget)
            })
            .collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        for w in next_words {
            if seen.insert(w.clone()) {
                elements.push(w);
                norms.push(d);
                next.push(elements.len() - 1);
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok((elements, norms))
}

/// The ball of radius `radius` about the identity in the word metric, with
/// distances `d(x, y) = |x^-1 y|`.
pub fn group_ball(p: &Pi1Presentation, radius: u32, budget: usize) -> Result<GroupBall, DevelopError> {
    let gens = generators(p);
    let (big, big_norms) = cayley_ball(p, &gens, 2 * radius, budget)?;
    let norm_of: HashMap<&PathWord, u32> = big.iter().zip(&big_norms).map(|(w, &n)| (w, n)).collect();
    let count = big_norms.iter().filter(|&&n| n <= radius).count();
    let elements: Vec<PathWord> = big[..count].to_vec();
    let norms = big_norms[..count].to_vec();
    let c = p.complex();
    let y = p.scwol();
    let inverses: Vec<PathWord> = elements.iter().map(|w| w.inverse(c)).collect();
    let rows: Vec<Vec<u32>> = (0..count)
        .into_par_iter()
        .map(|i| {
            (0..count)
                .map(|j| {
                    if i == j {
                        return Ok(0);
                    }
                    let w = canonical(p, &inverses[i].concat(&elements[j], y).expect("loops compose"), budget)?;
                    norm_of.get(&w).copied().ok_or_else(|| {
                        DevelopError::Inconsistent(format!("x^-1 y = {} is missing from the ball of radius {}", w.display(c), 2 * radius))
                    })
                })
                .collect::<Result<Vec<u32>, DevelopError>>()
        })
        .collect::<Result<_, _>>()?;
    let labels = elements.iter().map(|w| display_letters(&p.collapse(w), c).to_string()).collect();
    let space = FiniteMetricSpace::from_matrix(labels, rows)?;
    Ok(GroupBall { radius, elements, norms, space })
}
