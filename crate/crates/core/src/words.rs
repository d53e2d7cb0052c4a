//! Words in the group FG(Y) of a complex of groups, and their reduction.
//!
//! A [`PathWord`] is a G(Y)-path `g0 e1 g1 ... ek gk`: oriented edges with
//! `t(e_j) = i(e_{j+1})` interleaved with local group elements. Identity
//! elements are left implicit. The orientation convention is
//! `i(a+) = t(a)`, `t(a+) = i(a)` and `i(a-) = i(a)`, `t(a-) = t(a)`.
//!
//! Rewriting uses the relations of FG(Y):
//!
//! * merge: adjacent local elements multiply;
//! * pinch: `a+ g a- -> psi_a(g)` and `a- psi_a(g) a+ -> g`;
//! * compose: `a+ b+ -> g_(a,b) (ab)+` together with the other five ways of
//!   replacing two sides of the triangle `(a, b, ab)` by the third;
//! * tree collapse: `a+ -> 1` for edges of the chosen maximal tree, which maps
//!   loops at the base vertex into the tree presentation of the fundamental group.
//!
//! Local elements may slide across an edge letter when they lie in the
//! relevant edge subgroup, so every rule is matched up to such slides. Words
//! are kept in a transversal normal form that pushes slidable parts of each
//! element to the right.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::complex::ComplexOfGroups;
use crate::scwol::{EdgeId, Scwol, ScwolError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// An edge symbol `a+` or `a-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub sign: Sign,
}

impl OrientedEdge {
    pub fn plus(edge: EdgeId) -> Self {
        OrientedEdge { edge, sign: Sign::Plus }
    }

    pub fn minus(edge: EdgeId) -> Self {
        OrientedEdge { edge, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Self {
        let sign = match self.sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        OrientedEdge { edge: self.edge, sign }
    }

    pub fn init(self, s: &Scwol) -> VertexId {
        match self.sign {
            Sign::Plus => s.term(self.edge),
            Sign::Minus => s.init(self.edge),
        }
    }

    pub fn term(self, s: &Scwol) -> VertexId {
        match self.sign {
            Sign::Plus => s.init(self.edge),
            Sign::Minus => s.term(self.edge),
        }
    }
}

/// One letter of a word: a nontrivial local element or an oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Elem { vertex: VertexId, elem: usize },
    Edge(OrientedEdge),
}

/// A G(Y)-path issuing from `start`, stored with implicit identities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    start: VertexId,
    letters: Vec<Letter>,
}

impl PathWord {
    pub fn empty(start: VertexId) -> Self {
        PathWord { start, letters: Vec::new() }
    }

    /// Builds a word, checking vertex compatibility and element ranges.
    pub fn new(c: &ComplexOfGroups, start: VertexId, letters: Vec<Letter>) -> Result<Self, WordError> {
        let s = c.base();
        if start >= s.num_vertices() {
            return Err(WordError::VertexOutOfRange(start));
        }
        let mut at = start;
        for (pos, l) in letters.iter().enumerate() {
            match *l {
                Letter::Elem { vertex, elem } => {
                    if vertex != at {
                        return Err(WordError::PathMismatch { position: pos });
                    }
                    if elem >= c.local(vertex).order() {
                        return Err(WordError::ElementOutOfRange { position: pos });
                    }
                }
                Letter::Edge(e) => {
                    if e.edge >= s.num_edges() {
                        return Err(WordError::EdgeOutOfRange(e.edge));
                    }
                    if e.init(s) != at {
                        return Err(WordError::PathMismatch { position: pos });
                    }
                    at = e.term(s);
                }
            }
        }
        let letters = letters.into_iter().filter(|l| !matches!(l, Letter::Elem { elem: 0, .. })).collect();
        Ok(PathWord { start, letters })
    }

    pub(crate) fn from_raw(start: VertexId, letters: Vec<Letter>) -> Self {
        PathWord { start, letters }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of edge letters.
    pub fn path_length(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, Letter::Edge(_))).count()
    }

    pub fn end(&self, s: &Scwol) -> VertexId {
        self.letters
            .iter()
            .rev()
            .find_map(|l| match l {
                Letter::Edge(e) => Some(e.term(s)),
                Letter::Elem { .. } => None,
            })
            .unwrap_or(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The formal alternating sequence `(g0, e1, g1, ..., ek, gk)` with identities made explicit.
    pub fn alternating(&self, s: &Scwol) -> (Vec<usize>, Vec<OrientedEdge>) {
        let mut elems = vec![0];
        let mut edges = Vec::new();
        for l in &self.letters {
            match *l {
                Letter::Elem { elem, .. } => *elems.last_mut().expect("nonempty") = elem,
                Letter::Edge(e) => {
                    edges.push(e);
                    elems.push(0);
                }
            }
        }
        let _ = s;
        (elems, edges)
    }

    pub fn inverse(&self, c: &ComplexOfGroups) -> PathWord {
        let s = c.base();
        let end = self.end(s);
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match *l {
                Letter::Elem { vertex, elem } => Letter::Elem { vertex, elem: c.local(vertex).inv(elem) },
                Letter::Edge(e) => Letter::Edge(e.inverse()),
            })
            .collect();
        PathWord { start: end, letters }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &PathWord, s: &Scwol) -> Result<PathWord, WordError> {
        if self.end(s) != other.start {
            return Err(WordError::PathMismatch { position: self.letters.len() });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(PathWord { start: self.start, letters })
    }

    pub fn display<'a>(&'a self, c: &'a ComplexOfGroups) -> impl fmt::Display + 'a {
        DisplayLetters { letters: &self.letters, complex: c }
    }
}

struct DisplayLetters<'a> {
    letters: &'a [Letter],
    complex: &'a ComplexOfGroups,
}

impl fmt::Display for DisplayLetters<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let s = self.complex.base();
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            match *l {
                Letter::Elem { vertex, elem } => f.write_str(self.complex.local(vertex).label(elem))?,
                Letter::Edge(e) => {
                    let sign = if e.sign == Sign::Plus { '+' } else { '-' };
                    write!(f, "{}{}", s.edge_name(e.edge), sign)?
                }
            }
        }
        Ok(())
    }
}

/// Renders a letter sequence (for example a tree-collapsed word) with names.
pub fn display_letters<'a>(letters: &'a [Letter], c: &'a ComplexOfGroups) -> impl fmt::Display + 'a {
    DisplayLetters { letters, complex: c }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {position} does not continue the path")]
    PathMismatch { position: usize },
    #[error("letter {position} is not an element of its local group")]
    ElementOutOfRange { position: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("token `{0}` names elements of several local groups; qualify it as `label@vertex`")]
    Ambiguous(String),
    #[error("empty token in word")]
    EmptyToken,
    #[error("path ends at {found}, expected the base vertex {expected}")]
    NotALoop { expected: String, found: String },
    #[error("the complex of groups is invalid:\n{0}")]
    InvalidComplex(String),
    #[error(transparent)]
    Scwol(#[from] ScwolError),
}

/// Whether a reduction is known to have reached a word of minimal path length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStatus {
    /// No length-decreasing rule applies anywhere in the explored class.
    Certified,
    /// The search budget ran out first.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub word: PathWord,
    pub status: ReductionStatus,
    /// Number of words visited by the search (1 when no search was needed).
    pub explored: usize,
}

impl Reduction {
    pub fn certified(&self) -> bool {
        self.status == ReductionStatus::Certified
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordEquality {
    Equal,
    NotEqual,
    /// Dimension >= 2: `u v^-1` reduced to a nonempty word, which is strong evidence
    /// but not a proof that `u != v`.
    ReducedNonEmpty,
    Undecided,
}

/// A canonical form could not be certified within the budget.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("reduction budget of {budget} words exhausted")]
pub struct Undecided {
    pub budget: usize,
}

/// Whether a canonical form keeps the trailing local element (group element)
/// or drops it (left coset `w G_v` of the end vertex).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tail {
    Keep,
    Drop,
}

#[derive(Clone, Debug)]
struct Rule {
    /// Oriented edge replacing the two-letter segment, `None` for pinches.
    mid: Option<OrientedEdge>,
    /// For each middle element `x`, the elements placed before and after `mid`.
    table: Vec<Option<(usize, usize)>>,
}

/// `eps = pre . first . middle . second . post`, derived from a triangle of Y.
#[derive(Clone, Copy, Debug)]
struct Expansion {
    pre: usize,
    first: OrientedEdge,
    middle: usize,
    second: OrientedEdge,
    post: usize,
}

/// The fundamental group of a complex of groups relative to a maximal tree,
/// with the rewriting data derived from the complex.
#[derive(Debug)]
pub struct Pi1Presentation {
    complex: Arc<ComplexOfGroups>,
    base: VertexId,
    tree: Vec<EdgeId>,
    in_tree: Vec<bool>,
    /// Tree path from the base vertex to each vertex.
    tree_paths: Vec<Vec<OrientedEdge>>,
    rules: HashMap<(OrientedEdge, OrientedEdge), Vec<Rule>>,
    expansions: HashMap<OrientedEdge, Vec<Expansion>>,
    /// For each oriented edge and each element `y` at its initial vertex:
    /// `(r, s')` with `y = r s`, `r` the least element of `y V`, and `s' = rho(s)`.
    coset_split: HashMap<OrientedEdge, Vec<(usize, usize)>>,
    dimension: usize,
    slack: usize,
}

/// Default number of words a single reduction may visit.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Spanning tree of the 1-skeleton by breadth-first search from the lowest vertex id.
pub fn maximal_tree(s: &Scwol) -> Result<Vec<EdgeId>, ScwolError> {
    s.spanning_tree()
}

impl Pi1Presentation {
    /// Builds the presentation; the complex must validate.
    pub fn new(complex: ComplexOfGroups, base: VertexId) -> Result<Self, WordError> {
        Self::with_tree(Arc::new(complex), base, None)
    }

    pub fn from_arc(complex: Arc<ComplexOfGroups>, base: VertexId) -> Result<Self, WordError> {
        Self::with_tree(complex, base, None)
    }

    /// As [`Pi1Presentation::new`] but with an explicit maximal tree.
    pub fn with_tree(complex: Arc<ComplexOfGroups>, base: VertexId, tree: Option<Vec<EdgeId>>) -> Result<Self, WordError> {
        let report = complex.validate();
        if !report.is_valid() {
            return Err(WordError::InvalidComplex(report.to_string()));
        }
        let s = complex.base();
        if base >= s.num_vertices() {
            return Err(WordError::VertexOutOfRange(base));
        }
        let tree = match tree {
            Some(t) => t,
            None => maximal_tree(s)?,
        };
        let mut in_tree = vec![false; s.num_edges()];
        for &a in &tree {
            if a >= s.num_edges() {
                return Err(WordError::EdgeOutOfRange(a));
            }
            in_tree[a] = true;
        }
        let tree_paths = tree_paths(s, &in_tree, base)?;
        let mut p = Pi1Presentation {
            dimension: s.dimension(),
            complex,
            base,
            tree,
            in_tree,
            tree_paths,
            rules: HashMap::new(),
            expansions: HashMap::new(),
            coset_split: HashMap::new(),
            slack: 1,
        };
        p.build_tables();
        Ok(p)
    }

    /// Extra path length allowed above the current best during dimension >= 2 searches.
    pub fn set_slack(&mut self, slack: usize) {
        self.slack = slack;
    }

    pub fn complex(&self) -> &ComplexOfGroups {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<ComplexOfGroups> {
        &self.complex
    }

    pub fn scwol(&self) -> &Scwol {
        self.complex.base()
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn tree(&self) -> &[EdgeId] {
        &self.tree
    }

    pub fn in_tree(&self, a: EdgeId) -> bool {
        self.in_tree[a]
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn tree_path(&self, v: VertexId) -> &[OrientedEdge] {
        &self.tree_paths[v]
    }

    /// Oriented edges issuing from `v`.
    pub fn edges_from(&self, v: VertexId) -> Vec<OrientedEdge> {
        let s = self.scwol();
        self.oriented_edges().filter(|e| e.init(s) == v).collect()
    }

    /// Left transversal of the subgroup of `G_i(eps)` that slides right through `eps`.
    pub fn transversal(&self, eps: OrientedEdge) -> Vec<usize> {
        let mut reps: Vec<usize> = self.coset_split[&eps].iter().map(|&(r, _)| r).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    pub fn oriented_edges(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        self.scwol().edges().flat_map(|a| [OrientedEdge::plus(a), OrientedEdge::minus(a)])
    }

    /// `eps y = lambda(y) eps` for `y` at `t(eps)`, when defined.
    fn slide_left(&self, eps: OrientedEdge, y: usize) -> Option<usize> {
        let psi = self.complex.psi(eps.edge);
        match eps.sign {
            Sign::Plus => Some(psi.apply(y)),
            Sign::Minus => psi.preimage(y),
        }
    }

    /// `y eps = eps rho(y)` for `y` at `i(eps)`, when defined.
    fn slide_right(&self, eps: OrientedEdge, y: usize) -> Option<usize> {
        let psi = self.complex.psi(eps.edge);
        match eps.sign {
            Sign::Plus => psi.preimage(y),
            Sign::Minus => Some(psi.apply(y)),
        }
    }

    fn build_tables(&mut self) {
        let c = self.complex.clone();
        let s = c.base();
        let oriented: Vec<OrientedEdge> = self.oriented_edges().collect();
        for &eps in &oriented {
            let g = c.local(eps.init(s));
            let right: Vec<usize> = g.elements().filter(|&y| self.slide_right(eps, y).is_some()).collect();
            let split = g
                .elements()
                .map(|y| {
                    let r = right.iter().map(|&v| g.mul(y, v)).min().expect("identity slides");
                    let sl = g.mul(g.inv(r), y);
                    (r, self.slide_right(eps, sl).expect("coset factor slides"))
                })
                .collect();
            self.coset_split.insert(eps, split);
        }
        for (a, b) in s.composable_pairs() {
            let Some(ab) = s.compose(a, b) else { continue };
            let g = c.twist(a, b);
            let gi = c.local(s.term(a)).inv(g);
            let (ap, am) = (OrientedEdge::plus(a), OrientedEdge::minus(a));
            let (bp, bm) = (OrientedEdge::plus(b), OrientedEdge::minus(b));
            let (cp, cm) = (OrientedEdge::plus(ab), OrientedEdge::minus(ab));
            let list = [
                (cp, Expansion { pre: gi, first: ap, middle: 0, second: bp, post: 0 }),
                (cm, Expansion { pre: 0, first: bm, middle: 0, second: am, post: g }),
                (ap, Expansion { pre: g, first: cp, middle: 0, second: bm, post: 0 }),
                (am, Expansion { pre: 0, first: bp, middle: 0, second: cm, post: gi }),
                (bp, Expansion { pre: 0, first: am, middle: g, second: cp, post: 0 }),
                (bm, Expansion { pre: 0, first: cm, middle: gi, second: ap, post: 0 }),
            ];
            for (eps, ex) in list {
                self.expansions.entry(eps).or_default().push(ex);
                let gpre = c.local(eps.init(s));
                let gpost = c.local(eps.term(s));
                let rule = self.make_rule(ex.first, ex.middle, ex.second, Some(eps), gpre.inv(ex.pre), gpost.inv(ex.post));
                self.rules.entry((ex.first, ex.second)).or_default().push(rule);
            }
        }
        for &eps in &oriented {
            let rule = self.make_rule(eps, 0, eps.inverse(), None, 0, 0);
            self.rules.entry((eps, eps.inverse())).or_default().push(rule);
        }
    }

    /// Rule for `first x second` where `x` is in `U m V`: `U` slides left through
    /// `first`, `V` slides right through `second`.
    fn make_rule(
        &self,
        first: OrientedEdge,
        m: usize,
        second: OrientedEdge,
        mid: Option<OrientedEdge>,
        before: usize,
        after: usize,
    ) -> Rule {
        let c = &self.complex;
        let s = c.base();
        let g = c.local(first.term(s));
        let left_group = c.local(first.init(s));
        let right_group = c.local(second.term(s));
        let left_slidable: Vec<(usize, usize)> = g.elements().filter_map(|u| self.slide_left(first, u).map(|l| (u, l))).collect();
        let table = g
            .elements()
            .map(|x| {
                left_slidable.iter().find_map(|&(u, lu)| {
                    let v = g.mul(g.inv(m), g.mul(g.inv(u), x));
                    let rv = self.slide_right(second, v)?;
                    Some(match mid {
                        Some(_) => (left_group.mul(lu, before), right_group.mul(after, rv)),
                        None => (left_group.mul(lu, rv), 0),
                    })
                })
            })
            .collect();
        Rule { mid, table }
    }

    /// Applies a reduction at the segment ending at `out`'s top, if any.
    fn try_reduce(&self, out: &[Letter], second: OrientedEdge) -> Option<(usize, Vec<Letter>)> {
        let s = self.scwol();
        let (first, x, consumed) = match out {
            [.., Letter::Edge(e), Letter::Elem { elem, .. }] => (*e, *elem, 2),
            [.., Letter::Edge(e)] => (*e, 0, 1),
            _ => return None,
        };
        let rules = self.rules.get(&(first, second))?;
        for rule in rules {
            if let Some((before, after)) = rule.table[x] {
                let mut repl = Vec::with_capacity(3);
                let v0 = first.init(s);
                repl.push(Letter::Elem { vertex: v0, elem: before });
                if let Some(mid) = rule.mid {
                    repl.push(Letter::Edge(mid));
                    repl.push(Letter::Elem { vertex: mid.term(s), elem: after });
                }
                return Some((consumed, repl));
            }
        }
        None
    }

    /// Greedy leftmost reduction by merges, pinches and triangle rules.
    fn greedy(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        let mut pending: Vec<Letter> = letters.iter().rev().copied().collect();
        while let Some(l) = pending.pop() {
            match l {
                Letter::Elem { elem: 0, .. } => {}
                Letter::Elem { vertex, elem } => push_elem(&mut out, &self.complex, vertex, elem),
                Letter::Edge(e) => match self.try_reduce(&out, e) {
                    Some((consumed, repl)) => {
                        out.truncate(out.len() - consumed);
                        pending.extend(repl.into_iter().rev());
                    }
                    None => out.push(l),
                },
            }
        }
        out
    }

    /// Transversal normal form; merges adjacent elements.
    fn normalize(&self, start: VertexId, letters: &[Letter], tail: Tail) -> Vec<Letter> {
        let s = self.scwol();
        let mut out = Vec::with_capacity(letters.len());
        let mut at = start;
        let mut carry = 0;
        for &l in letters {
            match l {
                Letter::Elem { elem, .. } => carry = self.complex.local(at).mul(carry, elem),
                Letter::Edge(e) => {
                    let (r, pushed) = self.coset_split[&e][carry];
                    if r != 0 {
                        out.push(Letter::Elem { vertex: at, elem: r });
                    }
                    out.push(l);
                    at = e.term(s);
                    carry = pushed;
                }
            }
        }
        if tail == Tail::Keep && carry != 0 {
            out.push(Letter::Elem { vertex: at, elem: carry });
        }
        out
    }

    fn edge_count(letters: &[Letter]) -> usize {
        letters.iter().filter(|l| matches!(l, Letter::Edge(_))).count()
    }

    /// All words one rule application away (expansions and single reductions), normalized.
    fn neighbours(&self, start: VertexId, word: &[Letter], tail: Tail) -> Vec<Vec<Letter>> {
        let s = self.scwol();
        let mut out = Vec::new();
        for (i, l) in word.iter().enumerate() {
            let Letter::Edge(eps) = *l else { continue };
            if let Some(list) = self.expansions.get(&eps) {
                for ex in list {
                    let mut w = Vec::with_capacity(word.len() + 4);
                    w.extend_from_slice(&word[..i]);
                    w.push(Letter::Elem { vertex: eps.init(s), elem: ex.pre });
                    w.push(Letter::Edge(ex.first));
                    w.push(Letter::Elem { vertex: ex.first.term(s), elem: ex.middle });
                    w.push(Letter::Edge(ex.second));
                    w.push(Letter::Elem { vertex: eps.term(s), elem: ex.post });
                    w.extend_from_slice(&word[i + 1..]);
                    out.push(self.normalize(start, &w, tail));
                }
            }
            if let Some((consumed, repl)) = self.try_reduce(&word[..i], eps) {
                let mut w = Vec::with_capacity(word.len());
                w.extend_from_slice(&word[..i - consumed]);
                w.extend(repl);
                w.extend_from_slice(&word[i + 1..]);
                out.push(self.normalize(start, &w, tail));
            }
        }
        out
    }

    /// Reduces and normalizes; in dimension >= 2 also searches the class of
    /// words reachable by expansions (up to the slack) for shorter words.
    ///
    /// Returns the lexicographically least word of minimal length found.
    fn canonical(&self, start: VertexId, letters: &[Letter], tail: Tail, budget: usize) -> (Vec<Letter>, ReductionStatus, usize) {
        let first = self.normalize(start, &self.greedy(letters), tail);
        if self.dimension < 2 || self.expansions.is_empty() {
            return (first, ReductionStatus::Certified, 1);
        }
        let mut best = first;
        let mut best_len = Self::edge_count(&best);
        let mut visited: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
        visited.insert(best.clone());
        queue.push_back(best.clone());
        let mut explored = 1;
        while let Some(w) = queue.pop_front() {
            for n in self.neighbours(start, &w, tail) {
                let len = Self::edge_count(&n);
                if len < best_len {
                    let restart = self.normalize(start, &self.greedy(&n), tail);
                    best_len = Self::edge_count(&restart);
                    best = restart.clone();
                    visited.clear();
                    queue.clear();
                    visited.insert(restart.clone());
                    queue.push_back(restart);
                    explored += 1;
                    break;
                }
                if len > best_len + self.slack || visited.contains(&n) {
                    continue;
                }
                explored += 1;
                if explored > budget {
                    return (best, ReductionStatus::BudgetExhausted, explored);
                }
                if len == best_len && n < best {
                    best = n.clone();
                }
                visited.insert(n.clone());
                queue.push_back(n);
            }
        }
        (best, ReductionStatus::Certified, explored)
    }

    /// Reduces `w` to a word of minimal path length representing the same element of FG(Y).
    pub fn reduce(&self, w: &PathWord, budget: usize) -> Reduction {
        let (letters, status, explored) = self.canonical(w.start, &w.letters, Tail::Keep, budget);
        Reduction { word: PathWord::from_raw(w.start, letters), status, explored }
    }

    /// Canonical representative of the element `w`.
    pub fn canonical_element(&self, w: &PathWord, budget: usize) -> Result<PathWord, Undecided> {
        let r = self.reduce(w, budget);
        if r.certified() {
            Ok(r.word)
        } else {
            Err(Undecided { budget })
        }
    }

    /// Canonical representative of the left coset `w G_v`, `v` the end vertex of `w`.
    /// The representative never ends with a local element.
    pub fn canonical_coset(&self, w: &PathWord, budget: usize) -> Result<PathWord, Undecided> {
        let (letters, status, _) = self.canonical(w.start, &w.letters, Tail::Drop, budget);
        match status {
            ReductionStatus::Certified => Ok(PathWord::from_raw(w.start, letters)),
            ReductionStatus::BudgetExhausted => Err(Undecided { budget }),
        }
    }

    /// Deletes tree edges: the image of a loop in the tree presentation.
    pub fn collapse(&self, w: &PathWord) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &w.letters {
            match l {
                Letter::Edge(e) if self.in_tree[e.edge] => {}
                Letter::Elem { vertex, elem } => match out.last_mut() {
                    Some(Letter::Elem { vertex: v, elem: x }) if *v == vertex => {
                        *x = self.complex.local(vertex).mul(*x, elem);
                        if *x == 0 {
                            out.pop();
                        }
                    }
                    _ => out.push(l),
                },
                _ => out.push(l),
            }
        }
        out
    }

    /// The tree path between two vertices, freely reduced.
    pub fn tree_path_between(&self, from: VertexId, to: VertexId) -> Vec<OrientedEdge> {
        let mut path: Vec<OrientedEdge> = self.tree_paths[from].iter().rev().map(|e| e.inverse()).collect();
        for &e in &self.tree_paths[to] {
            if path.last() == Some(&e.inverse()) {
                path.pop();
            } else {
                path.push(e);
            }
        }
        path
    }

    /// Lifts a sequence of letters that need not form a path to a loop at the
    /// base vertex by inserting tree paths; the inverse of [`Pi1Presentation::collapse`].
    pub fn lift(&self, letters: &[Letter]) -> PathWord {
        let s = self.scwol();
        let mut out = Vec::new();
        let mut at = self.base;
        for &l in letters {
            let need = match l {
                Letter::Elem { vertex, .. } => vertex,
                Letter::Edge(e) => e.init(s),
            };
            out.extend(self.tree_path_between(at, need).into_iter().map(Letter::Edge));
            out.push(l);
            at = match l {
                Letter::Elem { vertex, .. } => vertex,
                Letter::Edge(e) => e.term(s),
            };
        }
        out.extend(self.tree_path_between(at, self.base).into_iter().map(Letter::Edge));
        out.retain(|l| !matches!(l, Letter::Elem { elem: 0, .. }));
        PathWord::from_raw(self.base, out)
    }

    /// Loop at the base vertex representing the local element `g` of `G_v`.
    pub fn vertex_element_loop(&self, v: VertexId, g: usize) -> PathWord {
        self.lift(&[Letter::Elem { vertex: v, elem: g }])
    }

    /// Loop at the base vertex representing the edge symbol `eps`.
    pub fn edge_loop(&self, eps: OrientedEdge) -> PathWord {
        self.lift(&[Letter::Edge(eps)])
    }

    /// Parses `s . e1+ . t . e2-` into letters; `id` is the empty word. Elements are looked up first in
    /// the local group of the current vertex, then in any group where the label
    /// is unique; `label@vertex` qualifies explicitly.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>, WordError> {
        let c = &self.complex;
        let s = c.base();
        let mut out = Vec::new();
        let mut at = self.base;
        let text = text.trim();
        if text.is_empty() || text == "id" {
            return Ok(out);
        }
        for raw in text.split('.') {
            let tok = raw.trim();
            if tok.is_empty() {
                return Err(WordError::EmptyToken);
            }
            if let Some(edge) = tok
                .strip_suffix('+')
                .map(|n| (n, Sign::Plus))
                .or_else(|| tok.strip_suffix('-').map(|n| (n, Sign::Minus)))
                .and_then(|(n, sign)| s.edge_by_name(n).map(|e| OrientedEdge { edge: e, sign }))
            {
                out.push(Letter::Edge(edge));
                at = edge.term(s);
                continue;
            }
            let (vertex, elem) = if let Some((label, vname)) = tok.split_once('@') {
                let v = s.vertex_by_name(vname).ok_or_else(|| WordError::UnknownToken(tok.to_string()))?;
                let e = c.local(v).element(label).ok_or_else(|| WordError::UnknownToken(tok.to_string()))?;
                (v, e)
            } else if let Some(e) = c.local(at).element(tok) {
                (at, e)
            } else {
                let hits: Vec<(VertexId, usize)> = s.vertices().filter_map(|v| c.local(v).element(tok).map(|e| (v, e))).collect();
                match hits.as_slice() {
                    [] => return Err(WordError::UnknownToken(tok.to_string())),
                    [one] => *one,
                    _ => return Err(WordError::Ambiguous(tok.to_string())),
                }
            };
            out.push(Letter::Elem { vertex, elem });
            at = vertex;
        }
        Ok(out)
    }

    /// Parses a word and lifts it to a loop at the base vertex.
    pub fn parse_loop(&self, text: &str) -> Result<PathWord, WordError> {
        Ok(self.lift(&self.parse_letters(text)?))
    }

    /// Equality of two loops at the base vertex.
    pub fn word_equal(&self, u: &PathWord, v: &PathWord, budget: usize) -> WordEquality {
        let c = &self.complex;
        let Ok(w) = u.concat(&v.inverse(c), c.base()) else {
            return WordEquality::Undecided;
        };
        let r = self.reduce(&w, budget);
        if r.word.is_empty() {
            WordEquality::Equal
        } else if !r.certified() {
            WordEquality::Undecided
        } else if self.dimension < 2 {
            WordEquality::NotEqual
        } else {
            WordEquality::ReducedNonEmpty
        }
    }
}

fn push_elem(out: &mut Vec<Letter>, c: &ComplexOfGroups, vertex: VertexId, elem: usize) {
    if let Some(Letter::Elem { vertex: v, elem: x }) = out.last_mut() {
        debug_assert_eq!(*v, vertex);
        *x = c.local(vertex).mul(*x, elem);
        if *x == 0 {
            out.pop();
        }
    } else {
        out.push(Letter::Elem { vertex, elem });
    }
}

fn tree_paths(s: &Scwol, in_tree: &[bool], base: VertexId) -> Result<Vec<Vec<OrientedEdge>>, WordError> {
    let mut paths: Vec<Option<Vec<OrientedEdge>>> = vec![None; s.num_vertices()];
    paths[base] = Some(Vec::new());
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        let here = paths[x].clone().expect("visited");
        for a in s.edges().filter(|&a| in_tree[a]) {
            for eps in [OrientedEdge::plus(a), OrientedEdge::minus(a)] {
                let y = eps.term(s);
                if eps.init(s) == x && paths[y].is_none() {
                    let mut p = here.clone();
                    p.push(eps);
                    paths[y] = Some(p);
                    queue.push_back(y);
                }
            }
        }
    }
    paths.into_iter().map(|p| p.ok_or_else(|| WordError::Scwol(ScwolError::Disconnected(s.components())))).collect()
}

/// A G(Y)-path given as `g0` followed by `(e_j, g_j)` steps.
#[derive(Clone, Debug)]
pub struct GPath {
    pub start: VertexId,
    pub g0: usize,
    pub steps: Vec<(OrientedEdge, usize)>,
}

/// The word `g0 e1 g1 ... ek gk` of a G(Y)-loop based at `base`.
pub fn loop_word(c: &ComplexOfGroups, path: &GPath, base: VertexId) -> Result<PathWord, WordError> {
    let s = c.base();
    let mut letters = vec![Letter::Elem { vertex: path.start, elem: path.g0 }];
    let mut at = path.start;
    for &(e, g) in &path.steps {
        if e.edge >= s.num_edges() {
            return Err(WordError::EdgeOutOfRange(e.edge));
        }
        letters.push(Letter::Edge(e));
        at = e.term(s);
        letters.push(Letter::Elem { vertex: at, elem: g });
    }
    if path.start != base || at != base {
        let name = |v: VertexId| if v < s.num_vertices() { s.vertex_name(v).to_string() } else { v.to_string() };
        return Err(WordError::NotALoop { expected: name(base), found: name(if path.start != base { path.start } else { at }) });
    }
    PathWord::new(c, base, letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupHom};

    /// Sinks u (Z2 = {1, s}) and w (Z3 = {1, t, T}), source m, edges e1: m -> u, e2: m -> w.
    pub(crate) fn z2_z3() -> ComplexOfGroups {
        let mut b = Scwol::builder();
        let u = b.vertex("u");
        let w = b.vertex("w");
        let m = b.vertex("m");
        b.edge("e1", m, u);
        b.edge("e2", m, w);
        let s = b.build().unwrap();
        let z2 = Arc::new(FiniteGroup::cyclic(2).with_labels(vec!["1".into(), "s".into()]).unwrap());
        let z3 = Arc::new(FiniteGroup::cyclic(3).with_labels(vec!["1".into(), "t".into(), "T".into()]).unwrap());
        let one = Arc::new(FiniteGroup::trivial().with_labels(vec!["1".into()]).unwrap());
        let homs = vec![GroupHom::new(one.clone(), z2.clone(), vec![0]).unwrap(), GroupHom::new(one.clone(), z3.clone(), vec![0]).unwrap()];
        ComplexOfGroups::new(s, vec![z2, z3, one], homs, HashMap::new()).unwrap()
    }

    fn pres(base: VertexId) -> Pi1Presentation {
        Pi1Presentation::new(z2_z3(), base).unwrap()
    }

    #[test]
    fn orientation_convention() {
        let c = z2_z3();
        let s = c.base();
        // e1 runs from m to u
        assert_eq!(OrientedEdge::plus(0).init(s), 0);
        assert_eq!(OrientedEdge::plus(0).term(s), 2);
        assert_eq!(OrientedEdge::minus(0).init(s), 2);
        assert_eq!(OrientedEdge::minus(0).term(s), 0);
    }

    #[test]
    fn pinch_plus_collapses_to_psi() {
        // a+ g a- with g in G_i(a) = trivial: e1+ . e1- from u reduces to the empty word
        let p = pres(0);
        let c = p.complex();
        let w = PathWord::new(c, 0, vec![Letter::Edge(OrientedEdge::plus(0)), Letter::Edge(OrientedEdge::minus(0))]).unwrap();
        let r = p.reduce(&w, DEFAULT_BUDGET);
        assert!(r.word.is_empty());
        assert!(r.certified());
    }

    #[test]
    fn pinch_minus_needs_image_membership() {
        let p = pres(2);
        let c = p.complex();
        // e1- . s . e1+ : s is not in the (trivial) image of psi_e1, so no pinch
        let w = PathWord::new(
            c,
            2,
            vec![Letter::Edge(OrientedEdge::minus(0)), Letter::Elem { vertex: 0, elem: 1 }, Letter::Edge(OrientedEdge::plus(0))],
        )
        .unwrap();
        let r = p.reduce(&w, DEFAULT_BUDGET);
        assert_eq!(r.word.path_length(), 2);
        // with the identity in the middle it collapses
        let w = PathWord::new(c, 2, vec![Letter::Edge(OrientedEdge::minus(0)), Letter::Edge(OrientedEdge::plus(0))]).unwrap();
        assert!(p.reduce(&w, DEFAULT_BUDGET).word.is_empty());
    }

    #[test]
    fn s_then_t_out_and_back_merges_to_length_zero() {
        // (s, e1+, id, e1-, t)-style: from u, s . e1+ . e1- . s reduces to the identity
        let p = pres(0);
        let w = p.parse_loop("s . e1+ . e1- . s").unwrap();
        assert!(p.reduce(&w, DEFAULT_BUDGET).word.is_empty());
    }

    #[test]
    fn stst_is_reduced_with_four_syllables() {
        let p = pres(2);
        let w = p.parse_loop("s . t . s . t").unwrap();
        assert_eq!(w.path_length(), 8);
        let r = p.reduce(&w, DEFAULT_BUDGET);
        assert!(r.certified());
        assert_eq!(r.word.path_length(), 8);
        let collapsed = p.collapse(&r.word);
        assert_eq!(collapsed.len(), 4);
        assert_eq!(display_letters(&collapsed, p.complex()).to_string(), "s . t . s . t");
    }

    #[test]
    fn st_and_ts_differ() {
        let p = pres(2);
        let st = p.parse_loop("s . t").unwrap();
        let ts = p.parse_loop("t . s").unwrap();
        assert_eq!(p.word_equal(&st, &ts, DEFAULT_BUDGET), WordEquality::NotEqual);
        assert_eq!(p.word_equal(&st, &st, DEFAULT_BUDGET), WordEquality::Equal);
        let t3 = p.parse_loop("t . t . t").unwrap();
        assert_eq!(p.word_equal(&t3, &PathWord::empty(2), DEFAULT_BUDGET), WordEquality::Equal);
    }

    #[test]
    fn lift_and_collapse_are_inverse_on_letters() {
        let p = pres(2);
        let letters = p.parse_letters("s . t . s . T").unwrap();
        let lifted = p.lift(&letters);
        assert_eq!(lifted.end(p.scwol()), 2);
        assert_eq!(p.collapse(&lifted), letters);
    }

    #[test]
    fn parse_errors() {
        let p = pres(2);
        assert_eq!(p.parse_letters("s . q"), Err(WordError::UnknownToken("q".into())));
        assert_eq!(p.parse_letters("s . . t"), Err(WordError::EmptyToken));
        assert!(p.parse_letters("s@u . t@w").is_ok());
        assert!(p.parse_letters("id").unwrap().is_empty());
    }

    #[test]
    fn loop_words() {
        let c = z2_z3();
        let empty = loop_word(&c, &GPath { start: 2, g0: 0, steps: vec![] }, 2).unwrap();
        assert_eq!(empty.path_length(), 0);
        let out_back = GPath { start: 2, g0: 0, steps: vec![(OrientedEdge::minus(0), 0), (OrientedEdge::plus(0), 0)] };
        let w = loop_word(&c, &out_back, 2).unwrap();
        assert_eq!(w.path_length(), 2);
        assert!(Pi1Presentation::new(c.clone(), 2).unwrap().reduce(&w, 10).word.is_empty());
        let open = GPath { start: 2, g0: 0, steps: vec![(OrientedEdge::minus(0), 0)] };
        assert!(matches!(loop_word(&c, &open, 2), Err(WordError::NotALoop { .. })));
    }

    #[test]
    fn coset_forms_drop_the_tail() {
        let p = pres(2);
        let c = p.complex();
        // e1- . s ends at u; the coset of G_u forgets s
        let w = PathWord::new(c, 2, vec![Letter::Edge(OrientedEdge::minus(0)), Letter::Elem { vertex: 0, elem: 1 }]).unwrap();
        let k = p.canonical_coset(&w, 10).unwrap();
        assert_eq!(k.letters(), &[Letter::Edge(OrientedEdge::minus(0))]);
    }
}
