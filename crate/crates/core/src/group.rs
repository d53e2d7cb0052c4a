//! Finite groups as multiplication tables and homomorphisms between them.
//!
//! Element `0` is always the identity. Labels are used when reading and
//! printing words; `#k` always refers to element index `k`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::report::{ValidationReport, ViolationKind};

/// Largest group order accepted by the constructors.
pub const MAX_ORDER: usize = 1024;

/// Largest order accepted for an explicit Cayley table (the associativity check is cubic).
pub const MAX_TABLE_ORDER: usize = 128;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group table is empty")]
    Empty,
    #[error("group order {0} exceeds the limit of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("row {row} of the table has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry {0} is out of range")]
    EntryOutOfRange(usize),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("cannot parse group description `{0}`")]
    Shorthand(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("expected {expected} generator images, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator images do not extend to a homomorphism (conflict at element {0})")]
    NotExtendable(usize),
    #[error("map has {got} entries, domain has order {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("permutation list is not closed or not a set of permutations of equal degree")]
    BadPermutations,
    #[error("elements do not form a subgroup")]
    NotSubgroup,
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Vec<String>,
    generators: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, checking every group axiom.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= n) {
                return Err(GroupError::EntryOutOfRange(bad));
            }
            table.extend_from_slice(r);
        }
        let m = |a: usize, b: usize| table[a * n + b];
        for x in 0..n {
            if m(0, x) != x || m(x, 0) != x {
                return Err(GroupError::NoIdentity);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverses = vec![0; n];
        for (x, slot) in inverses.iter_mut().enumerate() {
            *slot = (0..n).find(|&y| m(x, y) == 0 && m(y, x) == 0).ok_or(GroupError::NoInverse(x))?;
        }
        let labels = match labels {
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Self::assemble(name.into(), table, inverses, labels)
    }

    fn assemble(name: String, table: Vec<usize>, inverses: Vec<usize>, labels: Vec<String>) -> Result<Self, GroupError> {
        let order = inverses.len();
        if labels.len() != order {
            return Err(GroupError::LabelCount { expected: order, got: labels.len() });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        let mut group = FiniteGroup { name, order, table, inverses, labels, generators: Vec::new() };
        group.generators = group.greedy_generators();
        Ok(group)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for x in 1..self.order {
            if !span.contains(&x) {
                gens.push(x);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group of order `n`, written additively: element `k` is labelled `k`.
    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inverses = (0..n).map(|k| (n - k) % n).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        let mut g = Self::assemble(format!("Z{n}"), table, inverses, labels).expect("cyclic labels are distinct");
        g.generators = if n > 1 { vec![1] } else { vec![] };
        g
    }

    /// Direct product; element `(x, y)` has index `x * |other| + y` and label `(lx,ly)`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let split = |i: usize| (i / m, i % m);
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let ((a1, a2), (b1, b2)) = (split(a), split(b));
                table.push(self.mul(a1, b1) * m + other.mul(a2, b2));
            }
        }
        let inverses = (0..size)
            .map(|a| {
                let (a1, a2) = split(a);
                self.inv(a1) * m + other.inv(a2)
            })
            .collect();
        let labels = (0..size)
            .map(|a| {
                let (a1, a2) = split(a);
                format!("({},{})", self.labels[a1], other.labels[a2])
            })
            .collect();
        let mut g = Self::assemble(format!("{}x{}", self.name, other.name), table, inverses, labels).expect("product labels are distinct");
        g.generators = self.generators.iter().map(|&x| x * m).chain(other.generators.iter().copied()).collect();
        g
    }

    /// Closure of a set of permutations of `0..degree` under composition.
    ///
    /// Elements are sorted by one-line notation, so the identity is element 0.
    /// Products follow `(p * q)(i) = p(q(i))`.
    pub fn from_permutations(name: impl Into<String>, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        let degree = generators.first().map_or(0, Vec::len);
        for p in generators {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(GroupError::BadPermutations);
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose(&x, g);
                if elements.insert(y.clone()) {
                    if elements.len() > MAX_ORDER {
                        return Err(GroupError::TooLarge(elements.len()));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for p in &elements {
            for q in &elements {
                table.push(index[&compose(p, q)]);
            }
        }
        let inverses = elements
            .iter()
            .map(|p| {
                let mut inv = vec![0; degree];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                index[&inv]
            })
            .collect();
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::assemble(name.into(), table, inverses, labels)
    }

    /// The symmetric group on `k` letters.
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if k <= 1 {
            return Ok(Self::trivial());
        }
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        Self::from_permutations(format!("S{k}"), &[swap, cycle])
    }

    /// Parses `1`, `Zn`, `Sn` and products such as `Z3xZ3` or `Z2×Z4`.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Shorthand(text.to_string());
        let mut result: Option<FiniteGroup> = None;
        for factor in text.split(['x', '×', '*']) {
            let factor = factor.trim();
            let group = if factor == "1" || factor.eq_ignore_ascii_case("trivial") {
                Self::trivial()
            } else if let Some(n) = factor.strip_prefix('Z') {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 0 || n > MAX_ORDER {
                    return Err(bad());
                }
                Self::cyclic(n)
            } else if let Some(k) = factor.strip_prefix('S') {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k > 6 {
                    return Err(bad());
                }
                Self::symmetric(k)?
            } else {
                return Err(bad());
            };
            result = Some(match result {
                None => group,
                Some(acc) => {
                    if acc.order * group.order > MAX_ORDER {
                        return Err(GroupError::TooLarge(acc.order * group.order));
                    }
                    acc.product(&group)
                }
            });
        }
        let mut g = result.ok_or_else(bad)?;
        g.name = text.trim().to_string();
        Ok(g)
    }

    /// Replaces the element labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.order {
            return Err(GroupError::LabelCount { expected: self.order, got: labels.len() });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// The subgroup on `elements` (which must be closed), reindexed in sorted order.
    ///
    /// Returns the subgroup and the embedding of its elements into `self`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) || elems.iter().any(|&x| x >= self.order) {
            return Err(GroupError::NotSubgroup);
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &elems {
            for &b in &elems {
                table.push(*pos.get(&self.mul(a, b)).ok_or(GroupError::NotSubgroup)?);
            }
        }
        let inverses =
            elems.iter().map(|&a| pos.get(&self.inv(a)).copied().ok_or(GroupError::NotSubgroup)).collect::<Result<Vec<_>, _>>()?;
        let labels = elems.iter().map(|&a| self.labels[a].clone()).collect();
        let sub = Self::assemble(format!("{}<{}>", self.name, n), table, inverses, labels)?;
        Ok((sub, elems))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks up an element by label, or by index written `#k`.
    pub fn element(&self, label: &str) -> Option<usize> {
        if let Some(k) = label.strip_prefix('#') {
            return k.parse().ok().filter(|&k| k < self.order);
        }
        self.labels.iter().position(|l| l == label)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Word norm with respect to the generating set of all nontrivial elements.
    pub fn norm(&self, x: usize) -> u32 {
        u32::from(x != 0)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&i.to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A homomorphism between finite groups, stored pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    dom: Arc<FiniteGroup>,
    cod: Arc<FiniteGroup>,
    map: Vec<usize>,
    preimage: Vec<Option<usize>>,
}

impl GroupHom {
    /// Wraps a pointwise map. Only the shape is checked; use [`GroupHom::check`] for the axioms.
    pub fn new(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != dom.order() {
            return Err(GroupError::MapLength { expected: dom.order(), got: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.order()) {
            return Err(GroupError::EntryOutOfRange(bad));
        }
        let mut preimage = vec![None; cod.order()];
        for (x, &y) in map.iter().enumerate() {
            preimage[y].get_or_insert(x);
        }
        Ok(GroupHom { dom, cod, map, preimage })
    }

    /// Extends images of `dom.generators()` multiplicatively to the whole domain.
    pub fn from_generator_images(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>, images: &[usize]) -> Result<Self, GroupError> {
        let gens = dom.generators().to_vec();
        if images.len() != gens.len() {
            return Err(GroupError::GeneratorCount { expected: gens.len(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= cod.order()) {
            return Err(GroupError::EntryOutOfRange(bad));
        }
        let mut map = vec![usize::MAX; dom.order()];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = dom.mul(x, g);
                let fy = cod.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return Err(GroupError::NotExtendable(y));
                }
            }
        }
        Self::new(dom, cod, map)
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = g.elements().collect();
        Self::new(g.clone(), g, map).expect("identity map has the right shape")
    }

    /// `x -> g x g^-1` on `group`.
    pub fn conjugation(group: Arc<FiniteGroup>, g: usize) -> Self {
        let map = group.elements().map(|x| group.conjugate(g, x)).collect();
        Self::new(group.clone(), group, map).expect("conjugation has the right shape")
    }

    pub fn dom(&self) -> &Arc<FiniteGroup> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteGroup> {
        &self.cod
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The unique preimage of `y`, if `y` lies in the image (assumes injectivity).
    #[inline]
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.preimage.get(y).copied().flatten()
    }

    /// Sorted image elements.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Option<GroupHom> {
        if inner.cod != self.dom {
            return None;
        }
        let map = inner.map.iter().map(|&y| self.map[y]).collect();
        GroupHom::new(inner.dom.clone(), self.cod.clone(), map).ok()
    }

    /// Checks identity preservation, multiplicativity and injectivity.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.map[0] != 0 {
            report.push(ViolationKind::IdentityNotPreserved, format!("identity maps to {}", self.cod.label(self.map[0])));
        }
        for x in self.dom.elements() {
            for y in self.dom.elements() {
                let lhs = self.map[self.dom.mul(x, y)];
                let rhs = self.cod.mul(self.map[x], self.map[y]);
                if lhs != rhs {
                    report.push(
                        ViolationKind::NotMultiplicative,
                        format!(
                            "f({}*{}) = {} but f({})*f({}) = {}",
                            self.dom.label(x),
                            self.dom.label(y),
                            self.cod.label(lhs),
                            self.dom.label(x),
                            self.dom.label(y),
                            self.cod.label(rhs)
                        ),
                    );
                }
            }
        }
        let mut first: HashMap<usize, usize> = HashMap::new();
        for x in self.dom.elements() {
            if let Some(&prev) = first.get(&self.map[x]) {
                report.push(
                    ViolationKind::NotInjective,
                    format!("{} and {} both map to {}", self.dom.label(prev), self.dom.label(x), self.cod.label(self.map[x])),
                );
            } else {
                first.insert(self.map[x], x);
            }
        }
        report
    }
}

/// Free-function form of [`GroupHom::check`].
pub fn check_hom(h: &GroupHom) -> ValidationReport {
    h.check()
}

/// Preimage of `y` under `h`, or `None` if `y` is outside the image.
pub fn image_membership(h: &GroupHom, y: usize) -> Option<usize> {
    h.preimage(y)
}

/// The inner automorphism `x -> g x g^-1` of `group`.
pub fn conjugation_aut(g: usize, group: &Arc<FiniteGroup>) -> GroupHom {
    GroupHom::conjugation(group.clone(), g)
}
