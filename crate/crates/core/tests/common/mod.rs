//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use scwol_core::complex::ComplexOfGroups;
use scwol_core::development::GroupBall;
use scwol_core::fixtures;
use scwol_core::metric::FiniteMetricSpace;
use scwol_core::words::Pi1Presentation;

pub fn presentation(name: &str) -> Pi1Presentation {
    let p = fixtures::load(name).unwrap();
    let c = p.complex_of_groups().unwrap();
    let b = p.base_vertex(&c).unwrap();
    Pi1Presentation::new(c, b).unwrap()
}

/// Names of the fixtures that pass validation.
pub fn valid_fixtures() -> Vec<&'static str> {
    fixtures::ALL.iter().map(|(n, _)| *n).filter(|n| *n != "noloops").collect()
}

/// Syllables of a normal form in Z2 * Z3 = <s> * <t>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syl {
    S,
    /// `t^k` with `k` in {1, 2}.
    T(u8),
}

pub type Z23 = Vec<Syl>;

pub fn z23_mul(w: &Z23, x: Syl) -> Z23 {
    let mut out = w.clone();
    match (out.last().copied(), x) {
        (Some(Syl::S), Syl::S) => {
            out.pop();
        }
        (Some(Syl::T(a)), Syl::T(b)) => {
            out.pop();
            let k = (a + b) % 3;
            if k != 0 {
                out.push(Syl::T(k));
            }
        }
        _ => out.push(x),
    }
    out
}

pub fn z23_inv(w: &Z23) -> Z23 {
    w.iter()
        .rev()
        .map(|s| match s {
            Syl::S => Syl::S,
            Syl::T(k) => Syl::T(3 - k),
        })
        .collect()
}

pub fn z23_product(a: &Z23, b: &Z23) -> Z23 {
    b.iter().fold(a.clone(), |w, &x| z23_mul(&w, x))
}

/// Vertices of the Bass-Serre tree of Z2 * Z3 over the segment u - m - w.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum TreeVertex {
    M(Z23),
    U(Z23),
    W(Z23),
}

fn strip(mut w: Z23, s_side: bool) -> Z23 {
    if let Some(&last) = w.last() {
        if (s_side && last == Syl::S) || (!s_side && matches!(last, Syl::T(_))) {
            w.pop();
        }
    }
    w
}

fn tree_neighbours(v: &TreeVertex) -> Vec<TreeVertex> {
    match v {
        TreeVertex::M(g) => vec![TreeVertex::U(strip(g.clone(), true)), TreeVertex::W(strip(g.clone(), false))],
        TreeVertex::U(c) => vec![TreeVertex::M(c.clone()), TreeVertex::M(z23_mul(c, Syl::S))],
        TreeVertex::W(c) => vec![TreeVertex::M(c.clone()), TreeVertex::M(z23_mul(c, Syl::T(1))), TreeVertex::M(z23_mul(c, Syl::T(2)))],
    }
}

/// Sphere sizes of the Bass-Serre tree about the vertex of the trivial group, out to `radius`.
pub fn z23_tree_spheres(radius: u32) -> Vec<usize> {
    let start = TreeVertex::M(Vec::new());
    let mut dist: HashMap<TreeVertex, u32> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for n in tree_neighbours(&v) {
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    let mut spheres = vec![0; radius as usize + 1];
    for d in dist.values() {
        spheres[*d as usize] += 1;
    }
    spheres
}

/// All elements of Z2 * Z3 with at most `radius` syllables, and their word norms.
pub fn z23_ball(radius: u32) -> Vec<Z23> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for x in [Syl::S, Syl::T(1), Syl::T(2)] {
                if w.last().is_some_and(|l| std::mem::discriminant(l) == std::mem::discriminant(&x)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Reads a group-ball label of the Z2 * Z3 fixture (`s`, `t`, `T` letters) as a normal form.
pub fn z23_parse(label: &str) -> Z23 {
    if label == "id" {
        return Vec::new();
    }
    label
        .split(" . ")
        .map(|t| match t {
            "s" => Syl::S,
            "t" => Syl::T(1),
            "T" => Syl::T(2),
            other => panic!("unexpected token {other}"),
        })
        .fold(Vec::new(), |w, x| z23_mul(&w, x))
}

/// Checks a Z2 * Z3 group ball against syllable normal forms: element set and every distance.
pub fn z23_ball_matches(b: &GroupBall) -> Result<(), String> {
    let expected = z23_ball(b.radius);
    if expected.len() != b.space.len() {
        return Err(format!("{} elements, expected {}", b.space.len(), expected.len()));
    }
    let forms: Vec<Z23> = (0..b.space.len()).map(|i| z23_parse(b.space.label(i))).collect();
    for i in 0..forms.len() {
        for j in 0..forms.len() {
            let d = z23_product(&z23_inv(&forms[i]), &forms[j]).len() as u32;
            if d != b.space.d(i, j) {
                return Err(format!("d({}, {}) = {}, expected {d}", b.space.label(i), b.space.label(j), b.space.d(i, j)));
            }
        }
    }
    Ok(())
}

/// Both cocycle identities and the homomorphism axioms, evaluated on raw multiplication tables.
pub fn cocycle_oracle(c: &ComplexOfGroups) -> bool {
    let s = c.base();
    let table = |v: usize| -> Vec<Vec<usize>> {
        let g = c.local(v);
        g.elements().map(|x| g.elements().map(|y| g.mul(x, y)).collect()).collect()
    };
    let tables: Vec<Vec<Vec<usize>>> = s.vertices().map(table).collect();
    let inv = |t: &Vec<Vec<usize>>, x: usize| (0..t.len()).find(|&y| t[x][y] == 0).expect("groups have inverses");
    for a in s.edges() {
        let (dom, cod) = (&tables[s.init(a)], &tables[s.term(a)]);
        let m = c.psi(a).map();
        if m.len() != dom.len() || m.iter().any(|&y| y >= cod.len()) {
            return false;
        }
        for x in 0..dom.len() {
            for y in 0..dom.len() {
                if m[dom[x][y]] != cod[m[x]][m[y]] {
                    return false;
                }
            }
        }
        let mut seen = vec![false; cod.len()];
        for &y in m {
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
    }
    let edges: Vec<usize> = s.edges().collect();
    for &a in &edges {
        for &b in &edges {
            if s.init(a) != s.term(b) {
                continue;
            }
            let Some(ab) = s.compose(a, b) else { return false };
            let t = &tables[s.term(a)];
            let g = match c.twists().get(&(a, b)) {
                Some(&g) if g < t.len() => g,
                _ => return false,
            };
            let gi = inv(t, g);
            for x in 0..tables[s.init(b)].len() {
                let lhs = t[t[g][c.psi(ab).map()[x]]][gi];
                let rhs = c.psi(a).map()[c.psi(b).map()[x]];
                if lhs != rhs {
                    return false;
                }
            }
            for &cc in &edges {
                if s.init(b) != s.term(cc) {
                    continue;
                }
                let Some(bc) = s.compose(b, cc) else { return false };
                let lhs = t[c.psi(a).map()[c.twist(b, cc)]][c.twist(a, bc)];
                let rhs = t[c.twist(a, b)][c.twist(ab, cc)];
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Exhaustive asdim oracle: enumerates every set partition with blocks of diameter at most `d`,
/// then tries every colouring of the blocks with `n + 1` families.
pub fn asdim_oracle(x: &FiniteMetricSpace, n: usize, r: u32, d: u32) -> bool {
    fn colour(blocks: &[Vec<usize>], x: &FiniteMetricSpace, r: u32, k: usize, colours: &mut Vec<usize>) -> bool {
        let i = colours.len();
        if i == blocks.len() {
            return true;
        }
        for c in 0..k {
            let clash = (0..i).any(|j| colours[j] == c && x.set_distance(&blocks[i], &blocks[j]).is_some_and(|dist| dist <= r));
            if !clash {
                colours.push(c);
                if colour(blocks, x, r, k, colours) {
                    return true;
                }
                colours.pop();
            }
        }
        false
    }
    fn partitions(p: usize, x: &FiniteMetricSpace, n: usize, r: u32, d: u32, blocks: &mut Vec<Vec<usize>>) -> bool {
        if p == x.len() {
            return colour(blocks, x, r, n + 1, &mut Vec::new());
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&q| x.d(p, q) <= d) {
                blocks[b].push(p);
                if partitions(p + 1, x, n, r, d, blocks) {
                    return true;
                }
                blocks[b].pop();
            }
        }
        blocks.push(vec![p]);
        let found = partitions(p + 1, x, n, r, d, blocks);
        blocks.pop();
        found
    }
    partitions(0, x, n, r, d, &mut Vec::new())
}
