//! Finite metric spaces with integer distances.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("nonzero diagonal entry at point {0}")]
    NonzeroDiagonal(usize),
    #[error("zero distance between distinct points {0} and {1}")]
    ZeroOffDiagonal(usize, usize),
    #[error("asymmetric distances between points {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails for points {0}, {1}, {2}")]
    Triangle(usize, usize, usize),
    #[error("graph edge ({0}, {1}) references a missing point")]
    EdgeOutOfRange(usize, usize),
    #[error("graph is disconnected ({} components)", .0.len())]
    Disconnected(Vec<Vec<usize>>),
    #[error("label count {labels} does not match point count {points}")]
    LabelCount { labels: usize, points: usize },
    #[error("metric file must give either `distances` or `edges`")]
    MissingData,
    #[error("metric file is not valid JSON: {0}")]
    Json(String),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("metric files are limited to {MAX_POINTS} points, got {0}")]
    TooLarge(usize),
}

/// Upper bound on the number of points accepted from a metric file.
pub const MAX_POINTS: usize = 4096;

/// A finite set of labelled points with a symmetric integer distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<u32>,
}

impl FiniteMetricSpace {
    /// Checks symmetry, zero diagonal, positivity off the diagonal and the triangle inequality.
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if labels.len() != n {
            return Err(MetricError::LabelCount { labels: labels.len(), points: n });
        }
        let mut dist = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare { row, len: r.len(), expected: n });
            }
            dist.extend_from_slice(r);
        }
        let space = FiniteMetricSpace { labels, dist };
        space.check()?;
        Ok(space)
    }

    fn check(&self) -> Result<(), MetricError> {
        let n = self.len();
        for x in 0..n {
            if self.d(x, x) != 0 {
                return Err(MetricError::NonzeroDiagonal(x));
            }
            for y in 0..n {
                if self.d(x, y) != self.d(y, x) {
                    return Err(MetricError::Asymmetric(x, y));
                }
                if x != y && self.d(x, y) == 0 {
                    return Err(MetricError::ZeroOffDiagonal(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if u64::from(self.d(x, z)) > u64::from(self.d(x, y)) + u64::from(self.d(y, z)) {
                        return Err(MetricError::Triangle(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// Shortest-path metric of an undirected graph with unit edge lengths.
    pub fn from_graph(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, MetricError> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(MetricError::EdgeOutOfRange(a, b));
            }
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let components = components(&adj);
        if components.len() > 1 {
            return Err(MetricError::Disconnected(components));
        }
        let mut dist = vec![u32::MAX; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let dx = row[x];
                for &y in &adj[x] {
                    if row[y] == u32::MAX {
                        row[y] = dx + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// The path graph on `n` points `0..n`.
    pub fn path(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_graph(labels, &edges).expect("path graphs are connected")
    }

    /// The ball of radius `radius` about a degree-`p` vertex in the tree whose
    /// vertex degrees alternate between `p` and `q` along every path.
    ///
    /// Points are numbered breadth first from the center, which is point 0.
    pub fn biregular_tree_ball(p: usize, q: usize, radius: u32) -> Self {
        let mut depth = vec![0u32];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < depth.len() {
            let v = head;
            head += 1;
            if depth[v] == radius {
                continue;
            }
            let degree = if depth[v] % 2 == 0 { p } else { q };
            let children = if v == 0 { degree } else { degree.saturating_sub(1) };
            for _ in 0..children {
                depth.push(depth[v] + 1);
                edges.push((v, depth.len() - 1));
            }
        }
        let labels = (0..depth.len()).map(|i| i.to_string()).collect();
        Self::from_graph(labels, &edges).expect("trees are connected")
    }

    pub fn single_point() -> Self {
        FiniteMetricSpace { labels: vec!["0".into()], dist: vec![0] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.len() + y]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.dist.chunks(self.len().max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn set_diameter(&self, set: &[usize]) -> u32 {
        let mut best = 0;
        for (i, &x) in set.iter().enumerate() {
            for &y in &set[i + 1..] {
                best = best.max(self.d(x, y));
            }
        }
        best
    }

    /// Distance between two nonempty point sets; `None` if either is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Option<u32> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.d(x, y)).min()
    }

    /// Points within distance `r` of `x`, in index order.
    pub fn ball(&self, x: usize, r: u32) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.d(x, y) <= r).collect()
    }

    /// The induced metric on `points` (kept in the given order).
    pub fn subspace(&self, points: &[usize]) -> Result<Self, MetricError> {
        if let Some(&bad) = points.iter().find(|&&p| p >= self.len()) {
            return Err(MetricError::PointOutOfRange(bad));
        }
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let mut dist = Vec::with_capacity(points.len() * points.len());
        for &x in points {
            for &y in points {
                dist.push(self.d(x, y));
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Wedge sum: glue `self` at point `p` to `other` at point `q`.
    ///
    /// Points of `self` keep their indices; points of `other` except `q` follow.
    /// The second component of the result maps each point of `other` to its new index.
    pub fn wedge(&self, p: usize, other: &FiniteMetricSpace, q: usize) -> (Self, Vec<usize>) {
        let n = self.len();
        let mut map = vec![0; other.len()];
        let mut next = n;
        for (y, slot) in map.iter_mut().enumerate() {
            if y == q {
                *slot = p;
            } else {
                *slot = next;
                next += 1;
            }
        }
        let total = next;
        let mut labels = self.labels.clone();
        labels.resize(total, String::new());
        for y in 0..other.len() {
            if y != q {
                labels[map[y]] = format!("{}'", other.labels[y]);
            }
        }
        let mut back = vec![None; total];
        for (y, &m) in map.iter().enumerate() {
            if y != q {
                back[m] = Some(y);
            }
        }
        let d = |x: usize, y: usize| -> u32 {
            match (back[x], back[y]) {
                (None, None) => self.d(x, y),
                (Some(a), Some(b)) => other.d(a, b),
                (None, Some(b)) => self.d(x, p) + other.d(q, b),
                (Some(a), None) => other.d(a, q) + self.d(p, y),
            }
        };
        let mut dist = Vec::with_capacity(total * total);
        for x in 0..total {
            for y in 0..total {
                dist.push(d(x, y));
            }
        }
        (FiniteMetricSpace { labels, dist }, map)
    }

    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        let file: MetricFile = serde_json::from_str(text).map_err(|e| MetricError::Json(e.to_string()))?;
        file.into_space()
    }

    pub fn to_json(&self) -> String {
        let file = MetricFile { labels: Some(self.labels.clone()), points: None, distances: Some(self.rows()), edges: None };
        serde_json::to_string_pretty(&file).expect("metric serialization cannot fail")
    }
}

/// On-disk metric description: point labels plus either a distance matrix
/// or an edge list from which the graph metric is inferred.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
}

impl MetricFile {
    pub fn into_space(self) -> Result<FiniteMetricSpace, MetricError> {
        let points =
            self.labels.as_ref().map(Vec::len).or(self.points).or(self.distances.as_ref().map(Vec::len)).ok_or(MetricError::MissingData)?;
        if points > MAX_POINTS {
            return Err(MetricError::TooLarge(points));
        }
        if let (Some(l), Some(p)) = (&self.labels, self.points) {
            if l.len() != p {
                return Err(MetricError::LabelCount { labels: l.len(), points: p });
            }
        }
        let labels = self.labels.unwrap_or_else(|| (0..points).map(|i| i.to_string()).collect());
        match (self.distances, self.edges) {
            (Some(rows), None) => FiniteMetricSpace::from_matrix(labels, rows),
            (None, Some(edges)) => FiniteMetricSpace::from_graph(labels, &edges),
            _ => Err(MetricError::MissingData),
        }
    }
}

pub(crate) fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
