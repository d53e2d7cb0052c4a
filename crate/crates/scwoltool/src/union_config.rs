//! Configuration files for `union-check`.

use std::path::Path;

use scwol_core::metric::{FiniteMetricSpace, MetricFile};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Union Theorem: pieces with uniform certificates, a set `Y_r`, and an `r`-disjointness check.
    Union,
    /// Finite Union Theorem: the union should reach the largest piece dimension.
    Finite,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathShape {
    /// Number of points of a path graph.
    pub path: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum MetricSource {
    /// A metric JSON file, relative to the config file.
    File(String),
    Path(PathShape),
    Inline(MetricFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: usize,
    /// Inclusive.
    pub to: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    Points(Vec<usize>),
    Range(Range),
}

impl PointSet {
    pub fn points(&self) -> Vec<usize> {
        match self {
            PointSet::Points(p) => p.clone(),
            PointSet::Range(r) => (r.from..=r.to).collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionConfig {
    pub mode: Mode,
    pub metric: MetricSource,
    pub pieces: Vec<PointSet>,
    /// The set `Y_r` (union mode).
    pub y_r: Option<PointSet>,
    /// `n`: certificates use `n + 1` families (union mode).
    pub families: Option<usize>,
    pub scale: u32,
    pub bound: u32,
    /// The disjointness scale `r` of the pieces minus `Y_r` (union mode).
    pub r: Option<u32>,
    /// Largest `n` tried per piece (finite mode).
    pub nmax: Option<usize>,
}

impl UnionConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn space(&self, dir: &Path) -> Result<FiniteMetricSpace, String> {
        match &self.metric {
            MetricSource::File(f) => {
                let path = dir.join(f);
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                FiniteMetricSpace::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
            MetricSource::Path(s) if s.path == 0 => Err("a path needs at least one point".into()),
            MetricSource::Path(s) => Ok(FiniteMetricSpace::path(s.path)),
            MetricSource::Inline(m) => {
                let file =
                    MetricFile { labels: m.labels.clone(), points: m.points, distances: m.distances.clone(), edges: m.edges.clone() };
                file.into_space().map_err(|e| e.to_string())
            }
        }
    }
}
