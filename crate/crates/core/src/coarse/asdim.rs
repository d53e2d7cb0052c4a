//! Asymptotic-dimension certificates at a fixed scale.
//!
//! A certificate for `asdim X <= n` at scale `(R, D)` is a cover of `X` by
//! `n + 1` families of sets, each set of diameter at most `D`, with distinct
//! sets of the same family more than `R` apart.
//!
//! The search treats the problem as an `(n + 1)`-colouring of the points in
//! which every R-connected component of a colour class has diameter at most
//! `D`; the components of each colour then form a family. Any certificate
//! yields such a colouring by assigning each point one family containing it,
//! so the search is complete.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metric::FiniteMetricSpace;
use crate::report::{ValidationReport, ViolationKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsdimCertificate {
    pub scale: u32,
    pub bound: u32,
    /// `families[i][j]` is the `j`-th set of the `i`-th family.
    pub families: Vec<Vec<Vec<usize>>>,
}

impl AsdimCertificate {
    pub fn dimension(&self) -> usize {
        self.families.len().saturating_sub(1)
    }

    /// The largest diameter of a set in the certificate.
    pub fn max_diameter(&self, x: &FiniteMetricSpace) -> u32 {
        self.families.iter().flatten().map(|s| x.set_diameter(s)).max().unwrap_or(0)
    }

    /// Renames points through `map`, e.g. into a larger space.
    pub fn transport(&self, map: &[usize]) -> AsdimCertificate {
        let families = self.families.iter().map(|f| f.iter().map(|s| s.iter().map(|&p| map[p]).collect()).collect()).collect();
        AsdimCertificate { scale: self.scale, bound: self.bound, families }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Search nodes allowed per top-level branch; `None` for no limit.
    pub node_limit: Option<u64>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_limit: Some(5_000_000) }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        SearchLimits { node_limit: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(AsdimCertificate),
    /// The search space was exhausted: no certificate exists at these parameters.
    Impossible,
    LimitReached {
        nodes: u64,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&AsdimCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Checks cover, boundedness, R-disjointness and, if given, the family count `n + 1`.
pub fn check_certificate(x: &FiniteMetricSpace, cert: &AsdimCertificate, n: Option<usize>) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Some(n) = n {
        if cert.families.len() != n + 1 {
            report.push(ViolationKind::FamilyCount, format!("expected {} families, found {}", n + 1, cert.families.len()));
        }
    }
    let mut covered = vec![false; x.len()];
    for (fi, family) in cert.families.iter().enumerate() {
        for (si, set) in family.iter().enumerate() {
            if let Some(&p) = set.iter().find(|&&p| p >= x.len()) {
                report.push(ViolationKind::ParameterMismatch, format!("family {fi} set {si} names missing point {p}"));
                continue;
            }
            for &p in set {
                covered[p] = true;
            }
            let diam = x.set_diameter(set);
            if diam > cert.bound {
                report.push(ViolationKind::NotBounded, format!("family {fi} set {si} has diameter {diam} > {}", cert.bound));
            }
        }
        for (si, a) in family.iter().enumerate() {
            for (sj, b) in family.iter().enumerate().skip(si + 1) {
                if a.iter().chain(b).any(|&p| p >= x.len()) {
                    continue;
                }
                if let Some(dist) = x.set_distance(a, b) {
                    if dist <= cert.scale {
                        report.push(
                            ViolationKind::NotDisjoint,
                            format!("family {fi}: sets {si} and {sj} are at distance {dist} <= {}", cert.scale),
                        );
                    }
                }
            }
        }
    }
    let missing: Vec<usize> = (0..x.len()).filter(|&p| !covered[p]).collect();
    if !missing.is_empty() {
        report.push(ViolationKind::NotCovered, format!("points not covered: {}", fmt_points(x, &missing)));
    }
    report
}

fn fmt_points(x: &FiniteMetricSpace, points: &[usize]) -> String {
    let shown: Vec<&str> = points.iter().take(8).map(|&p| x.label(p)).collect();
    let more = if points.len() > 8 { format!(" and {} more", points.len() - 8) } else { String::new() };
    format!("{}{}", shown.join(", "), more)
}

/// Checks that one pair `(R, D)` serves a whole family of spaces.
pub fn check_uniform(xs: &[FiniteMetricSpace], n: usize, d: u32, r: u32, certs: &[AsdimCertificate]) -> ValidationReport {
    let mut report = ValidationReport::new();
    if xs.len() != certs.len() {
        report.push(ViolationKind::ParameterMismatch, format!("{} spaces but {} certificates", xs.len(), certs.len()));
        return report;
    }
    for (i, (x, c)) in xs.iter().zip(certs).enumerate() {
        if c.scale != r || c.bound != d {
            report.push(
                ViolationKind::ParameterMismatch,
                format!("member {i} uses (R, D) = ({}, {}), expected ({r}, {d})", c.scale, c.bound),
            );
        }
        let check = AsdimCertificate { scale: r, bound: d, families: c.families.clone() };
        for mut v in check_certificate(x, &check, Some(n)).violations {
            v.detail = format!("member {i}: {}", v.detail);
            report.violations.push(v);
        }
    }
    report
}

struct Layout {
    order: Vec<usize>,
    near: Vec<Vec<usize>>,
}

impl Layout {
    /// R-neighbourhoods, and a breadth-first order over the R-neighbour graph.
    fn new(x: &FiniteMetricSpace, r: u32) -> Self {
        let len = x.len();
        let near: Vec<Vec<usize>> = (0..len).map(|p| (0..len).filter(|&q| q != p && x.d(p, q) <= r).collect()).collect();
        let mut order = Vec::with_capacity(len);
        let mut seen = vec![false; len];
        for s in 0..len {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut head = order.len();
            order.push(s);
            while head < order.len() {
                let p = order[head];
                head += 1;
                for &q in &near[p] {
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                    }
                }
            }
        }
        Layout { order, near }
    }
}

struct Search<'a> {
    x: &'a FiniteMetricSpace,
    bound: u32,
    colors: u8,
    order: &'a [usize],
    near: &'a [Vec<usize>],
    color: Vec<u8>,
    nodes: u64,
    limit: u64,
    stamp: Vec<u32>,
    epoch: u32,
}

const UNSET: u8 = u8::MAX;

enum Stop {
    Limit,
    Superseded,
}

impl<'a> Search<'a> {
    fn new(x: &'a FiniteMetricSpace, layout: &'a Layout, n: usize, d: u32, limit: Option<u64>) -> Self {
        let len = x.len();
        Search {
            x,
            bound: d,
            colors: (n + 1).min(UNSET as usize - 1) as u8,
            order: &layout.order,
            near: &layout.near,
            color: vec![UNSET; len],
            nodes: 0,
            limit: limit.unwrap_or(u64::MAX),
            stamp: vec![0; len],
            epoch: 0,
        }
    }

    /// Whether the component of `p` in its colour class stays within the bound.
    fn admissible(&mut self, p: usize) -> bool {
        let c = self.color[p];
        self.epoch += 1;
        let mut comp = vec![p];
        self.stamp[p] = self.epoch;
        let mut head = 0;
        while head < comp.len() {
            let q = comp[head];
            head += 1;
            for &s in &self.near[q] {
                if self.color[s] == c && self.stamp[s] != self.epoch {
                    if self.x.d(p, s) > self.bound {
                        return false;
                    }
                    self.stamp[s] = self.epoch;
                    comp.push(s);
                }
            }
        }
        for (i, &a) in comp.iter().enumerate() {
            for &b in &comp[i + 1..] {
                if self.x.d(a, b) > self.bound {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, idx: usize, used: u8, cancel: &dyn Fn() -> bool) -> Result<bool, Stop> {
        if idx == self.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Stop::Limit);
        }
        if self.nodes.is_multiple_of(4096) && cancel() {
            return Err(Stop::Superseded);
        }
        let p = self.order[idx];
        let top = (used + 1).min(self.colors);
        for c in 0..top {
            self.color[p] = c;
            if self.admissible(p) && self.dfs(idx + 1, used.max(c + 1), cancel)? {
                return Ok(true);
            }
        }
        self.color[p] = UNSET;
        Ok(false)
    }

    /// Admissible colourings of the first `depth` points in search order.
    fn prefixes(&mut self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.collect_prefixes(0, 0, depth, &mut out);
        out
    }

    fn collect_prefixes(&mut self, idx: usize, used: u8, depth: usize, out: &mut Vec<Vec<u8>>) {
        if idx == depth {
            out.push(self.order[..depth].iter().map(|&p| self.color[p]).collect());
            return;
        }
        let p = self.order[idx];
        let top = (used + 1).min(self.colors);
        for c in 0..top {
            self.color[p] = c;
            if self.admissible(p) {
                self.collect_prefixes(idx + 1, used.max(c + 1), depth, out);
            }
        }
        self.color[p] = UNSET;
    }

    fn certificate(&self, scale: u32) -> AsdimCertificate {
        let mut families = vec![Vec::new(); self.colors as usize];
        let mut done = vec![false; self.x.len()];
        for s in 0..self.x.len() {
            if done[s] {
                continue;
            }
            let c = self.color[s];
            let mut comp = vec![s];
            done[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let q = comp[head];
                head += 1;
                for &t in &self.near[q] {
                    if self.color[t] == c && !done[t] {
                        done[t] = true;
                        comp.push(t);
                    }
                }
            }
            comp.sort_unstable();
            families[c as usize].push(comp);
        }
        AsdimCertificate { scale, bound: self.bound, families }
    }
}

/// Searches for a certificate with `n + 1` families at scale `(r, d)`.
///
/// Branches below a short prefix of the search order run in parallel; the
/// result is the certificate of the first successful branch in search order,
/// so it does not depend on scheduling.
pub fn find_asdim_certificate(x: &FiniteMetricSpace, n: usize, r: u32, d: u32, limits: SearchLimits) -> SearchOutcome {
    if x.is_empty() {
        return SearchOutcome::Found(AsdimCertificate { scale: r, bound: d, families: vec![Vec::new(); n + 1] });
    }
    let layout = Layout::new(x, r);
    let mut root = Search::new(x, &layout, n, d, limits.node_limit);
    let depth = root.order.len().min(if n == 0 { 0 } else { 10 });
    let prefixes = root.prefixes(depth);
    let winner = AtomicUsize::new(usize::MAX);
    let results: Vec<(Result<bool, Stop>, u64, Option<AsdimCertificate>)> = prefixes
        .par_iter()
        .enumerate()
        .map(|(i, prefix)| {
            if winner.load(Ordering::Relaxed) < i {
                return (Err(Stop::Superseded), 0, None);
            }
            let mut s = Search::new(x, &layout, n, d, limits.node_limit);
            let mut used = 0;
            for (k, &c) in prefix.iter().enumerate() {
                s.color[s.order[k]] = c;
                used = used.max(c + 1);
            }
            let cancel = || winner.load(Ordering::Relaxed) < i;
            let res = s.dfs(depth, used, &cancel);
            let cert = match res {
                Ok(true) => {
                    winner.fetch_min(i, Ordering::Relaxed);
                    Some(s.certificate(r))
                }
                _ => None,
            };
            (res, s.nodes, cert)
        })
        .collect();
    let mut nodes = 0;
    let mut limited = false;
    for (res, k, cert) in results {
        nodes += k;
        match res {
            Ok(true) => return SearchOutcome::Found(cert.expect("found")),
            Ok(false) => {}
            Err(Stop::Limit) => limited = true,
            Err(Stop::Superseded) => {}
        }
    }
    if limited {
        SearchOutcome::LimitReached { nodes }
    } else {
        SearchOutcome::Impossible
    }
}

/// The outcome for each `n = 0, 1, ...` up to the first success or `max_n`.
#[derive(Clone, Debug)]
pub struct DimensionProbe {
    pub scale: u32,
    pub bound: u32,
    pub outcomes: Vec<SearchOutcome>,
}

impl DimensionProbe {
    /// The least `n` with a certificate, if it was reached.
    pub fn achieved(&self) -> Option<usize> {
        self.outcomes.iter().position(|o| matches!(o, SearchOutcome::Found(_)))
    }

    /// Whether every smaller `n` was proven impossible (no limit was hit).
    pub fn minimal_is_proven(&self) -> bool {
        match self.achieved() {
            Some(m) => self.outcomes[..m].iter().all(|o| *o == SearchOutcome::Impossible),
            None => false,
        }
    }
}

pub fn probe_dimension(x: &FiniteMetricSpace, r: u32, d: u32, max_n: usize, limits: SearchLimits) -> DimensionProbe {
    let mut outcomes = Vec::new();
    for n in 0..=max_n {
        let o = find_asdim_certificate(x, n, r, d, limits);
        let done = matches!(o, SearchOutcome::Found(_));
        outcomes.push(o);
        if done {
            break;
        }
    }
    DimensionProbe { scale: r, bound: d, outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let x = FiniteMetricSpace::single_point();
        let c = find_asdim_certificate(&x, 0, 3, 1, SearchLimits::default());
        let c = c.certificate().unwrap();
        assert!(check_certificate(&x, c, Some(0)).is_valid());
    }

    #[test]
    fn path_needs_two_families() {
        let x = FiniteMetricSpace::path(49);
        assert_eq!(find_asdim_certificate(&x, 0, 5, 10, SearchLimits::unlimited()), SearchOutcome::Impossible);
        let out = find_asdim_certificate(&x, 1, 5, 10, SearchLimits::unlimited());
        let c = out.certificate().unwrap();
        assert!(check_certificate(&x, c, Some(1)).is_valid());
        assert!(c.max_diameter(&x) <= 10);
    }

    #[test]
    fn disjointness_is_strict() {
        let x = FiniteMetricSpace::path(4);
        let cert = AsdimCertificate { scale: 2, bound: 1, families: vec![vec![vec![0], vec![2, 3]], vec![vec![1]]] };
        let report = check_certificate(&x, &cert, Some(1));
        assert!(report.has(ViolationKind::NotDisjoint));
        let cert = AsdimCertificate { scale: 1, ..cert };
        assert!(check_certificate(&x, &cert, Some(1)).is_valid());
    }

    #[test]
    fn uniform_family_flags_mismatched_bound() {
        let xs: Vec<_> = (10..=12).map(FiniteMetricSpace::path).collect();
        let mut certs: Vec<_> =
            xs.iter().map(|x| find_asdim_certificate(x, 1, 2, 4, SearchLimits::default()).certificate().unwrap().clone()).collect();
        assert!(check_uniform(&xs, 1, 4, 2, &certs).is_valid());
        certs[1].bound = 6;
        assert!(check_uniform(&xs, 1, 4, 2, &certs).has(ViolationKind::ParameterMismatch));
    }
}
