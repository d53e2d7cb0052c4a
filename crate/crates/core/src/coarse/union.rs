//! Scale-local harnesses for the Union Theorem and the Finite Union Theorem,
//! and the dimension-bound report for groups acting on finite-dimensional spaces.

use serde::Serialize;

use super::asdim::{find_asdim_certificate, probe_dimension, AsdimCertificate, SearchLimits, SearchOutcome};
use crate::metric::FiniteMetricSpace;
use crate::report::{ValidationReport, ViolationKind};

#[derive(Clone, Debug)]
pub struct UnionReport {
    /// Violated hypotheses; empty when all hold.
    pub hypotheses: ValidationReport,
    /// A certificate for the whole space at `n` with scale `R' >= R` and the recorded bound `D'`.
    pub conclusion: Option<AsdimCertificate>,
}

impl UnionReport {
    pub fn passed(&self) -> bool {
        self.hypotheses.is_valid() && self.conclusion.is_some()
    }
}

fn subspace_certificate(
    x: &FiniteMetricSpace,
    set: &[usize],
    n: usize,
    r: u32,
    d: u32,
    limits: SearchLimits,
) -> Result<AsdimCertificate, String> {
    let sub = x.subspace(set).map_err(|e| e.to_string())?;
    match find_asdim_certificate(&sub, n, r, d, limits) {
        SearchOutcome::Found(c) => Ok(c.transport(set)),
        SearchOutcome::Impossible => Err("no certificate exists".into()),
        SearchOutcome::LimitReached { nodes } => Err(format!("search limit reached after {nodes} nodes")),
    }
}

/// Checks the hypotheses of the Union Theorem for `X = ∪ pieces` at fixed
/// scales and then searches for a certificate for `X` at the same `n`, scale
/// `R` and the least bound `D' >= D` that works.
#[allow(clippy::too_many_arguments)]
pub fn union_harness(
    x: &FiniteMetricSpace,
    pieces: &[Vec<usize>],
    y_r: &[usize],
    n: usize,
    r: u32,
    d: u32,
    small_r: u32,
    limits: SearchLimits,
) -> UnionReport {
    let mut hyp = ValidationReport::new();
    let mut covered = vec![false; x.len()];
    for piece in pieces {
        for &p in piece.iter().filter(|&&p| p < x.len()) {
            covered[p] = true;
        }
    }
    let missing = covered.iter().filter(|c| !**c).count();
    if missing > 0 {
        hyp.push(ViolationKind::NotCovered, format!("{missing} points lie in no piece"));
    }
    for (i, piece) in pieces.iter().enumerate() {
        match subspace_certificate(x, piece, n, r, d, limits) {
            Ok(_) => {}
            Err(e) => hyp.push(ViolationKind::NotBounded, format!("piece {i} has no certificate at (n, R, D) = ({n}, {r}, {d}): {e}")),
        }
    }
    if let Err(e) = subspace_certificate(x, y_r, n, r, d, limits) {
        hyp.push(ViolationKind::NotBounded, format!("Y_r has no certificate at (n, R, D) = ({n}, {r}, {d}): {e}"));
    }
    let in_y: Vec<bool> = (0..x.len()).map(|p| y_r.contains(&p)).collect();
    let trimmed: Vec<Vec<usize>> = pieces.iter().map(|s| s.iter().copied().filter(|&p| p < x.len() && !in_y[p]).collect()).collect();
    for i in 0..trimmed.len() {
        for j in i + 1..trimmed.len() {
            if let Some(dist) = x.set_distance(&trimmed[i], &trimmed[j]) {
                if dist <= small_r {
                    hyp.push(ViolationKind::NotDisjoint, format!("pieces {i} and {j} minus Y_r are at distance {dist} <= r = {small_r}"));
                }
            }
        }
    }
    let conclusion = (d..=x.diameter().max(d)).find_map(|dd| find_asdim_certificate(x, n, r, dd, limits).certificate().cloned());
    UnionReport { hypotheses: hyp, conclusion }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteUnionReport {
    pub scale: u32,
    pub bound: u32,
    /// Least `n` found for each piece at `(R, D)`.
    pub piece_dims: Vec<Option<usize>>,
    /// Least `n` found for the union, and the bound `D'` it needed.
    pub union_dim: Option<usize>,
    pub union_bound: Option<u32>,
}

impl FiniteUnionReport {
    /// Whether the union achieved `max n_i` at the same scale.
    pub fn holds(&self) -> bool {
        let target = self.piece_dims.iter().copied().collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0));
        matches!((target, self.union_dim), (Some(t), Some(u)) if u <= t)
    }
}

/// Probes each piece at `(R, D)`, then the union at the same `R` with
/// bounds `D' = D, D + 1, ...` until it reaches the largest piece dimension.
pub fn finite_union(x: &FiniteMetricSpace, pieces: &[Vec<usize>], r: u32, d: u32, max_n: usize, limits: SearchLimits) -> FiniteUnionReport {
    let piece_dims: Vec<Option<usize>> =
        pieces.iter().map(|s| x.subspace(s).ok().and_then(|sub| probe_dimension(&sub, r, d, max_n, limits).achieved())).collect();
    let target = piece_dims.iter().copied().collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0));
    let mut union_dim = None;
    let mut union_bound = None;
    if let Some(t) = target {
        for dd in d..=x.diameter().max(d) {
            if let Some(c) = find_asdim_certificate(x, t, r, dd, limits).certificate() {
                union_dim = Some(c.dimension());
                union_bound = Some(dd);
                break;
            }
        }
    }
    FiniteUnionReport { scale: r, bound: d, piece_dims, union_dim, union_bound }
}

/// Compares an achieved dimension with `(n + 1)(k + 1) - 1` and with `n + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub achieved: usize,
    pub bound: usize,
    pub sharp_bound: usize,
    pub within_bound: bool,
    pub within_sharp_bound: bool,
}

pub fn dimension_bound_report(n: usize, k: usize, achieved: usize) -> BoundReport {
    let bound = (n + 1) * (k + 1) - 1;
    BoundReport { n, k, achieved, bound, sharp_bound: n + k, within_bound: achieved <= bound, within_sharp_bound: achieved <= n + k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::asdim::check_certificate;

    #[test]
    fn bounds() {
        let r = dimension_bound_report(0, 1, 1);
        assert_eq!((r.bound, r.sharp_bound, r.within_bound, r.within_sharp_bound), (1, 1, true, true));
        let r = dimension_bound_report(1, 1, 3);
        assert_eq!((r.bound, r.sharp_bound, r.within_bound, r.within_sharp_bound), (3, 2, true, false));
        assert_eq!(dimension_bound_report(0, 0, 0).bound, 0);
    }

    #[test]
    fn path_halves() {
        let x = FiniteMetricSpace::path(40);
        let left: Vec<usize> = (0..24).collect();
        let right: Vec<usize> = (16..40).collect();
        let middle: Vec<usize> = (12..28).collect();
        let rep = union_harness(&x, &[left.clone(), right.clone()], &middle, 1, 3, 6, 3, SearchLimits::default());
        assert!(rep.passed(), "{}", rep.hypotheses);
        let c = rep.conclusion.unwrap();
        assert!(check_certificate(&x, &c, Some(1)).is_valid());
        let close: Vec<usize> = vec![20];
        let rep = union_harness(&x, &[left, right], &close, 1, 3, 6, 3, SearchLimits::default());
        assert!(rep.hypotheses.has(ViolationKind::NotDisjoint));
    }
}
