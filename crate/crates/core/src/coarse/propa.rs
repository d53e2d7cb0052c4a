//! Property A witnesses: families of finitely supported probability measures
//! `x -> a^n_x` with bounded support and small variation between nearby points.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::metric::FiniteMetricSpace;
use crate::report::{ValidationReport, ViolationKind};

pub type Rational = Ratio<i128>;

/// A measure for every point, as sparse `(point, mass)` lists sorted by point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropAWitness {
    pub index: u32,
    pub support_radius: u32,
    pub measures: Vec<Vec<(usize, Rational)>>,
}

/// `a^n_x` is the uniform probability measure on the ball `B_n(x)`.
pub fn ball_averaging_witness(x: &FiniteMetricSpace, n: u32) -> PropAWitness {
    let measures = (0..x.len())
        .map(|p| {
            let ball = x.ball(p, n);
            let mass = Rational::new(1, ball.len() as i128);
            ball.into_iter().map(|q| (q, mass)).collect()
        })
        .collect();
    PropAWitness { index: n, support_radius: n, measures }
}

/// `||a - b||_1` for sparse measures sorted by point.
pub fn l1_distance(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Rational {
    let (mut i, mut j) = (0, 0);
    let mut total = Rational::zero();
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(p, u)), Some(&(q, v))) if p == q => {
                total += (u - v).abs();
                i += 1;
                j += 1;
            }
            (Some(&(p, u)), Some(&(q, _))) if p < q => {
                total += u.abs();
                i += 1;
            }
            (Some(&(_, u)), None) => {
                total += u.abs();
                i += 1;
            }
            (_, Some(&(_, v))) => {
                total += v.abs();
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    /// `sup ||a_x - a_y||_1` over the examined pairs with `d(x, y) <= K`.
    #[serde(serialize_with = "ser_ratio")]
    pub max_variation: Rational,
    /// A pair attaining the maximum.
    pub worst_pair: Option<(usize, usize)>,
    pub support_ok: bool,
    pub probability_ok: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact variation over all pairs `x != y` with `d(x, y) <= K`, plus the support and mass conditions.
pub fn check_witness(x: &FiniteMetricSpace, w: &PropAWitness, k: u32) -> WitnessCheck {
    let all: Vec<usize> = (0..x.len()).collect();
    check_witness_at(x, w, k, &all)
}

/// As [`check_witness`], with the first point of each pair restricted to `points`.
pub fn check_witness_at(x: &FiniteMetricSpace, w: &PropAWitness, k: u32, points: &[usize]) -> WitnessCheck {
    let support_ok = w.measures.iter().enumerate().all(|(p, m)| m.iter().all(|&(q, _)| q < x.len() && x.d(p, q) <= w.support_radius));
    let probability_ok = w.measures.len() == x.len()
        && w.measures
            .iter()
            .all(|m| m.iter().all(|(_, v)| !v.is_negative()) && m.iter().map(|(_, v)| *v).sum::<Rational>() == Rational::one());
    let best = points
        .par_iter()
        .filter_map(|&p| {
            (0..x.len())
                .filter(|&q| q != p && x.d(p, q) <= k)
                .map(|q| (l1_distance(&w.measures[p], &w.measures[q]), (p, q)))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        })
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    WitnessCheck { max_variation: best.map_or(Rational::zero(), |b| b.0), worst_pair: best.map(|b| b.1), support_ok, probability_ok }
}

/// Lists violations of the support and probability conditions.
pub fn validate_witness(x: &FiniteMetricSpace, w: &PropAWitness) -> ValidationReport {
    let mut report = ValidationReport::new();
    if w.measures.len() != x.len() {
        report.push(ViolationKind::ParameterMismatch, format!("{} measures for {} points", w.measures.len(), x.len()));
    }
    for (p, m) in w.measures.iter().enumerate() {
        let total: Rational = m.iter().map(|(_, v)| *v).sum();
        if total != Rational::one() || m.iter().any(|(_, v)| v.is_negative()) {
            report.push(ViolationKind::NotProbability, format!("a_{} has total mass {total}", x.label(p.min(x.len().saturating_sub(1)))));
        }
        if let Some(&(q, _)) = m.iter().find(|&&(q, _)| q >= x.len() || x.d(p, q) > w.support_radius) {
            report.push(ViolationKind::SupportTooLarge, format!("a_{p} charges point {q} outside B_{}({p})", w.support_radius));
        }
    }
    report
}

/// Points whose `n`-ball lies inside the ball `B_radius(center)`.
pub fn interior_points(x: &FiniteMetricSpace, center: usize, radius: u32, n: u32) -> Vec<usize> {
    match radius.checked_sub(n) {
        Some(r) => x.ball(center, r),
        None => Vec::new(),
    }
}

/// Maximal variation of the ball-averaging witness for each `n` in `ns`.
pub fn variation_profile(x: &FiniteMetricSpace, ns: impl IntoIterator<Item = u32>, k: u32) -> Vec<(u32, Rational)> {
    ns.into_iter().map(|n| (n, check_witness(x, &ball_averaging_witness(x, n), k).max_variation)).collect()
}

/// Strictly decreasing while positive, and zero from the first zero on.
pub fn strictly_decreasing_to_zero(values: &[Rational]) -> bool {
    values.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1] < w[0] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_is_worst_case() {
        let x = FiniteMetricSpace::path(2);
        let w = PropAWitness { index: 0, support_radius: 0, measures: vec![vec![(0, Rational::one())], vec![(1, Rational::one())]] };
        let c = check_witness(&x, &w, 1);
        assert_eq!(c.max_variation, Rational::from_integer(2));
        assert!(c.support_ok && c.probability_ok);
    }

    #[test]
    fn two_points_average_to_zero_variation() {
        let x = FiniteMetricSpace::path(2);
        let c = check_witness(&x, &ball_averaging_witness(&x, 1), 1);
        assert_eq!(c.max_variation, Rational::zero());
    }

    #[test]
    fn mass_outside_support_is_flagged() {
        let x = FiniteMetricSpace::path(3);
        let mut w = ball_averaging_witness(&x, 1);
        w.measures[0] = vec![(2, Rational::one())];
        assert!(!check_witness(&x, &w, 1).support_ok);
        assert!(validate_witness(&x, &w).has(ViolationKind::SupportTooLarge));
    }

    #[test]
    fn path_interior_and_full_variation() {
        let x = FiniteMetricSpace::path(49);
        let w = ball_averaging_witness(&x, 8);
        let inner = interior_points(&x, 24, 24, 8);
        assert_eq!(check_witness_at(&x, &w, 1, &inner).max_variation, Rational::new(2, 17));
        assert_eq!(check_witness(&x, &w, 1).max_variation, Rational::new(1, 5));
    }
}
