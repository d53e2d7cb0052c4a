//! Property A evidence for the R-stabilizer of a complex of groups.

use serde::Serialize;

use super::propa::{ball_averaging_witness, check_witness, Rational};
use crate::development::{develop_ball, group_ball, r_stabilizer, DevelopError};
use crate::words::Pi1Presentation;

#[derive(Clone, Debug, Serialize)]
pub struct PropAProbe {
    pub stabilizer_radius: u32,
    pub ball_radius: u32,
    pub k: u32,
    pub stabilizer_size: usize,
    pub ball_size: usize,
    /// `(n, max variation)` on `W_R` as a subspace of the group ball.
    #[serde(serialize_with = "ser_profile")]
    pub stabilizer_profile: Vec<(u32, Rational)>,
    /// `(n, max variation)` on the group ball.
    #[serde(serialize_with = "ser_profile")]
    pub ball_profile: Vec<(u32, Rational)>,
}

fn ser_profile<S: serde::Serializer>(p: &[(u32, Rational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (n, v) in p {
        seq.serialize_element(&(n, v.to_string()))?;
    }
    seq.end()
}

/// Ball-averaging witnesses for `n = 1..=n_max` on `W_R` and on the group ball of radius `ball_radius`.
pub fn stabilizer_propa_probe(
    p: &Pi1Presentation,
    stabilizer_radius: u32,
    ball_radius: u32,
    n_max: u32,
    k: u32,
    budget: usize,
) -> Result<PropAProbe, DevelopError> {
    let dev = develop_ball(p, stabilizer_radius, budget)?;
    let stab = r_stabilizer(p, &dev, stabilizer_radius, budget)?;
    let ball = group_ball(p, ball_radius, budget)?;
    let idx = ball.indices_of(&stab);
    if idx.len() != stab.len() {
        return Err(DevelopError::Inconsistent(format!(
            "W_{stabilizer_radius} has elements outside the group ball of radius {ball_radius}"
        )));
    }
    let sub = ball.space.subspace(&idx)?;
    let profile = |x: &crate::metric::FiniteMetricSpace| -> Vec<(u32, Rational)> {
        (1..=n_max).map(|n| (n, check_witness(x, &ball_averaging_witness(x, n), k).max_variation)).collect()
    };
    Ok(PropAProbe {
        stabilizer_radius,
        ball_radius,
        k,
        stabilizer_size: stab.len(),
        ball_size: ball.space.len(),
        stabilizer_profile: profile(&sub),
        ball_profile: profile(&ball.space),
    })
}
