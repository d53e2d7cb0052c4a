//! Bundled example projects.

use crate::project::{Project, ProjectError};

pub const Z2_Z3: &str = include_str!("../fixtures/z2_z3.toml");
pub const Z2_SEGMENT: &str = include_str!("../fixtures/z2_segment.toml");
pub const CIRCLE: &str = include_str!("../fixtures/circle.toml");
pub const SIMPLEX_Z2_Z4_Z8: &str = include_str!("../fixtures/simplex_z2_z4_z8.toml");
pub const S3_TWIST: &str = include_str!("../fixtures/s3_twist.toml");
pub const SIMPLEX3_COCYCLE: &str = include_str!("../fixtures/simplex3_cocycle.toml");
pub const TWO_TRIANGLES: &str = include_str!("../fixtures/two_triangles.toml");
pub const S3_HEXAGON: &str = include_str!("../fixtures/s3_hexagon.toml");
pub const Z5_POINT: &str = include_str!("../fixtures/z5_point.toml");
pub const NOLOOPS: &str = include_str!("../fixtures/noloops.toml");
pub const FIGURE_EIGHT: &str = include_str!("../fixtures/figure_eight.toml");

/// Every bundled project by name.
pub const ALL: &[(&str, &str)] = &[
    ("z2_z3", Z2_Z3),
    ("z2_segment", Z2_SEGMENT),
    ("circle", CIRCLE),
    ("simplex_z2_z4_z8", SIMPLEX_Z2_Z4_Z8),
    ("s3_twist", S3_TWIST),
    ("simplex3_cocycle", SIMPLEX3_COCYCLE),
    ("two_triangles", TWO_TRIANGLES),
    ("s3_hexagon", S3_HEXAGON),
    ("z5_point", Z5_POINT),
    ("noloops", NOLOOPS),
    ("figure_eight", FIGURE_EIGHT),
];

pub fn load(name: &str) -> Result<Project, ProjectError> {
    let text = ALL
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| ProjectError::Conflict(format!("no bundled project `{name}`")))?;
    Project::load(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load_and_only_noloops_is_invalid() {
        for (name, _) in ALL {
            let p = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(p.validate().is_valid(), *name != "noloops", "{name}: {}", p.validate());
        }
    }
}
