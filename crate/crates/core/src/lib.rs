//! Complexes of groups over small categories without loops (scwols).

pub mod action;
pub mod coarse;
pub mod complex;
pub mod development;
pub mod fixtures;
pub mod group;
pub mod metric;
pub mod project;
pub mod report;
pub mod scwol;
pub mod words;
