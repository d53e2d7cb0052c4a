//! Coarse geometry of finite metric spaces at fixed scales.

pub mod asdim;
pub mod probe;
pub mod propa;
pub mod union;

pub use asdim::{
    check_certificate, check_uniform, find_asdim_certificate, probe_dimension, AsdimCertificate, DimensionProbe, SearchLimits,
    SearchOutcome,
};
pub use probe::{stabilizer_propa_probe, PropAProbe};
pub use propa::{ball_averaging_witness, check_witness, check_witness_at, PropAWitness, Rational, WitnessCheck};
pub use union::{dimension_bound_report, finite_union, union_harness, BoundReport, FiniteUnionReport, UnionReport};
