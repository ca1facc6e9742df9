//! Pentagonal transformations of rational domains: exact evaluation of
//! rational maps, the pentagon relation on sampled points, the maps derived
//! from a pentagonal transformation, and the slices of the operator of the
//! `qplus` map on `l2(Q+)`.

mod checks;
mod map;
mod poly;
mod qplus;

use thiserror::Error;

pub use checks::{
    derived_identity_check, derived_maps, jacobians, pentagon_identity_check, round_trip_check, DerivedMaps,
    DerivedReport, IdentityReport, RoundTripReport,
};
pub use map::{builtin_map, builtin_map_names, Domain, PentagonalMap, RationalMap, SAMPLE_BOUND};
pub use poly::{Poly, RationalFunction};
pub use qplus::{calkin_wilf, qplus_slice, qplus_slice_structure, SliceEntry, SliceReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PentagonError {
    #[error("unknown map {0:?}")]
    UnknownName(String),
    #[error("sample left the domain: {0}")]
    DomainViolation(String),
    #[error("map has no inverse")]
    MissingInverse,
    #[error("empty window")]
    EmptyWindow,
    #[error("malformed map: {0}")]
    MalformedMap(String),
    #[error("no admissible sample after {0} attempts")]
    SamplingExhausted(usize),
}
