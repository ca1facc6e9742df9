//! Matched pairs of groups: exact finite factorizations with their mutual
//! actions, the ax+b pair over a ring at element level, Haar-measure
//! identities for p-adic ax+b, and the regularity verdicts.

mod axb;
mod density;
mod group;
mod pair;
mod quotient;

use thiserror::Error;

use crate::padic::PAdicError;
use crate::ring::RingError;

pub use axb::{
    axb_factorize, axb_factorize_rational, axb_mul, semiregularity_verdict, AxbGroupElement, RationalAxb, Semiregularity,
    Subject,
};
pub use density::{density_identity_check, right_haar_integral, translate, DensityCheck, Side};
pub use group::{FiniteGroup, GroupJson};
pub use pair::{builtin_names, builtin_pair, check_matched, MatchedPair, MatchingReport, PairJson};
pub use quotient::{quotient_average_finite, quotient_average_padic, FiniteQuotient, PAdicQuotient};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchedError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("subset {0} is not a subgroup")]
    NotSubgroup(String),
    #[error("the subgroups share the non-identity element {0}")]
    NontrivialIntersection(String),
    #[error("G1 G2 is not an exact factorization: {0}")]
    NotExactFactorization(String),
    #[error("x + 1 is not a unit, so the element lies outside G1 G2")]
    NotFactorizable,
    #[error("unit verdict for x + 1 is not certified: the adele tail is unspecified")]
    TailUncertain,
    #[error("the first coordinate of an ax+b element must be a unit")]
    NotAUnit,
    #[error("{0} does not give a matched pair")]
    NotMatchedPair(String),
    #[error("unknown built-in pair {0:?}")]
    UnknownPair(String),
    #[error("level {0} exceeds the enumeration budget")]
    UnsupportedLevel(u32),
    #[error("malformed function: {0}")]
    MalformedFunction(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    PAdic(#[from] PAdicError),
}
