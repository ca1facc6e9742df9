//! The locally compact rings `A` used as coefficients of ax+b groups:
//! finite rings, `Q_p`, restricted adele products and the B_q deformation
//! of 2x2 matrices.

mod adele;
mod bq;
mod density;
mod descriptor;
mod element;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::padic::{PAdicError, PAdicNumber};

pub use adele::{Adele, Tail};
pub use bq::{bq_check, bq_mul, first_component_bijective, mat_mul, pi_q, random_base_element, random_bq, BqElement, BqReport, Matrix2};
pub use density::{unit_density_closed_form, unit_density_estimate, DensityEstimate};
pub use descriptor::{PrimePool, RingDescriptor, Scalar, Truncation};
pub use element::{parse_rational, ring_arith, RingElement, RingOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("element does not belong to {0}")]
    DescriptorMismatch(String),
    #[error("element is certified not to be invertible")]
    NotInvertible,
    #[error("invertibility is not certified: the tail components are unspecified")]
    TailUncertain,
    #[error("every pool prime is constrained: units are open and no witness exists")]
    NoFreePrime,
    #[error("verdict needs more precision than the element carries")]
    PrecisionExhausted,
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid prime pool: {0}")]
    InvalidPool(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("prime {0} is not in the pool")]
    NotInPool(u64),
    #[error("truncation reaches beyond the known pool: {0}")]
    TruncationBeyondPool(String),
    #[error("expected a certified unit")]
    NotACertifiedUnit,
    #[error("cannot parse ring element: {0}")]
    Parse(String),
    #[error(transparent)]
    PAdic(#[from] PAdicError),
}

/// Whether the unit group is open in the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Openness {
    Open,
    NotOpen,
}

/// Openness of the unit group. Discrete rings and `Q_p` have open unit
/// groups, as does a finite product of `Q_p`'s; over an infinite pool every
/// neighbourhood of a unit contains non-units (see [`interior_witness`]).
/// The units of B_q are the preimage of the units under the continuous
/// norm, hence open over the implemented bases.
pub fn units_open_verdict(desc: &RingDescriptor) -> Openness {
    match desc {
        RingDescriptor::FiniteModRing { .. } | RingDescriptor::PAdicField { .. } => Openness::Open,
        RingDescriptor::RestrictedAdeles { pool, .. } => {
            if pool.is_finite() {
                Openness::Open
            } else {
                Openness::NotOpen
            }
        }
        RingDescriptor::BqRing { base, .. } => units_open_verdict(base),
    }
}

/// A non-unit in the basic neighbourhood of the unit `u` that fixes the
/// components at the `constraint` primes and asks the others to be integral.
///
/// The witness agrees with `u` on the constraint set. The first free pool
/// prime `p` gets the component `p`, and the tail becomes the uniformizer
/// class, so infinitely many components are non-units. That rules out an
/// inverse inside the restricted product.
pub fn interior_witness(desc: &RingDescriptor, u: &Adele, constraint: &BTreeSet<u64>) -> Result<Adele, RingError> {
    let RingDescriptor::RestrictedAdeles { pool, precision } = desc else {
        return Err(RingError::DescriptorMismatch(desc.label()));
    };
    u.validate(pool)?;
    if !u.is_unit()? {
        return Err(RingError::NotACertifiedUnit);
    }
    if pool.is_finite() {
        return Err(RingError::NoFreePrime);
    }
    let free = pool.smallest_outside(constraint).ok_or(RingError::NoFreePrime)?;
    let mut exceptions = std::collections::BTreeMap::new();
    for &p in constraint {
        if !pool.contains(p) {
            continue;
        }
        let up = u.component(p, *precision)?.expect("a unit tail determines every component");
        exceptions.insert(p, up);
    }
    exceptions.insert(free, PAdicNumber::new(free, 1, 1, *precision)?);
    Ok(Adele::new(exceptions, Tail::Uniformizer))
}

/// Re-checks a witness: it is certified non-invertible, agrees with `u` on
/// the constraint set and has integral components elsewhere.
pub fn verify_witness(
    desc: &RingDescriptor,
    u: &Adele,
    constraint: &BTreeSet<u64>,
    witness: &Adele,
) -> Result<bool, RingError> {
    let RingDescriptor::RestrictedAdeles { pool, precision } = desc else {
        return Err(RingError::DescriptorMismatch(desc.label()));
    };
    witness.validate(pool)?;
    if witness.is_unit()? {
        return Ok(false);
    }
    for &p in constraint.iter().filter(|&&p| pool.contains(p)) {
        let (Some(a), Some(b)) = (u.component(p, *precision)?, witness.component(p, *precision)?) else {
            return Ok(false);
        };
        if !a.eq_to_precision(&b)? {
            return Ok(false);
        }
    }
    for (p, x) in &witness.exceptions {
        if !constraint.contains(p) && !x.is_integral()? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_f2() -> RingDescriptor {
        RingDescriptor::adeles(PrimePool::AllPrimesResidueDegree2)
    }

    fn adele_el(x: Adele) -> RingElement {
        RingElement::Adele(x)
    }

    #[test]
    fn finite_ring_arithmetic() {
        let z36 = RingDescriptor::finite(36);
        let six = z36.from_integer(6).unwrap();
        assert_eq!(ring_arith(&z36, RingOp::Mul, &six, &six).unwrap(), RingElement::Residue(0));
        assert_eq!(z36.inverse(&six), Err(RingError::NotInvertible));
        assert_eq!(z36.inverse(&RingElement::Residue(5)).unwrap(), RingElement::Residue(29));
    }

    #[test]
    fn adele_of_ones_is_its_own_inverse() {
        let desc = RingDescriptor::adeles(PrimePool::explicit(&[2, 3, 5]));
        let ones = desc.from_integer(1).unwrap();
        assert_eq!(desc.inverse(&ones).unwrap(), ones);
        let explicit = Adele::ones()
            .with_component(2, PAdicNumber::one(2, 8).unwrap())
            .with_component(3, PAdicNumber::one(3, 8).unwrap())
            .with_component(5, PAdicNumber::one(5, 8).unwrap());
        assert_eq!(desc.inverse(&adele_el(explicit.clone())).unwrap(), adele_el(explicit));
    }

    #[test]
    fn single_non_unit_component_is_invertible_in_the_restricted_product() {
        // 5 at p = 5 is not in Z_5^* but is invertible in Q_5; the inverse
        // 1/5 is non-integral at a single prime, so it stays restricted.
        let desc = RingDescriptor::adeles(PrimePool::explicit(&[2, 3, 5]));
        let x = Adele::ones().with_component(5, PAdicNumber::from_integer(5, 5, 8).unwrap());
        assert_eq!(x.is_integral_unit(), Ok(false));
        let inv = desc.inverse(&adele_el(x.clone())).unwrap();
        let prod = ring_arith(&desc, RingOp::Mul, &adele_el(x), &inv).unwrap();
        let RingElement::Adele(prod) = prod else { panic!("expected an adele") };
        assert_eq!(prod.tail, Tail::Unit);
        assert!(prod.exceptions[&5].eq_to_precision(&PAdicNumber::one(5, 8).unwrap()).unwrap());
    }

    #[test]
    fn uniformizer_tail_is_not_invertible() {
        let desc = all_f2();
        let x = Adele::new(Default::default(), Tail::Uniformizer);
        assert_eq!(desc.inverse(&adele_el(x)), Err(RingError::NotInvertible));
    }

    #[test]
    fn integral_tail_is_uncertain() {
        let desc = all_f2();
        let x = Adele::new(Default::default(), Tail::Integral);
        assert_eq!(desc.inverse(&adele_el(x)), Err(RingError::TailUncertain));
        let sum = ring_arith(&desc, RingOp::Add, &desc.one().unwrap(), &desc.one().unwrap()).unwrap();
        assert_eq!(desc.is_unit(&sum), Err(RingError::TailUncertain));
    }

    #[test]
    fn openness() {
        assert_eq!(units_open_verdict(&RingDescriptor::finite(36)), Openness::Open);
        assert_eq!(units_open_verdict(&RingDescriptor::padic(5)), Openness::Open);
        assert_eq!(units_open_verdict(&all_f2()), Openness::NotOpen);
        let fin = RingDescriptor::adeles(PrimePool::explicit(&[2, 3, 5]));
        assert_eq!(units_open_verdict(&fin), Openness::Open);
    }

    #[test]
    fn witness_examples() {
        let desc = all_f2();
        let u = Adele::ones();
        let c = BTreeSet::from([2, 3]);
        let w = interior_witness(&desc, &u, &c).unwrap();
        let five = w.component(5, 8).unwrap().unwrap();
        assert_eq!(five.valuation(), Some(1));
        assert_eq!(five, PAdicNumber::from_integer(5, 5, 8).unwrap());
        assert!(verify_witness(&desc, &u, &c, &w).unwrap());

        let w = interior_witness(&desc, &u, &BTreeSet::new()).unwrap();
        assert_eq!(w.component(2, 8).unwrap().unwrap().valuation(), Some(1));

        let fin = RingDescriptor::adeles(PrimePool::explicit(&[2, 3, 5]));
        assert_eq!(
            interior_witness(&fin, &u, &BTreeSet::from([2, 3, 5])),
            Err(RingError::NoFreePrime)
        );
    }

    #[test]
    fn witness_requires_a_unit() {
        let desc = all_f2();
        let u = Adele::new(Default::default(), Tail::Integral);
        assert_eq!(interior_witness(&desc, &u, &BTreeSet::new()), Err(RingError::TailUncertain));
    }

    #[test]
    fn adele_json_form() {
        let x = Adele::ones().with_component(5, PAdicNumber::from_integer(5, 5, 2).unwrap());
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"exceptions":{"5":"5^1 * (1 0)_5"},"tail":"unit"}"#);
        assert_eq!(serde_json::from_str::<Adele>(&s).unwrap(), x);
    }
}
