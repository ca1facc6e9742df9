use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{MatchedError, MatchedPair};
use crate::ring::{ring_arith, units_open_verdict, Openness, RingDescriptor, RingElement, RingError, RingOp};

/// Element `(a, x)` of the ax+b group over a ring, `a` a unit.
/// The law is `(a, x)(b, y) = (ab, x + ay)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxbGroupElement {
    pub a: RingElement,
    pub x: RingElement,
}

impl AxbGroupElement {
    pub fn new(a: RingElement, x: RingElement) -> Self {
        Self { a, x }
    }

    pub fn identity(desc: &RingDescriptor) -> Result<Self, MatchedError> {
        Ok(Self::new(desc.one()?, desc.zero()?))
    }
}

fn require_unit(desc: &RingDescriptor, a: &RingElement) -> Result<(), MatchedError> {
    match desc.is_unit(a) {
        Ok(true) => Ok(()),
        Ok(false) => Err(MatchedError::NotAUnit),
        Err(RingError::TailUncertain) => Err(MatchedError::TailUncertain),
        Err(e) => Err(e.into()),
    }
}

pub fn axb_mul(desc: &RingDescriptor, u: &AxbGroupElement, v: &AxbGroupElement) -> Result<AxbGroupElement, MatchedError> {
    let a = ring_arith(desc, RingOp::Mul, &u.a, &v.a)?;
    let ay = ring_arith(desc, RingOp::Mul, &u.a, &v.x)?;
    let x = ring_arith(desc, RingOp::Add, &u.x, &ay)?;
    Ok(AxbGroupElement::new(a, x))
}

/// Splits `(a, x)` as `g s` with `g = (x + 1, x)` in `G1 = {(c, c - 1)}` and
/// `s = ((x + 1)^-1 a, 0)` in `G2 = {(b, 0)}`.
///
/// Over `Q_p`, an `x + 1` that vanishes to precision gives
/// [`RingError::PrecisionExhausted`]; [`axb_factorize_rational`] decides the
/// rational case exactly.
pub fn axb_factorize(
    desc: &RingDescriptor,
    elem: &AxbGroupElement,
) -> Result<(AxbGroupElement, AxbGroupElement), MatchedError> {
    require_unit(desc, &elem.a)?;
    desc.check(&elem.x)?;
    let c = ring_arith(desc, RingOp::Add, &elem.x, &desc.one()?)?;
    match desc.is_unit(&c) {
        Ok(true) => {}
        Ok(false) => return Err(MatchedError::NotFactorizable),
        Err(RingError::TailUncertain) => return Err(MatchedError::TailUncertain),
        Err(e) => return Err(e.into()),
    }
    let b = ring_arith(desc, RingOp::Mul, &desc.inverse(&c)?, &elem.a)?;
    let g = AxbGroupElement::new(c, elem.x.clone());
    let s = AxbGroupElement::new(b, desc.zero()?);
    Ok((g, s))
}

/// Element `(a, x)` of the ax+b group over `Q` inside `Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalAxb {
    #[serde(serialize_with = "ser_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub x: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl RationalAxb {
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            a: &self.a * &other.a,
            x: &self.x + &self.a * &other.x,
        }
    }
}

/// Exact factorization for rational `a`, `x`. A nonzero rational is a unit
/// of `Q_p`, so the only obstruction is `x = -1`.
pub fn axb_factorize_rational(a: &BigRational, x: &BigRational) -> Result<(RationalAxb, RationalAxb), MatchedError> {
    if a.is_zero() {
        return Err(MatchedError::NotAUnit);
    }
    let c = x + BigRational::one();
    if c.is_zero() {
        return Err(MatchedError::NotFactorizable);
    }
    let g = RationalAxb { a: c.clone(), x: x.clone() };
    let s = RationalAxb {
        a: a / c,
        x: BigRational::zero(),
    };
    Ok((g, s))
}

/// Regularity class of the quantum group of a matched pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semiregularity {
    Regular,
    SemiregularNotRegular,
    NotSemiregular,
}

/// What the verdict is about: a finite pair, or the ax+b pair over a ring.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Finite(&'a MatchedPair),
    Axb(&'a RingDescriptor),
}

/// A finite pair is regular (the product map is a bijection of discrete
/// spaces). The ax+b pair over a non-discrete ring whose non-units are null
/// is never regular; it is semi-regular exactly when the units are open.
/// Over a finite ring the non-units form a non-null complement, so the
/// subgroups do not form a matched pair.
pub fn semiregularity_verdict(subject: Subject<'_>) -> Result<Semiregularity, MatchedError> {
    match subject {
        Subject::Finite(_) => Ok(Semiregularity::Regular),
        Subject::Axb(desc) => {
            desc.validate()?;
            if is_discrete(desc) {
                return Err(MatchedError::NotMatchedPair(format!("ax+b over {}", desc.label())));
            }
            Ok(match units_open_verdict(desc) {
                Openness::Open => Semiregularity::SemiregularNotRegular,
                Openness::NotOpen => Semiregularity::NotSemiregular,
            })
        }
    }
}

fn is_discrete(desc: &RingDescriptor) -> bool {
    match desc {
        RingDescriptor::FiniteModRing { .. } => true,
        RingDescriptor::BqRing { base, .. } => is_discrete(base),
        RingDescriptor::PAdicField { .. } | RingDescriptor::RestrictedAdeles { .. } => false,
    }
}
