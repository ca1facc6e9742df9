use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::adele::AdeleOp;
use super::{Adele, BqElement, RingDescriptor, RingError};
use crate::padic::PAdicNumber;

/// An element of one of the rings described by [`RingDescriptor`]. The
/// element does not carry its ring; operations take the descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingElement {
    /// Residue in `[0, n)` of `Z/nZ`.
    Residue(u64),
    PAdic(PAdicNumber),
    Adele(Adele),
    Bq(Box<BqElement>),
}

/// Binary ring operation selector for [`ring_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

fn mismatch(desc: &RingDescriptor) -> RingError {
    RingError::DescriptorMismatch(desc.label())
}

fn inverse_mod_n(x: u64, n: u64) -> Option<u64> {
    let e = (x as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// `x op y` in the ring `desc`.
pub fn ring_arith(desc: &RingDescriptor, op: RingOp, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
    desc.check(x)?;
    desc.check(y)?;
    use RingElement as E;
    match (desc, x, y) {
        (RingDescriptor::FiniteModRing { n }, E::Residue(a), E::Residue(b)) => {
            let (a, b, n) = (*a as u128, *b as u128, *n as u128);
            let r = match op {
                RingOp::Add => (a + b) % n,
                RingOp::Sub => (a + n - b) % n,
                RingOp::Mul => a * b % n,
            };
            Ok(E::Residue(r as u64))
        }
        (RingDescriptor::PAdicField { .. }, E::PAdic(a), E::PAdic(b)) => Ok(E::PAdic(match op {
            RingOp::Add => a.add(b)?,
            RingOp::Sub => a.sub(b)?,
            RingOp::Mul => a.mul(b)?,
        })),
        (RingDescriptor::RestrictedAdeles { pool, precision }, E::Adele(a), E::Adele(b)) => {
            let op = match op {
                RingOp::Add => AdeleOp::Add,
                RingOp::Sub => AdeleOp::Sub,
                RingOp::Mul => AdeleOp::Mul,
            };
            Ok(E::Adele(a.combine(b, op, *precision)?.canonical_tail(pool)))
        }
        (RingDescriptor::BqRing { base, .. }, E::Bq(a), E::Bq(b)) => {
            let q = desc.bq_parameter()?;
            let r = match op {
                RingOp::Add => a.zip_with(b, |s, t| ring_arith(base, RingOp::Add, s, t))?,
                RingOp::Sub => a.zip_with(b, |s, t| ring_arith(base, RingOp::Sub, s, t))?,
                RingOp::Mul => super::bq_mul(base, &q, a, b)?,
            };
            Ok(E::Bq(Box::new(r)))
        }
        _ => Err(mismatch(desc)),
    }
}

impl RingDescriptor {
    /// Checks that `x` is a well-formed element of this ring.
    pub fn check(&self, x: &RingElement) -> Result<(), RingError> {
        match (self, x) {
            (RingDescriptor::FiniteModRing { n }, RingElement::Residue(a)) if a < n => Ok(()),
            (RingDescriptor::PAdicField { p, .. }, RingElement::PAdic(a)) if a.prime() == *p => Ok(()),
            (RingDescriptor::RestrictedAdeles { pool, .. }, RingElement::Adele(a)) => a.validate(pool),
            (RingDescriptor::BqRing { base, .. }, RingElement::Bq(m)) => m.entries().iter().try_for_each(|e| base.check(e)),
            _ => Err(mismatch(self)),
        }
    }

    /// The parameter `q` of a B_q ring, as an element of its base.
    pub fn bq_parameter(&self) -> Result<RingElement, RingError> {
        match self {
            RingDescriptor::BqRing { base, q } => base.parse_element(&q.as_text()),
            _ => Err(mismatch(self)),
        }
    }

    /// Image of an integer under the unital map `Z -> ring`.
    pub fn from_integer(&self, n: i64) -> Result<RingElement, RingError> {
        match self {
            RingDescriptor::FiniteModRing { n: m } => Ok(RingElement::Residue((n as i128).rem_euclid(*m as i128) as u64)),
            RingDescriptor::PAdicField { p, precision } => Ok(RingElement::PAdic(PAdicNumber::from_integer(
                *p,
                n as i128,
                *precision,
            )?)),
            RingDescriptor::RestrictedAdeles { pool, precision } => {
                if n == 1 {
                    return Ok(RingElement::Adele(Adele::ones()));
                }
                if !pool.is_finite() {
                    // The constant n is a unit at all but finitely many
                    // primes yet differs from 1 at every one of them.
                    return Err(RingError::InvalidElement(format!(
                        "the constant {n} has no finite description over an infinite pool"
                    )));
                }
                let exceptions = pool
                    .known_primes()
                    .iter()
                    .map(|&p| Ok((p, PAdicNumber::from_integer(p, n as i128, *precision)?)))
                    .collect::<Result<_, RingError>>()?;
                Ok(RingElement::Adele(Adele::new(exceptions, super::Tail::Unit)))
            }
            RingDescriptor::BqRing { base, .. } => {
                let z = base.from_integer(0)?;
                let c = base.from_integer(n)?;
                Ok(RingElement::Bq(Box::new(BqElement::new(c.clone(), z.clone(), z, c))))
            }
        }
    }

    pub fn zero(&self) -> Result<RingElement, RingError> {
        self.from_integer(0)
    }

    pub fn one(&self) -> Result<RingElement, RingError> {
        self.from_integer(1)
    }

    /// Parses an element from text: an integer or fraction for the finite
    /// ring and `Q_p`, a p-adic literal for `Q_p`, adele JSON, or a B_q
    /// matrix `[a, b, c, d]` of base literals.
    pub fn parse_element(&self, text: &str) -> Result<RingElement, RingError> {
        let text = text.trim();
        let bad = |why: &str| RingError::Parse(format!("{why}: {text:?}"));
        match self {
            RingDescriptor::FiniteModRing { n } => {
                let v: i128 = text.parse().map_err(|_| bad("expected an integer"))?;
                Ok(RingElement::Residue(v.rem_euclid(*n as i128) as u64))
            }
            RingDescriptor::PAdicField { p, precision } => {
                if text.contains('^') || text.starts_with("O(") {
                    let x: PAdicNumber = text.parse()?;
                    if x.prime() != *p {
                        return Err(mismatch(self));
                    }
                    return Ok(RingElement::PAdic(x));
                }
                let r: BigRational = parse_rational(text).ok_or_else(|| bad("expected a rational or p-adic literal"))?;
                Ok(RingElement::PAdic(PAdicNumber::from_rational(*p, &r, *precision)?))
            }
            RingDescriptor::RestrictedAdeles { .. } => {
                let a: Adele = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
                let x = RingElement::Adele(a);
                self.check(&x)?;
                Ok(x)
            }
            RingDescriptor::BqRing { base, .. } => {
                let v: Vec<Value> = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
                if v.len() != 4 {
                    return Err(bad("expected four entries [a, b, c, d]"));
                }
                let e = v
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => base.parse_element(s),
                        other => base.parse_element(&other.to_string()),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let [a, b, c, d]: [RingElement; 4] = e.try_into().expect("length checked");
                Ok(RingElement::Bq(Box::new(BqElement::new(a, b, c, d))))
            }
        }
    }

    /// Unit verdict in this ring.
    pub fn is_unit(&self, x: &RingElement) -> Result<bool, RingError> {
        self.check(x)?;
        match (self, x) {
            (RingDescriptor::FiniteModRing { n }, RingElement::Residue(a)) => Ok(a.gcd(n) == 1),
            (RingDescriptor::PAdicField { .. }, RingElement::PAdic(a)) => {
                if a.is_zero() {
                    // Zero to precision: could be a small nonzero value.
                    return Err(RingError::PrecisionExhausted);
                }
                Ok(true)
            }
            (RingDescriptor::RestrictedAdeles { .. }, RingElement::Adele(a)) => a.is_unit(),
            (RingDescriptor::BqRing { base, .. }, RingElement::Bq(m)) => base.is_unit(&m.norm(base, &self.bq_parameter()?)?),
            _ => Err(mismatch(self)),
        }
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        match (self, x) {
            (RingDescriptor::RestrictedAdeles { pool, .. }, RingElement::Adele(a)) => {
                Ok(RingElement::Adele(a.neg().canonical_tail(pool)))
            }
            (RingDescriptor::PAdicField { .. }, RingElement::PAdic(a)) => Ok(RingElement::PAdic(a.neg())),
            _ => ring_arith(self, RingOp::Sub, &self.zero()?, x),
        }
    }

    /// Multiplicative inverse; [`RingError::NotInvertible`] for a certified
    /// non-unit.
    pub fn inverse(&self, x: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        match (self, x) {
            (RingDescriptor::FiniteModRing { n }, RingElement::Residue(a)) => {
                inverse_mod_n(*a, *n).map(RingElement::Residue).ok_or(RingError::NotInvertible)
            }
            (RingDescriptor::PAdicField { .. }, RingElement::PAdic(a)) => {
                self.is_unit(x)?;
                Ok(RingElement::PAdic(a.inverse()?))
            }
            (RingDescriptor::RestrictedAdeles { .. }, RingElement::Adele(a)) => Ok(RingElement::Adele(a.inverse()?)),
            (RingDescriptor::BqRing { base, .. }, RingElement::Bq(m)) => {
                Ok(RingElement::Bq(Box::new(m.inverse(base, &self.bq_parameter()?)?)))
            }
            _ => Err(mismatch(self)),
        }
    }

    /// Exact equality where the representation allows it (p-adic values are
    /// compared at their shared precision).
    pub fn equal(&self, x: &RingElement, y: &RingElement) -> Result<bool, RingError> {
        match (x, y) {
            (RingElement::PAdic(a), RingElement::PAdic(b)) => Ok(a.eq_to_precision(b)?),
            (RingElement::Bq(a), RingElement::Bq(b)) => {
                let base = match self {
                    RingDescriptor::BqRing { base, .. } => base,
                    _ => return Err(mismatch(self)),
                };
                for (s, t) in a.entries().iter().zip(b.entries()) {
                    if !base.equal(s, t)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (RingElement::Adele(a), RingElement::Adele(b)) => {
                let RingDescriptor::RestrictedAdeles { precision, .. } = self else {
                    return Err(mismatch(self));
                };
                if a.tail != b.tail {
                    return Ok(false);
                }
                for p in a.exceptions.keys().chain(b.exceptions.keys()) {
                    match (a.component(*p, *precision)?, b.component(*p, *precision)?) {
                        (Some(s), Some(t)) if s.eq_to_precision(&t)? => {}
                        _ => return Ok(false),
                    }
                }
                Ok(true)
            }
            _ => Ok(x == y),
        }
    }
}

/// Parses `n` or `n/d` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

impl RingElement {
    /// JSON rendering used in reports; p-adic values show a small rational
    /// when one matches the tracked digits.
    pub fn to_json(&self) -> Value {
        match self {
            RingElement::Residue(a) => json!(a),
            RingElement::PAdic(x) => match x.reconstruct_rational() {
                Some(r) => json!({ "value": r.to_string(), "padic": x.to_string() }),
                None => json!({ "padic": x.to_string() }),
            },
            RingElement::Adele(a) => serde_json::to_value(a).expect("adele serializes"),
            RingElement::Bq(m) => Value::Array(m.entries().iter().map(|e| e.to_json()).collect()),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Residue(a) => write!(f, "{a}"),
            RingElement::PAdic(x) => match x.reconstruct_rational() {
                Some(r) => write!(f, "{r}"),
                None => write!(f, "{x}"),
            },
            RingElement::Adele(a) => write!(f, "{}", serde_json::to_string(a).map_err(|_| fmt::Error)?),
            RingElement::Bq(m) => {
                let [a, b, c, d] = m.entries();
                write!(f, "({a}, {b}; {c}, {d})")
            }
        }
    }
}
