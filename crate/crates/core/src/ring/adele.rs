use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{PrimePool, RingError};
use crate::padic::PAdicNumber;

/// What is known about the components outside the exceptional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// Every non-exceptional component equals 1 exactly.
    Unit,
    /// Every non-exceptional component at `p` equals `p` exactly.
    Uniformizer,
    /// Non-exceptional components lie in `Z_p` but are otherwise unspecified.
    Integral,
}

/// An element of a restricted product of `Q_p`: finitely many explicit
/// components plus a class describing all the others.
///
/// Invertibility is that of the restricted product: every component must be
/// nonzero and all but finitely many must be units of `Z_p`. Membership in
/// the compact unit group `prod Z_p^*` is the stronger
/// [`Adele::is_integral_unit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adele {
    pub exceptions: BTreeMap<u64, PAdicNumber>,
    pub tail: Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AdeleOp {
    Add,
    Sub,
    Mul,
}

impl Adele {
    pub fn ones() -> Self {
        Self {
            exceptions: BTreeMap::new(),
            tail: Tail::Unit,
        }
    }

    pub fn new(exceptions: BTreeMap<u64, PAdicNumber>, tail: Tail) -> Self {
        Self { exceptions, tail }
    }

    pub fn with_component(mut self, p: u64, x: PAdicNumber) -> Self {
        self.exceptions.insert(p, x);
        self
    }

    /// Checks pool membership and prime labels of the exceptional components.
    /// A uniformizer tail needs an infinite pool: over a finite pool every
    /// component can be listed explicitly.
    pub fn validate(&self, pool: &PrimePool) -> Result<(), RingError> {
        for (&p, x) in &self.exceptions {
            if !pool.contains(p) {
                return Err(RingError::NotInPool(p));
            }
            if x.prime() != p {
                return Err(RingError::InvalidElement(format!(
                    "component at {p} is a {}-adic number",
                    x.prime()
                )));
            }
        }
        if self.tail == Tail::Uniformizer && pool.is_finite() {
            return Err(RingError::InvalidElement(
                "a uniformizer tail requires an infinite pool".into(),
            ));
        }
        Ok(())
    }

    /// The component at `p` when it is known exactly.
    pub fn component(&self, p: u64, precision: u32) -> Result<Option<PAdicNumber>, RingError> {
        if let Some(x) = self.exceptions.get(&p) {
            return Ok(Some(x.clone()));
        }
        match self.tail {
            Tail::Unit => Ok(Some(PAdicNumber::one(p, precision)?)),
            Tail::Uniformizer => Ok(Some(PAdicNumber::new(p, 1, 1, precision)?)),
            Tail::Integral => Ok(None),
        }
    }

    /// Invertibility in the restricted product.
    ///
    /// A component that is zero to precision leaves the verdict open and is
    /// reported as [`RingError::PrecisionExhausted`]. A uniformizer tail has
    /// infinitely many non-unit components, so the inverse would leave the
    /// restricted product: certified non-invertible.
    pub fn is_unit(&self) -> Result<bool, RingError> {
        if self.exceptions.values().any(PAdicNumber::is_zero) {
            return Err(RingError::PrecisionExhausted);
        }
        match self.tail {
            Tail::Unit => Ok(true),
            Tail::Uniformizer => Ok(false),
            Tail::Integral => Err(RingError::TailUncertain),
        }
    }

    /// Membership in `prod Z_p^*`: every component a unit of `Z_p`.
    pub fn is_integral_unit(&self) -> Result<bool, RingError> {
        for x in self.exceptions.values() {
            if !x.is_unit()? {
                return Ok(false);
            }
        }
        match self.tail {
            Tail::Unit => Ok(true),
            Tail::Uniformizer => Ok(false),
            Tail::Integral => Err(RingError::TailUncertain),
        }
    }

    pub(crate) fn combine(&self, other: &Self, op: AdeleOp, precision: u32) -> Result<Self, RingError> {
        let primes: BTreeSet<u64> = self.exceptions.keys().chain(other.exceptions.keys()).copied().collect();
        let tail = match (op, self.tail, other.tail) {
            (AdeleOp::Mul, Tail::Unit, t) | (AdeleOp::Mul, t, Tail::Unit) => t,
            _ => Tail::Integral,
        };
        let mut exceptions = BTreeMap::new();
        for p in primes {
            let x = self.component(p, precision)?;
            let y = other.component(p, precision)?;
            match (x, y) {
                (Some(x), Some(y)) => {
                    let z = match op {
                        AdeleOp::Add => x.add(&y)?,
                        AdeleOp::Sub => x.sub(&y)?,
                        AdeleOp::Mul => x.mul(&y)?,
                    };
                    exceptions.insert(p, z);
                }
                // One side is an unspecified integral component. Integral
                // combined with integral stays integral, so the result joins
                // the tail; a non-integral partner cannot be described.
                (Some(k), None) | (None, Some(k)) => {
                    if !k.is_integral()? {
                        return Err(RingError::TailUncertain);
                    }
                }
                (None, None) => unreachable!("exceptional prime unknown on both sides"),
            }
        }
        Ok(Self { exceptions, tail })
    }

    /// Over a finite pool whose every prime is exceptional the tail names no
    /// component; it is reset to [`Tail::Unit`] so verdicts stay certified.
    pub fn canonical_tail(mut self, pool: &PrimePool) -> Self {
        if pool.is_finite() && pool.known_primes().iter().all(|p| self.exceptions.contains_key(p)) {
            self.tail = Tail::Unit;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Self {
            exceptions: self.exceptions.iter().map(|(&p, x)| (p, x.neg())).collect(),
            // The tail values 1 or p become -1 or -p, which no class names.
            tail: Tail::Integral,
        }
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        if !self.is_unit()? {
            return Err(RingError::NotInvertible);
        }
        let exceptions = self
            .exceptions
            .iter()
            .map(|(&p, x)| Ok((p, x.inverse()?)))
            .collect::<Result<_, RingError>>()?;
        Ok(Self {
            exceptions,
            tail: Tail::Unit,
        })
    }
}
