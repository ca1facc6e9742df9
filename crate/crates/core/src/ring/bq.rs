use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ring_arith, RingDescriptor, RingElement, RingError, RingOp};

/// An element `(a, b; c, d)` of the B_q ring over a commutative base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BqElement {
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
    pub d: RingElement,
}

/// A 2x2 matrix over the base ring, rows first.
pub type Matrix2 = [[RingElement; 2]; 2];

fn add(base: &RingDescriptor, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
    ring_arith(base, RingOp::Add, x, y)
}

fn sub(base: &RingDescriptor, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
    ring_arith(base, RingOp::Sub, x, y)
}

fn mul(base: &RingDescriptor, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
    ring_arith(base, RingOp::Mul, x, y)
}

impl BqElement {
    pub fn new(a: RingElement, b: RingElement, c: RingElement, d: RingElement) -> Self {
        Self { a, b, c, d }
    }

    pub fn entries(&self) -> [&RingElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub(crate) fn zip_with(
        &self,
        other: &Self,
        mut f: impl FnMut(&RingElement, &RingElement) -> Result<RingElement, RingError>,
    ) -> Result<Self, RingError> {
        Ok(Self {
            a: f(&self.a, &other.a)?,
            b: f(&self.b, &other.b)?,
            c: f(&self.c, &other.c)?,
            d: f(&self.d, &other.d)?,
        })
    }

    /// `ad - q bc`, the determinant of the first component of `pi_q`;
    /// multiplicative, so the element is a unit iff its norm is.
    pub fn norm(&self, base: &RingDescriptor, q: &RingElement) -> Result<RingElement, RingError> {
        let bc = mul(base, &self.b, &self.c)?;
        sub(base, &mul(base, &self.a, &self.d)?, &mul(base, q, &bc)?)
    }

    /// `N^-1 (d, -b; -c, a)` where `N` is the norm.
    pub fn inverse(&self, base: &RingDescriptor, q: &RingElement) -> Result<Self, RingError> {
        let n_inv = base.inverse(&self.norm(base, q)?)?;
        Ok(Self {
            a: mul(base, &n_inv, &self.d)?,
            b: mul(base, &n_inv, &base.neg(&self.b)?)?,
            c: mul(base, &n_inv, &base.neg(&self.c)?)?,
            d: mul(base, &n_inv, &self.a)?,
        })
    }
}

/// The q-twisted product `(aa' + q bc', ab' + bd'; ca' + dc', dd' + q cb')`.
pub fn bq_mul(base: &RingDescriptor, q: &RingElement, m: &BqElement, m2: &BqElement) -> Result<BqElement, RingError> {
    let twisted = |x: &RingElement, y: &RingElement, s: &RingElement, t: &RingElement| -> Result<RingElement, RingError> {
        add(base, &mul(base, x, y)?, &mul(base, q, &mul(base, s, t)?)?)
    };
    let plain = |x: &RingElement, y: &RingElement, s: &RingElement, t: &RingElement| -> Result<RingElement, RingError> {
        add(base, &mul(base, x, y)?, &mul(base, s, t)?)
    };
    Ok(BqElement {
        a: twisted(&m.a, &m2.a, &m.b, &m2.c)?,
        b: plain(&m.a, &m2.b, &m.b, &m2.d)?,
        c: plain(&m.c, &m2.a, &m.d, &m2.c)?,
        d: twisted(&m.d, &m2.d, &m.c, &m2.b)?,
    })
}

/// `((a, b; qc, d), (a, qb; c, d))`.
pub fn pi_q(base: &RingDescriptor, q: &RingElement, m: &BqElement) -> Result<(Matrix2, Matrix2), RingError> {
    let qc = mul(base, q, &m.c)?;
    let qb = mul(base, q, &m.b)?;
    Ok((
        [[m.a.clone(), m.b.clone()], [qc, m.d.clone()]],
        [[m.a.clone(), qb], [m.c.clone(), m.d.clone()]],
    ))
}

/// Ordinary matrix product over the base ring.
pub fn mat_mul(base: &RingDescriptor, x: &Matrix2, y: &Matrix2) -> Result<Matrix2, RingError> {
    let entry = |i: usize, j: usize| -> Result<RingElement, RingError> {
        add(base, &mul(base, &x[i][0], &y[0][j])?, &mul(base, &x[i][1], &y[1][j])?)
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

fn mat_eq(base: &RingDescriptor, x: &Matrix2, y: &Matrix2) -> Result<bool, RingError> {
    for i in 0..2 {
        for j in 0..2 {
            if !base.equal(&x[i][j], &y[i][j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn bq_eq(base: &RingDescriptor, x: &BqElement, y: &BqElement) -> Result<bool, RingError> {
    for (s, t) in x.entries().into_iter().zip(y.entries()) {
        if !base.equal(s, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random base element: uniform residue for `Z/n`, a small rational
/// `num/den` for `Q_p`.
pub fn random_base_element<R: Rng>(base: &RingDescriptor, rng: &mut R) -> Result<RingElement, RingError> {
    match base {
        RingDescriptor::FiniteModRing { n } => Ok(RingElement::Residue(rng.gen_range(0..*n))),
        RingDescriptor::PAdicField { .. } => {
            let num: i64 = rng.gen_range(-60..=60);
            let den: i64 = rng.gen_range(1..=60);
            base.parse_element(&format!("{num}/{den}"))
        }
        _ => Err(RingError::InvalidDescriptor("random elements exist only for finite and p-adic bases".into())),
    }
}

pub fn random_bq<R: Rng>(base: &RingDescriptor, rng: &mut R) -> Result<BqElement, RingError> {
    Ok(BqElement::new(
        random_base_element(base, rng)?,
        random_base_element(base, rng)?,
        random_base_element(base, rng)?,
        random_base_element(base, rng)?,
    ))
}

/// Outcome of the randomized B_q ring checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BqReport {
    pub ring: String,
    pub samples: usize,
    pub associative: bool,
    pub identity_neutral: bool,
    pub pi_q_multiplicative: bool,
    pub pi_q_additive: bool,
    /// Whether the first component of `pi_q` is a bijection onto `M_2`,
    /// decided by enumeration for small finite bases.
    pub first_component_bijective: Option<bool>,
    pub q_is_unit: Option<bool>,
}

impl BqReport {
    pub fn passed(&self) -> bool {
        self.associative && self.identity_neutral && self.pi_q_multiplicative && self.pi_q_additive
    }
}

/// Largest `n^4` for which the first component of `pi_q` is enumerated.
const ENUMERATION_LIMIT: u64 = 2_000_000;

/// Whether `m -> first component of pi_q(m)` is a bijection of `B_q(Z/n)`
/// onto `M_2(Z/n)`, by enumerating all `n^4` elements.
pub fn first_component_bijective(n: u64, q: u64) -> bool {
    let mut seen = HashSet::with_capacity((n * n * n * n) as usize);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let qc = (q as u128 * c as u128 % n as u128) as u64;
                    seen.insert((a, b, qc, d));
                }
            }
        }
    }
    seen.len() as u64 == n * n * n * n
}

/// Associativity, neutrality of the identity, and additivity and
/// multiplicativity of `pi_q` on `samples` random elements.
pub fn bq_check(base: &RingDescriptor, q_text: &str, samples: usize, seed: u64) -> Result<BqReport, RingError> {
    let desc = RingDescriptor::BqRing {
        base: Box::new(base.clone()),
        q: super::Scalar::Text(q_text.to_string()),
    };
    desc.validate()?;
    let q = desc.bq_parameter()?;
    let one = desc.one()?;
    let RingElement::Bq(one) = one else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BqReport {
        ring: desc.label(),
        samples,
        associative: true,
        identity_neutral: true,
        pi_q_multiplicative: true,
        pi_q_additive: true,
        first_component_bijective: None,
        q_is_unit: base.is_unit(&q).ok(),
    };
    for _ in 0..samples {
        let (x, y, z) = (random_bq(base, &mut rng)?, random_bq(base, &mut rng)?, random_bq(base, &mut rng)?);
        let left = bq_mul(base, &q, &bq_mul(base, &q, &x, &y)?, &z)?;
        let right = bq_mul(base, &q, &x, &bq_mul(base, &q, &y, &z)?)?;
        report.associative &= bq_eq(base, &left, &right)?;
        report.identity_neutral &=
            bq_eq(base, &bq_mul(base, &q, &one, &x)?, &x)? && bq_eq(base, &bq_mul(base, &q, &x, &one)?, &x)?;
        let (p1, p2) = pi_q(base, &q, &bq_mul(base, &q, &x, &y)?)?;
        let (x1, x2) = pi_q(base, &q, &x)?;
        let (y1, y2) = pi_q(base, &q, &y)?;
        report.pi_q_multiplicative &= mat_eq(base, &p1, &mat_mul(base, &x1, &y1)?)? && mat_eq(base, &p2, &mat_mul(base, &x2, &y2)?)?;
        let sum = x.zip_with(&y, |s, t| add(base, s, t))?;
        let (s1, s2) = pi_q(base, &q, &sum)?;
        let madd = |u: &Matrix2, v: &Matrix2| -> Result<Matrix2, RingError> {
            Ok([
                [add(base, &u[0][0], &v[0][0])?, add(base, &u[0][1], &v[0][1])?],
                [add(base, &u[1][0], &v[1][0])?, add(base, &u[1][1], &v[1][1])?],
            ])
        };
        report.pi_q_additive &= mat_eq(base, &s1, &madd(&x1, &y1)?)? && mat_eq(base, &s2, &madd(&x2, &y2)?)?;
    }
    if let (RingDescriptor::FiniteModRing { n }, RingElement::Residue(qv)) = (base, &q) {
        if n.checked_pow(4).is_some_and(|c| c <= ENUMERATION_LIMIT) {
            report.first_component_bijective = Some(first_component_bijective(*n, *qv));
        }
    }
    Ok(report)
}
