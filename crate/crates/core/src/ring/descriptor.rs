use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::RingError;
use crate::padic::{PAdicNumber, DEFAULT_PRECISION};
use crate::primes::{is_prime, primes};

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

/// A literal ring element inside a descriptor (the `q` of a B_q ring).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Integer(i64),
    Text(String),
}

impl Scalar {
    pub fn as_text(&self) -> String {
        match self {
            Scalar::Integer(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

/// One of the locally compact rings the laboratory computes in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDescriptor {
    /// `Z/nZ` with the discrete topology.
    FiniteModRing { n: u64 },
    /// `Q_p` with `precision` tracked unit digits.
    PAdicField {
        p: u64,
        #[serde(default = "default_precision")]
        precision: u32,
    },
    /// Restricted product of `Q_p` (or of a residue-degree model) over a pool.
    RestrictedAdeles {
        pool: PrimePool,
        #[serde(default = "default_precision")]
        precision: u32,
    },
    /// 2x2 matrices over `base` with the q-twisted product.
    BqRing { base: Box<RingDescriptor>, q: Scalar },
}

impl RingDescriptor {
    pub fn finite(n: u64) -> Self {
        RingDescriptor::FiniteModRing { n }
    }

    pub fn padic(p: u64) -> Self {
        RingDescriptor::PAdicField {
            p,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn adeles(pool: PrimePool) -> Self {
        RingDescriptor::RestrictedAdeles {
            pool,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn bq(base: RingDescriptor, q: i64) -> Self {
        RingDescriptor::BqRing {
            base: Box::new(base),
            q: Scalar::Integer(q),
        }
    }

    pub fn validate(&self) -> Result<(), RingError> {
        match self {
            RingDescriptor::FiniteModRing { n } => {
                if *n < 2 {
                    return Err(RingError::InvalidDescriptor(format!("modulus {n} must be at least 2")));
                }
            }
            RingDescriptor::PAdicField { p, precision } => {
                PAdicNumber::one(*p, *precision)?;
            }
            RingDescriptor::RestrictedAdeles { pool, precision } => {
                pool.validate()?;
                for p in pool.known_primes().iter().take(1) {
                    PAdicNumber::one(*p, *precision)?;
                }
            }
            RingDescriptor::BqRing { base, q } => {
                match base.as_ref() {
                    RingDescriptor::FiniteModRing { .. } | RingDescriptor::PAdicField { .. } => base.validate()?,
                    _ => {
                        return Err(RingError::InvalidDescriptor(
                            "B_q base must be a finite ring or a p-adic field".into(),
                        ))
                    }
                }
                base.parse_element(&q.as_text())?;
            }
        }
        Ok(())
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            RingDescriptor::FiniteModRing { n } => format!("Z/{n}"),
            RingDescriptor::PAdicField { p, .. } => format!("Q_{p}"),
            RingDescriptor::RestrictedAdeles { pool, .. } => format!("A[{}]", pool.label()),
            RingDescriptor::BqRing { base, q } => format!("B_{}({})", q.as_text(), base.label()),
        }
    }
}

/// The set of primes an adele ring is built over, together with the
/// certificate that `sum_p p^(-f_p)` converges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PrimePool {
    ExplicitFinite {
        primes: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        residue_degrees: Option<Vec<u32>>,
    },
    /// Every prime, each with residue degree 2 (complement measure `p^-2`).
    AllPrimesResidueDegree2,
    /// An infinite sparse set of which `primes` is a known initial segment;
    /// `bound` is the user's certificate for `sum 1/p`.
    SparseSummableList {
        primes: Vec<u64>,
        bound: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        residue_degrees: Option<Vec<u32>>,
    },
}

/// How far a density computation runs through the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Truncation {
    /// All pool primes `p <= bound`.
    Bound(u64),
    /// The first `count` pool primes.
    Count { count: usize },
}

impl PrimePool {
    pub fn explicit(primes: &[u64]) -> Self {
        PrimePool::ExplicitFinite {
            primes: primes.to_vec(),
            residue_degrees: None,
        }
    }

    pub fn validate(&self) -> Result<(), RingError> {
        let bad = |why: String| Err(RingError::InvalidPool(why));
        match self {
            PrimePool::AllPrimesResidueDegree2 => Ok(()),
            PrimePool::ExplicitFinite {
                primes,
                residue_degrees,
            }
            | PrimePool::SparseSummableList {
                primes,
                residue_degrees,
                ..
            } => {
                if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
                    return bad(format!("{p} is not prime"));
                }
                if primes.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("primes must be strictly increasing".into());
                }
                if let Some(f) = residue_degrees {
                    if f.len() != primes.len() {
                        return bad("one residue degree per prime is required".into());
                    }
                    if f.contains(&0) {
                        return bad("residue degrees must be positive".into());
                    }
                }
                if let PrimePool::SparseSummableList { bound, .. } = self {
                    if primes.is_empty() {
                        return bad("a sparse pool needs a known initial segment".into());
                    }
                    let partial: f64 = primes.iter().map(|&p| 1.0 / p as f64).sum();
                    if !bound.is_finite() || partial > *bound {
                        return bad(format!("declared bound {bound} is below the partial sum {partial}"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrimePool::ExplicitFinite { .. })
    }

    pub fn label(&self) -> String {
        match self {
            PrimePool::ExplicitFinite { primes, .. } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", ps.join(","))
            }
            PrimePool::AllPrimesResidueDegree2 => "all primes, f=2".into(),
            PrimePool::SparseSummableList { primes, .. } => format!("sparse, {} known", primes.len()),
        }
    }

    /// The explicitly listed primes (empty for the all-primes pool).
    pub fn known_primes(&self) -> &[u64] {
        match self {
            PrimePool::ExplicitFinite { primes, .. } | PrimePool::SparseSummableList { primes, .. } => primes,
            PrimePool::AllPrimesResidueDegree2 => &[],
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimePool::AllPrimesResidueDegree2 => is_prime(p),
            _ => self.known_primes().binary_search(&p).is_ok(),
        }
    }

    /// Residue degree `f_p`, or `None` if `p` is not in the pool.
    pub fn residue_degree(&self, p: u64) -> Option<u32> {
        match self {
            PrimePool::AllPrimesResidueDegree2 => is_prime(p).then_some(2),
            PrimePool::ExplicitFinite {
                primes,
                residue_degrees,
            }
            | PrimePool::SparseSummableList {
                primes,
                residue_degrees,
                ..
            } => {
                let i = primes.binary_search(&p).ok()?;
                Some(residue_degrees.as_ref().map_or(1, |f| f[i]))
            }
        }
    }

    /// Pool primes selected by a truncation, in increasing order.
    pub fn truncate(&self, t: Truncation) -> Result<Vec<u64>, RingError> {
        let short = |what: String| RingError::TruncationBeyondPool(what);
        match (self, t) {
            (PrimePool::AllPrimesResidueDegree2, Truncation::Bound(b)) => Ok(primes().take_while(|&p| p <= b).collect()),
            (PrimePool::AllPrimesResidueDegree2, Truncation::Count { count }) => Ok(primes().take(count).collect()),
            (_, Truncation::Bound(b)) => {
                let ps = self.known_primes();
                if let PrimePool::SparseSummableList { .. } = self {
                    if ps.last().is_none_or(|&l| l < b) {
                        return Err(short(format!("bound {b} exceeds the known segment of the sparse pool")));
                    }
                }
                Ok(ps.iter().copied().take_while(|&p| p <= b).collect())
            }
            (_, Truncation::Count { count }) => {
                let ps = self.known_primes();
                if count > ps.len() && !self.is_finite() {
                    return Err(short(format!("{count} primes requested, {} known", ps.len())));
                }
                Ok(ps.iter().copied().take(count).collect())
            }
        }
    }

    /// Smallest pool prime outside `excluded`, if one is known.
    pub fn smallest_outside(&self, excluded: &BTreeSet<u64>) -> Option<u64> {
        match self {
            PrimePool::AllPrimesResidueDegree2 => primes().find(|p| !excluded.contains(p)),
            _ => self.known_primes().iter().copied().find(|p| !excluded.contains(p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_json_round_trip() {
        let d: RingDescriptor = serde_json::from_str(r#"{"kind":"PAdicField","p":5}"#).unwrap();
        assert_eq!(d, RingDescriptor::padic(5));
        let a: RingDescriptor =
            serde_json::from_str(r#"{"kind":"RestrictedAdeles","pool":{"kind":"AllPrimesResidueDegree2"}}"#).unwrap();
        assert_eq!(a, RingDescriptor::adeles(PrimePool::AllPrimesResidueDegree2));
        let b: RingDescriptor =
            serde_json::from_str(r#"{"kind":"BqRing","base":{"kind":"FiniteModRing","n":36},"q":6}"#).unwrap();
        assert_eq!(b, RingDescriptor::bq(RingDescriptor::finite(36), 6));
        for d in [d, a, b] {
            let s = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<RingDescriptor>(&s).unwrap(), d);
            d.validate().unwrap();
        }
    }

    #[test]
    fn invalid_descriptors() {
        assert!(RingDescriptor::finite(1).validate().is_err());
        assert!(RingDescriptor::padic(6).validate().is_err());
        assert!(PrimePool::explicit(&[3, 2]).validate().is_err());
        assert!(PrimePool::explicit(&[2, 4]).validate().is_err());
        let sparse = PrimePool::SparseSummableList {
            primes: vec![2, 3],
            bound: 0.5,
            residue_degrees: None,
        };
        assert!(sparse.validate().is_err());
        let nested = RingDescriptor::bq(RingDescriptor::adeles(PrimePool::explicit(&[2])), 1);
        assert!(nested.validate().is_err());
    }

    #[test]
    fn truncation_and_degrees() {
        let all = PrimePool::AllPrimesResidueDegree2;
        assert_eq!(all.truncate(Truncation::Bound(12)).unwrap(), vec![2, 3, 5, 7, 11]);
        assert_eq!(all.truncate(Truncation::Count { count: 25 }).unwrap().last(), Some(&97));
        assert_eq!(all.residue_degree(7), Some(2));
        assert_eq!(all.residue_degree(8), None);
        let fin = PrimePool::explicit(&[2, 3, 5]);
        assert_eq!(fin.residue_degree(3), Some(1));
        assert_eq!(fin.truncate(Truncation::Bound(1)).unwrap(), Vec::<u64>::new());
        let t: Truncation = serde_json::from_str("25").unwrap();
        assert_eq!(t, Truncation::Bound(25));
        let t: Truncation = serde_json::from_str(r#"{"count":25}"#).unwrap();
        assert_eq!(t, Truncation::Count { count: 25 });
    }

    #[test]
    fn free_primes() {
        let all = PrimePool::AllPrimesResidueDegree2;
        assert_eq!(all.smallest_outside(&BTreeSet::from([2, 3])), Some(5));
        let fin = PrimePool::explicit(&[2, 3, 5]);
        assert_eq!(fin.smallest_outside(&BTreeSet::from([2, 3, 5])), None);
    }
}
