use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{PrimePool, RingDescriptor, RingError, Truncation};

/// Number of independent sampling streams; fixed so that estimates depend
/// only on the seed.
const SHARDS: usize = 8;

/// Monte Carlo estimate of the Haar measure of `prod_{p in T} O_p^*`
/// inside `prod_{p in T} O_p`, next to its exact value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub primes: Vec<u64>,
    pub samples: usize,
    pub unit_samples: usize,
    pub estimate: f64,
    pub std_error: f64,
    #[serde(serialize_with = "ser_rational")]
    pub closed_form: BigRational,
    pub closed_form_f64: f64,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl DensityEstimate {
    /// `|estimate - closed_form|` in units of the standard error of a
    /// proportion with the closed-form success probability.
    pub fn z_score(&self) -> f64 {
        let p = self.closed_form_f64;
        let se = (p * (1.0 - p) / self.samples as f64).sqrt();
        if se == 0.0 {
            return if self.estimate == p { 0.0 } else { f64::INFINITY };
        }
        (self.estimate - p).abs() / se
    }
}

fn pool_of(desc: &RingDescriptor) -> Result<&PrimePool, RingError> {
    match desc {
        RingDescriptor::RestrictedAdeles { pool, .. } => Ok(pool),
        _ => Err(RingError::DescriptorMismatch(desc.label())),
    }
}

/// `prod_{p in T} (1 - p^{-f_p})` as an exact rational.
pub fn unit_density_closed_form(pool: &PrimePool, t: Truncation) -> Result<BigRational, RingError> {
    let mut acc = BigRational::one();
    for p in pool.truncate(t)? {
        let f = pool.residue_degree(p).expect("truncated primes are in the pool");
        let q = num_traits::pow(BigInt::from(p), f as usize);
        acc *= BigRational::one() - BigRational::new(BigInt::one(), q);
    }
    Ok(acc)
}

/// Samples `n_samples` points of `prod_{p in T} O_p` and counts those whose
/// every component is a unit. Only the residue of each component modulo the
/// maximal ideal decides this, so each component is drawn as a uniform
/// element of the residue field of size `p^f`, with zero the only non-unit.
pub fn unit_density_estimate(
    desc: &RingDescriptor,
    t: Truncation,
    n_samples: usize,
    seed: u64,
) -> Result<DensityEstimate, RingError> {
    let pool = pool_of(desc)?;
    pool.validate()?;
    if n_samples == 0 {
        return Err(RingError::InvalidElement("at least one sample is required".into()));
    }
    let primes = pool.truncate(t)?;
    let fields: Vec<u64> = primes
        .iter()
        .map(|&p| p.pow(pool.residue_degree(p).expect("pool prime")))
        .collect();
    let per_shard: Vec<usize> = (0..SHARDS)
        .map(|i| n_samples / SHARDS + usize::from(i < n_samples % SHARDS))
        .collect();
    let unit_samples: usize = per_shard
        .par_iter()
        .enumerate()
        .map(|(i, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            (0..count)
                .filter(|_| {
                    // Draw every component so the stream layout does not
                    // depend on earlier outcomes.
                    fields.iter().map(|&q| rng.gen_range(0..q)).filter(|&d| d == 0).count() == 0
                })
                .count()
        })
        .sum();
    let estimate = unit_samples as f64 / n_samples as f64;
    let std_error = (estimate * (1.0 - estimate) / n_samples as f64).sqrt();
    let closed_form = unit_density_closed_form(pool, t)?;
    let closed_form_f64 = closed_form.to_f64().unwrap_or(f64::NAN);
    Ok(DensityEstimate {
        primes,
        samples: n_samples,
        unit_samples,
        estimate,
        std_error,
        closed_form,
        closed_form_f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn closed_forms() {
        let pool = PrimePool::explicit(&[2, 3, 5]);
        assert_eq!(unit_density_closed_form(&pool, Truncation::Bound(5)).unwrap(), rat(4, 15));
        let f2 = PrimePool::AllPrimesResidueDegree2;
        assert_eq!(unit_density_closed_form(&f2, Truncation::Bound(2)).unwrap(), rat(3, 4));
        assert_eq!(unit_density_closed_form(&f2, Truncation::Bound(1)).unwrap(), rat(1, 1));
    }

    #[test]
    fn estimate_within_three_sigma() {
        let desc = RingDescriptor::adeles(PrimePool::explicit(&[2, 3, 5]));
        let est = unit_density_estimate(&desc, Truncation::Bound(5), 100_000, 7).unwrap();
        assert!(est.z_score() < 3.0, "{est:?}");
        let again = unit_density_estimate(&desc, Truncation::Bound(5), 100_000, 7).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn empty_truncation_is_certain() {
        let desc = RingDescriptor::adeles(PrimePool::AllPrimesResidueDegree2);
        let est = unit_density_estimate(&desc, Truncation::Count { count: 0 }, 10, 1).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.closed_form, rat(1, 1));
    }

    #[test]
    fn degree_two_closed_form_decreases_to_a_positive_limit() {
        // Every added factor is below 1, so partial products decrease; they
        // stay above the full product 6/pi^2 = 0.6079..., which exceeds 3/5.
        let f2 = PrimePool::AllPrimesResidueDegree2;
        let mut last = BigRational::one();
        for n in 1..=25 {
            let c = unit_density_closed_form(&f2, Truncation::Count { count: n }).unwrap();
            assert!(c < last);
            assert!(c > rat(3, 5));
            last = c;
        }
    }
}
