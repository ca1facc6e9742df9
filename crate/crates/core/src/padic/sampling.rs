use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{PAdicError, PAdicNumber};

/// Draws `precision` i.i.d. uniform base-`p` digits, least significant first.
pub fn sample_digits<R: Rng + ?Sized>(rng: &mut R, prime: u64, precision: u32) -> Vec<u64> {
    (0..precision).map(|_| rng.gen_range(0..prime)).collect()
}

/// Raw digit vector of one Haar sample on `Z_p` for the given seed.
pub fn haar_sample_digits(prime: u64, precision: u32, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_digits(&mut rng, prime, precision)
}

fn from_sampled_digits(prime: u64, digits: &[u64]) -> Result<PAdicNumber, PAdicError> {
    match digits.iter().position(|&d| d != 0) {
        // Every sampled digit vanished: only divisibility by p^N is known.
        None => PAdicNumber::zero(prime, digits.len() as i64),
        Some(v) => PAdicNumber::from_digits(prime, v as i64, &digits[v..]),
    }
}

/// One sample from normalised Haar measure on `Z_p`, known modulo `p^precision`.
pub fn haar_sample(prime: u64, precision: u32, seed: u64) -> Result<PAdicNumber, PAdicError> {
    PAdicNumber::one(prime, precision)?;
    from_sampled_digits(prime, &haar_sample_digits(prime, precision, seed))
}

/// `n` Haar samples drawn over `shards` independent ChaCha streams.
///
/// Shard `i` uses stream `i` of the generator seeded with `seed`, so the
/// result depends only on `(seed, shards)`, not on thread scheduling.
pub fn haar_sample_batch(
    prime: u64,
    precision: u32,
    n: usize,
    seed: u64,
    shards: usize,
) -> Result<Vec<PAdicNumber>, PAdicError> {
    PAdicNumber::one(prime, precision)?;
    let shards = shards.max(1);
    let per_shard: Vec<usize> = (0..shards).map(|i| n / shards + usize::from(i < n % shards)).collect();
    let chunks: Vec<Vec<PAdicNumber>> = per_shard
        .par_iter()
        .enumerate()
        .map(|(i, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            (0..count)
                .map(|_| from_sampled_digits(prime, &sample_digits(&mut rng, prime, precision)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let a = haar_sample_digits(5, 4, 17);
        let b = haar_sample_digits(5, 4, 17);
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|&d| d < 5));
        assert_eq!(haar_sample(5, 4, 17).unwrap(), haar_sample(5, 4, 17).unwrap());
        let x = haar_sample_batch(7, 3, 1000, 3, 4).unwrap();
        let y = haar_sample_batch(7, 3, 1000, 3, 4).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 1000);
    }

    #[test]
    fn unit_frequency_matches_measure() {
        // P(unit) = 1 - 1/p = 4/5; three standard errors of a binomial proportion.
        let n = 100_000usize;
        let samples = haar_sample_batch(5, 4, n, 2024, 8).unwrap();
        let units = samples.iter().filter(|x| x.is_unit().unwrap()).count() as f64;
        let est = units / n as f64;
        let se = (0.8f64 * 0.2 / n as f64).sqrt();
        assert!((est - 0.8).abs() < 3.0 * se, "estimate {est}");
    }

    #[test]
    fn digit_frequencies_pass_chi_squared() {
        // 5 categories, 4 degrees of freedom: the 0.999 quantile is 18.47.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut counts = [0u64; 5];
        let draws = 20_000;
        for _ in 0..draws / 4 {
            for d in sample_digits(&mut rng, 5, 4) {
                counts[d as usize] += 1;
            }
        }
        let expected = draws as f64 / 5.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 18.47, "chi2 = {chi2}");
    }

    #[test]
    fn all_zero_digits_give_zero_to_precision() {
        let z = from_sampled_digits(3, &[0, 0, 0]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.abs_precision(), 3);
        let x = from_sampled_digits(3, &[0, 2, 1]).unwrap();
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.precision(), 2);
    }
}
