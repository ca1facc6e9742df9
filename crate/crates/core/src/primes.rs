//! Small-prime helpers shared by the p-adic and adelic code.

/// Deterministic primality by trial division; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The primes in increasing order, without end.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// The `n`-th prime, counting from 1 (`nth_prime(1) == 2`).
pub fn nth_prime(n: usize) -> Option<u64> {
    n.checked_sub(1).and_then(|i| primes().nth(i))
}
