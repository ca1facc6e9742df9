//! Exact arithmetic in `Q_p` and exact Haar integration of locally constant
//! functions.

mod locally_constant;
mod number;
mod sampling;

use thiserror::Error;

pub use crate::primes::is_prime;
pub use locally_constant::{LocallyConstantFunction, ScaledPoint};
pub use number::{compare_valuation, padic_arith, ArithOp, ArithOutcome, PAdicNumber, DEFAULT_PRECISION};
pub use sampling::{haar_sample, haar_sample_batch, haar_sample_digits, sample_digits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PAdicError {
    #[error("operands live over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by a value that is zero to precision")]
    DivisionByZeroToPrecision,
    #[error("cancellation consumed every tracked digit")]
    PrecisionExhausted,
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("p^N does not fit the unit representation (p = {prime}, N = {precision})")]
    PrecisionOverflow { prime: u64, precision: u32 },
    #[error("unit part is divisible by p")]
    NotAUnit,
    #[error("value is not in Z_p")]
    NotIntegral,
    #[error("malformed locally constant function: {0}")]
    MalformedFunction(String),
    #[error("cannot parse p-adic number: {0}")]
    Parse(String),
}
