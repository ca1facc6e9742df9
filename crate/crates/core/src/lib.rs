//! Exact, desk-scale verification of bicrossed-product quantum groups built
//! from matched pairs of groups.
//!
//! The crate is organised bottom-up: [`padic`] supplies exact arithmetic in
//! `Q_p`, [`ring`] the locally compact rings used as coefficients,
//! [`matched`] matched pairs of groups and their factorizations, [`unitary`]
//! the bicrossed multiplicative unitary with its slice algebras, and
//! [`pentagon`] explicit pentagonal transformations over the rationals.

pub mod linalg;
pub mod matched;
pub mod padic;
pub mod pentagon;
pub mod primes;
pub mod ring;
pub mod unitary;
