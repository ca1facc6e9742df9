use std::cmp::{max, min, Ordering};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{is_prime, PAdicError};

/// Default relative precision (number of tracked unit digits).
pub const DEFAULT_PRECISION: u32 = 8;

/// Largest modulus `p^N` allowed for the unit part; products of two units
/// must fit in `u128`.
const MODULUS_LIMIT: u128 = 1 << 63;

/// `p^n` as a `u128`, or `None` when it exceeds the unit-part limit.
pub(crate) fn checked_modulus(p: u64, n: u32) -> Option<u128> {
    let m = (p as u128).checked_pow(n)?;
    (m <= MODULUS_LIMIT).then_some(m)
}

fn pow_u128(p: u64, n: u32) -> u128 {
    (p as u128).pow(n)
}

/// Multiplicative inverse of `u` modulo `m` (`u` coprime to `m`).
pub(crate) fn inverse_mod(u: u128, m: u128) -> u128 {
    let e = (u as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u128
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Every tracked digit vanished: the value lies in `p^abs_precision Z_p`.
    Zero { abs_precision: i64 },
    /// `p^valuation * unit` with `unit` a unit modulo `p^precision`.
    Nonzero {
        valuation: i64,
        unit: u128,
        precision: u32,
    },
}

/// An element of `Q_p` known to a fixed relative precision.
///
/// The value is `p^v * (d_0 + d_1 p + ... + d_{N-1} p^{N-1})` with `d_0 != 0`.
/// A value whose tracked digits all cancel is kept as "zero to precision"
/// together with the power of `p` it is known to be divisible by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    prime: u64,
    repr: Repr,
}

/// Field operation selector for [`padic_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Result of a tracked operation: the value plus the number of leading
/// digits consumed by cancellation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithOutcome {
    pub value: PAdicNumber,
    pub precision_loss: u32,
}

/// Applies `op` to `a` and `b`, reporting any precision lost to cancellation.
pub fn padic_arith(op: ArithOp, a: &PAdicNumber, b: &PAdicNumber) -> Result<ArithOutcome, PAdicError> {
    a.check_prime(b)?;
    match op {
        ArithOp::Add => a.add_tracked(b),
        ArithOp::Sub => a.add_tracked(&b.neg()),
        ArithOp::Mul => Ok(ArithOutcome {
            value: a.mul(b)?,
            precision_loss: 0,
        }),
        ArithOp::Div => Ok(ArithOutcome {
            value: a.div(b)?,
            precision_loss: 0,
        }),
    }
}

impl PAdicNumber {
    fn validate_prime(prime: u64) -> Result<(), PAdicError> {
        if prime < 2 || !is_prime(prime) {
            return Err(PAdicError::InvalidPrime(prime));
        }
        Ok(())
    }

    fn validate(prime: u64, precision: u32) -> Result<u128, PAdicError> {
        Self::validate_prime(prime)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        checked_modulus(prime, precision).ok_or(PAdicError::PrecisionOverflow { prime, precision })
    }

    /// Builds `p^valuation * unit`, where `unit` is reduced modulo `p^precision`.
    pub fn new(prime: u64, valuation: i64, unit: u128, precision: u32) -> Result<Self, PAdicError> {
        let m = Self::validate(prime, precision)?;
        let unit = unit % m;
        if unit.is_multiple_of(prime as u128) {
            return Err(PAdicError::NotAUnit);
        }
        Ok(Self {
            prime,
            repr: Repr::Nonzero {
                valuation,
                unit,
                precision,
            },
        })
    }

    /// Builds the number from its base-`p` unit digits (least significant first).
    pub fn from_digits(prime: u64, valuation: i64, digits: &[u64]) -> Result<Self, PAdicError> {
        let precision = digits.len() as u32;
        Self::validate(prime, precision)?;
        if digits.iter().any(|&d| d >= prime) {
            return Err(PAdicError::Parse(format!("digit out of range for p = {prime}")));
        }
        if digits[0] == 0 {
            return Err(PAdicError::NotAUnit);
        }
        let unit = digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * prime as u128 + d as u128);
        Self::new(prime, valuation, unit, precision)
    }

    /// The zero element known modulo `p^abs_precision`.
    pub fn zero(prime: u64, abs_precision: i64) -> Result<Self, PAdicError> {
        Self::validate_prime(prime)?;
        Ok(Self {
            prime,
            repr: Repr::Zero { abs_precision },
        })
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self, PAdicError> {
        Self::new(prime, 0, 1, precision)
    }

    pub fn from_integer(prime: u64, n: i128, precision: u32) -> Result<Self, PAdicError> {
        Self::from_bigint_ratio(prime, &BigInt::from(n), &BigInt::from(1), precision)
    }

    pub fn from_rational(prime: u64, value: &BigRational, precision: u32) -> Result<Self, PAdicError> {
        Self::from_bigint_ratio(prime, value.numer(), value.denom(), precision)
    }

    fn from_bigint_ratio(prime: u64, num: &BigInt, den: &BigInt, precision: u32) -> Result<Self, PAdicError> {
        let m = Self::validate(prime, precision)?;
        if den.is_zero() {
            return Err(PAdicError::DivisionByZeroToPrecision);
        }
        if num.is_zero() {
            // An exact zero: report it as zero to the requested precision.
            return Self::zero(prime, precision as i64);
        }
        let p = BigInt::from(prime);
        let (vn, un) = split_valuation(num, &p);
        let (vd, ud) = split_valuation(den, &p);
        let modulus = BigInt::from(m);
        let un = un.mod_floor(&modulus).to_u128().unwrap();
        let ud = ud.mod_floor(&modulus).to_u128().unwrap();
        let unit = un * inverse_mod(ud, m) % m;
        Self::new(prime, vn - vd, unit, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `None` for a value that is zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } => Some(valuation),
        }
    }

    /// Relative precision (number of tracked unit digits); zero for a zero value.
    pub fn precision(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { precision, .. } => precision,
        }
    }

    /// The exponent `k` such that the value is known modulo `p^k`.
    pub fn abs_precision(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs_precision } => abs_precision,
            Repr::Nonzero {
                valuation, precision, ..
            } => valuation + precision as i64,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Unit part as an integer modulo `p^precision`.
    pub fn unit(&self) -> Option<u128> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    pub fn unit_digits(&self) -> Vec<u64> {
        match self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Nonzero { unit, precision, .. } => {
                let mut u = unit;
                (0..precision)
                    .map(|_| {
                        let d = (u % self.prime as u128) as u64;
                        u /= self.prime as u128;
                        d
                    })
                    .collect()
            }
        }
    }

    /// Whether the value is a unit of `Z_p`. A zero known only modulo
    /// `p^k` with `k <= 0` carries no information and is reported as
    /// [`PAdicError::PrecisionExhausted`].
    pub fn is_unit(&self) -> Result<bool, PAdicError> {
        match self.repr {
            Repr::Zero { abs_precision } if abs_precision <= 0 => Err(PAdicError::PrecisionExhausted),
            Repr::Zero { .. } => Ok(false),
            Repr::Nonzero { valuation, .. } => Ok(valuation == 0),
        }
    }

    /// Whether the value lies in `Z_p`.
    pub fn is_integral(&self) -> Result<bool, PAdicError> {
        match self.repr {
            Repr::Zero { abs_precision } if abs_precision < 0 => Err(PAdicError::PrecisionExhausted),
            Repr::Zero { .. } => Ok(true),
            Repr::Nonzero { valuation, .. } => Ok(valuation >= 0),
        }
    }

    /// Residue of an integral value modulo `p^k`, if the value is known that far.
    pub fn residue(&self, k: u32) -> Result<u128, PAdicError> {
        if self.abs_precision() < k as i64 {
            return Err(PAdicError::PrecisionExhausted);
        }
        match self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Nonzero { valuation, unit, .. } => {
                if valuation < 0 {
                    return Err(PAdicError::NotIntegral);
                }
                if valuation >= k as i64 {
                    return Ok(0);
                }
                let m = pow_u128(self.prime, k);
                Ok(unit * pow_u128(self.prime, valuation as u32) % m)
            }
        }
    }

    /// Exact rational representative `p^v * unit` of the tracked digits.
    pub fn to_rational(&self) -> BigRational {
        match self.repr {
            Repr::Zero { .. } => BigRational::zero(),
            Repr::Nonzero { valuation, unit, .. } => {
                let p = BigInt::from(self.prime);
                let u = BigRational::from_integer(BigInt::from(unit));
                if valuation >= 0 {
                    u * BigRational::from_integer(num_traits::pow(p, valuation as usize))
                } else {
                    u / BigRational::from_integer(num_traits::pow(p, (-valuation) as usize))
                }
            }
        }
    }

    fn check_prime(&self, other: &Self) -> Result<(), PAdicError> {
        if self.prime != other.prime {
            return Err(PAdicError::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let m = pow_u128(self.prime, precision);
                Self {
                    prime: self.prime,
                    repr: Repr::Nonzero {
                        valuation,
                        unit: m - unit,
                        precision,
                    },
                }
            }
        }
    }

    fn add_tracked(&self, other: &Self) -> Result<ArithOutcome, PAdicError> {
        self.check_prime(other)?;
        let p = self.prime;
        let abs = min(self.abs_precision(), other.abs_precision());
        let lowest = |x: &Self| x.valuation().unwrap_or(x.abs_precision());
        let base = min(lowest(self), lowest(other));
        let input_precision = match (self.valuation(), other.valuation()) {
            (Some(_), Some(_)) => min(self.precision(), other.precision()),
            _ => max(self.precision(), other.precision()),
        };
        if base >= abs {
            return Ok(ArithOutcome {
                value: Self::zero(p, abs)?,
                precision_loss: input_precision,
            });
        }
        let width = (abs - base) as u32;
        let m = pow_u128(p, width);
        let shifted = |x: &Self| -> u128 {
            match x.repr {
                Repr::Zero { .. } => 0,
                Repr::Nonzero { valuation, unit, .. } => {
                    let shift = (valuation - base) as u32;
                    if shift >= width {
                        0
                    } else {
                        (unit % m) * pow_u128(p, shift) % m
                    }
                }
            }
        };
        let sum = (shifted(self) + shifted(other)) % m;
        if sum == 0 {
            return Ok(ArithOutcome {
                value: Self::zero(p, abs)?,
                precision_loss: input_precision,
            });
        }
        let mut cancelled = 0u32;
        let mut s = sum;
        while s.is_multiple_of(p as u128) {
            s /= p as u128;
            cancelled += 1;
        }
        let precision = width - cancelled;
        let value = Self {
            prime: p,
            repr: Repr::Nonzero {
                valuation: base + cancelled as i64,
                unit: s,
                precision,
            },
        };
        Ok(ArithOutcome {
            value,
            precision_loss: input_precision.saturating_sub(precision),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, PAdicError> {
        self.add_tracked(other).map(|o| o.value)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PAdicError> {
        self.add_tracked(&other.neg()).map(|o| o.value)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PAdicError> {
        self.check_prime(other)?;
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs_precision: a }, Repr::Zero { abs_precision: b }) => Self::zero(p, a + b),
            (Repr::Zero { abs_precision }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { abs_precision }) => {
                Self::zero(p, abs_precision + valuation)
            }
            (
                Repr::Nonzero {
                    valuation: va,
                    unit: ua,
                    precision: na,
                },
                Repr::Nonzero {
                    valuation: vb,
                    unit: ub,
                    precision: nb,
                },
            ) => {
                let n = min(*na, *nb);
                let m = pow_u128(p, n);
                Ok(Self {
                    prime: p,
                    repr: Repr::Nonzero {
                        valuation: va + vb,
                        unit: (ua % m) * (ub % m) % m,
                        precision: n,
                    },
                })
            }
        }
    }

    pub fn inverse(&self) -> Result<Self, PAdicError> {
        match self.repr {
            Repr::Zero { .. } => Err(PAdicError::DivisionByZeroToPrecision),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let m = pow_u128(self.prime, precision);
                Ok(Self {
                    prime: self.prime,
                    repr: Repr::Nonzero {
                        valuation: -valuation,
                        unit: inverse_mod(unit, m),
                        precision,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, PAdicError> {
        self.check_prime(other)?;
        self.mul(&other.inverse()?)
    }

    /// Equality modulo the coarser of the two absolute precisions.
    pub fn eq_to_precision(&self, other: &Self) -> Result<bool, PAdicError> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Truncates the unit part to at most `precision` digits.
    pub fn with_precision(&self, precision: u32) -> Result<Self, PAdicError> {
        match self.repr {
            Repr::Zero { .. } => Ok(self.clone()),
            Repr::Nonzero {
                valuation,
                unit,
                precision: current,
            } => Self::new(self.prime, valuation, unit, min(current, precision)),
        }
    }
}

fn split_valuation(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0i64;
    let mut n = n.clone();
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

impl fmt::Display for PAdicNumber {
    /// `p^v * (d0 d1 ...)_p` with digits least significant first, or
    /// `O(p^k)` for a value that is zero to precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs_precision } => write!(f, "O({}^{})", self.prime, abs_precision),
            Repr::Nonzero { valuation, .. } => {
                let digits: Vec<String> = self.unit_digits().iter().map(|d| d.to_string()).collect();
                write!(f, "{}^{} * ({})_{}", self.prime, valuation, digits.join(" "), self.prime)
            }
        }
    }
}

impl FromStr for PAdicNumber {
    type Err = PAdicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| PAdicError::Parse(format!("{why}: {s:?}"));
        let s = s.trim();
        let parse_power = |t: &str| -> Result<(u64, i64), PAdicError> {
            let (p, e) = t.trim().split_once('^').ok_or_else(|| bad("expected p^v"))?;
            let p = p.trim().parse::<u64>().map_err(|_| bad("bad prime"))?;
            let e = e.trim().parse::<i64>().map_err(|_| bad("bad exponent"))?;
            Ok((p, e))
        };
        if let Some(inner) = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let (p, k) = parse_power(inner)?;
            return Self::zero(p, k);
        }
        let (power, rest) = s.split_once('*').ok_or_else(|| bad("expected '*'"))?;
        let (p, v) = parse_power(power)?;
        let rest = rest.trim();
        let rest = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let (digits, suffix) = rest.split_once(')').ok_or_else(|| bad("expected ')'"))?;
        let suffix_prime = suffix
            .trim()
            .strip_prefix('_')
            .and_then(|q| q.parse::<u64>().ok())
            .ok_or_else(|| bad("expected _p suffix"))?;
        if suffix_prime != p {
            return Err(PAdicError::PrimeMismatch(p, suffix_prime));
        }
        let digits = digits
            .split_whitespace()
            .map(|d| d.parse::<u64>().map_err(|_| bad("bad digit")))
            .collect::<Result<Vec<_>, _>>()?;
        if digits.is_empty() {
            return Err(bad("no digits"));
        }
        Self::from_digits(p, v, &digits)
    }
}

/// Orders by valuation only (larger valuation = p-adically smaller); used for
/// ultrametric checks, not as a total order on values.
pub fn compare_valuation(a: &PAdicNumber, b: &PAdicNumber) -> Ordering {
    let key = |x: &PAdicNumber| x.valuation().unwrap_or(i64::MAX);
    key(a).cmp(&key(b))
}

impl PAdicNumber {
    /// `|x|_p` as an exact rational (`0` for a value that is zero to precision).
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) => {
                let p = BigInt::from(self.prime);
                let pv = BigRational::from_integer(num_traits::pow(p, v.unsigned_abs() as usize));
                if v >= 0 {
                    pv.recip()
                } else {
                    pv
                }
            }
        }
    }

    /// Whether the value is known to be an integer (fits into an `i128`)
    /// as a small positive or negative representative.
    pub fn as_small_integer(&self) -> Option<i128> {
        let r = self.to_rational();
        if !r.is_integer() {
            return None;
        }
        let n = r.to_integer().to_i128()?;
        let m = (self.prime as i128).checked_pow(self.abs_precision().max(0) as u32);
        // Prefer the signed representative closest to zero.
        Some(match m {
            Some(m) if n > m / 2 => n - m,
            _ => n,
        })
    }
}

impl PAdicNumber {
    /// The rational `a/b` with `|a|, |b| <= sqrt(p^N / 2)` congruent to the
    /// unit part modulo `p^N`, scaled by `p^v`; `None` if no such small
    /// fraction exists. Exact zero maps to `0`.
    pub fn reconstruct_rational(&self) -> Option<BigRational> {
        let Repr::Nonzero {
            valuation,
            unit,
            precision,
        } = self.repr
        else {
            return Some(BigRational::zero());
        };
        let m = pow_u128(self.prime, precision) as i128;
        let bound = ((m / 2) as f64).sqrt() as i128;
        let (mut r0, mut r1) = (m, unit as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 > bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.abs() > bound || t1.gcd(&m) != 1 {
            return None;
        }
        let frac = BigRational::new(BigInt::from(r1), BigInt::from(t1));
        let p = BigRational::from_integer(BigInt::from(self.prime));
        let scale = num_traits::pow(p, valuation.unsigned_abs() as usize);
        Some(if valuation >= 0 { frac * scale } else { frac / scale })
    }
}

impl serde::Serialize for PAdicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PAdicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u64, n: i128) -> PAdicNumber {
        PAdicNumber::from_integer(p, n, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn integer_multiplication_embeds() {
        let six = q(5, 2).mul(&q(5, 3)).unwrap();
        assert_eq!(six, q(5, 6));
        assert_eq!(six.valuation(), Some(0));
    }

    #[test]
    fn carry_raises_valuation() {
        let out = padic_arith(ArithOp::Add, &q(5, 1), &q(5, 4)).unwrap();
        assert_eq!(out.value.valuation(), Some(1));
        assert_eq!(out.value.unit_digits()[0], 1);
        assert_eq!(out.value.unit(), Some(1));
        assert_eq!(out.precision_loss, 1);
        assert_eq!(out.value.precision(), DEFAULT_PRECISION - 1);
    }

    #[test]
    fn inverse_of_two_mod_125() {
        // Extended Euclid: 2 * 63 = 126 = 1 + 125.
        let inv = PAdicNumber::from_integer(5, 2, 3).unwrap().inverse().unwrap();
        assert_eq!(inv.unit(), Some(63));
        assert_eq!(2 * 63 % 125, 1);
    }

    #[test]
    fn full_cancellation_is_zero_to_precision() {
        let out = padic_arith(ArithOp::Sub, &q(7, 3), &q(7, 3)).unwrap();
        assert!(out.value.is_zero());
        assert_eq!(out.value.abs_precision(), DEFAULT_PRECISION as i64);
        assert_eq!(out.precision_loss, DEFAULT_PRECISION);
        assert_eq!(out.value.is_unit(), Ok(false));
    }

    #[test]
    fn uninformative_zero_has_no_unit_verdict() {
        let z = PAdicNumber::zero(3, 0).unwrap();
        assert_eq!(z.is_unit(), Err(PAdicError::PrecisionExhausted));
    }

    #[test]
    fn errors() {
        let a = q(5, 2);
        let b = q(7, 2);
        assert_eq!(a.add(&b), Err(PAdicError::PrimeMismatch(5, 7)));
        let z = PAdicNumber::zero(5, 8).unwrap();
        assert_eq!(a.div(&z), Err(PAdicError::DivisionByZeroToPrecision));
        assert!(matches!(PAdicNumber::one(4, 3), Err(PAdicError::InvalidPrime(4))));
        assert!(matches!(
            PAdicNumber::one(97, 40),
            Err(PAdicError::PrecisionOverflow { .. })
        ));
    }

    #[test]
    fn rational_embedding() {
        let half = PAdicNumber::from_rational(5, &BigRational::new(1.into(), 2.into()), 4).unwrap();
        let two = PAdicNumber::from_integer(5, 2, 4).unwrap();
        assert!(half.mul(&two).unwrap().eq_to_precision(&PAdicNumber::one(5, 4).unwrap()).unwrap());
        let x = PAdicNumber::from_rational(3, &BigRational::new(2.into(), 9.into()), 4).unwrap();
        assert_eq!(x.valuation(), Some(-2));
    }

    #[test]
    fn textual_form() {
        let x = PAdicNumber::from_integer(5, 5 * 7, 4).unwrap();
        assert_eq!(x.to_string(), "5^1 * (2 1 0 0)_5");
        assert_eq!(x.to_string().parse::<PAdicNumber>().unwrap(), x);
        let z = PAdicNumber::zero(3, -2).unwrap();
        assert_eq!(z.to_string(), "O(3^-2)");
        assert_eq!("O(3^-2)".parse::<PAdicNumber>().unwrap(), z);
        assert!("5^0 * (0 1)_5".parse::<PAdicNumber>().is_err());
        assert!("5^0 * (1 1)_7".parse::<PAdicNumber>().is_err());
    }

    #[test]
    fn rational_reconstruction() {
        let half = PAdicNumber::from_rational(5, &BigRational::new(1.into(), 2.into()), 8).unwrap();
        assert_eq!(half.reconstruct_rational(), Some(BigRational::new(1.into(), 2.into())));
        let x = PAdicNumber::from_rational(3, &BigRational::new((-7).into(), 18.into()), 8).unwrap();
        assert_eq!(x.reconstruct_rational(), Some(BigRational::new((-7).into(), 18.into())));
        assert_eq!(q(5, 0).reconstruct_rational(), Some(BigRational::zero()));
    }

    #[test]
    fn serde_uses_textual_form() {
        let x = q(5, 35);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"5^1 * (2 1 0 0 0 0 0 0)_5\"");
        assert_eq!(serde_json::from_str::<PAdicNumber>(&json).unwrap(), x);
    }

    #[test]
    fn small_integer_representative() {
        assert_eq!(q(5, -1).as_small_integer(), Some(-1));
        assert_eq!(q(5, 42).as_small_integer(), Some(42));
    }
}
