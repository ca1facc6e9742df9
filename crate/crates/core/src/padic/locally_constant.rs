use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PAdicError, PAdicNumber};

/// Largest value table accepted (all arities).
const MAX_TABLE: usize = 1 << 22;

/// A rational point `num * p^exp` of `Q_p` (the prime is carried by the caller).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledPoint {
    pub num: i128,
    pub exp: i32,
}

impl ScaledPoint {
    pub const ZERO: ScaledPoint = ScaledPoint { num: 0, exp: 0 };

    pub fn integer(n: i128) -> Self {
        Self { num: n, exp: 0 }
    }

    pub fn new(num: i128, exp: i32) -> Self {
        Self { num, exp }
    }

    pub fn times(self, other: Self) -> Self {
        Self {
            num: self.num * other.num,
            exp: self.exp + other.exp,
        }
    }

    pub fn add(self, other: Self, p: u64) -> Self {
        let e = self.exp.min(other.exp);
        let lift = |x: Self| x.num * (p as i128).pow((x.exp - e) as u32);
        Self {
            num: lift(self) + lift(other),
            exp: e,
        }
    }

    /// p-adic valuation, `None` for zero.
    pub fn valuation(self, p: u64) -> Option<i64> {
        if self.num == 0 {
            return None;
        }
        let mut n = self.num;
        let mut v = self.exp as i64;
        while n % p as i128 == 0 {
            n /= p as i128;
            v += 1;
        }
        Some(v)
    }

    pub fn to_rational(self, p: u64) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.num));
        let pe = BigRational::from_integer(num_traits::pow(BigInt::from(p), self.exp.unsigned_abs() as usize));
        if self.exp >= 0 {
            n * pe
        } else {
            n / pe
        }
    }
}

/// A compactly supported function on `Q_p` (arity 1) or `Q_p x Q_p` (arity 2)
/// that is constant on cosets of `p^level Z_p` and vanishes outside
/// `p^-support_radius Z_p`.
///
/// Values are tabulated row-major over coset indices; the coset with index `j`
/// has representative `j / p^support_radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocallyConstantFunction {
    prime: u64,
    level: u32,
    support_radius: u32,
    arity: usize,
    per_axis: usize,
    values: Vec<BigRational>,
}

impl LocallyConstantFunction {
    pub fn new(
        prime: u64,
        level: u32,
        support_radius: u32,
        arity: usize,
        values: Vec<BigRational>,
    ) -> Result<Self, PAdicError> {
        let malformed = |s: String| PAdicError::MalformedFunction(s);
        if !super::is_prime(prime) {
            return Err(PAdicError::InvalidPrime(prime));
        }
        if !(1..=2).contains(&arity) {
            return Err(malformed(format!("arity {arity} not in {{1, 2}}")));
        }
        let per_axis = cosets_per_axis(prime, level, support_radius)
            .ok_or_else(|| malformed("coset table too large".into()))?;
        let expected = per_axis
            .checked_pow(arity as u32)
            .filter(|&n| n <= MAX_TABLE)
            .ok_or_else(|| malformed("coset table too large".into()))?;
        if values.len() != expected {
            return Err(malformed(format!(
                "table has {} entries, level {level} radius {support_radius} needs {expected}",
                values.len()
            )));
        }
        Ok(Self {
            prime,
            level,
            support_radius,
            arity,
            per_axis,
            values,
        })
    }

    /// Tabulates `f` at the coset representatives.
    pub fn from_fn(
        prime: u64,
        level: u32,
        support_radius: u32,
        arity: usize,
        f: impl Fn(&[ScaledPoint]) -> BigRational,
    ) -> Result<Self, PAdicError> {
        let per_axis = cosets_per_axis(prime, level, support_radius)
            .filter(|&n| n <= MAX_TABLE)
            .ok_or_else(|| PAdicError::MalformedFunction("coset table too large".into()))?;
        let total = per_axis.checked_pow(arity as u32).unwrap_or(usize::MAX);
        if total > MAX_TABLE {
            return Err(PAdicError::MalformedFunction("coset table too large".into()));
        }
        let rep = |j: usize| ScaledPoint::new(j as i128, -(support_radius as i32));
        let values = (0..total)
            .map(|idx| {
                let pts: Vec<ScaledPoint> = if arity == 1 {
                    vec![rep(idx)]
                } else {
                    vec![rep(idx / per_axis), rep(idx % per_axis)]
                };
                f(&pts)
            })
            .collect();
        Self::new(prime, level, support_radius, arity, values)
    }

    /// Indicator of the set of cosets on which `pred` holds at the representative.
    pub fn indicator(
        prime: u64,
        level: u32,
        support_radius: u32,
        arity: usize,
        pred: impl Fn(&[ScaledPoint]) -> bool,
    ) -> Result<Self, PAdicError> {
        Self::from_fn(prime, level, support_radius, arity, |x| {
            if pred(x) {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn support_radius(&self) -> u32 {
        self.support_radius
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn cosets_per_axis(&self) -> usize {
        self.per_axis
    }

    /// Representative `j / p^radius` of the coset with axis index `j`.
    pub fn coset_rep(&self, j: usize) -> ScaledPoint {
        ScaledPoint::new(j as i128, -(self.support_radius as i32))
    }

    /// Axis index of the coset containing `x`, or `None` outside the support ball.
    pub fn coset_index(&self, x: ScaledPoint) -> Option<usize> {
        coset_index(self.prime, self.level, self.support_radius, x)
    }

    pub fn value_at(&self, pts: &[ScaledPoint]) -> BigRational {
        assert_eq!(pts.len(), self.arity, "arity mismatch");
        match self.flat_index(pts) {
            Some(i) => self.values[i].clone(),
            None => BigRational::zero(),
        }
    }

    /// Flat table index for a point, `None` outside the support.
    pub fn flat_index(&self, pts: &[ScaledPoint]) -> Option<usize> {
        let per_axis = self.cosets_per_axis();
        pts.iter()
            .try_fold(0usize, |acc, &x| Some(acc * per_axis + self.coset_index(x)?))
    }

    /// Evaluates at p-adic arguments known at least to the function's level.
    pub fn evaluate(&self, args: &[PAdicNumber]) -> Result<BigRational, PAdicError> {
        if args.len() != self.arity {
            return Err(PAdicError::MalformedFunction(format!(
                "expected {} arguments, got {}",
                self.arity,
                args.len()
            )));
        }
        let m = self.support_radius as i64;
        let mut pts = Vec::with_capacity(args.len());
        for a in args {
            if a.prime() != self.prime {
                return Err(PAdicError::PrimeMismatch(self.prime, a.prime()));
            }
            match a.valuation() {
                Some(v) if v < -m => return Ok(BigRational::zero()),
                _ => {}
            }
            if a.abs_precision() < self.level as i64 {
                return Err(PAdicError::PrecisionExhausted);
            }
            pts.push(match (a.valuation(), a.unit()) {
                (Some(v), Some(u)) => ScaledPoint::new(u as i128, v as i32),
                _ => ScaledPoint::ZERO,
            });
        }
        Ok(self.value_at(&pts))
    }

    /// Integral against Haar measure normalised so that `Z_p` has measure one
    /// (product measure for arity 2). Every coset of `p^k Z_p` has measure `p^-k`.
    pub fn haar_integral(&self) -> BigRational {
        let total: BigRational = self.values.iter().sum();
        let cell = num_traits::pow(BigInt::from(self.prime), self.level as usize * self.arity);
        total / BigRational::from_integer(cell)
    }

    /// Re-tabulates the function at a finer level and/or wider radius.
    pub fn refine(&self, level: u32, support_radius: u32) -> Result<Self, PAdicError> {
        if level < self.level || support_radius < self.support_radius {
            return Err(PAdicError::MalformedFunction("refinement must not coarsen".into()));
        }
        Self::from_fn(self.prime, level, support_radius, self.arity, |x| self.value_at(x))
    }

    /// Pointwise linear combination `a*self + b*other` on a common grid.
    pub fn combine(&self, a: &BigRational, other: &Self, b: &BigRational) -> Result<Self, PAdicError> {
        if self.prime != other.prime {
            return Err(PAdicError::PrimeMismatch(self.prime, other.prime));
        }
        if self.arity != other.arity {
            return Err(PAdicError::MalformedFunction("arity mismatch".into()));
        }
        let level = self.level.max(other.level);
        let radius = self.support_radius.max(other.support_radius);
        Self::from_fn(self.prime, level, radius, self.arity, |x| {
            a * self.value_at(x) + b * other.value_at(x)
        })
    }
}

fn cosets_per_axis(p: u64, level: u32, radius: u32) -> Option<usize> {
    (p as usize).checked_pow(level.checked_add(radius)?)
}

/// Axis index of the coset of `p^level Z_p` containing `x` inside
/// `p^-radius Z_p`, or `None` when `x` lies outside that ball.
pub(crate) fn coset_index(p: u64, level: u32, radius: u32, x: ScaledPoint) -> Option<usize> {
    let modulus = (p as i128).pow(level + radius);
    if x.num == 0 {
        return Some(0);
    }
    let v = x.valuation(p)?;
    if v < -(radius as i64) {
        return None;
    }
    // y = x * p^radius is p-integral; reduce it modulo p^(level + radius).
    let shift = x.exp as i64 + radius as i64;
    if shift >= (level + radius) as i64 {
        return Some(0);
    }
    let y = if shift >= 0 {
        x.num.rem_euclid(modulus) * (p as i128).pow(shift as u32) % modulus
    } else {
        (x.num / (p as i128).pow((-shift) as u32)).rem_euclid(modulus)
    };
    Some(y as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn measure_of_integers_units_and_ideal() {
        let zp = LocallyConstantFunction::new(5, 0, 0, 1, vec![q(1, 1)]).unwrap();
        assert_eq!(zp.haar_integral(), q(1, 1));
        let units = LocallyConstantFunction::indicator(5, 1, 0, 1, |x| x[0].num % 5 != 0).unwrap();
        assert_eq!(units.haar_integral(), q(4, 5));
        // 25 Z_5: one coset out of the 25 level-2 cosets of Z_5.
        let ideal = LocallyConstantFunction::indicator(5, 2, 0, 1, |x| x[0].num == 0).unwrap();
        assert_eq!(ideal.haar_integral(), q(1, 25));
    }

    #[test]
    fn single_coset_measure_is_p_to_minus_k() {
        for p in [2u64, 3, 5, 7] {
            for k in 0..=4u32 {
                let f = LocallyConstantFunction::indicator(p, k, 1, 1, |x| x[0].num == 1).unwrap();
                let expected = BigRational::new(1.into(), BigInt::from(p).pow(k));
                assert_eq!(f.haar_integral(), expected, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(
            LocallyConstantFunction::new(5, 1, 0, 1, vec![q(1, 1); 4]),
            Err(PAdicError::MalformedFunction(_))
        ));
        assert!(matches!(
            LocallyConstantFunction::new(5, 0, 0, 3, vec![q(1, 1)]),
            Err(PAdicError::MalformedFunction(_))
        ));
    }

    #[test]
    fn evaluation_is_table_lookup() {
        let f = LocallyConstantFunction::from_fn(3, 2, 1, 1, |x| BigRational::from_integer(x[0].num.into())).unwrap();
        // 1/3 + 2 has p^1-scaled residue 1 + 6 = 7 modulo 27.
        let x = PAdicNumber::from_rational(3, &q(7, 3), 5).unwrap();
        assert_eq!(f.evaluate(&[x]).unwrap(), q(7, 1));
        let far = PAdicNumber::from_rational(3, &q(1, 9), 5).unwrap();
        assert_eq!(f.evaluate(&[far]).unwrap(), q(0, 1));
        let coarse = PAdicNumber::zero(3, 1).unwrap();
        assert_eq!(f.evaluate(&[coarse]), Err(PAdicError::PrecisionExhausted));
    }

    #[test]
    fn refinement_preserves_integral() {
        let f = LocallyConstantFunction::from_fn(3, 1, 1, 2, |x| BigRational::from_integer((x[0].num * 2 + x[1].num).into())).unwrap();
        let g = f.refine(2, 2).unwrap();
        assert_eq!(f.haar_integral(), g.haar_integral());
    }

    #[test]
    fn coset_index_handles_negative_and_fractional_points() {
        // -1 = 4 + 4*5 + ... so it sits in coset 24 of 25 Z_5 inside Z_5.
        assert_eq!(coset_index(5, 2, 0, ScaledPoint::integer(-1)), Some(24));
        assert_eq!(coset_index(5, 1, 1, ScaledPoint::new(3, -1)), Some(3));
        assert_eq!(coset_index(5, 1, 1, ScaledPoint::new(3, -2)), None);
        assert_eq!(coset_index(5, 1, 1, ScaledPoint::new(10, -2)), Some(2));
    }
}
