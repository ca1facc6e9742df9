use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::PentagonError;

/// Multivariate polynomial with rational coefficients, keyed by exponent
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of {nvars}");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// Two-variable polynomial from `coeffs[i][j]`, the coefficient of `x^i y^j`.
    pub fn from_grid(coeffs: &[Vec<BigRational>]) -> Self {
        let mut p = Self::zero(2);
        for (i, row) in coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                p.add_term(vec![i as u32, j as u32], c.clone());
            }
        }
        p
    }

    /// Parses a JSON grid of numbers or rational strings such as `"-3/2"`.
    pub fn from_json(v: &Value) -> Result<Self, PentagonError> {
        let rows = v
            .as_array()
            .ok_or_else(|| PentagonError::MalformedMap("polynomial must be an array of rows".into()))?;
        let grid = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| PentagonError::MalformedMap("polynomial row must be an array".into()))?
                    .iter()
                    .map(parse_coefficient)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_grid(&grid))
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent vectors with their nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "wrong number of coordinates");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, c * BigRational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Substitutes a rational function for each variable.
    pub fn compose(&self, args: &[RationalFunction]) -> RationalFunction {
        assert_eq!(args.len(), self.nvars, "wrong number of substitutions");
        let nv = args.first().map_or(0, RationalFunction::nvars);
        let mut acc = RationalFunction::from_poly(Self::zero(nv));
        for (e, c) in &self.terms {
            let mut term = RationalFunction::from_poly(Self::constant(nv, c.clone()));
            for (&k, f) in e.iter().zip(args) {
                for _ in 0..k {
                    term = term.mul(f);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

fn parse_coefficient(v: &Value) -> Result<BigRational, PentagonError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| PentagonError::MalformedMap(format!("coefficient {n} is not an integer; use a string"))),
        Value::String(s) => s
            .trim()
            .parse::<BigRational>()
            .map_err(|_| PentagonError::MalformedMap(format!("bad rational coefficient {s:?}"))),
        other => Err(PentagonError::MalformedMap(format!("bad coefficient {other}"))),
    }
}

/// A quotient of polynomials, kept unreduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PentagonError> {
        if num.nvars != den.nvars {
            return Err(PentagonError::MalformedMap("numerator and denominator in different variables".into()));
        }
        if den.is_zero() {
            return Err(PentagonError::MalformedMap("zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.nvars);
        Self { num: p, den }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        Self {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    /// `None` on the zero function.
    pub fn recip(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// `None` where the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }

    /// Quotient rule.
    pub fn derivative(&self, i: usize) -> Self {
        Self {
            num: self.num.derivative(i).mul(&self.den).sub(&self.num.mul(&self.den.derivative(i))),
            den: self.den.mul(&self.den),
        }
    }

    /// Substitutes `args[k]` for variable `k`.
    pub fn compose(&self, args: &[RationalFunction]) -> Self {
        let n = self.num.compose(args);
        let d = self.den.compose(args);
        // n / d with both rational: (n.num d.den) / (n.den d.num).
        Self {
            num: n.num.mul(&d.den),
            den: n.den.mul(&d.num),
        }
    }
}
