use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use super::poly::{Poly, RationalFunction};
use super::PentagonError;

/// Where the coordinates of a map live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    PositiveRationals,
    OpenUnitIntervalRationals,
    /// All of `Q`, minus the excluded locus of the map.
    FullRationals,
}

/// Numerators and denominators of sampled rationals are at most this.
pub const SAMPLE_BOUND: i64 = 10_000;

impl Domain {
    pub fn parse(s: &str) -> Result<Self, PentagonError> {
        match s {
            "positive_rationals" => Ok(Self::PositiveRationals),
            "open_unit_interval_rationals" => Ok(Self::OpenUnitIntervalRationals),
            "full_rationals" => Ok(Self::FullRationals),
            other => Err(PentagonError::MalformedMap(format!("unknown domain {other:?}"))),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            Self::PositiveRationals => x.is_positive(),
            Self::OpenUnitIntervalRationals => x.is_positive() && *x < BigRational::one(),
            Self::FullRationals => true,
        }
    }

    /// Positive: numerator and denominator uniform in `[1, 10^4]`.
    /// Unit interval: two distinct such integers, smaller over larger.
    /// Full: numerator uniform in `[-10^4, 10^4]`, denominator in `[1, 10^4]`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> BigRational {
        let mut draw = || rng.gen_range(1..=SAMPLE_BOUND);
        match self {
            Self::PositiveRationals => BigRational::new(draw().into(), draw().into()),
            Self::OpenUnitIntervalRationals => loop {
                let (a, b) = (draw(), draw());
                if a != b {
                    break BigRational::new(a.min(b).into(), a.max(b).into());
                }
            },
            Self::FullRationals => {
                let n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
                BigRational::new(n.into(), rng.gen_range(1..=SAMPLE_BOUND).into())
            }
        }
    }
}

/// A map `Q^arity -> Q^arity` given by rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    pub components: Vec<RationalFunction>,
}

impl RationalMap {
    pub fn new(components: Vec<RationalFunction>) -> Result<Self, PentagonError> {
        let n = components.len();
        if components.iter().any(|c| c.nvars() != n) {
            return Err(PentagonError::MalformedMap(format!("a map of {n} coordinates needs {n} variables")));
        }
        Ok(Self { components })
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            components: (0..arity).map(|i| RationalFunction::var(arity, i)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    /// `None` on a pole.
    pub fn apply(&self, point: &[BigRational]) -> Option<Vec<BigRational>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// `self` after `inner`.
    pub fn after(&self, inner: &Self) -> Self {
        Self {
            components: self.components.iter().map(|c| c.compose(&inner.components)).collect(),
        }
    }
}

/// A map `v(x, y) = (x . y, x # y)` with optional inverse
/// `v^-1(x, y) = (x <> y, x * y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonalMap {
    pub name: String,
    pub domain: Domain,
    pub forward: RationalMap,
    pub inverse: Option<RationalMap>,
    /// Extra polynomial conditions `p(x, y) = 0` excluded from the domain,
    /// besides the zeros of denominators.
    pub excluded: Vec<Poly>,
}

/// Names accepted by [`builtin_map`].
pub fn builtin_map_names() -> &'static [&'static str] {
    &["axb_real", "unit_interval", "identity", "qplus", "additive", "broken"]
}

fn q(n: i64) -> RationalFunction {
    RationalFunction::from_poly(Poly::constant(2, BigRational::from_integer(n.into())))
}

/// Built-in maps. `additive` is `(x + y, y)` on `Q`; `broken` is
/// `(x + y, x)` on `Q`, which is not pentagonal.
pub fn builtin_map(name: &str) -> Result<PentagonalMap, PentagonError> {
    let x = RationalFunction::var(2, 0);
    let y = RationalFunction::var(2, 1);
    let inv = |f: &RationalFunction| f.recip().expect("nonzero by construction");
    let neg = |f: &RationalFunction| f.mul(&q(-1));
    let (domain, forward, inverse) = match name {
        "axb_real" | "qplus" => (
            Domain::PositiveRationals,
            // (xy / (x + y + 1), y / (x + 1))
            vec![x.mul(&y).mul(&inv(&x.add(&y).add(&q(1)))), y.mul(&inv(&x.add(&q(1))))],
            // (x (y + 1) / y, x + y + xy)
            vec![x.mul(&y.add(&q(1))).mul(&inv(&y)), x.add(&y).add(&x.mul(&y))],
        ),
        "unit_interval" => {
            let xy = x.mul(&y);
            // u + w - u w, the second coordinate of the inverse.
            let s = x.add(&y).add(&neg(&xy));
            (
                Domain::OpenUnitIntervalRationals,
                vec![xy.clone(), y.mul(&q(1).add(&neg(&x))).mul(&inv(&q(1).add(&neg(&xy))))],
                vec![x.mul(&inv(&s)), s],
            )
        }
        "identity" => (Domain::PositiveRationals, vec![x.clone(), y.clone()], vec![x, y]),
        "additive" => (Domain::FullRationals, vec![x.add(&y), y.clone()], vec![x.add(&neg(&y)), y]),
        "broken" => (Domain::FullRationals, vec![x.add(&y), x.clone()], vec![y.clone(), x.add(&neg(&y))]),
        other => return Err(PentagonError::UnknownName(other.to_string())),
    };
    Ok(PentagonalMap {
        name: name.to_string(),
        domain,
        forward: RationalMap::new(forward)?,
        inverse: Some(RationalMap::new(inverse)?),
        excluded: Vec::new(),
    })
}

fn parse_pair(v: &Value, what: &str) -> Result<RationalMap, PentagonError> {
    let comps = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| PentagonError::MalformedMap(format!("{what} must list two components")))?;
    let funcs = comps
        .iter()
        .map(|c| {
            let num = Poly::from_json(&c["num"])?;
            let den = match c.get("den") {
                Some(d) => Poly::from_json(d)?,
                None => Poly::one(2),
            };
            RationalFunction::new(num, den)
        })
        .collect::<Result<Vec<_>, _>>()?;
    RationalMap::new(funcs)
}

impl PentagonalMap {
    /// Reads `{"name", "domain", "forward": [{"num", "den"}, ..], "inverse", "excluded"}`
    /// where every polynomial is a grid `c[i][j]` of coefficients of `x^i y^j`.
    pub fn from_json(v: &Value) -> Result<Self, PentagonError> {
        let domain = Domain::parse(
            v["domain"]
                .as_str()
                .ok_or_else(|| PentagonError::MalformedMap("missing domain".into()))?,
        )?;
        let forward = parse_pair(&v["forward"], "forward")?;
        let inverse = match v.get("inverse") {
            Some(Value::Null) | None => None,
            Some(i) => Some(parse_pair(i, "inverse")?),
        };
        let excluded = match v.get("excluded") {
            Some(Value::Array(ps)) => ps.iter().map(Poly::from_json).collect::<Result<_, _>>()?,
            Some(Value::Null) | None => Vec::new(),
            Some(_) => return Err(PentagonError::MalformedMap("excluded must be a list of polynomials".into())),
        };
        Ok(Self {
            name: v["name"].as_str().unwrap_or("user").to_string(),
            domain,
            forward,
            inverse,
            excluded,
        })
    }

    fn excluded_at(&self, point: &[BigRational]) -> bool {
        self.excluded.iter().any(|p| p.eval(point).is_zero())
    }

    /// `v(x, y)`, or `None` on the excluded locus.
    pub fn apply(&self, point: &[BigRational]) -> Option<Vec<BigRational>> {
        if self.excluded_at(point) {
            return None;
        }
        self.forward.apply(point)
    }

    pub fn apply_inverse(&self, point: &[BigRational]) -> Result<Option<Vec<BigRational>>, PentagonError> {
        let inv = self.inverse.as_ref().ok_or(PentagonError::MissingInverse)?;
        Ok(inv.apply(point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn axb_real_at_two_three() {
        let v = builtin_map("axb_real").unwrap();
        assert_eq!(v.apply(&[r(2, 1), r(3, 1)]), Some(vec![r(1, 1), r(1, 1)]));
        assert_eq!(v.apply_inverse(&[r(1, 1), r(1, 1)]).unwrap(), Some(vec![r(2, 1), r(3, 1)]));
    }

    #[test]
    fn unit_interval_at_a_half_and_a_third() {
        let v = builtin_map("unit_interval").unwrap();
        assert_eq!(v.apply(&[r(1, 2), r(1, 3)]), Some(vec![r(1, 6), r(1, 5)]));
        assert_eq!(v.apply_inverse(&[r(1, 6), r(1, 5)]).unwrap(), Some(vec![r(1, 2), r(1, 3)]));
    }

    #[test]
    fn unknown_names() {
        assert_eq!(builtin_map("nope"), Err(PentagonError::UnknownName("nope".into())));
    }

    #[test]
    fn json_round_trip_of_axb_real() {
        // xy / (x + y + 1), y / (x + 1); inverse x (y + 1) / y, x + y + xy.
        let doc = json!({
            "name": "axb-json",
            "domain": "positive_rationals",
            "forward": [
                {"num": [[0, 0], [0, 1]], "den": [[1, 1], [1]]},
                {"num": [[0, 1]], "den": [[1], [1]]}
            ],
            "inverse": [
                {"num": [[0], [1, 1]], "den": [[0, 1]]},
                {"num": [[0, 1], [1, 1]]}
            ]
        });
        let m = PentagonalMap::from_json(&doc).unwrap();
        let b = builtin_map("axb_real").unwrap();
        for pt in [[r(2, 1), r(3, 1)], [r(5, 7), r(1, 9)]] {
            assert_eq!(m.apply(&pt), b.apply(&pt));
            assert_eq!(m.apply_inverse(&pt).unwrap(), b.apply_inverse(&pt).unwrap());
        }
        assert!(PentagonalMap::from_json(&json!({"domain": "reals", "forward": []})).is_err());
    }

    #[test]
    fn excluded_locus_blocks_evaluation() {
        let mut m = builtin_map("additive").unwrap();
        m.excluded.push(Poly::var(2, 0));
        assert_eq!(m.apply(&[r(0, 1), r(1, 1)]), None);
        assert!(m.apply(&[r(1, 1), r(1, 1)]).is_some());
    }

    #[test]
    fn sampled_points_lie_in_the_domain() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for d in [Domain::PositiveRationals, Domain::OpenUnitIntervalRationals, Domain::FullRationals] {
            for _ in 0..200 {
                assert!(d.contains(&d.sample(&mut rng)));
            }
        }
    }
}
