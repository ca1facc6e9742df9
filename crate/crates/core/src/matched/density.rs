use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::MatchedError;
use crate::padic::{LocallyConstantFunction, ScaledPoint};

/// Largest number of cell evaluations a single integral may take.
const BUDGET: u64 = 1 << 24;

/// `p^e` as an exact rational, any sign of `e`.
pub(crate) fn p_pow(p: u64, e: i64) -> BigRational {
    let m = BigRational::from_integer(num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize));
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

/// `1 - 1/p`, the measure of `Z_p^*` under additive Haar measure.
pub(crate) fn kappa(p: u64) -> BigRational {
    BigRational::one() - p_pow(p, -1)
}

pub(crate) fn check_budget(p: u64, exponent: u32, factor: u64, level: u32) -> Result<(), MatchedError> {
    let cells = (p as u128).checked_pow(exponent).map(|c| c * factor as u128);
    match cells {
        Some(c) if c <= BUDGET as u128 => Ok(()),
        _ => Err(MatchedError::UnsupportedLevel(level)),
    }
}

/// Both sides of the factorized Haar integral for the ax+b group over `Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityCheck {
    pub prime: u64,
    pub level: u32,
    pub support_radius: u32,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub equal: bool,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn require_pair_function(f: &LocallyConstantFunction) -> Result<(), MatchedError> {
    if f.arity() != 2 {
        return Err(MatchedError::MalformedFunction("expected a function of (a, x)".into()));
    }
    // The first coordinate ranges over Q_p^*; a compactly supported function
    // there vanishes near a = 0.
    for j in 0..f.cosets_per_axis() {
        if !f.value_at(&[ScaledPoint::ZERO, f.coset_rep(j)]).is_zero() {
            return Err(MatchedError::MalformedFunction(
                "function does not vanish on the zero coset of the unit coordinate".into(),
            ));
        }
    }
    Ok(())
}

/// Right Haar integral on `{(a, x)}` with the normalisation
/// `(1 - 1/p)^-2 da dx / |a|`, where `da`, `dx` give `Z_p` measure one.
pub fn right_haar_integral(f: &LocallyConstantFunction) -> Result<BigRational, MatchedError> {
    require_pair_function(f)?;
    let p = f.prime();
    let k = f.level() as i64;
    let n = f.cosets_per_axis();
    let mut total = BigRational::zero();
    for ci in 1..n {
        let c = f.coset_rep(ci);
        let abs_inv = p_pow(p, c.valuation(p).expect("nonzero coset"));
        let row: BigRational = (0..n).map(|xi| f.value_at(&[c, f.coset_rep(xi)])).sum();
        total += row * abs_inv;
    }
    let k2 = kappa(p);
    Ok(total * p_pow(p, -2 * k) / (&k2 * &k2))
}

/// `iint F(g s) Delta_1(g) Delta(g)^-1 dg ds` over `g = (a, a - 1)` in `G1`
/// and `s = (b, 0)` in `G2`, both with multiplicative Haar measure giving
/// `Z_p^*` measure one. `G1` is abelian, so `Delta_1 = 1`, and
/// `Delta(a, x) = |a|^-1`; the integrand is `F(ab, a - 1) |a|`.
fn factorized_integral(f: &LocallyConstantFunction) -> BigRational {
    let p = f.prime();
    let (k, m) = (f.level() as i64, f.support_radius() as i64);
    let big_l = (k + m) as u32;
    let modulus = (p as i128).pow(big_l);
    let units: Vec<i128> = (1..modulus).filter(|u| u % p as i128 != 0).collect();
    let cell = p_pow(p, -(big_l as i64)) / kappa(p);
    let minus_one = ScaledPoint::integer(-1);

    // a = p^i u with -m <= i < k; for i < -m the x coordinate a - 1 leaves
    // the support.
    let mut finite = BigRational::zero();
    for i in -m..k {
        let mut at_level = BigRational::zero();
        for &u in &units {
            let x = ScaledPoint::new(u, i as i32).add(minus_one, p);
            for j in (-m - i)..(k - i) {
                for &w in &units {
                    let c = ScaledPoint::new(u * w, (i + j) as i32);
                    at_level += f.value_at(&[c, x]);
                }
            }
        }
        finite += at_level * p_pow(p, -i);
    }
    finite *= &cell * &cell;

    // For v(a) >= k the point a - 1 lies in the coset of -1, so the b
    // integral no longer depends on a: it equals `z` below, and
    // sum_{i >= k} |p^i| = p^-k / (1 - 1/p).
    let mut z = BigRational::zero();
    for j in -m..k {
        for &w in &units {
            z += f.value_at(&[ScaledPoint::new(w, j as i32), minus_one]);
        }
    }
    z *= &cell;
    finite + z * p_pow(p, -k) / kappa(p)
}

/// Evaluates both sides of the factorized integral formula for the ax+b
/// group over `Q_p` on a compactly supported locally constant `F(a, x)`.
pub fn density_identity_check(f: &LocallyConstantFunction) -> Result<DensityCheck, MatchedError> {
    require_pair_function(f)?;
    let p = f.prime();
    let (k, m) = (f.level(), f.support_radius());
    let span = (k + m) as u64;
    check_budget(p, 2 * (k + m), span * span, k)?;
    let lhs = right_haar_integral(f)?;
    let rhs = factorized_integral(f);
    Ok(DensityCheck {
        prime: p,
        level: k,
        support_radius: m,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Which side of `F` a group element acts on in [`translate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `g -> F(g0 g)` (left) or `g -> F(g g0)` (right) for `g0 = (b, y)` with
/// `b` a nonzero element of `Z_p` and `y` in `Z_p`.
///
/// The result keeps the level and widens the support radius by `v(b)`.
pub fn translate(
    f: &LocallyConstantFunction,
    side: Side,
    b: ScaledPoint,
    y: ScaledPoint,
) -> Result<LocallyConstantFunction, MatchedError> {
    require_pair_function(f)?;
    let p = f.prime();
    let vb = match b.valuation(p) {
        Some(v) if v >= 0 => v as u32,
        _ => return Err(MatchedError::MalformedFunction("translation needs b in Z_p \\ {0}".into())),
    };
    if y.valuation(p).is_some_and(|v| v < 0) {
        return Err(MatchedError::MalformedFunction("translation needs y in Z_p".into()));
    }
    let g = LocallyConstantFunction::from_fn(p, f.level(), f.support_radius() + vb, 2, |pt| {
        let (c, x) = (pt[0], pt[1]);
        let image = match side {
            // (b, y)(c, x) = (bc, y + bx)
            Side::Left => [b.times(c), y.add(b.times(x), p)],
            // (c, x)(b, y) = (cb, x + cy)
            Side::Right => [c.times(b), x.add(c.times(y), p)],
        };
        f.value_at(&image)
    })?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(p: u64, k: u32, m: u32, seed: u64) -> LocallyConstantFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = (p as usize).pow(k + m);
        let values = (0..n * n)
            .map(|idx| {
                if idx / n == 0 {
                    BigRational::zero()
                } else {
                    BigRational::from_integer(rng.gen_range(-3..=3).into())
                }
            })
            .collect();
        LocallyConstantFunction::new(p, k, m, 2, values).unwrap()
    }

    /// Independent evaluation of the right Haar integral: refine to a finer
    /// grid and sum `F da dx / |a|` again.
    fn refined_integral(f: &LocallyConstantFunction) -> BigRational {
        right_haar_integral(&f.refine(f.level() + 1, f.support_radius()).unwrap()).unwrap()
    }

    #[test]
    fn zero_function() {
        let f = LocallyConstantFunction::new(5, 1, 0, 2, vec![BigRational::zero(); 25]).unwrap();
        let r = density_identity_check(&f).unwrap();
        assert!(r.equal && r.lhs.is_zero());
    }

    #[test]
    fn units_times_integers() {
        // Indicator of Z_5^* x Z_5: integral (1 - 1/5)^-2 * (4/5) * 1 = 5/4.
        let f = LocallyConstantFunction::indicator(5, 1, 0, 2, |pt| pt[0].valuation(5) == Some(0)).unwrap();
        let r = density_identity_check(&f).unwrap();
        assert_eq!(r.lhs, BigRational::new(5.into(), 4.into()));
        assert!(r.equal, "{r:?}");
    }

    #[test]
    fn random_tables_agree() {
        for (p, k, m, seed) in [(3, 2, 1, 1), (5, 1, 1, 2), (3, 1, 2, 3), (2, 2, 2, 4)] {
            let f = random_function(p, k, m, seed);
            let r = density_identity_check(&f).unwrap();
            assert!(r.equal, "p={p} k={k} m={m}: {r:?}");
            assert_eq!(r.lhs, refined_integral(&f));
        }
    }

    #[test]
    fn rejects_mass_at_zero() {
        let f = LocallyConstantFunction::indicator(3, 1, 0, 2, |_| true).unwrap();
        assert!(matches!(density_identity_check(&f), Err(MatchedError::MalformedFunction(_))));
        assert_eq!(check_budget(3, 12, 36, 4), Err(MatchedError::UnsupportedLevel(4)));
        assert!(check_budget(5, 6, 9, 2).is_ok());
    }

    #[test]
    fn right_translation_preserves_the_integral() {
        let f = random_function(3, 2, 1, 9);
        let base = right_haar_integral(&f).unwrap();
        for (b, y) in [(1, 0), (2, 1), (5, 2), (3, 1), (9, 4)] {
            let g = translate(&f, Side::Right, ScaledPoint::integer(b), ScaledPoint::integer(y)).unwrap();
            assert_eq!(right_haar_integral(&g).unwrap(), base, "b={b} y={y}");
        }
    }

    #[test]
    fn left_translation_scales_by_the_modular_function() {
        // Left translation by (b, y) multiplies the right integral by |b|^-1.
        let f = random_function(3, 2, 1, 11);
        let base = right_haar_integral(&f).unwrap();
        for (b, y) in [(1, 2), (2, 0), (3, 1), (6, 2), (9, 0)] {
            let g = translate(&f, Side::Left, ScaledPoint::integer(b), ScaledPoint::integer(y)).unwrap();
            let v = ScaledPoint::integer(b).valuation(3).unwrap();
            assert_eq!(right_haar_integral(&g).unwrap(), &base * p_pow(3, v), "b={b} y={y}");
        }
    }

    #[test]
    fn left_haar_density_is_not_right_invariant() {
        // With the weight |a|^-2 instead of |a|^-1 the integral does move
        // under right translation by (3, 0); the weight exponent matters.
        let f = LocallyConstantFunction::indicator(3, 1, 0, 2, |pt| pt[0].valuation(3) == Some(0)).unwrap();
        let g = translate(&f, Side::Right, ScaledPoint::integer(3), ScaledPoint::ZERO).unwrap();
        let left = |h: &LocallyConstantFunction| -> BigRational {
            let n = h.cosets_per_axis();
            (1..n)
                .flat_map(|ci| (0..n).map(move |xi| (ci, xi)))
                .map(|(ci, xi)| {
                    let c = h.coset_rep(ci);
                    h.value_at(&[c, h.coset_rep(xi)]) * p_pow(3, 2 * c.valuation(3).unwrap())
                })
                .sum()
        };
        assert_ne!(left(&f) * p_pow(3, -2), left(&g) * p_pow(3, -2));
    }
}
