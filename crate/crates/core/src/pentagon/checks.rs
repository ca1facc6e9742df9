use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::map::{Domain, PentagonalMap, RationalMap};
use super::poly::RationalFunction;
use super::PentagonError;

type Point = Vec<BigRational>;

/// Resampling attempts allowed per accepted sample.
const MAX_ATTEMPTS: usize = 1000;

/// Applies `f` to the coordinates of `legs` (each `width` wide) in order
/// and writes the result back to the same places.
fn apply_on(
    f: &dyn Fn(&[BigRational]) -> Option<Point>,
    pt: &[BigRational],
    legs: &[usize],
    width: usize,
) -> Option<Point> {
    let idx: Vec<usize> = legs.iter().flat_map(|&l| (l * width)..(l * width + width)).collect();
    let local: Point = idx.iter().map(|&i| pt[i].clone()).collect();
    let image = f(&local)?;
    let mut out = pt.to_vec();
    for (i, x) in idx.into_iter().zip(image) {
        out[i] = x;
    }
    Some(out)
}

fn in_domain(domain: Domain, pt: &[BigRational], name: &str) -> Result<(), PentagonError> {
    match pt.iter().find(|x| !domain.contains(x)) {
        Some(x) => Err(PentagonError::DomainViolation(format!("{name} produced {x} outside {domain:?}"))),
        None => Ok(()),
    }
}

/// Applies the maps in order, checking the domain after each step.
fn chain(
    f: &dyn Fn(&[BigRational]) -> Option<Point>,
    pt: &[BigRational],
    steps: &[&[usize]],
    width: usize,
    domain: Domain,
    name: &str,
) -> Result<Option<Point>, PentagonError> {
    let mut cur = pt.to_vec();
    for legs in steps {
        match apply_on(f, &cur, legs, width) {
            Some(next) => {
                in_domain(domain, &next, name)?;
                cur = next;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

/// `v23 v13 v12 = v12 v23` at a point of `(X^width)^3`; `None` if a pole is hit.
fn pentagon_at(
    f: &dyn Fn(&[BigRational]) -> Option<Point>,
    pt: &[BigRational],
    width: usize,
    domain: Domain,
    name: &str,
) -> Result<Option<bool>, PentagonError> {
    let lhs = chain(f, pt, &[&[0, 1], &[0, 2], &[1, 2]], width, domain, name)?;
    let rhs = chain(f, pt, &[&[1, 2], &[0, 1]], width, domain, name)?;
    Ok(match (lhs, rhs) {
        (Some(l), Some(r)) => Some(l == r),
        _ => None,
    })
}

/// Draws points of `domain^coords` until `test` gives a verdict.
fn sample_verdict<T>(
    rng: &mut ChaCha8Rng,
    domain: Domain,
    coords: usize,
    resampled: &mut usize,
    mut test: impl FnMut(&[BigRational]) -> Result<Option<T>, PentagonError>,
) -> Result<(Point, T), PentagonError> {
    for _ in 0..MAX_ATTEMPTS {
        let pt: Point = (0..coords).map(|_| domain.sample(rng)).collect();
        if let Some(v) = test(&pt)? {
            return Ok((pt, v));
        }
        *resampled += 1;
    }
    Err(PentagonError::SamplingExhausted(MAX_ATTEMPTS))
}

fn show(pt: &[BigRational]) -> Vec<String> {
    pt.iter().map(ToString::to_string).collect()
}

/// At most this many counterexamples are kept in a report.
const KEEP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub map: String,
    pub samples: usize,
    pub passed: usize,
    /// Draws rejected for hitting the excluded locus.
    pub resampled: usize,
    pub counterexamples: Vec<Vec<String>>,
    pub holds: bool,
}

fn run_pentagon(
    name: &str,
    f: &dyn Fn(&[BigRational]) -> Option<Point>,
    width: usize,
    domain: Domain,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<IdentityReport, PentagonError> {
    let mut report = IdentityReport {
        map: name.to_string(),
        samples,
        passed: 0,
        resampled: 0,
        counterexamples: Vec::new(),
        holds: true,
    };
    for _ in 0..samples {
        let (pt, ok) = sample_verdict(rng, domain, 3 * width, &mut report.resampled, |pt| {
            pentagon_at(f, pt, width, domain, name)
        })?;
        if ok {
            report.passed += 1;
        } else {
            report.holds = false;
            if report.counterexamples.len() < KEEP {
                report.counterexamples.push(show(&pt));
            }
        }
    }
    Ok(report)
}

/// `v23 v13 v12 = v12 v23` on `samples` seeded random triples.
pub fn pentagon_identity_check(v: &PentagonalMap, samples: usize, seed: u64) -> Result<IdentityReport, PentagonError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_pentagon(&v.name, &|p| v.apply(p), 1, v.domain, samples, &mut rng)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub map: String,
    pub samples: usize,
    pub resampled: usize,
    /// `v^-1 v = id` on every sample.
    pub left: bool,
    /// `v v^-1 = id` on every sample.
    pub right: bool,
    pub counterexamples: Vec<Vec<String>>,
}

impl RoundTripReport {
    pub fn holds(&self) -> bool {
        self.left && self.right
    }
}

pub fn round_trip_check(v: &PentagonalMap, samples: usize, seed: u64) -> Result<RoundTripReport, PentagonError> {
    let inv = v.inverse.as_ref().ok_or(PentagonError::MissingInverse)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RoundTripReport {
        map: v.name.clone(),
        samples,
        resampled: 0,
        left: true,
        right: true,
        counterexamples: Vec::new(),
    };
    for _ in 0..samples {
        let (pt, (l, r)) = sample_verdict(&mut rng, v.domain, 2, &mut report.resampled, |pt| {
            let (Some(a), Some(b)) = (v.apply(pt), inv.apply(pt)) else {
                return Ok(None);
            };
            in_domain(v.domain, &a, &v.name)?;
            in_domain(v.domain, &b, &v.name)?;
            let (Some(back_a), Some(back_b)) = (inv.apply(&a), v.apply(&b)) else {
                return Ok(None);
            };
            Ok(Some((back_a == pt, back_b == pt)))
        })?;
        report.left &= l;
        report.right &= r;
        if !(l && r) && report.counterexamples.len() < KEEP {
            report.counterexamples.push(show(&pt));
        }
    }
    Ok(report)
}

/// The maps built from `v(x, y) = (x . y, x # y)` and
/// `v^-1(x, y) = (x <> y, x * y)`:
/// `phi(x, y) = (x . y, y)`, `eta(x, y) = (x, x # y)`,
/// `psi'(x, y) = (y * x, y)` and
/// `w(a, b, c, d) = (a . (b # c), d * (b . c), c, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedMaps {
    pub phi: RationalMap,
    pub eta: RationalMap,
    pub psi_prime: RationalMap,
    pub w: RationalMap,
}

pub fn derived_maps(v: &PentagonalMap) -> Result<DerivedMaps, PentagonError> {
    let inv = v.inverse.as_ref().ok_or(PentagonError::MissingInverse)?;
    let dot = &v.forward.components[0];
    let sharp = &v.forward.components[1];
    let star = &inv.components[1];
    let (x, y) = (RationalFunction::var(2, 0), RationalFunction::var(2, 1));
    let phi = RationalMap::new(vec![dot.clone(), y.clone()])?;
    let eta = RationalMap::new(vec![x.clone(), sharp.clone()])?;
    let psi_prime = RationalMap::new(vec![star.compose(&[y.clone(), x]), y])?;
    let [a, b, c, d] = [0, 1, 2, 3].map(|i| RationalFunction::var(4, i));
    let b_sharp_c = sharp.compose(&[b.clone(), c.clone()]);
    let b_dot_c = dot.compose(&[b, c.clone()]);
    let w = RationalMap::new(vec![
        dot.compose(&[a, b_sharp_c]),
        star.compose(&[d.clone(), b_dot_c]),
        c,
        d,
    ])?;
    Ok(DerivedMaps { phi, eta, psi_prime, w })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedReport {
    pub map: String,
    pub samples: usize,
    pub phi_pentagonal: IdentityReport,
    pub psi_prime_pentagonal: IdentityReport,
    /// `w` as a pentagonal transformation of `X x X`.
    pub w_pentagonal: IdentityReport,
    /// `w = psi'_24 v_21 phi_13 v_21^-1`, the rightmost map applied first.
    pub conjugation_identity: bool,
    pub conjugation_counterexamples: Vec<Vec<String>>,
    /// Jacobian determinants of `phi` and `eta` are defined and nonzero at
    /// every sample.
    pub jacobians_nonzero: bool,
    pub resampled: usize,
}

impl DerivedReport {
    pub fn holds(&self) -> bool {
        self.phi_pentagonal.holds
            && self.psi_prime_pentagonal.holds
            && self.w_pentagonal.holds
            && self.conjugation_identity
            && self.jacobians_nonzero
    }
}

/// Jacobian determinants `d(x . y)/dx` of `phi` and `d(x # y)/dy` of `eta`.
pub fn jacobians(d: &DerivedMaps) -> (RationalFunction, RationalFunction) {
    (d.phi.components[0].derivative(0), d.eta.components[1].derivative(1))
}

pub fn derived_identity_check(v: &PentagonalMap, samples: usize, seed: u64) -> Result<DerivedReport, PentagonError> {
    let d = derived_maps(v)?;
    let inv = v.inverse.as_ref().ok_or(PentagonError::MissingInverse)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = v.domain;
    let phi_pentagonal = run_pentagon("phi", &|p| d.phi.apply(p), 1, dom, samples, &mut rng)?;
    let psi_prime_pentagonal = run_pentagon("psi_prime", &|p| d.psi_prime.apply(p), 1, dom, samples, &mut rng)?;
    let w_pentagonal = run_pentagon("w", &|p| d.w.apply(p), 2, dom, samples, &mut rng)?;

    let mut resampled = 0;
    let mut conjugation_identity = true;
    let mut conjugation_counterexamples = Vec::new();
    let fv = |p: &[BigRational]| v.apply(p);
    let finv = |p: &[BigRational]| inv.apply(p);
    let fphi = |p: &[BigRational]| d.phi.apply(p);
    let fpsi = |p: &[BigRational]| d.psi_prime.apply(p);
    for _ in 0..samples {
        let (pt, ok) = sample_verdict(&mut rng, dom, 4, &mut resampled, |pt| {
            let Some(lhs) = d.w.apply(pt) else { return Ok(None) };
            let mut cur = pt.to_vec();
            for (f, legs) in [
                (&finv as &dyn Fn(&[BigRational]) -> Option<Point>, &[1, 0][..]),
                (&fphi, &[0, 2][..]),
                (&fv, &[1, 0][..]),
                (&fpsi, &[1, 3][..]),
            ] {
                match apply_on(f, &cur, legs, 1) {
                    Some(next) => cur = next,
                    None => return Ok(None),
                }
            }
            Ok(Some(lhs == cur))
        })?;
        if !ok {
            conjugation_identity = false;
            if conjugation_counterexamples.len() < KEEP {
                conjugation_counterexamples.push(show(&pt));
            }
        }
    }

    let (jphi, jeta) = jacobians(&d);
    let mut jacobians_nonzero = true;
    for _ in 0..samples {
        let (_, ok) = sample_verdict(&mut rng, dom, 2, &mut resampled, |pt| {
            if v.apply(pt).is_none() {
                return Ok(None);
            }
            Ok(match (jphi.eval(pt), jeta.eval(pt)) {
                (Some(a), Some(b)) => Some(!a.is_zero() && !b.is_zero()),
                _ => Some(false),
            })
        })?;
        jacobians_nonzero &= ok;
    }

    Ok(DerivedReport {
        map: v.name.clone(),
        samples,
        phi_pentagonal,
        psi_prime_pentagonal,
        w_pentagonal,
        conjugation_identity,
        conjugation_counterexamples,
        jacobians_nonzero,
        resampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pentagon::builtin_map;

    #[test]
    fn builtin_maps_are_pentagonal() {
        for name in ["axb_real", "unit_interval", "identity", "qplus", "additive"] {
            let r = pentagon_identity_check(&builtin_map(name).unwrap(), 300, 1).unwrap();
            assert!(r.holds && r.passed == 300, "{name}: {r:?}");
        }
    }

    #[test]
    fn broken_map_fails_with_a_witness() {
        let r = pentagon_identity_check(&builtin_map("broken").unwrap(), 50, 2).unwrap();
        assert!(!r.holds);
        assert!(!r.counterexamples.is_empty());
        // Recheck the first witness by hand: v(x, y) = (x + y, x).
        let pt: Vec<BigRational> = r.counterexamples[0].iter().map(|s| s.parse().unwrap()).collect();
        let (a, b, c) = (&pt[0], &pt[1], &pt[2]);
        let lhs = [a + b + c, a + a + b, a.clone()];
        let rhs = [a + b + c, a.clone(), b.clone()];
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn inverses_round_trip() {
        for name in ["axb_real", "unit_interval", "identity", "qplus", "additive", "broken"] {
            let r = round_trip_check(&builtin_map(name).unwrap(), 300, 3).unwrap();
            assert!(r.holds(), "{name}: {r:?}");
        }
    }

    #[test]
    fn derived_maps_for_axb_real() {
        let r = derived_identity_check(&builtin_map("axb_real").unwrap(), 100, 4).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn derived_maps_of_the_identity_are_identities() {
        let d = derived_maps(&builtin_map("identity").unwrap()).unwrap();
        let pt2 = [BigRational::from_integer(3.into()), BigRational::new(2.into(), 7.into())];
        assert_eq!(d.phi.apply(&pt2).unwrap(), pt2.to_vec());
        assert_eq!(d.eta.apply(&pt2).unwrap(), pt2.to_vec());
        let pt4: Vec<BigRational> = (1..=4).map(|i| BigRational::new(i.into(), 5.into())).collect();
        assert_eq!(d.w.apply(&pt4).unwrap(), pt4);
    }

    #[test]
    fn missing_inverse_is_reported() {
        let mut v = builtin_map("axb_real").unwrap();
        v.inverse = None;
        assert_eq!(derived_maps(&v), Err(PentagonError::MissingInverse));
        assert!(round_trip_check(&v, 1, 0).is_err());
    }

    /// Forward-mode dual numbers as an independent derivative oracle.
    #[derive(Clone)]
    struct Dual(BigRational, BigRational);

    fn eval_dual(p: &crate::pentagon::Poly, point: &[Dual]) -> Dual {
        // Expand sum c x^e with the product rule, one variable at a time.
        let mut total = Dual(BigRational::zero(), BigRational::zero());
        for (e, c) in p.terms() {
            let mut acc = Dual(c.clone(), BigRational::zero());
            for (&k, x) in e.iter().zip(point) {
                for _ in 0..k {
                    acc = Dual(&acc.0 * &x.0, &acc.0 * &x.1 + &acc.1 * &x.0);
                }
            }
            total = Dual(total.0 + acc.0, total.1 + acc.1);
        }
        total
    }

    #[test]
    fn symbolic_jacobians_match_dual_numbers() {
        use num_traits::One;
        for name in ["axb_real", "unit_interval"] {
            let v = builtin_map(name).unwrap();
            let d = derived_maps(&v).unwrap();
            let (jphi, jeta) = jacobians(&d);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..50 {
                let x = v.domain.sample(&mut rng);
                let y = v.domain.sample(&mut rng);
                let one = BigRational::one();
                let zero = BigRational::zero();
                for (f, var, j) in [(&v.forward.components[0], 0, &jphi), (&v.forward.components[1], 1, &jeta)] {
                    let pt = if var == 0 {
                        [Dual(x.clone(), one.clone()), Dual(y.clone(), zero.clone())]
                    } else {
                        [Dual(x.clone(), zero.clone()), Dual(y.clone(), one.clone())]
                    };
                    let n = eval_dual(&f.num, &pt);
                    let dd = eval_dual(&f.den, &pt);
                    let expected = (&n.1 * &dd.0 - &n.0 * &dd.1) / (&dd.0 * &dd.0);
                    assert_eq!(j.eval(&[x.clone(), y.clone()]).unwrap(), expected);
                }
            }
        }
    }
}
