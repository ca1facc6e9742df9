use super::{PermOperator, SparseOperator, UnitaryError};
use crate::matched::{FiniteGroup, MatchedPair};

/// `(X xi)(g, h) = xi(gh, h)` on `l2(G) (x) l2(G)`, basis index `g n + h`.
pub fn build_x(group: &FiniteGroup) -> PermOperator {
    let n = group.order();
    PermOperator::from_pointwise(n * n, |q| {
        let (g, h) = (q / n, q % n);
        group.mul(g, h) * n + h
    })
    .expect("right multiplication is a bijection")
}

/// `(Yhat eta)(s, t) = eta(s, s^-1 t)`; the modular function of a finite
/// group is trivial.
pub fn build_yhat(group: &FiniteGroup) -> PermOperator {
    let n = group.order();
    PermOperator::from_pointwise(n * n, |q| {
        let (s, t) = (q / n, q % n);
        s * n + group.mul(group.inv(s), t)
    })
    .expect("left multiplication is a bijection")
}

/// Basis index of `(s, g)` in `H = l2(G2) (x) l2(G1)`, by subgroup positions.
pub fn h_index(mp: &MatchedPair, s: usize, g: usize) -> usize {
    s * mp.order1() + g
}

/// The bicrossed unitary on `H (x) H`, `H = l2(G2) (x) l2(G1)`, as the
/// product of `(beta (x) id)(Yhat)` on legs 1, 2, 3 and `(id (x) alpha)(X)`
/// on legs 2, 3, 4. Pointwise,
///
/// `(W xi)(s, g, t, h) = xi(s, g alpha_{t'}(h), t', h)`, `t' = beta_g(s)^-1 t`.
pub fn build_w(mp: &MatchedPair) -> PermOperator {
    let (n1, n2) = (mp.order1(), mp.order2());
    let n = n1 * n2;
    PermOperator::from_pointwise(n * n, |q| {
        let (left, right) = (q / n, q % n);
        let (s, g) = (left / n1, left % n1);
        let (t, h) = (right / n1, right % n1);
        let t2 = mp.mul2(mp.inv2(mp.beta(g, s)), t);
        let g2 = mp.mul1(g, mp.alpha(t2, h));
        h_index(mp, s, g2) * n + h_index(mp, t2, h)
    })
    .expect("the bicrossed unitary permutes the basis")
}

fn leg_of(dim: usize) -> Result<usize, UnitaryError> {
    let leg = (dim as f64).sqrt().round() as usize;
    if leg * leg != dim {
        return Err(UnitaryError::LegMismatch(format!("size {dim} is not a square")));
    }
    Ok(leg)
}

/// `W12 W13 W23 = W23 W12` on `H (x) H (x) H`, exactly.
pub fn pentagon_check(w: &SparseOperator) -> Result<bool, UnitaryError> {
    if w.rows() != w.cols() {
        return Err(UnitaryError::LegMismatch(format!("{}x{} is not square", w.rows(), w.cols())));
    }
    let leg = leg_of(w.rows())?;
    let dims = [leg; 3];
    let w12 = w.on_legs(&dims, &[0, 1])?;
    let w13 = w.on_legs(&dims, &[0, 2])?;
    let w23 = w.on_legs(&dims, &[1, 2])?;
    Ok(w12.mul(&w13)?.mul(&w23)? == w23.mul(&w12)?)
}

/// [`pentagon_check`] for permutations, by composing index maps.
pub fn pentagon_check_perm(w: &PermOperator) -> Result<bool, UnitaryError> {
    let leg = leg_of(w.dim())?;
    let dims = [leg; 3];
    let w12 = w.on_legs(&dims, &[0, 1])?;
    let w13 = w.on_legs(&dims, &[0, 2])?;
    let w23 = w.on_legs(&dims, &[1, 2])?;
    Ok(w12.compose(&w13).compose(&w23) == w23.compose(&w12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matched::{builtin_names, builtin_pair, check_matched};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn x_for_c2() {
        let x = build_x(&FiniteGroup::cyclic(2));
        // (g, h) -> (g + h, h): swaps (0,1) and (1,1), fixes the rest.
        assert_eq!(x, PermOperator::new(vec![0, 3, 2, 1]).unwrap());
        assert!(pentagon_check(&x.to_sparse()).unwrap());
        assert_eq!(build_x(&FiniteGroup::cyclic(1)), PermOperator::identity(1));
    }

    #[test]
    fn classical_unitaries_are_pentagonal() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::cyclic(5)] {
            assert!(pentagon_check_perm(&build_x(&g)).unwrap());
            assert!(pentagon_check_perm(&build_yhat(&g)).unwrap());
            assert!(pentagon_check(&build_yhat(&g).to_sparse()).unwrap());
        }
    }

    #[test]
    fn w_for_s3_is_a_36_permutation() {
        let mp = builtin_pair("S3").unwrap();
        let w = build_w(&mp).to_sparse();
        assert_eq!(w.rows(), 36);
        assert!(w.is_permutation());
        assert!(pentagon_check(&w).unwrap());
    }

    #[test]
    fn pentagon_for_every_builtin_pair() {
        for name in builtin_names() {
            let mp = builtin_pair(name).unwrap();
            assert!(pentagon_check_perm(&build_w(&mp)).unwrap(), "{name}");
            assert!(pentagon_check_perm(&build_w(&mp.swapped().unwrap())).unwrap(), "swap {name}");
        }
    }

    #[test]
    fn degenerate_pairs_reduce_to_classical_unitaries() {
        let g = FiniteGroup::symmetric(3);
        let all: Vec<usize> = (0..6).collect();
        let only_g1 = check_matched(g.clone(), &all, &[g.identity()]).unwrap();
        let only_g2 = check_matched(g.clone(), &[g.identity()], &all).unwrap();
        // Positions put the identity first; relabel the group accordingly.
        let relabel = |sub: &[usize]| {
            let table = (0..6)
                .map(|a| (0..6).map(|b| sub.iter().position(|&x| x == g.mul(sub[a], sub[b])).unwrap()).collect())
                .collect();
            FiniteGroup::new(table, (0..6).map(|i| i.to_string()).collect()).unwrap()
        };
        let g1_group = relabel(only_g1.g1());
        assert_eq!(build_w(&only_g1), build_x(&g1_group));
        let g2_group = relabel(only_g2.g2());
        assert_eq!(build_w(&only_g2), build_yhat(&g2_group));
    }

    #[test]
    fn random_permutations_fail_the_pentagon() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut map: Vec<usize> = (0..9).collect();
        map.shuffle(&mut rng);
        let p = PermOperator::new(map).unwrap();
        assert!(!pentagon_check_perm(&p).unwrap());
        assert!(!pentagon_check(&p.to_sparse()).unwrap());
        assert!(pentagon_check(&SparseOperator::identity(9)).unwrap());
        assert!(matches!(pentagon_check(&SparseOperator::identity(8)), Err(UnitaryError::LegMismatch(_))));
    }
}
