//! Exact row spaces over the rationals.
//!
//! Vectors are sparse and are stored as primitive integer rows (denominators
//! cleared, content divided out). Elimination is fraction-free: a row is
//! reduced against a pivot row by cross-multiplying leading coefficients.
//! Rows live in `i128` until an operation would overflow, at which point the
//! whole space is promoted to `BigInt` and the operation is replayed.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseRow<T> = Vec<(usize, T)>;

trait ExactInt: Clone + Debug + Integer + Signed + CheckedMul + CheckedSub {}
impl ExactInt for i128 {}
impl ExactInt for BigInt {}

#[derive(Debug)]
struct Overflow;

#[derive(Debug, Clone, Default)]
struct Echelon<T> {
    rows: HashMap<usize, SparseRow<T>>,
}

fn primitive<T: ExactInt>(mut v: SparseRow<T>) -> SparseRow<T> {
    if v.is_empty() {
        return v;
    }
    let mut g = T::zero();
    for (_, x) in &v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if v[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
    v
}

/// `a*v - b*w` on sparse rows, failing on overflow.
fn combine<T: ExactInt>(a: &T, v: &SparseRow<T>, b: &T, w: &SparseRow<T>) -> Result<SparseRow<T>, Overflow> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j >= w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i >= v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push((v[i].0, a.checked_mul(&v[i].1).ok_or(Overflow)?));
            i += 1;
        } else if take_w {
            out.push((w[j].0, T::zero().checked_sub(&b.checked_mul(&w[j].1).ok_or(Overflow)?).ok_or(Overflow)?));
            j += 1;
        } else {
            let x = a
                .checked_mul(&v[i].1)
                .ok_or(Overflow)?
                .checked_sub(&b.checked_mul(&w[j].1).ok_or(Overflow)?)
                .ok_or(Overflow)?;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

impl<T: ExactInt> Echelon<T> {
    fn reduce(&self, mut v: SparseRow<T>) -> Result<SparseRow<T>, Overflow> {
        v = primitive(v);
        while let Some((lead, coeff)) = v.first() {
            let Some(row) = self.rows.get(lead) else { break };
            let pivot = &row[0].1;
            let g = pivot.gcd(coeff);
            let a = pivot.div_floor(&g);
            let b = coeff.div_floor(&g);
            v = primitive(combine(&a, &v, &b, row)?);
        }
        Ok(v)
    }

    fn insert(&mut self, v: SparseRow<T>) -> Result<bool, Overflow> {
        let r = self.reduce(v)?;
        match r.first() {
            None => Ok(false),
            Some(&(lead, _)) => {
                self.rows.insert(lead, r);
                Ok(true)
            }
        }
    }
}

fn to_small(v: &SparseRow<BigInt>) -> Option<SparseRow<i128>> {
    v.iter().map(|(i, x)| Some((*i, x.to_i128()?))).collect()
}

fn to_big(v: &SparseRow<i128>) -> SparseRow<BigInt> {
    v.iter().map(|(i, x)| (*i, BigInt::from(*x))).collect()
}

#[derive(Debug, Clone)]
enum Store {
    Small(Echelon<i128>),
    Big(Echelon<BigInt>),
}

/// The row space spanned by a growing set of rational vectors in `Q^dim`.
#[derive(Debug, Clone)]
pub struct RowSpace {
    dim: usize,
    store: Store,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            store: Store::Small(Echelon::default()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Small(e) => e.rows.len(),
            Store::Big(e) => e.rows.len(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    fn promote(&mut self) {
        if let Store::Small(e) = &self.store {
            let rows = e.rows.iter().map(|(k, r)| (*k, to_big(r))).collect();
            self.store = Store::Big(Echelon { rows });
        }
    }

    fn check(&self, v: &SparseRow<BigInt>) {
        assert!(v.iter().all(|(i, _)| *i < self.dim), "index out of range for dimension {}", self.dim);
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0), "sparse row not sorted");
    }

    /// Adds an integer vector; returns whether it enlarged the space.
    pub fn insert_integer(&mut self, v: &SparseRow<BigInt>) -> bool {
        self.check(v);
        if let Store::Small(e) = &mut self.store {
            if let Some(small) = to_small(v) {
                if let Ok(added) = e.insert(small) {
                    return added;
                }
            }
            self.promote();
        }
        match &mut self.store {
            Store::Big(e) => e.insert(v.clone()).expect("BigInt arithmetic cannot overflow"),
            Store::Small(_) => unreachable!(),
        }
    }

    pub fn insert(&mut self, v: &SparseRow<BigRational>) -> bool {
        self.insert_integer(&clear_denominators(v))
    }

    /// Exact membership test by reduction to zero.
    pub fn contains_integer(&self, v: &SparseRow<BigInt>) -> bool {
        self.check(v);
        if v.is_empty() {
            return true;
        }
        if self.is_full() {
            return true;
        }
        match &self.store {
            Store::Small(e) => {
                if let Some(small) = to_small(v) {
                    if let Ok(r) = e.reduce(small) {
                        return r.is_empty();
                    }
                }
                let big = Echelon {
                    rows: e.rows.iter().map(|(k, r)| (*k, to_big(r))).collect(),
                };
                big.reduce(v.clone()).expect("BigInt arithmetic cannot overflow").is_empty()
            }
            Store::Big(e) => e.reduce(v.clone()).expect("BigInt arithmetic cannot overflow").is_empty(),
        }
    }

    pub fn contains(&self, v: &SparseRow<BigRational>) -> bool {
        self.contains_integer(&clear_denominators(v))
    }

    /// Whether every basis row of `other` lies in `self`.
    pub fn contains_space(&self, other: &RowSpace) -> bool {
        other.basis_rows().iter().all(|r| self.contains_integer(r))
    }

    /// Basis rows (primitive integer vectors), ordered by pivot.
    pub fn basis_rows(&self) -> Vec<SparseRow<BigInt>> {
        let mut rows: Vec<SparseRow<BigInt>> = match &self.store {
            Store::Small(e) => e.rows.values().map(to_big).collect(),
            Store::Big(e) => e.rows.values().cloned().collect(),
        };
        rows.sort_by_key(|r| r[0].0);
        rows
    }
}

/// Scales a rational sparse vector to a primitive integer vector.
pub fn clear_denominators(v: &SparseRow<BigRational>) -> SparseRow<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    v.iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (*i, x.numer() * (&l / x.denom())))
        .collect()
}

/// Rank of a family of rational vectors in `Q^dim`.
pub fn rank<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a SparseRow<BigRational>>) -> usize {
    let mut space = RowSpace::new(dim);
    for v in vectors {
        space.insert(v);
        if space.is_full() {
            break;
        }
    }
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow<BigRational> {
        entries
            .iter()
            .filter(|(_, x)| *x != 0)
            .map(|&(i, x)| (i, BigRational::from_integer(x.into())))
            .collect()
    }

    fn dense(v: &[i64]) -> SparseRow<BigRational> {
        row(&v.iter().copied().enumerate().collect::<Vec<_>>())
    }

    /// Independent oracle: Gaussian elimination over dense rationals.
    fn dense_rank(rows: &[Vec<i64>], dim: usize) -> usize {
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut rank = 0;
        for col in 0..dim {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    let pivot = m[rank].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_examples() {
        let vs = [dense(&[1, 2, 3]), dense(&[2, 4, 6]), dense(&[0, 1, 1])];
        assert_eq!(rank(3, vs.iter()), 2);
        let mut s = RowSpace::new(3);
        for v in &vs {
            s.insert(v);
        }
        assert!(s.contains(&dense(&[1, 3, 4])));
        assert!(!s.contains(&dense(&[0, 0, 1])));
        assert!(s.contains(&Vec::new()));
    }

    #[test]
    fn rational_entries() {
        let half = BigRational::new(1.into(), 2.into());
        let v = vec![(0, half.clone()), (2, half)];
        let mut s = RowSpace::new(3);
        s.insert(&v);
        assert!(s.contains(&dense(&[3, 0, 3])));
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        // Cross-multiplying these leading terms exceeds i128 after two steps.
        let big = i64::MAX;
        let vs = [dense(&[big, 1, 0, 0]), dense(&[big - 1, 0, 1, 0]), dense(&[big - 2, big, big, 1])];
        let mut s = RowSpace::new(4);
        for v in &vs {
            s.insert(v);
        }
        assert_eq!(s.rank(), 3);
        assert_eq!(dense_rank(&[vec![big, 1, 0, 0], vec![big - 1, 0, 1, 0], vec![big - 2, big, big, 1]], 4), 3);
        let sum: SparseRow<BigRational> = (0..4)
            .filter_map(|j| {
                let x: BigRational = vs.iter().filter_map(|v| v.iter().find(|e| e.0 == j)).map(|e| e.1.clone()).sum();
                (!x.is_zero()).then_some((j, x))
            })
            .collect();
        assert!(s.contains(&sum));
        assert!(!s.contains(&row(&[(3, 1)])) || s.rank() == 4);
    }

    proptest! {
        #[test]
        fn matches_dense_oracle(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 0..9)) {
            let sparse: Vec<_> = rows.iter().map(|r| dense(r)).collect();
            prop_assert_eq!(rank(6, sparse.iter()), dense_rank(&rows, 6));
        }

        #[test]
        fn combinations_are_members(rows in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 5), 1..5),
                                    coeffs in proptest::collection::vec(-4i64..=4, 5)) {
            let mut s = RowSpace::new(5);
            for r in &rows { s.insert(&dense(r)); }
            let combo: Vec<i64> = (0..5).map(|j| rows.iter().zip(&coeffs).map(|(r, c)| r[j] * c).sum()).collect();
            prop_assert!(s.contains(&dense(&combo)));
        }
    }
}
