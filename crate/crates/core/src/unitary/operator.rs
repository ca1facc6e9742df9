use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::UnitaryError;
use crate::linalg::SparseRow;

/// Mixed-radix digits of `index` over `dims`, most significant leg first.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn undigits(ds: &[usize], dims: &[usize]) -> usize {
    ds.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn check_legs(dims: &[usize], legs: &[usize], local: usize) -> Result<Vec<usize>, UnitaryError> {
    let mut seen = vec![false; dims.len()];
    for &l in legs {
        if l >= dims.len() || std::mem::replace(&mut seen[l], true) {
            return Err(UnitaryError::LegMismatch(format!("invalid leg list {legs:?} for {} legs", dims.len())));
        }
    }
    let local_dims: Vec<usize> = legs.iter().map(|&l| dims[l]).collect();
    if local_dims.iter().product::<usize>() != local {
        return Err(UnitaryError::LegMismatch(format!(
            "operator of size {local} does not fit legs {legs:?} of dimensions {dims:?}"
        )));
    }
    Ok(local_dims)
}

/// A permutation of basis vectors: `e_j -> e_{map[j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOperator {
    map: Vec<usize>,
}

impl PermOperator {
    pub fn new(map: Vec<usize>) -> Result<Self, UnitaryError> {
        let mut hit = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || std::mem::replace(&mut hit[j], true) {
                return Err(UnitaryError::NotAPermutation(format!("image {j} repeated or out of range")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    /// The operator `(P xi)(q) = xi(sigma(q))`, i.e. `P e_{sigma(q)} = e_q`.
    pub fn from_pointwise(n: usize, sigma: impl Fn(usize) -> usize) -> Result<Self, UnitaryError> {
        let mut map = vec![usize::MAX; n];
        for q in 0..n {
            let r = sigma(q);
            if r >= n || map[r] != usize::MAX {
                return Err(UnitaryError::NotAPermutation(format!("pointwise map is not a bijection at {q}")));
            }
            map[r] = q;
        }
        Ok(Self { map })
    }

    /// The flip `e_a (x) e_b -> e_b (x) e_a` on `H_n (x) H_n`.
    pub fn flip(n: usize) -> Self {
        Self {
            map: (0..n * n).map(|j| (j % n) * n + j / n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, j: usize) -> usize {
        self.map[j]
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "composing permutations of different sizes");
        Self {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.dim()];
        for (j, &i) in self.map.iter().enumerate() {
            inv[i] = j;
        }
        Self { map: inv }
    }

    /// Places the operator on `legs` (in that order) of a tensor product
    /// with leg dimensions `dims`, acting as the identity elsewhere.
    pub fn on_legs(&self, dims: &[usize], legs: &[usize]) -> Result<Self, UnitaryError> {
        let local_dims = check_legs(dims, legs, self.dim())?;
        let total: usize = dims.iter().product();
        let map = (0..total)
            .map(|j| {
                let mut ds = digits(j, dims);
                let local: Vec<usize> = legs.iter().map(|&l| ds[l]).collect();
                let image = digits(self.map[undigits(&local, &local_dims)], &local_dims);
                for (&l, x) in legs.iter().zip(image) {
                    ds[l] = x;
                }
                undigits(&ds, dims)
            })
            .collect();
        Ok(Self { map })
    }

    pub fn to_sparse(&self) -> SparseOperator {
        let mut op = SparseOperator::zero(self.dim(), self.dim());
        for (j, &i) in self.map.iter().enumerate() {
            op.entries.insert((i, j), BigRational::one());
        }
        op
    }
}

/// A matrix with exact rational entries stored by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SparseOperator {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        PermOperator::identity(n).to_sparse()
    }

    /// Matrix unit `|i><j|`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut op = Self::zero(rows, cols);
        op.set(i, j, BigRational::one());
        op
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    fn add_at(&mut self, i: usize, j: usize, v: BigRational) {
        let slot = self.entries.entry((i, j)).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, UnitaryError> {
        if self.cols != other.rows {
            return Err(UnitaryError::LegMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); other.rows];
        for (&(k, j), v) in &other.entries {
            by_row[k].push((j, v));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add_at(i, j, a * b);
            }
        }
        Ok(out)
    }

    /// Adjoint; entries are real, so this is the transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    /// `P A P^*` for a permutation `P`.
    pub fn conjugate(&self, p: &PermOperator) -> Result<Self, UnitaryError> {
        if self.rows != p.dim() || self.cols != p.dim() {
            return Err(UnitaryError::LegMismatch("conjugating by a permutation of another size".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), v)| ((p.image(i), p.image(j)), v.clone()))
                .collect(),
        })
    }

    /// `P^* A P`.
    pub fn conjugate_adjoint(&self, p: &PermOperator) -> Result<Self, UnitaryError> {
        self.conjugate(&p.inverse())
    }

    /// `self (x) other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                out.entries.insert((i * other.rows + k, j * other.cols + l), a * b);
            }
        }
        out
    }

    /// Places a square operator on `legs` (in that order) of a tensor
    /// product with leg dimensions `dims`, tensored with the identity.
    pub fn on_legs(&self, dims: &[usize], legs: &[usize]) -> Result<Self, UnitaryError> {
        if self.rows != self.cols {
            return Err(UnitaryError::LegMismatch("only square operators can be placed on legs".into()));
        }
        let local_dims = check_legs(dims, legs, self.rows)?;
        let others: Vec<usize> = (0..dims.len()).filter(|l| !legs.contains(l)).collect();
        let other_dims: Vec<usize> = others.iter().map(|&l| dims[l]).collect();
        let spectators: usize = other_dims.iter().product();
        let total: usize = dims.iter().product();
        let mut out = Self::zero(total, total);
        let mut ds = vec![0; dims.len()];
        for (&(r, c), v) in &self.entries {
            let (rd, cd) = (digits(r, &local_dims), digits(c, &local_dims));
            for o in 0..spectators {
                for (&l, x) in others.iter().zip(digits(o, &other_dims)) {
                    ds[l] = x;
                }
                for (&l, &x) in legs.iter().zip(&rd) {
                    ds[l] = x;
                }
                let row = undigits(&ds, dims);
                for (&l, &x) in legs.iter().zip(&cd) {
                    ds[l] = x;
                }
                out.entries.insert((row, undigits(&ds, dims)), v.clone());
            }
        }
        Ok(out)
    }

    /// Slices `(omega_ij (x) id)(A)` of an operator on `H_left (x) H_right`
    /// for every matrix-unit functional `omega_ij = <e_i, . e_j>`, in
    /// row-major order of `(i, j)`. Zero slices are omitted.
    pub fn slices_first(&self, left: usize, right: usize) -> Result<Vec<Self>, UnitaryError> {
        self.slices(left, right, true)
    }

    /// Slices `(id (x) omega_ij)(A)`, in row-major order of `(i, j)`.
    pub fn slices_second(&self, left: usize, right: usize) -> Result<Vec<Self>, UnitaryError> {
        self.slices(left, right, false)
    }

    fn slices(&self, left: usize, right: usize, first: bool) -> Result<Vec<Self>, UnitaryError> {
        if self.rows != left * right || self.cols != left * right {
            return Err(UnitaryError::LegMismatch(format!(
                "operator is {}x{}, legs give {}",
                self.rows,
                self.cols,
                left * right
            )));
        }
        let mut out: BTreeMap<(usize, usize), Self> = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            let (a, b) = (r / right, r % right);
            let (x, y) = (c / right, c % right);
            let (key, pos, size) = if first {
                ((a, x), (b, y), right)
            } else {
                ((b, y), (a, x), left)
            };
            out.entry(key)
                .or_insert_with(|| Self::zero(size, size))
                .entries
                .insert(pos, v.clone());
        }
        Ok(out.into_values().collect())
    }

    /// Row-major coordinates, for linear algebra over matrices.
    pub fn flatten(&self) -> SparseRow<BigRational> {
        self.entries.iter().map(|(&(i, j), v)| (i * self.cols + j, v.clone())).collect()
    }

    /// Whether the matrix has exactly one entry 1 in each row and column.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols || self.entries.len() != self.rows {
            return false;
        }
        let mut rows = vec![false; self.rows];
        let mut cols = vec![false; self.cols];
        self.entries.iter().all(|(&(i, j), v)| {
            v.is_one() && !std::mem::replace(&mut rows[i], true) && !std::mem::replace(&mut cols[j], true)
        })
    }

    /// `[row, col, numerator, denominator]` quadruples.
    pub fn dump(&self) -> Value {
        let num = |x: &BigInt| x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()));
        Value::Array(
            self.entries
                .iter()
                .map(|(&(i, j), v)| json!([i, j, num(v.numer()), num(v.denom())]))
                .collect(),
        )
    }
}
