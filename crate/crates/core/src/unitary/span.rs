use num_bigint::BigInt;

use super::{SparseOperator, UnitaryError};
use crate::linalg::{RowSpace, SparseRow};

/// The linear span of a set of `rows x cols` matrices, kept as an exact
/// echelon form of their row-major coordinates.
#[derive(Debug, Clone)]
pub struct OperatorSpan {
    rows: usize,
    cols: usize,
    space: RowSpace,
    /// Generators that enlarged the span, in insertion order.
    basis: Vec<SparseOperator>,
}

impl OperatorSpan {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            space: RowSpace::new(rows * cols),
            basis: Vec::new(),
        }
    }

    pub fn from_generators<'a>(
        rows: usize,
        cols: usize,
        gens: impl IntoIterator<Item = &'a SparseOperator>,
    ) -> Result<Self, UnitaryError> {
        let mut span = Self::new(rows, cols);
        for g in gens {
            span.insert(g)?;
        }
        Ok(span)
    }

    fn check(&self, op: &SparseOperator) -> Result<(), UnitaryError> {
        if op.rows() != self.rows || op.cols() != self.cols {
            return Err(UnitaryError::LegMismatch(format!(
                "{}x{} operator in a span of {}x{} operators",
                op.rows(),
                op.cols(),
                self.rows,
                self.cols
            )));
        }
        Ok(())
    }

    /// Adds a generator; returns whether the span grew.
    pub fn insert(&mut self, op: &SparseOperator) -> Result<bool, UnitaryError> {
        self.check(op)?;
        if self.space.is_full() {
            return Ok(false);
        }
        let grew = self.space.insert(&op.flatten());
        if grew {
            self.basis.push(op.clone());
        }
        Ok(grew)
    }

    pub fn contains(&self, op: &SparseOperator) -> Result<bool, UnitaryError> {
        self.check(op)?;
        Ok(self.space.contains(&op.flatten()))
    }

    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    pub fn is_full(&self) -> bool {
        self.space.is_full()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Linearly independent generators spanning the space.
    pub fn basis(&self) -> &[SparseOperator] {
        &self.basis
    }

    /// Reduced echelon rows as primitive integer vectors of row-major
    /// coordinates.
    pub fn echelon(&self) -> Vec<SparseRow<BigInt>> {
        self.space.basis_rows()
    }

    pub fn contains_span(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.space.contains_space(&other.space)
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains_span(other)
    }

    /// `[A B]`: the span of all products `a b`.
    pub fn product(&self, other: &Self) -> Result<Self, UnitaryError> {
        let mut out = Self::new(self.rows, other.cols);
        for a in &self.basis {
            for b in &other.basis {
                if out.is_full() {
                    return Ok(out);
                }
                out.insert(&a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// The span of the adjoints.
    pub fn adjoint(&self) -> Result<Self, UnitaryError> {
        let adj: Vec<SparseOperator> = self.basis.iter().map(SparseOperator::adjoint).collect();
        Self::from_generators(self.cols, self.rows, &adj)
    }

    pub fn is_adjoint_closed(&self) -> Result<bool, UnitaryError> {
        Ok(self.rows == self.cols && self.same_span(&self.adjoint()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_triangular_matrices() {
        let n = 3;
        let gens: Vec<SparseOperator> = (0..n)
            .flat_map(|i| (i..n).map(move |j| SparseOperator::unit(n, n, i, j)))
            .collect();
        let span = OperatorSpan::from_generators(n, n, &gens).unwrap();
        assert_eq!(span.dim(), 6);
        let prod = span.product(&span).unwrap();
        assert!(span.same_span(&prod));
        assert!(!span.is_adjoint_closed().unwrap());
        assert!(span.contains(&SparseOperator::identity(3)).unwrap());
        assert!(!span.contains(&SparseOperator::unit(3, 3, 2, 0)).unwrap());
    }

    #[test]
    fn strictly_triangular_products_shrink() {
        let gens = [SparseOperator::unit(3, 3, 0, 1), SparseOperator::unit(3, 3, 1, 2)];
        let span = OperatorSpan::from_generators(3, 3, &gens).unwrap();
        let prod = span.product(&span).unwrap();
        assert_eq!(prod.dim(), 1);
        assert!(!span.contains_span(&prod));
    }

    #[test]
    fn shape_is_checked() {
        let mut span = OperatorSpan::new(2, 2);
        assert!(span.insert(&SparseOperator::identity(3)).is_err());
        assert!(span.insert(&SparseOperator::zero(2, 2)).is_ok_and(|grew| !grew));
    }
}
