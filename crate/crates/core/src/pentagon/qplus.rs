use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{builtin_map, PentagonError};

/// The first `n` positive rationals in Calkin-Wilf order:
/// `1, 1/2, 2, 1/3, 3/2, ...`, via `q -> 1 / (2 floor(q) - q + 1)`.
pub fn calkin_wilf(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n);
    let mut q = BigRational::one();
    for _ in 0..n {
        out.push(q.clone());
        let two_floor = BigRational::from_integer(q.numer().div_floor(q.denom()) * 2);
        q = (two_floor - &q + BigRational::one()).recip();
    }
    out
}

/// The slice `(omega_ij (x) id)(Y)` of the operator `Y e_(u,w) = e_(v^-1(u,w))`
/// on `l2(Q+ x Q+)`, for `omega_ij = <e_i, . e_j>`. Its entry at row `s`,
/// column `r` is `1` iff `v(i, s) = (j, r)`. Since the first coordinate of
/// `v^-1(j, r)` is `j (r + 1) / r`, the slice is zero unless `i > j` and
/// then has the single entry `r = j / (i - j)`, `s = j + r + j r`.
pub fn qplus_slice(i: &BigRational, j: &BigRational) -> Option<(BigRational, BigRational)> {
    if i <= j {
        return None;
    }
    let r = j / (i - j);
    let s = j + &r + j * &r;
    Some((s, r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceEntry {
    /// The functional `<e_i, . e_j>` on the first leg.
    pub functional: [String; 2],
    pub row: String,
    pub col: String,
    pub row_in_window: bool,
    pub col_in_window: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub window: Vec<String>,
    pub functionals: usize,
    pub nonzero_slices: usize,
    /// Every slice checked against the map itself: `v(i, s) = (j, r)`.
    pub entries_verified: bool,
    /// Every nonzero entry has column label below row label.
    pub strictly_triangular: bool,
    pub diagonal_zero: bool,
    /// Nonzero slices, each of the form `theta_s theta_r^*`.
    pub entries: Vec<SliceEntry>,
    /// A slice whose adjoint sits above the diagonal, where no slice has
    /// support; the adjoint is orthogonal to every slice.
    pub adjoint_witness: Option<SliceEntry>,
    pub adjoint_orthogonal: bool,
}

impl SliceReport {
    pub fn holds(&self) -> bool {
        self.entries_verified
            && self.strictly_triangular
            && self.diagonal_zero
            && self.adjoint_witness.is_some()
            && self.adjoint_orthogonal
    }
}

/// Slices of the operator of the `qplus` map over all matrix-unit
/// functionals indexed by the window. Entries are exact; window membership
/// only affects what is flagged as reported inside it.
pub fn qplus_slice_structure(window: &[BigRational]) -> Result<SliceReport, PentagonError> {
    if window.is_empty() {
        return Err(PentagonError::EmptyWindow);
    }
    if let Some(bad) = window.iter().find(|x| !x.is_positive()) {
        return Err(PentagonError::DomainViolation(format!("window entry {bad} is not positive")));
    }
    let mut sorted = window.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != window.len() {
        return Err(PentagonError::DomainViolation("window entries must be distinct".into()));
    }
    let v = builtin_map("qplus")?;
    let inside = |x: &BigRational| sorted.binary_search(x).is_ok();

    let mut entries = Vec::new();
    let mut raw = Vec::new();
    let mut entries_verified = true;
    for i in window {
        for j in window {
            if let Some((s, r)) = qplus_slice(i, j) {
                entries_verified &= v.apply(&[i.clone(), s.clone()]) == Some(vec![j.clone(), r.clone()]);
                entries.push(SliceEntry {
                    functional: [i.to_string(), j.to_string()],
                    row: s.to_string(),
                    col: r.to_string(),
                    row_in_window: inside(&s),
                    col_in_window: inside(&r),
                });
                raw.push((s, r));
            }
        }
    }
    let strictly_triangular = raw.iter().all(|(s, r)| r < s);
    let diagonal_zero = raw.iter().all(|(s, r)| r != s);
    let adjoint_witness = entries.first().cloned();
    // The adjoint of theta_s theta_r^* is theta_r theta_s^*, supported at
    // (r, s); it is orthogonal to every slice unless some slice sits there.
    let adjoint_orthogonal = raw
        .first()
        .is_some_and(|(s, r)| !raw.iter().any(|(s2, r2)| s2 == r && r2 == s));
    Ok(SliceReport {
        window: window.iter().map(ToString::to_string).collect(),
        functionals: window.len() * window.len(),
        nonzero_slices: entries.len(),
        entries_verified,
        strictly_triangular,
        diagonal_zero,
        entries,
        adjoint_witness,
        adjoint_orthogonal,
    })
}
