//! The bicrossed multiplicative unitary of a finite matched pair, exactly.
//!
//! Every operator built here is a permutation of the standard basis, so
//! composition is done on index maps and spans use exact rational echelon
//! forms over row-major matrix coordinates.

mod bicrossed;
mod checks;
mod operator;
mod span;

use thiserror::Error;

pub use bicrossed::{build_w, build_x, build_yhat, h_index, pentagon_check, pentagon_check_perm};
pub use checks::{
    coaction_continuity_check, comultiplication_check, crossed_product_dims, cv_span, full_report,
    regularity_report, regularity_report_for, semiregularity_slice_check, slice_spans, Bicrossed, CoactionReport,
    ComultiplicationReport, CrossedProductDims, CvSpan, Dims, RegularityReport, SemiregularitySliceReport,
};
pub use operator::{PermOperator, SparseOperator};
pub use span::OperatorSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitaryError {
    #[error("leg mismatch: {0}")]
    LegMismatch(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matched::{builtin_names, builtin_pair, FiniteGroup, Semiregularity};

    #[test]
    fn s3_slice_dimensions() {
        let mp = builtin_pair("S3").unwrap();
        let w = build_w(&mp).to_sparse();
        let (s, shat) = slice_spans(&w, 6).unwrap();
        assert_eq!((s.dim(), shat.dim()), (6, 6));
        let trivial = builtin_pair("trivial").unwrap();
        let (s, shat) = slice_spans(&build_w(&trivial).to_sparse(), 1).unwrap();
        assert_eq!((s.dim(), shat.dim()), (1, 1));
    }

    #[test]
    fn classical_x_is_regular() {
        let x = build_x(&FiniteGroup::cyclic(2)).to_sparse();
        let cv = cv_span(&x, 2).unwrap();
        assert_eq!(cv.span.dim(), 4);
        assert!(cv.product_closed);
    }

    #[test]
    fn regularity_of_builtin_pairs() {
        for (name, k) in [("S3", 36), ("F21", 441), ("S4", 576), ("trivial", 1)] {
            let r = regularity_report(&builtin_pair(name).unwrap()).unwrap();
            assert!(r.pentagon, "{name}");
            assert_eq!((r.dims.c, r.dims.k, r.dims.sshat), (k, k, k), "{name}");
            assert_eq!(r.verdict, Semiregularity::Regular);
            assert!(r.c_product_closed);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = regularity_report(&builtin_pair("S3").unwrap()).unwrap().to_json();
        assert_eq!(r["pair"], "S3");
        assert_eq!(r["verdict"], "regular");
        assert_eq!(r["dims"]["S"], 6);
        assert_eq!(r["dims"]["SShat"], 36);
        let dumped = full_report(&builtin_pair("C2xC3").unwrap(), true).unwrap();
        assert_eq!(dumped["operator"].as_array().unwrap().len(), 36);
    }

    #[test]
    fn crossed_product_dimensions() {
        for name in builtin_names() {
            let mp = builtin_pair(name).unwrap();
            if mp.group().order() > 21 {
                continue;
            }
            let d = crossed_product_dims(&mp).unwrap();
            assert!(d.holds, "{name}: {d:?}");
        }
        let d = crossed_product_dims(&builtin_pair("F21").unwrap()).unwrap();
        assert_eq!((d.dim_s, d.dim_shat, d.dim_s_shat), (21, 21, 441));
    }

    #[test]
    fn swapping_the_pair_interchanges_the_slice_algebras() {
        for name in ["S3", "D8", "S3xC2"] {
            let mp = builtin_pair(name).unwrap();
            let a = Bicrossed::new(&mp).unwrap();
            let b = Bicrossed::new(&mp.swapped().unwrap()).unwrap();
            assert_eq!((a.s().dim(), a.shat().dim()), (b.shat().dim(), b.s().dim()));
        }
    }

    #[test]
    fn comultiplication_on_s3() {
        let r = comultiplication_check(&builtin_pair("S3").unwrap()).unwrap();
        assert_eq!(r.basis_checked, 6);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn comultiplication_on_other_pairs() {
        for name in ["D8", "C2xC3", "trivial"] {
            let r = comultiplication_check(&builtin_pair(name).unwrap()).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
        }
    }

    #[test]
    fn semiregularity_slices() {
        for (name, d) in [("S3", 6), ("F21", 21), ("trivial", 1)] {
            let r = semiregularity_slice_check(&builtin_pair(name).unwrap()).unwrap();
            assert_eq!((r.dim_s, r.dim_slices), (d, d), "{name}");
            assert!(r.equal);
        }
    }

    #[test]
    fn coaction_on_s3() {
        let r = coaction_continuity_check(&builtin_pair("S3").unwrap()).unwrap();
        assert_eq!(r.dim_b, 49);
        assert_eq!((r.strong_dim, r.expected_strong_dim), (294, 294));
        assert!(r.passed(), "{r:?}");
        let t = coaction_continuity_check(&builtin_pair("trivial").unwrap()).unwrap();
        assert!(t.passed() && t.dim_b == 4 && t.dim_t == 4);
    }

    #[test]
    fn regular_representation_leg_order() {
        // On S4 the legs 13 and 23 of U do not commute, so only one of
        // Sigma W Sigma and Sigma W^* Sigma satisfies (delta x id)(U) = U13 U23.
        let mp = builtin_pair("S4").unwrap();
        let w = build_w(&mp);
        let flip = PermOperator::flip(24);
        let dims = [24; 3];
        let w12 = w.on_legs(&dims, &[0, 1]).unwrap();
        let holds = |u: &PermOperator| {
            let u13 = u.on_legs(&dims, &[0, 2]).unwrap();
            let u23 = u.on_legs(&dims, &[1, 2]).unwrap();
            w12.compose(&u13).compose(&w12.inverse()) == u13.compose(&u23)
        };
        assert!(holds(&flip.compose(&w).compose(&flip)));
        assert!(!holds(&flip.compose(&w.inverse()).compose(&flip)));
        assert!(!holds(&w));
    }
}
