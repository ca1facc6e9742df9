use serde::Serialize;
use serde_json::Value;

use super::{build_w, pentagon_check_perm, OperatorSpan, PermOperator, SparseOperator, UnitaryError};
use crate::matched::{MatchedPair, Semiregularity};

/// `S = [(omega (x) id)(W)]` and `Shat = [(id (x) omega)(W)]`.
pub fn slice_spans(w: &SparseOperator, leg: usize) -> Result<(OperatorSpan, OperatorSpan), UnitaryError> {
    let s = OperatorSpan::from_generators(leg, leg, &w.slices_first(leg, leg)?)?;
    let shat = OperatorSpan::from_generators(leg, leg, &w.slices_second(leg, leg)?)?;
    Ok((s, shat))
}

/// `[C(V)]` with the rank of its product span `[C(V) C(V)]`.
#[derive(Debug, Clone)]
pub struct CvSpan {
    pub span: OperatorSpan,
    pub product_dim: usize,
    /// `[C(V) C(V)] = [C(V)]`.
    pub product_closed: bool,
}

/// Second-leg slices of `Sigma V`, `Sigma` the flip.
pub fn cv_span(v: &SparseOperator, leg: usize) -> Result<CvSpan, UnitaryError> {
    let sv = PermOperator::flip(leg).to_sparse().mul(v)?;
    let span = OperatorSpan::from_generators(leg, leg, &sv.slices_second(leg, leg)?)?;
    let product = span.product(&span)?;
    Ok(CvSpan {
        product_dim: product.dim(),
        product_closed: span.same_span(&product),
        span,
    })
}

/// A matched pair together with its unitary and slice algebras.
#[derive(Debug, Clone)]
pub struct Bicrossed {
    pair: MatchedPair,
    w: PermOperator,
    w_sparse: SparseOperator,
    s: OperatorSpan,
    shat: OperatorSpan,
}

impl Bicrossed {
    pub fn new(pair: &MatchedPair) -> Result<Self, UnitaryError> {
        let w = build_w(pair);
        let w_sparse = w.to_sparse();
        let (s, shat) = slice_spans(&w_sparse, pair.group().order())?;
        Ok(Self {
            pair: pair.clone(),
            w,
            w_sparse,
            s,
            shat,
        })
    }

    pub fn pair(&self) -> &MatchedPair {
        &self.pair
    }

    /// Dimension of `H = l2(G2) (x) l2(G1)`.
    pub fn leg(&self) -> usize {
        self.pair.group().order()
    }

    pub fn w(&self) -> &PermOperator {
        &self.w
    }

    pub fn w_sparse(&self) -> &SparseOperator {
        &self.w_sparse
    }

    pub fn s(&self) -> &OperatorSpan {
        &self.s
    }

    pub fn shat(&self) -> &OperatorSpan {
        &self.shat
    }

    /// `[S Shat]`.
    pub fn s_shat(&self) -> Result<OperatorSpan, UnitaryError> {
        self.s.product(&self.shat)
    }

    /// `delta(x) = W (x (x) 1) W^*`.
    pub fn delta(&self, x: &SparseOperator) -> Result<SparseOperator, UnitaryError> {
        x.tensor(&SparseOperator::identity(self.leg())).conjugate(&self.w)
    }

    /// `delta_hat(y) = W^* (1 (x) y) W`.
    pub fn delta_hat(&self, y: &SparseOperator) -> Result<SparseOperator, UnitaryError> {
        SparseOperator::identity(self.leg()).tensor(y).conjugate_adjoint(&self.w)
    }

    /// The function `F` on `G1` acting on `H` by `F(alpha_s(g))`, as a
    /// diagonal matrix; `F` is the indicator of the position `k`.
    pub fn alpha_indicator(&self, k: usize) -> SparseOperator {
        let mp = &self.pair;
        let mut op = SparseOperator::zero(self.leg(), self.leg());
        for s in 0..mp.order2() {
            for g in 0..mp.order1() {
                if mp.alpha(s, g) == k {
                    let i = super::h_index(mp, s, g);
                    op.set(i, i, num_traits::One::one());
                }
            }
        }
        op
    }
}

/// Whether `a` lies in `U (x) V` for operator spans on the two legs.
fn in_tensor(a: &SparseOperator, u: &OperatorSpan, v: &OperatorSpan) -> Result<bool, UnitaryError> {
    let (l, r) = (u.shape().0, v.shape().0);
    for x in a.slices_first(l, r)? {
        if !v.contains(&x)? {
            return Ok(false);
        }
    }
    for x in a.slices_second(l, r)? {
        if !u.contains(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct Dims {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "Shat")]
    pub shat: usize,
    #[serde(rename = "C")]
    pub c: usize,
    #[serde(rename = "SShat")]
    pub sshat: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub pair: String,
    pub pentagon: bool,
    pub dims: Dims,
    pub verdict: Semiregularity,
    /// `[C(W) C(W)] = [C(W)]`.
    pub c_product_closed: bool,
    /// Whether `[C(W)]` and `[S Shat]` coincide as subspaces, not just in
    /// dimension. Recorded, not asserted.
    pub c_equals_s_shat: bool,
}

impl RegularityReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn regularity_report(mp: &MatchedPair) -> Result<RegularityReport, UnitaryError> {
    regularity_report_for(&Bicrossed::new(mp)?)
}

pub fn regularity_report_for(b: &Bicrossed) -> Result<RegularityReport, UnitaryError> {
    let n = b.leg();
    let cv = cv_span(b.w_sparse(), n)?;
    let sshat = b.s_shat()?;
    let dims = Dims {
        s: b.s().dim(),
        shat: b.shat().dim(),
        c: cv.span.dim(),
        sshat: sshat.dim(),
        k: n * n,
    };
    // In finite dimensions the compact operators are everything, so the
    // closure of C(W) contains them only when it equals them.
    let verdict = if dims.c == dims.k {
        Semiregularity::Regular
    } else {
        Semiregularity::NotSemiregular
    };
    Ok(RegularityReport {
        pair: b.pair().label().to_string(),
        pentagon: pentagon_check_perm(b.w())?,
        c_product_closed: cv.product_closed,
        c_equals_s_shat: cv.span.same_span(&sshat),
        dims,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossedProductDims {
    pub dim_s: usize,
    pub dim_shat: usize,
    pub dim_s_shat: usize,
    /// `|G2| |G1|`.
    pub expected_s: usize,
    /// `|G2| |G1| |G|`.
    pub expected_s_shat: usize,
    pub holds: bool,
}

pub fn crossed_product_dims(mp: &MatchedPair) -> Result<CrossedProductDims, UnitaryError> {
    let b = Bicrossed::new(mp)?;
    let expected_s = mp.order1() * mp.order2();
    let expected_s_shat = expected_s * mp.group().order();
    let dim_s_shat = b.s_shat()?.dim();
    Ok(CrossedProductDims {
        dim_s: b.s().dim(),
        dim_shat: b.shat().dim(),
        dim_s_shat,
        expected_s,
        expected_s_shat,
        holds: b.s().dim() == expected_s && b.shat().dim() == expected_s && dim_s_shat == expected_s_shat,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComultiplicationReport {
    pub basis_checked: usize,
    pub delta_coassociative: bool,
    pub delta_hat_coassociative: bool,
    /// `delta(S)` inside `S (x) S`.
    pub delta_in_s_tensor_s: bool,
    pub delta_hat_in_shat_tensor_shat: bool,
    /// `delta(1) = 1 (x) 1`.
    pub delta_unital: bool,
    /// `alpha(F)` lies in `S` and `delta(alpha(F)) = (alpha (x) alpha)(delta_1(F))`
    /// for every point mass `F` on `G1`.
    pub generator_formula: bool,
}

impl ComultiplicationReport {
    pub fn passed(&self) -> bool {
        self.delta_coassociative
            && self.delta_hat_coassociative
            && self.delta_in_s_tensor_s
            && self.delta_hat_in_shat_tensor_shat
            && self.delta_unital
            && self.generator_formula
    }
}

pub fn comultiplication_check(mp: &MatchedPair) -> Result<ComultiplicationReport, UnitaryError> {
    let b = Bicrossed::new(mp)?;
    let n = b.leg();
    let dims = [n; 3];
    let w12 = b.w().on_legs(&dims, &[0, 1])?;
    let w23 = b.w().on_legs(&dims, &[1, 2])?;
    let id = SparseOperator::identity(n);

    let mut report = ComultiplicationReport {
        basis_checked: b.s().dim(),
        delta_coassociative: true,
        delta_hat_coassociative: true,
        delta_in_s_tensor_s: true,
        delta_hat_in_shat_tensor_shat: true,
        delta_unital: b.delta(&id)? == SparseOperator::identity(n * n),
        generator_formula: true,
    };
    for x in b.s().basis() {
        let d = b.delta(x)?;
        // (delta (x) id) delta(x) = W12 delta(x)_13 W12^*,
        // (id (x) delta) delta(x) = W23 delta(x)_12 W23^*.
        let left = d.on_legs(&dims, &[0, 2])?.conjugate(&w12)?;
        let right = d.on_legs(&dims, &[0, 1])?.conjugate(&w23)?;
        report.delta_coassociative &= left == right;
        report.delta_in_s_tensor_s &= in_tensor(&d, b.s(), b.s())?;
    }
    for y in b.shat().basis() {
        let d = b.delta_hat(y)?;
        let left = d.on_legs(&dims, &[1, 2])?.conjugate_adjoint(&w12)?;
        let right = d.on_legs(&dims, &[0, 2])?.conjugate_adjoint(&w23)?;
        report.delta_hat_coassociative &= left == right;
        report.delta_hat_in_shat_tensor_shat &= in_tensor(&d, b.shat(), b.shat())?;
    }
    for k in 0..mp.order1() {
        let a = b.alpha_indicator(k);
        if !b.s().contains(&a)? {
            report.generator_formula = false;
            continue;
        }
        // delta_1(e_k) = sum over g h = k of e_g (x) e_h.
        let mut expected = SparseOperator::zero(n * n, n * n);
        for g in 0..mp.order1() {
            let h = mp.mul1(mp.inv1(g), k);
            expected = add(&expected, &b.alpha_indicator(g).tensor(&b.alpha_indicator(h)));
        }
        report.generator_formula &= b.delta(&a)? == expected;
    }
    Ok(report)
}

fn add(a: &SparseOperator, b: &SparseOperator) -> SparseOperator {
    let mut out = a.clone();
    for (&(i, j), v) in b.entries() {
        out.set(i, j, out.get(i, j) + v);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiregularitySliceReport {
    pub dim_s: usize,
    /// Dimension of `[(omega (x) id)(W^* (1 (x) S) W)]`.
    pub dim_slices: usize,
    pub equal: bool,
}

pub fn semiregularity_slice_check(mp: &MatchedPair) -> Result<SemiregularitySliceReport, UnitaryError> {
    let b = Bicrossed::new(mp)?;
    let n = b.leg();
    let mut span = OperatorSpan::new(n, n);
    for x in b.s().basis() {
        for slice in b.delta_hat(x)?.slices_first(n, n)? {
            span.insert(&slice)?;
        }
    }
    Ok(SemiregularitySliceReport {
        dim_s: b.s().dim(),
        dim_slices: span.dim(),
        equal: span.same_span(b.s()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoactionReport {
    /// `dim B = (dim H + 1)^2`.
    pub dim_b: usize,
    /// `(delta (x) id)(U) = U13 U23` for the left regular corepresentation
    /// `U = Sigma W Sigma` that defines the coaction.
    pub corepresentation: bool,
    /// `(delta (x) id) alpha = (id (x) alpha) alpha` on all of `B`.
    pub coaction_identity: bool,
    pub dim_t: usize,
    pub t_adjoint_closed: bool,
    pub t_product_closed: bool,
    /// `T = B`.
    pub weak_continuity: bool,
    /// Dimension of `[alpha(B)(S (x) 1)]`.
    pub strong_dim: usize,
    /// `dim S * dim B`.
    pub expected_strong_dim: usize,
    /// `[alpha(B)(S (x) 1)] = S (x) B`.
    pub strong_continuity: bool,
}

impl CoactionReport {
    pub fn passed(&self) -> bool {
        self.corepresentation
            && self.coaction_identity
            && self.t_adjoint_closed
            && self.t_product_closed
            && self.weak_continuity
            && self.strong_continuity
    }
}

/// The coaction `alpha(x) = X^* (1 (x) x) X` of `S` on `B = L(H + C)`, with
/// `X = U + 1` acting on `H (x) (H + C)`.
pub fn coaction_continuity_check(mp: &MatchedPair) -> Result<CoactionReport, UnitaryError> {
    let b = Bicrossed::new(mp)?;
    let n = b.leg();
    let m = n + 1;
    let flip = PermOperator::flip(n);
    let u = flip.compose(b.w()).compose(&flip);

    let dims3 = [n; 3];
    let w12 = b.w().on_legs(&dims3, &[0, 1])?;
    let u13 = u.on_legs(&dims3, &[0, 2])?;
    let u23 = u.on_legs(&dims3, &[1, 2])?;
    let corepresentation = w12.compose(&u13).compose(&w12.inverse()) == u13.compose(&u23);

    let x = PermOperator::new(
        (0..n * m)
            .map(|q| {
                let (a, c) = (q / m, q % m);
                if c == n {
                    q
                } else {
                    let r = u.image(a * n + c);
                    (r / n) * m + r % n
                }
            })
            .collect(),
    )?;
    let alpha = |e: &SparseOperator| SparseOperator::identity(n).tensor(e).conjugate_adjoint(&x);

    let units: Vec<SparseOperator> = (0..m * m).map(|k| SparseOperator::unit(m, m, k / m, k % m)).collect();
    let images: Vec<SparseOperator> = units.iter().map(alpha).collect::<Result<_, _>>()?;

    let dims = [n, n, m];
    let x23 = x.on_legs(&dims, &[1, 2])?;
    let w12 = b.w().on_legs(&dims, &[0, 1])?;
    let mut coaction_identity = true;
    for a in &images {
        let a13 = a.on_legs(&dims, &[0, 2])?;
        coaction_identity &= a13.conjugate_adjoint(&x23)? == a13.conjugate(&w12)?;
    }

    let mut t = OperatorSpan::new(m, m);
    for a in &images {
        for slice in a.slices_first(n, m)? {
            t.insert(&slice)?;
        }
    }
    let t_adjoint_closed = t.is_adjoint_closed()?;
    let t_product_closed = t.contains_span(&t.product(&t)?);

    let full_b = OperatorSpan::from_generators(m, m, &units)?;
    let mut strong = OperatorSpan::new(n * m, n * m);
    let mut inside = true;
    for a in &images {
        for s in b.s().basis() {
            let prod = a.mul(&s.tensor(&SparseOperator::identity(m)))?;
            inside &= in_tensor(&prod, b.s(), &full_b)?;
            strong.insert(&prod)?;
        }
    }
    let expected_strong_dim = b.s().dim() * m * m;
    Ok(CoactionReport {
        dim_b: m * m,
        corepresentation,
        coaction_identity,
        dim_t: t.dim(),
        t_adjoint_closed,
        t_product_closed,
        weak_continuity: t.dim() == m * m,
        strong_dim: strong.dim(),
        expected_strong_dim,
        strong_continuity: inside && strong.dim() == expected_strong_dim,
    })
}

/// Everything a report on a pair can contain, as JSON.
pub fn full_report(mp: &MatchedPair, dump_operator: bool) -> Result<Value, UnitaryError> {
    let b = Bicrossed::new(mp)?;
    let mut out = regularity_report_for(&b)?.to_json();
    if dump_operator {
        out["operator"] = b.w_sparse().dump();
    }
    Ok(out)
}
