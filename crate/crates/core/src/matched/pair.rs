use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupJson, MatchedError};

/// A finite group `G` with subgroups `G1`, `G2` such that every `x` in `G`
/// factors uniquely as `x = p1(x) p2(x)`.
///
/// Elements of the subgroups are addressed by their position in
/// [`MatchedPair::g1`] / [`MatchedPair::g2`]; position 0 is the identity.
#[derive(Debug, Clone)]
pub struct MatchedPair {
    label: String,
    group: FiniteGroup,
    g1: Vec<usize>,
    g2: Vec<usize>,
    p1: Vec<usize>,
    p2: Vec<usize>,
    /// `product[g * |G2| + s] = g1[g] * g2[s]`.
    product: Vec<usize>,
    pos1: Vec<Option<usize>>,
    pos2: Vec<Option<usize>>,
}

/// JSON ingestion form: a group table plus the two subgroups as element
/// indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(default)]
    pub label: Option<String>,
    pub group: GroupJson,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

/// Outcome of the exhaustive check of the matching relations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub triples_checked: usize,
    /// `(s, g, h)` with `alpha_s(gh) != alpha_s(g) alpha_{beta_g(s)}(h)`.
    pub alpha_failures: Vec<(usize, usize, usize)>,
    /// `(s, g, h)` with `beta_{gh}(s) != beta_h(beta_g(s))`.
    pub beta_failures: Vec<(usize, usize, usize)>,
    /// Elements of `G1` or `G2` on which `p1`/`p2` do not act as projections.
    pub projection_failures: Vec<usize>,
}

impl MatchingReport {
    pub fn passed(&self) -> bool {
        self.alpha_failures.is_empty() && self.beta_failures.is_empty() && self.projection_failures.is_empty()
    }
}

fn describe(group: &FiniteGroup, elems: &[usize]) -> String {
    let labels: Vec<&str> = elems.iter().map(|&x| group.label(x)).collect();
    format!("{{{}}}", labels.join(", "))
}

fn positions(n: usize, elems: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = Some(i);
    }
    pos
}

/// Identity first, remaining elements in increasing index order, duplicates removed.
fn normalise(group: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut rest: Vec<usize> = elems.iter().copied().filter(|&x| x != group.identity()).collect();
    rest.sort_unstable();
    rest.dedup();
    let mut out = vec![group.identity()];
    out.extend(rest);
    out
}

/// Builds the factorization and action tables of `(G, G1, G2)`, failing
/// unless `G1 x G2 -> G` is a bijection.
pub fn check_matched(group: FiniteGroup, g1: &[usize], g2: &[usize]) -> Result<MatchedPair, MatchedError> {
    let n = group.order();
    for sub in [g1, g2] {
        if sub.iter().any(|&x| x >= n) || !group.is_subgroup(sub) {
            let shown: Vec<usize> = sub.iter().copied().filter(|&x| x < n).collect();
            return Err(MatchedError::NotSubgroup(describe(&group, &shown)));
        }
    }
    let g1 = normalise(&group, g1);
    let g2 = normalise(&group, g2);
    if let Some(&x) = g1.iter().find(|&&x| x != group.identity() && g2.contains(&x)) {
        return Err(MatchedError::NontrivialIntersection(group.label(x).to_string()));
    }
    if g1.len() * g2.len() != n {
        return Err(MatchedError::NotExactFactorization(format!(
            "|G1| |G2| = {} * {} differs from |G| = {n}",
            g1.len(),
            g2.len()
        )));
    }
    let mut p1 = vec![usize::MAX; n];
    let mut p2 = vec![usize::MAX; n];
    let mut product = Vec::with_capacity(n);
    for (i, &g) in g1.iter().enumerate() {
        for (j, &s) in g2.iter().enumerate() {
            let x = group.mul(g, s);
            if p1[x] != usize::MAX {
                return Err(MatchedError::NotExactFactorization(format!(
                    "{} is reached twice",
                    group.label(x)
                )));
            }
            p1[x] = i;
            p2[x] = j;
            product.push(x);
        }
    }
    let pos1 = positions(n, &g1);
    let pos2 = positions(n, &g2);
    let label = format!("{} . {}", describe(&group, &g1), describe(&group, &g2));
    Ok(MatchedPair {
        label,
        group,
        g1,
        g2,
        p1,
        p2,
        product,
        pos1,
        pos2,
    })
}

impl MatchedPair {
    pub fn from_json(j: &PairJson) -> Result<Self, MatchedError> {
        let mp = check_matched(FiniteGroup::from_json(&j.group)?, &j.g1, &j.g2)?;
        Ok(match &j.label {
            Some(l) => mp.with_label(l),
            None => mp,
        })
    }

    pub fn to_json(&self) -> PairJson {
        PairJson {
            label: Some(self.label.clone()),
            group: self.group.to_json(),
            g1: self.g1.clone(),
            g2: self.g2.clone(),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Group indices of the elements of `G1`, identity first.
    pub fn g1(&self) -> &[usize] {
        &self.g1
    }

    pub fn g2(&self) -> &[usize] {
        &self.g2
    }

    pub fn order1(&self) -> usize {
        self.g1.len()
    }

    pub fn order2(&self) -> usize {
        self.g2.len()
    }

    /// Position in `G1` of the first factor of the group element `x`.
    pub fn p1(&self, x: usize) -> usize {
        self.p1[x]
    }

    /// Position in `G2` of the second factor of the group element `x`.
    pub fn p2(&self, x: usize) -> usize {
        self.p2[x]
    }

    /// Group element `g1[g] * g2[s]`.
    pub fn compose(&self, g: usize, s: usize) -> usize {
        self.product[g * self.order2() + s]
    }

    /// Product inside `G1` by positions.
    pub fn mul1(&self, g: usize, h: usize) -> usize {
        self.pos1[self.group.mul(self.g1[g], self.g1[h])].expect("G1 is closed")
    }

    pub fn inv1(&self, g: usize) -> usize {
        self.pos1[self.group.inv(self.g1[g])].expect("G1 is closed")
    }

    pub fn mul2(&self, s: usize, t: usize) -> usize {
        self.pos2[self.group.mul(self.g2[s], self.g2[t])].expect("G2 is closed")
    }

    pub fn inv2(&self, s: usize) -> usize {
        self.pos2[self.group.inv(self.g2[s])].expect("G2 is closed")
    }

    /// `alpha_s(g) = p1(s g)`: left action of `G2` on `G1`.
    pub fn alpha(&self, s: usize, g: usize) -> usize {
        self.p1(self.group.mul(self.g2[s], self.g1[g]))
    }

    /// `beta_g(s) = p2(s g)`: right action of `G1` on `G2`.
    pub fn beta(&self, g: usize, s: usize) -> usize {
        self.p2(self.group.mul(self.g2[s], self.g1[g]))
    }

    /// Checks both matching relations on every triple and the projection
    /// identities on the two subgroups.
    pub fn verify_matching_relations(&self) -> MatchingReport {
        let mut report = MatchingReport::default();
        for s in 0..self.order2() {
            for g in 0..self.order1() {
                let bgs = self.beta(g, s);
                let asg = self.alpha(s, g);
                for h in 0..self.order1() {
                    report.triples_checked += 1;
                    let gh = self.mul1(g, h);
                    if self.alpha(s, gh) != self.mul1(asg, self.alpha(bgs, h)) {
                        report.alpha_failures.push((s, g, h));
                    }
                    if self.beta(gh, s) != self.beta(h, bgs) {
                        report.beta_failures.push((s, g, h));
                    }
                }
            }
        }
        for (i, &g) in self.g1.iter().enumerate() {
            if self.p1(g) != i || self.p2(g) != 0 {
                report.projection_failures.push(g);
            }
        }
        for (j, &s) in self.g2.iter().enumerate() {
            if self.p1(s) != 0 || self.p2(s) != j {
                report.projection_failures.push(s);
            }
        }
        report
    }

    /// The pair `(G, G2, G1)`. Its factorization maps are
    /// `q1(x) = p2(x^-1)^-1` and `q2(x) = p1(x^-1)^-1`, which is checked.
    pub fn swapped(&self) -> Result<MatchedPair, MatchedError> {
        let sw = check_matched(self.group.clone(), &self.g2, &self.g1)?;
        for x in 0..self.group.order() {
            let xi = self.group.inv(x);
            if sw.g1[sw.p1(x)] != self.group.inv(self.g2[self.p2(xi)])
                || sw.g2[sw.p2(x)] != self.group.inv(self.g1[self.p1(xi)])
            {
                return Err(MatchedError::NotExactFactorization(format!(
                    "swapped factorization disagrees with inversion at {}",
                    self.group.label(x)
                )));
            }
        }
        Ok(sw.with_label(&format!("swap({})", self.label)))
    }
}

/// Names accepted by [`builtin_pair`]; `D<2n>` works for any even order >= 4.
pub fn builtin_names() -> &'static [&'static str] {
    &["trivial", "S3", "S4", "S4-V4", "F21", "D8", "D10", "S3xC2", "C2xC3"]
}

fn by_labels(g: &FiniteGroup, gens: &[&str]) -> Vec<usize> {
    let idx: Vec<usize> = gens.iter().map(|l| g.find(l).expect("known generator label")).collect();
    g.generated(&idx)
}

/// Built-in matched pairs.
///
/// * `S3`: `A3 . <(1 2)>`
/// * `S4`: `Stab(4) . <(1 2 3 4)>`, a copy of `S3 . C4`
/// * `S4-V4`: `Stab(4) . V4` with the normal Klein four-group
/// * `F21` (also `C7:C3`): `C7 . C3` inside the Frobenius group of order 21
/// * `D<2n>`: rotations `C_n` and the reflection `<s>`
/// * `S3xC2`: `(A3 x C2) . (<(1 2)> x e)`
/// * `C2xC3`: the two factors of the abelian product
/// * `trivial`: the group of order one
pub fn builtin_pair(name: &str) -> Result<MatchedPair, MatchedError> {
    let build = |g: FiniteGroup, g1: Vec<usize>, g2: Vec<usize>| -> Result<MatchedPair, MatchedError> {
        Ok(check_matched(g, &g1, &g2)?.with_label(name))
    };
    match name {
        "trivial" => {
            let g = FiniteGroup::cyclic(1);
            build(g, vec![0], vec![0])
        }
        "S3" => {
            let g = FiniteGroup::symmetric(3);
            let (a, b) = (by_labels(&g, &["(1 2 3)"]), by_labels(&g, &["(1 2)"]));
            build(g, a, b)
        }
        "S4" => {
            let g = FiniteGroup::symmetric(4);
            let (a, b) = (by_labels(&g, &["(1 2)", "(1 2 3)"]), by_labels(&g, &["(1 2 3 4)"]));
            build(g, a, b)
        }
        "S4-V4" => {
            let g = FiniteGroup::symmetric(4);
            let a = by_labels(&g, &["(1 2)", "(1 2 3)"]);
            let b = by_labels(&g, &["(1 2)(3 4)", "(1 3)(2 4)"]);
            build(g, a, b)
        }
        "F21" | "C7:C3" | "C7xC3" => {
            let g = FiniteGroup::semidirect(7, 3, 2)?;
            let (a, b) = (by_labels(&g, &["x^1"]), by_labels(&g, &["y^1"]));
            build(g, a, b)
        }
        "S3xC2" => {
            let g = FiniteGroup::direct_product(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(2));
            let a = by_labels(&g, &["((1 2 3),e)", "(e,c^1)"]);
            let b = by_labels(&g, &["((1 2),e)"]);
            build(g, a, b)
        }
        "C2xC3" => {
            let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
            let (a, b) = (by_labels(&g, &["(c^1,e)"]), by_labels(&g, &["(e,c^1)"]));
            build(g, a, b)
        }
        _ => {
            let n = name
                .strip_prefix('D')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 4 && k % 2 == 0)
                .ok_or_else(|| MatchedError::UnknownPair(name.to_string()))?;
            let g = FiniteGroup::dihedral(n / 2);
            let (a, b) = (by_labels(&g, &["r^1"]), by_labels(&g, &["s"]));
            build(g, a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_ids(labels: &[&str]) -> (FiniteGroup, Vec<usize>) {
        let g = FiniteGroup::symmetric(3);
        let ids = labels.iter().map(|l| g.find(l).unwrap()).collect();
        (g, ids)
    }

    #[test]
    fn s3_factorization() {
        let mp = builtin_pair("S3").unwrap();
        assert_eq!((mp.order1(), mp.order2()), (3, 2));
        for x in 0..6 {
            let g = mp.group();
            assert_eq!(g.mul(mp.g1()[mp.p1(x)], mp.g2()[mp.p2(x)]), x);
        }
    }

    #[test]
    fn rejections() {
        let (g, a3) = s3_ids(&["e", "(1 2 3)", "(1 3 2)"]);
        assert!(matches!(
            check_matched(g, &a3, &a3),
            Err(MatchedError::NontrivialIntersection(_))
        ));
        let (g, ids) = s3_ids(&["e", "(1 2)", "(1 3)"]);
        assert!(matches!(
            check_matched(g, &ids[..2], &[ids[0], ids[2]]),
            Err(MatchedError::NotExactFactorization(_))
        ));
        let (g, ids) = s3_ids(&["e", "(1 2 3)"]);
        assert!(matches!(check_matched(g, &ids, &[ids[0]]), Err(MatchedError::NotSubgroup(_))));
    }

    #[test]
    fn builtins_satisfy_matching_relations() {
        for name in builtin_names().iter().chain(&["D12", "C7:C3"]) {
            let mp = builtin_pair(name).unwrap();
            let r = mp.verify_matching_relations();
            assert!(r.passed(), "{name}: {r:?}");
            assert_eq!(r.triples_checked, mp.order2() * mp.order1() * mp.order1());
            assert_eq!(mp.order1() * mp.order2(), mp.group().order());
        }
        assert!(matches!(builtin_pair("D7"), Err(MatchedError::UnknownPair(_))));
    }

    #[test]
    fn trivial_second_factor_gives_identity_action() {
        let g = FiniteGroup::cyclic(5);
        let all: Vec<usize> = (0..5).collect();
        let mp = check_matched(g, &all, &[0]).unwrap();
        for g in 0..5 {
            assert_eq!(mp.alpha(0, g), g);
            assert_eq!(mp.beta(g, 0), 0);
        }
        assert!(mp.verify_matching_relations().passed());
    }

    #[test]
    fn actions_are_actions() {
        let mp = builtin_pair("S4").unwrap();
        for s in 0..mp.order2() {
            for t in 0..mp.order2() {
                for g in 0..mp.order1() {
                    assert_eq!(mp.alpha(s, mp.alpha(t, g)), mp.alpha(mp.mul2(s, t), g));
                }
            }
            assert_eq!(mp.alpha(s, 0), 0);
        }
        for g in 0..mp.order1() {
            for h in 0..mp.order1() {
                for s in 0..mp.order2() {
                    assert_eq!(mp.beta(h, mp.beta(g, s)), mp.beta(mp.mul1(g, h), s));
                }
            }
            assert_eq!(mp.beta(g, 0), 0);
        }
    }

    #[test]
    fn swapped_pairs_validate() {
        for name in builtin_names() {
            let mp = builtin_pair(name).unwrap();
            let sw = mp.swapped().unwrap();
            assert_eq!((sw.order1(), sw.order2()), (mp.order2(), mp.order1()));
            assert!(sw.verify_matching_relations().passed());
        }
    }

    #[test]
    fn json_round_trip() {
        let mp = builtin_pair("D8").unwrap();
        let text = serde_json::to_string(&mp.to_json()).unwrap();
        let back = MatchedPair::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.label(), "D8");
        assert_eq!(back.g1(), mp.g1());
    }
}
