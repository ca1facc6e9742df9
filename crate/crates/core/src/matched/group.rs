use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::MatchedError;

/// A finite group given by its multiplication table over indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

/// JSON form `{"order": n, "table": [[...]], "labels": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates the table as a group law: closure, associativity,
    /// a two-sided identity and two-sided inverses.
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, MatchedError> {
        let n = table.len();
        let bad = |why: String| Err(MatchedError::NotAGroup(why));
        if n == 0 {
            return bad("empty table".into());
        }
        if labels.len() != n {
            return bad(format!("{} labels for order {n}", labels.len()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("table is not an n x n array of element indices".into());
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        let mut inverse = vec![0; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse[x] = y,
                None => return bad(format!("element {x} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverse,
            labels,
        })
    }

    pub fn from_json(g: &GroupJson) -> Result<Self, MatchedError> {
        if g.table.len() != g.order {
            return Err(MatchedError::NotAGroup(format!(
                "declared order {} but table has {} rows",
                g.order,
                g.table.len()
            )));
        }
        let labels = g.labels.clone().unwrap_or_else(|| (0..g.order).map(|i| i.to_string()).collect());
        Self::new(g.table.clone(), labels)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order(),
            table: self.table.clone(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Whether `elems` contains the identity and is closed under the law
    /// (for a finite set this makes it a subgroup).
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| a < self.order())
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// The symmetric group on `{1..n}`, permutations in lexicographic order of
    /// their one-line notation. The product `ab` applies `b` first.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("closed under composition");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::new(table, labels).expect("symmetric group table is a group")
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("c^{k}") }).collect();
        Self::new(table, labels).expect("cyclic group table is a group")
    }

    /// Dihedral group of order `2n`: `r^i s^j` with `s r s = r^-1`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |i: usize, j: usize| 2 * i + j;
        let table = (0..2 * n)
            .map(|x| {
                let (i, j) = (x / 2, x % 2);
                (0..2 * n)
                    .map(|y| {
                        let (k, l) = (y / 2, y % 2);
                        // r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j + l)
                        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                        idx(rot, (j + l) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..2 * n)
            .map(|x| match (x / 2, x % 2) {
                (0, 0) => "e".to_string(),
                (i, 0) => format!("r^{i}"),
                (0, _) => "s".to_string(),
                (i, _) => format!("r^{i}s"),
            })
            .collect();
        Self::new(table, labels).expect("dihedral group table is a group")
    }

    /// `C_p ⋊ C_q` where the generator of `C_q` acts by `x -> r x`; requires
    /// `r^q = 1 mod p`. Elements `(a, b)` have index `a * q + b`.
    pub fn semidirect(p: usize, q: usize, r: usize) -> Result<Self, MatchedError> {
        let pow = |b: usize| (0..b).fold(1usize, |acc, _| acc * r % p);
        if pow(q) != 1 % p {
            return Err(MatchedError::NotAGroup(format!("{r}^{q} is not 1 mod {p}")));
        }
        let table = (0..p * q)
            .map(|x| {
                let (a, b) = (x / q, x % q);
                (0..p * q)
                    .map(|y| {
                        let (c, d) = (y / q, y % q);
                        ((a + pow(b) * c) % p) * q + (b + d) % q
                    })
                    .collect()
            })
            .collect();
        let labels = (0..p * q)
            .map(|x| match (x / q, x % q) {
                (0, 0) => "e".to_string(),
                (a, 0) => format!("x^{a}"),
                (0, b) => format!("y^{b}"),
                (a, b) => format!("x^{a}y^{b}"),
            })
            .collect();
        Self::new(table, labels)
    }

    /// `G x H` with index `g * |H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let m = h.order();
        let n = g.order() * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect())
            .collect();
        let labels = (0..n)
            .map(|x| format!("({},{})", g.label(x / m), h.label(x % m)))
            .collect();
        Self::new(table, labels).expect("product of groups is a group")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Cycle notation on `{1..n}` with fixed points omitted; `e` for the identity.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}
