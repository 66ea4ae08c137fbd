//! Example bracket algebras, and a small permutation-group engine for
//! commutator magmas.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::magma::Magma;

/// Largest group `permutation_group` will build.
pub const GROUP_CAP: usize = 10080;

/// A permutation of `{1, …, n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images; fails unless bijective.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidGroup(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Permutation(images))
    }

    /// A single cycle on 1-based points, acting on `{1, …, n}`.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for (k, &p) in points.iter().enumerate() {
            let q = points[(k + 1) % points.len()];
            if p == 0 || p > n || q == 0 || q > n {
                return Err(Error::InvalidGroup(format!("point out of range 1..={n}")));
            }
            images[p - 1] = q - 1;
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    fn padded(&self, n: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len()..n);
        Permutation(v)
    }

    /// Lengths of the nontrivial cycles, sorted.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 1 {
                out.push(len);
            }
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without spaces, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.0[i];
            }
            write!(f, "({})", cyc.join(","))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Cycle notation such as `(1 2 3)(4 5)` or `(1,2)`; the degree is the
    /// largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| {
                    Error::parse("permutation", s.len() - rest.len(), "expected '(...)'")
                })?;
            let points = body
                .0
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::parse("permutation", 0, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(points);
            rest = body.1.trim_start();
        }
        let n = cycles.iter().flatten().copied().max().unwrap_or(0);
        cycles.iter().try_fold(Permutation::identity(n), |acc, c| {
            Ok(acc.compose(&Permutation::cycle(n, c)?))
        })
    }
}

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates identity and inverses, and associativity for groups of
    /// order at most 60.
    pub fn new(names: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n * n || table.iter().any(|&v| v >= n) {
            return Err(Error::InvalidGroup(
                "table is not a closed n×n table".into(),
            ));
        }
        let at = |i: usize, j: usize| table[i * n + j];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| at(x, y) == identity && at(y, x) == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[x])))
            })
            .collect::<Result<Vec<_>>>()?;
        if n <= 60 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if at(at(x, y), z) != at(x, at(y, z)) {
                            return Err(Error::InvalidGroup("not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(GroupTable {
            names,
            table,
            identity,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order() + y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// `{g x g⁻¹}`
    pub fn conjugacy_class(&self, x: usize) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.order())
            .map(|g| self.mul(self.mul(g, x), self.inverse(g)))
            .collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Closure of a set of permutations, identity first, then in order of
/// discovery by breadth-first search. Permutations of different degrees are
/// padded to the largest.
pub fn permutation_group(generators: &[Permutation]) -> Result<(GroupTable, Vec<Permutation>)> {
    let n = generators
        .iter()
        .map(Permutation::degree)
        .max()
        .unwrap_or(0);
    let gens: Vec<Permutation> = generators.iter().map(|g| g.padded(n)).collect();
    let mut elements = vec![Permutation::identity(n)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut k = 0;
    while k < elements.len() {
        for g in &gens {
            let h = g.compose(&elements[k]);
            if !index.contains_key(&h) {
                if elements.len() == GROUP_CAP {
                    return Err(Error::InvalidGroup(format!(
                        "group exceeds the cap of {GROUP_CAP} elements"
                    )));
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
        k += 1;
    }
    let table = elements
        .iter()
        .flat_map(|a| elements.iter().map(|b| index[&a.compose(b)]))
        .collect();
    let names = elements.iter().map(|p| p.to_string()).collect();
    Ok((GroupTable::new(names, table)?, elements))
}

/// `[x, y] = x y x⁻¹ y⁻¹`
pub fn commutator_magma(g: &GroupTable) -> Magma {
    let inv = |x| g.inverse(x);
    Magma::from_fn(g.names().to_vec(), |x, y| {
        g.mul(g.mul(x, y), g.mul(inv(x), inv(y)))
    })
    .expect("group tables are closed")
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The four-element algebra `{0, a, b, c}` that collapses `sl2`.
pub fn pre_sl2() -> Magma {
    let rows = vec![
        vec![0, 0, 0, 0],
        vec![0, 0, 1, 2],
        vec![0, 1, 0, 3],
        vec![0, 2, 3, 0],
    ];
    Magma::new(names(&["0", "a", "b", "c"]), rows).expect("valid table")
}

/// `S(4) = {1, a, b, c}` with `[x,1] = x`, `[x,a] = b`, `[x,b] = c`, `[x,c] = c`.
pub fn s4_example() -> Magma {
    Magma::from_fn(names(&["1", "a", "b", "c"]), |x, y| match y {
        0 => x,
        1 => 2,
        _ => 3,
    })
    .expect("valid table")
}

pub fn s3_group() -> GroupTable {
    let gens = ["(1 2)", "(1 2 3)"].map(|s| s.parse().expect("literal"));
    permutation_group(&gens).expect("S3").0
}

pub fn a5_group() -> (GroupTable, Vec<Permutation>) {
    let gens = ["(1 2 3 4 5)", "(1 2 3)"].map(|s| s.parse().expect("literal"));
    permutation_group(&gens).expect("A5")
}

pub fn s3_commutator() -> Magma {
    commutator_magma(&s3_group())
}

pub fn a5_commutator() -> Magma {
    commutator_magma(&a5_group().0)
}

/// Cayley–Dickson product on coefficient vectors of length `2^k`:
/// `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.
fn cd_mul(x: &[i32], y: &[i32]) -> Vec<i32> {
    if x.len() == 1 {
        return vec![x[0] * y[0]];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let sub = |u: Vec<i32>, v: Vec<i32>| u.iter().zip(&v).map(|(p, q)| p - q).collect::<Vec<_>>();
    let add = |u: Vec<i32>, v: Vec<i32>| u.iter().zip(&v).map(|(p, q)| p + q).collect::<Vec<_>>();
    let mut out = sub(cd_mul(a, c), cd_mul(&cd_conj(d), b));
    out.extend(add(cd_mul(d, a), cd_mul(b, &cd_conj(c))));
    out
}

fn cd_conj(x: &[i32]) -> Vec<i32> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let h = x.len() / 2;
    let mut out = cd_conj(&x[..h]);
    out.extend(x[h..].iter().map(|v| -v));
    out
}

/// The sixteen signed octonion units `±e0 … ±e7`, listed `+e0 … +e7`
/// then `-e0 … -e7`.
pub fn octonion_unit_loop() -> Magma {
    let unit = |k: usize| -> Vec<i32> {
        let mut v = vec![0; 8];
        v[k % 8] = if k < 8 { 1 } else { -1 };
        v
    };
    let names: Vec<String> = (0..16)
        .map(|k| format!("{}e{}", if k < 8 { '+' } else { '-' }, k % 8))
        .collect();
    Magma::from_fn(names, |x, y| {
        let p = cd_mul(&unit(x), &unit(y));
        let i = p.iter().position(|&c| c != 0).expect("nonzero product");
        if p[i] > 0 {
            i
        } else {
            i + 8
        }
    })
    .expect("signed units are closed")
}

/// Index of `c · e_k` in [`sl2_table`], `c` a nonzero residue mod 5 and
/// `k ∈ {-1, 0, 1}`.
pub fn sl2_index(c: i64, k: i64) -> usize {
    let c = c.rem_euclid(5) as usize;
    assert!(c != 0 && (-1..=1).contains(&k));
    1 + (k + 1) as usize * 4 + (c - 1)
}

/// The `sl2` bracket on the basis multiples `c · e_k` with `c` in the
/// nonzero residues mod 5, together with 0. Thirteen elements, closed since
/// every structure constant is a unit mod 5.
pub fn sl2_table() -> Magma {
    let coeff = |c: usize| match c {
        1 => "",
        2 => "2",
        3 => "-2",
        _ => "-",
    };
    let mut names = vec!["0".to_string()];
    for k in -1i64..=1 {
        for c in 1..=4 {
            names.push(format!("{}e{}", coeff(c), k));
        }
    }
    // [e_i, e_j] as (scalar, index)
    let basis = |i: i64, j: i64| -> Option<(i64, i64)> {
        match (i, j) {
            (-1, 0) => Some((-1, -1)),
            (-1, 1) => Some((-2, 0)),
            (0, -1) => Some((1, -1)),
            (0, 1) => Some((-1, 1)),
            (1, -1) => Some((2, 0)),
            (1, 0) => Some((1, 1)),
            _ => None,
        }
    };
    let decode = |x: usize| -> (i64, i64) { (((x - 1) % 4 + 1) as i64, ((x - 1) / 4) as i64 - 1) };
    Magma::from_fn(names, |x, y| {
        if x == 0 || y == 0 {
            return 0;
        }
        let ((cx, kx), (cy, ky)) = (decode(x), decode(y));
        match basis(kx, ky) {
            Some((s, k)) => sl2_index(cx * cy * s, k),
            None => 0,
        }
    })
    .expect("closed by construction")
}

/// Addition mod 4.
pub fn z4() -> Magma {
    Magma::from_fn(names(&["0", "1", "2", "3"]), |a, b| (a + b) % 4).expect("valid table")
}

pub fn trivial() -> Magma {
    Magma::from_fn(names(&["0"]), |_, _| 0).expect("valid table")
}

/// `α(x, y) = y + 1 mod 3`: a tree evaluates to its last variable plus the
/// depth of its last leaf, so a law holds exactly when both sides have
/// rightmost depths congruent mod 3.
pub fn shift3() -> Magma {
    Magma::from_fn(names(&["0", "1", "2"]), |_, y| (y + 1) % 3).expect("valid table")
}

/// Names and one-line descriptions of the built-in magmas.
pub const CATALOG: &[(&str, &str)] = &[
    (
        "pre_sl2",
        "four-element quotient of an sl2 fragment, no nontrivial law",
    ),
    ("s4_example", "S(4): right identity, satisfies the x1-law"),
    ("s3_commutator", "S3 under the commutator bracket, solvable"),
    (
        "a5_commutator",
        "A5 under the commutator bracket, simply perfect",
    ),
    (
        "octonion_unit_loop",
        "sixteen signed octonion units, a non-associative loop",
    ),
    ("sl2", "sl2 bracket on unit multiples of the basis mod 5"),
    ("z4", "addition mod 4, associative"),
    ("trivial", "one element"),
    ("shift3", "y + 1 mod 3, satisfies the five-variable law"),
];

pub fn by_name(name: &str) -> Option<Magma> {
    Some(match name {
        "pre_sl2" => pre_sl2(),
        "s4_example" => s4_example(),
        "s3_commutator" => s3_commutator(),
        "a5_commutator" => a5_commutator(),
        "octonion_unit_loop" => octonion_unit_loop(),
        "sl2" => sl2_table(),
        "z4" => z4(),
        "trivial" => trivial(),
        "shift3" => shift3(),
        _ => return None,
    })
}

pub fn all() -> Vec<(&'static str, Magma)> {
    CATALOG
        .iter()
        .map(|(n, _)| (*n, by_name(n).expect("catalog entry")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Tree;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn permutations() {
        let c = p("(1 2 3)");
        assert_eq!(c.to_string(), "(1,2,3)");
        assert_eq!(c.compose(&c.inverse()), Permutation::identity(3));
        assert_eq!(p("(1 2)(3 4 5)").cycle_type(), vec![2, 3]);
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!("(1 2".parse::<Permutation>().is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(a5_group().0.order(), 60);
        assert_eq!(permutation_group(&[p("(1 2)")]).unwrap().0.order(), 2);
        assert_eq!(s3_group().order(), 6);
        let big = permutation_group(&[p("(1 2 3 4 5 6 7 8)"), p("(1 2)")]);
        assert!(matches!(big, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn abelian_commutators_are_constant() {
        let c4 = permutation_group(&[p("(1 2 3 4)")]).unwrap().0;
        assert!(c4.is_abelian());
        let m = commutator_magma(&c4);
        let e = c4.identity();
        assert!(m.rows().iter().flatten().all(|&v| v == e));
    }

    #[test]
    fn pre_sl2_entries() {
        let m = pre_sl2();
        assert!((0..4).all(|x| m.op(0, x) == 0));
        assert_eq!(m.op(1, 3), 2);
        assert_eq!(m.op(3, 2), 3);
    }

    #[test]
    fn s4_entries() {
        let m = s4_example();
        assert_eq!(m.right_identity(), Some(0));
        assert_eq!(m.left_identity(), None);
        assert!((0..4).all(|x| m.op(x, 2) == 3));
        let t: Tree = "((. .) .)".parse().unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(m.evaluate(&t, &[x, y, 1]).unwrap(), 2);
            }
        }
    }

    #[test]
    fn group_commutator_magmas() {
        assert!(a5_commutator().is_simply_perfect());
        let s3 = s3_commutator();
        assert_eq!(s3.derived_chain()[1].len(), 3);
    }

    #[test]
    fn octonions() {
        let m = octonion_unit_loop();
        assert_eq!(m.two_sided_identity(), Some(0));
        for i in 1..8 {
            assert_eq!(m.op(i, i), 8, "e{i}^2");
        }
        assert!(m.is_latin_square());
        assert!(!m.is_associative());
    }

    #[test]
    fn sl2_fragment() {
        let m = sl2_table();
        assert_eq!(m.size(), 13);
        assert_eq!(m.op(sl2_index(1, 0), sl2_index(1, 1)), sl2_index(-1, 1));
        assert!((0..13).all(|x| m.op(x, x) == 0));
        // Forget the scalar: e_{-1}, e_0, e_1 ↦ a, b, c.
        let q = |x: usize| if x == 0 { 0 } else { (x - 1) / 4 + 1 };
        let pre = pre_sl2();
        for x in 0..13 {
            for y in 0..13 {
                assert_eq!(q(m.op(x, y)), pre.op(q(x), q(y)));
            }
        }
    }

    #[test]
    fn catalog_builds() {
        for (name, m) in all() {
            assert_eq!(by_name(name).unwrap(), m);
            let again: Magma = m.to_file_string().parse().unwrap();
            assert_eq!(again, m, "{name}");
        }
        assert!(by_name("nope").is_none());
    }
}
