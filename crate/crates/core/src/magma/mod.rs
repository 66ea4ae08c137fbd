//! Finite bracket algebras.
//!
//! A [`Magma`] is a finite set with a binary operation given by its table.
//! Elements are referred to by their index in the element list.

mod check;
mod law;
mod status;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tree::Tree;

pub use check::{
    satisfies_eventually, satisfies_eventually_with, search_laws, CheckOptions, Eventual,
};
pub use law::{Law, Program};
pub use status::{
    assoc_status, default_arity_cap, five_variable_law, AssocStatus, Budgets, FullReason,
    FvlEvidence,
};

#[derive(Debug, Clone)]
pub struct Magma {
    names: Vec<String>,
    table: Vec<u32>,
    simply_perfect: bool,
    left_identity: Option<usize>,
    right_identity: Option<usize>,
    non_associative: Option<[usize; 3]>,
    chain: Vec<Vec<usize>>,
}

/// Solvability certificate: the complete tree of the given depth evaluates
/// to `zero` on every tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvableWitness {
    pub zero: usize,
    pub depth: usize,
    pub tree: Tree,
}

impl Magma {
    /// Build from element names and a table of indices, `rows[i][j] = α(e_i, e_j)`.
    pub fn new(names: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Magma> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidMagma("no elements".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(char::is_whitespace) || name.starts_with('#') {
                return Err(Error::InvalidMagma(format!("bad element name {name:?}")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidMagma(format!(
                    "duplicate element name {name:?}"
                )));
            }
        }
        if rows.len() != n {
            return Err(Error::InvalidMagma(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMagma(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidMagma(format!(
                        "entry {v} out of range in row {i}"
                    )));
                }
                table.push(v as u32);
            }
        }
        Ok(Magma::from_table(names, table))
    }

    /// Build from a function on indices.
    pub fn from_fn(names: Vec<String>, op: impl Fn(usize, usize) -> usize) -> Result<Magma> {
        let n = names.len();
        let rows = (0..n).map(|i| (0..n).map(|j| op(i, j)).collect()).collect();
        Magma::new(names, rows)
    }

    fn from_table(names: Vec<String>, table: Vec<u32>) -> Magma {
        let n = names.len();
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        let mut hit = vec![false; n];
        for &v in &table {
            hit[v as usize] = true;
        }
        let simply_perfect = hit.iter().all(|&h| h);
        let left_identity = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x));
        let right_identity = (0..n).find(|&e| (0..n).all(|x| at(x, e) == x));
        let non_associative = (0..n * n * n).find_map(|k| {
            let (x, y, z) = (k / (n * n), (k / n) % n, k % n);
            (at(at(x, y), z) != at(x, at(y, z))).then_some([x, y, z])
        });
        let mut chain = vec![(0..n).collect::<Vec<_>>()];
        loop {
            let last = chain.last().unwrap();
            let mut next = vec![false; n];
            for &x in last {
                for &y in last {
                    next[at(x, y)] = true;
                }
            }
            let next: Vec<usize> = (0..n).filter(|&i| next[i]).collect();
            if next == *last {
                break;
            }
            chain.push(next);
        }
        Magma {
            names,
            table,
            simply_perfect,
            left_identity,
            right_identity,
            non_associative,
            chain,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `α(x, y)`
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.names.len() + y] as usize
    }

    pub(crate) fn raw_table(&self) -> &[u32] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.op(i, j)).collect())
            .collect()
    }

    /// The operation is surjective.
    pub fn is_simply_perfect(&self) -> bool {
        self.simply_perfect
    }

    pub fn left_identity(&self) -> Option<usize> {
        self.left_identity
    }

    pub fn right_identity(&self) -> Option<usize> {
        self.right_identity
    }

    pub fn two_sided_identity(&self) -> Option<usize> {
        match (self.left_identity, self.right_identity) {
            (Some(l), Some(r)) if l == r => Some(l),
            _ => None,
        }
    }

    pub fn is_associative(&self) -> bool {
        self.non_associative.is_none()
    }

    /// First `(x, y, z)` in lexicographic order with `(xy)z ≠ x(yz)`.
    pub fn associativity_counterexample(&self) -> Option<[usize; 3]> {
        self.non_associative
    }

    /// Every row and every column is a permutation of the carrier.
    pub fn is_latin_square(&self) -> bool {
        let n = self.size();
        let perm = |f: &dyn Fn(usize) -> usize| {
            let mut seen = vec![false; n];
            (0..n).all(|k| !std::mem::replace(&mut seen[f(k)], true))
        };
        (0..n).all(|i| perm(&|j| self.op(i, j)) && perm(&|j| self.op(j, i)))
    }

    /// `D_0 = S`, `D_{k+1} = α(D_k × D_k)`, up to the first repeat.
    pub fn derived_chain(&self) -> &[Vec<usize>] {
        &self.chain
    }

    /// Some complete tree has constant evaluation exactly when the derived
    /// chain reaches a single element: a tree whose leaves all have depth at
    /// least `k` takes values in `D_k`, and one whose leaves have depth at
    /// most `k` has image containing `D_k`.
    pub fn is_solvable(&self) -> Option<SolvableWitness> {
        let last = self.chain.last().unwrap();
        (last.len() == 1).then(|| SolvableWitness {
            zero: last[0],
            depth: self.chain.len() - 1,
            tree: Tree::complete(self.chain.len() - 1),
        })
    }

    /// `p̂(args)`
    pub fn evaluate(&self, p: &Tree, args: &[usize]) -> Result<usize> {
        if args.len() != p.leaf_count() {
            return Err(Error::Arity {
                expected: p.leaf_count(),
                got: args.len(),
            });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.size()) {
            return Err(Error::InvalidMagma(format!("no element with index {bad}")));
        }
        let prog = Program::compile(p);
        Ok(prog.run(self, args, &mut Vec::new()))
    }

    /// Image of `p̂` with some positions fixed (`Some(element)`) and the rest
    /// ranging over the whole magma. Each leaf carries its own variable, so
    /// the image is computed subtree by subtree.
    pub fn restricted_image(&self, p: &Tree, fixed: &[Option<usize>]) -> Result<Vec<usize>> {
        if fixed.len() != p.leaf_count() {
            return Err(Error::Arity {
                expected: p.leaf_count(),
                got: fixed.len(),
            });
        }
        let n = self.size();
        if let Some(bad) = fixed.iter().flatten().find(|&&a| a >= n) {
            return Err(Error::InvalidMagma(format!("no element with index {bad}")));
        }
        let mut stack: Vec<Vec<bool>> = Vec::new();
        let mut next_leaf = 0;
        for step in Program::compile(p).steps() {
            if *step {
                let mut set = vec![false; n];
                match fixed[next_leaf] {
                    Some(u) => set[u] = true,
                    None => set.fill(true),
                }
                next_leaf += 1;
                stack.push(set);
            } else {
                let r = stack.pop().unwrap();
                let l = stack.pop().unwrap();
                let mut out = vec![false; n];
                for x in (0..n).filter(|&x| l[x]) {
                    for y in (0..n).filter(|&y| r[y]) {
                        out[self.op(x, y)] = true;
                    }
                }
                stack.push(out);
            }
        }
        let top = stack.pop().unwrap();
        Ok((0..n).filter(|&i| top[i]).collect())
    }

    /// `{x : [x, u] = zero for all u in subset}`
    pub fn centralizer(&self, subset: &[usize], zero: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| subset.iter().all(|&u| self.op(x, u) == zero))
            .collect()
    }

    pub fn satisfies(&self, law: &Law) -> bool {
        self.counterexample(law).is_none()
    }

    /// First tuple in lexicographic order on which the two sides differ.
    pub fn counterexample(&self, law: &Law) -> Option<Vec<usize>> {
        check::first_counterexample(self, law)
    }

    /// Check that a law known to hold still holds after the simultaneous
    /// expansion `b`.
    pub fn expansion_monotone_check(&self, law: &Law, b: &crate::ExpansionWord) -> Result<bool> {
        if !self.satisfies(law) {
            return Err(Error::Precondition(format!("{law} does not hold")));
        }
        let expanded = law.expand(b);
        let ok = self.satisfies(&expanded);
        assert!(ok, "{expanded} fails although {law} holds");
        Ok(ok)
    }

    /// Serialize in the magma file format.
    pub fn to_file_string(&self) -> String {
        let mut s = self.names.join(" ");
        s.push('\n');
        for i in 0..self.size() {
            let row: Vec<&str> = (0..self.size()).map(|j| self.name(self.op(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the magma file format; errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Magma> {
        let mut lines = text.lines().enumerate().filter_map(|(k, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then_some((k + 1, content))
        });
        let (header_line, header) = lines.next().ok_or(Error::Format {
            line: 1,
            msg: "empty magma file".into(),
        })?;
        let names: Vec<String> = header.split_whitespace().map(String::from).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Format {
                    line: header_line,
                    msg: format!("duplicate element name {name:?}"),
                });
            }
        }
        let mut rows = Vec::with_capacity(names.len());
        let mut last_line = header_line;
        for (line, content) in lines {
            last_line = line;
            if rows.len() == names.len() {
                return Err(Error::Format {
                    line,
                    msg: "extra row".into(),
                });
            }
            let row = content
                .split_whitespace()
                .map(|tok| {
                    names
                        .iter()
                        .position(|n| n == tok)
                        .ok_or_else(|| Error::Format {
                            line,
                            msg: format!("unknown element {tok:?}"),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != names.len() {
                return Err(Error::Format {
                    line,
                    msg: format!("row has {} entries, expected {}", row.len(), names.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != names.len() {
            return Err(Error::Format {
                line: last_line + 1,
                msg: format!("expected {} rows, got {}", names.len(), rows.len()),
            });
        }
        Magma::new(names, rows).map_err(|e| Error::Format {
            line: header_line,
            msg: e.to_string(),
        })
    }
}

impl PartialEq for Magma {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.table == other.table
    }
}

impl Eq for Magma {}

impl fmt::Display for Magma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

impl FromStr for Magma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Magma::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct MagmaRepr {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

impl Serialize for Magma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|k| self.names[k].clone()).collect())
            .collect();
        MagmaRepr {
            elements: self.names.clone(),
            table,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Magma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MagmaRepr::deserialize(d)?;
        let rows = r
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| r.elements.iter().position(|n| n == x))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| serde::de::Error::custom("unknown element in table"))?;
        Magma::new(r.elements, rows).map_err(serde::de::Error::custom)
    }
}
