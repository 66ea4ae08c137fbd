//! The monoid of expansions.
//!
//! Words are written in composition order: `b[4,2]` applies β² first and then
//! β⁴. The defining relation `β^i β^j = β^(j+1) β^i` for `i < j` is oriented
//! left to right, so a word is in normal form exactly when its letters are
//! non-increasing.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tree::Tree;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpansionWord(Vec<usize>);

impl ExpansionWord {
    pub fn identity() -> Self {
        ExpansionWord(Vec::new())
    }

    /// Normal form of the word whose letters are given in composition order.
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::ZeroIndex);
        }
        let mut letters = letters;
        normalize(&mut letters);
        Ok(ExpansionWord(letters))
    }

    pub fn letter(i: usize) -> Result<Self> {
        Self::new(vec![i])
    }

    pub(crate) fn from_normal_letters(letters: Vec<usize>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] >= w[1]));
        ExpansionWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Act on a tree, rightmost letter first.
    pub fn apply(&self, t: &Tree) -> Tree {
        self.0
            .iter()
            .rev()
            .fold(t.clone(), |acc, &i| acc.expand_unchecked(i))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &ExpansionWord) -> ExpansionWord {
        monoid_compose(self, first)
    }
}

/// Rewrite with `β^i β^j → β^(j+1) β^i` (`i < j`) until no rule applies.
pub fn normalize(letters: &mut [usize]) {
    while let Some(pos) = letters.windows(2).position(|w| w[0] < w[1]) {
        rewrite_at(letters, pos);
    }
}

/// Apply the defining relation to the adjacent letters at `pos`, `pos + 1`
/// if it matches. Returns whether a rewrite happened.
pub fn rewrite_at(letters: &mut [usize], pos: usize) -> bool {
    let (i, j) = (letters[pos], letters[pos + 1]);
    if i < j {
        letters[pos] = j + 1;
        letters[pos + 1] = i;
        true
    } else {
        false
    }
}

/// Normal form of "apply `b`, then `a`".
pub fn monoid_compose(a: &ExpansionWord, b: &ExpansionWord) -> ExpansionWord {
    let mut letters = a.0.clone();
    letters.extend_from_slice(&b.0);
    normalize(&mut letters);
    ExpansionWord(letters)
}

/// `(b3, b4)` with `b3 ∘ b1 = b4 ∘ b2`.
///
/// Both words act on a right comb large enough that every letter is
/// effective; the join of the two images is reached from each by an
/// expansion path.
pub fn common_left_multiples(
    b1: &ExpansionWord,
    b2: &ExpansionWord,
) -> (ExpansionWord, ExpansionWord) {
    let n = b1.max_letter().max(b2.max_letter()).max(1);
    let comb = Tree::right_comb(n);
    let t1 = b1.apply(&comb);
    let t2 = b2.apply(&comb);
    let j = t1.join(&t2);
    let b3 = j.expansion_path(&t1).expect("join is an expansion of both");
    let b4 = j.expansion_path(&t2).expect("join is an expansion of both");
    (b3, b4)
}

/// One simultaneous expansion of a tree pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousExpansion {
    pub word: ExpansionWord,
    pub left: Tree,
    pub right: Tree,
}

/// Breadth-first enumeration of the simultaneous expansions of `(p, q)` by
/// number of added carets, up to `budget`, without repeats. The first item is
/// the pair itself.
pub struct SimultaneousExpansions {
    queue: VecDeque<SimultaneousExpansion>,
    seen: HashSet<(Tree, Tree)>,
    base_leaves: usize,
    budget: usize,
}

impl SimultaneousExpansions {
    pub fn new(p: &Tree, q: &Tree, budget: usize) -> Self {
        let start = SimultaneousExpansion {
            word: ExpansionWord::identity(),
            left: p.clone(),
            right: q.clone(),
        };
        let mut seen = HashSet::new();
        seen.insert((p.clone(), q.clone()));
        SimultaneousExpansions {
            queue: VecDeque::from([start]),
            seen,
            base_leaves: p.leaf_count(),
            budget,
        }
    }
}

impl Iterator for SimultaneousExpansions {
    type Item = SimultaneousExpansion;

    fn next(&mut self) -> Option<Self::Item> {
        let item = self.queue.pop_front()?;
        let added = item.left.leaf_count() - self.base_leaves;
        if added < self.budget {
            for i in 1..=item.left.leaf_count() {
                let left = item.left.expand_unchecked(i);
                let right = item.right.expand_unchecked(i);
                if self.seen.insert((left.clone(), right.clone())) {
                    let word = monoid_compose(&ExpansionWord(vec![i]), &item.word);
                    self.queue
                        .push_back(SimultaneousExpansion { word, left, right });
                }
            }
        }
        Some(item)
    }
}

impl fmt::Display for ExpansionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("b[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for ExpansionWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("b[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse("expansion word", 0, "expected b[i,j,...]"))?;
        if inner.trim().is_empty() {
            return Ok(ExpansionWord::identity());
        }
        let letters = inner
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::parse("expansion word", 2, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        ExpansionWord::new(letters)
    }
}

impl Serialize for ExpansionWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExpansionWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
