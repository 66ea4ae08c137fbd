//! Rooted ordered binary trees.
//!
//! A tree is either a leaf or a node with a left and a right subtree. Leaves
//! are numbered `1..=n` from left to right, and every vertex is addressed by a
//! word over `{0, 1}` read from the root (`0` = left edge, `1` = right edge).
//!
//! The text format is `.` for a leaf and `(L R)` for a node; whitespace is
//! ignored except as a separator.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansion::ExpansionWord;

/// Largest leaf count accepted by [`enumerate_trees`].
pub const ENUMERATION_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn bit(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "l" | "0" => Ok(Side::Left),
            "right" | "r" | "1" => Ok(Side::Right),
            _ => Err(Error::parse(
                "side",
                0,
                format!("expected left or right, got {s:?}"),
            )),
        }
    }
}

/// Address of a vertex: the sequence of edges followed from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexWord(pub Vec<Side>);

impl VertexWord {
    pub fn root() -> Self {
        VertexWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, side: Side) -> Self {
        let mut w = self.0.clone();
        w.push(side);
        VertexWord(w)
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }
}

impl fmt::Display for VertexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for s in &self.0 {
            write!(f, "{}", s.bit())?;
        }
        Ok(())
    }
}

impl FromStr for VertexWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(VertexWord::root());
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(Side::Left),
                '1' => Ok(Side::Right),
                _ => Err(Error::parse("vertex word", i, format!("unexpected {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexWord)
    }
}

impl Serialize for VertexWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Node {
    left: Tree,
    right: Tree,
    leaves: usize,
}

/// A binary tree. Cloning is cheap: subtrees are shared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree(Option<Arc<Node>>);

impl Default for Tree {
    fn default() -> Self {
        Tree::leaf()
    }
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree(None)
    }

    pub fn node(left: Tree, right: Tree) -> Tree {
        let leaves = left.leaf_count() + right.leaf_count();
        Tree(Some(Arc::new(Node {
            left,
            right,
            leaves,
        })))
    }

    pub fn caret() -> Tree {
        Tree::node(Tree::leaf(), Tree::leaf())
    }

    /// `(. (. (… .)))` with `n` leaves.
    pub fn right_comb(n: usize) -> Tree {
        assert!(n >= 1, "a tree has at least one leaf");
        (1..n).fold(Tree::leaf(), |acc, _| Tree::node(Tree::leaf(), acc))
    }

    /// `(((. .) .) …)` with `n` leaves.
    pub fn left_comb(n: usize) -> Tree {
        assert!(n >= 1, "a tree has at least one leaf");
        (1..n).fold(Tree::leaf(), |acc, _| Tree::node(acc, Tree::leaf()))
    }

    /// The complete tree with `2^depth` leaves.
    pub fn complete(depth: usize) -> Tree {
        (0..depth).fold(Tree::leaf(), |acc, _| Tree::node(acc.clone(), acc))
    }

    pub fn is_leaf(&self) -> bool {
        self.0.is_none()
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        self.0.as_deref().map(|n| (&n.left, &n.right))
    }

    pub fn leaf_count(&self) -> usize {
        self.0.as_deref().map_or(1, |n| n.leaves)
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Depths of the leaves, left to right.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn go(t: &Tree, d: usize, out: &mut Vec<usize>) {
            match t.children() {
                None => out.push(d),
                Some((l, r)) => {
                    go(l, d + 1, out);
                    go(r, d + 1, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        go(self, 0, &mut out);
        out
    }

    /// Depth of the first leaf.
    pub fn leftmost_depth(&self) -> usize {
        let mut t = self;
        let mut d = 0;
        while let Some((l, _)) = t.children() {
            t = l;
            d += 1;
        }
        d
    }

    /// Depth of the last leaf.
    pub fn rightmost_depth(&self) -> usize {
        let mut t = self;
        let mut d = 0;
        while let Some((_, r)) = t.children() {
            t = r;
            d += 1;
        }
        d
    }

    /// Addresses of the leaves in increasing lexicographic order.
    pub fn leaf_addresses(&self) -> Vec<VertexWord> {
        fn go(t: &Tree, prefix: &mut Vec<Side>, out: &mut Vec<VertexWord>) {
            match t.children() {
                None => out.push(VertexWord(prefix.clone())),
                Some((l, r)) => {
                    prefix.push(Side::Left);
                    go(l, prefix, out);
                    prefix.pop();
                    prefix.push(Side::Right);
                    go(r, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every vertex address, parents before children, left before right.
    pub fn vertices(&self) -> Vec<VertexWord> {
        fn go(t: &Tree, prefix: &mut Vec<Side>, out: &mut Vec<VertexWord>) {
            out.push(VertexWord(prefix.clone()));
            if let Some((l, r)) = t.children() {
                prefix.push(Side::Left);
                go(l, prefix, out);
                prefix.pop();
                prefix.push(Side::Right);
                go(r, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// The `i`-th elementary expansion: the `i`-th leaf becomes a caret.
    /// Indices beyond the leaf count leave the tree unchanged.
    pub fn expand(&self, i: usize) -> Result<Tree> {
        if i == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(self.expand_unchecked(i))
    }

    pub(crate) fn expand_unchecked(&self, i: usize) -> Tree {
        if i > self.leaf_count() {
            return self.clone();
        }
        match self.children() {
            None => Tree::caret(),
            Some((l, r)) => {
                let nl = l.leaf_count();
                if i <= nl {
                    Tree::node(l.expand_unchecked(i), r.clone())
                } else {
                    Tree::node(l.clone(), r.expand_unchecked(i - nl))
                }
            }
        }
    }

    /// Graft `self` under a new root, as the child on `side`.
    pub fn shift(&self, side: Side) -> Tree {
        match side {
            Side::Left => Tree::node(self.clone(), Tree::leaf()),
            Side::Right => Tree::node(Tree::leaf(), self.clone()),
        }
    }

    /// Mirror image.
    pub fn reflect(&self) -> Tree {
        match self.children() {
            None => Tree::leaf(),
            Some((l, r)) => Tree::node(r.reflect(), l.reflect()),
        }
    }

    /// Indices `i` such that leaves `i` and `i + 1` are siblings.
    pub fn free_carets(&self) -> Vec<usize> {
        fn go(t: &Tree, offset: usize, out: &mut Vec<usize>) {
            if let Some((l, r)) = t.children() {
                if l.is_leaf() && r.is_leaf() {
                    out.push(offset + 1);
                } else {
                    go(l, offset, out);
                    go(r, offset + l.leaf_count(), out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// Inverse of `expand(i)`: collapse the free caret on leaves `i, i + 1`.
    pub fn contract(&self, i: usize) -> Option<Tree> {
        let (l, r) = self.children()?;
        if l.is_leaf() && r.is_leaf() {
            return (i == 1).then(Tree::leaf);
        }
        let nl = l.leaf_count();
        if i < nl {
            Some(Tree::node(l.contract(i)?, r.clone()))
        } else if i > nl {
            Some(Tree::node(l.clone(), r.contract(i - nl)?))
        } else {
            None
        }
    }

    pub fn subtree_at(&self, w: &VertexWord) -> Result<&Tree> {
        let mut t = self;
        for &s in w.sides() {
            let (l, r) = t
                .children()
                .ok_or_else(|| Error::InvalidVertex(w.to_string()))?;
            t = match s {
                Side::Left => l,
                Side::Right => r,
            };
        }
        Ok(t)
    }

    /// Replace the subtree at `w` by `replacement`.
    pub fn replace_at(&self, w: &VertexWord, replacement: Tree) -> Result<Tree> {
        fn go(t: &Tree, path: &[Side], replacement: Tree) -> Option<Tree> {
            match path.split_first() {
                None => Some(replacement),
                Some((s, rest)) => {
                    let (l, r) = t.children()?;
                    Some(match s {
                        Side::Left => Tree::node(go(l, rest, replacement)?, r.clone()),
                        Side::Right => Tree::node(l.clone(), go(r, rest, replacement)?),
                    })
                }
            }
        }
        go(self, w.sides(), replacement).ok_or_else(|| Error::InvalidVertex(w.to_string()))
    }

    /// Least common expansion: the union of the two vertex sets.
    pub fn join(&self, other: &Tree) -> Tree {
        match (self.children(), other.children()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => Tree::node(a.join(c), b.join(d)),
        }
    }

    /// Whether the vertex set of `base` is contained in that of `self`.
    pub fn is_expansion_of(&self, base: &Tree) -> bool {
        match (self.children(), base.children()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, b)), Some((c, d))) => a.is_expansion_of(c) && b.is_expansion_of(d),
        }
    }

    /// When `self` is an expansion of `base`, the subtrees of `self` hanging at
    /// the leaves of `base`, in leaf order. `base.graft(&subs) == self`.
    pub fn leaf_subtrees(&self, base: &Tree) -> Option<Vec<Tree>> {
        fn go(t: &Tree, base: &Tree, out: &mut Vec<Tree>) -> bool {
            match (t.children(), base.children()) {
                (_, None) => {
                    out.push(t.clone());
                    true
                }
                (None, Some(_)) => false,
                (Some((a, b)), Some((c, d))) => go(a, c, out) && go(b, d, out),
            }
        }
        let mut out = Vec::with_capacity(base.leaf_count());
        go(self, base, &mut out).then_some(out)
    }

    /// Substitute `subs[i - 1]` for the `i`-th leaf.
    pub fn graft(&self, subs: &[Tree]) -> Result<Tree> {
        if subs.len() != self.leaf_count() {
            return Err(Error::Arity {
                expected: self.leaf_count(),
                got: subs.len(),
            });
        }
        Ok(self.graft_unchecked(subs))
    }

    pub(crate) fn graft_unchecked(&self, subs: &[Tree]) -> Tree {
        match self.children() {
            None => subs[0].clone(),
            Some((l, r)) => {
                let nl = l.leaf_count();
                Tree::node(
                    l.graft_unchecked(&subs[..nl]),
                    r.graft_unchecked(&subs[nl..]),
                )
            }
        }
    }

    /// An expansion word carrying `base` to `self`, if `self` is an expansion
    /// of `base`. The lowest-index missing vertex is always expanded first,
    /// so the result is already in normal form.
    pub fn expansion_path(&self, base: &Tree) -> Option<ExpansionWord> {
        fn emit(t: &Tree, index: usize, applied: &mut Vec<usize>) {
            if let Some((l, r)) = t.children() {
                applied.push(index);
                emit(l, index, applied);
                emit(r, index + l.leaf_count(), applied);
            }
        }
        let subs = self.leaf_subtrees(base)?;
        let mut applied = Vec::new();
        let mut index = 1;
        for s in &subs {
            emit(s, index, &mut applied);
            index += s.leaf_count();
        }
        applied.reverse();
        Some(ExpansionWord::from_normal_letters(applied))
    }
}

/// All trees with `n` leaves, each exactly once.
///
/// Order: by leaf count of the left subtree (ascending), then by the order of
/// the left subtree, then by the order of the right subtree.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>> {
    enumerate_trees_capped(n, ENUMERATION_CAP)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<Vec<Tree>> {
    if n == 0 || n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::leaf()]];
    for m in 2..=n {
        let mut here = Vec::new();
        for k in 1..m {
            for l in &by_size[k] {
                for r in &by_size[m - k] {
                    here.push(Tree::node(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(here);
    }
    Ok(by_size.swap_remove(n))
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => f.write_str("."),
            Some((l, r)) => write!(f, "({l} {r})"),
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = TreeParser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(Error::parse("tree", p.pos, "trailing input"));
        }
        Ok(t)
    }
}

pub(crate) struct TreeParser<'a> {
    pub(crate) bytes: &'a [u8],
    pub(crate) pos: usize,
}

impl TreeParser<'_> {
    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn tree(&mut self) -> Result<Tree> {
        // Explicit stack so that very deep inputs do not overflow.
        enum Frame {
            Open,
            Left(Tree),
        }
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            self.skip_ws();
            let mut done = match self.bytes.get(self.pos) {
                Some(b'.') => {
                    self.pos += 1;
                    Tree::leaf()
                }
                Some(b'(') => {
                    self.pos += 1;
                    stack.push(Frame::Open);
                    continue;
                }
                Some(c) => {
                    return Err(Error::parse(
                        "tree",
                        self.pos,
                        format!("expected '.' or '(', found {:?}", *c as char),
                    ))
                }
                None => return Err(Error::parse("tree", self.pos, "unexpected end of input")),
            };
            loop {
                match stack.pop() {
                    None => return Ok(done),
                    Some(Frame::Open) => {
                        stack.push(Frame::Left(done));
                        break;
                    }
                    Some(Frame::Left(l)) => {
                        self.skip_ws();
                        if self.bytes.get(self.pos) != Some(&b')') {
                            return Err(Error::parse("tree", self.pos, "expected ')'"));
                        }
                        self.pos += 1;
                        done = Tree::node(l, done);
                    }
                }
            }
        }
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
