//! Thompson's group F as reduced tree pairs.
//!
//! An element `⟨p, q⟩` is stored with no common free caret. In the
//! piecewise-linear model it maps the dyadic subdivision of `[0, 1]` given by
//! `p` onto the one given by `q`, and the product `g·h` applies `g` first.
//!
//! Conventions:
//! - `x0 = ⟨((. .) .), (. (. .))⟩`, so the PL map of `x0` has slope 2 at 0.
//! - `x1 = s1(x0)`, `x2 = s1(x1)`.
//! - `g^h = h⁻¹ g h`; with these choices `x2 = x1^x0`.

mod word;

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tree::{Side, Tree, TreeParser};

pub use word::parse_word;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FElement {
    domain: Tree,
    range: Tree,
}

/// Remove common free carets until none remain.
pub fn reduce(p: &Tree, q: &Tree) -> Result<FElement> {
    if p.leaf_count() != q.leaf_count() {
        return Err(Error::LeafCountMismatch {
            left: p.leaf_count(),
            right: q.leaf_count(),
        });
    }
    Ok(reduce_unchecked(p.clone(), q.clone()))
}

fn reduce_unchecked(mut p: Tree, mut q: Tree) -> FElement {
    while let Some(i) = first_common(&p.free_carets(), &q.free_carets()) {
        p = p.contract(i).expect("free caret");
        q = q.contract(i).expect("free caret");
    }
    FElement {
        domain: p,
        range: q,
    }
}

fn first_common(a: &[usize], b: &[usize]) -> Option<usize> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

impl FElement {
    pub fn identity() -> Self {
        FElement {
            domain: Tree::leaf(),
            range: Tree::leaf(),
        }
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    pub fn is_identity(&self) -> bool {
        self.domain.is_leaf()
    }

    /// Leaves per side of the reduced pair.
    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn multiply(&self, other: &FElement) -> FElement {
        let common = self.range.join(&other.domain);
        let left = common
            .leaf_subtrees(&self.range)
            .expect("join expands both");
        let right = common
            .leaf_subtrees(&other.domain)
            .expect("join expands both");
        reduce_unchecked(
            self.domain.graft_unchecked(&left),
            other.range.graft_unchecked(&right),
        )
    }

    pub fn inverse(&self) -> FElement {
        FElement {
            domain: self.range.clone(),
            range: self.domain.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> FElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(FElement::identity(), |acc, _| acc.multiply(&base))
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`
    pub fn commutator(&self, h: &FElement) -> FElement {
        self.multiply(h)
            .multiply(&self.inverse())
            .multiply(&h.inverse())
    }

    /// `g^h = h⁻¹ g h`
    pub fn conj(&self, h: &FElement) -> FElement {
        h.inverse().multiply(self).multiply(h)
    }

    /// Shift endomorphism `s0` (left) or `s1` (right). A reduced pair stays
    /// reduced, since the new caret is never free on both sides unless the
    /// element is trivial.
    pub fn shift(&self, side: Side) -> FElement {
        if self.is_identity() {
            return FElement::identity();
        }
        FElement {
            domain: self.domain.shift(side),
            range: self.range.shift(side),
        }
    }

    /// Reflection automorphism `R`.
    pub fn reflect(&self) -> FElement {
        FElement {
            domain: self.domain.reflect(),
            range: self.range.reflect(),
        }
    }

    /// Image in `F/F' ≅ Z × Z` with `x0 ↦ (1, 0)`, `x1 ↦ (0, 1)`.
    ///
    /// The raw log2-slopes at 0 and at 1 are `a = l(p) - l(q)` and
    /// `b = r(p) - r(q)` (leftmost and rightmost leaf depths); the image is
    /// `(a, -(a + b))`.
    pub fn abelianize(&self) -> AbelianImage {
        let a = self.domain.leftmost_depth() as i64 - self.range.leftmost_depth() as i64;
        let b = self.domain.rightmost_depth() as i64 - self.range.rightmost_depth() as i64;
        AbelianImage { m: a, n: -(a + b) }
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.abelianize() == AbelianImage::default()
    }

    pub fn normal_member(&self, spec: NormalSubgroupSpec) -> bool {
        spec.contains(self)
    }
}

impl Mul for &FElement {
    type Output = FElement;

    fn mul(self, rhs: &FElement) -> FElement {
        self.multiply(rhs)
    }
}

impl Mul for FElement {
    type Output = FElement;

    fn mul(self, rhs: FElement) -> FElement {
        self.multiply(&rhs)
    }
}

/// The distinguished elements `x0, x1, x2, c0, c1`.
#[derive(Debug, Clone)]
pub struct Generators {
    pub x0: FElement,
    pub x1: FElement,
    pub x2: FElement,
    pub c0: FElement,
    pub c1: FElement,
}

pub fn generators() -> &'static Generators {
    static GENS: OnceLock<Generators> = OnceLock::new();
    GENS.get_or_init(|| {
        let x0 = FElement {
            domain: Tree::node(Tree::caret(), Tree::leaf()),
            range: Tree::node(Tree::leaf(), Tree::caret()),
        };
        let x1 = x0.shift(Side::Right);
        let x2 = x1.conj(&x0);
        let c0 = x0.commutator(&x1);
        let c1 = c0.commutator(&c0.shift(Side::Right));
        Generators { x0, x1, x2, c0, c1 }
    })
}

/// `x_k` for `k ≥ 0`: `x_{k+1} = s1(x_k)`.
pub fn standard_generator(k: usize) -> FElement {
    (0..k).fold(generators().x0.clone(), |g, _| g.shift(Side::Right))
}

/// Product of a uniformly random word in `x0^±1, x1^±1` whose length is
/// uniform in `0..=max_len`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> FElement {
    let g = generators();
    let letters = [g.x0.clone(), g.x0.inverse(), g.x1.clone(), g.x1.inverse()];
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(FElement::identity(), |acc, _| {
        acc.multiply(&letters[rng.gen_range(0..letters.len())])
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianImage {
    pub m: i64,
    pub n: i64,
}

impl std::ops::Add for AbelianImage {
    type Output = AbelianImage;

    fn add(self, o: AbelianImage) -> AbelianImage {
        AbelianImage {
            m: self.m + o.m,
            n: self.n + o.n,
        }
    }
}

impl AbelianImage {
    /// Induced map of `s0`: `(m, n) ↦ (m, -m)`.
    pub fn shift_left(self) -> AbelianImage {
        AbelianImage {
            m: self.m,
            n: -self.m,
        }
    }

    /// Induced map of `s1`: `(m, n) ↦ (0, m + n)`.
    pub fn shift_right(self) -> AbelianImage {
        AbelianImage {
            m: 0,
            n: self.m + self.n,
        }
    }
}

impl fmt::Display for AbelianImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// A normal subgroup of F that can arise from a bracket algebra: the
/// preimage of the subgroup of `Z × Z` generated by `(m, -m)` and `(0, n)`.
/// `(0, 0)` stands for the trivial subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalSubgroupSpec {
    pub m: u64,
    pub n: u64,
}

impl NormalSubgroupSpec {
    pub fn new(m: u64, n: u64) -> Self {
        NormalSubgroupSpec { m, n }
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0 && self.n == 0
    }

    /// Whether `(a, b)` lies in the span of `(m, -m)` and `(0, n)`.
    ///
    /// `s·(m, -m) + t·(0, n) = (a, b)` forces `s·m = a` and `t·n = a + b`.
    pub fn contains_image(&self, img: AbelianImage) -> bool {
        let divides = |d: u64, x: i64| if d == 0 { x == 0 } else { x % d as i64 == 0 };
        divides(self.m, img.m) && divides(self.n, img.m + img.n)
    }

    pub fn contains(&self, g: &FElement) -> bool {
        if self.is_trivial() {
            g.is_identity()
        } else {
            self.contains_image(g.abelianize())
        }
    }
}

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair {} {}", self.domain, self.range)
    }
}

impl FromStr for FElement {
    type Err = Error;

    /// Either `pair P Q` with tree literals, or a word such as `[x0,x1]`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim_start();
        match trimmed.strip_prefix("pair") {
            Some(rest) => {
                let offset = s.len() - rest.len();
                let mut p = TreeParser {
                    bytes: s.as_bytes(),
                    pos: offset,
                };
                let a = p.tree()?;
                let b = p.tree()?;
                p.skip_ws();
                if p.pos != s.len() {
                    return Err(Error::parse("pair", p.pos, "trailing input"));
                }
                reduce(&a, &b)
            }
            None => parse_word(s),
        }
    }
}

impl Serialize for FElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
