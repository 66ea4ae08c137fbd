//! Strategies and slow reference implementations shared by the integration
//! tests. Nothing here calls into the evaluator, reducer or PL code under
//! test; the oracles work directly from tree shapes and tables.
#![allow(dead_code)]

use assocf::thompson::generators;
use assocf::{Dyadic, FElement, Magma, Tree};
use proptest::prelude::*;

/// Trees grown by expanding leaves picked by the generated indices.
pub fn arb_tree(max_carets: usize) -> impl Strategy<Value = Tree> {
    prop::collection::vec(any::<usize>(), 0..=max_carets).prop_map(|picks| grow(&picks))
}

/// Trees with exactly `carets + 1` leaves.
pub fn arb_tree_exact(carets: usize) -> impl Strategy<Value = Tree> {
    prop::collection::vec(any::<usize>(), carets).prop_map(|picks| grow(&picks))
}

pub fn grow(picks: &[usize]) -> Tree {
    picks.iter().fold(Tree::leaf(), |t, &k| {
        let i = k % t.leaf_count() + 1;
        t.expand(i).unwrap()
    })
}

/// Products of words in `x0^±1, x1^±1`.
pub fn arb_element(max_len: usize) -> impl Strategy<Value = FElement> {
    prop::collection::vec(0..4usize, 0..=max_len).prop_map(|w| word_product(&w))
}

pub fn word_product(letters: &[usize]) -> FElement {
    let g = generators();
    let table = [g.x0.clone(), g.x0.inverse(), g.x1.clone(), g.x1.inverse()];
    letters
        .iter()
        .fold(FElement::identity(), |acc, &k| acc.multiply(&table[k % 4]))
}

/// Catalan numbers from the convolution recurrence.
pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64];
    for k in 1..=n {
        c.push((0..k).map(|i| c[i] * c[k - 1 - i]).sum());
    }
    c[n]
}

/// Left endpoints and depths of the dyadic intervals cut out by the leaves.
pub fn leaf_intervals(t: &Tree) -> Vec<(Dyadic, u32)> {
    let mut out = Vec::new();
    let mut left = Dyadic::ZERO;
    for d in t.leaf_depths() {
        out.push((left, d as u32));
        left = left + Dyadic::half_power(d as u32);
    }
    out
}

/// Evaluate the homeomorphism of a tree pair by locating `x` among the
/// domain leaves and mapping affinely onto the matching range leaf.
pub fn pair_eval(g: &FElement, x: Dyadic) -> Dyadic {
    let dom = leaf_intervals(g.domain());
    let ran = leaf_intervals(g.range());
    let k = dom
        .iter()
        .rposition(|(a, _)| *a <= x)
        .expect("x lies in [0, 1]");
    let (a, da) = dom[k];
    let (b, db) = ran[k];
    b + (x - a).mul_pow2(da as i32 - db as i32)
}

/// Recursive evaluation of a tree in a magma, consuming `args` left to right.
pub fn eval_tree(m: &Magma, t: &Tree, args: &[usize]) -> usize {
    fn go(m: &Magma, t: &Tree, args: &[usize], pos: &mut usize) -> usize {
        match t.children() {
            None => {
                *pos += 1;
                args[*pos - 1]
            }
            Some((l, r)) => {
                let x = go(m, l, args, pos);
                let y = go(m, r, args, pos);
                m.op(x, y)
            }
        }
    }
    let mut pos = 0;
    go(m, t, args, &mut pos)
}

/// Every tuple in `0..size` of length `len`, lexicographically.
pub fn tuples(size: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = size.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = k % size;
            k /= size;
        }
        v
    })
}

/// Image of a tree with some leaves pinned, by running every completion.
pub fn brute_image(m: &Magma, t: &Tree, fixed: &[Option<usize>]) -> Vec<usize> {
    let free: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
    let mut hit = vec![false; m.size()];
    for choice in tuples(m.size(), free.len()) {
        let mut args: Vec<usize> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
        for (slot, v) in free.iter().zip(choice) {
            args[*slot] = v;
        }
        hit[eval_tree(m, t, &args)] = true;
    }
    (0..m.size()).filter(|&i| hit[i]).collect()
}

/// Whether some tree with at most `max_leaves` leaves is constant on `m`.
pub fn has_constant_tree(m: &Magma, max_leaves: usize) -> bool {
    (1..=max_leaves).any(|n| {
        assocf::enumerate_trees(n).unwrap().iter().any(|t| {
            let mut seen = None;
            tuples(m.size(), n).all(|args| {
                let v = eval_tree(m, t, &args);
                *seen.get_or_insert(v) == v
            })
        })
    })
}

/// Whether `(a, b)` is an integer combination of `(m, -m)` and `(0, n)`,
/// by searching the coefficient of the first generator.
pub fn in_lattice(a: i64, b: i64, m: i64, n: i64) -> bool {
    (-40..=40).any(|s| (-80..=80).any(|t| s * m == a && -s * m + t * n == b))
}
