//! Exhaustive and bounded law checking.
//!
//! Tuples are enumerated in lexicographic order with the first variable most
//! significant. Large tuple spaces are cut into blocks scanned in parallel;
//! `find_map_first` keeps the reported counterexample the first one in that
//! order no matter how the blocks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionWord, SimultaneousExpansions};
use crate::tree::enumerate_trees;

use super::{Law, Magma, Program};

const BLOCK: u128 = 1 << 14;

/// Knobs for the randomized pre-pass and the cost guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub seed: u64,
    /// Random tuples tried before an exhaustive sweep; 0 disables the pre-pass.
    pub samples: usize,
    /// Largest tuple space a search may sweep; `None` means unlimited.
    pub cost_limit: Option<u128>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0x5eed,
            samples: 100_000,
            cost_limit: Some(1 << 24),
        }
    }
}

impl CheckOptions {
    fn guard(&self, tuples: u128) -> Result<()> {
        match self.cost_limit {
            Some(limit) if tuples > limit => Err(Error::CostGuard { tuples, limit }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn tuple_count(size: usize, arity: usize) -> u128 {
    u32::try_from(arity)
        .ok()
        .and_then(|a| (size as u128).checked_pow(a))
        .unwrap_or(u128::MAX)
}

fn decode(mut index: u128, size: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = (index % size as u128) as usize;
        index /= size as u128;
    }
    t
}

fn increment(t: &mut [usize], size: usize) {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < size {
            return;
        }
        *slot = 0;
    }
}

fn scan_range(m: &Magma, p: &Program, q: &Program, start: u128, end: u128) -> Option<Vec<usize>> {
    let mut t = decode(start, m.size(), p.arity());
    let mut stack = Vec::with_capacity(p.arity());
    for _ in start..end {
        if p.run(m, &t, &mut stack) != q.run(m, &t, &mut stack) {
            return Some(t);
        }
        increment(&mut t, m.size());
    }
    None
}

fn scan(m: &Magma, p: &Program, q: &Program) -> Option<Vec<usize>> {
    let total = tuple_count(m.size(), p.arity());
    if total <= BLOCK {
        return scan_range(m, p, q, 0, total);
    }
    let blocks = u64::try_from(total.div_ceil(BLOCK)).unwrap_or(u64::MAX);
    (0..blocks).into_par_iter().find_map_first(|b| {
        let start = b as u128 * BLOCK;
        scan_range(m, p, q, start, (start + BLOCK).min(total))
    })
}

pub(crate) fn first_counterexample(m: &Magma, law: &Law) -> Option<Vec<usize>> {
    if law.is_trivial() {
        return None;
    }
    scan(
        m,
        &Program::compile(law.lhs()),
        &Program::compile(law.rhs()),
    )
}

/// Try random tuples; `true` if a counterexample turned up.
fn prepass(m: &Magma, p: &Program, q: &Program, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0; p.arity()];
    let mut stack = Vec::with_capacity(p.arity());
    (0..samples).any(|_| {
        for slot in t.iter_mut() {
            *slot = rng.gen_range(0..m.size());
        }
        p.run(m, &t, &mut stack) != q.run(m, &t, &mut stack)
    })
}

/// The randomized pre-pass found a counterexample. Only runs when the tuple
/// space is larger than the sample count.
pub(crate) fn refuted_by_sampling(m: &Magma, law: &Law, opts: &CheckOptions, salt: u64) -> bool {
    let total = tuple_count(m.size(), law.arity());
    if law.is_trivial() || opts.samples == 0 || total <= opts.samples as u128 {
        return false;
    }
    let p = Program::compile(law.lhs());
    let q = Program::compile(law.rhs());
    let seed = opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    prepass(m, &p, &q, opts.samples, seed)
}

/// Whether the law holds, using the pre-pass to reject cheaply.
pub(crate) fn holds(m: &Magma, law: &Law, opts: &CheckOptions, salt: u64) -> bool {
    !refuted_by_sampling(m, law, opts, salt) && first_counterexample(m, law).is_none()
}

/// All nontrivial laws `p ≈ q` with `p` before `q` in enumeration order
/// that hold in `m`, for `n`-leaf trees.
pub fn search_laws(m: &Magma, n: usize, opts: &CheckOptions) -> Result<Vec<Law>> {
    opts.guard(tuple_count(m.size(), n))?;
    let trees = enumerate_trees(n)?;
    let pairs: Vec<(usize, usize)> = (0..trees.len())
        .flat_map(|i| (i + 1..trees.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<Law>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let law = Law::new(trees[i].clone(), trees[j].clone()).expect("same arity");
            holds(m, &law, opts, k as u64).then_some(law)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// Outcome of an eventual-satisfaction query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eventual {
    /// The law expanded by this word holds on the nose.
    Holds(ExpansionWord),
    /// No simultaneous expansion with at most this many added carets holds.
    FailsAllUpTo(usize),
    /// Simply perfect magma: eventual and direct satisfaction coincide.
    DecidedByPerfection(bool),
}

pub fn satisfies_eventually(m: &Magma, law: &Law, budget: usize) -> Result<Eventual> {
    satisfies_eventually_with(m, law, budget, true, &CheckOptions::default())
}

/// Breadth-first over simultaneous expansions by number of added carets.
/// With `shortcut`, a simply perfect magma is answered by a direct check.
/// Fails with a cost-guard error before sweeping a tuple space larger than
/// the limit.
pub fn satisfies_eventually_with(
    m: &Magma,
    law: &Law,
    budget: usize,
    shortcut: bool,
    opts: &CheckOptions,
) -> Result<Eventual> {
    if shortcut && m.is_simply_perfect() {
        return Ok(Eventual::DecidedByPerfection(m.satisfies(law)));
    }
    opts.guard(tuple_count(m.size(), law.arity() + budget))?;
    for (k, e) in SimultaneousExpansions::new(law.lhs(), law.rhs(), budget).enumerate() {
        let candidate = Law::new(e.left, e.right).expect("same arity");
        if holds(m, &candidate, opts, k as u64) {
            return Ok(Eventual::Holds(e.word));
        }
    }
    Ok(Eventual::FailsAllUpTo(budget))
}
