//! Derivability in varieties presented by strongly regular laws, and
//! shift-invariant subgroups of F.
//!
//! Rewriting with a strongly regular law replaces one bracketing of a block
//! of consecutive leaves by another, so it never changes the number of
//! leaves. A derivation between two `n`-leaf trees therefore stays inside the
//! finite set of `n`-leaf trees, and breadth-first search decides it.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionWord, SimultaneousExpansions};
use crate::magma::Law;
use crate::thompson::FElement;
use crate::tree::{Side, Tree, VertexWord, ENUMERATION_CAP};

/// A finite set of laws generating a variety.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VarietyPresentation {
    laws: Vec<Law>,
}

impl VarietyPresentation {
    pub fn new(laws: Vec<Law>) -> Self {
        VarietyPresentation { laws }
    }

    /// The variety whose laws are the reduced pairs of the given elements.
    pub fn of_elements<'a>(elements: impl IntoIterator<Item = &'a FElement>) -> Self {
        VarietyPresentation {
            laws: elements.into_iter().map(Law::of_element).collect(),
        }
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    /// One law per line, `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut laws = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let law = line.parse().map_err(|e: Error| Error::Format {
                line: k + 1,
                msg: e.to_string(),
            })?;
            laws.push(law);
        }
        Ok(VarietyPresentation { laws })
    }

    /// Every law has the same root split on both sides, so no rewrite can
    /// move a leaf across the root.
    fn preserves_root_split(&self) -> bool {
        self.laws
            .iter()
            .all(|l| root_split(l.lhs()) == root_split(l.rhs()))
    }
}

impl fmt::Display for VarietyPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for law in &self.laws {
            writeln!(f, "{law}")?;
        }
        Ok(())
    }
}

impl FromStr for VarietyPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VarietyPresentation::parse(s)
    }
}

fn root_split(t: &Tree) -> usize {
    t.children().map_or(0, |(l, _)| l.leaf_count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Replace an instance of the left side by the right side.
    Forward,
    Backward,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub vertex: VertexWord,
    pub law: usize,
    pub direction: Direction,
    /// Subtrees grafted at the leaves of the law side, left to right.
    pub substitution: Vec<Tree>,
}

impl RewriteStep {
    fn sides<'a>(&self, v: &'a VarietyPresentation) -> Result<(&'a Tree, &'a Tree)> {
        let law = v
            .laws
            .get(self.law)
            .ok_or_else(|| Error::StepMismatch(format!("no law #{}", self.law + 1)))?;
        Ok(match self.direction {
            Direction::Forward => (law.lhs(), law.rhs()),
            Direction::Backward => (law.rhs(), law.lhs()),
        })
    }

    pub fn reversed(&self) -> RewriteStep {
        RewriteStep {
            direction: self.direction.flipped(),
            ..self.clone()
        }
    }
}

/// Replace the instance of one side of a law at `step.vertex` by the other.
pub fn apply_step(t: &Tree, step: &RewriteStep, v: &VarietyPresentation) -> Result<Tree> {
    let (from, to) = step.sides(v)?;
    let here = t.subtree_at(&step.vertex)?;
    if from.leaf_count() != step.substitution.len() || from.graft(&step.substitution)? != *here {
        return Err(Error::StepMismatch(format!(
            "subtree {here} at vertex {} is not an instance of {from}",
            step.vertex
        )));
    }
    t.replace_at(&step.vertex, to.graft(&step.substitution)?)
}

/// All single rewrites of `t`, in order of vertex (preorder), law, direction.
pub fn neighbors(t: &Tree, v: &VarietyPresentation) -> Vec<(RewriteStep, Tree)> {
    let mut out = Vec::new();
    for w in t.vertices() {
        let here = t.subtree_at(&w).expect("vertex of t");
        for (k, law) in v.laws.iter().enumerate() {
            if law.is_trivial() {
                continue;
            }
            for (direction, from, to) in [
                (Direction::Forward, law.lhs(), law.rhs()),
                (Direction::Backward, law.rhs(), law.lhs()),
            ] {
                if let Some(subs) = here.leaf_subtrees(from) {
                    let next = t
                        .replace_at(&w, to.graft_unchecked(&subs))
                        .expect("vertex of t");
                    let step = RewriteStep {
                        vertex: w.clone(),
                        law: k,
                        direction,
                        substitution: subs,
                    };
                    out.push((step, next));
                }
            }
        }
    }
    out
}

/// A derivation: `trees[0]` is the start and `trees[i + 1]` results from
/// `steps[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<RewriteStep>,
    pub trees: Vec<Tree>,
}

impl Proof {
    pub fn empty(t: &Tree) -> Proof {
        Proof {
            steps: Vec::new(),
            trees: vec![t.clone()],
        }
    }

    pub fn start(&self) -> &Tree {
        &self.trees[0]
    }

    pub fn end(&self) -> &Tree {
        self.trees.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replay every step.
    pub fn verify(&self, v: &VarietyPresentation) -> bool {
        self.trees.len() == self.steps.len() + 1
            && self
                .steps
                .iter()
                .zip(self.trees.windows(2))
                .all(|(s, w)| apply_step(&w[0], s, v).is_ok_and(|t| t == w[1]))
    }

    pub fn reversed(&self) -> Proof {
        Proof {
            steps: self.steps.iter().rev().map(RewriteStep::reversed).collect(),
            trees: self.trees.iter().rev().cloned().collect(),
        }
    }

    /// `self` followed by `next`; the end of one must be the start of the other.
    pub fn then(&self, next: &Proof) -> Result<Proof> {
        if self.end() != next.start() {
            return Err(Error::Precondition("proofs do not connect".into()));
        }
        let mut out = self.clone();
        out.steps.extend(next.steps.iter().cloned());
        out.trees.extend(next.trees[1..].iter().cloned());
        Ok(out)
    }

    /// Numbered lines `k. at w: lhs→rhs of law #j` followed by the tree.
    pub fn render(&self, v: &VarietyPresentation) -> String {
        let mut s = format!("0. {}\n", self.trees[0]);
        for (k, (step, t)) in self.steps.iter().zip(&self.trees[1..]).enumerate() {
            let (from, to) = step.sides(v).expect("proof over this presentation");
            s.push_str(&format!(
                "{}. at {}: {}→{} of law #{}\n   {}\n",
                k + 1,
                step.vertex,
                from,
                to,
                step.law + 1,
                t
            ));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeriveOptions {
    /// Answer "no" at once when the root splits differ and no law can change
    /// a root split (as for the x1-law).
    pub root_split_pruning: bool,
}

fn check_sizes(p: &Tree, q: &Tree) -> Result<()> {
    if p.leaf_count() != q.leaf_count() {
        return Err(Error::LeafCountMismatch {
            left: p.leaf_count(),
            right: q.leaf_count(),
        });
    }
    if p.leaf_count() > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n: p.leaf_count(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// A shortest derivation of `q` from `p`, or `None` if there is none.
pub fn derivable(p: &Tree, q: &Tree, v: &VarietyPresentation) -> Result<Option<Proof>> {
    derivable_with(p, q, v, &DeriveOptions::default())
}

pub fn derivable_with(
    p: &Tree,
    q: &Tree,
    v: &VarietyPresentation,
    opts: &DeriveOptions,
) -> Result<Option<Proof>> {
    check_sizes(p, q)?;
    if p == q {
        return Ok(Some(Proof::empty(p)));
    }
    if opts.root_split_pruning && v.preserves_root_split() && root_split(p) != root_split(q) {
        return Ok(None);
    }
    let mut parent: HashMap<Tree, Option<(Tree, RewriteStep)>> = HashMap::new();
    parent.insert(p.clone(), None);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(t) = queue.pop_front() {
        for (step, next) in neighbors(&t, v) {
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((t.clone(), step)));
            if next == *q {
                return Ok(Some(unwind(&parent, q)));
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}

fn unwind(parent: &HashMap<Tree, Option<(Tree, RewriteStep)>>, end: &Tree) -> Proof {
    let mut trees = vec![end.clone()];
    let mut steps = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, step))) = parent.get(&cur) {
        steps.push(step.clone());
        trees.push(prev.clone());
        cur = prev.clone();
    }
    trees.reverse();
    steps.reverse();
    Proof { steps, trees }
}

/// All trees derivable from `t`, in breadth-first order.
pub fn derivability_class(t: &Tree, v: &VarietyPresentation) -> Vec<Tree> {
    let mut seen = HashSet::from([t.clone()]);
    let mut order = vec![t.clone()];
    let mut k = 0;
    while k < order.len() {
        for (_, next) in neighbors(&order[k], v) {
            if seen.insert(next.clone()) {
                order.push(next);
            }
        }
        k += 1;
    }
    order
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventualDerivation {
    /// The expansion of the pair by `at` is derivable.
    Holds { at: ExpansionWord, proof: Proof },
    /// No simultaneous expansion with at most this many added carets is.
    FailsAllUpTo(usize),
}

/// Run [`derivable`] on each simultaneous expansion of `(p, q)` with at most
/// `budget` added carets, fewest carets first.
pub fn eventually_derivable(
    p: &Tree,
    q: &Tree,
    v: &VarietyPresentation,
    budget: usize,
    opts: &DeriveOptions,
) -> Result<EventualDerivation> {
    check_sizes(p, q)?;
    if p.leaf_count() + budget > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n: p.leaf_count() + budget,
            cap: ENUMERATION_CAP,
        });
    }
    for e in SimultaneousExpansions::new(p, q, budget) {
        if let Some(proof) = derivable_with(&e.left, &e.right, v, opts)? {
            return Ok(EventualDerivation::Holds { at: e.word, proof });
        }
    }
    Ok(EventualDerivation::FailsAllUpTo(budget))
}

/// `σ_w(g)`: the letters of `w` applied as shifts, last letter first, so
/// the trees of `g` end up at vertex `w`.
pub fn shift_at_vertex(g: &FElement, w: &VertexWord) -> FElement {
    w.sides()
        .iter()
        .rev()
        .fold(g.clone(), |acc, &s| acc.shift(s))
}

fn words_up_to(len: usize) -> Vec<VertexWord> {
    let mut out = vec![VertexWord::root()];
    let mut level = vec![VertexWord::root()];
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|w| [w.child(Side::Left), w.child(Side::Right)])
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// Products of at most `depth` factors `σ_w(k^±1)` with `k ∈ K` and
/// `|w| ≤ depth`: a finite part of the smallest shift-invariant subgroup
/// containing `K`. Identity first, then in order of discovery.
pub fn closure_generate(k: &[FElement], depth: usize) -> Vec<FElement> {
    closure_generate_with(k, depth, depth)
}

/// As [`closure_generate`], with separate bounds on the shift word length
/// and on the number of factors.
pub fn closure_generate_with(k: &[FElement], word_len: usize, factors: usize) -> Vec<FElement> {
    let words = words_up_to(word_len);
    let mut gens: Vec<FElement> = Vec::new();
    for g in k {
        for h in [g.clone(), g.inverse()] {
            for w in &words {
                let s = shift_at_vertex(&h, w);
                if !s.is_identity() && !gens.contains(&s) {
                    gens.push(s);
                }
            }
        }
    }
    let mut seen = HashSet::from([FElement::identity()]);
    let mut out = vec![FElement::identity()];
    let mut frontier = vec![FElement::identity()];
    for _ in 0..factors {
        let mut next = Vec::new();
        for a in &frontier {
            for g in &gens {
                let prod = a.multiply(g);
                if seen.insert(prod.clone()) {
                    next.push(prod);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipBudgets {
    /// Added carets for the eventual derivability search.
    pub carets: usize,
    pub derive: DeriveOptions,
}

impl Default for MembershipBudgets {
    fn default() -> Self {
        MembershipBudgets {
            carets: 3,
            derive: DeriveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    In {
        at: ExpansionWord,
        proof: Proof,
    },
    /// Not found with this many added carets; never an absolute "no".
    NotDerivableUpTo {
        carets: usize,
    },
}

/// Bounded membership in the smallest shift-invariant subgroup containing
/// `K`, which is `Assoc` of the free algebra of the variety presented by the
/// reduced pairs of `K`. The caret budget is lowered if the expanded trees
/// would exceed the enumeration cap.
pub fn membership_semidecide(
    g: &FElement,
    k: &[FElement],
    budgets: &MembershipBudgets,
) -> Result<Membership> {
    let v = VarietyPresentation::of_elements(k);
    let n = g.leaf_count();
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let carets = budgets.carets.min(ENUMERATION_CAP - n);
    Ok(
        match eventually_derivable(g.domain(), g.range(), &v, carets, &budgets.derive)? {
            EventualDerivation::Holds { at, proof } => Membership::In { at, proof },
            EventualDerivation::FailsAllUpTo(c) => Membership::NotDerivableUpTo { carets: c },
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thompson::generators;
    use crate::tree::enumerate_trees;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn assoc() -> VarietyPresentation {
        VarietyPresentation::new(vec![Law::associative()])
    }

    fn x1_variety() -> VarietyPresentation {
        VarietyPresentation::of_elements([&generators().x1])
    }

    #[test]
    fn apply_at_root() {
        let step = RewriteStep {
            vertex: VertexWord::root(),
            law: 0,
            direction: Direction::Forward,
            substitution: vec![Tree::leaf(), Tree::leaf(), Tree::leaf()],
        };
        assert_eq!(
            apply_step(&t("((. .) .)"), &step, &assoc()).unwrap(),
            t("(. (. .))")
        );
        assert!(matches!(
            apply_step(&t("(. (. .))"), &step, &assoc()),
            Err(Error::StepMismatch(_))
        ));
    }

    #[test]
    fn x1_law_one_step() {
        let v = x1_variety();
        let law = &v.laws()[0];
        assert_eq!(law.lhs(), &t("(. ((. .) .))"));
        let step = RewriteStep {
            vertex: "1".parse().unwrap(),
            law: 0,
            direction: Direction::Forward,
            substitution: vec![Tree::leaf(); 4],
        };
        let src = t("(. (. ((. .) .)))");
        assert_eq!(apply_step(&src, &step, &v).unwrap(), t("(. (. (. (. .))))"));
        assert!(apply_step(&t("(. ((. .) (. .)))"), &step, &v).is_err());
        let back = step.reversed();
        assert_eq!(apply_step(&t("(. (. (. (. .))))"), &back, &v).unwrap(), src);
    }

    #[test]
    fn associativity_connects_t5() {
        let trees = enumerate_trees(5).unwrap();
        assert_eq!(derivability_class(&trees[0], &assoc()).len(), 14);
        let proof = derivable(&trees[0], &trees[13], &assoc()).unwrap().unwrap();
        assert!(proof.verify(&assoc()));
        assert!(proof.reversed().verify(&assoc()));
        assert_eq!(proof.start(), &trees[0]);
        assert_eq!(proof.end(), &trees[13]);
        assert!(derivable(&trees[3], &trees[3], &assoc())
            .unwrap()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn example_pair_is_not_derivable() {
        let r: Tree = t("((. .) (. .))");
        let r1 = r.expand(4).unwrap();
        let r2 = r.expand(2).unwrap();
        assert_eq!(r1, t("((. .) (. (. .)))"));
        assert_eq!(r2, t("((. (. .)) (. .))"));
        let v = x1_variety();
        assert!(derivable(&r1, &r2, &v).unwrap().is_none());
        let pruned = DeriveOptions {
            root_split_pruning: true,
        };
        assert!(derivable_with(&r1, &r2, &v, &pruned).unwrap().is_none());
        assert_eq!(
            eventually_derivable(&r1, &r2, &v, 2, &DeriveOptions::default()).unwrap(),
            EventualDerivation::FailsAllUpTo(2)
        );
    }

    #[test]
    fn size_errors() {
        assert!(matches!(
            derivable(&t("(. .)"), &t("((. .) .)"), &assoc()),
            Err(Error::LeafCountMismatch { .. })
        ));
        let big = Tree::right_comb(15);
        assert!(matches!(
            derivable(&big, &big, &assoc()),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn shifts_along_words() {
        let g = generators();
        assert_eq!(shift_at_vertex(&g.x0, &VertexWord::root()), g.x0);
        assert_eq!(shift_at_vertex(&g.x0, &"1".parse().unwrap()), g.x1);
        let w: VertexWord = "10".parse().unwrap();
        let direct = g.x0.shift(Side::Left).shift(Side::Right);
        assert_eq!(shift_at_vertex(&g.x0, &w), direct);
        // The trees of x0 sit at vertex 10 of the result.
        assert_eq!(direct.domain().subtree_at(&w).unwrap(), g.x0.domain());
        assert_eq!(direct.range().subtree_at(&w).unwrap(), g.x0.range());
    }

    #[test]
    fn closures() {
        assert_eq!(closure_generate(&[], 3), vec![FElement::identity()]);
        let g = generators();
        let c = closure_generate(std::slice::from_ref(&g.c0), 2);
        assert!(c.iter().all(|e| e.in_commutator_subgroup()));
        // c1 = c0 · s1(c0) · c0⁻¹ · s1(c0)⁻¹ needs four factors.
        assert!(!c.contains(&g.c1));
        assert!(closure_generate_with(std::slice::from_ref(&g.c0), 1, 4).contains(&g.c1));
    }

    #[test]
    fn membership() {
        let g = generators();
        let k = [g.x1.clone()];
        let s1 = g.x1.shift(Side::Right);
        assert!(matches!(
            membership_semidecide(&s1, &k, &MembershipBudgets::default()).unwrap(),
            Membership::In { .. }
        ));
        match membership_semidecide(&FElement::identity(), &k, &MembershipBudgets::default()) {
            Ok(Membership::In { proof, at }) => assert!(proof.is_empty() && at.is_identity()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn variety_file() {
        let v = VarietyPresentation::parse("# assoc\n((. .) .) = (. (. .))\n\n").unwrap();
        assert_eq!(v, assoc());
        assert!(matches!(
            VarietyPresentation::parse("\n(. .) = .\n"),
            Err(Error::Format { line: 2, .. })
        ));
    }
}
