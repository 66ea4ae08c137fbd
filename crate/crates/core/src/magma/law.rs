use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansion::ExpansionWord;
use crate::thompson::FElement;
use crate::tree::Tree;

use super::Magma;

/// A strongly regular law `lhs ≈ rhs`: two bracketings of the same variables
/// `x1 … xn` in the same order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Law {
    lhs: Tree,
    rhs: Tree,
}

impl Law {
    pub fn new(lhs: Tree, rhs: Tree) -> Result<Law> {
        if lhs.leaf_count() != rhs.leaf_count() {
            return Err(Error::LeafCountMismatch {
                left: lhs.leaf_count(),
                right: rhs.leaf_count(),
            });
        }
        Ok(Law { lhs, rhs })
    }

    /// `((x y) z) ≈ (x (y z))`
    pub fn associative() -> Law {
        Law {
            lhs: Tree::left_comb(3),
            rhs: Tree::right_comb(3),
        }
    }

    /// The law given by the reduced pair of an element of F.
    pub fn of_element(g: &FElement) -> Law {
        Law {
            lhs: g.domain().clone(),
            rhs: g.range().clone(),
        }
    }

    pub fn lhs(&self) -> &Tree {
        &self.lhs
    }

    pub fn rhs(&self) -> &Tree {
        &self.rhs
    }

    pub fn arity(&self) -> usize {
        self.lhs.leaf_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn reversed(&self) -> Law {
        Law {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }

    /// Apply the same expansion to both sides.
    pub fn expand(&self, b: &ExpansionWord) -> Law {
        Law {
            lhs: b.apply(&self.lhs),
            rhs: b.apply(&self.rhs),
        }
    }

    pub fn to_element(&self) -> FElement {
        crate::thompson::reduce(&self.lhs, &self.rhs).expect("equal leaf counts")
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('=')
            .ok_or_else(|| Error::parse("law", 0, "expected 'TREE = TREE'"))?;
        let lhs: Tree = l.parse()?;
        let rhs: Tree = r.parse().map_err(|e| match e {
            Error::Parse { what, pos, msg } => Error::Parse {
                what,
                pos: pos + l.len() + 1,
                msg,
            },
            other => other,
        })?;
        Law::new(lhs, rhs)
    }
}

impl Serialize for Law {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Law {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A tree compiled to postfix: `true` pushes the next argument, `false`
/// pops two values and pushes their product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    steps: Vec<bool>,
    arity: usize,
}

impl Program {
    pub fn compile(t: &Tree) -> Program {
        let mut steps = Vec::with_capacity(2 * t.leaf_count());
        let mut todo: Vec<(&Tree, bool)> = vec![(t, false)];
        while let Some((node, expanded)) = todo.pop() {
            match node.children() {
                None => steps.push(true),
                Some(_) if expanded => steps.push(false),
                Some((l, r)) => {
                    todo.push((node, true));
                    todo.push((r, false));
                    todo.push((l, false));
                }
            }
        }
        Program {
            steps,
            arity: t.leaf_count(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn steps(&self) -> &[bool] {
        &self.steps
    }

    /// Evaluate; `args` must have length `arity` with valid indices.
    #[inline]
    pub fn run(&self, m: &Magma, args: &[usize], stack: &mut Vec<usize>) -> usize {
        let table = m.raw_table();
        let n = m.size();
        stack.clear();
        let mut next = 0;
        for &push in &self.steps {
            if push {
                stack.push(args[next]);
                next += 1;
            } else {
                let y = stack.pop().unwrap();
                let x = stack.pop().unwrap();
                stack.push(table[x * n + y] as usize);
            }
        }
        stack[0]
    }
}
