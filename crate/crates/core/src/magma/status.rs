//! What can be certified about `Assoc(S)`, the subgroup of F of laws that
//! eventually hold in a finite magma.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expansion::ExpansionWord;
use crate::thompson::generators;

use super::check::{refuted_by_sampling, search_laws, tuple_count, CheckOptions, Eventual};
use super::{satisfies_eventually_with, Law, Magma, SolvableWitness};

/// The law of `c0 = [x0, x1]`, on five variables.
pub fn five_variable_law() -> Law {
    Law::of_element(&generators().c0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullReason {
    Associative,
    Solvable(SolvableWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FvlEvidence {
    OnTheNose,
    AtExpansion(ExpansionWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum AssocStatus {
    /// Every law eventually holds.
    FullF { reason: FullReason },
    /// A two-sided identity together with non-associativity rules out every
    /// nontrivial law, eventual or not.
    TrivialCertified {
        identity: usize,
        counterexample: [usize; 3],
    },
    /// The five-variable law holds eventually, so `Assoc(S)` contains `F'`.
    ContainsCommutator { evidence: FvlEvidence },
    /// No nontrivial law of arity at most `arity` holds on the nose.
    /// `fvl_budget` is the number of added carets up to which the
    /// five-variable law was ruled out (`None`: not checked, too costly).
    NoLawUpTo {
        arity: usize,
        fvl_budget: Option<usize>,
    },
    /// Laws were found at `arity` (the search stops there); nothing stronger
    /// is certified.
    Unknown {
        arity: usize,
        laws: Vec<Law>,
        fvl_budget: Option<usize>,
    },
}

impl AssocStatus {
    /// Short name, e.g. `FullF(solvable)` or `NoLawUpTo(6)`.
    pub fn label(&self) -> String {
        match self {
            AssocStatus::FullF {
                reason: FullReason::Associative,
            } => "FullF(associative)".into(),
            AssocStatus::FullF {
                reason: FullReason::Solvable(_),
            } => "FullF(solvable)".into(),
            AssocStatus::TrivialCertified { .. } => "TrivialCertified".into(),
            AssocStatus::ContainsCommutator { .. } => "ContainsCommutator".into(),
            AssocStatus::NoLawUpTo { arity, .. } => format!("NoLawUpTo({arity})"),
            AssocStatus::Unknown { .. } => "Unknown".into(),
        }
    }
}

impl fmt::Display for AssocStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Added carets for the eventual five-variable-law search.
    pub eventual: usize,
    /// Largest arity for the law search; `None` picks by magma size.
    pub arity_cap: Option<usize>,
    pub check: CheckOptions,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            eventual: 6,
            arity_cap: None,
            check: CheckOptions::default(),
        }
    }
}

pub fn default_arity_cap(size: usize) -> usize {
    match size {
        0..=4 => 6,
        5..=60 => 4,
        _ => 3,
    }
}

fn fits(m: &Magma, arity: usize, opts: &CheckOptions) -> bool {
    opts.cost_limit
        .is_none_or(|limit| tuple_count(m.size(), arity) <= limit)
}

pub fn assoc_status(m: &Magma, budgets: &Budgets) -> AssocStatus {
    if m.is_associative() {
        return AssocStatus::FullF {
            reason: FullReason::Associative,
        };
    }
    if let Some(w) = m.is_solvable() {
        return AssocStatus::FullF {
            reason: FullReason::Solvable(w),
        };
    }
    if let (Some(identity), Some(counterexample)) =
        (m.two_sided_identity(), m.associativity_counterexample())
    {
        return AssocStatus::TrivialCertified {
            identity,
            counterexample,
        };
    }

    let opts = &budgets.check;
    let fvl = five_variable_law();
    let fvl_budget = if m.is_simply_perfect() {
        // Direct and eventual satisfaction coincide here, so one check is final.
        if refuted_by_sampling(m, &fvl, opts, 0) {
            Some(0)
        } else if fits(m, fvl.arity(), opts) {
            if m.satisfies(&fvl) {
                return AssocStatus::ContainsCommutator {
                    evidence: FvlEvidence::OnTheNose,
                };
            }
            Some(0)
        } else {
            None
        }
    } else {
        let budget = (0..=budgets.eventual)
            .take_while(|b| fits(m, fvl.arity() + b, opts))
            .last();
        if let Some(b) = budget {
            if let Ok(Eventual::Holds(w)) = satisfies_eventually_with(m, &fvl, b, false, opts) {
                let evidence = if w.is_identity() {
                    FvlEvidence::OnTheNose
                } else {
                    FvlEvidence::AtExpansion(w)
                };
                return AssocStatus::ContainsCommutator { evidence };
            }
        }
        budget
    };

    let cap = budgets
        .arity_cap
        .unwrap_or_else(|| default_arity_cap(m.size()));
    let mut searched = 2;
    for n in 3..=cap {
        let Ok(laws) = search_laws(m, n, opts) else {
            break;
        };
        if !laws.is_empty() {
            return AssocStatus::Unknown {
                arity: n,
                laws,
                fvl_budget,
            };
        }
        searched = n;
    }
    AssocStatus::NoLawUpTo {
        arity: searched,
        fvl_budget,
    }
}
