use std::fs;
use std::path::Path;

use assocf::magma::{
    assoc_status, satisfies_eventually_with, search_laws, AssocStatus, Budgets, CheckOptions,
    Eventual, Law, Magma,
};
use assocf::rewrite::{
    closure_generate, derivable_with, eventually_derivable, membership_semidecide, DeriveOptions,
    EventualDerivation, Membership, MembershipBudgets, VarietyPresentation,
};
use assocf::{enumerate_trees, zoo, Error, FElement, NormalSubgroupSpec, Side, Tree};
use serde_json::{json, Value};

use crate::args::{Command, FCmd, Global, MagmaCmd, TreeCmd, VarietyCmd, ZooCmd};

pub struct Outcome {
    pub text: String,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    /// A bounded search ran out of budget; the report is partial.
    pub exhausted: bool,
}

impl Outcome {
    fn new(text: impl Into<String>, payload: Value) -> Self {
        Outcome {
            text: text.into(),
            payload,
            diagnostics: Vec::new(),
            exhausted: false,
        }
    }

    fn exhausted(mut self, note: impl Into<String>) -> Self {
        self.exhausted = true;
        self.diagnostics.push(note.into());
        self
    }
}

pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CostGuard { .. } | Error::EnumerationCap { .. } => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Res = Result<Outcome, Failure>;

fn tree(s: &str) -> Result<Tree, Failure> {
    Ok(s.parse()?)
}

fn element(s: &str) -> Result<FElement, Failure> {
    Ok(s.parse()?)
}

fn law(s: &str) -> Result<Law, Failure> {
    Ok(s.parse()?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load_magma(path: &Path) -> Result<Magma, Failure> {
    Magma::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load_variety(path: &Path) -> Result<VarietyPresentation, Failure> {
    VarietyPresentation::parse(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn check_options(g: &Global) -> CheckOptions {
    let defaults = CheckOptions::default();
    CheckOptions {
        seed: g.seed,
        cost_limit: match g.cost_limit {
            Some(0) => None,
            Some(l) => Some(l),
            None => defaults.cost_limit,
        },
        ..defaults
    }
}

fn names(m: &Magma, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| m.name(x).to_string()).collect()
}

fn lookup(m: &Magma, name: &str) -> Result<usize, Failure> {
    m.index_of(name)
        .ok_or_else(|| Failure::Input(format!("no element named {name:?}")))
}

pub fn run(cmd: &Command, g: &Global) -> Res {
    match cmd {
        Command::Tree(c) => run_tree(c),
        Command::F(c) => run_f(c, g),
        Command::Magma(c) => run_magma(c, g),
        Command::Variety(c) => run_variety(c, g),
        Command::Zoo(c) => run_zoo(c),
    }
}

fn describe(t: &Tree) -> Value {
    json!({ "tree": t, "leaves": t.leaf_count(), "depth": t.depth() })
}

fn run_tree(c: &TreeCmd) -> Res {
    let one = |t: Tree| Ok(Outcome::new(t.to_string(), describe(&t)));
    match c {
        TreeCmd::Parse { tree: s } => {
            let t = tree(s)?;
            let text = format!("{t}\nleaves {}\ndepth {}", t.leaf_count(), t.depth());
            Ok(Outcome::new(text, describe(&t)))
        }
        TreeCmd::Expand { tree: s, indices } => {
            let mut t = tree(s)?;
            for &i in indices {
                t = t.expand(i)?;
            }
            one(t)
        }
        TreeCmd::Shift { tree: s, side } => {
            let side: Side = side.parse()?;
            one(tree(s)?.shift(side))
        }
        TreeCmd::Reflect { tree: s } => one(tree(s)?.reflect()),
        TreeCmd::Join { a, b } => one(tree(a)?.join(&tree(b)?)),
        TreeCmd::Enumerate { n } => {
            let trees = enumerate_trees(*n)?;
            let text = trees
                .iter()
                .map(Tree::to_string)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(
                text,
                json!({ "n": n, "count": trees.len(), "trees": trees }),
            ))
        }
    }
}

fn run_f(c: &FCmd, g: &Global) -> Res {
    let one = |e: FElement| Ok(Outcome::new(e.to_string(), json!({ "element": e })));
    match c {
        FCmd::Mul { elements } => {
            let mut acc = FElement::identity();
            for s in elements {
                acc = acc.multiply(&element(s)?);
            }
            one(acc)
        }
        FCmd::Inv { element: s } => one(element(s)?.inverse()),
        FCmd::Word { word, ab } => {
            let e = element(word)?;
            if *ab {
                let img = e.abelianize();
                Ok(Outcome::new(
                    img.to_string(),
                    json!({ "element": e, "ab": [img.m, img.n] }),
                ))
            } else {
                one(e)
            }
        }
        FCmd::Ab { element: s } => {
            let img = element(s)?.abelianize();
            Ok(Outcome::new(
                img.to_string(),
                json!({ "ab": [img.m, img.n] }),
            ))
        }
        FCmd::Pl { element: s } => {
            let e = element(s)?;
            let f = e.to_pl();
            let mut out = Outcome::new(
                f.to_string(),
                json!({
                    "element": e,
                    "pl": f,
                    "support": { "from": e.support_interval().0, "to": e.support_interval().1 },
                }),
            );
            if let Some(path) = &g.svg {
                fs::write(path, f.to_svg(256))
                    .map_err(|err| Failure::Input(format!("{}: {err}", path.display())))?;
                out.diagnostics.push(format!("wrote {}", path.display()));
            }
            Ok(out)
        }
        FCmd::Reduce { p, q } => one(assocf::reduce(&tree(p)?, &tree(q)?)?),
        FCmd::Shifts { element: s } => {
            let e = element(s)?;
            let (s0, s1) = (e.shift(Side::Left), e.shift(Side::Right));
            Ok(Outcome::new(
                format!("s0 {s0}\ns1 {s1}"),
                json!({ "element": e, "s0": s0, "s1": s1 }),
            ))
        }
        FCmd::NormalMember { element: s, m, n } => {
            let e = element(s)?;
            let spec = NormalSubgroupSpec::new(*m, *n);
            let member = e.normal_member(spec);
            let img = e.abelianize();
            Ok(Outcome::new(
                member.to_string(),
                json!({ "element": e, "ab": [img.m, img.n], "spec": [m, n], "member": member }),
            ))
        }
    }
}

fn status_text(m: &Magma, s: &AssocStatus) -> String {
    use assocf::magma::FullReason;
    match s {
        AssocStatus::FullF {
            reason: FullReason::Solvable(w),
        } => format!(
            "{}\nwitness {} is constantly {}",
            s.label(),
            w.tree,
            m.name(w.zero)
        ),
        AssocStatus::TrivialCertified {
            identity,
            counterexample,
        } => format!(
            "{}\nidentity {}; non-associative at ({})",
            s.label(),
            m.name(*identity),
            names(m, counterexample).join(", ")
        ),
        AssocStatus::Unknown { arity, laws, .. } => {
            let mut t = format!("{}\nlaws at arity {arity}:", s.label());
            for l in laws {
                t.push_str(&format!("\n  {l}"));
            }
            t
        }
        _ => s.label(),
    }
}

fn run_magma(c: &MagmaCmd, g: &Global) -> Res {
    let opts = check_options(g);
    match c {
        MagmaCmd::Check { file, law: l } => {
            let m = load_magma(file)?;
            let law = law(l)?;
            let cx = m.counterexample(&law);
            let text = match &cx {
                None => "holds".to_string(),
                Some(t) => format!("fails at ({})", names(&m, t).join(", ")),
            };
            Ok(Outcome::new(
                text,
                json!({
                    "law": law,
                    "holds": cx.is_none(),
                    "counterexample": cx.as_ref().map(|t| names(&m, t)),
                }),
            ))
        }
        MagmaCmd::Eventual {
            file,
            law: l,
            no_shortcut,
        } => {
            let m = load_magma(file)?;
            let law = law(l)?;
            let budget = g.budget.unwrap_or(6);
            let r = satisfies_eventually_with(&m, &law, budget, !no_shortcut, &opts)?;
            let payload = json!({ "law": law, "result": r });
            Ok(match &r {
                Eventual::Holds(w) => Outcome::new(format!("holds after {w}"), payload),
                Eventual::DecidedByPerfection(b) => Outcome::new(
                    format!(
                        "{} (simply perfect: decided directly)",
                        if *b { "holds" } else { "fails" }
                    ),
                    payload,
                ),
                Eventual::FailsAllUpTo(b) => Outcome::new(
                    format!("no simultaneous expansion with at most {b} added carets holds"),
                    payload,
                )
                .exhausted(format!("budget of {b} added carets exhausted")),
            })
        }
        MagmaCmd::Solvable { file } => {
            let m = load_magma(file)?;
            let chain: Vec<Vec<String>> = m.derived_chain().iter().map(|d| names(&m, d)).collect();
            let sizes: Vec<usize> = chain.iter().map(Vec::len).collect();
            let w = m.is_solvable();
            let mut text = format!(
                "derived chain sizes {}",
                sizes
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            match &w {
                Some(w) => text.push_str(&format!(
                    "\nsolvable: {} is constantly {}",
                    w.tree,
                    m.name(w.zero)
                )),
                None => text.push_str("\nnot solvable"),
            }
            Ok(Outcome::new(
                text,
                json!({
                    "chain": chain,
                    "sizes": sizes,
                    "solvable": w.is_some(),
                    "witness": w.as_ref().map(|w| json!({
                        "zero": m.name(w.zero), "depth": w.depth, "tree": w.tree,
                    })),
                }),
            ))
        }
        MagmaCmd::Status { file } => {
            let m = load_magma(file)?;
            let budgets = Budgets {
                eventual: g.budget.unwrap_or(6),
                arity_cap: g.arity_cap,
                check: opts,
            };
            let s = assoc_status(&m, &budgets);
            Ok(Outcome::new(
                status_text(&m, &s),
                json!({ "label": s.label(), "status": s }),
            ))
        }
        MagmaCmd::Search { file, arity } => {
            let m = load_magma(file)?;
            let laws = search_laws(&m, *arity, &opts)?;
            let text = if laws.is_empty() {
                format!("no nontrivial law of arity {arity}")
            } else {
                laws.iter()
                    .map(Law::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Outcome::new(text, json!({ "arity": arity, "laws": laws })))
        }
        MagmaCmd::Centralizer {
            file,
            zero,
            elements,
        } => {
            let m = load_magma(file)?;
            let z = lookup(&m, zero)?;
            let subset = elements
                .iter()
                .map(|e| lookup(&m, e))
                .collect::<Result<Vec<_>, _>>()?;
            let c = names(&m, &m.centralizer(&subset, z));
            Ok(Outcome::new(
                format!("{{{}}}", c.join(", ")),
                json!({ "zero": zero, "subset": elements, "centralizer": c }),
            ))
        }
        MagmaCmd::Image {
            file,
            tree: t,
            fixed,
        } => {
            let m = load_magma(file)?;
            let t = tree(t)?;
            let mut assign = vec![None; t.leaf_count()];
            for f in fixed {
                let (pos, name) = f.split_once('=').ok_or_else(|| {
                    Failure::Input(format!("expected POSITION=ELEMENT, got {f:?}"))
                })?;
                let pos: usize = pos
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("bad position in {f:?}")))?;
                if pos == 0 || pos > assign.len() {
                    return Err(Failure::Input(format!(
                        "position {pos} out of range 1..={}",
                        assign.len()
                    )));
                }
                assign[pos - 1] = Some(lookup(&m, name.trim())?);
            }
            let img = names(&m, &m.restricted_image(&t, &assign)?);
            Ok(Outcome::new(
                format!("{{{}}} ({} elements)", img.join(", "), img.len()),
                json!({ "tree": t, "fixed": fixed, "image": img, "size": img.len() }),
            ))
        }
    }
}

fn run_variety(c: &VarietyCmd, g: &Global) -> Res {
    match c {
        VarietyCmd::Derivable { file, p, q, prune } => {
            let v = load_variety(file)?;
            let (p, q) = (tree(p)?, tree(q)?);
            let opts = DeriveOptions {
                root_split_pruning: *prune,
            };
            match g.budget {
                None => {
                    let proof = derivable_with(&p, &q, &v, &opts)?;
                    let text = match &proof {
                        Some(pr) => pr.render(&v),
                        None => format!("not derivable among {}-leaf trees", p.leaf_count()),
                    };
                    Ok(Outcome::new(
                        text,
                        json!({ "derivable": proof.is_some(), "proof": proof }),
                    ))
                }
                Some(b) => {
                    let r = eventually_derivable(&p, &q, &v, b, &opts)?;
                    Ok(match &r {
                        EventualDerivation::Holds { at, proof } => Outcome::new(
                            format!("derivable after {at}\n{}", proof.render(&v)),
                            json!({ "derivable": true, "result": r }),
                        ),
                        EventualDerivation::FailsAllUpTo(b) => Outcome::new(
                            format!(
                                "not derivable after any expansion with at most {b} added carets"
                            ),
                            json!({ "derivable": false, "result": r }),
                        )
                        .exhausted(format!("budget of {b} added carets exhausted")),
                    })
                }
            }
        }
        VarietyCmd::Member {
            element: s,
            generators,
        } => {
            let e = element(s)?;
            let k = generators
                .iter()
                .map(|s| element(s))
                .collect::<Result<Vec<_>, _>>()?;
            let budgets = MembershipBudgets {
                carets: g.budget.unwrap_or(3),
                ..MembershipBudgets::default()
            };
            let r = membership_semidecide(&e, &k, &budgets)?;
            let v = VarietyPresentation::of_elements(&k);
            Ok(match &r {
                Membership::In { at, proof } => Outcome::new(
                    format!("in (derivable after {at})\n{}", proof.render(&v)),
                    json!({ "element": e, "member": true, "result": r }),
                ),
                Membership::NotDerivableUpTo { carets } => Outcome::new(
                    format!("not shown to be in: no derivation with at most {carets} added carets"),
                    json!({ "element": e, "member": Value::Null, "result": r }),
                )
                .exhausted(format!("budget of {carets} added carets exhausted")),
            })
        }
        VarietyCmd::Closure { generators, depth } => {
            let k = generators
                .iter()
                .map(|s| element(s))
                .collect::<Result<Vec<_>, _>>()?;
            let c = closure_generate(&k, *depth);
            let text = format!(
                "{} elements\n{}",
                c.len(),
                c.iter()
                    .map(FElement::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            Ok(Outcome::new(
                text,
                json!({ "depth": depth, "count": c.len(), "elements": c }),
            ))
        }
    }
}

fn run_zoo(c: &ZooCmd) -> Res {
    match c {
        ZooCmd::List => {
            let text = zoo::CATALOG
                .iter()
                .map(|(n, d)| format!("{n:20} {d}"))
                .collect::<Vec<_>>()
                .join("\n");
            let entries: Vec<Value> = zoo::CATALOG
                .iter()
                .map(|(n, d)| json!({ "name": n, "description": d }))
                .collect();
            Ok(Outcome::new(text, json!({ "magmas": entries })))
        }
        ZooCmd::Emit { name } => {
            let m = zoo::by_name(name)
                .ok_or_else(|| Failure::Input(format!("no built-in magma named {name:?}")))?;
            let text = m.to_file_string();
            Ok(Outcome::new(
                text.trim_end(),
                json!({ "name": name, "magma": m }),
            ))
        }
    }
}
