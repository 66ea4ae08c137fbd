//! Acceptance suite. Run with `cargo test -p assocf-core --test acceptance`.
//!
//! Each criterion prints one `PASS`/`FAIL` line. A criterion fails when any
//! of its checks fails or when it exceeds its time limit. The process exits
//! nonzero if any criterion failed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use assocf::magma::{five_variable_law, search_laws, CheckOptions, FullReason};
use assocf::rewrite::{
    closure_generate, derivability_class, derivable, eventually_derivable, DeriveOptions,
    EventualDerivation, VarietyPresentation,
};
use assocf::thompson::{generators, random_element};
use assocf::{
    assoc_status, enumerate_trees, reduce, zoo, AssocStatus, FElement, Law, Magma,
    NormalSubgroupSpec, Side, Tree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SEED: u64 = 0x5eed;
const RANDOM_WORD_LEN: usize = 20;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn randoms(count: usize) -> Vec<FElement> {
    let mut rng = rng();
    (0..count)
        .map(|_| random_element(&mut rng, RANDOM_WORD_LEN))
        .collect()
}

fn no_laws_up_to(m: &Magma, max: usize) -> Outcome {
    let opts = CheckOptions {
        cost_limit: None,
        ..CheckOptions::default()
    };
    for n in 2..=max {
        let laws = search_laws(m, n, &opts).map_err(|e| e.to_string())?;
        ensure!(laws.is_empty(), "law of arity {n}: {}", laws[0]);
    }
    Ok(format!("no nontrivial law of arity <= {max}"))
}

fn c1_generator_identities() -> Outcome {
    let g = generators();
    let (x0, x1, x2) = (&g.x0, &g.x1, &g.x2);
    ensure!(x0.shift(Side::Right) == *x1, "s1(x0) != x1");
    ensure!(x1.shift(Side::Right) == x1.conj(x0), "s1(x1) != x1^x0");
    ensure!(
        x0.shift(Side::Left) == x0.multiply(&x1.inverse()).conj(&x0.inverse()),
        "s0(x0) formula"
    );
    ensure!(
        x1.shift(Side::Left) == x1.multiply(&x2.inverse()).conj(&x0.multiply(x1).inverse()),
        "s0(x1) formula"
    );
    let mut sample = vec![x0.clone(), x1.clone()];
    sample.extend(randoms(100));
    for h in &sample {
        ensure!(
            h.reflect().shift(Side::Right).reflect() == h.shift(Side::Left),
            "R s1 R != s0 on {h}"
        );
    }
    Ok("four shift formulas and R s1 R = s0 on 102 elements".into())
}

fn c2_abelianization() -> Outcome {
    let g = generators();
    ensure!(
        (g.x0.abelianize().m, g.x0.abelianize().n) == (1, 0),
        "ab(x0)"
    );
    ensure!(
        (g.x1.abelianize().m, g.x1.abelianize().n) == (0, 1),
        "ab(x1)"
    );
    let sample = randoms(1001);
    for pair in sample.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        ensure!(
            a.multiply(b).abelianize() == a.abelianize() + b.abelianize(),
            "ab not additive at {a}, {b}"
        );
        let (m, n) = (a.abelianize().m, a.abelianize().n);
        let l = a.shift(Side::Left).abelianize();
        let r = a.shift(Side::Right).abelianize();
        ensure!((l.m, l.n) == (m, -m), "s0 image at {a}");
        ensure!((r.m, r.n) == (0, m + n), "s1 image at {a}");
    }
    Ok("additive, shift formulas on 1000 elements".into())
}

fn c3_five_variable_element() -> Outcome {
    let g = generators();
    let c0 = g.x0.commutator(&g.x1);
    ensure!(c0 == g.c0, "c0 != [x0,x1]");
    ensure!(
        c0.domain().leaf_count() == 5 && c0.range().leaf_count() == 5,
        "c0 has {} leaves",
        c0.domain().leaf_count()
    );
    ensure!(g.c1 == c0.commutator(&c0.shift(Side::Right)), "c1 formula");
    ensure!(
        c0.in_commutator_subgroup() && c0.fixes_ends_pl(),
        "c0 not in F'"
    );
    for h in randoms(1000) {
        ensure!(
            h.in_commutator_subgroup() == h.fixes_ends_pl(),
            "F' tests disagree on {h}"
        );
    }
    Ok("c0 has 5 leaves, c1 exact, F' tests agree on 1000 elements".into())
}

fn c4_pl_consistency() -> Outcome {
    let sample = randoms(501);
    for pair in sample.windows(2) {
        let (g, h) = (&pair[0], &pair[1]);
        ensure!(
            g.multiply(h).to_pl() == h.to_pl().compose(&g.to_pl()),
            "to_pl(gh) != to_pl(h) o to_pl(g) at {g}, {h}"
        );
        ensure!(
            g.to_pl().to_element().map_err(|e| e.to_string())? == *g,
            "from_pl(to_pl(g)) != g at {g}"
        );
    }
    Ok("500 products and round trips exact".into())
}

fn c5_pre_sl2() -> Outcome {
    let m = zoo::pre_sl2();
    let laws = no_laws_up_to(&m, 6)?;
    ensure!(m.is_simply_perfect(), "not simply perfect");
    let zero = m.index_of("0").ok_or("no element 0")?;
    for u in 0..m.size() {
        for v in 0..m.size() {
            if u != v && u != zero && v != zero {
                ensure!(
                    m.centralizer(&[u, v], zero) == vec![zero],
                    "centralizer of {u},{v}"
                );
            }
        }
    }
    Ok(format!("{laws}, simply perfect, centralizers trivial"))
}

fn c6_a5() -> Outcome {
    let m = zoo::a5_commutator();
    let laws = no_laws_up_to(&m, 4)?;
    let (group, perms) = zoo::a5_group();
    let t = Tree::caret();
    let mut report = Vec::new();
    let mut ok = true;
    for (label, cycle_type, expected) in [
        ("5-cycle", vec![5], 12),
        ("3-cycle", vec![3], 15),
        ("2x2-cycle", vec![2, 2], 30),
    ] {
        let class: Vec<usize> = (0..group.order())
            .filter(|&u| perms[u].cycle_type() == cycle_type)
            .collect();
        ensure!(!class.is_empty(), "no {label} in A5");
        for u in class {
            let size = m
                .restricted_image(&t, &[None, Some(u)])
                .map_err(|e| e.to_string())?
                .len();
            if size != expected {
                ok = false;
                report.push(format!("{label}: {size} (expected {expected})"));
                break;
            }
        }
    }
    ensure!(ok, "{laws}; image sizes differ: {}", report.join(", "));
    Ok(format!("{laws}; image sizes 12/15/30"))
}

fn c7_s4() -> Outcome {
    let m = zoo::s4_example();
    let [one, a, b, c] = [0, 1, 2, 3];
    ensure!(m.right_identity() == Some(one), "no right identity");
    ensure!(m.left_identity().is_none(), "unexpected left identity");
    ensure!(m.associativity_counterexample().is_some(), "associative");
    let left: Tree = "((. .) .)".parse().unwrap();
    let right: Tree = "(. (. .))".parse().unwrap();
    for x in 0..4 {
        for y in 0..4 {
            ensure!(common::eval_tree(&m, &left, &[x, y, a]) == b, "[[x,y],a]");
            ensure!(common::eval_tree(&m, &right, &[x, y, a]) == c, "[x,[y,a]]");
        }
    }
    let x1_law = Law::of_element(&generators().x1);
    let checked = common::tuples(4, 4)
        .filter(|t| {
            common::eval_tree(&m, x1_law.lhs(), t) == common::eval_tree(&m, x1_law.rhs(), t)
        })
        .count();
    ensure!(checked == 256, "x1-law fails on {} tuples", 256 - checked);
    ensure!(m.is_simply_perfect(), "not simply perfect");
    ensure!(!m.satisfies(&five_variable_law()), "FVL holds");
    match assoc_status(&m, &Default::default()) {
        AssocStatus::Unknown { laws, .. }
            if laws.contains(&x1_law) || laws.contains(&x1_law.reversed()) => {}
        other => return Err(format!("status {other}")),
    }
    Ok("identities, counterexample, x1-law on 256 tuples, FVL fails, Unknown".into())
}

fn c8_octonions() -> Outcome {
    let m = zoo::octonion_unit_loop();
    ensure!(m.is_latin_square(), "not a Latin square");
    ensure!(m.two_sided_identity().is_some(), "no identity");
    ensure!(!m.is_associative(), "associative");
    let status = assoc_status(&m, &Default::default());
    ensure!(
        matches!(status, AssocStatus::TrivialCertified { .. }),
        "status {status}"
    );
    let laws = no_laws_up_to(&m, 5)?;
    Ok(format!("loop, TrivialCertified, {laws}"))
}

fn c9_solvability() -> Outcome {
    let m = zoo::s3_commutator();
    let sizes: Vec<usize> = m.derived_chain().iter().map(Vec::len).collect();
    ensure!(sizes == [6, 3, 1], "derived chain {sizes:?}");
    let w = match assoc_status(&m, &Default::default()) {
        AssocStatus::FullF {
            reason: FullReason::Solvable(w),
        } => w,
        other => return Err(format!("S3 status {other}")),
    };
    ensure!(
        w.depth == 2 && w.tree == Tree::complete(2),
        "witness {}",
        w.tree
    );
    let mut rng = rng();
    for _ in 0..1000 {
        let args: Vec<usize> = (0..4).map(|_| rng.gen_range(0..m.size())).collect();
        ensure!(
            common::eval_tree(&m, &w.tree, &args) == w.zero,
            "witness not constant at {args:?}"
        );
    }
    let z4 = assoc_status(&zoo::z4(), &Default::default());
    ensure!(
        z4 == AssocStatus::FullF {
            reason: FullReason::Associative
        },
        "Z4 status {z4}"
    );
    for (name, m) in zoo::all().into_iter().filter(|(_, m)| m.size() <= 6) {
        ensure!(
            m.is_solvable().is_some() == common::has_constant_tree(&m, 6),
            "{name}: derived chain and constant-tree search disagree"
        );
    }
    Ok("S3 chain [6,3,1] with constant witness, Z4 associative, brute force agrees".into())
}

fn c10_example_suite() -> Outcome {
    let v = VarietyPresentation::of_elements([&generators().x1]);
    let r: Tree = "((. .) (. .))".parse().unwrap();
    let (r1, r2) = (r.expand(4).unwrap(), r.expand(2).unwrap());
    let d = |p: &Tree, q: &Tree| derivable(p, q, &v).map_err(|e| e.to_string());
    ensure!(d(&r1, &r2)?.is_none(), "r1 derives r2");
    for i in 1..=r1.leaf_count() {
        let (p, q) = (r1.expand(i).unwrap(), r2.expand(i).unwrap());
        ensure!(d(&p, &q)?.is_none(), "derivable after expanding leaf {i}");
    }
    let ev = eventually_derivable(&r1, &r2, &v, 3, &DeriveOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(ev == EventualDerivation::FailsAllUpTo(3), "eventual {ev:?}");
    let g = reduce(&r1, &r2).map_err(|e| e.to_string())?;
    ensure!(
        !g.stabilizes_half_powers(),
        "<r1,r2> stabilizes half-powers"
    );
    let x1 = generators().x1.clone();
    ensure!(x1.stabilizes_half_powers(), "x1 fails the stabilizer test");
    let closure = closure_generate(&[x1], 3);
    ensure!(
        closure.iter().all(FElement::stabilizes_half_powers),
        "closure leaves the stabilizer"
    );
    Ok(format!(
        "not derivable at 5 and 6 leaves, fails up to 3 carets, {} closure elements stabilize",
        closure.len()
    ))
}

fn c11_normal_classification() -> Outcome {
    let mut rng = rng();
    for _ in 0..1000 {
        let g = random_element(&mut rng, RANDOM_WORD_LEN);
        let (m, n) = (rng.gen_range(0..8u64), rng.gen_range(0..8u64));
        let spec = NormalSubgroupSpec::new(m, n);
        let ab = g.abelianize();
        let expected = if spec.is_trivial() {
            g.is_identity()
        } else {
            common::in_lattice(ab.m, ab.n, m as i64, n as i64)
        };
        ensure!(g.normal_member(spec) == expected, "{g} in ({m},{n})");
        let c = g.commutator(&random_element(&mut rng, RANDOM_WORD_LEN));
        if !spec.is_trivial() {
            ensure!(c.normal_member(spec), "commutator {c} not in ({m},{n})");
        }
    }
    let x0 = &generators().x0;
    ensure!(
        x0.normal_member(NormalSubgroupSpec::new(1, 1)),
        "x0 not in (1,1)"
    );
    ensure!(
        !x0.normal_member(NormalSubgroupSpec::new(2, 1)),
        "x0 in (2,1)"
    );
    Ok("1000 pairs agree with lattice search, F' in every nonzero spec".into())
}

fn c12_rewriting_sanity() -> Outcome {
    let v = VarietyPresentation::new(vec![Law::associative()]);
    let mut sizes = Vec::new();
    for n in 1..=6 {
        let all = enumerate_trees(n).map_err(|e| e.to_string())?;
        let class = derivability_class(&all[0], &v);
        ensure!(
            class.len() == all.len(),
            "n={n}: class {} of {}",
            class.len(),
            all.len()
        );
        sizes.push(class.len());
    }
    ensure!(sizes == [1, 1, 2, 5, 14, 42], "class sizes {sizes:?}");
    Ok(format!("single class, sizes {sizes:?}"))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const CRITERIA: [Criterion; 12] = [
    (
        1,
        "generator identities",
        Duration::from_secs(1),
        c1_generator_identities,
    ),
    (
        2,
        "abelianization",
        Duration::from_secs(5),
        c2_abelianization,
    ),
    (
        3,
        "five-variable-law element",
        Duration::from_secs(5),
        c3_five_variable_element,
    ),
    (
        4,
        "PL-model consistency",
        Duration::from_secs(10),
        c4_pl_consistency,
    ),
    (5, "pre-sl2 law slice", Duration::from_secs(60), c5_pre_sl2),
    (6, "A5 commutator magma", Duration::from_secs(600), c6_a5),
    (7, "S(4)", Duration::from_secs(10), c7_s4),
    (
        8,
        "octonion unit loop",
        Duration::from_secs(60),
        c8_octonions,
    ),
    (9, "solvability", Duration::from_secs(30), c9_solvability),
    (
        10,
        "r1 versus r2 under the x1-law",
        Duration::from_secs(30),
        c10_example_suite,
    ),
    (
        11,
        "normal classification",
        Duration::from_secs(10),
        c11_normal_classification,
    ),
    (
        12,
        "rewriting sanity",
        Duration::from_secs(10),
        c12_rewriting_sanity,
    ),
];

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in CRITERIA {
        let start = Instant::now();
        let result =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > limit => Err(format!(
                "took {:.2}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )),
            other => other,
        };
        match result {
            Ok(detail) => println!(
                "PASS criterion {id} ({name}, {:.2}s): {detail}",
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {id} ({name}, {:.2}s): {detail}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
