//! Acceptance criteria, one line per criterion. Runs with a plain `main` so
//! the verdict lines are printed even when output capture is on.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ra_kit::corpus::{b9_algebra, b9_representation, left_linear, point_algebra};
use ra_kit::*;

/// Number of table mutations checked against the point algebra.
const MUTATIONS: usize = 20;
/// Random left-linear networks compared against the refinement oracle.
const LEFT_LINEAR_SAMPLES: usize = 1000;
/// Random size-4/5 structures for the bound check.
const BOUND_SAMPLES: usize = 1000;
/// Atomic networks pushed through the structure round trip.
const ROUND_TRIPS: usize = 1000;
const GROW_TARGET: usize = 30;
const GROW_SEEDS: u64 = 10;
const WITNESS_LIMIT: usize = 6;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("1 algebra validation and mutations", ac1),
        ("2 B9 network is consistent but unrepresentable", ac2),
        ("3 refine_solve matches brute force", ac3),
        ("4 amalgamation verdicts", ac4),
        ("5 bounds define the atomic structures", ac5),
        ("6 grown limits are atomic and acyclic", ac6),
        ("7 structures, networks and homomorphisms agree", ac7),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ac1() -> Result<String, String> {
    let point = point_algebra();
    let ll = left_linear();
    for ra in [&point, &ll] {
        let report = ra.validate();
        ensure!(report.is_clean(), "{} has violations: {:?}", ra.name(), report.laws());
    }
    let k = point.k();
    let mut candidates = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for bits in 0..(1u64 << k) {
                let v = Element::from_bits(bits);
                if v != point.compose_atoms(a, b) {
                    candidates.push((a, b, v));
                }
            }
        }
    }
    for i in 0..MUTATIONS {
        let (a, b, v) = candidates[i * candidates.len() / MUTATIONS];
        let mutant = point.with_entry(a, b, v);
        let report = mutant.validate();
        ensure!(!report.violations.is_empty(), "mutation ({a},{b}) := {v:?} went unnoticed");
        for viol in &report.violations {
            ensure!(law_fails_at(&mutant, viol.law, &viol.witness), "bogus witness {viol:?}");
        }
        ensure!(
            report.violations.iter().any(|v| v.witness.len() == 3),
            "mutation ({a},{b}) has no triple witness"
        );
    }
    Ok(format!("{MUTATIONS} of {} mutations caught with verified witnesses", candidates.len()))
}

fn ac2() -> Result<String, String> {
    let cr = b9_representation();
    let bad = cr.validate();
    ensure!(bad.is_empty(), "representation invalid: {}", bad.len());
    let ra = derive_algebra(&cr).map_err(|e| e.to_string())?;
    ensure!(ra.validate().is_clean(), "derived algebra violates laws");
    ensure!(ra.to_text() == b9_algebra().to_text(), "derived table differs from the stored one");
    let net = Network::parse(&ra, ra_kit::corpus::B9_N_NET).map_err(|e| e.to_string())?;
    let pc = path_consistency(&ra, &net).ok_or("path consistency emptied a label")?;
    ensure!(pc.labels() == net.labels(), "path consistency changed N");
    ensure!(is_atomic(&ra, &net), "N is not atomic");
    ensure!(oracle_atomic(&ra, &atom_matrix(&net), net.len()), "oracle rejects N");
    let found = model_check(&cr, &net).map_err(|e| e.to_string())?;
    ensure!(found.is_none(), "model check found {found:?}");
    ensure!(!oracle_network_satisfiable(&cr, &net), "brute force found an assignment");
    Ok("PC fixed point, atomic, no assignment into the 7-point domain".into())
}

fn atom_matrix(net: &Network) -> Vec<usize> {
    net.labels().iter().map(|l| l.first_atom().expect("atom label")).collect()
}

fn compare_solve(ra: &RelationAlgebra, atomic: &[Vec<usize>], net: &Network) -> Result<bool, String> {
    let expect = oracle_satisfiable(atomic, net);
    match refine_solve(ra, net) {
        Some(sol) => {
            ensure!(expect, "solver found a solution to an unsatisfiable network\n{}", net.to_text(ra));
            ensure!(sol.refines(net), "solution does not refine the input");
            ensure!(
                sol.labels().iter().all(|l| l.is_atom()) && oracle_atomic(ra, &atom_matrix(&sol), sol.len()),
                "solution is not atomic"
            );
        }
        None => ensure!(!expect, "solver missed a solution\n{}", net.to_text(ra)),
    }
    Ok(expect)
}

fn ac3() -> Result<String, String> {
    let pa = point_algebra();
    let full = Element::full(pa.k());
    let mut sat = 0usize;
    let mut total = 0usize;
    for n in 0..=2usize {
        let atomic = all_atomic_labelings(&pa, n);
        let cells = n * n;
        for code in 0..(1u64 << (3 * cells)) {
            let labels = (0..cells).map(|i| Element::from_bits((code >> (3 * i)) & 7)).collect();
            let net = Network::from_labels("n", Network::default_nodes(n), labels);
            sat += compare_solve(&pa, &atomic, &net)? as usize;
            total += 1;
        }
    }
    // n = 3: every combination of off-diagonal labels; each loop is Id, 1,
    // or a label without eq
    let atomic = all_atomic_labelings(&pa, 3);
    let loop_choices = [pa.identity(), full, pa.complement(pa.identity())];
    let off: Vec<(usize, usize)> = (0..3).flat_map(|x| (0..3).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    for loops in 0..27usize {
        for code in 0..(1u64 << 18) {
            let mut net = Network::unconstrained(&pa, "n", Network::default_nodes(3));
            for x in 0..3 {
                net.set_label(x, x, loop_choices[loops / 3usize.pow(x as u32) % 3]);
            }
            for (i, &(x, y)) in off.iter().enumerate() {
                net.set_label(x, y, Element::from_bits((code >> (3 * i)) & 7));
            }
            sat += compare_solve(&pa, &atomic, &net)? as usize;
            total += 1;
        }
    }
    let ll = left_linear();
    let atomic: Vec<Vec<Vec<usize>>> = (0..=4).map(|n| all_atomic_labelings(&ll, n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ll_sat = 0;
    for _ in 0..LEFT_LINEAR_SAMPLES {
        let n = rng.gen_range(1..=4);
        let labels = (0..n * n)
            .map(|_| if rng.gen_bool(0.5) { ll.top() } else { Element::from_bits(rng.gen_range(1..16)) })
            .collect();
        let net = Network::from_labels("n", Network::default_nodes(n), labels);
        ll_sat += compare_solve(&ll, &atomic[n], &net)? as usize;
    }
    ensure!(ll_sat > 0 && ll_sat < LEFT_LINEAR_SAMPLES, "degenerate sample: {ll_sat} satisfiable");
    Ok(format!(
        "{total} point networks ({sat} satisfiable), {LEFT_LINEAR_SAMPLES} left-linear ({ll_sat} satisfiable)"
    ))
}

fn amalgam_blocked(ra: &RelationAlgebra, d: &AmalgamationDiagram) -> bool {
    (0..ra.k()).all(|a| {
        let net = d.amalgam(ra, a);
        !oracle_atomic(ra, &atom_matrix(&net), net.len())
    })
}

fn ac4() -> Result<String, String> {
    let single = |ra: &RelationAlgebra| {
        decide_amalgamation_property(ra, &DecideOptions { threads: Some(1), ..Default::default() })
    };
    let multi = |ra: &RelationAlgebra| {
        decide_amalgamation_property(ra, &DecideOptions { threads: Some(4), ..Default::default() })
    };
    let pa = point_algebra();
    let yes = single(&pa);
    ensure!(matches!(yes, ApVerdict::Yes { .. }), "point algebra: {yes:?}");
    ensure!(multi(&pa) == yes, "point verdict depends on thread count");
    let ll = left_linear();
    let no = single(&ll);
    let ApVerdict::No { witness, .. } = &no else {
        return Err(format!("left-linear: {no:?}"));
    };
    ensure!(witness.size() <= WITNESS_LIMIT, "witness has {} nodes", witness.size());
    for (part, net) in [("base", witness.base()), ("left", witness.left()), ("right", witness.right())] {
        ensure!(oracle_atomic(&ll, &atom_matrix(net), net.len()), "witness {part} not atomic");
    }
    ensure!(amalgam_blocked(&ll, witness), "witness can be amalgamated");
    ensure!(multi(&ll) == no, "left-linear verdict depends on thread count");
    let ApVerdict::Yes { diagrams, .. } = yes else { unreachable!() };
    Ok(format!("point YES over {diagrams} diagrams, left-linear NO with {}-node witness", witness.size()))
}

fn structure(n: usize, holds: Vec<Element>) -> LabeledStructure {
    LabeledStructure::from_holds(Network::default_nodes(n), holds)
}

fn ac5() -> Result<String, String> {
    let pa = point_algebra();
    let bs = generate_bounds(&pa).map_err(|e| e.to_string())?;
    let agree = |s: &LabeledStructure| check_membership(&bs, s) == is_atomic(&pa, &struct_to_net(&pa, s));
    let mut checked = 0usize;
    let mut atomic = 0usize;
    for n in 0..=2usize {
        for code in 0..(1u64 << (3 * n * n)) {
            let s = structure(n, (0..n * n).map(|i| Element::from_bits((code >> (3 * i)) & 7)).collect());
            ensure!(agree(&s), "disagreement on\n{}", s.to_text(&pa, "s"));
            checked += 1;
        }
    }
    for code in 0..3u64.pow(9) {
        let mut c = code;
        let holds = (0..9)
            .map(|_| {
                let a = (c % 3) as usize;
                c /= 3;
                Element::atom(a)
            })
            .collect();
        let s = structure(3, holds);
        let member = check_membership(&bs, &s);
        ensure!(agree(&s), "disagreement on\n{}", s.to_text(&pa, "s"));
        let cells: Vec<usize> = (0..9).map(|i| s.holds(i / 3, i % 3).first_atom().unwrap()).collect();
        ensure!(member == oracle_atomic(&pa, &cells, 3), "bounds disagree with the atomic oracle");
        atomic += member as usize;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..BOUND_SAMPLES {
        let n = 4 + (i % 2);
        let s = if rng.gen_bool(0.5) {
            // perturb an atomic network so both verdicts show up
            let net = grow_limit(&pa, n, rng.gen(), &GrowOptions::default()).map_err(|e| e.to_string())?;
            let mut s = net_to_struct(&pa, &net);
            if rng.gen_bool(0.5) {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                s.set_holds(x, y, Element::from_bits(rng.gen_range(0..8)));
            }
            s
        } else {
            structure(
                n,
                (0..n * n)
                    .map(|_| if rng.gen_bool(0.9) { Element::atom(rng.gen_range(0..3)) } else { Element::from_bits(rng.gen_range(0..8)) })
                    .collect(),
            )
        };
        ensure!(agree(&s), "disagreement on\n{}", s.to_text(&pa, "s"));
        checked += 1;
    }
    Ok(format!(
        "{checked} structures ({atomic} atomic complete 3-element ones), F1/F2/F3 = {}/{}/{}",
        bs.count(Family::F1),
        bs.count(Family::F2),
        bs.count(Family::F3)
    ))
}

fn ac6() -> Result<String, String> {
    let pa = point_algebra();
    let lt = pa.parse_element("lt").map_err(|e| e.to_string())?;
    for seed in 0..GROW_SEEDS {
        let net = grow_limit(&pa, GROW_TARGET, seed, &GrowOptions::default()).map_err(|e| e.to_string())?;
        ensure!(net.len() == GROW_TARGET, "seed {seed}: {} nodes", net.len());
        for i in 1..=GROW_TARGET {
            let keep: Vec<usize> = (0..i).collect();
            let prefix = net.induced(&keep);
            ensure!(oracle_atomic(&pa, &atom_matrix(&prefix), i), "seed {seed}: prefix {i} not atomic");
        }
        ensure!(strict_edges_acyclic(&net, lt), "seed {seed}: lt has a cycle");
    }
    Ok(format!("{GROW_SEEDS} seeds, {GROW_TARGET} nodes, all prefixes atomic"))
}

fn ac7() -> Result<String, String> {
    let algebras = [point_algebra(), left_linear(), b9_algebra()];
    let mut pool: Vec<(usize, Network)> = Vec::new();
    for (i, ra) in algebras.iter().enumerate() {
        for n in 0..=4 {
            pool.extend(enumerate_atomic_networks(ra, n).into_iter().map(|net| (i, net)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..ROUND_TRIPS {
        let (i, net) = if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..2);
            let n = rng.gen_range(1..=12);
            (i, grow_limit(&algebras[i], n, rng.gen(), &GrowOptions::default()).map_err(|e| e.to_string())?)
        } else {
            pool[rng.gen_range(0..pool.len())].clone()
        };
        let ra = &algebras[i];
        ensure!(oracle_atomic(ra, &atom_matrix(&net), net.len()), "sample is not atomic");
        let back = struct_to_net(ra, &net_to_struct(ra, &net));
        ensure!(back.labels() == net.labels(), "round trip changed\n{}", net.to_text(ra));
    }
    let cr = b9_representation();
    let ra = derive_algebra(&cr).map_err(|e| e.to_string())?;
    let rel = relation_table(&cr);
    let d = cr.domain_size();
    let mut checked = 0usize;
    let mut homs = 0usize;
    let mut compare = |s: LabeledStructure| -> Result<(), String> {
        let net = struct_to_net(&ra, &s);
        let mc = model_check(&cr, &net).map_err(|e| e.to_string())?.is_some();
        let hom = oracle_homomorphism(&rel, d, &s);
        ensure!(mc == hom, "model check {mc}, homomorphism {hom} on\n{}", s.to_text(&ra, "s"));
        checked += 1;
        homs += hom as usize;
        Ok(())
    };
    for n in 0..=2usize {
        for code in 0..(1u64 << (4 * n * n)) {
            compare(structure(n, (0..n * n).map(|i| Element::from_bits((code >> (4 * i)) & 15)).collect()))?;
        }
    }
    // three elements: every pair holds at most one atom
    for code in 0..5u64.pow(9) {
        let mut c = code;
        let holds = (0..9)
            .map(|_| {
                let a = (c % 5) as usize;
                c /= 5;
                if a == 0 { Element::ZERO } else { Element::atom(a - 1) }
            })
            .collect();
        compare(structure(3, holds))?;
    }
    Ok(format!("{ROUND_TRIPS} round trips, {checked} structures ({homs} map into B9)"))
}
