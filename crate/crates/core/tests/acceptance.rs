//! One line per acceptance criterion; exits nonzero when any fails.

use std::process::ExitCode;
use std::time::Instant;

use motdeg_core::datasets;
use motdeg_core::random::{self, derive_seed, rng};
use motdeg_core::ring::{RingElement, SbElement, Verdict};
use motdeg_core::series::{morse_reduce, TruncatedSeries};
use motdeg_core::snc::{self, json as snc_json};
use motdeg_core::verify::{self, SuiteResult};
use num_bigint::BigInt;
use num_rational::BigRational;

const SEED: u64 = 20_241_014;

type Outcome = Result<String, String>;

fn suite(name: &str, iters: usize) -> Outcome {
    let r: SuiteResult = verify::run_suite(name, SEED, iters).expect("known suite");
    match (&r.first_failure, r.cases >= iters) {
        (None, true) => Ok(format!("{} instances, 0 failures", r.cases)),
        (None, false) => Err(format!("only {} of {iters} instances generated", r.cases)),
        (Some((seed, m)), _) => Err(format!("{} of {} failed; first at seed {seed}: {m}", r.failures, r.cases)),
    }
}

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn quartic() -> Outcome {
    let m = snc_json::valid_model_from_json(&datasets::load("quartic_threefold")?).map_err(|e| e.to_string())?;
    let t = &m.symbols;
    let vol = t.res_full(&m.vol().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check(t.congruent_mod_l(&vol, &RingElement::symbol("X0")).unwrap(), "Vol not congruent to [X0] mod L")?;
    check(t.sb_of_label("X0").unwrap() != SbElement::point(), "sb(X0) is POINT")?;
    let v = t.verdict(&vol).unwrap();
    check(v == Verdict::Obstructed { witness: SbElement::label("X0") }, &format!("verdict {v:?}"))?;
    Ok(format!("Vol = {vol} (mod L: {}), Obstructed([X0])", t.reduce_mod_l(&vol).unwrap()))
}

fn artin_mumford() -> Outcome {
    let inp = snc_json::odp_from_json(&datasets::load("artin_mumford")?).map_err(|e| e.to_string())?;
    check(inp.nodes.len() == 10, "expected ten nodes")?;
    for n in &inp.nodes {
        for q in [&n.fiber_quadric, &n.model_quadric] {
            check(inp.symbols.reduce_mod_l(q).unwrap() == SbElement::point(), "quadric not congruent to POINT")?;
        }
    }
    let m = snc::odp_semistable(&inp).map_err(|e| e.to_string())?;
    m.ensure_valid().map_err(|e| e.to_string())?;
    let t = &m.symbols;
    let vol = m.vol().unwrap();
    check(t.congruent_mod_l(&vol, &RingElement::symbol("AM")).unwrap(), "Vol not congruent to [AM] mod L")?;
    let v = t.verdict(&vol).unwrap();
    check(v.is_obstructed(), &format!("verdict {v:?}"))?;
    Ok(format!("{} components, Vol mod L = {}, obstructed", m.components.len(), t.reduce_mod_l(&vol).unwrap()))
}

fn mu2() -> Outcome {
    let m = snc_json::valid_model_from_json(&datasets::load("mu2_point")?).map_err(|e| e.to_string())?;
    let mr = m.mr().unwrap();
    check(mr == RingElement::one(), &format!("MR = {mr}"))?;
    let t = &m.symbols;
    let tt = t.mul(&RingElement::symbol("T"), &RingElement::symbol("T")).unwrap();
    let q = t.quotient_mu(&tt).unwrap();
    check(q == RingElement::integer(2), &format!("quotient of T*T = {q}"))?;
    let qt = t.quotient_mu(&RingElement::symbol("T")).unwrap();
    let sq = t.mul(&qt, &qt).unwrap();
    check(sq != q, "quotient map multiplicative on this example")?;
    Ok(format!("MR = 1, quotient(T*T) = 2, quotient(T)^2 = {sq}"))
}

fn reducible() -> Outcome {
    let base = derive_seed(SEED, 8);
    let n = 200;
    for i in 0..n {
        let rep = snc::reducible_odp_report(&random::reducible_tree(&mut rng(derive_seed(base, i)))).map_err(|e| e.to_string())?;
        check(rep.hypothesis && rep.consistent, &format!("tree {i} rejected: {:?}", rep.failures))?;
        check(rep.euler - rep.singular_count as i64 == 1, "chi - N != 1")?;
        check(rep.singular_count == 0 && rep.tree, "N != 0 or not a tree")?;
    }
    let neg = snc::reducible_odp_report(&random::reducible_triangle()).map_err(|e| e.to_string())?;
    check(!neg.consistent && !neg.tree && neg.euler == 0, "three-cycle not rejected")?;
    Ok(format!("{n} trees accepted, three-cycle rejected ({})", neg.message))
}

fn morse() -> Outcome {
    let line = suite("morse_round_trip", 200)?;
    let z = |i| TruncatedSeries::var(3, 8, i);
    let one = TruncatedSeries::one(3, 8);
    let sum = |xs: &[TruncatedSeries]| xs.iter().fold(TruncatedSeries::zero(3, 8), |a, b| a.add(b).unwrap());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));

    // z0² + z1² + z0² z2: z0 ↦ z0 (1 + z2)^{-1/2}
    let f = sum(&[z(0).pow(2), z(1).pow(2), z(0).pow(2).mul(&z(2)).unwrap()]);
    let m = morse_reduce(&f, 1, 8).map_err(|e| e.to_string())?;
    check(m.change.apply(&f).unwrap() == sum(&[z(0).pow(2), z(1).pow(2)]), "first example: residual")?;
    let want = z(0).mul(&one.add(&z(2)).unwrap().sqrt_unit().unwrap().inverse_unit().unwrap()).unwrap();
    check(m.change.images()[0] == want && m.change.images()[1] == z(1), "first example: change")?;

    // z0² + z1² + z0 z1 z2: complete the square, then z1 ↦ z1 (1 - z2²/4)^{-1/2}
    let f = sum(&[z(0).pow(2), z(1).pow(2), z(0).mul(&z(1)).unwrap().mul(&z(2)).unwrap()]);
    let m = morse_reduce(&f, 1, 8).map_err(|e| e.to_string())?;
    check(m.change.apply(&f).unwrap() == sum(&[z(0).pow(2), z(1).pow(2)]), "second example: residual")?;
    let quarter = &half * &half;
    let sigma = one.sub(&z(2).pow(2).scale(&quarter)).unwrap().sqrt_unit().unwrap().inverse_unit().unwrap();
    let img1 = z(1).mul(&sigma).unwrap();
    let img0 = z(0).sub(&img1.mul(&z(2)).unwrap().scale(&half)).unwrap();
    check(m.change.images()[1] == img1 && m.change.images()[0] == img0, "second example: change")?;
    Ok(format!("{line}; both worked examples exact"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quartic threefold volume and verdict", quartic),
        ("Artin-Mumford semistable model", artin_mumford),
        ("mu_2 reduction and quotient", mu2),
        ("Euler counts of star subdivisions", || suite("euler_lemma", 200)),
        ("log volume under star subdivision", || suite("subdivision_invariance", 500)),
        ("inclusion-exclusion and MR mod L", || suite("inclusion_exclusion", 500)),
        ("dual complex formula", || suite("dual_formula", 500)),
        ("reducible fibers with nodes", reducible),
        ("Morse normal form", morse),
        ("Larsen-Lunts reduction is multiplicative", || suite("larsen_lunts", 1000)),
    ];
    let mut failed = 0;
    for (i, (what, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match out {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {}: {what}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!("{} of 10 criteria passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
