//! Randomized property suites. Instance `i` of a suite draws from
//! `derive_seed(derive_seed(master, suite), i)`, so results depend only on the
//! master seed and the iteration count.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde_json::Value;

use crate::datasets;
use crate::fan::{self, LogFan};
use crate::random::{self, derive_seed, rng, ModelShape};
use crate::ring::{LPoly, RingElement, SbElement, Verdict};
use crate::series::{morse_reduce, squarefree_kernel, QuadraticForm};
use crate::snc::{self, json as snc_json};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// seed and message of the first failing instance
    pub first_failure: Option<(u64, String)>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed(),
            "first_failure": self.first_failure.as_ref().map(|(s, m)| serde_json::json!({"seed": s, "message": m})),
        })
    }
}

type Check = fn(u64) -> Result<usize, String>;

/// Runs `check` on derived seeds until `iters` cases have been counted. A
/// check returns how many cases its instance contributed (0 to skip).
fn run(name: &'static str, id: u64, master: u64, iters: usize, check: Check) -> SuiteResult {
    let base = derive_seed(master, id);
    let mut out = SuiteResult { name, cases: 0, failures: 0, first_failure: None };
    let mut i = 0u64;
    // instances that contribute nothing are skipped; cap the attempts
    while out.cases < iters && i < 20 * iters as u64 + 100 {
        let seed = derive_seed(base, i);
        i += 1;
        match check(seed) {
            Ok(n) => out.cases += n,
            Err(m) => {
                out.cases += 1;
                out.failures += 1;
                out.first_failure.get_or_insert((seed, m));
            }
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

pub fn ring_axioms(seed: u64) -> Result<usize, String> {
    let t = random::table();
    let mut r = rng(seed);
    let (a, b, c) = (random::element(&mut r, 4), random::element(&mut r, 4), random::element(&mut r, 4));
    let ab = t.mul(&a, &b).map_err(e)?;
    ensure(ab == t.mul(&b, &a).map_err(e)?, || format!("a*b != b*a for a = {a}, b = {b}"))?;
    ensure(t.mul(&ab, &c).map_err(e)? == t.mul(&a, &t.mul(&b, &c).map_err(e)?).map_err(e)?, || "associativity".into())?;
    let lhs = t.mul(&a, &(&b + &c)).map_err(e)?;
    ensure(lhs == &ab + &t.mul(&a, &c).map_err(e)?, || "distributivity".into())?;
    ensure(t.mul(&a, &RingElement::one()).map_err(e)? == a, || "unit".into())?;
    ensure((&(&a + &b) - &b) == a, || "additive inverse".into())?;
    Ok(1)
}

pub fn larsen_lunts(seed: u64) -> Result<usize, String> {
    let t = random::table();
    let mut r = rng(seed);
    let (a, b) = (random::element(&mut r, 4), random::element(&mut r, 4));
    let red = |x: &RingElement| t.reduce_mod_l(x).map_err(e);
    let prod = red(&t.mul(&a, &b).map_err(e)?)?;
    ensure(prod == &red(&a)? * &red(&b)?, || format!("reduction not multiplicative on {a} and {b}"))?;
    ensure(red(&(&a + &b))? == &red(&a)? + &red(&b)?, || "reduction not additive".into())?;
    ensure(red(&a.mul_poly(&LPoly::l()))?.is_zero(), || "L does not reduce to 0".into())?;
    Ok(1)
}

pub fn inclusion_exclusion(seed: u64) -> Result<usize, String> {
    let m = random::snc_model(&mut rng(seed), ModelShape::default());
    let open = m.open_sum();
    ensure(m.inclusion_exclusion().map_err(e)? == open, || "alternating closed-stratum sum differs from the open sum".into())?;
    let mr = m.mr().map_err(e)?;
    ensure(m.symbols.congruent_mod_l(&mr, &open).map_err(e)?, || format!("MR = {mr} not congruent to {open} mod L"))?;
    Ok(1)
}

pub fn dual_formula(seed: u64) -> Result<usize, String> {
    let m = random::dual_model(&mut rng(seed));
    let t = &m.symbols;
    let vol = t.reduce_mod_l(&m.vol().map_err(e)?).map_err(e)?;
    let mut rhs = RingElement::integer(snc::dual_complex(&m).euler() - m.components.len() as i64);
    for c in &m.components {
        rhs.add_assign(&m.closed_stratum_class(&[c.id.clone()].into()).map_err(e)?);
    }
    let rhs = t.reduce_mod_l(&rhs).map_err(e)?;
    ensure(vol == rhs, || format!("Vol reduces to {vol}, formula gives {rhs}"))?;
    let rep = snc::check_dual_theorem(&m).map_err(e)?;
    ensure(rep.identity_holds && rep.hypothesis_holds(), || "dual report disagrees".into())?;
    Ok(1)
}

pub fn subdivision_invariance(seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let m = random::snc_model(&mut r, ModelShape::default());
    let f = LogFan::from_snc(&m).map_err(e)?;
    ensure(f.vol().map_err(e)? == m.vol().map_err(e)?, || "log volume of the snc fan differs from Vol".into())?;
    let len = r.gen_range(1..=3);
    let Some((plan, _)) = random::plan(&mut r, &f, len) else {
        return Ok(0);
    };
    let rep = fan::check_subdivision_invariance(&f, &plan).map_err(e)?;
    ensure(rep.invariant, || format!("volume changed from {} to {}", rep.before, rep.after))?;
    Ok(1)
}

pub fn euler_lemma(seed: u64) -> Result<usize, String> {
    let problems = random::subdivision_problems(&mut rng(seed));
    for p in &problems {
        let c = fan::check_euler(p).map_err(e)?;
        ensure(c.covers, || "refinement does not cover the cone".into())?;
        ensure(c.holds, || format!("counts {:?} expected {:?}", c.counts, c.expected))?;
    }
    Ok(usize::from(!problems.is_empty()))
}

pub const MORSE_TRUNC: u32 = 8;

pub fn morse_round_trip(seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let k = r.gen_range(1..=5);
    let params = if k >= 4 { 0 } else { r.gen_range(0..=1) };
    let (f, diag, _) = random::morse_instance(&mut r, k, params, MORSE_TRUNC);
    let out = morse_reduce(&f, k - 1, MORSE_TRUNC).map_err(e)?;
    let residual = out.change.apply(&f).map_err(e)?.sub(&out.normal_form(f.nvars(), MORSE_TRUNC)).map_err(e)?;
    ensure(residual.is_zero(), || format!("residual {residual}"))?;
    let q = QuadraticForm::diagonal(&out.diagonal);
    ensure(q.rank() == k, || format!("rank {} != {k}", q.rank()))?;
    let disc = |a: &[num_rational::BigRational]| {
        let p = a.iter().fold(num_rational::BigRational::one(), |x, y| x * y);
        squarefree_kernel(&(p.numer() * p.denom()))
    };
    ensure(disc(&out.diagonal) == disc(&diag), || "discriminant class changed".into())?;
    Ok(1)
}

pub fn series_units(seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let trunc = r.gen_range(2..=6);
    let u = random::unit_series(&mut r, n, trunc);
    let s = u.sqrt_unit().map_err(e)?;
    ensure(s.mul(&s).map_err(e)? == u, || format!("sqrt({u}) squared differs"))?;
    let inv = u.inverse_unit().map_err(e)?;
    ensure(inv.mul(&u).map_err(e)?.sub(&crate::series::TruncatedSeries::one(n, trunc)).map_err(e)?.is_zero(), || "inverse".into())?;
    let (_, _, change) = random::morse_instance(&mut r, n, 1, trunc);
    let back = change.inverse().map_err(e)?;
    ensure(change.then(&back).map_err(e)?.is_identity(), || "coordinate change inverse".into())?;
    Ok(1)
}

pub fn reducible_fibers(seed: u64) -> Result<usize, String> {
    let rep = snc::reducible_odp_report(&random::reducible_tree(&mut rng(seed))).map_err(e)?;
    ensure(rep.hypothesis && rep.consistent, || format!("tree rejected: {:?}", rep.failures))?;
    ensure(rep.euler - rep.singular_count as i64 == 1 && rep.singular_count == 0 && rep.tree, || "tree invariants".into())?;
    let neg = snc::reducible_odp_report(&random::reducible_triangle()).map_err(e)?;
    ensure(!neg.consistent && !neg.tree, || "three-cycle accepted".into())?;
    Ok(1)
}

fn dataset(name: &str) -> Result<Value, String> {
    datasets::load(name)
}

/// The assertions on the bundled examples, one case each.
pub fn bundled_examples() -> Vec<(&'static str, Result<(), String>)> {
    let quartic = || -> Result<(), String> {
        let m = snc_json::valid_model_from_json(&dataset("quartic_threefold")?).map_err(e)?;
        let t = &m.symbols;
        let vol = t.res_full(&m.vol().map_err(e)?).map_err(e)?;
        ensure(t.congruent_mod_l(&vol, &RingElement::symbol("X0")).map_err(e)?, || "Vol not congruent to [X0]".into())?;
        let want = Verdict::Obstructed { witness: SbElement::label("X0") };
        let got = t.verdict(&vol).map_err(e)?;
        ensure(got == want, || format!("verdict {got:?}"))
    };
    let am = || -> Result<(), String> {
        let inp = snc_json::odp_from_json(&dataset("artin_mumford")?).map_err(e)?;
        ensure(inp.nodes.len() == 10, || "expected ten nodes".into())?;
        let m = snc::odp_semistable(&inp).map_err(e)?;
        let t = &m.symbols;
        let vol = m.vol().map_err(e)?;
        ensure(t.congruent_mod_l(&vol, &RingElement::symbol("AM")).map_err(e)?, || "Vol not congruent to [AM]".into())?;
        ensure(t.verdict(&vol).map_err(e)?.is_obstructed(), || "not obstructed".into())
    };
    let mu2 = || -> Result<(), String> {
        let m = snc_json::valid_model_from_json(&dataset("mu2_point")?).map_err(e)?;
        ensure(m.mr().map_err(e)? == RingElement::one(), || "MR != 1".into())?;
        let t = &m.symbols;
        let tt = t.mul(&RingElement::symbol("T"), &RingElement::symbol("T")).map_err(e)?;
        let q = t.quotient_mu(&tt).map_err(e)?;
        ensure(q == RingElement::integer(BigInt::from(2)), || format!("quotient of T*T is {q}"))?;
        ensure(t.quotient_mu(&RingElement::symbol("T")).map_err(e)? == RingElement::one(), || "quotient of T".into())
    };
    vec![("quartic_threefold", quartic()), ("artin_mumford", am()), ("mu2_point", mu2())]
}

pub const SUITES: [(&str, Check); 10] = [
    ("ring_axioms", ring_axioms),
    ("larsen_lunts", larsen_lunts),
    ("inclusion_exclusion", inclusion_exclusion),
    ("dual_formula", dual_formula),
    ("subdivision_invariance", subdivision_invariance),
    ("euler_lemma", euler_lemma),
    ("morse_round_trip", morse_round_trip),
    ("series_units", series_units),
    ("reducible_fibers", reducible_fibers),
    ("bundled_examples", |_| {
        let bad: Vec<String> =
            bundled_examples().into_iter().filter_map(|(n, r)| r.err().map(|m| format!("{n}: {m}"))).collect();
        if bad.is_empty() { Ok(1) } else { Err(bad.join("; ")) }
    }),
];

pub fn run_suite(name: &str, master: u64, iters: usize) -> Option<SuiteResult> {
    let (id, (n, check)) = SUITES.iter().enumerate().find(|(_, (n, _))| *n == name)?;
    // the example assertions are deterministic; once is enough
    let iters = if *n == "bundled_examples" { 1 } else { iters };
    Some(run(n, id as u64, master, iters, *check))
}

pub fn run_all(master: u64, iters: usize) -> Vec<SuiteResult> {
    SUITES.iter().map(|(n, _)| run_suite(n, master, iters).expect("listed")).collect()
}
