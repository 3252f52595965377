//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench::boolos::{self, ChoiceMap};
use workbench::carrier::{FiniteCarrier, Subset};
use workbench::euclid::{self, Bit, FactorConfig};
use workbench::inclosure;
use workbench::ltl::{self, AtomName, Formula};
use workbench::primrec::{self, EvalBudget, GodelCode, PrTerm};
use workbench::schema::{self, DiagonalInstance};

mod common;

use common::oracle_truth;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg() -> FactorConfig {
    FactorConfig::default()
}

/// Least divisor above 1 by plain trial division.
fn trial_lpf(v: u128) -> u128 {
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    v
}

fn factorial_u128(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn euclid_values() -> Outcome {
    let f = |n: u32, m: u64| euclid::euclid_f(n, m, cfg()).ok();
    let mut bad = Vec::new();
    if f(4, 9) != Some(Bit::One) {
        bad.push("f(4,9)".to_string());
    }
    for m in 0..=40 {
        let want = if m <= 5 { Bit::Zero } else { Bit::One };
        if f(4, m) != Some(want) {
            bad.push(format!("f(4,{m})"));
        }
    }
    for n in 0..=25 {
        if f(n, n.into()) != Some(Bit::Zero) {
            bad.push(format!("f({n},{n})"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "exact".into() } else { bad.join(", ") })
}

fn prime_beyond() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=25u32 {
        let oracle = trial_lpf(factorial_u128(n) + 1);
        let got = euclid::factorial_plus_one(n)
            .and_then(|v| euclid::least_prime_factor(&v, cfg()))
            .ok()
            .and_then(|l| l.prime().cloned());
        if got != Some(BigUint::from(oracle)) || oracle <= n.into() {
            bad.push(format!("n={n}: got {got:?}, oracle {oracle}"));
        }
    }
    let beyond = |p| euclid::prime_beyond(p, cfg()).ok();
    let oracle5 = trial_lpf(factorial_u128(5) + 1);
    if beyond(4) != Some(BigUint::from(5u32)) {
        bad.push("prime_beyond(4)".into());
    }
    if oracle5 != 11 || beyond(5) != Some(BigUint::from(11u32)) {
        bad.push(format!("prime_beyond(5), oracle {oracle5}"));
    }
    outcome(bad.is_empty(), if bad.is_empty() { "n <= 25 match trial division".into() } else { bad.join("; ") })
}

fn godel_coding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for _ in 0..1000 {
        let arity = rng.gen_range(1..=primrec::RANDOM_MAX_ARITY);
        let t = primrec::random_term(&mut rng, arity, 4);
        if !t.is_valid() || t.depth() > 4 || primrec::decode(&primrec::encode(&t)) != t {
            failures += 1;
        }
    }
    let code = GodelCode::from;
    let fixed = primrec::decode(&code(3)) == PrTerm::Zero
        && primrec::decode(&code(10)) == PrTerm::Zero
        && primrec::encode(&PrTerm::Zero) == code(1)
        && primrec::encode(&PrTerm::Succ) == code(2);
    outcome(
        failures == 0 && fixed,
        format!("1000 terms, {failures} round-trip failures, fixed codes {}", if fixed { "ok" } else { "wrong" }),
    )
}

fn domination() -> Outcome {
    let budget = EvalBudget::new(1_000_000).expect("budget");
    let (mut compared, mut skipped, mut violations) = (0, 0, Vec::new());
    for m in 0..=50u64 {
        match primrec::check_domination(m, m..=50, budget) {
            Ok(r) => {
                compared += r.compared;
                skipped += r.budget_exhausted_at.len();
                violations.extend(r.violations.iter().map(|&x| (m, x)));
            }
            Err(e) => return outcome(false, format!("m={m}: {e}")),
        }
    }
    outcome(
        violations.is_empty() && compared > 0,
        format!("{compared} comparisons, {skipped} over budget, violations {violations:?}"),
    )
}

fn ltl_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let atoms = [AtomName::new("a").unwrap(), AtomName::new("b").unwrap()];
    let formulas: Vec<Formula> = (0..200)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            ltl::random_formula(&mut rng, &atoms[..k], 4)
        })
        .collect();
    let (mut t1, mut t12, mut disagree) = (0, 0, 0);
    for _ in 0..500 {
        let m = ltl::random_model(&mut rng, &atoms, 5, 5);
        let len = 20.max(m.period_end());
        for f in &formulas {
            t1 += u32::from(!ltl::check_law_t1(&m, f, 20).unwrap());
            t12 += u32::from(!ltl::check_law_t12(&m, f, 20).unwrap());
            for law in [ltl::Law::T1, ltl::Law::T12] {
                let o = oracle_truth(&m, &law.instance(f), len);
                let lib = ltl::check_law(&m, law, f, 20).unwrap();
                disagree += u32::from(lib != o[..20].iter().all(|&b| b));
            }
        }
    }
    outcome(
        t1 == 0 && t12 == 0 && disagree == 0,
        format!("T1 {t1}, T12 {t12} counterexamples; {disagree} oracle disagreements"),
    )
}

fn yablo() -> Outcome {
    match ltl::yablo_theorem_check(4, 4) {
        Ok(r) => outcome(
            r.search.is_unsat() && r.agree,
            format!(
                "unsat over {} lassos; replay: {} step (i), {} step (ii)",
                r.models_replayed, r.killed_by_step_one, r.killed_by_step_two
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn boolos_exhaustive() -> Outcome {
    let carrier = FiniteCarrier::numeric(3).unwrap();
    let mut table = vec![0usize; 8];
    let (mut maps, mut failures) = (0, 0);
    for _ in 0..3u32.pow(8) {
        let h = ChoiceMap::new(carrier.clone(), table.clone()).unwrap();
        maps += 1;
        let w = boolos::boolos_witness(&h);
        let (c, d) = boolos::find_collision_partner(&h);
        let hw = h.apply(w.w);
        let witness_ok = w.v.is_proper_subset_of(w.w)
            && h.apply(w.v) == hw
            && w.w.contains(hw)
            && !w.v.contains(hw);
        let anti: Subset = Subset::all(3).filter(|&y| !y.contains(h.apply(y))).map(|y| h.apply(y)).collect();
        let hd = h.apply(d);
        let partner_ok = d == anti && anti.contains(hd) && c != d && h.apply(c) == hd && !c.contains(hd);
        failures += u32::from(!(witness_ok && partner_ok));
        for cell in table.iter_mut() {
            *cell += 1;
            if *cell < 3 {
                break;
            }
            *cell = 0;
        }
    }
    outcome(failures == 0 && maps == 6561, format!("{maps} maps, {failures} failures"))
}

fn schema_sweeps() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (b, expected) in [(2usize, 16u32), (3, 512)] {
        let cb = FiniteCarrier::numeric(b).unwrap();
        let cd = FiniteCarrier::numeric(2).unwrap();
        let (mut tables, mut bad) = (0, 0);
        for bits in 0..1u32 << (b * b) {
            let table: Vec<usize> = (0..b * b).map(|i| (bits >> i & 1) as usize).collect();
            let inst = DiagonalInstance::new(cb.clone(), cd.clone(), table.clone(), vec![1, 0]).unwrap();
            let r = schema::schema_report(&inst);
            // the flipped diagonal never equals a column
            let g: Vec<usize> = (0..b).map(|x| 1 - table[x * b + x]).collect();
            let representable = (0..b).any(|c| (0..b).all(|x| table[x * b + c] == g[x]));
            tables += 1;
            bad += u32::from(!r.consistent || !r.representing_indices.is_empty() || representable || r.g != g);
        }
        pass &= tables == expected && bad == 0;
        details.push(format!("|B|={b}: {tables} tables, {bad} bad"));
    }
    outcome(pass, details.join(", "))
}

fn inclosure_sweep() -> Outcome {
    match inclosure::exhaustive_nonexistence(3) {
        Ok(r) => {
            let candidates: u64 = r.per_size.iter().map(|c| c.candidates).sum();
            let agree = r.per_size.iter().all(|c| c.embedding_agrees == c.embedded);
            outcome(
                r.valid_total == 0 && r.cross_check_ok && agree,
                format!("{candidates} candidates, {} valid, cross-check {}", r.valid_total, r.cross_check_ok),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_workbench"))
            .args(["run-all", "--profile", "quick", "--seed", "42", "--json"])
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => outcome(
            a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout,
            format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

/// Name, time limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("euclid f values", Some(10), euclid_values),
        ("prime beyond n", None, prime_beyond),
        ("godel coding", None, godel_coding),
        ("domination", Some(60), domination),
        ("ltl laws T1 T12", None, ltl_laws),
        ("yablo bounded unsat", Some(60), yablo),
        ("boolos exhaustive |A|=3", Some(60), boolos_exhaustive),
        ("schema sweeps", None, schema_sweeps),
        ("inclosure sweep", None, inclosure_sweep),
        ("run-all determinism", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(secs) = limit {
            if took > Duration::from_secs(secs) {
                o.pass = false;
                o.detail.push_str(&format!(" (over {secs}s limit)"));
            }
        }
        failed += u32::from(!o.pass);
        println!(
            "{} {:>2} {name}: {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
