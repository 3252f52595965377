//! The whole set of desk-scale checks, one section per result, at a quick
//! or a full scale. Output depends only on the profile and the seed.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolos;
use crate::euclid::{self, Bit, FactorConfig};
use crate::inclosure;
use crate::ltl::{self, AtomName, Law};
use crate::primrec::{self, EvalBudget, GodelCode, PrTerm};
use crate::report::Check;
use crate::schema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(format!("unknown profile `{other}` (quick|full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub theorem: &'static str,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub seed: u64,
    pub sections: Vec<Section>,
    pub all_pass: bool,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check::new(name, pass, detail)
}

fn diagonal_schema() -> Section {
    let mut checks = Vec::new();
    for b in [2, 3] {
        let s = schema::sweep(b, 2, &[1, 0]);
        let pass = s.as_ref().is_ok_and(|s| s.consistent == s.instances && s.representable == 0);
        let detail = match &s {
            Ok(s) => format!(
                "{} tables, {} consistent, {} representable",
                s.instances, s.consistent, s.representable
            ),
            Err(e) => e.to_string(),
        };
        checks.push(check(&format!("negation sweep |B|={b} |D|=2"), pass, detail));
    }
    Section {
        theorem: "diagonal-schema",
        checks,
    }
}

fn euclid_section() -> Section {
    let cfg = FactorConfig::default();
    let f = |n, m| euclid::euclid_f(n, m, cfg).ok();
    let mut checks = vec![
        check("f(4,9) = 1", f(4, 9) == Some(Bit::One), ""),
        check(
            "f(4,m) steps from 0 to 1 after 5",
            (0..=30).all(|m| f(4, m) == Some(if m <= 5 { Bit::Zero } else { Bit::One })),
            "m in 0..=30",
        ),
        check("f(n,n) = 0", (0..=25).all(|n| f(n, n.into()) == Some(Bit::Zero)), "n in 0..=25"),
    ];
    let mut beyond = Vec::new();
    let mut ok = true;
    for n in 0..=25u32 {
        let lpf = euclid::factorial_plus_one(n)
            .and_then(|v| euclid::least_prime_factor(&v, cfg))
            .ok()
            .and_then(|l| l.prime().cloned());
        ok &= lpf.as_ref().is_some_and(|p| *p > n.into());
        beyond.push(lpf.map_or("unresolved".to_string(), |p| p.to_string()));
    }
    checks.push(check("least prime factor of n!+1 exceeds n", ok, beyond.join(" ")));
    let pb = |p| euclid::prime_beyond(p, cfg).map(|v| v.to_string()).unwrap_or_default();
    checks.push(check("prime beyond 4 is 5", pb(4) == "5", pb(4)));
    checks.push(check("prime beyond 5 is 11", pb(5) == "11", pb(5)));
    let demo = euclid::euclid_schema_demo(10, cfg);
    checks.push(check(
        "anti-diagonal of F covers 0..=10",
        demo.as_ref().is_ok_and(|d| d.anti_diagonal_is_everything && d.unresolved.is_empty()),
        "",
    ));
    Section {
        theorem: "euclid",
        checks,
    }
}

fn boolos_section(profile: Profile, seed: u64) -> Section {
    let sizes: &[(usize, u64)] = match profile {
        Profile::Quick => &[(1, 0), (2, 0), (4, 50)],
        Profile::Full => &[(1, 0), (2, 0), (3, 0), (4, 2000), (5, 500)],
    };
    let checks = sizes
        .iter()
        .map(|&(n, samples)| {
            let r = boolos::sweep(n, samples, seed ^ n as u64);
            let pass = r.as_ref().is_ok_and(|r| r.maps > 0 && r.passed == r.maps);
            let name = if n <= boolos::MAX_EXHAUSTIVE {
                format!("every choice map on {n} elements")
            } else {
                format!("{samples} random choice maps on {n} elements")
            };
            let detail = match &r {
                Ok(r) => format!("{}/{} maps pass", r.passed, r.maps),
                Err(e) => e.to_string(),
            };
            check(&name, pass, detail)
        })
        .collect();
    Section {
        theorem: "boolos",
        checks,
    }
}

fn ltl_laws(profile: Profile, seed: u64) -> Section {
    let (models, formulas) = match profile {
        Profile::Quick => (60, 30),
        Profile::Full => (500, 200),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = [AtomName::new("a").expect("atom"), AtomName::new("b").expect("atom")];
    let fs: Vec<_> = (0..formulas)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            ltl::random_formula(&mut rng, &atoms[..k], 4)
        })
        .collect();
    let mut counterexamples = [0u64; 3];
    for _ in 0..models {
        let m = ltl::random_model(&mut rng, &atoms, 5, 5);
        for f in &fs {
            for (i, law) in Law::ALL.into_iter().enumerate() {
                if !ltl::check_law(&m, law, f, 20).unwrap_or(false) {
                    counterexamples[i] += 1;
                }
            }
        }
    }
    let checks = Law::ALL
        .into_iter()
        .zip(counterexamples)
        .map(|(law, bad)| {
            check(
                law.name(),
                bad == 0,
                format!("{models} models x {formulas} formulas, {bad} counterexamples"),
            )
        })
        .collect();
    Section {
        theorem: "ltl-laws",
        checks,
    }
}

fn yablo(profile: Profile) -> Section {
    let bound = match profile {
        Profile::Quick => 3,
        Profile::Full => 4,
    };
    let r = ltl::yablo_theorem_check(bound, bound);
    let detail = match &r {
        Ok(r) => format!(
            "{} models, {} killed by step (i), {} by step (ii)",
            r.models_replayed, r.killed_by_step_one, r.killed_by_step_two
        ),
        Err(e) => e.to_string(),
    };
    Section {
        theorem: "yablo",
        checks: vec![check(
            &format!("no lasso with prefix, loop <= {bound}"),
            r.as_ref().is_ok_and(|r| r.agree && r.search.is_unsat()),
            detail,
        )],
    }
}

fn inclosure_section(profile: Profile) -> Section {
    let size = match profile {
        Profile::Quick => 2,
        Profile::Full => 3,
    };
    let r = inclosure::exhaustive_nonexistence(size);
    let detail = match &r {
        Ok(r) => {
            let counts: Vec<String> = r
                .per_size
                .iter()
                .map(|c| format!("|Omega|={}: {} candidates", c.size, c.candidates))
                .collect();
            counts.join(", ")
        }
        Err(e) => e.to_string(),
    };
    Section {
        theorem: "inclosure",
        checks: vec![
            check(
                &format!("no inclosure with |Omega| <= {size}"),
                r.as_ref().is_ok_and(|r| r.valid_total == 0),
                detail,
            ),
            check(
                "embedding agrees with validation",
                r.as_ref().is_ok_and(|r| r.cross_check_ok),
                "",
            ),
        ],
    }
}

fn coding(profile: Profile, seed: u64) -> Section {
    let terms = match profile {
        Profile::Quick => 200,
        Profile::Full => 1000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..terms {
        let arity = rng.gen_range(1..=primrec::RANDOM_MAX_ARITY);
        let t = primrec::random_term(&mut rng, arity, 4);
        if primrec::decode(&primrec::encode(&t)) != t {
            failures += 1;
        }
    }
    let code = |n: u64| GodelCode::from(n);
    Section {
        theorem: "godel-coding",
        checks: vec![
            check("decode(encode(t)) = t", failures == 0, format!("{terms} terms, {failures} failures")),
            check(
                "3 and 10 decode to zero",
                primrec::decode(&code(3)) == PrTerm::Zero && primrec::decode(&code(10)) == PrTerm::Zero,
                "",
            ),
            check(
                "zero and successor codes",
                primrec::encode(&PrTerm::Zero) == code(1) && primrec::encode(&PrTerm::Succ) == code(2),
                "",
            ),
        ],
    }
}

fn domination(profile: Profile) -> Section {
    let top = match profile {
        Profile::Quick => 30,
        Profile::Full => 50,
    };
    let budget = EvalBudget::new(1_000_000).expect("nonzero budget");
    let mut compared = 0;
    let mut violations = Vec::new();
    let mut exhausted = 0;
    let mut error = None;
    for m in 0..=top {
        match primrec::check_domination(m, m..=top, budget) {
            Ok(r) => {
                compared += r.compared;
                exhausted += r.budget_exhausted_at.len();
                violations.extend(r.violations.iter().map(|&x| (m, x)));
            }
            Err(e) => error = Some(e.to_string()),
        }
    }
    let n_max = 12;
    let diag = primrec::diagonal_out_rho(n_max, budget);
    let (diag_ok, diag_detail) = match &diag {
        Ok(primrec::Outcome::Value(g)) => (
            (0..=n_max).all(|n| {
                let f = primrec::rho(&GodelCode::from(n), n, budget).ok().and_then(|o| o.value());
                f.is_some_and(|f| g[n as usize] == u8::from(f == 0))
            }),
            format!("g~ = {g:?}"),
        ),
        Ok(primrec::Outcome::BudgetExceeded) => (false, "over budget".to_string()),
        Err(e) => (false, e.to_string()),
    };
    Section {
        theorem: "domination",
        checks: vec![
            check(
                &format!("dominator(x) > rho_m(x) for m <= x <= {top}"),
                violations.is_empty() && error.is_none(),
                error.unwrap_or_else(|| {
                    format!("{compared} comparisons, {exhausted} over budget, violations {violations:?}")
                }),
            ),
            check(
                &format!("diagonal-out differs from each rho_n at n <= {n_max}"),
                diag_ok,
                diag_detail,
            ),
        ],
    }
}

/// Runs every section in a fixed order.
pub fn run_all(profile: Profile, seed: u64) -> SuiteReport {
    let sections = vec![
        diagonal_schema(),
        euclid_section(),
        boolos_section(profile, seed),
        ltl_laws(profile, seed),
        yablo(profile),
        inclosure_section(profile),
        coding(profile, seed),
        domination(profile),
    ];
    SuiteReport {
        profile,
        seed,
        all_pass: sections.iter().all(Section::pass),
        sections,
    }
}
