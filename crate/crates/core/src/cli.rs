use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use workbench::boolos::{self, ChoiceMap};
use workbench::carrier::FiniteCarrier;
use workbench::euclid::{self, Bit, FactorConfig, LeastFactor};
use workbench::inclosure::{self, InclosureCandidate, Verdict};
use workbench::ltl::{self, AtomName, LassoModel, Law, SatResult};
use workbench::primrec::{self, EvalBudget, GodelCode, Outcome, PrTerm};
use workbench::report::JsonReport;
use workbench::schema::{schema_report, DiagonalInstance};
use workbench::suite::{run_all, Profile};

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Diagonal constructions on finite and coded domains")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Step budget for evaluating primitive recursive terms.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Diagonalize a finite instance and look for a representing column.
    Schema {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Primitive recursive terms, their codes and the dominating function.
    #[command(subcommand)]
    Primrec(PrimrecCmd),
    /// Temporal formulas over lasso models.
    #[command(subcommand)]
    Ltl(LtlCmd),
    /// Choice maps on the powerset of a small set.
    #[command(subcommand)]
    Boolos(BoolosCmd),
    /// Prime factors of n!+1.
    #[command(subcommand)]
    Euclid(EuclidCmd),
    /// Candidate inclosures on small carriers.
    #[command(subcommand)]
    Inclosure(InclosureCmd),
    /// Run every desk-scale check.
    #[command(alias = "run_all")]
    RunAll {
        #[arg(long, default_value = "quick")]
        profile: Profile,
    },
}

#[derive(Debug, Subcommand)]
enum PrimrecCmd {
    /// Print the code of a term.
    Encode {
        #[arg(long)]
        term: String,
    },
    /// Print the term with a given code (the zero function for non-codes).
    Decode {
        #[arg(long)]
        code: String,
    },
    /// Evaluate a term on comma-separated arguments.
    Eval {
        #[arg(long)]
        term: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        args: Vec<u64>,
    },
    /// The dominating function at x.
    Dominate {
        #[arg(long)]
        x: u64,
    },
    /// Compare the dominating function with rho_m on [m, max].
    CheckDom {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Debug, Args)]
struct Bounds {
    #[arg(long, default_value_t = 4)]
    max_prefix: usize,
    #[arg(long, default_value_t = 4)]
    max_loop: usize,
}

#[derive(Debug, Subcommand)]
enum LtlCmd {
    /// Truth of a formula at a position of a model.
    Holds {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        position: usize,
    },
    /// Bounded search for a lasso satisfying a formula.
    Sat {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Search and proof replay for G (y <-> X G !y).
    Yablo {
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Check the temporal laws for a formula on one model or on random ones.
    Laws {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        /// Random models to try when no model is given.
        #[arg(long, default_value_t = 100)]
        models: usize,
    },
}

#[derive(Debug, Subcommand)]
enum BoolosCmd {
    /// V and W with h(V) = h(W) in W minus V.
    Witness {
        #[arg(long)]
        map: PathBuf,
    },
    /// The anti-diagonal and a second set with the same image.
    Antidiag {
        #[arg(long)]
        map: PathBuf,
    },
    /// Every h-woset, and whether they are pairwise comparable.
    Enumerate {
        #[arg(long)]
        map: PathBuf,
    },
    /// Check every choice map of a size (random ones above 3).
    Sweep {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
}

#[derive(Debug, Subcommand)]
enum EuclidCmd {
    /// 1 iff every prime factor of n!+1 is below m.
    F {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u64,
    },
    /// A prime above p: the least prime factor of p!+1.
    Beyond {
        #[arg(long)]
        p: u32,
    },
    /// Tables of F(n) and f(n, m) for n, m up to max.
    Demo {
        #[arg(long)]
        max: u32,
    },
}

#[derive(Debug, Subcommand)]
enum InclosureCmd {
    /// Find the first condition a candidate breaks.
    Validate {
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Check every candidate up to a size.
    Sweep {
        #[arg(long)]
        size: usize,
    },
}

/// What a command produced and how it should exit.
struct Run {
    report: JsonReport,
    text: String,
    undecided: bool,
}

impl Run {
    fn new(report: JsonReport, text: impl Into<String>) -> Self {
        Self {
            report,
            text: text.into(),
            undecided: false,
        }
    }

    fn undecided(mut self, u: bool) -> Self {
        self.undecided = u;
        self
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn budget(cli: &Cli) -> Result<EvalBudget> {
    Ok(EvalBudget::new(cli.budget)?)
}

fn schema_cmd(path: &Path) -> Result<Run> {
    let inst = DiagonalInstance::parse(&read(path)?)?;
    let r = schema_report(&inst);
    let b = inst.carrier_b();
    let d = inst.values_d();
    let mut text = String::new();
    for (x, &v) in r.g.iter().enumerate() {
        let _ = writeln!(text, "g {} = {}", b.label(x), d.label(v));
    }
    let labels = |xs: &[usize], c: &FiniteCarrier| {
        if xs.is_empty() {
            "none".to_string()
        } else {
            xs.iter().map(|&x| c.label(x)).collect::<Vec<_>>().join(" ")
        }
    };
    let _ = writeln!(text, "alpha fixed points: {}", labels(&r.alpha_fixed_points, d));
    let _ = writeln!(text, "representing columns: {}", labels(&r.representing_indices, b));
    let _ = writeln!(text, "consistent: {}", r.consistent);
    let report = JsonReport::new("schema", json!({ "instance": path }), r.labeled(&inst)).check(
        "consistent",
        r.consistent,
        "a fixed-point-free alpha leaves g unrepresented",
    );
    Ok(Run::new(report, text))
}

fn primrec_cmd(cli: &Cli, cmd: &PrimrecCmd) -> Result<Run> {
    Ok(match cmd {
        PrimrecCmd::Encode { term } => {
            let t: PrTerm = term.parse()?;
            let code = primrec::encode(&t);
            let back = primrec::decode(&code) == t;
            let report = JsonReport::new("primrec encode", json!({ "term": term }), json!(code.to_string()))
                .check("decodes back", back, "");
            Run::new(report, format!("{code}\n"))
        }
        PrimrecCmd::Decode { code } => {
            let c: GodelCode = code.parse()?;
            let t = primrec::decode(&c);
            let is_code = primrec::is_code(&c);
            let report = JsonReport::new(
                "primrec decode",
                json!({ "code": code }),
                json!({ "term": t.to_string(), "is_code": is_code }),
            );
            let note = if is_code { "" } else { "  # not a code" };
            Run::new(report, format!("{t}{note}\n"))
        }
        PrimrecCmd::Eval { term, args } => {
            let t: PrTerm = term.parse()?;
            let out = primrec::eval(&t, args, budget(cli)?)?;
            let (value, text) = match out {
                Outcome::Value(v) => (json!(v), v.to_string()),
                Outcome::BudgetExceeded => (json!("budget_exceeded"), "budget exceeded".to_string()),
            };
            let report = JsonReport::new(
                "primrec eval",
                json!({ "term": term, "args": args, "budget": cli.budget }),
                value,
            );
            Run::new(report, text + "\n").undecided(out == Outcome::BudgetExceeded)
        }
        PrimrecCmd::Dominate { x } => {
            let out = primrec::dominator(*x, budget(cli)?)?;
            let (value, text) = match out {
                Outcome::Value(v) => (json!(v), v.to_string()),
                Outcome::BudgetExceeded => (json!("budget_exceeded"), "budget exceeded".to_string()),
            };
            let report = JsonReport::new("primrec dominate", json!({ "x": x, "budget": cli.budget }), value);
            Run::new(report, text + "\n").undecided(out == Outcome::BudgetExceeded)
        }
        PrimrecCmd::CheckDom { m, max } => {
            if max < m {
                bail!("--max must be at least --m");
            }
            let r = primrec::check_domination(*m, *m..=*max, budget(cli)?)?;
            let text = format!(
                "compared {} points, violations {:?}, over budget at {:?}\n",
                r.compared, r.violations, r.budget_exhausted_at
            );
            let clean = r.is_clean();
            let none_compared = r.compared == 0 && !r.budget_exhausted_at.is_empty();
            let report = JsonReport::new(
                "primrec check-dom",
                json!({ "m": m, "max": max, "budget": cli.budget }),
                serde_json::to_value(&r)?,
            )
            .check("no violations", clean, format!("{:?}", r.violations));
            Run::new(report, text).undecided(none_compared)
        }
    })
}

fn load_model(path: &Path) -> Result<LassoModel> {
    Ok(LassoModel::parse(&read(path)?)?)
}

fn ltl_cmd(cli: &Cli, cmd: &LtlCmd) -> Result<Run> {
    Ok(match cmd {
        LtlCmd::Holds {
            formula,
            model,
            position,
        } => {
            let phi = ltl::parse(formula)?;
            let m = load_model(model)?;
            let v = ltl::holds(&m, *position, &phi)?;
            let report = JsonReport::new(
                "ltl holds",
                json!({ "formula": phi.to_string(), "model": model, "position": position }),
                json!(v),
            );
            Run::new(report, format!("{v}\n"))
        }
        LtlCmd::Sat { formula, bounds } => {
            let phi = ltl::parse(formula)?;
            let r = ltl::satisfiable_bounded(&phi, bounds.max_prefix, bounds.max_loop)?;
            let mut report = JsonReport::new(
                "ltl sat",
                json!({ "formula": phi.to_string(), "max_prefix": bounds.max_prefix, "max_loop": bounds.max_loop }),
                serde_json::to_value(&r)?,
            );
            let text = match &r {
                SatResult::Witness { model, position } => {
                    let ok = ltl::holds(model, *position, &phi)?;
                    report = report.check("witness re-verifies", ok, "");
                    format!("satisfiable at position {position} of\n{}", model.to_text())
                }
                SatResult::Unsat { models_checked, .. } => format!(
                    "no lasso with prefix <= {} and loop <= {} ({models_checked} models)\n",
                    bounds.max_prefix, bounds.max_loop
                ),
            };
            Run::new(report, text)
        }
        LtlCmd::Yablo { bounds } => {
            let r = ltl::yablo_theorem_check(bounds.max_prefix, bounds.max_loop)?;
            let text = format!(
                "{}: {} models, {} killed by step (i), {} by step (ii)\n",
                if r.search.is_unsat() { "unsat" } else { "SATISFIABLE" },
                r.models_replayed,
                r.killed_by_step_one,
                r.killed_by_step_two
            );
            let report = JsonReport::new(
                "ltl yablo",
                json!({ "formula": ltl::yablo_formula().to_string(), "max_prefix": bounds.max_prefix, "max_loop": bounds.max_loop }),
                serde_json::to_value(&r)?,
            )
            .check("search finds no model", r.search.is_unsat(), "")
            .check("replay agrees with search", r.agree, "");
            Run::new(report, text)
        }
        LtlCmd::Laws {
            formula,
            model,
            horizon,
            models,
        } => {
            let phi = ltl::parse(formula)?;
            let ms: Vec<LassoModel> = match model {
                Some(p) => vec![load_model(p)?],
                None => {
                    let mut atoms = phi.atoms();
                    if atoms.is_empty() {
                        atoms.push(AtomName::new("a")?);
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..*models).map(|_| ltl::random_model(&mut rng, &atoms, 5, 5)).collect()
                }
            };
            let mut report = JsonReport::new(
                "ltl laws",
                json!({ "formula": phi.to_string(), "model": model, "horizon": horizon, "models": ms.len(), "seed": cli.seed }),
                Value::Null,
            );
            let mut text = String::new();
            let mut result = serde_json::Map::new();
            for law in Law::ALL {
                let mut failures = 0;
                for m in &ms {
                    if !ltl::check_law(m, law, &phi, *horizon)? {
                        failures += 1;
                    }
                }
                let _ = writeln!(text, "{}: {}", law.name(), if failures == 0 { "holds" } else { "FAILS" });
                result.insert(law.name().into(), json!(failures == 0));
                report = report.check(law.name(), failures == 0, format!("{failures} of {} models fail", ms.len()));
            }
            report.result = Value::Object(result);
            Run::new(report, text)
        }
    })
}

fn load_map(path: &Path) -> Result<ChoiceMap> {
    Ok(ChoiceMap::parse(&read(path)?)?)
}

fn boolos_cmd(cli: &Cli, cmd: &BoolosCmd) -> Result<Run> {
    Ok(match cmd {
        BoolosCmd::Witness { map } => {
            let h = load_map(map)?;
            let c = h.carrier();
            let w = boolos::boolos_witness(&h);
            let max = boolos::build_max_woset(&h);
            let result = json!({
                "v": c.show_subset(w.v),
                "w": c.show_subset(w.w),
                "w_order": max.show(c),
                "collision_point": c.label(w.collision_point),
            });
            let text = format!(
                "W = {} ordered {}\nV = {}\nh(V) = h(W) = {}\n",
                c.show_subset(w.w),
                max.show(c),
                c.show_subset(w.v),
                c.label(w.collision_point)
            );
            let report = JsonReport::new("boolos witness", json!({ "map": map }), result).check(
                "V in W, h(V) = h(W) in W minus V",
                w.validate(&h),
                "",
            );
            Run::new(report, text)
        }
        BoolosCmd::Antidiag { map } => {
            let h = load_map(map)?;
            let c = h.carrier();
            let d = boolos::anti_diagonal(&h);
            let (cc, _) = boolos::find_collision_partner(&h);
            let hd = h.apply(d);
            let result = json!({
                "d": c.show_subset(d),
                "c": c.show_subset(cc),
                "h_of_d": c.label(hd),
            });
            let text = format!(
                "D = {}\nC = {}\nh(C) = h(D) = {}\n",
                c.show_subset(d),
                c.show_subset(cc),
                c.label(hd)
            );
            let report = JsonReport::new("boolos antidiag", json!({ "map": map }), result)
                .check("h(D) in D", d.contains(hd), "")
                .check("h(C) = h(D) not in C", h.apply(cc) == hd && !cc.contains(hd), "");
            Run::new(report, text)
        }
        BoolosCmd::Enumerate { map } => {
            let h = load_map(map)?;
            let c = h.carrier();
            let all = boolos::enumerate_wosets(&h)?;
            let comparable = boolos::comparability_check(&h)?;
            let max = boolos::build_max_woset(&h);
            let shown: Vec<String> = all.iter().map(|w| w.show(c)).collect();
            let mut text = shown.join("\n");
            let _ = write!(text, "\nmaximal: {}\ncomparable: {comparable}\n", max.show(c));
            let greatest = all.iter().all(|w| *w == max || w.is_proper_initial_segment_of(&max));
            let report = JsonReport::new(
                "boolos enumerate",
                json!({ "map": map }),
                json!({ "wosets": shown, "maximal": max.show(c) }),
            )
            .check("pairwise comparable", comparable, "")
            .check("all are initial segments of the maximal one", greatest, "");
            Run::new(report, text)
        }
        BoolosCmd::Sweep { size, samples } => {
            let r = boolos::sweep(*size, *samples, cli.seed)?;
            let text = format!(
                "{} {} maps on {} elements: {} pass\n",
                if r.exhaustive { "all" } else { "random" },
                r.maps,
                r.size,
                r.passed
            );
            let ok = r.passed == r.maps;
            let report = JsonReport::new(
                "boolos sweep",
                json!({ "size": size, "samples": samples, "seed": cli.seed }),
                serde_json::to_value(&r)?,
            )
            .check("every map passes", ok, format!("{}/{}", r.passed, r.maps));
            Run::new(report, text)
        }
    })
}

fn bit_json(b: Bit) -> Value {
    b.as_u8().map_or(json!("unresolved"), |v| json!(v))
}

fn euclid_cmd(cmd: &EuclidCmd) -> Result<Run> {
    let cfg = FactorConfig::default();
    Ok(match cmd {
        EuclidCmd::F { n, m } => {
            let b = euclid::euclid_f(*n, *m, cfg)?;
            let text = b.as_u8().map_or("unresolved".to_string(), |v| v.to_string());
            let report = JsonReport::new("euclid f", json!({ "n": n, "m": m }), bit_json(b));
            Run::new(report, text + "\n").undecided(b == Bit::Unresolved)
        }
        EuclidCmd::Beyond { p } => {
            if *p > euclid::MAX_BEYOND {
                bail!("--p must be at most {}", euclid::MAX_BEYOND);
            }
            let v = euclid::factorial_plus_one(*p)?;
            let lpf = euclid::least_prime_factor(&v, cfg)?;
            let report = JsonReport::new(
                "euclid beyond",
                json!({ "p": p }),
                json!({ "value": v.to_string(), "least_prime_factor": lpf }),
            );
            match &lpf {
                LeastFactor::Found { prime, proven } => {
                    let report = report
                        .check("above p", *prime > (*p).into(), "")
                        .check("divides p!+1", (&v % prime) == 0u32.into(), "")
                        .check(
                            "prime",
                            euclid::primality(prime) != euclid::Primality::Composite,
                            if *proven { "proven" } else { "probable" },
                        );
                    Run::new(report, format!("{prime}\n"))
                }
                LeastFactor::Unresolved => Run::new(report, "unresolved\n").undecided(true),
            }
        }
        EuclidCmd::Demo { max } => {
            let d = euclid::euclid_schema_demo(*max, cfg)?;
            let mut text = String::from("x in F(n), i.e. n >= every prime factor of x!+1\n");
            for (x, row) in d.membership.iter().enumerate() {
                let cells: String = row
                    .iter()
                    .map(|c| match c {
                        Some(true) => '1',
                        Some(false) => '0',
                        None => '?',
                    })
                    .collect();
                let _ = writeln!(text, "x={x:<3} {cells}");
            }
            let _ = writeln!(text, "f(x, m), i.e. every prime factor of x!+1 is < m");
            for (x, row) in d.strict.iter().enumerate() {
                let cells: String = row.iter().map(|c| c.map_or('?', |b| char::from(b'0' + b))).collect();
                let _ = writeln!(text, "x={x:<3} {cells}");
            }
            let _ = writeln!(text, "n not in F(n) for n in {:?}", d.anti_diagonal);
            let g_ok = d.diagonal_g.iter().all(|&g| g == Some(1));
            let report = JsonReport::new("euclid demo", json!({ "max": max }), serde_json::to_value(&d)?)
                .check("anti-diagonal is everything", d.anti_diagonal_is_everything, "")
                .check("g(n) = 1 - f(n, n) = 1", g_ok, "");
            let undecided = !d.unresolved.is_empty();
            Run::new(report, text).undecided(undecided)
        }
    })
}

fn inclosure_cmd(cmd: &InclosureCmd) -> Result<Run> {
    Ok(match cmd {
        InclosureCmd::Validate { candidate } => {
            let c = InclosureCandidate::parse(&read(candidate)?)?;
            let v = inclosure::validate(&c);
            let o = c.omega();
            let (result, text, rechecks) = match v {
                Verdict::Valid => (json!({ "verdict": "valid" }), "valid\n".to_string(), true),
                Verdict::Violation(r) => {
                    let cond = serde_json::to_value(r.condition)?;
                    let cond = cond.as_str().unwrap_or_default().to_string();
                    let elem = r.element.map(|e| o.label(e).to_string());
                    let mut text = format!("violates {cond} at {}", o.show_subset(r.subset));
                    if let Some(e) = &elem {
                        let _ = write!(text, " (delta = {e})");
                    }
                    (
                        json!({ "verdict": "violation", "condition": cond, "subset": o.show_subset(r.subset), "element": elem }),
                        text + "\n",
                        r.recheck(&c),
                    )
                }
            };
            let report = JsonReport::new("inclosure validate", json!({ "candidate": candidate }), result)
                .check("not an inclosure", v != Verdict::Valid, "")
                .check("witness rechecks", rechecks, "");
            Run::new(report, text)
        }
        InclosureCmd::Sweep { size } => {
            let r = inclosure::exhaustive_nonexistence(*size)?;
            let mut text = String::new();
            for c in &r.per_size {
                let _ = writeln!(
                    text,
                    "|Omega|={}: {} candidates, omega_in_theta {}, delta_total {}, delta_escapes {}, valid {}",
                    c.size, c.candidates, c.omega_in_theta, c.delta_total, c.delta_escapes, c.valid
                );
            }
            let report = JsonReport::new("inclosure sweep", json!({ "size": size }), serde_json::to_value(&r)?)
                .check("no valid inclosure", r.valid_total == 0, "")
                .check("embedding agrees", r.cross_check_ok, "");
            Run::new(report, text)
        }
    })
}

fn run_all_cmd(cli: &Cli, profile: Profile) -> Result<Run> {
    let r = run_all(profile, cli.seed);
    let mut text = String::new();
    let mut report = JsonReport::new(
        "run-all",
        json!({ "profile": profile, "seed": cli.seed }),
        json!({ "sections": r.sections.iter().map(|s| json!({ "theorem": s.theorem, "pass": s.pass() })).collect::<Vec<_>>() }),
    );
    for s in &r.sections {
        for c in &s.checks {
            let _ = writeln!(
                text,
                "{} {}: {}{}",
                if c.pass { "PASS" } else { "FAIL" },
                s.theorem,
                c.name,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
            );
            report = report.check(format!("{}: {}", s.theorem, c.name), c.pass, c.detail.clone());
        }
    }
    Ok(Run::new(report, text))
}

fn dispatch(cli: &Cli) -> Result<Run> {
    match &cli.command {
        Command::Schema { instance } => schema_cmd(instance),
        Command::Primrec(c) => primrec_cmd(cli, c),
        Command::Ltl(c) => ltl_cmd(cli, c),
        Command::Boolos(c) => boolos_cmd(cli, c),
        Command::Euclid(c) => euclid_cmd(c),
        Command::Inclosure(c) => inclosure_cmd(c),
        Command::RunAll { profile } => run_all_cmd(cli, *profile),
    }
}

/// Parses `argv`, runs the command and returns the exit code: 0 when every
/// check passes, 1 when one fails, 2 for usage or input errors, 3 when a
/// budget or factor search left the answer open.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(run) => {
            let _ = if cli.json {
                writeln!(out, "{}", run.report.to_json())
            } else {
                write!(out, "{}", run.text)
            };
            if !run.report.all_pass() {
                1
            } else if run.undecided {
                3
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
