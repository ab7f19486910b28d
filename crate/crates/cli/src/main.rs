//! `krel`: evaluate, translate and test queries over K-relations.

use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use krel::experiments::{
    adom_failure_nonzsf, bag_division_report, bag_support_even, expression_bounds,
    fuzzy_support_witness, security_no_monus, Report,
};
use krel::harness::{
    a2c_trial, c2a_trial, check_domain_independence, check_equivalence, monus_axiom_suite,
    semiring_axiom_suite, tally, AxiomReport, GenConfig, Mismatch, Verdict,
};
use krel::transpile::{adom_expr, algebra_to_calculus, calculus_to_algebra};
use krel::{AlgebraExpr, Formula, KDatabase, KRelation, KStructure, Schema, Semiring, Translation};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "krel",
    version,
    about = "Relational algebra and calculus over K-relations"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Database file (JSON).
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    /// Semiring instance; must agree with the database when both are given.
    #[arg(long, global = true)]
    semiring: Option<Semiring>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    out: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    /// algebra to calculus
    A2c,
    /// calculus to algebra
    C2a,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    BagDivision,
    Bounds,
    Security,
    FuzzySupport,
    BagSupportEven,
    AdomFailure,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an algebra expression on the database.
    EvalAlgebra { expr: String },
    /// Evaluate a formula over the active domain, plus `--extra` fresh elements.
    EvalCalculus {
        formula: String,
        #[arg(long, default_value_t = 0)]
        extra: usize,
    },
    /// Translate between the algebra and the calculus.
    Translate {
        direction: Direction,
        query: String,
        /// Schema such as `R:2,S:1`; taken from `--db` when omitted.
        #[arg(long)]
        schema: Option<Schema>,
    },
    /// Check that a query and its translation agree. Without a query, runs
    /// seeded random trials instead.
    CheckEquiv {
        direction: Direction,
        query: Option<String>,
        /// Let random algebra expressions use division.
        #[arg(long)]
        allow_div: bool,
        /// Let random formulas use universal quantifiers.
        #[arg(long)]
        allow_forall: bool,
    },
    /// Compare a formula over the active domain and over a larger universe.
    CheckDomind {
        formula: String,
        #[arg(long, default_value_t = 1)]
        extra: usize,
    },
    /// Evaluate the active-domain expression and compare it with adom.
    Adom,
    /// Check the semiring and monus axioms on random samples.
    Axioms,
    /// Run one of the experiments.
    Experiment {
        name: Experiment,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Interactive session over a database.
    Repl,
}

/// Whether the property a command checks held.
enum Outcome {
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::EvalAlgebra { expr } => {
            let db = load_db(c)?;
            let e = AlgebraExpr::parse(expr).context("parsing the expression")?;
            let r = e.eval(&db)?;
            print_relation(c.out, &r, None);
            Ok(Outcome::Pass)
        }
        Command::EvalCalculus { formula, extra } => {
            let db = load_db(c)?;
            let phi = Formula::parse(formula).context("parsing the formula")?;
            phi.check(db.schema())?;
            let r = phi.relation_of(&structure(&db, *extra)?)?;
            print_relation(c.out, &r, Some(&phi.free_vars()?));
            Ok(Outcome::Pass)
        }
        Command::Translate {
            direction,
            query,
            schema,
        } => {
            let schema = match schema {
                Some(s) => s.clone(),
                None => load_db(c)
                    .context("translation needs `--schema` or `--db`")?
                    .schema()
                    .clone(),
            };
            println!("{}", translate(c.out, *direction, query, &schema)?);
            Ok(Outcome::Pass)
        }
        Command::CheckEquiv {
            direction,
            query: Some(query),
            ..
        } => {
            let db = load_db(c)?;
            let m = match direction {
                Direction::A2c => {
                    let e = AlgebraExpr::parse(query).context("parsing the expression")?;
                    let t = algebra_to_calculus(&e, db.schema())?;
                    check_equivalence(&e, &t.output, &t.witness, t.requires, &db)?
                }
                Direction::C2a => {
                    let phi = Formula::parse(query).context("parsing the formula")?;
                    let t = calculus_to_algebra(&phi, db.schema())?;
                    check_equivalence(&t.output, &phi, &t.witness, t.requires, &db)?
                }
            };
            Ok(report_mismatch(c.out, "equivalence", m.as_ref()))
        }
        Command::CheckEquiv {
            direction,
            query: None,
            allow_div,
            allow_forall,
        } => random_trials(c, *direction, *allow_div, *allow_forall),
        Command::CheckDomind { formula, extra } => {
            let db = load_db(c)?;
            let phi = Formula::parse(formula).context("parsing the formula")?;
            phi.check(db.schema())?;
            let m = check_domain_independence(&phi, &db, *extra)?;
            Ok(report_mismatch(c.out, "domain independence", m.as_ref()))
        }
        Command::Adom => {
            let db = load_db(c)?;
            let e = adom_expr(db.schema())?;
            let r = e.eval(&db)?;
            let adom: Vec<String> = db.active_domain().iter().map(|e| e.to_string()).collect();
            let pass = r.arity() == 1
                && r.rows().all(|(_, v)| *v == db.semiring().one())
                && r.support_tuples()
                    .map(|t| t[0].to_string())
                    .eq(adom.iter().cloned());
            match c.out {
                Format::Json => println!(
                    "{}",
                    json!({"expr": e.to_string(), "result": r.to_json(), "adom": adom, "pass": pass})
                ),
                Format::Table => {
                    println!("{e}");
                    println!("result: {r}");
                    println!("adom:   {{{}}}", adom.join(", "));
                    println!("{}", if pass { "PASS" } else { "FAIL" });
                }
            }
            Ok(pass.into())
        }
        Command::Axioms => {
            let instances = match c.semiring {
                Some(k) => vec![k],
                None => Semiring::ALL.to_vec(),
            };
            let mut pass = true;
            for k in instances {
                let mut reports = vec![("semiring", semiring_axiom_suite(k, c.samples, c.seed)?)];
                if k.descriptor().has_monus {
                    reports.push(("monus", monus_axiom_suite(k, c.samples, c.seed)?));
                }
                for (suite, r) in reports {
                    pass &= r.passed();
                    print_axioms(c.out, suite, &r);
                }
            }
            Ok(pass.into())
        }
        Command::Experiment { name, n } => {
            let (pass, table, json) = match name {
                Experiment::BagDivision => summarize(bag_division_report(*n)?),
                Experiment::Bounds => summarize(expression_bounds(*n, c.samples, c.seed)?),
                Experiment::Security => summarize(security_no_monus()?),
                Experiment::FuzzySupport => summarize(fuzzy_support_witness(c.samples, c.seed)?),
                Experiment::BagSupportEven => summarize(bag_support_even(c.samples, c.seed)?),
                Experiment::AdomFailure => summarize(adom_failure_nonzsf()?),
            };
            match c.out {
                Format::Table => println!("{table}"),
                Format::Json => println!("{json}"),
            }
            Ok(pass.into())
        }
        Command::Repl => {
            let db = load_db(c)?;
            repl(&db, c.out)?;
            Ok(Outcome::Pass)
        }
    }
}

fn summarize(r: impl Report) -> (bool, String, serde_json::Value) {
    (r.passed(), r.table(), r.to_json())
}

fn load_db(c: &Common) -> Result<KDatabase> {
    let Some(path) = &c.db else {
        bail!("this command needs `--db <file>`");
    };
    let db = read_db(path)?;
    if let Some(k) = c.semiring {
        if k != db.semiring() {
            bail!(
                "--semiring {k} does not match the database semiring {}",
                db.semiring()
            );
        }
    }
    if !db.is_nontrivial() {
        eprintln!("warning: every relation in {} is empty", path.display());
    }
    Ok(db)
}

fn read_db(path: &Path) -> Result<KDatabase> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    KDatabase::from_json_str(&text).with_context(|| format!("loading {}", path.display()))
}

fn structure(db: &KDatabase, extra: usize) -> Result<KStructure> {
    let adom = db.active_domain();
    let mut universe = adom.clone();
    universe.extend(krel::harness::fresh_elements(&adom, extra));
    Ok(KStructure::with_universe(db, universe)?)
}

fn print_relation(out: Format, r: &KRelation, columns: Option<&[String]>) {
    match out {
        Format::Json => {
            let mut j = r.to_json();
            if let Some(cols) = columns {
                j["columns"] = json!(cols);
            }
            println!("{j}");
        }
        Format::Table => {
            if let Some(cols) = columns {
                println!("columns: ({})", cols.join(","));
            }
            println!("{r}");
        }
    }
}

fn translate(out: Format, direction: Direction, query: &str, schema: &Schema) -> Result<String> {
    fn render<T: std::fmt::Display>(out: Format, t: Translation<T>) -> String {
        match out {
            Format::Json => json!({
                "output": t.output.to_string(),
                "witness": t.witness,
                "requires": t.requires.name(),
            })
            .to_string(),
            Format::Table => format!(
                "{}\nwitness: ({})\nrequires: {}",
                t.output,
                t.witness.join(","),
                t.requires.name()
            ),
        }
    }
    Ok(match direction {
        Direction::A2c => {
            let e = AlgebraExpr::parse(query).context("parsing the expression")?;
            render(out, algebra_to_calculus(&e, schema)?)
        }
        Direction::C2a => {
            let phi = Formula::parse(query).context("parsing the formula")?;
            render(out, calculus_to_algebra(&phi, schema)?)
        }
    })
}

fn report_mismatch(out: Format, property: &str, m: Option<&Mismatch>) -> Outcome {
    match out {
        Format::Json => println!(
            "{}",
            json!({"property": property, "pass": m.is_none(), "counterexample": m.map(|m| m.to_string())})
        ),
        Format::Table => match m {
            None => println!("{property}: PASS"),
            Some(m) => println!("{property}: FAIL {m}"),
        },
    }
    m.is_none().into()
}

fn random_trials(
    c: &Common,
    direction: Direction,
    allow_div: bool,
    allow_forall: bool,
) -> Result<Outcome> {
    let k = match (c.semiring, &c.db) {
        (Some(k), _) => k,
        (None, Some(_)) => {
            bail!("random trials generate their own databases; pass `--semiring` instead of `--db`")
        }
        (None, None) => Semiring::Bag,
    };
    let schema = krel::harness::default_schema();
    let mut verdicts: Vec<Verdict> = Vec::new();
    for i in 0..c.samples as u64 {
        let mut cfg = GenConfig::new(k, c.seed.wrapping_add(i));
        cfg.allow_div = allow_div;
        cfg.allow_forall = allow_forall;
        verdicts.extend(match direction {
            Direction::A2c => a2c_trial(&cfg, &schema)?,
            Direction::C2a => c2a_trial(&cfg, &schema)?,
        });
    }
    let pass = verdicts.iter().all(|v| v.pass);
    match c.out {
        Format::Json => {
            for v in &verdicts {
                println!("{}", v.to_json_line());
            }
        }
        Format::Table => {
            for (property, (passed, failed)) in tally(&verdicts) {
                println!("{property}: {passed} passed, {failed} failed");
            }
            for v in verdicts.iter().filter(|v| !v.pass) {
                println!(
                    "  seed {}: {}",
                    v.seed,
                    v.counterexample
                        .as_deref()
                        .unwrap_or("no counterexample recorded")
                );
            }
        }
    }
    Ok(pass.into())
}

fn print_axioms(out: Format, suite: &str, r: &AxiomReport) {
    match out {
        Format::Json => println!(
            "{}",
            json!({"suite": suite, "semiring": r.semiring, "checked": r.checked, "failures": r.failures})
        ),
        Format::Table => {
            println!(
                "{} {suite}: {} checked, {} failures",
                r.semiring,
                r.checked,
                r.failures.len()
            );
            for f in r.failures.iter().take(5) {
                println!("  {f}");
            }
        }
    }
}

/// Reads queries line by line; a bad line prints an error and the session
/// carries on.
fn repl(db: &KDatabase, out: Format) -> Result<()> {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut stdout = io::stdout();
    loop {
        if interactive {
            write!(stdout, "krel> ")?;
            stdout.flush()?;
        }
        let mut line = String::new();
        if stdin.lock().read_line(&mut line)? == 0 {
            return Ok(());
        }
        let line = line.trim();
        match line {
            "" => continue,
            ":quit" | ":q" => return Ok(()),
            _ => {}
        }
        if let Err(e) = repl_line(db, out, line) {
            println!("error: {e:#}");
        }
    }
}

fn repl_line(db: &KDatabase, out: Format, line: &str) -> Result<()> {
    if let Some(rest) = line.strip_prefix(":translate") {
        let rest = rest.trim_start();
        let (dir, query) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let direction = Direction::from_str(dir, true)
            .map_err(|_| anyhow::anyhow!("usage: :translate a2c|c2a <query>"))?;
        println!("{}", translate(out, direction, query.trim(), db.schema())?);
        return Ok(());
    }
    if line == ":semiring" {
        let d = db.semiring().descriptor();
        println!(
            "{}: zero-sum-free {}, no zero divisors {}, positive {}, monus {}",
            d.name, d.zero_sum_free, d.no_zero_divisors, d.positive, d.has_monus
        );
        return Ok(());
    }
    if line.starts_with(':') {
        bail!("unknown directive; try :translate, :semiring or :quit");
    }
    match AlgebraExpr::parse(line) {
        Ok(e) => print_relation(out, &e.eval(db)?, None),
        Err(algebra_err) => {
            let phi = Formula::parse(line).map_err(|formula_err| {
                anyhow::anyhow!("not an expression ({algebra_err}) nor a formula ({formula_err})")
            })?;
            phi.check(db.schema())?;
            print_relation(
                out,
                &phi.relation_of(&structure(db, 0)?)?,
                Some(&phi.free_vars()?),
            );
        }
    }
    Ok(())
}
