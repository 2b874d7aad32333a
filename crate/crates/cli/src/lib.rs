//! Command-line front end: argument parsing, dispatch and report output.

pub mod catalog;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gwpower::astructure::{a_n, effectiveness_note, exponent_table, probe_disc, AStructure};
use gwpower::axioms::{axiom_check, AxiomReport};
use gwpower::error::Error;
use gwpower::expr::{parse_gw, parse_variety};
use gwpower::field::BaseField;
use gwpower::goettsche::{classical_series, goettsche_series};
use gwpower::gw::GwElement;
use gwpower::power::{Binomial, Corrupted, PowerStructure};
use gwpower::ring::GwRing;
use gwpower::sample::random_virtual;
use gwpower::series::{self, DEFAULT_ORDER};
use gwpower::variety::{chi_c, sym_chi, sym_class, verify_conjecture, VarietyClass};
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use catalog::{Catalog, EntryKind};
use report::{Report, Row};

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_260_415;

#[derive(Debug, Parser)]
#[command(name = "gwpower", version, about = "Power structures on Grothendieck-Witt rings")]
pub struct Cli {
    /// Base field: Q, R, C or Fp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    pub field: BaseField,
    /// Series truncation order (default 16; 6 for `axioms`).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of random cases for the randomized checks.
    #[arg(long, global = true)]
    pub cases: Option<usize>,
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Catalog of named classes (overrides $GWPOWER_CATALOG).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compactly supported A^1-Euler characteristic of a class.
    Chi {
        /// Variety expression or @catalog-name.
        #[arg(long)]
        class: String,
    },
    /// a_n of a quadratic form.
    An {
        #[arg(long)]
        n: usize,
        /// Form expression or @catalog-name.
        #[arg(long)]
        expr: String,
    },
    /// Sym^n of a class and its Euler characteristic.
    Sym {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
    },
    /// Compare chi_c(Sym^n X) with a_n(chi_c(X)).
    Verify {
        #[arg(long, required_unless_present = "all")]
        class: Option<String>,
        /// Run every variety entry of the catalog.
        #[arg(long, conflicts_with = "class")]
        all: bool,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Quadratic Göttsche series of a surface.
    Goettsche {
        /// chi_c of the surface: a form, or @catalog-name.
        #[arg(long)]
        chi: String,
    },
    /// Randomized power-structure axiom suite.
    Axioms {
        #[arg(long, value_enum, default_value_t = StructureArg::AStar)]
        structure: StructureArg,
        /// Corrupt b_2 to check that the suite notices.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Search for the exponent in the discriminant of a_n.
    ProbeDisc {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    /// (1-t)^{-r} on the integers.
    Binomial,
    /// a_* on GW of the chosen field.
    AStar,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: message }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let catalog = match Catalog::load(cli.catalog.as_deref()) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    match run_command(&cli, &catalog) {
        Ok(report) => {
            let stdout = if cli.json { report.to_json() + "\n" } else { report.to_text() };
            Outcome { code: report.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Chi { .. } => "chi",
        Command::An { .. } => "an",
        Command::Sym { .. } => "sym",
        Command::Verify { .. } => "verify",
        Command::Goettsche { .. } => "goettsche",
        Command::Axioms { .. } => "axioms",
        Command::ProbeDisc { .. } => "probe-disc",
    }
}

fn context(cmd: &str) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{cmd}: {e}")
}

fn variety_arg(catalog: &Catalog, text: &str, field: BaseField) -> Result<VarietyClass, String> {
    let (expr, kind) = catalog.resolve(text)?;
    if kind == Some(EntryKind::Gw) {
        return Err(format!("'{text}' is a quadratic form, not a variety class"));
    }
    parse_variety(expr, field).map_err(|e| e.to_string())
}

fn gw_arg(catalog: &Catalog, text: &str, field: BaseField) -> Result<GwElement, String> {
    let (expr, kind) = catalog.resolve(text)?;
    match kind {
        Some(EntryKind::Variety) => {
            let c = parse_variety(expr, field).map_err(|e| e.to_string())?;
            chi_c(&c).map_err(|e| e.to_string())
        }
        _ => parse_gw(expr, field).map_err(|e| e.to_string()),
    }
}

fn json<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("serializable")
}

/// Runs one parsed command against a loaded catalog.
pub fn run_command(cli: &Cli, catalog: &Catalog) -> Result<Report, String> {
    let field = cli.field;
    let name = command_name(&cli.command);
    let ctx = context(name);
    let base = Report::new(name, &field.to_string());
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    match &cli.command {
        Command::Chi { class } => {
            let c = variety_arg(catalog, class, field)?;
            let chi = chi_c(&c).map_err(&ctx)?;
            let mut r = base.input("class", &c);
            r.result = Some(serde_json::json!({ "chi_c": chi.to_string(), "rank": chi.rank() }));
            Ok(r)
        }
        Command::An { n, expr } => {
            let q = gw_arg(catalog, expr, field)?;
            let value = a_n(&q, *n as i64).map_err(&ctx)?;
            let mut r = base.input("expr", &q).input("n", n);
            r.rows.push(Row {
                n: *n,
                lhs: Some(value.to_string()),
                rhs: None,
                equal: None,
                method: "a_*".into(),
            });
            r.notes.extend(effectiveness_note(&value));
            Ok(r)
        }
        Command::Sym { class, n } => {
            let c = variety_arg(catalog, class, field)?;
            let mut r = base.input("class", &c).input("n", n);
            let geometric = match sym_class(&c, *n) {
                Ok(s) => Some(s.to_string()),
                Err(Error::Unsupported(msg)) => {
                    r.notes.push(msg);
                    None
                }
                Err(e) => return Err(ctx(e)),
            };
            let chi = chi_c(&c).map_err(&ctx)?;
            let rhs = a_n(&chi, *n as i64).map_err(&ctx)?;
            let lhs = match sym_chi(&c, *n) {
                Ok(v) => Some(v),
                Err(Error::Unsupported(msg)) => {
                    r.notes.push(msg);
                    None
                }
                Err(e) => return Err(ctx(e)),
            };
            let equal = match &lhs {
                Some(l) => Some(gwpower::gw::gw_equal(l, &rhs).map_err(&ctx)?),
                None => None,
            };
            r.pass = equal != Some(false);
            r.rows.push(Row {
                n: *n,
                lhs: lhs.map(|v| v.to_string()),
                rhs: Some(rhs.to_string()),
                equal,
                method: "sym".into(),
            });
            r.result = Some(serde_json::json!({ "sym_class": geometric }));
            Ok(r)
        }
        Command::Verify { class, all, max_n } => {
            let targets: Vec<(String, String)> = if *all {
                catalog
                    .entries()
                    .filter(|e| e.kind == EntryKind::Variety)
                    .map(|e| (format!("@{}", e.name), e.expr.clone()))
                    .collect()
            } else {
                let text = class.clone().expect("clap enforces --class or --all");
                vec![(text.clone(), text)]
            };
            let mut r = base.input("max_n", max_n);
            if !*all {
                r = r.input("class", &targets[0].0);
            }
            for (label, _) in &targets {
                let c = variety_arg(catalog, label, field)?;
                let rep = verify_conjecture(&c, *max_n).map_err(&ctx)?;
                if rep.prediction_only {
                    r.notes.push(format!("{label}: chi_c(Sym^n) unknown; rows give the predicted a_n(chi_c)"));
                }
                r.pass &= rep.pass;
                for row in rep.rows {
                    let method = if *all { format!("{} [{label}]", row.method) } else { row.method };
                    r.rows.push(Row {
                        n: row.n,
                        lhs: row.lhs.map(|v| v.to_string()),
                        rhs: Some(row.rhs.to_string()),
                        equal: row.equal,
                        method,
                    });
                }
            }
            Ok(r)
        }
        Command::Goettsche { chi } => {
            let q = gw_arg(catalog, chi, field)?;
            let s = goettsche_series(&q, order).map_err(&ctx)?;
            let classical = classical_series(q.rank(), order);
            let mut r = base.input("chi", &q).input("order", order);
            for (n, c) in s.coeffs().iter().enumerate() {
                let ok = c.rank() == classical[n];
                r.pass &= ok;
                r.rows.push(Row {
                    n,
                    lhs: Some(c.to_string()),
                    rhs: Some(format!("rank {}", classical[n])),
                    equal: Some(ok),
                    method: "rank-specialization".into(),
                });
            }
            r.result = Some(serde_json::json!({ "series": series::render(&GwRing::new(field), &s) }));
            Ok(r)
        }
        Command::Axioms { structure, inject_fault } => {
            let cases = cli.cases.unwrap_or(500);
            let order = cli.order.unwrap_or(6);
            let seed = cli.seed;
            let rep = match structure {
                StructureArg::Binomial => {
                    let z = |rng: &mut ChaCha8Rng| rng.random_range(-2i64..=2);
                    axioms_with_fault(&Binomial, z, seed, cases, order, *inject_fault)
                }
                StructureArg::AStar => {
                    let sampler = move |rng: &mut ChaCha8Rng| random_virtual(field, 2, 2, rng);
                    axioms_with_fault(&AStructure::new(field), sampler, seed, cases, order, *inject_fault)
                }
            }
            .map_err(&ctx)?;
            let mut r = base
                .input("structure", &rep.structure)
                .input("cases", cases)
                .input("order", order)
                .input("seed", seed)
                .input("inject_fault", inject_fault);
            r.pass = rep.pass;
            let summary: Vec<serde_json::Value> = rep
                .results
                .iter()
                .map(|a| {
                    serde_json::json!({
                        "axiom": a.axiom,
                        "checked": a.checked,
                        "status": if a.failures.is_empty() { "ok" } else { "FAILED" },
                        "witness": a.failures.first().map(|w| format!(
                            "case {} at t^{}: {} vs {} ({})", w.case, w.n, w.lhs, w.rhs, w.input
                        )),
                    })
                })
                .collect();
            r.result = Some(serde_json::json!({ "axioms": summary }));
            Ok(r)
        }
        Command::ProbeDisc { max_n, max_rank } => {
            let rep = probe_disc(field, *max_n, *max_rank, cli.seed).map_err(&ctx)?;
            let mut r = base
                .input("max_n", max_n)
                .input("max_rank", max_rank)
                .input("seed", cli.seed);
            r.pass = rep.identified();
            let table = |conv: &str| -> Vec<String> {
                let t = exponent_table(&rep, conv);
                (1..=*max_n)
                    .map(|n| {
                        let cells: Vec<String> = (0..=*max_rank)
                            .map(|rank| match t.get(&(n, rank)).copied().flatten() {
                                Some(e) => e.to_string(),
                                None => "?".into(),
                            })
                            .collect();
                        format!("n={n}: {}", cells.join(" "))
                    })
                    .collect()
            };
            r.result = Some(serde_json::json!({
                "verdicts": json(&rep.verdicts),
                "plain exponents (rank 0..)": table("plain"),
                "signed exponents (rank 0..)": table("signed"),
            }));
            for v in &rep.verdicts {
                if v.consistent {
                    r.notes.push(format!(
                        "{} convention: consistent; matches C(n+r-1, n): {}; matches C(n+r-1, n-1): {}",
                        v.convention, v.matches_stated, v.matches_candidate
                    ));
                }
            }
            Ok(r)
        }
    }
}

fn axioms_with_fault<P, S>(
    ps: &P,
    sampler: S,
    seed: u64,
    cases: usize,
    order: usize,
    fault: bool,
) -> gwpower::error::Result<AxiomReport>
where
    P: PowerStructure + Clone,
    S: Fn(&mut ChaCha8Rng) -> gwpower::power::ElemOf<P> + Sync,
{
    if fault {
        axiom_check(&Corrupted { inner: ps.clone() }, sampler, seed, cases, order)
    } else {
        axiom_check(ps, sampler, seed, cases, order)
    }
}
