use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use majlat_core::couplings::{comonotone_coupling, independent_coupling, sorted_mass_vector, Coupling};
use majlat_core::econ::{entropy_distance_in, renyi_theil_in, theil_in};
use majlat_core::entropy::{entropy, AlphaOrder, Family, LogBase};
use majlat_core::inequalities::{delta_supermod, search_counterexamples, sweep_verify, Predicate, SweepConfig};
use majlat_core::io::{format_number, load_pmf, lorenz_csv, round_to};
use majlat_core::lattice::{join, meet};
use majlat_core::{Error, OrderedPmf};

/// Majorization lattice toolkit: meet, join, couplings, entropies and
/// inequality sweeps on ordered probability vectors.
#[derive(Parser)]
#[command(name = "majlat", version)]
struct Cli {
    /// Decimal digits in printed values.
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
    /// Logarithm base for Rényi and Theil outputs: e, 2 or a positive real.
    #[arg(long, global = true, default_value = "e")]
    base: String,
    /// Reject inputs whose masses do not sum to one instead of renormalizing.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// First PMF file (JSON or single-column CSV).
    #[arg(long)]
    a: PathBuf,
    /// Second PMF file.
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args, Default)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Independent,
    Comonotone,
}

#[derive(Subcommand)]
enum Command {
    /// Rényi or Tsallis entropy of a PMF.
    Entropy {
        #[arg(long)]
        pmf: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "renyi")]
        family: String,
    },
    /// Greatest lower bound of two PMFs.
    Meet {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        format: Format,
    },
    /// Least upper bound of two PMFs.
    Join {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        format: Format,
    },
    /// Independent or comonotone coupling of two PMFs.
    Coupling {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Print the masses as a sorted PMF instead of cells.
        #[arg(long)]
        sorted: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Lorenz curve breakpoints as CSV.
    Lorenz {
        #[arg(long)]
        pmf: PathBuf,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Supermodularity gap F(p∧q) + F(p∨q) - F(p) - F(q) over a list of orders.
    Delta {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "renyi")]
        family: String,
        #[arg(long, default_value = "0,0.2,0.5,0.7,0.9,1,2,inf")]
        alphas: String,
    },
    /// Seeded sweep checking entropy inequalities; exits 1 on any violation.
    Verify {
        /// Comma-separated predicates.
        #[arg(long, default_value = "subadd")]
        predicate: String,
        /// Comma-separated families.
        #[arg(long, default_value = "renyi")]
        family: String,
        #[arg(long, default_value = "0,0.5,1,2,inf")]
        alphas: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Upper end of a dimension range starting at --n.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// PMFs per sample for corollary2.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        threads: Option<usize>,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Seeded search for pairs with positive and negative supermodularity gaps.
    Search {
        #[arg(long, alias = "alphas", default_value = "0.5")]
        alpha: String,
        #[arg(long, default_value = "renyi")]
        family: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Entropy distance H(a) + H(b) - 2H(a∨b).
    Metric {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// Theil index ln n - H(x), or its Rényi analogue with --alpha.
    Theil {
        #[arg(long)]
        pmf: PathBuf,
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Use the support size as n instead of the vector length.
        #[arg(long)]
        trim_zeros: bool,
    },
}

/// Failure that should exit with code 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Ctx {
    precision: usize,
    base: LogBase,
    strict: bool,
}

impl Ctx {
    fn load(&self, path: &Path) -> anyhow::Result<OrderedPmf> {
        load_pmf(path, self.strict).with_context(|| format!("reading {}", path.display()))
    }

    fn num(&self, x: f64) -> Value {
        if x.is_finite() {
            json!(round_to(x, self.precision))
        } else {
            json!(x.to_string())
        }
    }

    fn nums(&self, xs: &[f64]) -> Value {
        Value::Array(xs.iter().map(|&x| self.num(x)).collect())
    }
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => panic!("writing to stdout: {e}"),
        _ => {}
    }
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")));
}

fn pmf_output(ctx: &Ctx, p: &OrderedPmf, format: &Format) {
    let cum = p.prefix_sums();
    if format.csv {
        let mut out = String::from("k,mass,prefix\n");
        for (k, (m, c)) in p.masses().iter().zip(cum.breakpoints()).enumerate() {
            out.push_str(&format!("{},{},{}\n", k + 1, format_number(*m, ctx.precision), format_number(*c, ctx.precision)));
        }
        emit(&out);
    } else {
        print_json(&json!({
            "pmf": ctx.nums(p.masses()),
            "prefix_sums": ctx.nums(cum.breakpoints()),
        }));
    }
}

fn coupling_output(ctx: &Ctx, c: &Coupling, format: &Format) {
    if format.json {
        let cells: Vec<Value> = c
            .cells()
            .iter()
            .map(|cell| json!({"i": cell.row + 1, "j": cell.col + 1, "mass": ctx.num(cell.mass)}))
            .collect();
        print_json(&json!({ "cells": cells }));
    } else {
        let mut out = String::from("i,j,mass\n");
        for cell in c.cells() {
            out.push_str(&format!("{},{},{}\n", cell.row + 1, cell.col + 1, format_number(cell.mass, ctx.precision)));
        }
        emit(&out);
    }
}

fn sweep_threads(cfg: SweepConfig, threads: Option<usize>) -> SweepConfig {
    match threads {
        Some(t) => cfg.threads(t),
        None => cfg,
    }
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>, Error> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    let ctx = Ctx {
        precision: cli.precision as usize,
        base: cli.base.parse()?,
        strict: cli.strict,
    };
    match cli.command {
        Command::Entropy { pmf, alpha, family } => {
            let p = ctx.load(&pmf)?;
            let alpha: AlphaOrder = alpha.parse()?;
            let family: Family = family.parse()?;
            let mut value = entropy(family, &p, alpha)?;
            if family == Family::Renyi {
                value /= ctx.base.nats_per_unit();
            }
            print_json(&json!({
                "alpha": alpha,
                "family": family,
                "base": ctx.base.to_string(),
                "value": ctx.num(value),
            }));
        }
        Command::Meet { pair, format } => {
            let (a, b) = (ctx.load(&pair.a)?, ctx.load(&pair.b)?);
            pmf_output(&ctx, &meet(&a, &b), &format);
        }
        Command::Join { pair, format } => {
            let (a, b) = (ctx.load(&pair.a)?, ctx.load(&pair.b)?);
            pmf_output(&ctx, &join(&a, &b), &format);
        }
        Command::Coupling { pair, kind, sorted, format } => {
            let (a, b) = (ctx.load(&pair.a)?, ctx.load(&pair.b)?);
            let c = match kind {
                Kind::Independent => independent_coupling(&a, &b),
                Kind::Comonotone => comonotone_coupling(&a, &b),
            };
            if sorted {
                let v = sorted_mass_vector(&c, None);
                print_json(&json!({ "pmf": ctx.nums(v.masses()) }));
            } else {
                coupling_output(&ctx, &c, &format);
            }
        }
        Command::Lorenz { pmf, out } => {
            let csv = lorenz_csv(&ctx.load(&pmf)?, ctx.precision);
            match out {
                Some(path) => fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => emit(&csv),
            }
        }
        Command::Delta { pair, family, alphas } => {
            let (a, b) = (ctx.load(&pair.a)?, ctx.load(&pair.b)?);
            let family: Family = family.parse()?;
            let rows = AlphaOrder::parse_list(&alphas)?
                .into_iter()
                .map(|alpha| {
                    let d = delta_supermod(&a, &b, alpha, family)?;
                    Ok(json!({"alpha": alpha, "delta": ctx.num(d)}))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            print_json(&json!({ "family": family, "deltas": rows }));
        }
        Command::Verify {
            predicate,
            family,
            alphas,
            n,
            n_max,
            samples,
            seed,
            m,
            threads,
            report,
        } => {
            let mut cfg = SweepConfig::new(n)
                .dims(n, n_max.unwrap_or(n))
                .families(&parse_list::<Family>(&family)?)
                .predicates(&parse_list::<Predicate>(&predicate)?)
                .samples(samples)
                .seed(seed)
                .m(m);
            cfg.alphas = AlphaOrder::parse_list(&alphas)?;
            let rep = sweep_verify(&sweep_threads(cfg, threads))?;
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&rep)?;
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            print_json(&json!({
                "samples_run": rep.samples_run,
                "checks_run": rep.checks_run,
                "checks_skipped": rep.checks_skipped,
                "violation_count": rep.violation_count,
                "worst_gap": rep.worst_gap,
            }));
            if !rep.is_clean() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Search {
            alpha,
            family,
            n,
            samples,
            seed,
            threads,
        } => {
            let mut cfg = SweepConfig::new(n)
                .families(&parse_list::<Family>(&family)?)
                .samples(samples)
                .seed(seed);
            cfg.alphas = AlphaOrder::parse_list(&alpha)?;
            let rep = search_counterexamples(&sweep_threads(cfg, threads))?;
            print_json(&json!({
                "samples_run": rep.samples_run,
                "witnesses": rep.witnesses,
            }));
        }
        Command::Metric { pair, alpha } => {
            let (a, b) = (ctx.load(&pair.a)?, ctx.load(&pair.b)?);
            let d = entropy_distance_in(&a, &b, alpha.parse()?, ctx.base)?;
            print_json(&json!({"value": ctx.num(d.value), "alpha": d.alpha, "base": ctx.base.to_string()}));
        }
        Command::Theil { pmf, alpha, trim_zeros } => {
            let mut p = ctx.load(&pmf)?;
            if trim_zeros {
                p = p.trimmed();
            }
            let alpha: AlphaOrder = alpha.parse()?;
            let value = if alpha == AlphaOrder::One {
                theil_in(&p, ctx.base)
            } else {
                renyi_theil_in(&p, alpha, ctx.base)?
            };
            print_json(&json!({"value": ctx.num(value), "alpha": alpha, "base": ctx.base.to_string()}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

