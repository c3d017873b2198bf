use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cmdyn::dynamics::Cache;
use cmdyn::pipeline::{self, PipelineError, Route};

#[derive(Parser, Debug)]
#[command(name = "cmdyn", version, about = "Periodic points, class polynomials and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for cached resultants
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized parts of factoring and testing
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Allow parameters beyond the usual guards
    #[arg(long, global = true)]
    force: bool,
    /// Allow the long-running period-7 workload
    #[arg(long, global = true)]
    heavy: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor P_n and label each factor by its discriminant
    Pn {
        #[arg(long)]
        n: u32,
    },
    /// Class-number ledger from quadratic forms
    Deuring {
        #[arg(long)]
        max_n: u32,
    },
    /// Lift periodic orbits 2-adically and check them against b_d
    PadicVerify {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
    /// Pre-periodic tower polynomial above b_d
    Preperiodic {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u32,
    },
    /// Class equation H_{-d}
    Classpoly {
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Via::Both)]
        via: Via,
    },
    /// Modular equation for lambda and the j-lambda relation
    LambdaIdentity {
        #[arg(long, default_value_t = 128)]
        terms: usize,
    },
    /// Factor a polynomial read from a file (JSON or an expression)
    Factor {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Via {
    Bd,
    Cm,
    Both,
}

impl From<Via> for Route {
    fn from(v: Via) -> Route {
        match v {
            Via::Bd => Route::Bd,
            Via::Cm => Route::Cm,
            Via::Both => Route::Both,
        }
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::OutOfRange(m) => Failure::Usage(m),
            e => Failure::Internal(e.to_string()),
        }
    }
}

struct Output {
    ok: bool,
    json: String,
    text: String,
}

fn output<T: Serialize>(ok: bool, report: &T, text: String) -> Result<Output, Failure> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Output { ok, json, text })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let cache = match &cli.cache_dir {
        Some(dir) => Cache::open(dir).map_err(|e| Failure::Internal(e.to_string()))?,
        None => Cache::none(),
    };
    let seed = cli.seed;
    match &cli.command {
        Command::Pn { n } => {
            if *n >= 7 && !cli.heavy {
                return Err(Failure::Usage(format!("period {n} is a heavy workload; pass --heavy")));
            }
            let r = pipeline::cmd_pn(*n, &cache, seed, cli.force)?;
            let mut t = String::new();
            let _ = writeln!(t, "P_{} degree {} (seed {})", r.n, r.degree, r.seed);
            for row in &r.rows {
                match (row.d, row.h) {
                    (Some(d), Some(h)) => {
                        let _ = writeln!(t, "d = {d}, h = {h}\n  b_d = {}", row.b);
                    }
                    _ => {
                        let _ = writeln!(t, "  {}", row.b);
                    }
                }
                if let Some(cp) = &row.class_poly {
                    let _ = writeln!(t, "  H = {cp}");
                }
            }
            let _ = writeln!(
                t,
                "degrees {} / ledger {} (target {}) / product {}",
                verdict(r.degrees_ok),
                verdict(r.ledger_ok),
                r.target,
                verdict(r.product_ok)
            );
            output(r.ok(), &r, t)
        }
        Command::Deuring { max_n } => {
            let rows = pipeline::cmd_deuring(*max_n)?;
            let mut t = String::new();
            for row in &rows {
                let ds: Vec<String> = row.members.iter().map(|m| format!("{}:{}", m.d, m.h)).collect();
                let _ = writeln!(
                    t,
                    "n = {}: sum h = {} target {} {}  [{}]",
                    row.n,
                    row.h_sum,
                    row.target,
                    verdict(row.ok),
                    ds.join(" ")
                );
            }
            output(rows.iter().all(|r| r.ok), &rows, t)
        }
        Command::PadicVerify { d, prec } => {
            let r = pipeline::cmd_padic_verify(*d, *prec, &cache, seed)?;
            let t = format!(
                "d = {} period {} prec {}: frobenius {} valuations {} reconstruction {} ({} orbits)\n",
                r.d,
                r.n,
                r.prec,
                verdict(r.frobenius_ok),
                verdict(r.valuations_ok),
                verdict(r.reconstruction_ok),
                r.orbits
            );
            output(r.ok(), &r, t)
        }
        Command::Preperiodic { d, r } => {
            let rep = pipeline::cmd_preperiodic(*d, *r, &cache, seed)?;
            let t = format!(
                "s_{}^({}) = {}\ndegree {} (expected {}) invariance {}\n",
                rep.d,
                rep.r,
                rep.poly,
                rep.degree,
                rep.expected_degree,
                verdict(rep.invariant_ok)
            );
            output(rep.ok(), &rep, t)
        }
        Command::Classpoly { d, via } => {
            let r = pipeline::cmd_classpoly(*d, (*via).into(), &cache, seed)?;
            let mut t = format!("d = {}, h = {}\n", r.d, r.h);
            if let Some(p) = &r.via_cm {
                let _ = writeln!(t, "cm: {p}");
            }
            if let Some(p) = &r.via_bd {
                let _ = writeln!(t, "bd: {p}");
            }
            if let Some(a) = r.agree {
                let _ = writeln!(t, "agree {}", verdict(a));
            }
            output(r.ok(), &r, t)
        }
        Command::LambdaIdentity { terms } => {
            let r = pipeline::cmd_lambda_identity(*terms, seed)?;
            let t = format!(
                "modular equation ({} terms): {}\nf opens {}\nj-lambda ({} trials): {}\n",
                r.modular.terms,
                verdict(r.modular.ok()),
                r.modular.f_head.join(", "),
                r.j_lambda.trials,
                verdict(r.j_lambda.ok())
            );
            output(r.ok(), &r, t)
        }
        Command::Factor { input } => {
            let text =
                std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let poly = pipeline::parse_poly(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let r = pipeline::cmd_factor(&poly, seed);
            let mut t = format!("content {}\n", r.factorization.content);
            for f in &r.factorization.factors {
                let coeffs = f.poly.coeffs.join(", ");
                let _ = writeln!(t, "[{coeffs}]^{}", f.mult);
            }
            output(r.reconstructs, &r, t)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
