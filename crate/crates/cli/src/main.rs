use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cac_core::catalog::{default_requests, Catalog, CatalogRequest};
use cac_core::channel::{priority_report, verify_guarantee, Mode};
use cac_core::constructions::{
    check_sdr_conditions, check_wp_condition, construct_2w1p_small, construct_2w1pr, construct_direct,
    construct_wpr, extend_to_pr, mixed_2w1pr, mixed_w1pr, mixed_wpr, search_base_with_budget, BaseCode,
    DirectParams, DEFAULT_SEARCH_BUDGET,
};
use cac_core::optimality::{certify, k_equi_oracle, k_exact_oracle, k_mixed_oracle, TheoremTag, DEFAULT_NODE_BUDGET};
use cac_core::{verify_cac, CacError, Code, Result, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

/// Conflict-avoiding codes: build, verify, certify, simulate.
#[derive(Parser, Debug)]
#[command(name = "cac", version)]
struct Cli {
    /// TOML file with defaults for `seed`, `budget` and `out`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct Config {
    seed: Option<u64>,
    budget: Option<u64>,
    out: Option<PathBuf>,
}

/// Flag values after merging the config file; flags win.
struct Settings {
    seed: u64,
    budget: Option<u64>,
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and print its JSON.
    Construct(ConstructArgs),
    /// Check that a code file has pairwise disjoint difference sets.
    Verify { file: PathBuf },
    /// Check a theorem's hypotheses and emit a certificate with a witness.
    Certify(CertifyArgs),
    /// Exhaustively compute K(L, w), K^e(L, w) or a mixed-weight maximum.
    SearchK(SearchArgs),
    /// Report the residue conditions for (p, w, d).
    Conditions {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        w: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
    /// Check the per-window success guarantee on a code file.
    Simulate(SimulateArgs),
    /// Build or verify a catalog of certified codes.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Direct,
    Pr,
    Wpr,
    #[value(name = "2w1pr")]
    TwoW1pr,
    #[value(name = "2w1p-small")]
    TwoW1pSmall,
    MixedW1pr,
    MixedWpr,
    #[value(name = "mixed-2w1pr")]
    Mixed2w1pr,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Kind,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    w: u64,
    #[arg(long, default_value_t = 1)]
    d: u64,
    /// Weight of the base code for the mixed constructions.
    #[arg(long)]
    w_star: Option<u64>,
    /// Base code file: length p for the recursive kinds, p^r for mixed-w1pr.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Base generators, comma separated, instead of a file or a search.
    #[arg(long, value_delimiter = ',')]
    gens: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Theorem name, e.g. main-direct, main-pr, mixed-w1pr, upper-prime-factors.
    theorem: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    w_star: Option<u64>,
    #[arg(long = "L", alias = "l")]
    l: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    gens: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long = "L", alias = "l")]
    l: u64,
    #[arg(long)]
    w: usize,
    /// Restrict to equi-difference codewords.
    #[arg(long)]
    equi: bool,
    /// With --n: weight of the codewords that must appear exactly n times.
    #[arg(long, requires = "n")]
    w_star: Option<usize>,
    #[arg(long, requires = "w_star")]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    file: PathBuf,
    /// Largest number of simultaneously active users.
    #[arg(long)]
    w_limit: usize,
    /// Enumerate all offsets and active sets instead of sampling.
    #[arg(long, conflicts_with = "priority")]
    exhaustive: bool,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Per-weight report for a mixed-weight code; w_limit is the base weight.
    #[arg(long)]
    priority: bool,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Build entries from a request list (JSON or TOML), or the default list.
    Build {
        #[arg(long)]
        requests: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        dir: PathBuf,
    },
    /// Load a catalog and re-verify every entry.
    Verify { path: PathBuf },
}

#[derive(Deserialize)]
struct RequestList {
    requests: Vec<CatalogRequest>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn invalid(msg: impl Into<String>) -> CacError {
    CacError::Invalid(msg.into())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn settings(cli: &Cli) -> Result<Settings> {
    let config = match &cli.config {
        Some(path) => toml::from_str::<Config>(&read(path)?)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?,
        None => Config::default(),
    };
    Ok(Settings {
        seed: cli.seed.or(config.seed).unwrap_or(0),
        budget: cli.budget.or(config.budget),
        out: cli.out.clone().or(config.out),
    })
}

fn emit(settings: &Settings, text: &str) -> Result<()> {
    match &settings.out {
        Some(path) => fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<()> {
    let s = settings(&cli)?;
    match cli.command {
        Command::Construct(args) => emit(&s, &construct(&args, &s)?.to_json()),
        Command::Verify { file } => {
            let code = Code::from_json(&read(&file)?)?;
            match verify_cac(&code) {
                Verdict::Ok => {
                    emit(&s, &format!("ok: {} codewords, weights {:?}\n", code.len(), code.weights()))
                }
                Verdict::Conflict(c) => Err(invalid(format!(
                    "codewords {} and {} share difference {}",
                    c.first, c.second, c.difference
                ))),
            }
        }
        Command::Certify(args) => emit(&s, &certify(&theorem(&args)?)?.to_json()),
        Command::SearchK(args) => {
            let budget = s.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let cert = match (args.w_star, args.n) {
                (Some(ws), Some(n)) => k_mixed_oracle(args.l, args.w, ws, n, budget)?,
                _ if args.equi => k_equi_oracle(args.l, args.w, budget)?,
                _ => k_exact_oracle(args.l, args.w, budget)?,
            };
            emit(&s, &cert.to_json())
        }
        Command::Conditions { p, w, d } => {
            let report = check_sdr_conditions(p, w, d)?;
            let mut value = serde_json::to_value(&report).expect("report serializes");
            if w % p != 0 {
                value["wp_condition"] = check_wp_condition(p, w)?.into();
            }
            value["failed"] = report.failures().into();
            emit(&s, &pretty(&value))
        }
        Command::Simulate(args) => {
            let code = Code::from_json(&read(&args.file)?)?;
            let mut report = if args.priority {
                priority_report(&code, args.w_limit, args.samples, s.seed)?
            } else if args.exhaustive {
                verify_guarantee(&code, args.w_limit, Mode::Exhaustive)?
            } else {
                verify_guarantee(&code, args.w_limit, Mode::Sampled { samples: args.samples, seed: s.seed })?
            };
            report.code_ref = args.file.display().to_string();
            emit(&s, &report.to_json())?;
            if report.violations.is_empty() {
                Ok(())
            } else {
                Err(invalid(format!("{} guarantee violations", report.violations.len())))
            }
        }
        Command::Catalog(CatalogCommand::Build { requests, dir }) => {
            let requests = match requests {
                Some(path) => load_requests(&path)?,
                None => default_requests(),
            };
            let catalog = Catalog::build(&requests)?;
            catalog.save(&dir)?;
            emit(&s, &catalog.summary_csv())
        }
        Command::Catalog(CatalogCommand::Verify { path }) => {
            let catalog = Catalog::load(&path)?;
            emit(&s, &format!("ok: {} entries verified\n", catalog.entries.len()))
        }
    }
}

fn load_requests(path: &Path) -> Result<Vec<CatalogRequest>> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str::<RequestList>(&text).map_err(|e| e.to_string())
    } else {
        serde_json::from_str::<RequestList>(&text).map_err(|e| e.to_string())
    };
    parsed
        .map(|l| l.requests)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn base_code(args: &ConstructArgs, w: u64, settings: &Settings) -> Result<BaseCode> {
    if let Some(path) = &args.base {
        let base = BaseCode::from_code(&Code::from_json(&read(path)?)?)?;
        if base.p() != args.p || base.w() as u64 != w {
            return Err(invalid(format!(
                "base code has p = {}, w = {}; expected p = {}, w = {w}",
                base.p(),
                base.w(),
                args.p
            )));
        }
        return Ok(base);
    }
    if let Some(g) = &args.gens {
        return BaseCode::new(args.p, w as usize, g.clone());
    }
    let m = ((args.p - 1) / (2 * w - 2)) as usize;
    search_base_with_budget(args.p, w as usize, Some(m), settings.budget.unwrap_or(DEFAULT_SEARCH_BUDGET))
}

fn construct(args: &ConstructArgs, settings: &Settings) -> Result<Code> {
    if args.w < 2 {
        return Err(invalid("weight must be at least 2"));
    }
    let need_star = || args.w_star.ok_or_else(|| invalid("this construction needs --w-star"));
    match args.kind {
        Kind::Direct => construct_direct(&DirectParams::new(args.p, args.r, args.w, args.d)?),
        Kind::Pr => extend_to_pr(&base_code(args, args.w, settings)?, args.r),
        Kind::Wpr => construct_wpr(&base_code(args, args.w, settings)?, args.r),
        Kind::TwoW1pr => construct_2w1pr(&base_code(args, args.w, settings)?, args.r),
        Kind::TwoW1pSmall => construct_2w1p_small(args.p, args.w),
        Kind::MixedW1pr => {
            let path = args.base.as_ref().ok_or_else(|| invalid("mixed-w1pr needs --base (a code of length p^r)"))?;
            mixed_w1pr(args.p, args.r, args.w, &Code::from_json(&read(path)?)?)
        }
        Kind::MixedWpr => mixed_wpr(&base_code(args, need_star()?, settings)?, args.r, args.w),
        Kind::Mixed2w1pr => mixed_2w1pr(&base_code(args, need_star()?, settings)?, args.r, args.w),
    }
}

fn theorem(a: &CertifyArgs) -> Result<TheoremTag> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| invalid(format!("{} needs --{flag}", a.theorem)));
    let p = || need(a.p, "p");
    let w = || need(a.w, "w");
    let r = || a.r.unwrap_or(1);
    let base = a.gens.clone();
    Ok(match a.theorem.as_str() {
        "main-direct" => TheoremTag::MainDirect { p: p()?, w: w()?, d: a.d.unwrap_or(1), r: r() },
        "main-pr" => TheoremTag::MainPr { p: p()?, w: w()?, r: r(), base },
        "main-wpr" => TheoremTag::MainWpr { p: p()?, w: w()?, r: r(), base },
        "main2w1pr" => TheoremTag::Main2w1pr { p: p()?, w: w()?, r: r(), base },
        "main2w1p-small" => TheoremTag::Main2w1pSmall { p: p()?, w: w()? },
        "mixed-w1pr" => TheoremTag::MixedW1pr {
            p: p()?,
            w: w()?,
            r: r(),
            n: need(a.n, "n")?,
            w_star: need(a.w_star, "w-star")?,
        },
        "mixed-wpr" => TheoremTag::MixedWpr { p: p()?, w: w()?, w_star: need(a.w_star, "w-star")?, r: r(), base },
        "mixed2w1pr" => TheoremTag::Mixed2w1pr { p: p()?, w: w()?, w_star: need(a.w_star, "w-star")?, r: r(), base },
        "upper-prime-factors" => TheoremTag::UpperPrimeFactors { l: need(a.l, "L")?, w: w()? },
        other => return Err(invalid(format!("unknown theorem {other}"))),
    })
}
