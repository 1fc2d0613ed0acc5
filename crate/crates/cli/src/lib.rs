//! The `invpoly` command-line tool. [`run`] executes one invocation in
//! process and returns its exit code and output, which is what `main`, the
//! golden replay and the integration tests all use.

pub mod golden;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use invpoly::enumeration::{DEFAULT_MAX_N, MAX_N_ENV};
use invpoly::sweep::{random_height_check, run_sweep, SweepConfig};
use invpoly::{Basis, Error, HSequence, Limits, PairSet};
use serde::Deserialize;

use input::{parse_h, parse_perm, parse_poset, parse_s, ProblemSpec};
use output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

pub const CONFIG_ENV: &str = "INVPOLY_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "invpoly",
    version,
    about = "Restricted h-inversion polynomials: counts, expansions, posets and sweeps"
)]
pub struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// TOML file with max_n, jobs and seed
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Largest n for brute force over S_n (also INVPOLY_MAX_N)
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Worker threads for parallel scans
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// h as JSON, `+T`, or `h1,h2,...+T`
    #[arg(long = "h")]
    pub h: Option<String>,
    /// Pair set, e.g. `[[1,3],[2,3]]` or `{(1,3),(2,3)}`
    #[arg(long = "s")]
    pub s: Option<String>,
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// JSON problem file `{"h":..,"S":..,"n":..,"options":{..}}`
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count I_h(S; n) by brute force and by every expansion
    Eval(ProblemArgs),
    /// Expansion of I_h(S; n) in one binomial basis
    Expand {
        #[command(flatten)]
        problem: ProblemArgs,
        /// fiber, b or a
        #[arg(long)]
        basis: Option<Basis>,
    },
    /// Graded b-coefficients, optionally evaluated at each --at n
    Graded {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long = "at")]
        at: Vec<usize>,
    },
    /// The poset attached to S, or a poset given as JSON, with height sequences
    Poset {
        #[command(flatten)]
        problem: ProblemArgs,
        /// `{"n":N,"covers":[[a,b],...]}`
        #[arg(long)]
        poset: Option<String>,
        /// Element whose height sequence is reported
        #[arg(long)]
        v: Option<usize>,
    },
    /// Partition of S_n by h-inversion set
    Admissible(ProblemArgs),
    /// sum over S_n of t^(2 #inv_h)
    Poincare(ProblemArgs),
    /// The permutations in I_h(S, n)
    Enumerate(ProblemArgs),
    /// Inversions and h-inversions of one permutation
    Inv {
        #[arg(long = "h")]
        h: String,
        #[arg(long)]
        perm: String,
    },
    /// Gaussian binomial [n choose k]_q
    Qbinom {
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "k")]
        k: i64,
    },
    /// Run the invariant suite, the golden fixtures, or both
    Verify {
        /// h-sequences to sweep; tails 1, 2 and 3 when omitted
        #[arg(long = "h")]
        h: Vec<String>,
        /// Largest j(S) in the corpus
        #[arg(long, default_value_t = 6)]
        max_j: usize,
        /// Largest n compared against brute force
        #[arg(long, default_value_t = 7)]
        sweep_n: usize,
        /// Also check strong q-log-concavity up to h(m) <= cap
        #[arg(long)]
        cap: Option<usize>,
        /// Number of random posets whose height sequences are checked
        #[arg(long, default_value_t = 0)]
        posets: usize,
        /// Seed for the random posets; falls back to the config file, then 0
        #[arg(long)]
        seed: Option<u64>,
        /// Replay the embedded golden fixtures
        #[arg(long)]
        golden: bool,
    },
    /// Strong q-log-concavity of the graded b-coefficients
    VerifyConjecture {
        #[arg(long = "h", conflicts_with = "all")]
        h: Option<String>,
        /// Every h, through the Hessenberg functions on [cap]
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 7)]
        cap: usize,
        /// Include per-set timings in the report
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub max_n: Option<usize>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Input(format!("config {}: {e}", path.display())))
    }
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &Error) -> Outcome {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAdmissible(_) | Error::NoDescent(_) => EXIT_INADMISSIBLE,
        Error::BoundExceeded { .. } => EXIT_BOUND,
        _ => EXIT_PARSE,
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome::error(&e),
    }
}

struct Context {
    limits: Limits,
    seed: u64,
    json: bool,
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let env_max = std::env::var(MAX_N_ENV).ok().and_then(|v| v.parse().ok());
    let max_n = cli
        .max_n
        .or(env_max)
        .or(config.max_n)
        .unwrap_or(DEFAULT_MAX_N);
    let ctx = Context {
        limits: Limits::new(max_n),
        seed: config.seed.unwrap_or(0),
        json: cli.json,
    };
    match cli.jobs.or(config.jobs) {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command, &ctx)),
        None => dispatch(&cli.command, &ctx),
    }
}

fn emit<R: Report>(report: &R, ctx: &Context) -> Outcome {
    let stdout = if ctx.json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        report.human()
    };
    Outcome {
        code: report.exit_code(),
        stdout,
        stderr: String::new(),
    }
}

struct Problem {
    h: HSequence,
    s: Option<PairSet>,
    n: Option<usize>,
    options: std::collections::BTreeMap<String, String>,
}

impl Problem {
    fn s(&self) -> Result<&PairSet, Error> {
        self.s
            .as_ref()
            .ok_or_else(|| Error::InvalidPairSet("missing --s".into()))
    }

    fn n(&self) -> Result<usize, Error> {
        match self.n {
            Some(0) => Err(Error::Input("n must be positive".into())),
            Some(n) => Ok(n),
            None => Err(Error::Input("missing --n".into())),
        }
    }
}

fn resolve(args: &ProblemArgs) -> Result<Problem, Error> {
    let file = args.input.as_deref().map(ProblemSpec::load).transpose()?;
    let h = match (&args.h, &file) {
        (Some(text), _) => parse_h(text)?,
        (None, Some(spec)) => spec.h.clone(),
        (None, None) => return Err(Error::InvalidHSequence("missing --h".into())),
    };
    let s = match &args.s {
        Some(text) => Some(parse_s(text)?),
        None => file.as_ref().and_then(|f| f.s.clone()),
    };
    Ok(Problem {
        h,
        s,
        n: args.n.or(file.as_ref().and_then(|f| f.n)),
        options: file.map(|f| f.options).unwrap_or_default(),
    })
}

fn dispatch(command: &Command, ctx: &Context) -> Result<Outcome, Error> {
    let limits = &ctx.limits;
    match command {
        Command::Eval(args) => {
            let p = resolve(args)?;
            let report = output::eval(&p.h, p.s()?, p.n()?, limits)?;
            Ok(emit(&report, ctx))
        }
        Command::Expand { problem, basis } => {
            let p = resolve(problem)?;
            let basis = match (basis, p.options.get("basis")) {
                (Some(b), _) => *b,
                (None, Some(text)) => text.parse().map_err(Error::Input)?,
                (None, None) => Basis::B,
            };
            Ok(emit(&output::expand(&p.h, p.s()?, basis)?, ctx))
        }
        Command::Graded { problem, at } => {
            let p = resolve(problem)?;
            let mut at = at.clone();
            at.extend(p.n);
            Ok(emit(&output::graded(&p.h, p.s()?, &at)?, ctx))
        }
        Command::Poset { problem, poset, v } => {
            let report = match poset {
                Some(text) => output::poset_of(parse_poset(text)?, *v)?,
                None => {
                    let p = resolve(problem)?;
                    output::poset_of_set(&p.h, p.s()?, *v)?
                }
            };
            Ok(emit(&report, ctx))
        }
        Command::Admissible(args) => {
            let p = resolve(args)?;
            Ok(emit(&output::admissible(&p.h, p.n()?, limits)?, ctx))
        }
        Command::Poincare(args) => {
            let p = resolve(args)?;
            Ok(emit(&output::poincare(&p.h, p.n()?, limits)?, ctx))
        }
        Command::Enumerate(args) => {
            let p = resolve(args)?;
            Ok(emit(&output::enumerate(&p.h, p.s()?, p.n()?, limits)?, ctx))
        }
        Command::Inv { h, perm } => {
            let report = output::inversions(&parse_h(h)?, &parse_perm(perm)?);
            Ok(emit(&report, ctx))
        }
        Command::Qbinom { n, k } => Ok(emit(&output::qbinom(*n, *k), ctx)),
        Command::Verify {
            h,
            max_j,
            sweep_n,
            cap,
            posets,
            seed,
            golden,
        } => {
            let mut hs: Vec<HSequence> = h.iter().map(|t| parse_h(t)).collect::<Result<_, _>>()?;
            if hs.is_empty() && !*golden {
                hs = (1..=3).map(HSequence::tail).collect();
            }
            let config = SweepConfig {
                max_j: *max_j,
                max_n: *sweep_n,
                conjecture_cap: *cap,
            };
            let mut sweeps = Vec::new();
            for h in &hs {
                let mut report = run_sweep(h, &config, limits)?;
                if let Some(c) = report.conjecture.as_mut() {
                    c.timings.clear();
                }
                sweeps.push(report);
            }
            let heights = if *posets > 0 {
                Some(random_height_check(seed.unwrap_or(ctx.seed), *posets, 7)?)
            } else {
                None
            };
            let golden = golden.then(golden::replay);
            Ok(emit(
                &output::VerifyOutput::new(sweeps, heights, golden),
                ctx,
            ))
        }
        Command::VerifyConjecture {
            h,
            all,
            cap,
            timings,
        } => {
            let mut report = if *all {
                invpoly::verify_conjecture_all(*cap, limits)?
            } else {
                let h = match h {
                    Some(text) => parse_h(text)?,
                    None => return Err(Error::InvalidHSequence("give --h or --all".into())),
                };
                invpoly::verify_conjecture(&h, *cap, limits)?
            };
            if !*timings {
                report.timings.clear();
            }
            Ok(emit(&report, ctx))
        }
    }
}
