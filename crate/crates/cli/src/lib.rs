//! Command-line front end for `rigidconv`: reads JSON system documents,
//! runs one library operation per subcommand and prints JSON or a table.
//!
//! Exit codes: 0 on success, 1 when the library reports a domain error
//! (not rigid, stuck, resonant, ...), 2 for usage and parse errors.

pub mod document;
pub mod report;
pub mod table;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rigidconv::corpus::{corpus, corpus_entry};
use rigidconv::probes::{h_bound, nilpotency_sweep, rho_truncated};
use rigidconv::{
    equivalence_harness, katz_reduce, middle_convolution, parse_rational, prune_apparent, replay,
    Error, FuchsianSystem, HarnessConfig, RankOneTwist, Rational, SingularPoint,
};
use serde_json::{json, Value};

pub use document::{ParseError, SystemDocument};

pub const THREADS_ENV: &str = "RIGIDCONV_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "rigidconv",
    version,
    about = "Middle convolution and arithmetic probes for Fuchsian systems"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a system; report local spectra.
    Validate { system: PathBuf },
    /// Middle convolution with parameter LAMBDA, apparent points removed.
    Mc {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        system: PathBuf,
    },
    /// Tensor with a rank-one system: add ALPHA_i to the i-th residue.
    Twist {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        alphas: Vec<String>,
        system: PathBuf,
    },
    /// p-curvature status at every prime of a range.
    Pcurvature {
        /// Prime range, `LO..HI`.
        #[arg(long)]
        primes: String,
        system: PathBuf,
    },
    /// Truncated global inverse radius.
    Rho {
        #[arg(long)]
        smax: usize,
        /// Window of `s`, `LO..HI`; defaults to the upper half.
        #[arg(long)]
        window: Option<String>,
        /// Primes up to this bound are always candidates; defaults to SMAX.
        #[arg(long)]
        pmax: Option<u64>,
        system: PathBuf,
    },
    /// The explicit bound H(lambda).
    Hbound {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(allow_hyphen_values = true, conflicts_with = "lambda")]
        value: Option<String>,
    },
    /// Rigidity index and irreducibility.
    Rigidity { system: PathBuf },
    /// Reduce a rigid system to rank one.
    Katz {
        /// Rebuild the input from the trace and check isomorphism.
        #[arg(long)]
        replay: bool,
        system: PathBuf,
    },
    /// Compare nilpotency, convergence and terminal evidence along a Katz
    /// reduction.
    Check {
        #[arg(long)]
        primes: String,
        #[arg(long)]
        smax: usize,
        system: PathBuf,
    },
    /// Print the shipped example systems, or one of them by name.
    Examples { name: Option<String> },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Parse(ParseError),
    Domain(Error, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            Error::ShapeMismatch(msg) => Failure::Usage(msg),
            e => {
                let v = report::error(&e);
                Failure::Domain(e, v)
            }
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => table::render(v),
    }
}

/// Worker count from `RIGIDCONV_THREADS`; 0 or unset means automatic.
fn thread_count() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")),
    }
}

/// Run the command line `args` (program name first).
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
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let threads = match thread_count() {
        Ok(n) => n,
        Err(msg) => return usage_outcome(&msg),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => return usage_outcome(&e.to_string()),
    };
    let format = cli.format;
    match pool.install(|| execute(cli.command)) {
        Ok(v) => Outcome {
            code: 0,
            stdout: render(&v, format),
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => usage_outcome(&msg),
        Err(Failure::Parse(e)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("rigidconv: parse error at {e}\n"),
        },
        Err(Failure::Domain(e, v)) => Outcome {
            code: 1,
            stdout: render(&v, format),
            stderr: format!("rigidconv: {}: {e}\n", e.kind()),
        },
    }
}

fn usage_outcome(msg: &str) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("rigidconv: {msg}\n"),
    }
}

fn read_system(path: &Path) -> Result<FuchsianSystem, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    SystemDocument::parse(&text)
        .map(|d| d.system)
        .map_err(Failure::Parse)
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn range_arg<T: std::str::FromStr>(name: &str, text: &str) -> Result<(T, T), Failure> {
    let bad = || Failure::Usage(format!("--{name} expects LO..HI, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn execute(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Validate { system } => {
            let f = read_system(&system)?;
            let mut points: Vec<SingularPoint> = f
                .points()
                .iter()
                .cloned()
                .map(SingularPoint::Finite)
                .collect();
            points.push(SingularPoint::Infinity);
            let spectra = points
                .iter()
                .map(|q| f.local_spectrum(q).map(|s| report::spectrum(&s)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({
                "valid": true,
                "system": report::system(&f),
                "local_spectra": spectra,
                "absolutely_irreducible": f.is_absolutely_irreducible(),
                "non_resonant": f.is_non_resonant().ok(),
            }))
        }
        Command::Mc { lambda, system } => {
            let lambda = rational_arg("lambda", &lambda)?;
            let f = read_system(&system)?;
            let (g, _) = middle_convolution(&f, &lambda)?;
            Ok(report::system(&prune_apparent(&g)))
        }
        Command::Twist { alphas, system } => {
            let alphas = alphas
                .iter()
                .map(|a| rational_arg("alphas", a))
                .collect::<Result<Vec<_>, _>>()?;
            let f = read_system(&system)?;
            Ok(report::system(&f.twist(&RankOneTwist::new(alphas))?))
        }
        Command::Pcurvature { primes, system } => {
            let (lo, hi) = range_arg::<u64>("primes", &primes)?;
            let f = read_system(&system)?;
            Ok(report::sweep(&nilpotency_sweep(&f, lo, hi)?))
        }
        Command::Rho {
            smax,
            window,
            pmax,
            system,
        } => {
            let window = window
                .map(|w| range_arg::<usize>("window", &w))
                .transpose()?;
            let f = read_system(&system)?;
            let estimate = rho_truncated(&f, smax, window, pmax.unwrap_or(smax as u64))?;
            Ok(report::rho(&estimate))
        }
        Command::Hbound { lambda, value } => {
            let text = lambda
                .or(value)
                .ok_or_else(|| Failure::Usage("hbound needs a value, e.g. `hbound 1/2`".into()))?;
            let lambda = rational_arg("lambda", &text)?;
            Ok(report::hbound(&h_bound(&lambda)?))
        }
        Command::Rigidity { system } => {
            let f = read_system(&system)?;
            let index = f.rigidity_index()?;
            let irreducible = f.is_absolutely_irreducible();
            let centralizers = f
                .singular_points()
                .iter()
                .map(|(q, a)| {
                    Ok(json!({"point": q.to_string(), "centralizer_dim": a.centralizer_dim()?}))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({
                "rigidity_index": index,
                "absolutely_irreducible": irreducible,
                "rigid": irreducible && index == 2,
                "singular_points": centralizers,
            }))
        }
        Command::Katz {
            replay: check,
            system,
        } => {
            let f = read_system(&system)?;
            let trace = katz_reduce(&f).map_err(|failure| {
                let mut v = report::error(&failure.error);
                v["partial"] = report::katz_trace(&failure.partial);
                Failure::Domain(failure.error, v)
            })?;
            let mut v = report::katz_trace(&trace);
            if check {
                replay(&trace, &f)?;
                v["replay"] = json!("isomorphic");
            }
            Ok(v)
        }
        Command::Check {
            primes,
            smax,
            system,
        } => {
            let primes = range_arg::<u64>("primes", &primes)?;
            let f = read_system(&system)?;
            let config = HarnessConfig {
                primes,
                depth: smax,
                extra_prime_bound: smax as u64,
            };
            Ok(report::harness(&equivalence_harness(&f, config)?))
        }
        Command::Examples { name } => match name {
            Some(name) => {
                let entry = corpus_entry(&name)
                    .ok_or_else(|| Failure::Usage(format!("no example named {name:?}")))?;
                Ok(example(&entry))
            }
            None => Ok(Value::Array(corpus().iter().map(example).collect())),
        },
    }
}

fn example(entry: &rigidconv::corpus::CorpusEntry) -> Value {
    SystemDocument {
        name: Some(entry.name.to_string()),
        description: Some(entry.description.to_string()),
        system: entry.system.clone(),
    }
    .to_value()
}
