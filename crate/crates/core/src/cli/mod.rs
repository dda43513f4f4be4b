use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;

use symlseries::engine::DEFAULT_DIRECT_TOLERANCE;
use symlseries::numeric::{parse_positive, DEFAULT_PRECISION};
use symlseries::{Error, Family, Method, Precision};

mod classify;
mod converge;
mod eval;
mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "symlseries", version, about = "L-series of symmetric functions mod N")]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "SYMFN_PREC", default_value_t = DEFAULT_PRECISION)]
    prec: u32,

    /// Tolerance for the direct oracle and the zeta reference.
    #[arg(long, global = true, default_value = DEFAULT_DIRECT_TOLERANCE)]
    tol: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the parallel sums (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate L(r, ·) for a block-sign function.
    Eval(EvalArgs),
    /// Check every tabulated closed form and a quick invariant suite.
    Verify(VerifyArgs),
    /// Decide whether a block-sign function is a Dirichlet character.
    Classify(ClassifyArgs),
    /// Follow L(r, ·) along a schedule of m and report gaps to the zeta limit.
    Converge(ConvergeArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_method, default_value = "theorem23")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated constant ids, e.g. `L3.chi8,L5.chi24`.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,

    /// Perturb the table before checking; the run must then fail.
    #[arg(long, hide = true)]
    pub corrupt_table: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub m: u32,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub r: u32,
    /// Ascending comma-separated values of m.
    #[arg(long, value_delimiter = ',', required = true)]
    pub schedule: Vec<u32>,
    #[arg(long, value_parser = parse_family, default_value = "chi")]
    pub family: Family,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

/// Settings shared by every command.
pub struct Context {
    pub prec: Precision,
    pub tol: Float,
    pub format: Format,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Infeasible(String),
    /// The report was written; these items failed.
    Verify(Vec<String>),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Parse `args`, run the command, and return the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    // Commands write into buffers so they can run inside a worker pool.
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = context(&cli).and_then(|ctx| match cli.jobs {
        None => dispatch(&cli.command, &ctx, &mut out_buf, &mut err_buf),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(format!("cannot start {n} workers: {e}")))?;
            pool.install(|| dispatch(&cli.command, &ctx, &mut out_buf, &mut err_buf))
        }
    });
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Infeasible(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INFEASIBLE
        }
        Err(Failure::Verify(failed)) => {
            let _ = writeln!(err, "verification failed: {}", failed.join(", "));
            EXIT_VERIFY
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn context(cli: &Cli) -> std::result::Result<Context, Failure> {
    let prec = Precision::new(cli.prec)?;
    let tol = parse_positive(&cli.tol, 64)?;
    Ok(Context {
        prec,
        tol,
        format: cli.format,
    })
}

fn dispatch(command: &Command, ctx: &Context, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Eval(a) => eval::run(a, ctx, out),
        Command::Verify(a) => verify::run(a, ctx, out),
        Command::Classify(a) => classify::run(a, ctx, out),
        Command::Converge(a) => converge::run(a, ctx, out, err),
    }
}
