//! Command-line driver: argument parsing, configuration layering, the constants
//! cache and report rendering on top of `mahler-core`.

pub mod cache;
pub mod checks;
pub mod commands;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod parse;
pub mod reference;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mahler_core::roots4n::Root4n;
use mahler_core::Real as _;

use crate::config::{Format, Overrides, RunConfig, PREC_ENV};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "mahler",
    version,
    about = "Radial asymptotics and cyclotomic checks for a Mahler function"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Shorthand for --format json.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,
    /// Read key=value settings from this file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Add full-precision columns to tables.
    #[arg(long, global = true)]
    pub full: bool,
    /// Cache Mellin constants in this JSON file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Ignore any configured cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Number of oscillatory terms in the asymptotic model.
    #[arg(long, global = true)]
    pub k_osc: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Series coefficients c_n for start <= n < start + count.
    Coeffs {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// mu(e^-t).
    EvalMu {
        #[arg(long)]
        t: String,
    },
    /// ln F(e^-t).
    EvalLnf {
        #[arg(long)]
        t: String,
    },
    /// mu and its error term at t = 2^-k.
    Table1 {
        #[arg(long, default_value_t = 20)]
        kmin: u32,
        #[arg(long, default_value_t = 24)]
        kmax: u32,
    },
    /// ln F and the asymptotic error at t = 10^-1 .. 10^-decades.
    Table3 {
        #[arg(long, default_value_t = 10)]
        decades: u32,
    },
    /// Scalar constants and the oscillation constants A_k, B_k, C_k.
    Constants,
    /// Omega and omega at a root j/4^n, or at every root of degree dividing 4^degree.
    Omega {
        #[arg(long, conflicts_with = "degree")]
        root: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Exact gamma_p over primes 3 < p <= limit.
    GammaScan {
        #[arg(long, default_value_t = 300)]
        limit: u64,
    },
    /// Spectrum of U_M for the matrix (a b; c d); d defaults to (1 + bc)/a.
    USpectrum {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long = "M", short = 'M', default_value_t = 2)]
        m: usize,
    },
    /// Residual of f(z^4) = B(z) f(z) at evenly spaced z in (0, 0.7).
    VerifyBz {
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// The product prod 1/(1 - alpha z^(k^j)) at z = e^-t.
    Product {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: String,
    },
    /// Radial exponent of the product; alpha = 1 uses a second difference.
    ProductExponent {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "1e-4")]
        t0: String,
        #[arg(long, default_value_t = 3)]
        decades: u32,
    },
    /// Characteristic polynomial of the orbit matrix at zeta_n.
    Charpoly {
        #[arg(long, default_value_t = 7)]
        n: u64,
    },
    /// Least-squares radial slope of ln|F| at zeta_n (heuristic).
    RadialFit {
        #[arg(long, default_value_t = 7)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        points: usize,
        #[arg(long, default_value = "1/64")]
        t0: String,
    },
    /// Run every acceptance check and report PASS or FAIL for each.
    ReproduceAll {
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            prec_bits: self.prec,
            k_osc: self.k_osc,
            cache_path: self.cache.clone(),
            no_cache: self.no_cache,
            format: if self.json {
                Some(Format::Json)
            } else {
                self.format
            },
            full: self.full,
            config: self.config.clone(),
        }
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> CliResult<(String, bool)> {
    let prec = cfg.prec_bits;
    let real = |s: &str| parse::real(s, prec);
    let report = match cmd {
        Command::Coeffs { n, start } => commands::coeffs(cfg, *n, *start)?,
        Command::EvalMu { t } => commands::eval_mu(cfg, &real(t)?)?,
        Command::EvalLnf { t } => commands::eval_lnf(cfg, &real(t)?)?,
        Command::Table1 { kmin, kmax } => commands::table1(cfg, *kmin, *kmax)?,
        Command::Table3 { decades } => commands::table3(cfg, *decades)?,
        Command::Constants => commands::constants(cfg)?,
        Command::Omega { root, degree } => {
            let roots = match (root, degree) {
                (Some(r), None) => vec![r
                    .parse::<Root4n>()
                    .map_err(|e| CliError::Usage(e.to_string()))?],
                (None, Some(n)) => Root4n::all_up_to(*n)?
                    .into_iter()
                    .filter(|x| x.n() == *n)
                    .collect(),
                _ => {
                    return Err(CliError::Usage(
                        "give either --root j/4^n or --degree n".into(),
                    ))
                }
            };
            commands::omega(cfg, &roots)?
        }
        Command::GammaScan { limit } => commands::gamma_scan(cfg, *limit)?,
        Command::USpectrum { a, b, c, d, m } => {
            let (a, b, c) = (real(a)?, real(b)?, real(c)?);
            let d = match d {
                Some(d) => real(d)?,
                None if a.is_zero() => {
                    return Err(CliError::Usage("--d is required when a = 0".into()));
                }
                None => (b.clone() * c.clone() + 1.0) / a.clone(),
            };
            commands::u_spectrum_cmd(cfg, [[a, b], [c, d]], *m)?
        }
        Command::VerifyBz { samples } => commands::verify_bz(cfg, *samples)?,
        Command::Product { alpha, k, t } => {
            commands::product(cfg, parse::complex(alpha, prec)?, *k, &real(t)?)?
        }
        Command::ProductExponent {
            alpha,
            k,
            t0,
            decades,
        } => commands::product_exponent_cmd(
            cfg,
            parse::complex(alpha, prec)?,
            *k,
            &real(t0)?,
            *decades,
        )?,
        Command::Charpoly { n } => commands::charpoly(cfg, *n)?,
        Command::RadialFit { n, points, t0 } => {
            commands::radial_fit_cmd(cfg, *n, *points, &real(t0)?)?
        }
        Command::ReproduceAll { output } => {
            let (report, ok) = commands::reproduce_all(cfg);
            let text = report.render(cfg.format);
            return match output {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    Ok((String::new(), ok))
                }
                None => Ok((text, ok)),
            };
        }
    };
    Ok((report.render(cfg.format), true))
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env_prec = std::env::var(PREC_ENV).ok();
    let outcome = RunConfig::resolve(&cli.global.overrides(), env_prec.as_deref())
        .and_then(|cfg| execute(&cli.command, &cfg));
    match outcome {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `mahler --help` for the synopsis");
            }
            e.exit_code()
        }
    }
}
