//! `besselquad`: quadrature rules, error estimates and diagnostics for
//! `int_0^inf f(x) x^alpha e^{-cx} J_nu(x) dx`.

mod cache;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use besselquad::diagnostics::{decay_csv, ratio_csv, ratio_sweep, weight_decay_report};
use besselquad::estimators::{
    attach_reference, builtin_integrand, reference_value, smallest_estimate, sweep_reports, Builtin, PoleSpec,
    ReferencePolicy,
};
use besselquad::rules::{build_rule, internality_sweep, InternalityMode};
use besselquad::scalar::{to_decimal_digits, PrecisionContext, Real};
use besselquad::weights::{Family, WeightSpec};
use besselquad::{Error, RecurrenceTable, RuleKind};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cache::{CacheKey, RefCache};

#[derive(Parser, Debug)]
#[command(name = "besselquad", version, about = "Gauss-type rules for x^alpha e^{-cx} (J_nu(x) + 1) weights")]
struct Cli {
    /// Significant decimal digits of the results.
    #[arg(long, global = true, default_value_t = 120)]
    digits: u32,
    /// Extra guard digits carried internally.
    #[arg(long, global = true, default_value_t = 20)]
    guard: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nodes and weights of one rule as JSON.
    Rule {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
        /// gauss, anti, avg, companion or genavg
        #[arg(long, default_value = "gauss")]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error estimates against the true error over a range of n, as CSV.
    Converge {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// logistic or runge
        #[arg(long, conflicts_with = "poly")]
        integrand: Option<String>,
        /// Polynomial coefficients c0,c1,... in increasing degree.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Inclusive range such as 5..60.
        #[arg(long, default_value = "5..60")]
        n_range: String,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratio sweeps and weight decay tables as CSV.
    Diagnose {
        #[command(subcommand)]
        what: Diagnose,
    },
    /// Internality reports over a grid of alpha plus the flip bracket, as JSON.
    Internality {
        #[arg(long, default_value = "J")]
        family: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        n: usize,
        /// anti or genavg
        #[arg(long)]
        mode: String,
        /// Inclusive range such as -0.99..0.
        #[arg(long, allow_hyphen_values = true)]
        alpha_range: String,
        #[arg(long, default_value_t = 11)]
        alpha_steps: usize,
        /// Bracket width at which bisection stops.
        #[arg(long, default_value = "1e-6")]
        width: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Diagnose {
    /// Psi_n / Phi_n on |z| = r for the Bessel weight and its Laguerre part.
    Ratio {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "4", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 200)]
        theta_steps: usize,
        /// Points of the Gauss rule evaluating q_n; default 4n + 40.
        #[arg(long)]
        n_quad: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weights against nodes of one rule.
    Decay {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gauss")]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// J for x^alpha e^{-cx} (J_nu(x) + 1), L for x^alpha e^{-cx}
    #[arg(long, default_value = "J")]
    family: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    nu: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
}

impl WeightArgs {
    fn spec(&self, ctx: &PrecisionContext) -> Result<WeightSpec, Error> {
        let family: Family = self.family.parse()?;
        WeightSpec::parse(family, &self.nu, &self.alpha, &self.c, ctx)
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    kind: &'a str,
    message: String,
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&PathBuf>, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn parse_range(s: &str) -> Result<(String, String), Error> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Config(format!("range {s:?} must look like lo..hi")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().to_string(), b.trim().to_string()))
}

fn parse_n_range(s: &str, step: usize) -> Result<Vec<usize>, Error> {
    let (a, b) = parse_range(s)?;
    let bad = |_| Error::Config(format!("range {s:?} needs integer bounds"));
    let (lo, hi): (usize, usize) = (a.parse().map_err(bad)?, b.parse().map_err(bad)?);
    if lo == 0 || lo > hi || step == 0 {
        return Err(Error::Config(format!("range {s:?} with step {step} is empty or starts at 0")));
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn integrand(
    name: Option<&str>,
    poly: Option<&str>,
    ctx: &PrecisionContext,
) -> Result<(Builtin, Option<PoleSpec>, String), Error> {
    match (name, poly) {
        (_, Some(list)) => {
            let coeffs = list
                .split(',')
                .map(|t| ctx.parse(t.trim()))
                .collect::<Result<Vec<Real>, Error>>()?;
            if coeffs.is_empty() {
                return Err(Error::Config("empty polynomial".into()));
            }
            Ok((Builtin::Polynomial(coeffs), None, format!("poly{list}")))
        }
        (Some(name), None) => {
            let (f, pole) = builtin_integrand(name, ctx.bits())?;
            Ok((f, Some(pole), name.to_string()))
        }
        (None, None) => Err(Error::Config("give --integrand or --poly".into())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = PrecisionContext::new(cli.digits, cli.guard)?;
    let digits = cli.digits;
    let d = |x: &Real| to_decimal_digits(x, digits as usize);
    match cli.command {
        Command::Rule { weight, n, kind, out } => {
            let spec = weight.spec(&ctx)?;
            let kind: RuleKind = kind.parse()?;
            let table = RecurrenceTable::for_weight(&spec, kind.pairs_needed(n), &ctx)?;
            let rule = build_rule(&table, kind, n)?;
            emit_json(out.as_ref(), &rule.to_json(digits))
        }
        Command::Converge { nu, alpha, c, integrand: name, poly, n_range, step, out } => {
            let spec = WeightSpec::parse(Family::BesselPlusOne, &nu, &alpha, &c, &ctx)?;
            let ns = parse_n_range(&n_range, step)?;
            let (f, pole, tag) = integrand(name.as_deref(), poly.as_deref(), &ctx)?;
            let reports = sweep_reports(&spec.nu, &spec.alpha, &spec.c, &f, pole.as_ref(), &ns, &ctx)?;
            let n_max = *ns.iter().max().expect("non-empty range");
            let policy = ReferencePolicy::default();
            let scale = smallest_estimate(&reports).unwrap_or_else(|| ctx.zero());
            let key = CacheKey { nu, alpha, c, integrand: tag, digits };
            let cache = RefCache::from_env();
            let cached = cache.load(&key, &ctx).filter(|rv| {
                rv.n_ref >= n_max + policy.offset && rv.discrepancy <= policy.threshold(&scale, &rv.value, &ctx)
            });
            let reference = match cached {
                Some(rv) => rv,
                None => {
                    let rv = reference_value(&spec.nu, &spec.alpha, &spec.c, &f, n_max, &scale, &policy, &ctx)?;
                    cache.store(&key, &rv);
                    rv
                }
            };
            let mut csv = String::from("n,value,err_true,err_averaged,err_gen_averaged,err_apriori\n");
            for row in attach_reference(reports, &reference.value) {
                let r = &row.report;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    d(&r.value),
                    d(&row.err_true),
                    d(&r.e_averaged),
                    d(&r.e_gen_averaged),
                    r.e_apriori.as_ref().map(d).unwrap_or_default()
                ));
            }
            emit(out.as_ref(), &csv)
        }
        Command::Diagnose { what: Diagnose::Ratio { nu, alpha, c, n, r, theta_steps, n_quad, out } } => {
            let spec = WeightSpec::parse(Family::BesselPlusOne, &nu, &alpha, &c, &ctx)?;
            let r = ctx.parse(&r)?;
            let samples = ratio_sweep(&spec, n, &r, theta_steps, n_quad.unwrap_or(4 * n + 40), &ctx)?;
            emit(out.as_ref(), &ratio_csv(&samples, digits as usize))
        }
        Command::Diagnose { what: Diagnose::Decay { weight, n, kind, out } } => {
            let spec = weight.spec(&ctx)?;
            let kind: RuleKind = kind.parse()?;
            let table = RecurrenceTable::for_weight(&spec, kind.pairs_needed(n), &ctx)?;
            let report = weight_decay_report(&build_rule(&table, kind, n)?);
            emit(out.as_ref(), &decay_csv(&report, digits as usize))
        }
        Command::Internality { family, nu, c, n, mode, alpha_range, alpha_steps, width, out } => {
            let family: Family = family.parse()?;
            let mode: InternalityMode = mode.parse()?;
            let (lo, hi) = parse_range(&alpha_range)?;
            let (lo, hi) = (ctx.parse(&lo)?, ctx.parse(&hi)?);
            if lo >= hi || alpha_steps < 2 {
                return Err(Error::Config("alpha range must be increasing with at least 2 steps".into()).into());
            }
            let span = Real::with_val(ctx.bits(), &hi - &lo);
            let alphas: Vec<Real> = (0..alpha_steps)
                .map(|k| Real::with_val(ctx.bits(), &span * k as u64) / (alpha_steps as u64 - 1) + &lo)
                .collect();
            let base = WeightSpec::new(family, ctx.parse(&nu)?, alphas[0].clone(), ctx.parse(&c)?)?;
            let sweep = internality_sweep(&base, n, mode, &alphas, &ctx.parse(&width)?, &ctx)?;
            emit_json(out.as_ref(), &sweep.to_json(digits))
        }
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    let body = serde_json::to_string(&ErrorJson { kind, message }).expect("plain strings serialize");
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string(), 2),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => fail(e.kind(), e.to_string(), if e.is_config() { 2 } else { 3 }),
        Err(Failure::Io(msg)) => fail("io", msg, 2),
    }
}
