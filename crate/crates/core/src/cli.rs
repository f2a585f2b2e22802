//! Command-line front end. Every subcommand is turned into a [`JobSpec`],
//! which can also be read from a JSON job file, and [`run_job`] produces the
//! JSON report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{find_zero_divisor, AlgebraLevel, CDNumber};
use crate::contour::{
    ar_index, argument_principle, cauchy_derivative, find_root, laurent_coeffs, residue,
    residue_theorem_check, taylor_coeffs, winding_index, RootOptions,
};
use crate::diffcheck::{cr_check, harmonic_check, zbar_check, RealFieldSample, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::expr::{from_json, parse, Phrase};
use crate::integrate::{line_integral, log_integral, Path, PathSpec, QuadratureOptions};
use crate::selftest;

/// Exit status for success, usage errors and domain errors.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

const ZERODIV_BUDGET: usize = 1 << 20;

#[derive(Parser, Debug)]
#[command(name = "cayley", version, about = "Analysis over Cayley-Dickson algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Evaluate f at a point.
    Eval(JobArgs),
    /// Apply the differential D f(z) to a direction.
    Diff(JobArgs),
    /// Line integral of f along a path.
    Integrate(JobArgs),
    /// Integral of dLn(z - center) along a path.
    Logint(JobArgs),
    /// Index of a point with respect to a closed path.
    Index(JobArgs),
    /// Residue functional at a pole, applied to a direction.
    Residue(JobArgs),
    /// Cauchy integral formula (or its k-th derivative) at a point.
    Cauchy(JobArgs),
    /// Taylor coefficients about a center.
    Taylor(JobArgs),
    /// Laurent coefficients on an annulus.
    Laurent(JobArgs),
    /// Compare a contour integral with its residue sum.
    Restheorem(JobArgs),
    /// Compare the index of f(gamma) with the divisor-weighted indices.
    Argprinciple(JobArgs),
    /// Find a root of a polynomial phrase.
    Roots(JobArgs),
    /// Finite-difference Cauchy-Riemann check.
    Crcheck(JobArgs),
    /// Pairwise harmonicity check of the components.
    Harmonic(JobArgs),
    /// Check that the z~ differential vanishes.
    Zbarcheck(JobArgs),
    /// Search for a zero-divisor pair.
    Zerodiv(JobArgs),
    /// Run a JSON job file.
    Run {
        #[arg(long)]
        job: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Reduced acceptance suite.
    Selftest {
        /// Corrupt one entry of the multiplication table first.
        #[arg(long, hide = true)]
        inject_sign_error: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Diff,
    Integrate,
    Logint,
    Index,
    Residue,
    Cauchy,
    Taylor,
    Laurent,
    Restheorem,
    Argprinciple,
    Roots,
    Crcheck,
    Harmonic,
    Zbarcheck,
    Zerodiv,
}

#[derive(Args, Debug, Default, Clone)]
pub struct JobArgs {
    /// Algebra level r (dimension 2^r), 1..=8.
    #[arg(long)]
    pub level: Option<u32>,
    /// Expression text, e.g. "e1*(z-e2)^-1*e3 + z^2".
    #[arg(long, conflicts_with = "expr_file")]
    pub expr: Option<String>,
    /// File holding expression text or a JSON expression tree.
    #[arg(long)]
    pub expr_file: Option<PathBuf>,
    /// Path as inline JSON.
    #[arg(long, conflicts_with = "path_file")]
    pub path: Option<String>,
    /// File holding the path JSON.
    #[arg(long)]
    pub path_file: Option<PathBuf>,
    /// Evaluation point (constant expression or JSON array).
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long)]
    pub center: Option<String>,
    /// Direction h, or the imaginary unit M of a circle.
    #[arg(long)]
    pub direction: Option<String>,
    #[arg(long)]
    pub pole: Vec<String>,
    /// Zero with multiplicity, "point:order".
    #[arg(long)]
    pub zero: Vec<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub derivative: Option<u32>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<i32>,
    #[arg(long)]
    pub rho_inner: Option<f64>,
    #[arg(long)]
    pub rho_outer: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_knots: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: OutputFormat,
}

/// A number given as a constant expression or as a coefficient array.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NumberArg {
    Text(String),
    Coeffs(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ZeroArg {
    pub point: NumberArg,
    #[serde(default = "one")]
    pub order: i32,
}

fn one() -> i32 {
    1
}

/// One unit of work; the JSON form of every subcommand.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub level: u32,
    /// Expression text or JSON tree.
    #[serde(default)]
    pub expression: Option<Value>,
    #[serde(default)]
    pub path: Option<Value>,
    #[serde(default)]
    pub point: Option<NumberArg>,
    #[serde(default)]
    pub center: Option<NumberArg>,
    #[serde(default)]
    pub direction: Option<NumberArg>,
    #[serde(default)]
    pub poles: Vec<NumberArg>,
    #[serde(default)]
    pub zeros: Vec<ZeroArg>,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub derivative: Option<u32>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub k_min: Option<i32>,
    #[serde(default)]
    pub k_max: Option<i32>,
    #[serde(default)]
    pub rho_inner: Option<f64>,
    #[serde(default)]
    pub rho_outer: Option<f64>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_knots: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl JobSpec {
    pub fn new(command: Command, level: u32) -> JobSpec {
        JobSpec {
            command,
            level,
            expression: None,
            path: None,
            point: None,
            center: None,
            direction: None,
            poles: Vec::new(),
            zeros: Vec::new(),
            radius: None,
            derivative: None,
            count: None,
            k_min: None,
            k_max: None,
            rho_inner: None,
            rho_outer: None,
            threshold: None,
            step: None,
            tol: None,
            max_knots: None,
            seed: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<JobSpec> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("job spec: {e}")))
    }

    /// Builds the job for a subcommand, reading `--expr-file`/`--path-file`.
    pub fn from_args(command: Command, a: &JobArgs) -> Result<JobSpec> {
        let level = a
            .level
            .ok_or_else(|| Error::Invalid("--level is required".into()))?;
        let mut job = JobSpec::new(command, level);
        job.expression = match (&a.expr, &a.expr_file) {
            (Some(e), _) => Some(Value::String(e.clone())),
            (None, Some(file)) => {
                let text = read_file(file)?;
                let trimmed = text.trim();
                if trimmed.starts_with('{') {
                    Some(parse_json(trimmed, "expression file")?)
                } else {
                    Some(Value::String(trimmed.to_string()))
                }
            }
            _ => None,
        };
        job.path = match (&a.path, &a.path_file) {
            (Some(p), _) => Some(parse_json(p, "--path")?),
            (None, Some(file)) => Some(parse_json(&read_file(file)?, "path file")?),
            _ => None,
        };
        let text = |s: &Option<String>| s.as_ref().map(|t| number_arg(t));
        job.point = text(&a.point);
        job.center = text(&a.center);
        job.direction = text(&a.direction);
        job.poles = a.pole.iter().map(|t| number_arg(t)).collect();
        job.zeros = a
            .zero
            .iter()
            .map(|t| match t.rsplit_once(':') {
                Some((p, o)) => o
                    .trim()
                    .parse()
                    .map(|order| ZeroArg {
                        point: number_arg(p),
                        order,
                    })
                    .map_err(|_| Error::Invalid(format!("bad zero order in `{t}`"))),
                None => Ok(ZeroArg {
                    point: number_arg(t),
                    order: 1,
                }),
            })
            .collect::<Result<_>>()?;
        job.radius = a.radius;
        job.derivative = a.derivative;
        job.count = a.count;
        job.k_min = a.k_min;
        job.k_max = a.k_max;
        job.rho_inner = a.rho_inner;
        job.rho_outer = a.rho_outer;
        job.threshold = a.threshold;
        job.step = a.step;
        job.tol = a.tol;
        job.max_knots = a.max_knots;
        job.seed = a.seed;
        Ok(job)
    }
}

fn number_arg(t: &str) -> NumberArg {
    match serde_json::from_str::<Vec<f64>>(t) {
        Ok(v) => NumberArg::Coeffs(v),
        Err(_) => NumberArg::Text(t.to_string()),
    }
}

fn read_file(p: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("{what}: {e}")))
}

/// Resolved inputs of a job.
struct Ctx<'a> {
    job: &'a JobSpec,
    level: AlgebraLevel,
}

impl Ctx<'_> {
    fn number(&self, arg: &NumberArg, what: &str) -> Result<CDNumber> {
        let z = match arg {
            NumberArg::Coeffs(v) => CDNumber::from_vec(v.clone())?,
            NumberArg::Text(t) => parse(t, self.level)?
                .constant_value()
                .ok_or_else(|| Error::Invalid(format!("{what} must be a constant, got `{t}`")))?,
        };
        if z.level() != self.level {
            return Err(Error::Invalid(format!(
                "{what} has {} coefficients, expected {}",
                z.coeffs().len(),
                self.level.dim()
            )));
        }
        if z.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid(format!("{what} is not finite")));
        }
        Ok(z)
    }

    fn opt_number(&self, arg: &Option<NumberArg>, what: &str, default: CDNumber) -> Result<CDNumber> {
        match arg {
            Some(a) => self.number(a, what),
            None => Ok(default),
        }
    }

    fn req_number(&self, arg: &Option<NumberArg>, what: &str) -> Result<CDNumber> {
        match arg {
            Some(a) => self.number(a, what),
            None => Err(Error::Invalid(format!("`{what}` is required"))),
        }
    }

    fn zero(&self) -> CDNumber {
        CDNumber::zero(self.level)
    }

    fn e1(&self) -> CDNumber {
        CDNumber::basis(self.level, 1).expect("level has e1")
    }

    fn expression(&self) -> Result<Phrase> {
        match &self.job.expression {
            None => Err(Error::Invalid("`expression` is required".into())),
            Some(Value::String(s)) => parse(s, self.level),
            Some(v @ Value::Object(_)) => from_json(v, self.level),
            Some(_) => Err(Error::Invalid("expression must be a string or a JSON tree".into())),
        }
    }

    fn path(&self) -> Result<Path> {
        let v = self
            .job
            .path
            .as_ref()
            .ok_or_else(|| Error::Invalid("`path` is required".into()))?;
        let spec: PathSpec = serde_json::from_value(v.clone())
            .map_err(|e| Error::Invalid(format!("path: {e}")))?;
        let path = spec.build()?;
        if path.level() != self.level {
            return Err(Error::Invalid(format!(
                "path lives in level {}, job level is {}",
                path.level().r(),
                self.level.r()
            )));
        }
        Ok(path)
    }

    fn positive(&self, v: Option<f64>, what: &str, default: f64) -> Result<f64> {
        let v = v.unwrap_or(default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Invalid(format!("{what} must be positive and finite, got {v}")))
        }
    }

    fn tol(&self) -> Result<f64> {
        self.positive(self.job.tol, "tol", QuadratureOptions::default().tol)
    }

    fn quadrature(&self) -> Result<QuadratureOptions> {
        let mut o = QuadratureOptions::with_tol(self.tol()?);
        if let Some(k) = self.job.max_knots {
            if k < o.min_knots || k > 1 << 24 {
                return Err(Error::Invalid(format!(
                    "max_knots must lie in {}..={}, got {k}",
                    o.min_knots,
                    1 << 24
                )));
            }
            o.max_knots = k;
        }
        Ok(o)
    }

    fn field(&self, f: &Phrase) -> Result<RealFieldSample> {
        let s = RealFieldSample::from_phrase(f);
        Ok(match self.job.step {
            Some(h) => s.with_step(self.positive(Some(h), "step", h)?),
            None => s,
        })
    }

    fn threshold(&self) -> Result<f64> {
        self.positive(self.job.threshold, "threshold", DEFAULT_THRESHOLD)
    }
}

/// Runs one job and returns its JSON report.
pub fn run_job(job: &JobSpec) -> Result<Value> {
    let level = AlgebraLevel::new(job.level)?;
    let cx = Ctx { job, level };
    let report = match job.command {
        Command::Eval => {
            let f = cx.expression()?;
            let z = cx.opt_number(&job.point, "point", cx.zero())?;
            json!({ "point": z, "value": f.evaluate(&z)? })
        }
        Command::Diff => {
            let f = cx.expression()?;
            let z = cx.req_number(&job.point, "point")?;
            let h = cx.opt_number(&job.direction, "direction", CDNumber::one(level))?;
            json!({ "point": z, "direction": h, "value": f.derivative_apply(&z, &h)? })
        }
        Command::Integrate => {
            let f = cx.expression()?;
            let r = line_integral(&f, &cx.path()?, &cx.quadrature()?)?;
            require_converged(r.converged, r.est_error)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Logint => {
            let c = cx.opt_number(&job.center, "center", cx.zero())?;
            let r = log_integral(&c, &cx.path()?, cx.tol()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Index => {
            let c = cx.opt_number(&job.center, "center", cx.zero())?;
            let path = cx.path()?;
            let ar = ar_index(&c, &path, cx.tol()?)?;
            json!({ "ar_index": ar, "winding": winding_index(&c, &path)? })
        }
        Command::Residue => {
            let f = cx.expression()?;
            let [p] = single(&job.poles, "poles")?;
            let p = cx.number(p, "pole")?;
            let m = cx.opt_number(&job.direction, "direction", cx.e1())?;
            let rho = cx.positive(job.radius, "radius", 0.5)?;
            let r = residue(&f, &p, &m, rho, &cx.quadrature()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Cauchy => {
            let f = cx.expression()?;
            let z = cx.req_number(&job.point, "point")?;
            let k = job.derivative.unwrap_or(0);
            let r = cauchy_derivative(&f, &z, k, &cx.path()?, &cx.quadrature()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Taylor => {
            let f = cx.expression()?;
            let a = cx.opt_number(&job.center, "center", cx.zero())?;
            let count = job.count.unwrap_or(4);
            if count == 0 || count > 64 {
                return Err(Error::Invalid(format!("count must lie in 1..=64, got {count}")));
            }
            let path = match &job.path {
                Some(_) => cx.path()?,
                None => {
                    let m = cx.opt_number(&job.direction, "direction", cx.e1())?;
                    Path::circle(&a, cx.positive(job.radius, "radius", 1.0)?, &m, 1.0)?
                }
            };
            serde_json::to_value(taylor_coeffs(&f, &a, count, &path, &cx.quadrature()?)?)
                .expect("serializable")
        }
        Command::Laurent => {
            let f = cx.expression()?;
            let a = cx.opt_number(&job.center, "center", cx.zero())?;
            let m = cx.opt_number(&job.direction, "direction", cx.e1())?;
            let k_min = job.k_min.unwrap_or(-3);
            let k_max = job.k_max.unwrap_or(3);
            if k_min < -64 || k_max > 64 {
                return Err(Error::Invalid("k_min and k_max must lie in -64..=64".into()));
            }
            let inner = job
                .rho_inner
                .ok_or_else(|| Error::Invalid("`rho_inner` is required".into()))?;
            let outer = cx.positive(job.rho_outer, "rho_outer", 1.0)?;
            let r = laurent_coeffs(&f, &a, k_min, k_max, inner, outer, &m, &cx.quadrature()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Restheorem => {
            let f = cx.expression()?;
            let poles = job
                .poles
                .iter()
                .map(|p| cx.number(p, "pole"))
                .collect::<Result<Vec<_>>>()?;
            let r = residue_theorem_check(&f, &poles, &cx.path()?, &cx.quadrature()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Argprinciple => {
            let f = cx.expression()?;
            let zeros = job
                .zeros
                .iter()
                .map(|z| Ok((cx.number(&z.point, "zero")?, z.order)))
                .collect::<Result<Vec<_>>>()?;
            let r = argument_principle(&f, &cx.path()?, &zeros, cx.tol()?)?;
            serde_json::to_value(r).expect("serializable")
        }
        Command::Roots => {
            let f = cx.expression()?;
            let start = cx.opt_number(&job.point, "point", cx.zero())?;
            let mut opts = RootOptions {
                seed: job.seed.unwrap_or(42),
                ..RootOptions::default()
            };
            if let Some(t) = job.tol {
                opts.tol = cx.positive(Some(t), "tol", t)?;
            }
            serde_json::to_value(find_root(&f, &start, &opts)?).expect("serializable")
        }
        Command::Crcheck | Command::Harmonic | Command::Zbarcheck => {
            let f = cx.expression()?;
            let z = cx.req_number(&job.point, "point")?;
            let s = cx.field(&f)?;
            let th = cx.threshold()?;
            let rep = match job.command {
                Command::Crcheck => cr_check(&s, &z, th)?,
                Command::Harmonic => harmonic_check(&s, &z, th)?,
                _ => zbar_check(&s, &z, th)?,
            };
            serde_json::to_value(rep).expect("serializable")
        }
        Command::Zerodiv => match find_zero_divisor(level, ZERODIV_BUDGET) {
            None => json!({ "found": false }),
            Some((a, b)) => {
                let prod = &a * &b;
                json!({
                    "found": true,
                    "a": a,
                    "b": b,
                    "product_norm": prod.norm(),
                    "norm_product": a.norm() * b.norm(),
                })
            }
        },
    };
    Ok(report)
}

fn single<'a, T>(v: &'a [T], what: &str) -> Result<[&'a T; 1]> {
    match v {
        [x] => Ok([x]),
        _ => Err(Error::Invalid(format!("exactly one entry expected in `{what}`"))),
    }
}

fn require_converged(converged: bool, est: f64) -> Result<()> {
    if converged {
        Ok(())
    } else {
        Err(Error::Accuracy(format!(
            "refinement stopped at max_knots with estimated error {est:e}"
        )))
    }
}

/// `{"error": {"kind": .., "detail": ..}}` for a library error.
pub fn error_report(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "detail": e.to_string() } })
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_DOMAIN
    }
}

/// Runs a job with panics turned into an `internal` error report.
pub fn run_job_guarded(job: &JobSpec) -> (i32, Value) {
    match std::panic::catch_unwind(|| run_job(job)) {
        Ok(Ok(v)) => (EXIT_OK, v),
        Ok(Err(e)) => (exit_code(&e), error_report(&e)),
        Err(_) => (
            EXIT_DOMAIN,
            json!({ "error": { "kind": "internal", "detail": "computation aborted" } }),
        ),
    }
}

/// Runs a JSON job text; malformed specs give a usage error report.
pub fn run_job_text(text: &str) -> (i32, Value) {
    match JobSpec::from_json_str(text) {
        Ok(job) => run_job_guarded(&job),
        Err(e) => (EXIT_USAGE, error_report(&e)),
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(v: &Value, output: Option<&PathBuf>) -> i32 {
    let text = render(v);
    match output {
        None => {
            print!("{text}");
            EXIT_OK
        }
        Some(p) => match std::fs::write(p, &text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let err = Error::Invalid(format!("{}: {e}", p.display()));
                print!("{}", render(&error_report(&err)));
                EXIT_USAGE
            }
        },
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let detail = e.render().to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ");
            print!(
                "{}",
                render(&json!({ "error": { "kind": "usage", "detail": first } }))
            );
            return EXIT_USAGE;
        }
    };
    let (command, args) = match cli.command {
        CliCommand::Selftest {
            inject_sign_error,
            output,
            format: _,
        } => {
            let report = selftest::run(&selftest::SelftestOptions {
                scale: selftest::Scale::Reduced,
                inject_sign_error,
            });
            eprint!("{}", report.table());
            let code = emit(&report.to_json(), output.as_ref());
            return if code != EXIT_OK {
                code
            } else if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_DOMAIN
            };
        }
        CliCommand::Run { job, output, format: _ } => {
            let (code, v) = match read_file(&job) {
                Ok(text) => run_job_text(&text),
                Err(e) => (EXIT_USAGE, error_report(&e)),
            };
            let wcode = emit(&v, output.as_ref());
            return if wcode != EXIT_OK { wcode } else { code };
        }
        CliCommand::Eval(a) => (Command::Eval, a),
        CliCommand::Diff(a) => (Command::Diff, a),
        CliCommand::Integrate(a) => (Command::Integrate, a),
        CliCommand::Logint(a) => (Command::Logint, a),
        CliCommand::Index(a) => (Command::Index, a),
        CliCommand::Residue(a) => (Command::Residue, a),
        CliCommand::Cauchy(a) => (Command::Cauchy, a),
        CliCommand::Taylor(a) => (Command::Taylor, a),
        CliCommand::Laurent(a) => (Command::Laurent, a),
        CliCommand::Restheorem(a) => (Command::Restheorem, a),
        CliCommand::Argprinciple(a) => (Command::Argprinciple, a),
        CliCommand::Roots(a) => (Command::Roots, a),
        CliCommand::Crcheck(a) => (Command::Crcheck, a),
        CliCommand::Harmonic(a) => (Command::Harmonic, a),
        CliCommand::Zbarcheck(a) => (Command::Zbarcheck, a),
        CliCommand::Zerodiv(a) => (Command::Zerodiv, a),
    };
    let (code, v) = match JobSpec::from_args(command, &args) {
        Ok(job) => run_job_guarded(&job),
        Err(e) => (exit_code(&e), error_report(&e)),
    };
    let wcode = emit(&v, args.output.as_ref());
    if wcode != EXIT_OK {
        wcode
    } else {
        code
    }
}
