//! Command-line front end: iterate, solve, eval, verify and asymptotics with
//! JSON output.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use somos_core::exact::parse_rational;
use somos_core::ivp::growth_constant;
use somos_core::verify::{empirical_growth, empirical_growth_balanced};
use somos_core::{
    json as js, Error, Precision, Problem, Recurrence, SolveOptions, Solved, Suite, VerifyOptions, VerifyReport,
};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "somos",
    version,
    about = "Somos 4/5 sequences via Weierstrass sigma functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact terms over a range.
    Iterate(Flags),
    /// Closed-form solution as JSON.
    Solve(Flags),
    /// Closed-form terms; reads a solution from --input when given.
    Eval(Flags),
    /// Run verification suites.
    Verify(Flags),
    /// Growth constant against exact iteration.
    Asymptotics(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Iterate,
    Solve,
    Eval,
    Verify,
    Asymptotics,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// somos4, somos5 or eds.
    #[arg(long)]
    pub recurrence: Option<String>,
    /// Comma-separated rational coefficients, e.g. 1,1 or -1,5.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Comma-separated rational seeds.
    #[arg(long, allow_hyphen_values = true)]
    pub seeds: Option<String>,
    /// Index range lo:hi (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Single index for eval, or the index for asymptotics.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    /// Working precision in decimal digits (15 or 16).
    #[arg(long)]
    pub precision: Option<u32>,
    /// Relative tolerance of the seed reconstruction.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of the sign-consistency equations.
    #[arg(long)]
    pub consistency_tol: Option<f64>,
    /// Comma-separated suite names, or all.
    #[arg(long)]
    pub suite: Option<String>,
    /// JSON config file with the same fields as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Solution JSON to evaluate.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Everything a command needs. Flags override config file values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommandConfig {
    pub recurrence: Option<String>,
    pub params: Option<Vec<String>>,
    pub seeds: Option<Vec<String>>,
    pub range: Option<String>,
    pub n: Option<i64>,
    pub precision: Option<u32>,
    pub tol: Option<f64>,
    pub consistency_tol: Option<f64>,
    pub suite: Option<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Result of a command: exit code and the JSON document.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Iterate(_) => CommandKind::Iterate,
            Command::Solve(_) => CommandKind::Solve,
            Command::Eval(_) => CommandKind::Eval,
            Command::Verify(_) => CommandKind::Verify,
            Command::Asymptotics(_) => CommandKind::Asymptotics,
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Iterate(f)
            | Command::Solve(f)
            | Command::Eval(f)
            | Command::Verify(f)
            | Command::Asymptotics(f) => f,
        }
    }
}

impl CommandConfig {
    /// Config file values (if any) overlaid with the flags.
    pub fn from_flags(flags: &Flags) -> Result<Self, String> {
        let mut c = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
                serde_json::from_str::<CommandConfig>(&text).map_err(|e| format!("config {}: {e}", path.display()))?
            }
            None => CommandConfig::default(),
        };
        macro_rules! overlay {
            ($($f:ident),*) => { $( if flags.$f.is_some() { c.$f = flags.$f.clone(); } )* };
        }
        overlay!(
            recurrence,
            range,
            n,
            precision,
            tol,
            consistency_tol,
            suite,
            input,
            output
        );
        if let Some(p) = &flags.params {
            c.params = Some(split_list(p));
        }
        if let Some(s) = &flags.seeds {
            c.seeds = Some(split_list(s));
        }
        Ok(c)
    }

    fn problem(&self) -> Res<Problem> {
        let recurrence: Recurrence = self
            .recurrence
            .as_deref()
            .ok_or_else(|| Failure::Input("--recurrence is required".into()))?
            .parse()
            .map_err(|e: Error| Failure::Input(e.to_string()))?;
        let parse = |v: &Option<Vec<String>>, what: &str| -> Res<Vec<_>> {
            v.clone()
                .unwrap_or_default()
                .iter()
                .map(|s| parse_rational(s).map_err(|e| Failure::Input(format!("{what}: {e}"))))
                .collect()
        };
        let params = parse(&self.params, "params")?;
        let seeds = parse(&self.seeds, "seeds")?;
        Problem::new(recurrence, params, seeds).map_err(|e| Failure::Input(e.to_string()))
    }

    fn range(&self, default: (i64, i64)) -> Res<(i64, i64)> {
        let Some(r) = &self.range else { return Ok(default) };
        let (a, b) = r
            .split_once(':')
            .ok_or_else(|| Failure::Input(format!("range {r:?} is not lo:hi")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Input(format!("range {r:?} is not lo:hi")))
        };
        let (lo, hi) = (num(a)?, num(b)?);
        if lo > hi {
            return Err(Failure::Input(format!("range {r:?} is empty")));
        }
        Ok((lo, hi))
    }

    fn solve_options(&self) -> Res<SolveOptions<f64>> {
        let mut o = SolveOptions::default();
        if let Some(d) = self.precision {
            if d < 15 {
                return Err(Failure::Input(format!("precision {d} is below 15 digits")));
            }
            if d > 16 {
                return Err(Failure::Input(format!(
                    "precision {d} exceeds double precision (16 digits)"
                )));
            }
            o.precision = Precision::from_digits(d);
        }
        for t in [self.tol, self.consistency_tol].into_iter().flatten() {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::Input(format!("tolerance {t} must be positive")));
            }
        }
        if let Some(t) = self.tol {
            o.reconstruction_tol = t;
        }
        if let Some(t) = self.consistency_tol {
            o.consistency_tol = t;
        }
        Ok(o)
    }
}

/// Runs one command.
pub fn run(kind: CommandKind, config: &CommandConfig) -> Outcome {
    let r = match kind {
        CommandKind::Iterate => iterate(config),
        CommandKind::Solve => solve(config),
        CommandKind::Eval => eval(config),
        CommandKind::Verify => verify(config),
        CommandKind::Asymptotics => asymptotics(config),
    };
    match r {
        Ok(o) => o,
        Err(Failure::Input(msg)) => error_outcome(EXIT_INPUT, "input", &msg),
        Err(Failure::Core(e)) => {
            let code = if e.is_degenerate() { EXIT_DEGENERATE } else { EXIT_INPUT };
            error_outcome(code, kind_name(&e), &e.to_string())
        }
    }
}

fn error_outcome(code: i32, kind: &str, msg: &str) -> Outcome {
    Outcome {
        code,
        json: json!({ "error": { "kind": kind, "message": msg } }),
    }
}

fn kind_name(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZeroTerm(_) => "division_by_zero_term",
        Error::InvalidSeed(_) => "invalid_seed",
        Error::IndexOutOfWindow(_) => "index_out_of_window",
        Error::NonInteger(_) => "non_integer",
        Error::ZeroGaugeFactor => "zero_gauge_factor",
        Error::ZeroDenominator(_) => "zero_denominator",
        Error::MapSingular(_) => "map_singular",
        Error::DegenerateCurve(_) => "degenerate_curve",
        Error::PrecisionLoss(_) => "precision_loss",
        Error::PoleAtLatticePoint => "pole_at_lattice_point",
        Error::ZeroScale => "zero_scale",
        Error::ZeroSeed(_) => "zero_seed",
        Error::SingularMu => "singular_mu",
        Error::ConsistencyFailure(_) => "consistency_failure",
        Error::Overflow => "overflow",
        Error::NotApplicable(_) => "not_applicable",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn ok(json: Value) -> Res<Outcome> {
    Ok(Outcome { code: EXIT_OK, json })
}

fn iterate(c: &CommandConfig) -> Res<Outcome> {
    let p = c.problem()?;
    let (lo, hi) = c.range((0, 20))?;
    ok(js::window(&p.iterate(lo, hi)?))
}

fn solve(c: &CommandConfig) -> Res<Outcome> {
    let p = c.problem()?;
    let s = p.solve(&c.solve_options()?)?;
    ok(js::solution(&p, &s))
}

fn eval(c: &CommandConfig) -> Res<Outcome> {
    let p = match &c.input {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            js::problem_from(&v).map_err(|e| Failure::Input(e.to_string()))?
        }
        None => c.problem()?,
    };
    let s = p.solve(&c.solve_options()?)?;
    if let Some(n) = c.n {
        return ok(js::tau_value(&s.eval_tau(n)?));
    }
    let (lo, hi) = c.range((0, 20))?;
    let values = (lo..=hi)
        .map(|n| Ok(js::tau_value(&s.eval_tau(n)?)))
        .collect::<Res<Vec<_>>>()?;
    ok(json!({ "base_index": lo, "values": values }))
}

fn verify(c: &CommandConfig) -> Res<Outcome> {
    let p = c.problem()?;
    let suites = Suite::parse_list(c.suite.as_deref().unwrap_or("all")).map_err(|e| Failure::Input(e.to_string()))?;
    let opts = VerifyOptions {
        solve: c.solve_options()?,
        ..VerifyOptions::default()
    };
    let report = somos_core::verify(&p, &suites, &opts);
    Ok(Outcome {
        code: verify_exit_code(&report),
        json: report.to_json(),
    })
}

/// `0` when every check passed or was skipped, `3` otherwise.
pub fn verify_exit_code(report: &VerifyReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn asymptotics(c: &CommandConfig) -> Res<Outcome> {
    let p = c.problem()?;
    let n = c.n.unwrap_or(30);
    if n < 2 {
        return Err(Failure::Input(format!("n = {n} must be at least 2")));
    }
    let Solved::Somos5(s) = p.solve(&c.solve_options()?)? else {
        return Err(Failure::Core(Error::NotApplicable(
            "the growth constant is stated for Somos 5".into(),
        )));
    };
    let big_c = growth_constant(&s)?;
    let e = empirical_growth(&p, n)?;
    let even = n + n % 2;
    let b = empirical_growth_balanced(&p, even)?;
    ok(json!({
        "C": big_c,
        "n": n,
        "empirical_estimate": e,
        "difference": e - big_c,
        "balanced_n": even,
        "balanced_estimate": b,
        "balanced_difference": b - big_c,
    }))
}

/// Serialises the outcome as it is printed or written.
pub fn render(o: &Outcome) -> String {
    let mut s = serde_json::to_string_pretty(&o.json).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use somos_core::verify::{CheckResult, Status};

    fn config(recurrence: &str, params: &str, seeds: &str) -> CommandConfig {
        CommandConfig {
            recurrence: Some(recurrence.into()),
            params: Some(split_list(params)),
            seeds: Some(split_list(seeds)),
            ..CommandConfig::default()
        }
    }

    #[test]
    fn failed_check_exits_3() {
        let mut r = VerifyReport::default();
        assert_eq!(verify_exit_code(&r), EXIT_OK);
        r.checks.push(CheckResult {
            suite: Suite::Recurrence,
            name: "x".into(),
            residual: 1.0,
            tolerance: 0.0,
            exact: true,
            samples: 1,
            status: Status::Fail,
        });
        assert_eq!(verify_exit_code(&r), EXIT_VERIFY);
    }

    #[test]
    fn ranges_and_precision() {
        let mut c = config("somos4", "1,1", "1,1,1,1");
        c.range = Some("-5:3".into());
        assert_eq!(c.range((0, 0)).unwrap(), (-5, 3));
        c.range = Some("3:1".into());
        assert!(c.range((0, 0)).is_err());
        c.precision = Some(17);
        assert!(matches!(c.solve_options(), Err(Failure::Input(_))));
        c.precision = Some(14);
        assert!(c.solve_options().is_err());
        c.precision = Some(15);
        assert!(c.solve_options().is_ok());
    }

    #[test]
    fn singular_mu_exits_2() {
        let o = run(CommandKind::Solve, &config("somos5", "1,-2", "1,1,1,1,1"));
        assert_eq!(o.code, EXIT_DEGENERATE);
        assert_eq!(o.json["error"]["kind"], "singular_mu");
    }

    #[test]
    fn eds_iterate_and_solve() {
        let mut c = config("eds", "", "1,1,-1,1");
        c.range = Some("-3:6".into());
        let o = run(CommandKind::Iterate, &c);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.json["values"][3], "0");
        assert_eq!(run(CommandKind::Solve, &c).code, EXIT_DEGENERATE);
    }
}
