//! Recurrence-agnostic description of an initial value problem.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{iterate_eds, iterate_somos4, iterate_somos5, Rational, SequenceWindow, Somos4Params, Somos5Params};
use crate::ivp::{solve_somos4, solve_somos5, SolveOptions, Somos4Solution, Somos5Solution, TauSolution, TauValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recurrence {
    Somos4,
    Somos5,
    /// Elliptic divisibility sequence with `a0 = 0` and seeds `a1..a4`.
    Eds,
}

impl Recurrence {
    pub fn seed_count(self) -> usize {
        match self {
            Recurrence::Somos4 | Recurrence::Eds => 4,
            Recurrence::Somos5 => 5,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Recurrence::Eds => 0,
            _ => 2,
        }
    }
}

impl FromStr for Recurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "somos4" => Ok(Recurrence::Somos4),
            "somos5" => Ok(Recurrence::Somos5),
            "eds" => Ok(Recurrence::Eds),
            other => Err(Error::InvalidArgument(format!("unknown recurrence {other:?}"))),
        }
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recurrence::Somos4 => "somos4",
            Recurrence::Somos5 => "somos5",
            Recurrence::Eds => "eds",
        })
    }
}

/// Recurrence, coefficients and seeds. Seeds start at index 0
/// (index 1 for an EDS, whose `a0` is fixed to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub recurrence: Recurrence,
    pub params: Vec<Rational>,
    pub seeds: Vec<Rational>,
}

/// A solved Somos problem in double precision.
#[derive(Debug, Clone)]
pub enum Solved {
    Somos4(Box<Somos4Solution<f64>>),
    Somos5(Box<Somos5Solution<f64>>),
}

impl Solved {
    pub fn eval_tau(&self, n: i64) -> Result<TauValue<f64>> {
        match self {
            Solved::Somos4(s) => s.eval_tau(n),
            Solved::Somos5(s) => s.eval_tau(n),
        }
    }
}

impl Problem {
    pub fn new(recurrence: Recurrence, params: Vec<Rational>, seeds: Vec<Rational>) -> Result<Self> {
        if params.len() != recurrence.param_count() {
            return Err(Error::InvalidArgument(format!(
                "{recurrence} takes {} parameters, got {}",
                recurrence.param_count(),
                params.len()
            )));
        }
        if seeds.len() != recurrence.seed_count() {
            return Err(Error::InvalidSeed(format!(
                "{recurrence} takes {} seeds, got {}",
                recurrence.seed_count(),
                seeds.len()
            )));
        }
        let p = Problem {
            recurrence,
            params,
            seeds,
        };
        match recurrence {
            Recurrence::Somos4 => {
                p.somos4_params()?;
            }
            Recurrence::Somos5 => {
                p.somos5_params()?;
            }
            Recurrence::Eds => {}
        }
        Ok(p)
    }

    pub fn somos4_params(&self) -> Result<Somos4Params> {
        self.expect(Recurrence::Somos4)?;
        Somos4Params::new(self.params[0].clone(), self.params[1].clone())
    }

    pub fn somos5_params(&self) -> Result<Somos5Params> {
        self.expect(Recurrence::Somos5)?;
        Somos5Params::new(self.params[0].clone(), self.params[1].clone())
    }

    fn expect(&self, r: Recurrence) -> Result<()> {
        if self.recurrence != r {
            return Err(Error::NotApplicable(format!("{} problem, not {r}", self.recurrence)));
        }
        Ok(())
    }

    pub fn seed_window(&self) -> SequenceWindow {
        let base = if self.recurrence == Recurrence::Eds { 1 } else { 0 };
        SequenceWindow::new(base, self.seeds.clone())
    }

    /// Exact terms on `n_lo..=n_hi`.
    pub fn iterate(&self, n_lo: i64, n_hi: i64) -> Result<SequenceWindow> {
        if n_lo > n_hi {
            return Err(Error::InvalidArgument(format!("empty range {n_lo}:{n_hi}")));
        }
        let seeds = self.seed_window();
        match self.recurrence {
            Recurrence::Somos4 => iterate_somos4(&self.somos4_params()?, &seeds, n_lo, n_hi),
            Recurrence::Somos5 => iterate_somos5(&self.somos5_params()?, &seeds, n_lo, n_hi),
            Recurrence::Eds => {
                let s = &self.seeds;
                let w = iterate_eds(&s[0], &s[1], &s[2], &s[3], n_hi.max(-n_lo).max(5))?;
                w.slice(n_lo, n_hi)
            }
        }
    }

    pub fn solve(&self, opts: &SolveOptions<f64>) -> Result<Solved> {
        let seeds = self.seed_window();
        match self.recurrence {
            Recurrence::Somos4 => Ok(Solved::Somos4(Box::new(solve_somos4(
                &self.somos4_params()?,
                &seeds,
                opts,
            )?))),
            Recurrence::Somos5 => Ok(Solved::Somos5(Box::new(solve_somos5(
                &self.somos5_params()?,
                &seeds,
                opts,
            )?))),
            Recurrence::Eds => Err(Error::NotApplicable("no closed-form solver for a bare EDS".into())),
        }
    }
}
