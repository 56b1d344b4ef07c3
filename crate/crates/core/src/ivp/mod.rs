//! Closed-form solution of the Somos 4 and Somos 5 initial value problems.

mod eds;
mod somos4;
mod somos5;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::exact::{Rational, SequenceWindow};
use crate::scalar::{cplx, Precision, Real};
use crate::weierstrass::{log_sigma, Lattice};

pub use eds::{eds_from_sigma, matched_eds_somos4, matched_eds_somos5, EdsMatch};
pub use somos4::{solve_somos4, Somos4Solution};
pub use somos5::{
    growth_constant, solve_somos5, somos4_from_even_odd, HClosed, ParameterCheck, Somos5Solution, SubsequenceReport,
};

/// Tolerances and working precision for the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub precision: Precision<T>,
    /// Relative tolerance of the sign-consistency equations.
    pub consistency_tol: f64,
    /// Relative tolerance of the seed reconstruction.
    pub reconstruction_tol: f64,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon().to_f64().unwrap_or(f64::EPSILON);
        SolveOptions {
            precision: Precision::default(),
            consistency_tol: (1e4 * eps).max(1e-6),
            reconstruction_tol: (1e4 * eps).max(1e-9),
        }
    }
}

/// Branch and sign choices made while solving, with the residuals that justified them.
#[derive(Debug, Clone, PartialEq)]
pub struct Convention {
    /// Branch used for `μ̃ = (β̃ + α̃J̃)^{1/4}` or `℘′(κ) = √α`.
    pub root_branch: &'static str,
    /// Sign applied to the raw inverse-℘ value of `κ`.
    pub kappa_sign: i8,
    /// Sign applied to the raw inverse-℘ value of `z0`.
    pub z0_sign: i8,
    pub kappa_residual: f64,
    pub z0_residual: f64,
}

/// `τ(n)` from a closed form: `log|τ(n)|`, the phase, and the value when it fits in range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauValue<T> {
    pub n: i64,
    pub log_abs: T,
    pub phase: T,
    pub value: Option<Complex<T>>,
}

impl<T: Real> TauValue<T> {
    fn from_log(n: i64, l: Complex<T>) -> Self {
        let value = if l.re < T::max_value().ln() - T::lit(1.0) {
            Some(l.exp())
        } else {
            None
        };
        let w = crate::weierstrass::wrap_arg(l);
        TauValue {
            n,
            log_abs: l.re,
            phase: w.im,
            value,
        }
    }

    /// Real part, after checking that the imaginary part is negligible
    /// (`|Im| / max(1, |Re|)` below `max(1e−6, 10⁴ε)`).
    pub fn real_value(&self) -> Result<T> {
        let Some(v) = self.value else {
            return Err(Error::Overflow);
        };
        let tol = (T::epsilon() * T::lit(1e4)).max(T::lit(1e-6));
        if v.im.abs() / v.re.abs().max(T::one()) >= tol {
            return Err(Error::ConsistencyFailure(format!(
                "tau({}) has imaginary part {} for a real problem",
                self.n, v.im
            )));
        }
        Ok(v.re)
    }

    /// Whether the phase is within `1e−6` of `0` or `π`.
    pub fn is_real(&self) -> bool {
        self.phase.sin().abs() < T::lit(1e-6)
    }
}

/// Solutions that evaluate terms of their sequence in closed form.
pub trait TauSolution<T: Real> {
    fn eval_tau(&self, n: i64) -> Result<TauValue<T>>;

    /// Initial data the solution was built from.
    fn seeds(&self) -> &SequenceWindow;
}

/// Log-domain evaluation of `τ(n)` for any closed-form solution.
pub fn eval_tau<T: Real, S: TauSolution<T>>(sol: &S, n: i64) -> Result<TauValue<T>> {
    sol.eval_tau(n)
}

pub(crate) fn lift<T: Real>(r: &Rational) -> Complex<T> {
    cplx(T::lit(crate::exact::to_f64(r)), T::zero())
}

pub(crate) fn lsig<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    log_sigma(z, lat)
}

/// `|a − b| / max(|a|, |b|, 1)` as `f64`.
pub(crate) fn rel<T: Real>(a: Complex<T>, b: Complex<T>) -> f64 {
    crate::scalar::rel_diff(a, b).to_f64_lossy()
}

pub(crate) fn seeds_nonzero(seeds: &SequenceWindow) -> Result<()> {
    for (n, v) in seeds.iter() {
        if num_traits::Zero::is_zero(v) {
            return Err(Error::ZeroSeed(n));
        }
    }
    Ok(())
}
