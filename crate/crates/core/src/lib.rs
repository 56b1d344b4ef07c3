//! Somos 4 and Somos 5 sequences: exact iteration, the integrable maps behind
//! them, and closed-form solution of their initial value problems through
//! Weierstrass σ functions.
//!
//! Exact arithmetic uses big rationals throughout. The numerical side is
//! generic over [`scalar::Real`] (`f32`, `f64`); the aliases below fix it to
//! `f64`.
//!
//! ```
//! use somos_core::{rat, solve_somos5, SequenceWindow, SolveOptions, Somos5Params, TauSolution};
//!
//! let params = Somos5Params::new(rat(1), rat(1)).unwrap();
//! let seeds = SequenceWindow::from_integers(0, &[1; 5]);
//! let sol = solve_somos5::<f64>(&params, &seeds, &SolveOptions::default()).unwrap();
//! let t = sol.eval_tau(14).unwrap().real_value().unwrap();
//! assert_eq!(t.round(), 22833.0);
//! ```

pub mod error;
pub mod exact;
pub mod ivp;
pub mod json;
pub mod problem;
pub mod qrt;
pub mod scalar;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use exact::{
    format_rational, iterate_eds, iterate_somos4, iterate_somos5, parse_rational, parse_rational_list, rat, ratio,
    Rational, SequenceWindow, Somos4Params, Somos5Params,
};
pub use ivp::{
    eval_tau, growth_constant, solve_somos4, solve_somos5, somos4_from_even_odd, SolveOptions, TauSolution, TauValue,
};
pub use problem::{Problem, Recurrence, Solved};
pub use scalar::{Precision, Real};
pub use verify::{verify, Suite, VerifyOptions, VerifyReport};
pub use weierstrass::{CurveInvariants, Lattice};

pub type Complex64 = num_complex::Complex<f64>;
pub type CurveInvariants64 = weierstrass::CurveInvariants<f64>;
pub type Lattice64 = weierstrass::Lattice<f64>;
pub type Somos4Solution64 = ivp::Somos4Solution<f64>;
pub type Somos5Solution64 = ivp::Somos5Solution<f64>;
pub type TauValue64 = ivp::TauValue<f64>;
