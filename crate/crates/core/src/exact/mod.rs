//! Exact rational iteration of Somos 4, Somos 5 and elliptic divisibility
//! sequences, and exact checks of their determinant identities.

mod identities;
mod rational;
mod recurrence;
mod window;

pub use identities::{
    check_divisibility, check_hankel_somos4, check_hankel_somos5, gauge_transform, hankel_somos5_mirror,
};
pub use rational::{
    format_rational, is_integer, ln_abs, nearest_rational, parse_rational, parse_rational_list, rat, ratio, to_f64,
    Rational,
};
pub use recurrence::{eds_residual, iterate_eds, iterate_somos4, iterate_somos5, Somos4Params, Somos5Params};
pub use window::SequenceWindow;
