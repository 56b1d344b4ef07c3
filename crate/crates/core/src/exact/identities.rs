//! Exact checks of the divisibility, Hankel determinant and gauge identities.

use num_traits::Zero;

use super::rational::{as_integer, divides, Rational};
use super::window::SequenceWindow;
use crate::error::{Error, Result};

/// Whether `a(n)` divides `a(m)` in the integers. Requires `n | m`.
pub fn check_divisibility(window: &SequenceWindow, n: i64, m: i64) -> Result<bool> {
    if n == 0 || m % n != 0 {
        return Err(Error::InvalidArgument(format!("{n} does not divide {m}")));
    }
    let an = as_integer(window.at(n)?, n)?;
    let am = as_integer(window.at(m)?, m)?;
    if an.is_zero() {
        return Err(Error::DivisionByZeroTerm(n));
    }
    Ok(divides(&an, &am))
}

/// `τ(n+m)τ(n−m) − [a(m)²τ(n+1)τ(n−1) − a(m+1)a(m−1)τ(n)²]`.
pub fn check_hankel_somos4(tau: &SequenceWindow, a: &SequenceWindow, m: i64, n: i64) -> Result<Rational> {
    let am = a.at(m)?;
    Ok(
        tau.at(n + m)? * tau.at(n - m)? - am * am * tau.at(n + 1)? * tau.at(n - 1)?
            + a.at(m + 1)? * a.at(m - 1)? * tau.at(n)? * tau.at(n)?,
    )
}

/// `a1a2τ(n+m+1)τ(n−m) − [a(m+1)a(m)τ(n+2)τ(n−1) − a(m−1)a(m+2)τ(n+1)τ(n)]`.
///
/// The identity is symmetric under `m → −m−1`; see [`hankel_somos5_mirror`].
pub fn check_hankel_somos5(tau: &SequenceWindow, a: &SequenceWindow, m: i64, n: i64) -> Result<Rational> {
    Ok(a.at(1)? * a.at(2)? * tau.at(n + m + 1)? * tau.at(n - m)?
        - a.at(m + 1)? * a.at(m)? * tau.at(n + 2)? * tau.at(n - 1)?
        + a.at(m - 1)? * a.at(m + 2)? * tau.at(n + 1)? * tau.at(n)?)
}

/// Residual at the mirrored slot `m → −m−1`; equal to the direct residual
/// whenever `a` is antisymmetric.
pub fn hankel_somos5_mirror(tau: &SequenceWindow, a: &SequenceWindow, m: i64, n: i64) -> Result<Rational> {
    check_hankel_somos5(tau, a, -m - 1, n)
}

/// Parity-dependent rescaling `τ(2k) ↦ A₊B^{2k}τ(2k)`, `τ(2k+1) ↦ A₋B^{2k+1}τ(2k+1)`.
/// With `a_even == a_odd` this is the two-parameter Somos 4 gauge.
pub fn gauge_transform(
    window: &SequenceWindow,
    a_even: &Rational,
    a_odd: &Rational,
    b: &Rational,
) -> Result<SequenceWindow> {
    if a_even.is_zero() || a_odd.is_zero() || b.is_zero() {
        return Err(Error::ZeroGaugeFactor);
    }
    let values = window
        .iter()
        .map(|(n, v)| {
            let exp = i32::try_from(n).map_err(|_| Error::InvalidArgument("index too large".into()))?;
            let a = if n.rem_euclid(2) == 0 { a_even } else { a_odd };
            Ok(a * b.pow(exp) * v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceWindow::new(window.base_index(), values))
}
