//! Weierstrass ℘, ℘′, ζ and σ on a period lattice, curve roots, periods and
//! elliptic-integral inversion, plus the identity checks used by the solver.

mod battery;
mod carlson;
mod functions;
mod identities;
mod lattice;
mod roots;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::scalar::{real, Real};

pub use battery::{identity_battery, laurent_leading_check, random_cell_point, BatteryCheck};
pub use carlson::{carlson_rf, inverse_wp};
pub(crate) use functions::wrap_arg;
pub use functions::{log_sigma, sigma, wp, wp_prime, wp_second, zeta_w};
pub use identities::{
    addition_formula_residual, differential_equation_residual, duplication_residual, scale_invariants,
    sigma_quotient_cubic_residual, sigma_quotient_quartic_residual, sigma_quotient_square_residual,
    sigma_scaling_residual, three_term_residual, wp_scaling_residual, Residual,
};
pub use lattice::{lattice_from_invariants, Lattice};
pub use roots::curve_roots;

/// Invariants `(g2, g3)` of `y² = 4x³ − g2 x − g3`, with an optional exact shadow.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveInvariants<T> {
    pub g2: Complex<T>,
    pub g3: Complex<T>,
    pub exact: Option<(Rational, Rational)>,
}

impl<T: Real> CurveInvariants<T> {
    /// Floating invariants; rejects a numerically vanishing discriminant.
    pub fn new(g2: Complex<T>, g3: Complex<T>) -> Result<Self> {
        let inv = CurveInvariants { g2, g3, exact: None };
        inv.check_discriminant()?;
        Ok(inv)
    }

    /// Rational invariants; the discriminant test is exact.
    pub fn from_rational(g2: &Rational, g3: &Rational) -> Result<Self> {
        let disc = g2 * g2 * g2 - Rational::from_integer(27.into()) * g3 * g3;
        if disc.is_zero() {
            return Err(Error::DegenerateCurve(format!("g2 = {g2}, g3 = {g3}")));
        }
        Ok(CurveInvariants {
            g2: real(T::lit(to_f64(g2))),
            g3: real(T::lit(to_f64(g3))),
            exact: Some((g2.clone(), g3.clone())),
        })
    }

    pub fn from_real(g2: T, g3: T) -> Result<Self> {
        Self::new(real(g2), real(g3))
    }

    /// `g2³ − 27 g3²`.
    pub fn discriminant(&self) -> Complex<T> {
        self.g2 * self.g2 * self.g2 - self.g3 * self.g3 * T::lit(27.0)
    }

    /// `1728 g2³ / (g2³ − 27 g3²)`.
    pub fn j_invariant(&self) -> Complex<T> {
        let c = self.g2 * self.g2 * self.g2;
        c * T::lit(1728.0) / self.discriminant()
    }

    /// True when both invariants are real to working precision.
    pub fn is_real(&self) -> bool {
        let tol = T::epsilon() * T::lit(64.0);
        self.g2.im.abs() <= tol * self.g2.norm().max(T::one()) && self.g3.im.abs() <= tol * self.g3.norm().max(T::one())
    }

    /// Weighted size `max(|g2|^½, |g3|^⅓)`, the natural scale of the roots.
    pub(crate) fn scale(&self) -> T {
        self.g2.norm().sqrt().max(self.g3.norm().cbrt())
    }

    fn check_discriminant(&self) -> Result<()> {
        if !crate::scalar::is_finite(self.g2) || !crate::scalar::is_finite(self.g3) {
            return Err(Error::InvalidArgument("non-finite invariants".into()));
        }
        let s = self.scale();
        if s.is_zero() || self.discriminant().norm() <= T::epsilon() * T::lit(1e4) * s.powi(6) {
            return Err(Error::DegenerateCurve(format!(
                "discriminant vanishes for g2 = {}, g3 = {}",
                self.g2, self.g3
            )));
        }
        Ok(())
    }
}
