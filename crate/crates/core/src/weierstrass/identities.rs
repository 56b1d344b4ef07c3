use num_complex::Complex;

use super::functions::{log_sigma, sigma, wp, wp_prime, wp_second};
use super::lattice::Lattice;
use super::CurveInvariants;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Difference of the two sides of an identity together with its natural size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual<T> {
    pub value: Complex<T>,
    pub scale: T,
}

impl<T: Real> Residual<T> {
    fn sides(lhs: Complex<T>, rhs: Complex<T>) -> Self {
        Residual {
            value: lhs - rhs,
            scale: lhs.norm().max(rhs.norm()),
        }
    }

    /// `|value| / scale`, or `|value|` when the scale vanishes.
    pub fn relative(&self) -> T {
        if self.scale > T::zero() {
            self.value.norm() / self.scale
        } else {
            self.value.norm()
        }
    }
}

/// `σ(z+κ)σ(z−κ)/(σ(z)²σ(κ)²) − (℘(κ) − ℘(z))`.
pub fn addition_formula_residual<T: Real>(z: Complex<T>, kappa: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let rhs = wp(kappa, lat)? - wp(z, lat)?;
    let two = T::lit(2.0);
    let lhs = match (log_sigma(z + kappa, lat), log_sigma(z - kappa, lat)) {
        (Ok(a), Ok(b)) => (a + b - (log_sigma(z, lat)? + log_sigma(kappa, lat)?) * two).exp(),
        (Err(Error::PoleAtLatticePoint), _) | (_, Err(Error::PoleAtLatticePoint)) => Complex::new(T::zero(), T::zero()),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(Residual::sides(lhs, rhs))
}

/// Cyclic three-term sum
/// `σ(a+b)σ(a−b)σ(c+d)σ(c−d) + σ(b+c)σ(b−c)σ(a+d)σ(a−d) + σ(c+a)σ(c−a)σ(b+d)σ(b−d)`,
/// scaled by the largest of its terms.
pub fn three_term_residual<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
    lat: &Lattice<T>,
) -> Result<Residual<T>> {
    let prod = |x: Complex<T>, y: Complex<T>, u: Complex<T>, w: Complex<T>| -> Result<Complex<T>> {
        Ok(sigma(x + y, lat)? * sigma(x - y, lat)? * sigma(u + w, lat)? * sigma(u - w, lat)?)
    };
    let terms = [prod(a, b, c, d)?, prod(b, c, a, d)?, prod(c, a, b, d)?];
    Ok(Residual {
        value: terms[0] + terms[1] + terms[2],
        scale: terms.iter().fold(T::zero(), |m, t| m.max(t.norm())),
    })
}

/// `℘′(z)² − (4℘(z)³ − g2℘(z) − g3)`, scaled by `max(1, |℘′(z)²|)`.
pub fn differential_equation_residual<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let p = wp(z, lat)?;
    let dp = wp_prime(z, lat)?;
    let lhs = dp * dp;
    let rhs = p * p * p * T::lit(4.0) - lat.g2 * p - lat.g3;
    Ok(Residual {
        value: lhs - rhs,
        scale: lhs.norm().max(T::one()),
    })
}

/// `℘(2z)` against `¼(℘″(z)/℘′(z))² − 2℘(z)`.
pub fn duplication_residual<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let direct = wp(z * T::lit(2.0), lat)?;
    let r = wp_second(z, lat)? / wp_prime(z, lat)?;
    let via = r * r / T::lit(4.0) - wp(z, lat)? * T::lit(2.0);
    Ok(Residual::sides(direct, via))
}

/// `(μ⁴g2, μ⁶g3)`.
pub fn scale_invariants<T: Real>(inv: &CurveInvariants<T>, mu: Complex<T>) -> Result<CurveInvariants<T>> {
    if mu.norm() == T::zero() {
        return Err(Error::ZeroScale);
    }
    let mu2 = mu * mu;
    let mu4 = mu2 * mu2;
    CurveInvariants::new(inv.g2 * mu4, inv.g3 * mu4 * mu2)
}

/// `℘(z; g) − μ⁻²℘(z/μ; μ⁴g2, μ⁶g3)`; `scaled` must be the lattice of the scaled invariants.
pub fn wp_scaling_residual<T: Real>(
    z: Complex<T>,
    mu: Complex<T>,
    lat: &Lattice<T>,
    scaled: &Lattice<T>,
) -> Result<Residual<T>> {
    Ok(Residual::sides(wp(z, lat)?, wp(z / mu, scaled)? / (mu * mu)))
}

/// `σ(z; g) − μσ(z/μ; μ⁴g2, μ⁶g3)`.
pub fn sigma_scaling_residual<T: Real>(
    z: Complex<T>,
    mu: Complex<T>,
    lat: &Lattice<T>,
    scaled: &Lattice<T>,
) -> Result<Residual<T>> {
    Ok(Residual::sides(sigma(z, lat)?, sigma(z / mu, scaled)? * mu))
}

fn sigma_ratio<T: Real>(num: Complex<T>, dens: &[(Complex<T>, i32)], lat: &Lattice<T>) -> Result<Complex<T>> {
    let mut l = log_sigma(num, lat)?;
    for (d, k) in dens {
        l = l - log_sigma(*d, lat)? * T::lit(*k as f64);
    }
    Ok(l.exp())
}

/// `℘′(κ)²` against `σ(2κ)²/σ(κ)⁸`.
pub fn sigma_quotient_square_residual<T: Real>(kappa: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let dp = wp_prime(kappa, lat)?;
    let r = sigma_ratio(kappa * T::lit(2.0), &[(kappa, 4)], lat)?;
    Ok(Residual::sides(dp * dp, r * r))
}

/// `℘′(κ)²(℘(2κ) − ℘(κ))` against `−σ(3κ)/σ(κ)⁹`.
pub fn sigma_quotient_cubic_residual<T: Real>(kappa: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let dp = wp_prime(kappa, lat)?;
    let lhs = dp * dp * (wp(kappa * T::lit(2.0), lat)? - wp(kappa, lat)?);
    let rhs = -sigma_ratio(kappa * T::lit(3.0), &[(kappa, 9)], lat)?;
    Ok(Residual::sides(lhs, rhs))
}

/// `℘′(κ)⁴ + ℘″(κ)℘′(κ)²(℘(2κ) − ℘(κ))` against `−σ(4κ)/(σ(2κ)σ(κ)¹²)`.
pub fn sigma_quotient_quartic_residual<T: Real>(kappa: Complex<T>, lat: &Lattice<T>) -> Result<Residual<T>> {
    let (lhs, rhs) = quartic_sides(kappa, lat)?;
    Ok(Residual::sides(lhs, rhs))
}

pub(crate) fn quartic_sides<T: Real>(kappa: Complex<T>, lat: &Lattice<T>) -> Result<(Complex<T>, Complex<T>)> {
    let dp2 = {
        let d = wp_prime(kappa, lat)?;
        d * d
    };
    let lhs = dp2 * dp2 + wp_second(kappa, lat)? * dp2 * (wp(kappa * T::lit(2.0), lat)? - wp(kappa, lat)?);
    let rhs = -sigma_ratio(kappa * T::lit(4.0), &[(kappa * T::lit(2.0), 1), (kappa, 12)], lat)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::scalar::cplx;
    use crate::weierstrass::lattice_from_invariants;

    fn starred() -> Lattice<f64> {
        lattice_from_invariants(&CurveInvariants::from_rational(&ratio(121, 12), &ratio(-845, 216)).unwrap()).unwrap()
    }

    #[test]
    fn addition_formula_structure() {
        let lat = starred();
        let (z, k) = (cplx(0.3, 0.2), cplx(-0.45, 0.1));
        let r = addition_formula_residual(z, k, &lat).unwrap();
        assert!(r.relative() < 1e-12);
        let same = addition_formula_residual(z, z, &lat).unwrap();
        assert!(same.value.norm() < 1e-14);
        let swapped = addition_formula_residual(k, z, &lat).unwrap();
        // ℘(κ) − ℘(z) changes sign; the σ side is symmetric up to σ(z−κ) = −σ(κ−z)
        assert!(swapped.relative() < 1e-12);
    }

    #[test]
    fn three_term_slots() {
        let lat = starred();
        let (a, b, c) = (cplx(0.1, 0.3), cplx(-0.2, 0.15), cplx(0.4, -0.1));
        assert!(three_term_residual(a, b, c, c, &lat).unwrap().relative() < 1e-10);
        let d = cplx(0.05, -0.33);
        let r1 = three_term_residual(a, b, c, d, &lat).unwrap();
        let r2 = three_term_residual(a, c, d, b, &lat).unwrap();
        assert!(r1.relative() < 1e-12 && r2.relative() < 1e-12);
    }

    #[test]
    fn scaling_with_golden_mu() {
        // μ̃ = 6^{1/4} maps g2 = 121/72, g3 = −845/(1296√6) to the rational curve
        let mu = 6f64.powf(0.25);
        let g3 = -845.0 / (1296.0 * 6f64.sqrt());
        let inv = CurveInvariants::from_real(121.0 / 72.0, g3).unwrap();
        let s = scale_invariants(&inv, cplx(mu, 0.0)).unwrap();
        assert!((s.g2.re - 121.0 / 12.0).abs() < 1e-13);
        assert!((s.g3.re + 845.0 / 216.0).abs() < 1e-13);
        let same = scale_invariants(&inv, cplx(-1.0, 0.0)).unwrap();
        assert_eq!((same.g2, same.g3), (inv.g2, inv.g3));
        assert_eq!(scale_invariants(&inv, cplx(0.0, 0.0)), Err(Error::ZeroScale));
    }
}
