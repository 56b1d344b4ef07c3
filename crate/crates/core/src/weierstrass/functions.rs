use num_complex::Complex;
use num_traits::Zero;

use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::scalar::{cplx, real, Real};

/// Sums `term(1) + term(2) + ...` until two consecutive terms fall below
/// `eps · max(|partial|, scale)`.
fn series<T: Real>(lat: &Lattice<T>, scale: T, mut term: impl FnMut(usize) -> Complex<T>) -> Result<Complex<T>> {
    let mut sum: Complex<T> = Complex::zero();
    let mut small = 0;
    for k in 1..=lat.precision.max_terms {
        let t = term(k);
        sum = sum + t;
        if t.norm() <= lat.precision.eps * sum.norm().max(scale) {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::PrecisionLoss("series hit the term cap".into()))
}

/// Centered representative plus the check that it is not a lattice point.
fn centered<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<(Complex<T>, i64, i64)> {
    let (zr, m, n) = lat.reduce_centered(z);
    if zr.norm() <= lat.precision.eps * T::lit(4.0) * lat.omega1.norm() {
        return Err(Error::PoleAtLatticePoint);
    }
    Ok((zr, m, n))
}

/// Trigonometric variable `πz/(2ω1)` and `(π/(2ω1))`.
fn trig_var<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> (Complex<T>, Complex<T>) {
    let c = real(T::PI()) / (lat.omega1 * T::lit(2.0));
    (z * c, c)
}

/// `q^{2k}/(1 − q^{2k})`.
fn lambert_coeff<T: Real>(q2k: Complex<T>) -> Complex<T> {
    q2k / (-q2k + T::one())
}

/// Weierstrass ℘.
pub fn wp<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let (zr, _, _) = centered(z, lat)?;
    let (v, c) = trig_var(zr, lat);
    let s = v.sin();
    let lead = c * c / (s * s) - lat.eta1 / lat.omega1;
    let q2 = lat.q * lat.q;
    let mut q2k = Complex::<T>::new(T::one(), T::zero());
    let tail = series(lat, lead.norm(), |k| {
        q2k = q2k * q2;
        let kf = T::lit(k as f64);
        lambert_coeff(q2k) * (v * T::lit(2.0) * kf).cos() * kf
    })?;
    Ok(lead - tail * c * c * T::lit(8.0))
}

/// `℘′(z)`.
pub fn wp_prime<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let (zr, _, _) = centered(z, lat)?;
    let (v, c) = trig_var(zr, lat);
    let s = v.sin();
    let lead = -c * c * c * v.cos() / (s * s * s) * T::lit(2.0);
    let q2 = lat.q * lat.q;
    let mut q2k = Complex::<T>::new(T::one(), T::zero());
    let tail = series(lat, lead.norm(), |k| {
        q2k = q2k * q2;
        let kf = T::lit(k as f64);
        lambert_coeff(q2k) * (v * T::lit(2.0) * kf).sin() * (kf * kf)
    })?;
    Ok(lead + tail * c * c * c * T::lit(16.0))
}

/// `℘″ = 6℘² − g2/2`.
pub fn wp_second<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let p = wp(z, lat)?;
    Ok(p * p * T::lit(6.0) - lat.g2 / T::lit(2.0))
}

/// Weierstrass ζ, quasi-periodic: `ζ(z + 2mω1 + 2nω2) = ζ(z) + 2(mη1 + nη2)`.
pub fn zeta_w<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let (zr, m, n) = centered(z, lat)?;
    let (v, c) = trig_var(zr, lat);
    let lead = lat.eta1 * zr / lat.omega1 + c * v.cos() / v.sin();
    let q2 = lat.q * lat.q;
    let mut q2k = Complex::<T>::new(T::one(), T::zero());
    let tail = series(lat, lead.norm(), |k| {
        q2k = q2k * q2;
        lambert_coeff(q2k) * (v * T::lit(2.0 * k as f64)).sin()
    })?;
    Ok(lead + tail * c * T::lit(4.0) + lat.eta_of(m, n) * T::lit(2.0))
}

/// `log σ(z)`: real part `log|σ(z)|`, imaginary part an argument of `σ(z)`.
///
/// Quasi-periodicity is applied additively, so arguments far from the origin
/// do not overflow.
pub fn log_sigma<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let (zr, m, n) = centered(z, lat)?;
    let (v, _) = trig_var(zr, lat);
    let two = T::lit(2.0);
    let mut out = (lat.omega1 * two / T::PI()).ln() + lat.eta1 * zr * zr / (lat.omega1 * two) + v.sin().ln();
    let q2 = lat.q * lat.q;
    let (e_plus, e_minus) = ((cplx(T::zero(), two) * v).exp(), (cplx(T::zero(), -two) * v).exp());
    let mut q2k = Complex::<T>::new(T::one(), T::zero());
    out = out
        + series(lat, T::one(), |_| {
            q2k = q2k * q2;
            (-q2k * e_plus + T::one()).ln() + (-q2k * e_minus + T::one()).ln() - (-q2k + T::one()).ln() * two
        })?;
    if m != 0 || n != 0 {
        // σ(z_r + W) = (−1)^{m+n+mn} exp(2η_W (z_r + W/2)) σ(z_r)
        let w = lat.period(m, n);
        out = out + lat.eta_of(m, n) * (zr + w / two) * two;
        if (m + n + m * n).rem_euclid(2) == 1 {
            out = out + cplx(T::zero(), T::PI());
        }
    }
    if !crate::scalar::is_finite(out) {
        return Err(Error::PrecisionLoss("log sigma is not finite".into()));
    }
    Ok(wrap_arg(out))
}

/// Weierstrass σ; zero at lattice points.
pub fn sigma<T: Real>(z: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    match log_sigma(z, lat) {
        Ok(l) => {
            if l.re > T::max_value().ln() {
                return Err(Error::Overflow);
            }
            Ok(l.exp())
        }
        Err(Error::PoleAtLatticePoint) => Ok(Complex::zero()),
        Err(e) => Err(e),
    }
}

/// Brings the imaginary part into `(−π, π]`.
pub(crate) fn wrap_arg<T: Real>(l: Complex<T>) -> Complex<T> {
    let two_pi = T::PI() * T::lit(2.0);
    let mut im = l.im - two_pi * (l.im / two_pi).round();
    if im <= -T::PI() {
        im = im + two_pi;
    }
    cplx(l.re, im)
}
