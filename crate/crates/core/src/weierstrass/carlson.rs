use num_complex::Complex;

use super::functions::{wp, wp_prime};
use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::scalar::{cplx, Precision, Real};

/// Carlson's symmetric integral `RF(x, y, z)` by duplication.
pub fn carlson_rf<T: Real>(x: Complex<T>, y: Complex<T>, z: Complex<T>, prec: &Precision<T>) -> Result<Complex<T>> {
    let zeros = [x, y, z].iter().filter(|w| w.norm() == T::zero()).count();
    if zeros > 1 {
        return Err(Error::InvalidArgument("RF needs at most one zero argument".into()));
    }
    let three = T::lit(3.0);
    let a0 = (x + y + z) / three;
    let q =
        (three * prec.eps).powf(-T::one() / T::lit(6.0)) * (a0 - x).norm().max((a0 - y).norm()).max((a0 - z).norm());
    let (mut x, mut y, mut z, mut a) = (x, y, z, a0);
    let (x0, y0) = (x, y);
    let mut pow4 = T::one();
    for _ in 0..200 {
        if q / pow4 < a.norm() {
            let xx = (a0 - x0) / (a * pow4);
            let yy = (a0 - y0) / (a * pow4);
            let zz = -xx - yy;
            let e2 = xx * yy - zz * zz;
            let e3 = xx * yy * zz;
            let poly = -e2 / T::lit(10.0) + e3 / T::lit(14.0) + e2 * e2 / T::lit(24.0) - e2 * e3 * T::lit(3.0 / 44.0)
                + T::one();
            return Ok(poly / a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        let four = T::lit(4.0);
        a = (a + lam) / four;
        x = (x + lam) / four;
        y = (y + lam) / four;
        z = (z + lam) / four;
        pow4 = pow4 * four;
    }
    Err(Error::PrecisionLoss("RF duplication did not converge".into()))
}

/// A `z` with `℘(z) = x`, reduced to the `[0,1)²` cell.
///
/// Starts from `RF(x − e1, x − e2, x − e3)` (and rotated variants when the
/// principal branch misses), then Newton-polishes. The sign of the result is
/// arbitrary since ℘ is even.
pub fn inverse_wp<T: Real>(x: Complex<T>, lat: &Lattice<T>) -> Result<Complex<T>> {
    let tol = T::epsilon().powf(T::lit(2.0 / 3.0)) * T::lit(4.0);
    let scale = x.norm().max(T::one());
    let args = lat.roots.map(|e| x - e);
    let mut best: Option<(T, Complex<T>)> = None;
    for k in 0..8 {
        // RF(c·u) = c^{−½} RF(u) along a continuous rotation of the arguments
        let theta = T::PI() * T::lit(k as f64) / T::lit(4.0);
        let c = cplx(theta.cos(), theta.sin());
        let Ok(r) = carlson_rf(args[0] * c, args[1] * c, args[2] * c, &lat.precision) else {
            continue;
        };
        let z0 = r * c.sqrt();
        if !crate::scalar::is_finite(z0) {
            continue;
        }
        let z = newton(z0, x, lat);
        let err = match wp(z, lat) {
            Ok(p) => (p - x).norm() / scale,
            Err(_) => continue,
        };
        if err <= tol {
            return Ok(lat.reduce_to_cell(z));
        }
        if best.is_none_or(|(e, _)| err < e) {
            best = Some((err, z));
        }
    }
    Err(Error::PrecisionLoss(format!(
        "inverse of ℘ at {x} not resolved (best residual {})",
        best.map_or(T::infinity(), |(e, _)| e)
    )))
}

fn newton<T: Real>(mut z: Complex<T>, x: Complex<T>, lat: &Lattice<T>) -> Complex<T> {
    for _ in 0..8 {
        let (Ok(p), Ok(dp)) = (wp(z, lat), wp_prime(z, lat)) else {
            break;
        };
        let f = p - x;
        if f.norm() <= T::epsilon() * x.norm().max(T::one()) {
            break;
        }
        // near a half period ℘′ vanishes and the RF value is already accurate
        if dp.norm() * dp.norm() <= T::epsilon().sqrt() * p.norm().max(T::one()).powi(3) {
            break;
        }
        let step = f / dp;
        if !crate::scalar::is_finite(step) {
            break;
        }
        z = z - step;
    }
    z
}
