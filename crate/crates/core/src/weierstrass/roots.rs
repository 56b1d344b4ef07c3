use std::cmp::Ordering;

use num_complex::Complex;

use super::CurveInvariants;
use crate::error::Result;
use crate::scalar::{cplx, real, Real};

/// Roots of `4x³ − g2 x − g3`.
///
/// Real invariants with three real roots come back as `e1 > e2 > e3`; with one
/// real root it comes first, then the conjugate with positive imaginary part.
/// Complex invariants are ordered by decreasing real, then imaginary, part.
pub fn curve_roots<T: Real>(inv: &CurveInvariants<T>) -> Result<[Complex<T>; 3]> {
    inv.check_discriminant()?;
    let mut roots = if inv.is_real() {
        real_roots(inv.g2.re, inv.g3.re)
    } else {
        complex_roots(inv.g2, inv.g3)
    };
    for r in roots.iter_mut() {
        *r = polish(*r, inv);
    }
    if !inv.is_real() {
        roots.sort_by(|a, b| {
            b.re.partial_cmp(&a.re)
                .unwrap_or(Ordering::Equal)
                .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
        });
    }
    Ok(roots)
}

fn real_roots<T: Real>(g2: T, g3: T) -> [Complex<T>; 3] {
    // depressed form x³ + p x + q = 0
    let p = -g2 / T::lit(4.0);
    let q = -g3 / T::lit(4.0);
    let disc = g2 * g2 * g2 - T::lit(27.0) * g3 * g3;
    let three = T::lit(3.0);
    if disc > T::zero() {
        let m = T::lit(2.0) * (-p / three).sqrt();
        let arg = (three * q / (T::lit(2.0) * p) * (-three / p).sqrt())
            .max(-T::one())
            .min(T::one());
        let theta = arg.acos() / three;
        let step = T::lit(2.0) * T::PI() / three;
        let r = [
            m * theta.cos(),
            m * (theta - step).cos(),
            m * (theta - step - step).cos(),
        ];
        let mut r = r;
        r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        [real(r[0]), real(r[1]), real(r[2])]
    } else {
        let d = q * q / T::lit(4.0) + p * p * p / T::lit(27.0);
        let s = d.max(T::zero()).sqrt();
        let x = (-q / T::lit(2.0) + s).cbrt() + (-q / T::lit(2.0) - s).cbrt();
        let im = (three * x * x + T::lit(4.0) * p).max(T::zero()).sqrt() / T::lit(2.0);
        let re = -x / T::lit(2.0);
        [real(x), cplx(re, im), cplx(re, -im)]
    }
}

fn complex_roots<T: Real>(g2: Complex<T>, g3: Complex<T>) -> [Complex<T>; 3] {
    let p = -g2 / T::lit(4.0);
    let q = -g3 / T::lit(4.0);
    let half_q = q / T::lit(2.0);
    let s = (half_q * half_q + p * p * p / T::lit(27.0)).sqrt();
    let (c1, c2) = (-half_q + s, -half_q - s);
    let c = if c1.norm() >= c2.norm() { c1 } else { c2 };
    let c = c.powf(T::one() / T::lit(3.0));
    let w = cplx(-T::lit(0.5), T::lit(3.0).sqrt() / T::lit(2.0));
    let mut out = [c; 3];
    let mut ck = c;
    for r in out.iter_mut() {
        *r = if ck.norm() > T::zero() {
            ck - p / (ck * T::lit(3.0))
        } else {
            ck
        };
        ck = ck * w;
    }
    out
}

fn polish<T: Real>(mut x: Complex<T>, inv: &CurveInvariants<T>) -> Complex<T> {
    for _ in 0..3 {
        let f = x * x * x * T::lit(4.0) - inv.g2 * x - inv.g3;
        let df = x * x * T::lit(12.0) - inv.g2;
        if df.norm() == T::zero() {
            break;
        }
        let dx = f / df;
        if !crate::scalar::is_finite(dx) {
            break;
        }
        x = x - dx;
    }
    x
}
