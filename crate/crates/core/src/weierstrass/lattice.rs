use num_complex::Complex;
use num_traits::Zero;

use super::roots::curve_roots;
use super::CurveInvariants;
use crate::error::{Error, Result};
use crate::scalar::{cplx, real, Precision, Real};

/// Period lattice `2ω1 ℤ + 2ω2 ℤ` with its quasi-periods and nome.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    pub omega1: Complex<T>,
    pub omega2: Complex<T>,
    /// `ζ(ω1)`.
    pub eta1: Complex<T>,
    /// `ζ(ω2)`, from the Legendre relation.
    pub eta2: Complex<T>,
    /// `exp(iπ ω2/ω1)`.
    pub q: Complex<T>,
    pub roots: [Complex<T>; 3],
    pub g2: Complex<T>,
    pub g3: Complex<T>,
    pub precision: Precision<T>,
}

/// Builds the lattice of `y² = 4x³ − g2 x − g3` with default precision.
pub fn lattice_from_invariants<T: Real>(inv: &CurveInvariants<T>) -> Result<Lattice<T>> {
    Lattice::new(inv, Precision::default())
}

impl<T: Real> Lattice<T> {
    pub fn new(inv: &CurveInvariants<T>, precision: Precision<T>) -> Result<Self> {
        let roots = curve_roots(inv)?;
        let cands = period_candidates(&roots, &precision)?;
        let tol = precision.eps.sqrt();
        let mut best: Option<(T, Lattice<T>)> = None;
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                let (a, b) = (cands[i], cands[j]);
                if (b / a).im.abs() < T::lit(1e-6) {
                    continue;
                }
                let Ok(lat) = Self::from_periods(a, b, inv, roots, precision) else {
                    continue;
                };
                let err = lat.eisenstein_error(inv)?;
                if best.as_ref().is_none_or(|(e, _)| err < *e) {
                    best = Some((err, lat));
                }
            }
        }
        match best {
            Some((err, lat)) if err <= tol => Ok(lat),
            Some((err, _)) => Err(Error::PrecisionLoss(format!(
                "period lattice does not reproduce the invariants (error {err})"
            ))),
            None => Err(Error::PrecisionLoss("no independent periods found".into())),
        }
    }

    /// Lattice spanned by the full periods `w1`, `w2`, reduced to canonical form.
    fn from_periods(
        w1: Complex<T>,
        w2: Complex<T>,
        inv: &CurveInvariants<T>,
        roots: [Complex<T>; 3],
        precision: Precision<T>,
    ) -> Result<Self> {
        let (mut w1, mut w2) = gauss_reduce(w1, w2);
        if inv.is_real() {
            (w1, w2) = real_basis(w1, w2);
        }
        let omega1 = w1 / T::lit(2.0);
        let omega2 = w2 / T::lit(2.0);
        let i_pi = cplx(T::zero(), T::PI());
        let q = (i_pi * omega2 / omega1).exp();
        if q.norm() > T::lit(0.999) {
            return Err(Error::PrecisionLoss(format!(
                "nome too close to the unit circle: |q| = {}",
                q.norm()
            )));
        }
        let mut lat = Lattice {
            omega1,
            omega2,
            eta1: Complex::zero(),
            eta2: Complex::zero(),
            q,
            roots,
            g2: inv.g2,
            g3: inv.g3,
            precision,
        };
        let q2 = q * q;
        let s = lambert(q2, 1, &precision)?;
        lat.eta1 = real(T::PI() * T::PI()) / (omega1 * T::lit(12.0)) * (-s * T::lit(24.0) + T::one());
        lat.eta2 = (lat.eta1 * omega2 - i_pi / T::lit(2.0)) / omega1;
        Ok(lat)
    }

    /// `ω2/ω1`, in the upper half plane.
    pub fn tau(&self) -> Complex<T> {
        self.omega2 / self.omega1
    }

    /// Lattice vector `2mω1 + 2nω2`.
    pub fn period(&self, m: i64, n: i64) -> Complex<T> {
        (self.omega1 * T::lit(m as f64) + self.omega2 * T::lit(n as f64)) * T::lit(2.0)
    }

    /// Real coordinates `(a, b)` with `z = 2aω1 + 2bω2`.
    pub fn coords(&self, z: Complex<T>) -> (T, T) {
        let (w1, w2) = (self.omega1 * T::lit(2.0), self.omega2 * T::lit(2.0));
        let a = (z * w2.conj()).im / (w1 * w2.conj()).im;
        let b = (z * w1.conj()).im / (w2 * w1.conj()).im;
        (a, b)
    }

    /// Representative in `[0,1)×[0,1)` lattice coordinates.
    pub fn reduce_to_cell(&self, z: Complex<T>) -> Complex<T> {
        let (a, b) = self.coords(z);
        z - self.period(floor_i64(a), floor_i64(b))
    }

    /// Representative in `[−½,½)×[−½,½)` lattice coordinates, with the
    /// subtracted multiples: `z = z_r + 2mω1 + 2nω2`.
    pub fn reduce_centered(&self, z: Complex<T>) -> (Complex<T>, i64, i64) {
        let (a, b) = self.coords(z);
        let half = T::lit(0.5);
        let (m, n) = (floor_i64(a + half), floor_i64(b + half));
        (z - self.period(m, n), m, n)
    }

    /// Quasi-period `η` attached to the lattice vector `2mω1 + 2nω2`: `mη1 + nη2`.
    pub fn eta_of(&self, m: i64, n: i64) -> Complex<T> {
        self.eta1 * T::lit(m as f64) + self.eta2 * T::lit(n as f64)
    }

    /// `(g2, g3)` recomputed from the lattice by Eisenstein series.
    pub fn eisenstein_invariants(&self) -> Result<(Complex<T>, Complex<T>)> {
        let q2 = self.q * self.q;
        let e4 = lambert(q2, 3, &self.precision)? * T::lit(240.0) + T::one();
        let e6 = -lambert(q2, 5, &self.precision)? * T::lit(504.0) + T::one();
        let r = real(T::PI()) / self.omega1;
        let r2 = r * r;
        let r4 = r2 * r2;
        Ok((r4 * e4 / T::lit(12.0), r4 * r2 * e6 / T::lit(216.0)))
    }

    /// Weighted relative error of the Eisenstein round trip.
    pub fn eisenstein_error(&self, inv: &CurveInvariants<T>) -> Result<T> {
        let (g2, g3) = self.eisenstein_invariants()?;
        let s = inv.scale();
        Ok(((g2 - inv.g2).norm() / (s * s)).max((g3 - inv.g3).norm() / (s * s * s)))
    }

    pub fn invariants(&self) -> CurveInvariants<T> {
        CurveInvariants {
            g2: self.g2,
            g3: self.g3,
            exact: None,
        }
    }
}

fn floor_i64<T: Real>(x: T) -> i64 {
    x.floor().to_i64().unwrap_or(0)
}

/// `Σ n^k x^n / (1 − x^n)`, `n ≥ 1`.
pub(crate) fn lambert<T: Real>(x: Complex<T>, k: i32, prec: &Precision<T>) -> Result<Complex<T>> {
    let mut sum: Complex<T> = Complex::zero();
    let mut xn = x;
    for n in 1..=prec.max_terms {
        let nk = T::lit(n as f64).powi(k);
        let term = xn * nk / (-xn + T::one());
        sum = sum + term;
        if term.norm() <= prec.eps * sum.norm().max(T::one()) {
            return Ok(sum);
        }
        xn = xn * x;
    }
    Err(Error::PrecisionLoss("Lambert series did not converge".into()))
}

/// Arithmetic-geometric mean with the optimal square-root branch at each step.
fn agm<T: Real>(mut a: Complex<T>, mut b: Complex<T>, prec: &Precision<T>) -> Result<Complex<T>> {
    if (a - b).norm() > (a + b).norm() {
        b = -b;
    }
    for _ in 0..prec.max_terms.min(200) {
        if (a - b).norm() <= prec.eps * a.norm() {
            return Ok(a);
        }
        let an = (a + b) / T::lit(2.0);
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        a = an;
        b = bn;
    }
    Err(Error::PrecisionLoss("AGM did not converge".into()))
}

/// Full periods `π / M(√(ei − ej), √(ei − ek))` for each root `ei`.
fn period_candidates<T: Real>(roots: &[Complex<T>; 3], prec: &Precision<T>) -> Result<Vec<Complex<T>>> {
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let a = (roots[i] - roots[j]).sqrt();
        let b = (roots[i] - roots[k]).sqrt();
        let m = agm(a, b, prec)?;
        if m.norm() > T::zero() {
            out.push(real(T::PI()) / m);
        }
    }
    Ok(out)
}

/// Lagrange–Gauss reduction; returns a basis with `Im(w2/w1) > 0`.
fn gauss_reduce<T: Real>(mut w1: Complex<T>, mut w2: Complex<T>) -> (Complex<T>, Complex<T>) {
    for _ in 0..100 {
        if w2.norm() < w1.norm() {
            std::mem::swap(&mut w1, &mut w2);
        }
        let m = (w2 / w1).re.round();
        if m.is_zero() {
            break;
        }
        w2 = w2 - w1 * m;
    }
    if (w2 / w1).im < T::zero() {
        w2 = -w2;
    }
    (w1, w2)
}

/// For real invariants: the shortest positive real period as `2ω1` and the
/// vector of least positive imaginary part as `2ω2`, with `Re(ω2/ω1) ∈ (−½, ½]`.
fn real_basis<T: Real>(w1: Complex<T>, w2: Complex<T>) -> (Complex<T>, Complex<T>) {
    let tol = T::lit(1e-8);
    let mut real_p: Option<Complex<T>> = None;
    let mut up_p: Option<Complex<T>> = None;
    for m in -3i32..=3 {
        for n in -3i32..=3 {
            if m == 0 && n == 0 {
                continue;
            }
            let v = w1 * T::lit(m as f64) + w2 * T::lit(n as f64);
            if v.im.abs() <= tol * v.norm() {
                if v.re > T::zero() && real_p.is_none_or(|p| v.re < p.re) {
                    real_p = Some(v);
                }
            } else if v.im > T::zero() && up_p.is_none_or(|p| v.im < p.im) {
                up_p = Some(v);
            }
        }
    }
    let (Some(r), Some(u)) = (real_p, up_p) else {
        return (w1, w2);
    };
    let r = real(r.re);
    let ratio = (u / r).re;
    let shift = (ratio + T::lit(0.5) - T::lit(1e-9)).floor();
    let mut u = u - r * shift;
    let ratio = (u / r).re;
    if ratio.abs() < T::lit(1e-9) {
        u = cplx(T::zero(), u.im);
    } else if (ratio - T::lit(0.5)).abs() < T::lit(1e-9) {
        u = cplx(r.re / T::lit(2.0), u.im);
    }
    (r, u)
}
