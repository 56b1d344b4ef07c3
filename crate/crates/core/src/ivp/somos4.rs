use num_complex::Complex;
use num_traits::Zero;

use super::{lift, lsig, rel, seeds_nonzero, Convention, SolveOptions, TauSolution, TauValue};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational, SequenceWindow, Somos4Params};
use crate::qrt::{f_from_tau, invariant_j, step_f_back, Coeffs, FState};
use crate::scalar::Real;
use crate::weierstrass::{inverse_wp, wp, wp_prime, CurveInvariants, Lattice};

/// `τ(n) = A Bⁿ σ(z0 + nκ) / σ(κ)^{n²}` on `y² = 4x³ − g2x − g3`.
#[derive(Debug, Clone)]
pub struct Somos4Solution<T> {
    pub params: Somos4Params,
    pub seeds: SequenceWindow,
    /// `f(−1), f(0), f(1), f(2)`.
    pub f: [Rational; 4],
    pub j: Rational,
    pub lambda: Rational,
    pub g2: Rational,
    pub g3: Rational,
    pub inv: CurveInvariants<T>,
    pub lat: Lattice<T>,
    pub kappa: Complex<T>,
    pub z0: Complex<T>,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub convention: Convention,
    pub reconstruction_error: f64,
}

/// Solves the Somos 4 problem with seeds `τ0..τ3`.
pub fn solve_somos4<T: Real>(
    params: &Somos4Params,
    seeds: &SequenceWindow,
    opts: &SolveOptions<T>,
) -> Result<Somos4Solution<T>> {
    if seeds.len() != 4 || seeds.base_index() != 0 {
        return Err(Error::InvalidSeed("Somos 4 needs seeds tau0..tau3".into()));
    }
    seeds_nonzero(seeds)?;
    let c = Coeffs::somos4(params);
    let f1 = f_from_tau(seeds, 1)?;
    let f2 = f_from_tau(seeds, 2)?;
    let s0 = step_f_back(&FState::new(f1.clone(), f2.clone(), 2)?, &c)?;
    let s_1 = step_f_back(&s0, &c)?;
    let (fm1, f0) = (s_1.f_prev.clone(), s0.f_prev.clone());
    let j = invariant_j(&f0, &f1, &c)?;
    if params.alpha.is_zero() {
        return Err(Error::DegenerateCurve("alpha = 0 puts kappa at a half period".into()));
    }
    let lambda = (&j * &j / rat(4) - &params.beta) / (rat(3) * &params.alpha);
    let g2 = rat(12) * &lambda * &lambda - rat(2) * &j;
    let g3 = rat(4) * &lambda * &lambda * &lambda - &g2 * &lambda - &params.alpha;
    let inv = CurveInvariants::<T>::from_rational(&g2, &g3)?;
    let lat = Lattice::new(&inv, opts.precision)?;

    // κ: ℘(κ) = λ with ℘′(κ) the principal square root of α
    let k_raw = inverse_wp(lift::<T>(&lambda), &lat)?;
    let target = lift::<T>(&params.alpha).sqrt();
    let (kappa_sign, kappa, kappa_residual) = pick_sign(k_raw, |k| Ok(wp_prime(k, &lat)? - target), target)?;
    if kappa_residual > opts.consistency_tol {
        return Err(Error::ConsistencyFailure(format!(
            "wp'(kappa)^2 = alpha fails (residual {kappa_residual})"
        )));
    }

    // z0: ℘(z0) = λ − f0 and ℘′(z0)℘′(κ) = f0²(f1 − f(−1))
    let z_raw = inverse_wp(lift::<T>(&(&lambda - &f0)), &lat)?;
    let dk = wp_prime(kappa, &lat)?;
    let rhs = lift::<T>(&(&f0 * &f0 * (&f1 - &fm1)));
    let (z0_sign, z0, z0_residual) = pick_sign(z_raw, |z| Ok(wp_prime(z, &lat)? * dk - rhs), rhs)?;
    if z0_residual > opts.consistency_tol {
        return Err(Error::ConsistencyFailure(format!(
            "wp'(z0) wp'(kappa) = f0^2 (f1 - f(-1)) fails (residual {z0_residual})"
        )));
    }

    let (kappa, z0) = (lat.reduce_centered(kappa).0, lat.reduce_centered(z0).0);
    let ls = |z: Complex<T>| lsig(z, &lat);
    let log_a = lift::<T>(seeds.at(0)?).ln() - ls(z0)?;
    let log_b = ls(kappa)? + ls(z0)? + lift::<T>(seeds.at(1)?).ln() - ls(z0 + kappa)? - lift::<T>(seeds.at(0)?).ln();
    let mut sol = Somos4Solution {
        params: params.clone(),
        seeds: seeds.clone(),
        f: [fm1, f0, f1, f2],
        j,
        lambda,
        g2,
        g3,
        inv,
        lat,
        kappa,
        z0,
        a: log_a.exp(),
        b: log_b.exp(),
        convention: Convention {
            root_branch: "principal square root",
            kappa_sign,
            z0_sign,
            kappa_residual,
            z0_residual,
        },
        reconstruction_error: 0.0,
    };
    sol.reconstruction_error = reconstruction_error(&sol)?;
    if sol.reconstruction_error > opts.reconstruction_tol {
        return Err(Error::ConsistencyFailure(format!(
            "seeds not reproduced (relative error {})",
            sol.reconstruction_error
        )));
    }
    Ok(sol)
}

/// Picks `±raw` minimising `|residual(z)| / max(1, |scale|)`.
pub(crate) fn pick_sign<T: Real>(
    raw: Complex<T>,
    residual: impl Fn(Complex<T>) -> Result<Complex<T>>,
    scale: Complex<T>,
) -> Result<(i8, Complex<T>, f64)> {
    let s = scale.norm().max(T::one());
    let plus = (residual(raw)?.norm() / s).to_f64_lossy();
    let minus = (residual(-raw)?.norm() / s).to_f64_lossy();
    if minus < plus {
        Ok((-1, -raw, minus))
    } else {
        Ok((1, raw, plus))
    }
}

pub(crate) fn reconstruction_error<T: Real, S: TauSolution<T>>(sol: &S) -> Result<f64> {
    let mut worst = 0.0f64;
    for (n, v) in sol.seeds().iter() {
        let t = sol.eval_tau(n)?.value.ok_or(Error::Overflow)?;
        worst = worst.max(rel(t, lift(v)));
    }
    Ok(worst)
}

impl<T: Real> Somos4Solution<T> {
    /// `1728 g2³ / (g2³ − 27 g3²)`.
    pub fn j_invariant(&self) -> Rational {
        let c = &self.g2 * &self.g2 * &self.g2;
        rat(1728) * &c / (&c - rat(27) * &self.g3 * &self.g3)
    }

    fn log_tau(&self, n: i64) -> Result<Complex<T>> {
        let nf = T::lit(n as f64);
        let ls_k = lsig(self.kappa, &self.lat)?;
        Ok(self.a.ln() + self.b.ln() * nf + lsig(self.z0 + self.kappa * nf, &self.lat)? - ls_k * (nf * nf))
    }

    /// `α = ℘′(κ)²` and `β = ℘′(κ)²(℘(2κ) − ℘(κ))` recomputed from the curve.
    pub fn parameters_from_curve(&self) -> Result<(Complex<T>, Complex<T>)> {
        let d = wp_prime(self.kappa, &self.lat)?;
        let d2 = d * d;
        let beta = d2 * (wp(self.kappa * T::lit(2.0), &self.lat)? - wp(self.kappa, &self.lat)?);
        Ok((d2, beta))
    }

    /// `f(n) = λ − ℘(z0 + nκ)`.
    pub fn eval_f_closed(&self, n: i64) -> Result<Complex<T>> {
        Ok(lift::<T>(&self.lambda) - wp(self.z0 + self.kappa * T::lit(n as f64), &self.lat)?)
    }
}

impl<T: Real> TauSolution<T> for Somos4Solution<T> {
    fn eval_tau(&self, n: i64) -> Result<TauValue<T>> {
        Ok(TauValue::from_log(n, self.log_tau(n)?))
    }

    fn seeds(&self) -> &SequenceWindow {
        &self.seeds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::iterate_somos4;

    fn somos4(a: i64, b: i64) -> Result<Somos4Solution<f64>> {
        let p = Somos4Params::new(rat(a), rat(b)).unwrap();
        solve_somos4(&p, &SequenceWindow::from_integers(0, &[1; 4]), &SolveOptions::default())
    }

    #[test]
    fn somos4_invariants() {
        let s = somos4(1, 1).unwrap();
        assert_eq!(
            (s.j.clone(), s.lambda.clone(), s.g2.clone(), s.g3.clone()),
            (rat(4), rat(1), rat(4), rat(-1))
        );
        assert_eq!(s.f, [crate::exact::ratio(3, 4), rat(2), rat(1), rat(1)]);
        let (a, b) = s.parameters_from_curve().unwrap();
        assert!((a - 1.0).norm() < 1e-9 && (b - 1.0).norm() < 1e-9);
    }

    #[test]
    fn somos4_reconstruction() {
        let s = somos4(1, 1).unwrap();
        let p = Somos4Params::new(rat(1), rat(1)).unwrap();
        let w = iterate_somos4(&p, &SequenceWindow::from_integers(0, &[1; 4]), -5, 20).unwrap();
        for (n, v) in w.iter() {
            let t = s.eval_tau(n).unwrap();
            assert!((t.log_abs - crate::exact::ln_abs(v)).abs() < 1e-8, "n = {n}");
            assert!(t.is_real());
        }
        for n in -3..8 {
            let f = s.eval_f_closed(n).unwrap();
            assert!((f - crate::exact::to_f64(&f_from_tau(&w, n).unwrap())).norm() < 1e-9);
        }
    }

    #[test]
    fn degenerate_discriminant() {
        assert!(matches!(somos4(1, 0), Err(Error::DegenerateCurve(_))));
        assert!(matches!(somos4(0, 1), Err(Error::DegenerateCurve(_))));
    }
}
