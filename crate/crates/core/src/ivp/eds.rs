use num_complex::Complex;
use num_traits::Zero;

use super::{lsig, Somos4Solution, Somos5Solution};
use crate::error::{Error, Result};
use crate::exact::{eds_residual, iterate_eds, nearest_rational, Rational, SequenceWindow};
use crate::scalar::Real;
use crate::weierstrass::Lattice;

/// Elliptic divisibility sequence recovered from a solved curve.
#[derive(Debug, Clone, PartialEq)]
pub struct EdsMatch {
    /// Exact terms on `−n_hi..=n_hi`.
    pub eds: SequenceWindow,
    /// Worst relative gap between the numerical and the exact terms.
    pub max_rounding_error: f64,
    /// `Some(μ̃⁴)` when even terms were divided by `μ̃ = ℘′(κ)`; the terms then
    /// satisfy `b(n+2)b(n−2) = c·b2²b(n+1)b(n−1) − b1b3b(n)²` with `c = μ̃⁴`
    /// for odd `n` and `c = 1` for even `n`.
    pub parity_rescaled: Option<Rational>,
}

/// `a(m) = σ(mκ)/σ(κ)^{m²}` for `m = 0..=n_hi`.
pub fn eds_from_sigma<T: Real>(lat: &Lattice<T>, kappa: Complex<T>, n_hi: i64) -> Result<Vec<Complex<T>>> {
    let lk = lsig(kappa, lat)?;
    (0..=n_hi)
        .map(|m| {
            let mf = T::lit(m as f64);
            match lsig(kappa * mf, lat) {
                Ok(l) => Ok((l - lk * (mf * mf)).exp()),
                Err(Error::PoleAtLatticePoint) => Ok(Complex::zero()),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// The EDS attached to `κ` on the Somos 4 curve, rounded to rationals and
/// verified exactly.
pub fn matched_eds_somos4<T: Real>(sol: &Somos4Solution<T>, n_hi: i64) -> Result<EdsMatch> {
    let a = eds_from_sigma(&sol.lat, sol.kappa, n_hi)?;
    rationalise(&a, n_hi, None)
}

/// The EDS attached to `κ` on the unstarred Somos 5 curve, with even terms
/// divided by `μ̃ = ℘′(κ)` so that the sequence is rational.
pub fn matched_eds_somos5<T: Real>(sol: &Somos5Solution<T>, n_hi: i64) -> Result<EdsMatch> {
    let mut a = eds_from_sigma(&sol.lat, sol.kappa, n_hi)?;
    for (m, v) in a.iter_mut().enumerate() {
        if m % 2 == 0 {
            *v = *v / sol.mu_t;
        }
    }
    rationalise(&a, n_hi, Some(sol.mu4.clone()))
}

fn rationalise<T: Real>(a: &[Complex<T>], n_hi: i64, parity_rescaled: Option<Rational>) -> Result<EdsMatch> {
    let round = |m: usize| -> Result<_> {
        let v = a[m];
        let re = v.re.to_f64_lossy();
        if v.im.to_f64_lossy().abs() > 1e-8 * re.abs().max(1.0) {
            return Err(Error::NotApplicable(format!("a({m}) = {v} is not real")));
        }
        nearest_rational(re, 1_000_000, 1e-8)
            .ok_or_else(|| Error::NotApplicable(format!("a({m}) = {re} is not a small rational")))
    };
    let seeds = [round(1)?, round(2)?, round(3)?, round(4)?];
    let eds = match &parity_rescaled {
        None => {
            let eds = iterate_eds(&seeds[0], &seeds[1], &seeds[2], &seeds[3], n_hi)?;
            for n in -n_hi + 2..=n_hi - 2 {
                if !eds_residual(&eds, n)?.is_zero() {
                    return Err(Error::ConsistencyFailure(format!("EDS residual nonzero at {n}")));
                }
            }
            eds
        }
        Some(c) => iterate_twisted(&seeds, c, n_hi)?,
    };
    let mut worst = 0.0f64;
    for (m, v) in a.iter().enumerate() {
        let exact = crate::exact::to_f64(eds.at(m as i64)?);
        let v = Complex::new(v.re.to_f64_lossy(), v.im.to_f64_lossy());
        worst = worst.max((v - exact).norm() / exact.abs().max(v.norm()).max(1.0));
    }
    Ok(EdsMatch {
        eds,
        max_rounding_error: worst,
        parity_rescaled,
    })
}

fn iterate_twisted(b: &[Rational; 4], c: &Rational, n_hi: i64) -> Result<SequenceWindow> {
    let mut pos = vec![Rational::zero(), b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()];
    for m in 5..=n_hi as usize {
        let n = m - 2;
        let pivot = &pos[n - 2];
        if pivot.is_zero() {
            return Err(Error::DivisionByZeroTerm(n as i64 - 2));
        }
        let mut lead = &b[1] * &b[1] * &pos[n + 1] * &pos[n - 1];
        if n % 2 == 1 {
            lead *= c;
        }
        pos.push((lead - &b[0] * &b[2] * &pos[n] * &pos[n]) / pivot);
    }
    let mut values: Vec<Rational> = pos[1..].iter().rev().map(|v| -v.clone()).collect();
    values.extend(pos);
    Ok(SequenceWindow::new(-n_hi, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{check_hankel_somos4, iterate_somos4, rat, Somos4Params};
    use crate::ivp::{solve_somos4, SolveOptions};

    #[test]
    fn somos4_hankel_with_matched_eds() {
        let p = Somos4Params::new(rat(1), rat(1)).unwrap();
        let seeds = SequenceWindow::from_integers(0, &[1; 4]);
        let s = solve_somos4::<f64>(&p, &seeds, &SolveOptions::default()).unwrap();
        let m = matched_eds_somos4(&s, 10).unwrap();
        let first: Vec<_> = (1..=4).map(|k| m.eds.at(k).unwrap().clone()).collect();
        assert_eq!(first, [rat(1), rat(-1), rat(-1), rat(5)]);
        assert!(m.max_rounding_error < 1e-8 && m.parity_rescaled.is_none());
        let w = iterate_somos4(&p, &seeds, -12, 12).unwrap();
        for mm in -5..=5 {
            for n in -5..=5 {
                assert!(
                    check_hankel_somos4(&w, &m.eds, mm, n).unwrap().is_zero(),
                    "m = {mm}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn eds_vanishes_at_torsion() {
        // ℘′ vanishes at the half period, so a(2) = −℘′(ω1) = 0
        let inv = crate::weierstrass::CurveInvariants::<f64>::from_real(4.0, 0.0).unwrap();
        let lat = crate::weierstrass::lattice_from_invariants(&inv).unwrap();
        let a = eds_from_sigma(&lat, lat.omega1, 4).unwrap();
        assert!(a[2].norm() < 1e-8 && a[4].norm() < 1e-8 && (a[1].norm() - 1.0).abs() < 1e-12);
    }
}
