use num_complex::Complex;
use num_traits::Zero;

use super::somos4::{pick_sign, reconstruction_error};
use super::{lift, lsig, rel, seeds_nonzero, Convention, SolveOptions, TauSolution, TauValue};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational, SequenceWindow, Somos4Params, Somos5Params};
use crate::qrt::{
    f_from_tau, h_from_tau, h_orbit, invariant_jt, step_h_back, subsequence_somos4_params, Coeffs, HState,
};
use crate::scalar::Real;
use crate::weierstrass::{inverse_wp, wp, wp_prime, wp_second, CurveInvariants, Lattice};

/// Closed-form solution of a Somos 5 problem.
///
/// Unstarred data live on `y² = 4x³ − g2x − g3` with `g2, g3` built from
/// `μ̃ = (β̃ + α̃J̃)^{1/4}`; the starred curve `g2* = μ̃⁴g2`, `g3* = μ̃⁶g3` is
/// rational and carries the alternating form
/// `τ(2k) = A₊B₊ᵏσ(u0 + 2kv)/σ(2v)^{k²}`, `τ(2k+1) = A₋B₋ᵏσ(u0 + (2k+1)v)/σ(2v)^{k²}`.
#[derive(Debug, Clone)]
pub struct Somos5Solution<T> {
    pub params: Somos5Params,
    pub seeds: SequenceWindow,
    /// `h(−1), h(0), h(1), h(2)`.
    pub h: [Rational; 4],
    /// `f(0), f(1)`.
    pub f: [Rational; 2],
    pub jt: Rational,
    /// `μ̃⁴ = β̃ + α̃J̃`.
    pub mu4: Rational,
    pub g2: Rational,
    pub g2_star: Rational,
    pub g3_star: Rational,
    /// `μ̃²λ̃`.
    pub lambda_star: Rational,
    /// `μ̃²x0`.
    pub x0_star: Rational,
    /// `℘′(u0; g2*, g3*)`.
    pub y0_star: Rational,
    pub mu_t: Complex<T>,
    pub lambda_t: Complex<T>,
    pub g3: Complex<T>,
    pub x0: Complex<T>,
    pub inv: CurveInvariants<T>,
    pub lat: Lattice<T>,
    pub kappa: Complex<T>,
    pub z0: Complex<T>,
    pub inv_star: CurveInvariants<T>,
    pub lat_star: Lattice<T>,
    pub u0: Complex<T>,
    pub v: Complex<T>,
    pub a_plus: Complex<T>,
    pub a_minus: Complex<T>,
    pub b_plus: Complex<T>,
    pub b_minus: Complex<T>,
    pub convention: Convention,
    pub warnings: Vec<String>,
    pub reconstruction_error: f64,
}

/// Both analytic forms of `h(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HClosed<T> {
    pub sigma_form: Complex<T>,
    pub wp_form: Complex<T>,
}

/// Relative residuals of the identifications made by the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterCheck {
    /// `λ̃ = ℘(κ)`.
    pub lambda: f64,
    /// `μ̃ = ℘′(κ)`.
    pub mu: f64,
    /// `J̃ = ℘″(κ)`.
    pub jt: f64,
    /// `α̃ = −℘′(κ)²(℘(2κ) − ℘(κ))`.
    pub alpha: f64,
    /// `℘′(v; g*) = μ̃⁴`.
    pub mu_star: f64,
    /// `B₊/B₋ = −σ(2v; g*)`.
    pub b_ratio_starred: f64,
    /// `B₊/B₋ = σ(κ; g)⁴`.
    pub b_ratio_unstarred: f64,
}

/// Exact and numerical checks of the even/odd subsequence theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsequenceReport {
    pub params: Somos4Params,
    /// Number of exact residuals checked on each parity.
    pub even_checked: usize,
    pub odd_checked: usize,
    /// True when every exact residual vanished.
    pub exact_ok: bool,
    /// Worst relative error of `τ(n+2)τ(n−2)/τ(n)² = ℘(2v) − ℘(u0 + nv)` over the window.
    pub canonical_max_rel: f64,
    /// Worst relative error of `α* = ℘′(2v)²`, `β* = ℘′(2v)²(℘(4v) − ℘(2v))`.
    pub starred_params_rel: f64,
}

/// Solves the Somos 5 problem with seeds `τ0..τ4`.
pub fn solve_somos5<T: Real>(
    params: &Somos5Params,
    seeds: &SequenceWindow,
    opts: &SolveOptions<T>,
) -> Result<Somos5Solution<T>> {
    if seeds.len() != 5 || seeds.base_index() != 0 {
        return Err(Error::InvalidSeed("Somos 5 needs seeds tau0..tau4".into()));
    }
    seeds_nonzero(seeds)?;
    let c = Coeffs::somos5(params);
    let h1 = h_from_tau(seeds, 1)?;
    let h2 = h_from_tau(seeds, 2)?;
    let s0 = step_h_back(&HState::new(h1.clone(), h2.clone(), 2)?, &c)?;
    let s_1 = step_h_back(&s0, &c)?;
    let (hm1, h0) = (s_1.h_prev.clone(), s0.h_prev.clone());
    let jt = invariant_jt(&h0, &h1, &c)?;
    let f1 = f_from_tau(seeds, 1)?;
    let f0 = &h0 / &f1;

    let mu4 = &params.beta_t + &params.alpha_t * &jt;
    if mu4.is_zero() {
        return Err(Error::SingularMu);
    }
    let lambda_star = (&jt * &jt / rat(4) + &params.alpha_t) / rat(3);
    let g2 = rat(12) * &lambda_star * &lambda_star / &mu4 - rat(2) * &jt;
    let g2_star = &mu4 * &g2;
    let g3_star = rat(4) * &lambda_star * &lambda_star * &lambda_star - &g2_star * &lambda_star - &mu4 * &mu4;
    let inv_star = CurveInvariants::<T>::from_rational(&g2_star, &g3_star)?;
    let den = &hm1 + &h0 - &jt;
    if den.is_zero() {
        return Err(Error::ZeroDenominator("h(-1) + h(0) - J~ (base point at infinity)"));
    }
    let x0_star = &lambda_star + &mu4 / &den;
    let y0_star = (&x0_star - &lambda_star) * (&hm1 - &h0);

    let mu_t = lift::<T>(&mu4).powf(T::lit(0.25));
    let mu2 = mu_t * mu_t;
    let lambda_t = lift::<T>(&lambda_star) / mu2;
    let g3 = lift::<T>(&g3_star) / (mu2 * mu2 * mu2);
    let x0 = lift::<T>(&x0_star) / mu2;
    let inv = CurveInvariants::new(lift::<T>(&g2), g3)?;
    let lat = Lattice::new(&inv, opts.precision)?;

    let mut warnings = Vec::new();
    if let Ok(orbit) = h_orbit(&HState::new(hm1.clone(), h0.clone(), 0)?, &c, 16) {
        if orbit.periodic_degeneracy {
            warnings.push("h(n+1) = h(n-1) on the orbit: periodic degeneracy".to_string());
        }
    }

    // κ: ℘(κ) = λ̃, ℘′(κ) = μ̃
    let k_raw = inverse_wp(lambda_t, &lat)?;
    let (kappa_sign, kappa, kappa_residual) = pick_sign(k_raw, |k| Ok(wp_prime(k, &lat)? - mu_t), mu_t)?;
    if kappa_residual > opts.consistency_tol {
        return Err(Error::ConsistencyFailure(format!(
            "wp'(kappa) = mu fails (residual {kappa_residual})"
        )));
    }

    // z0: ℘(z0) = x0, ℘′(κ)℘′(z0) = (x0 − λ̃)(h(−1) − h0)
    let z_raw = inverse_wp(x0, &lat)?;
    let dk = wp_prime(kappa, &lat)?;
    let rhs = (x0 - lambda_t) * lift::<T>(&(&hm1 - &h0));
    let (z0_sign, z0, z0_residual) = pick_sign(z_raw, |z| Ok(wp_prime(z, &lat)? * dk - rhs), rhs)?;
    if z0_residual > opts.consistency_tol {
        return Err(Error::ConsistencyFailure(format!(
            "wp'(kappa) wp'(z0) = (x0 - lambda)(h(-1) - h0) fails (residual {z0_residual})"
        )));
    }
    if wp_prime(z0, &lat)?.norm() <= T::lit(1e-8) * rhs.norm().max(T::one()) {
        warnings.push("z0 is a half period; its sign is not determined".to_string());
    }
    let (kappa, z0) = (lat.reduce_centered(kappa).0, lat.reduce_centered(z0).0);

    let lat_star = Lattice::new(&inv_star, opts.precision)?;
    let u0 = lat_star.reduce_centered(z0 / mu_t).0;
    let v = lat_star.reduce_centered(kappa / mu_t).0;

    let ls = |z: Complex<T>| lsig(z, &lat_star);
    let t = |n: i64| -> Result<Complex<T>> { Ok(lift::<T>(seeds.at(n)?).ln()) };
    let two_v = v * T::lit(2.0);
    let log_a_plus = t(0)? - ls(u0)?;
    let log_a_minus = t(1)? - ls(u0 + v)?;
    let log_b_plus = ls(two_v)? + ls(u0)? + t(2)? - ls(u0 + two_v)? - t(0)?;
    let log_b_minus = ls(two_v)? + ls(u0 + v)? + t(3)? - ls(u0 + v * T::lit(3.0))? - t(1)?;

    let mut sol = Somos5Solution {
        params: params.clone(),
        seeds: seeds.clone(),
        h: [hm1, h0, h1, h2],
        f: [f0, f1],
        jt,
        mu4,
        g2,
        g2_star,
        g3_star,
        lambda_star,
        x0_star,
        y0_star,
        mu_t,
        lambda_t,
        g3,
        x0,
        inv,
        lat,
        kappa,
        z0,
        inv_star,
        lat_star,
        u0,
        v,
        a_plus: log_a_plus.exp(),
        a_minus: log_a_minus.exp(),
        b_plus: log_b_plus.exp(),
        b_minus: log_b_minus.exp(),
        convention: Convention {
            root_branch: "principal fourth root",
            kappa_sign,
            z0_sign,
            kappa_residual,
            z0_residual,
        },
        warnings,
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

impl<T: Real> Somos5Solution<T> {
    /// `℘′(v; g2*, g3*) = μ̃⁴`.
    pub fn mu_star(&self) -> &Rational {
        &self.mu4
    }

    /// `1728 g2*³ / (g2*³ − 27 g3*²)`.
    pub fn j_invariant(&self) -> Rational {
        let c = &self.g2_star * &self.g2_star * &self.g2_star;
        rat(1728) * &c / (&c - rat(27) * &self.g3_star * &self.g3_star)
    }

    fn log_tau(&self, n: i64) -> Result<Complex<T>> {
        let k = n.div_euclid(2);
        let kf = T::lit(k as f64);
        let tail = lsig(self.u0 + self.v * T::lit(n as f64), &self.lat_star)?
            - lsig(self.v * T::lit(2.0), &self.lat_star)? * (kf * kf);
        let (a, b) = if n.rem_euclid(2) == 0 {
            (self.a_plus, self.b_plus)
        } else {
            (self.a_minus, self.b_minus)
        };
        Ok(a.ln() + b.ln() * kf + tail)
    }

    /// `τ(n)` through the unstarred curve:
    /// `A±B±ᵏ μ̃^{k²−1} σ(z0 + nκ) / σ(2κ)^{k²}`.
    pub fn eval_tau_unstarred(&self, n: i64) -> Result<TauValue<T>> {
        let k = n.div_euclid(2);
        let kf = T::lit(k as f64);
        let (a, b) = if n.rem_euclid(2) == 0 {
            (self.a_plus, self.b_plus)
        } else {
            (self.a_minus, self.b_minus)
        };
        let l = a.ln()
            + b.ln() * kf
            + self.mu_t.ln() * (kf * kf - T::one())
            + lsig(self.z0 + self.kappa * T::lit(n as f64), &self.lat)?
            - lsig(self.kappa * T::lit(2.0), &self.lat)? * (kf * kf);
        Ok(TauValue::from_log(n, l))
    }

    /// `h(n)` as a σ quotient and as a ℘ expression on the unstarred curve.
    pub fn eval_h_closed(&self, n: i64) -> Result<HClosed<T>> {
        let lat = &self.lat;
        let at = |k: i64| self.z0 + self.kappa * T::lit(k as f64);
        let ls = |z: Complex<T>| lsig(z, lat);
        let sigma_form =
            (ls(at(n + 2))? + ls(at(n - 1))? - ls(self.kappa)? * T::lit(4.0) - ls(at(n))? - ls(at(n + 1))?).exp();
        let z = at(n);
        let dk = wp_prime(self.kappa, lat)?;
        let wp_form = -dk / T::lit(2.0) * (wp_prime(z, lat)? - dk) / (wp(z, lat)? - wp(self.kappa, lat)?)
            + wp_second(self.kappa, lat)? / T::lit(2.0);
        Ok(HClosed { sigma_form, wp_form })
    }

    /// `f(n)` from the alternating ℘ form on the starred curve.
    pub fn eval_f_closed(&self, n: i64) -> Result<Complex<T>> {
        let lat = &self.lat_star;
        let pv = wp(self.v, lat)?;
        let (base, first) = if n.rem_euclid(2) == 0 {
            (lift::<T>(&self.f[0]), self.u0)
        } else {
            (lift::<T>(&self.f[1]), self.u0 + self.v)
        };
        let num = pv - wp(self.u0 + self.v * T::lit(n as f64), lat)?;
        Ok(base * num / (pv - wp(first, lat)?))
    }

    /// `h(n−1)h(n)` against `℘′(κ)²(℘(2κ) − ℘(z0 + nκ))`.
    pub fn product_identity(&self, n: i64) -> Result<f64> {
        let lhs = self.eval_h_closed(n - 1)?.sigma_form * self.eval_h_closed(n)?.sigma_form;
        let dk = wp_prime(self.kappa, &self.lat)?;
        let rhs = dk
            * dk
            * (wp(self.kappa * T::lit(2.0), &self.lat)? - wp(self.z0 + self.kappa * T::lit(n as f64), &self.lat)?);
        Ok(rel(lhs, rhs))
    }

    pub fn parameter_check(&self) -> Result<ParameterCheck> {
        let (lat, k) = (&self.lat, self.kappa);
        let dk = wp_prime(k, lat)?;
        let alpha = -dk * dk * (wp(k * T::lit(2.0), lat)? - wp(k, lat)?);
        let sig2v = lsig(self.v * T::lit(2.0), &self.lat_star)?.exp();
        let ratio = self.b_plus / self.b_minus;
        let sig_k4 = (lsig(k, lat)? * T::lit(4.0)).exp();
        Ok(ParameterCheck {
            lambda: rel(wp(k, lat)?, self.lambda_t),
            mu: rel(dk, self.mu_t),
            jt: rel(wp_second(k, lat)?, lift(&self.jt)),
            alpha: rel(alpha, lift(&self.params.alpha_t)),
            mu_star: rel(wp_prime(self.v, &self.lat_star)?, lift(&self.mu4)),
            b_ratio_starred: rel(ratio, -sig2v),
            b_ratio_unstarred: rel(ratio, sig_k4),
        })
    }

    /// `℘(2v) − ℘(u0 + nv)` on the starred curve.
    pub fn canonical_ratio(&self, n: i64) -> Result<Complex<T>> {
        let lat = &self.lat_star;
        Ok(wp(self.v * T::lit(2.0), lat)? - wp(self.u0 + self.v * T::lit(n as f64), lat)?)
    }
}

impl<T: Real> TauSolution<T> for Somos5Solution<T> {
    fn eval_tau(&self, n: i64) -> Result<TauValue<T>> {
        Ok(TauValue::from_log(n, self.log_tau(n)?))
    }

    fn seeds(&self) -> &SequenceWindow {
        &self.seeds
    }
}

/// `C = Re{η1v²/(2ω1)} − ¼ log|σ(2v)|` on the starred lattice, so that
/// `log|τ(n)| ~ C n²`. Only defined for `v ∈ ω1ℝ`.
pub fn growth_constant<T: Real>(sol: &Somos5Solution<T>) -> Result<T> {
    let lat = &sol.lat_star;
    let r = sol.v / lat.omega1;
    if r.im.abs() > T::lit(1e-8) * r.norm().max(T::one()) {
        return Err(Error::NotApplicable(format!("v / omega1 = {r} is not real")));
    }
    let two = T::lit(2.0);
    let quad = (lat.eta1 * sol.v * sol.v / (lat.omega1 * two)).re;
    Ok(quad - lsig(sol.v * two, lat)?.re / T::lit(4.0))
}

/// Checks that both parity subsequences of `window` satisfy the Somos 4
/// recurrence with `(α*, β*)`, and compares `τ(n+2)τ(n−2)/τ(n)²` with the
/// starred ℘ expression.
pub fn somos4_from_even_odd<T: Real>(sol: &Somos5Solution<T>, window: &SequenceWindow) -> Result<SubsequenceReport> {
    let params = subsequence_somos4_params(&sol.params, &sol.jt);
    let mut exact_ok = true;
    let mut counts = [0usize; 2];
    for parity in 0..2i64 {
        let start = window.base_index() + (parity - window.base_index()).rem_euclid(2);
        let sub = window.subsequence(start, 2);
        for n in 2..sub.len() as i64 - 2 {
            counts[parity as usize] += 1;
            if !params.residual(&sub, n)?.is_zero() {
                exact_ok = false;
            }
        }
    }
    let mut canonical_max_rel = 0.0f64;
    for n in window.base_index() + 2..=window.last_index() - 2 {
        let t = |k: i64| window.at(k).cloned();
        let exact = t(n + 2)? * t(n - 2)? / (t(n)? * t(n)?);
        canonical_max_rel = canonical_max_rel.max(rel(lift::<T>(&exact), sol.canonical_ratio(n)?));
    }
    let lat = &sol.lat_star;
    let d = wp_prime(sol.v * T::lit(2.0), lat)?;
    let a_star = d * d;
    let b_star = a_star * (wp(sol.v * T::lit(4.0), lat)? - wp(sol.v * T::lit(2.0), lat)?);
    let starred_params_rel = rel(a_star, lift(&params.alpha)).max(rel(b_star, lift(&params.beta)));
    Ok(SubsequenceReport {
        params,
        even_checked: counts[0],
        odd_checked: counts[1],
        exact_ok,
        canonical_max_rel,
        starred_params_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{iterate_somos5, ratio, to_f64};
    use crate::ivp::{matched_eds_somos5, TauSolution};
    use crate::qrt::h_from_tau;

    fn somos5() -> (Somos5Params, SequenceWindow) {
        (
            Somos5Params::new(rat(1), rat(1)).unwrap(),
            SequenceWindow::from_integers(0, &[1; 5]),
        )
    }

    fn solved() -> Somos5Solution<f64> {
        let (p, s) = somos5();
        solve_somos5(&p, &s, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn exact_curve_data() {
        let s = solved();
        assert_eq!(s.h, [ratio(3, 2), rat(2), rat(1), rat(1)]);
        assert_eq!(s.jt, rat(5));
        assert_eq!(s.mu4, rat(6));
        assert_eq!(s.lambda_star, ratio(29, 12));
        assert_eq!(s.x0_star, ratio(-19, 12));
        assert_eq!(s.y0_star, rat(2));
        assert_eq!(s.g2, ratio(121, 72));
        assert_eq!(s.g2_star, ratio(121, 12));
        assert_eq!(s.g3_star, ratio(-845, 216));
        assert_eq!(s.j_invariant(), ratio(1_771_561, 612));
    }

    #[test]
    fn starred_lattice_points() {
        let s = solved();
        assert!((s.lat_star.omega1.re - 1.181965956).abs() < 1e-9);
        assert!((s.lat_star.omega2.im - 0.973928783).abs() < 1e-9);
        assert!((s.v - Complex::new(-0.672679183, 0.0)).norm() < 1e-9, "{}", s.v);
        let d = s.u0 - Complex::new(0.163392411, 0.0) - s.lat_star.omega2;
        let (a, b) = s.lat_star.coords(d);
        assert!((a - a.round()).abs() < 1e-8 && (b - b.round()).abs() < 1e-8, "{}", s.u0);
    }

    #[test]
    fn reconstructs_sequence() {
        let (p, seeds) = somos5();
        let s = solved();
        let w = iterate_somos5(&p, &seeds, -10, 20).unwrap();
        for (n, t) in w.iter() {
            let v = s.eval_tau(n).unwrap();
            assert!((v.log_abs - crate::exact::ln_abs(t)).abs() < 1e-8, "n = {n}");
            assert!(v.is_real());
            let u = s.eval_tau_unstarred(n).unwrap();
            assert!((u.log_abs - v.log_abs).abs() < 1e-8 && (u.phase - v.phase).sin().abs() < 1e-8);
        }
        for n in -5..10 {
            let h = s.eval_h_closed(n).unwrap();
            let exact = to_f64(&h_from_tau(&w, n).unwrap());
            assert!(
                (h.sigma_form - exact).norm() < 1e-8 && (h.wp_form - exact).norm() < 1e-8,
                "h({n})"
            );
            let f = s.eval_f_closed(n).unwrap();
            assert!((f - to_f64(&f_from_tau(&w, n).unwrap())).norm() < 1e-8, "f({n})");
            assert!(s.product_identity(n).unwrap() < 1e-8);
        }
    }

    #[test]
    fn parameter_identifications() {
        let c = solved().parameter_check().unwrap();
        for r in [
            c.lambda,
            c.mu,
            c.jt,
            c.alpha,
            c.mu_star,
            c.b_ratio_starred,
            c.b_ratio_unstarred,
        ] {
            assert!(r < 1e-9, "{c:?}");
        }
    }

    #[test]
    fn subsequences_and_growth() {
        let (p, seeds) = somos5();
        let s = solved();
        let w = iterate_somos5(&p, &seeds, 0, 20).unwrap();
        let r = somos4_from_even_odd(&s, &w).unwrap();
        assert_eq!((r.params.alpha.clone(), r.params.beta.clone()), (rat(1), rat(8)));
        assert!(r.exact_ok && r.even_checked > 0 && r.odd_checked > 0);
        assert!(r.canonical_max_rel < 1e-8 && r.starred_params_rel < 1e-9, "{r:?}");
        let c = growth_constant(&s).unwrap();
        assert!((c - 0.071626946).abs() < 1e-9, "{c}");
    }

    #[test]
    fn rational_eds() {
        let s = solved();
        let m = matched_eds_somos5(&s, 10).unwrap();
        assert!(
            m.parity_rescaled == Some(rat(6)) && m.max_rounding_error < 1e-8,
            "{m:?}"
        );
        assert_eq!(m.eds.at(1).unwrap(), &rat(1));
        let (p, seeds) = somos5();
        let w = iterate_somos5(&p, &seeds, -10, 10).unwrap();
        for mm in -4..4 {
            for n in -4..4 {
                assert!(crate::exact::check_hankel_somos5(&w, &m.eds, mm, n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn singular_mu() {
        // all-ones seeds give J̃ = 4 + β̃ with α̃ = 1, so β̃ = −2 makes μ̃⁴ vanish
        let p = Somos5Params::new(rat(1), rat(-2)).unwrap();
        let r = solve_somos5::<f64>(&p, &SequenceWindow::from_integers(0, &[1; 5]), &SolveOptions::default());
        assert!(matches!(r, Err(Error::SingularMu)), "{r:?}");
    }
}
