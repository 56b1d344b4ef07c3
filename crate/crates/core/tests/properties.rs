use num_traits::Zero;
use proptest::prelude::*;
use somos_core::exact::{iterate_somos4, iterate_somos5, ln_abs, rat, SequenceWindow, Somos4Params, Somos5Params};
use somos_core::ivp::{solve_somos4, solve_somos5, SolveOptions, TauSolution};
use somos_core::qrt::{f_from_tau, h_from_tau, invariant_j, invariant_jt, somos4_to_somos5_params, Coeffs};

fn max_log_error<S: TauSolution<f64>>(sol: &S, w: &SequenceWindow) -> f64 {
    w.iter()
        .filter(|(_, t)| !t.is_zero())
        .map(|(n, t)| (sol.eval_tau(n).unwrap().log_abs - ln_abs(t)).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn somos5_round_trip(seeds in prop::collection::vec(1i64..=5, 5), a in 1i64..=3, b in 1i64..=3) {
        let params = Somos5Params::new(rat(a), rat(b)).unwrap();
        let s = SequenceWindow::from_integers(0, &seeds);
        let sol = match solve_somos5::<f64>(&params, &s, &SolveOptions::default()) {
            Ok(sol) => sol,
            Err(e) if e.is_degenerate() => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let w = match iterate_somos5(&params, &s, -5, 25) {
            Ok(w) => w,
            Err(e) if e.is_degenerate() => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let err = max_log_error(&sol, &w);
        prop_assert!(err < 1e-6, "seeds {:?}, params ({}, {}): {:e}", seeds, a, b, err);
    }

    #[test]
    fn somos4_round_trip(seeds in prop::collection::vec(1i64..=5, 4), a in 1i64..=3, b in 1i64..=3) {
        let params = Somos4Params::new(rat(a), rat(b)).unwrap();
        let s = SequenceWindow::from_integers(0, &seeds);
        let sol = match solve_somos4::<f64>(&params, &s, &SolveOptions::default()) {
            Ok(sol) => sol,
            Err(e) if e.is_degenerate() => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let w = match iterate_somos4(&params, &s, -5, 25) {
            Ok(w) => w,
            Err(e) if e.is_degenerate() => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let err = max_log_error(&sol, &w);
        prop_assert!(err < 1e-6, "seeds {:?}, params ({}, {}): {:e}", seeds, a, b, err);
    }

    #[test]
    fn somos4_embeds_in_somos5(seeds in prop::collection::vec(1i64..=5, 4), a in 1i64..=3, b in 1i64..=3) {
        let params = Somos4Params::new(rat(a), rat(b)).unwrap();
        let w = iterate_somos4(&params, &SequenceWindow::from_integers(0, &seeds), 0, 12).unwrap();
        let c4 = Coeffs::somos4(&params);
        let j = invariant_j(&f_from_tau(&w, 1).unwrap(), &f_from_tau(&w, 2).unwrap(), &c4).unwrap();
        let p5 = somos4_to_somos5_params(&params, &j);
        for n in 2..=9 {
            prop_assert!(p5.residual(&w, n).unwrap().is_zero());
        }
        let c5 = Coeffs::somos5(&p5);
        for n in 1..=6 {
            let jt = invariant_jt(&h_from_tau(&w, n).unwrap(), &h_from_tau(&w, n + 1).unwrap(), &c5).unwrap();
            prop_assert_eq!(&jt, &j);
        }
    }
}

#[test]
fn f32_solution_tracks_small_terms() {
    let params = Somos5Params::new(rat(1), rat(1)).unwrap();
    let s = SequenceWindow::from_integers(0, &[1; 5]);
    let sol = solve_somos5::<f32>(&params, &s, &SolveOptions::default()).unwrap();
    for (n, t) in [(5, 2.0f32), (8, 11.0), (10, 83.0)] {
        let v = sol.eval_tau(n).unwrap().real_value().unwrap();
        assert!((v - t).abs() / t < 1e-2, "n = {n}: {v}");
    }
}
