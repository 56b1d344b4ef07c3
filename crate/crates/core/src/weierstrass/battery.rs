use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::functions::{sigma, wp, wp_prime, zeta_w};
use super::identities::{
    addition_formula_residual, differential_equation_residual, duplication_residual, quartic_sides, scale_invariants,
    sigma_quotient_cubic_residual, sigma_quotient_quartic_residual, sigma_quotient_square_residual,
    sigma_scaling_residual, three_term_residual, wp_scaling_residual, Residual,
};
use super::lattice::{lattice_from_invariants, Lattice};
use crate::error::Result;
use crate::scalar::{cplx, rel_diff, Real};

/// Worst relative residual of one identity over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryCheck {
    pub name: &'static str,
    pub samples: usize,
    pub max_relative: f64,
    pub tolerance: f64,
}

impl BatteryCheck {
    pub fn passed(&self) -> bool {
        self.max_relative < self.tolerance
    }
}

/// Uniform point of the centered cell, kept `margin` (in lattice coordinates)
/// away from the lattice and its half periods.
pub fn random_cell_point<T: Real>(lat: &Lattice<T>, rng: &mut StdRng, margin: f64) -> Complex<T> {
    loop {
        let a: f64 = rng.gen_range(-0.5..0.5);
        let b: f64 = rng.gen_range(-0.5..0.5);
        let near = |x: f64| x.abs() < margin || (x.abs() - 0.5).abs() < margin;
        if near(a) && near(b) {
            continue;
        }
        return lat.omega1 * T::lit(2.0 * a) + lat.omega2 * T::lit(2.0 * b);
    }
}

/// `κ¹²` times both sides of the quartic identity at `κ = scale·e^{iθ}`; both tend to −2.
pub fn laurent_leading_check<T: Real>(lat: &Lattice<T>, kappa: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let (lhs, rhs) = quartic_sides(kappa, lat)?;
    let k12 = kappa.powi(12);
    Ok((lhs * k12, rhs * k12))
}

struct Acc {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    samples: usize,
}

impl Acc {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Acc {
            name,
            tolerance,
            worst: 0.0,
            samples: 0,
        }
    }

    fn push<T: Real>(&mut self, r: Residual<T>) {
        self.add(r.relative().to_f64_lossy());
    }

    fn add(&mut self, rel: f64) {
        self.worst = if rel.is_nan() {
            f64::INFINITY
        } else {
            self.worst.max(rel)
        };
        self.samples += 1;
    }

    fn done(self) -> BatteryCheck {
        BatteryCheck {
            name: self.name,
            samples: self.samples,
            max_relative: self.worst,
            tolerance: self.tolerance,
        }
    }
}

/// Runs every function identity on `samples` seeded random points of the lattice.
pub fn identity_battery(lat: &Lattice<f64>, samples: usize, seed: u64) -> Result<Vec<BatteryCheck>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut de = Acc::new("differential equation", 1e-10);
    let mut add = Acc::new("addition formula", 1e-9);
    let mut three = Acc::new("three-term equation", 1e-9);
    let mut parity = Acc::new("parity", 1e-12);
    let mut dup = Acc::new("duplication", 1e-9);
    let mut scale = Acc::new("scaling", 1e-10);
    let mut sq = Acc::new("sigma(2k)^2/sigma(k)^8", 1e-9);
    let mut cu = Acc::new("sigma(3k)/sigma(k)^9", 1e-9);
    let mut qu = Acc::new("sigma(4k)/(sigma(2k)sigma(k)^12)", 1e-9);

    let mu = cplx(1.3, 0.4);
    let scaled = lattice_from_invariants(&scale_invariants(&lat.invariants(), mu)?)?;

    for _ in 0..samples {
        let z = random_cell_point(lat, &mut rng, 0.05);
        let k = random_cell_point(lat, &mut rng, 0.05);
        de.push(differential_equation_residual(z, lat)?);
        add.push(addition_formula_residual(z, k, lat)?);
        let (c, d) = (
            random_cell_point(lat, &mut rng, 0.05),
            random_cell_point(lat, &mut rng, 0.05),
        );
        three.push(three_term_residual(z, k, c, d, lat)?);
        for (f, odd) in [
            (wp as fn(Complex<f64>, &Lattice<f64>) -> Result<Complex<f64>>, false),
            (wp_prime, true),
            (sigma, true),
            (zeta_w, true),
        ] {
            let (a, b) = (f(z, lat)?, f(-z, lat)?);
            parity.add(rel_diff(a, if odd { -b } else { b }));
        }
        // keep 2z away from the lattice and z away from half periods
        let small = z * 0.45;
        dup.push(duplication_residual(small, lat)?);
        scale.push(wp_scaling_residual(z, mu, lat, &scaled)?);
        scale.push(sigma_scaling_residual(z, mu, lat, &scaled)?);
        let kap = k * 0.2;
        sq.push(sigma_quotient_square_residual(kap, lat)?);
        cu.push(sigma_quotient_cubic_residual(kap, lat)?);
        qu.push(sigma_quotient_quartic_residual(kap, lat)?);
    }
    Ok([de, add, three, parity, dup, scale, sq, cu, qu]
        .into_iter()
        .map(Acc::done)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::weierstrass::CurveInvariants;

    #[test]
    fn battery_on_three_curves() {
        let curves = [
            CurveInvariants::from_rational(&ratio(121, 12), &ratio(-845, 216)).unwrap(),
            CurveInvariants::from_real(4.0, 0.0).unwrap(),
            CurveInvariants::from_real(1.0, 1.0).unwrap(),
            CurveInvariants::new(cplx(1.0, 2.0), cplx(-0.5, 0.25)).unwrap(),
        ];
        for inv in curves {
            let lat = lattice_from_invariants(&inv).unwrap();
            for c in identity_battery(&lat, 20, 11).unwrap() {
                assert!(c.passed(), "{:?} on g2={} g3={}", c, inv.g2, inv.g3);
            }
        }
    }

    #[test]
    fn quartic_leading_term() {
        let lat = lattice_from_invariants(&CurveInvariants::from_real(4.0, 0.0).unwrap()).unwrap();
        for k in [cplx(1e-2, 0.0), cplx(3e-3, 4e-3), cplx(1e-3, 0.0)] {
            let (l, r) = laurent_leading_check(&lat, k).unwrap();
            assert!((l + 2.0).norm() < 2e-3, "{l}");
            assert!((r + 2.0).norm() < 2e-3, "{r}");
        }
    }
}
