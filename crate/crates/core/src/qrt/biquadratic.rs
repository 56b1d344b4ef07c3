use super::{nonzero, FieldScalar};
use crate::error::{Error, Result};

/// Symmetric biquadratic
/// `eX²Y² + dXY(X+Y) + c(X²+Y²) + b(X+Y) + a − KXY = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadraticCurve<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub k: T,
}

impl<T: FieldScalar> BiquadraticCurve<T> {
    pub fn new(a: T, b: T, c: T, d: T, e: T, k: T) -> Result<Self> {
        if [&a, &b, &c, &d, &e].iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidArgument("biquadratic coefficients all zero".into()));
        }
        Ok(BiquadraticCurve { a, b, c, d, e, k })
    }

    /// `B(X, Y)`.
    pub fn eval(&self, x: &T, y: &T) -> T {
        let xy = x.clone() * y.clone();
        let s = x.clone() + y.clone();
        self.e.clone() * xy.clone() * xy.clone()
            + self.d.clone() * xy.clone() * s.clone()
            + self.c.clone() * (x.clone() * x.clone() + y.clone() * y.clone())
            + self.b.clone() * s
            + self.a.clone()
            - self.k.clone() * xy
    }

    /// Same curve with `K` set to the level of the point `(u_prev, u_curr)`.
    pub fn through(&self, u_prev: &T, u_curr: &T) -> Result<Self> {
        let k = biquadratic_invariant(u_prev, u_curr, self)?;
        Ok(BiquadraticCurve { k, ..self.clone() })
    }
}

/// `K̃ = e u₋u + d(u₋+u) + c(u₋/u + u/u₋) + b(1/u₋ + 1/u) + a/(u₋u)`.
pub fn biquadratic_invariant<T: FieldScalar>(u_prev: &T, u_curr: &T, curve: &BiquadraticCurve<T>) -> Result<T> {
    let p = u_prev.clone() * u_curr.clone();
    nonzero(&p, "K~")?;
    Ok(curve.e.clone() * p.clone()
        + curve.d.clone() * (u_prev.clone() + u_curr.clone())
        + curve.c.clone() * (u_prev.clone() / u_curr.clone() + u_curr.clone() / u_prev.clone())
        + curve.b.clone() * (T::one() / u_prev.clone() + T::one() / u_curr.clone())
        + curve.a.clone() / p)
}

/// `u(n+1) = (a + b u + c u²) / ((c + d u + e u²) u(n−1))`.
pub fn biquadratic_step<T: FieldScalar>(u_prev: &T, u_curr: &T, curve: &BiquadraticCurve<T>) -> Result<T> {
    let u = u_curr.clone();
    let den =
        (curve.c.clone() + curve.d.clone() * u.clone() + curve.e.clone() * u.clone() * u.clone()) * u_prev.clone();
    nonzero(&den, "biquadratic map")?;
    let next = (curve.a.clone() + curve.b.clone() * u.clone() + curve.c.clone() * u.clone() * u) / den;
    if next.is_zero() {
        return Err(Error::MapSingular("biquadratic map produced zero"));
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rational};
    use crate::qrt::{invariant_j, invariant_jt, step_f, step_h, Coeffs, FState, HState};
    use num_traits::Zero;

    fn curve(a: i64, b: i64, c: i64, d: i64, e: i64) -> BiquadraticCurve<Rational> {
        BiquadraticCurve::new(rat(a), rat(b), rat(c), rat(d), rat(e), rat(0)).unwrap()
    }

    #[test]
    fn reduces_to_f_map() {
        // e = 1, d = c = 0, a = β, b = α
        let (alpha, beta) = (3, -2);
        let cv = curve(beta, alpha, 0, 0, 1);
        let co = Coeffs {
            alpha: rat(alpha),
            beta: rat(beta),
        };
        let (p, q) = (rat(2), rat(5));
        assert_eq!(
            biquadratic_invariant(&p, &q, &cv).unwrap(),
            invariant_j(&p, &q, &co).unwrap()
        );
        let s = step_f(&FState::new(p.clone(), q.clone(), 0).unwrap(), &co).unwrap();
        assert_eq!(biquadratic_step(&p, &q, &cv).unwrap(), s.f_curr);
    }

    #[test]
    fn reduces_to_h_map() {
        // e = c = 0, d = 1, b = α̃, a = β̃
        let cv = curve(1, 1, 0, 1, 0);
        let co = Coeffs {
            alpha: rat(1),
            beta: rat(1),
        };
        let (p, q) = (rat(2), rat(1));
        assert_eq!(
            biquadratic_invariant(&p, &q, &cv).unwrap(),
            invariant_jt(&p, &q, &co).unwrap()
        );
        assert_eq!(biquadratic_invariant(&p, &q, &cv).unwrap(), rat(5));
        let s = step_h(&HState::new(p.clone(), q.clone(), 0).unwrap(), &co).unwrap();
        assert_eq!(biquadratic_step(&p, &q, &cv).unwrap(), s.h_curr);
    }

    #[test]
    fn orbit_points_lie_on_level_set() {
        let cv = curve(1, 2, 3, 4, 5).through(&rat(1), &rat(1)).unwrap();
        let (mut p, mut q) = (rat(1), rat(1));
        for _ in 0..8 {
            assert!(cv.eval(&p, &q).is_zero());
            let r = biquadratic_step(&p, &q, &cv).unwrap();
            p = std::mem::replace(&mut q, r);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(BiquadraticCurve::new(rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)).is_err());
        let cv = curve(1, 0, 0, 0, 1);
        assert!(biquadratic_invariant(&rat(0), &rat(1), &cv).is_err());
        // c + d u + e u² = 0 at u = 0 with c = 0
        assert!(biquadratic_step(&rat(1), &rat(0), &cv).is_err());
    }
}
