//! Exact forward/backward iteration of the bilinear recurrences.

use num_traits::Zero;

use super::rational::Rational;
use super::window::SequenceWindow;
use crate::error::{Error, Result};

/// Coefficients of `τ(n+2)τ(n−2) = α τ(n+1)τ(n−1) + β τ(n)²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Somos4Params {
    pub alpha: Rational,
    pub beta: Rational,
}

/// Coefficients of `τ(n+3)τ(n−2) = α̃ τ(n+2)τ(n−1) + β̃ τ(n+1)τ(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Somos5Params {
    pub alpha_t: Rational,
    pub beta_t: Rational,
}

impl Somos4Params {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha.is_zero() && beta.is_zero() {
            return Err(Error::InvalidArgument("(alpha, beta) = (0, 0)".into()));
        }
        Ok(Somos4Params { alpha, beta })
    }

    /// Residual of the recurrence centred at `n`.
    pub fn residual(&self, w: &SequenceWindow, n: i64) -> Result<Rational> {
        Ok(
            w.at(n + 2)? * w.at(n - 2)?
                - &self.alpha * w.at(n + 1)? * w.at(n - 1)?
                - &self.beta * w.at(n)? * w.at(n)?,
        )
    }
}

impl Somos5Params {
    pub fn new(alpha_t: Rational, beta_t: Rational) -> Result<Self> {
        if alpha_t.is_zero() && beta_t.is_zero() {
            return Err(Error::InvalidArgument("(alpha~, beta~) = (0, 0)".into()));
        }
        Ok(Somos5Params { alpha_t, beta_t })
    }

    /// Residual `τ(n+3)τ(n−2) − α̃τ(n+2)τ(n−1) − β̃τ(n+1)τ(n)`.
    pub fn residual(&self, w: &SequenceWindow, n: i64) -> Result<Rational> {
        Ok(w.at(n + 3)? * w.at(n - 2)?
            - &self.alpha_t * w.at(n + 2)? * w.at(n - 1)?
            - &self.beta_t * w.at(n + 1)? * w.at(n)?)
    }
}

/// Bilinear rule `τ(k+order)·τ(k) = Σ c·τ(k+i)·τ(k+j)` with `i + j = order`.
/// Both Somos rules are palindromic, so backward extension is forward
/// extension of the reversed window.
struct Bilinear<'a> {
    order: usize,
    terms: [(&'a Rational, usize, usize); 2],
}

impl Bilinear<'_> {
    /// Appends `count` terms to `seq`; `index_of(pos)` maps a position in
    /// `seq` back to a sequence index for error reporting.
    fn run(&self, seq: &mut Vec<Rational>, count: usize, index_of: impl Fn(usize) -> i64) -> Result<()> {
        let k = self.order;
        for _ in 0..count {
            let start = seq.len() - k;
            let low = &seq[start..];
            if low[0].is_zero() {
                return Err(Error::DivisionByZeroTerm(index_of(start)));
            }
            let mut rhs = Rational::zero();
            for &(c, i, j) in &self.terms {
                rhs += c * &low[i] * &low[j];
            }
            let next = rhs / &low[0];
            seq.push(next);
        }
        Ok(())
    }

    fn extend(&self, seeds: &SequenceWindow, n_lo: i64, n_hi: i64) -> Result<SequenceWindow> {
        if seeds.len() != self.order {
            return Err(Error::InvalidArgument(format!(
                "expected {} seeds, got {}",
                self.order,
                seeds.len()
            )));
        }
        if n_lo > seeds.base_index() || n_hi < seeds.last_index() {
            return Err(Error::InvalidArgument(format!(
                "range {n_lo}..={n_hi} must cover the seeds {}..={}",
                seeds.base_index(),
                seeds.last_index()
            )));
        }
        let base = seeds.base_index();
        let last = seeds.last_index();

        let mut back: Vec<Rational> = seeds.values().iter().rev().cloned().collect();
        self.run(&mut back, (base - n_lo) as usize, |pos| last - pos as i64)?;
        back.reverse();

        let offset = back.len() - self.order;
        self.run(&mut back, (n_hi - last) as usize, |pos| n_lo + pos as i64)?;
        debug_assert_eq!(back[offset..offset + self.order], *seeds.values());
        Ok(SequenceWindow::from_parts(n_lo, back))
    }
}

/// Extends a four-term seed window to cover `n_lo..=n_hi`.
pub fn iterate_somos4(params: &Somos4Params, seeds: &SequenceWindow, n_lo: i64, n_hi: i64) -> Result<SequenceWindow> {
    // τ(k+4)τ(k) = α τ(k+3)τ(k+1) + β τ(k+2)²; the rule is palindromic so the
    // same offsets serve both directions.
    Bilinear {
        order: 4,
        terms: [(&params.alpha, 3, 1), (&params.beta, 2, 2)],
    }
    .extend(seeds, n_lo, n_hi)
}

/// Extends a five-term seed window to cover `n_lo..=n_hi`.
pub fn iterate_somos5(params: &Somos5Params, seeds: &SequenceWindow, n_lo: i64, n_hi: i64) -> Result<SequenceWindow> {
    // τ(k+5)τ(k) = α̃ τ(k+4)τ(k+1) + β̃ τ(k+3)τ(k+2)
    Bilinear {
        order: 5,
        terms: [(&params.alpha_t, 4, 1), (&params.beta_t, 3, 2)],
    }
    .extend(seeds, n_lo, n_hi)
}

/// Elliptic divisibility sequence with `a0 = 0` and the given `a1..a4`,
/// covering `−n_hi..=n_hi` (negative indices by antisymmetry).
pub fn iterate_eds(a1: &Rational, a2: &Rational, a3: &Rational, a4: &Rational, n_hi: i64) -> Result<SequenceWindow> {
    if a1.is_zero() {
        return Err(Error::InvalidSeed("a1 must be nonzero".into()));
    }
    if n_hi < 5 {
        return Err(Error::InvalidArgument("n_hi must be at least 5".into()));
    }
    let a2sq = a2 * a2;
    let a1a3 = a1 * a3;
    let mut pos: Vec<Rational> = vec![Rational::zero(), a1.clone(), a2.clone(), a3.clone(), a4.clone()];
    for m in 5..=n_hi {
        // centre n = m − 2: a(n+2)a(n−2) = a2² a(n+1)a(n−1) − a1a3 a(n)²
        let n = (m - 2) as usize;
        let pivot = &pos[n - 2];
        if pivot.is_zero() {
            return Err(Error::DivisionByZeroTerm(n as i64 - 2));
        }
        let val = (&a2sq * &pos[n + 1] * &pos[n - 1] - &a1a3 * &pos[n] * &pos[n]) / pivot;
        pos.push(val);
    }
    let mut values: Vec<Rational> = pos[1..].iter().rev().map(|v| -v.clone()).collect();
    values.extend(pos);
    Ok(SequenceWindow::from_parts(-n_hi, values))
}

/// Residual of the EDS recurrence centred at `n`.
pub fn eds_residual(a: &SequenceWindow, n: i64) -> Result<Rational> {
    let a1 = a.at(1)?;
    let a2 = a.at(2)?;
    let a3 = a.at(3)?;
    Ok(a.at(n + 2)? * a.at(n - 2)? - a2 * a2 * a.at(n + 1)? * a.at(n - 1)? + a1 * a3 * a.at(n)? * a.at(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn ones(n: usize) -> SequenceWindow {
        SequenceWindow::from_integers(0, &vec![1; n])
    }

    fn ints(w: &SequenceWindow) -> Vec<i64> {
        w.values().iter().map(|v| v.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn somos4_forward_values() {
        let p = Somos4Params::new(rat(1), rat(1)).unwrap();
        let w = iterate_somos4(&p, &ones(4), 0, 10).unwrap();
        assert_eq!(&ints(&w)[4..], &[2, 3, 7, 23, 59, 314, 1529]);
    }

    #[test]
    fn somos4_backward_step() {
        let p = Somos4Params::new(rat(1), rat(1)).unwrap();
        let w = iterate_somos4(&p, &ones(4), -1, 3).unwrap();
        assert_eq!(w.base_index(), -1);
        assert_eq!(w.at(-1).unwrap(), &rat(2));
    }

    #[test]
    fn somos4_fixed_point() {
        let p = Somos4Params::new(rat(1), rat(0)).unwrap();
        let w = iterate_somos4(&p, &ones(4), -6, 12).unwrap();
        assert!(w.values().iter().all(|v| *v == rat(1)));
    }

    #[test]
    fn somos5_forward_values() {
        let p = Somos5Params::new(rat(1), rat(1)).unwrap();
        let w = iterate_somos5(&p, &ones(5), 0, 14).unwrap();
        assert_eq!(&ints(&w)[5..], &[2, 3, 5, 11, 37, 83, 274, 1217, 6161, 22833]);
    }

    #[test]
    fn somos5_backward_and_fixed_point() {
        let p = Somos5Params::new(rat(1), rat(1)).unwrap();
        let w = iterate_somos5(&p, &ones(5), -1, 4).unwrap();
        assert_eq!(w.at(-1).unwrap(), &rat(2));
        let q = Somos5Params::new(rat(1), rat(0)).unwrap();
        let w = iterate_somos5(&q, &ones(5), -7, 9).unwrap();
        assert!(w.values().iter().all(|v| *v == rat(1)));
    }

    #[test]
    fn residuals_vanish_both_directions() {
        let p = Somos5Params::new(ratio(2, 3), rat(-5)).unwrap();
        let seeds = SequenceWindow::new(3, vec![rat(1), rat(2), ratio(1, 2), rat(3), rat(-1)]);
        let w = iterate_somos5(&p, &seeds, -4, 15).unwrap();
        for n in w.base_index() + 2..=w.last_index() - 3 {
            assert!(p.residual(&w, n).unwrap().is_zero(), "n = {n}");
        }
        let p4 = Somos4Params::new(rat(-2), ratio(3, 7)).unwrap();
        let seeds = SequenceWindow::new(-2, vec![rat(1), rat(2), ratio(1, 2), rat(3)]);
        let w = iterate_somos4(&p4, &seeds, -8, 9).unwrap();
        for n in w.base_index() + 2..=w.last_index() - 2 {
            assert!(p4.residual(&w, n).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let p = Somos4Params::new(rat(1), rat(1)).unwrap();
        let seeds = SequenceWindow::from_integers(0, &[0, 1, 1, 1]);
        assert_eq!(iterate_somos4(&p, &seeds, 0, 5), Err(Error::DivisionByZeroTerm(0)));
        let seeds = SequenceWindow::from_integers(0, &[1, 1, 1, 0]);
        assert_eq!(iterate_somos4(&p, &seeds, -2, 3), Err(Error::DivisionByZeroTerm(3)));
    }

    #[test]
    fn seed_count_and_range_checked() {
        let p = Somos5Params::new(rat(1), rat(1)).unwrap();
        assert!(iterate_somos5(&p, &ones(4), 0, 9).is_err());
        assert!(iterate_somos5(&p, &ones(5), 1, 9).is_err());
        assert!(Somos5Params::new(rat(0), rat(0)).is_err());
    }

    #[test]
    fn eds_values() {
        let w = iterate_eds(&rat(1), &rat(1), &rat(-1), &rat(1), 7).unwrap();
        assert_eq!(w.at(0).unwrap(), &rat(0));
        assert_eq!(w.at(5).unwrap(), &rat(2));
        assert_eq!(w.at(6).unwrap(), &rat(-1));
        assert_eq!(w.at(7).unwrap(), &rat(-3));
        assert_eq!(w.at(-3).unwrap(), &-w.at(3).unwrap().clone());
        for n in -3..=3 {
            assert!(eds_residual(&w, n).unwrap().is_zero(), "n = {n}");
        }
        assert!(matches!(
            iterate_eds(&rat(0), &rat(1), &rat(1), &rat(1), 8),
            Err(Error::InvalidSeed(_))
        ));
    }
}
