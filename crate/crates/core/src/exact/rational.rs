//! Exact rational scalar and its string form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Comma separated list of rationals, as used on the command line.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest `f64`; handles numerators and denominators beyond the `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // scale both to ~60 significant bits
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (r.numer().abs() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let mag = (n / d) * 2f64.powi((shift_n - shift_d) as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `ln|r|` without overflow, for rationals of any height.
pub fn ln_abs(r: &Rational) -> f64 {
    fn ln_big(b: &BigInt) -> f64 {
        let bits = b.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (b.abs() >> shift as usize).to_f64().unwrap_or(1.0);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(r.numer()) - ln_big(r.denom())
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fraction convergents). Returns `None` if the best candidate
/// misses `x` by more than `tol * max(1, |x|)`.
pub fn nearest_rational(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rem = x;
    let mut best: Option<Rational> = None;
    for _ in 0..64 {
        let a = rem.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        let cand = Rational::new(h2.clone(), k2.clone());
        let err = (to_f64(&cand) - x).abs();
        best = Some(cand);
        if err <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rem - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
    }
    best.filter(|r| (to_f64(r) - x).abs() <= tol * x.abs().max(1.0))
}

/// Integer part test used by divisibility checks.
pub(crate) fn as_integer(r: &Rational, index: i64) -> Result<BigInt> {
    if is_integer(r) {
        Ok(r.numer().clone())
    } else {
        Err(Error::NonInteger(index))
    }
}

pub(crate) fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        return b.is_zero();
    }
    b.is_multiple_of(a)
}
