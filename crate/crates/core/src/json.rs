//! JSON encodings of problems, solutions and evaluations.
//!
//! Rationals are `"p/q"` strings (integers without a denominator), complex
//! numbers are `{"re": .., "im": ..}` with floats printed as the shortest
//! decimal that round-trips. Object keys are sorted, so equal inputs give
//! byte-identical output.

use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational, SequenceWindow};
use crate::ivp::{Convention, Somos4Solution, Somos5Solution, TauValue};
use crate::problem::{Problem, Recurrence, Solved};
use crate::weierstrass::Lattice;

pub fn complex(c: Complex<f64>) -> Value {
    json!({ "re": c.re, "im": c.im })
}

/// Complex value with its exact rational shadow.
pub fn scalar(c: Complex<f64>, exact: Option<&Rational>) -> Value {
    let mut v = complex(c);
    if let Some(r) = exact {
        v["exact"] = Value::String(format_rational(r));
    }
    v
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn window(w: &SequenceWindow) -> Value {
    serde_json::to_value(w).expect("window serializes")
}

pub fn window_from(v: &Value) -> Result<SequenceWindow> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidArgument(format!("sequence JSON: {e}")))
}

pub fn problem(p: &Problem) -> Value {
    json!({
        "recurrence": p.recurrence.to_string(),
        "params": p.params.iter().map(rational).collect::<Vec<_>>(),
        "seeds": p.seeds.iter().map(rational).collect::<Vec<_>>(),
    })
}

/// Reads the `"problem"` block of a solution (or a bare problem object).
pub fn problem_from(v: &Value) -> Result<Problem> {
    let v = v.get("problem").unwrap_or(v);
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("missing field {k:?}")))
    };
    let recurrence: Recurrence = field("recurrence")?
        .as_str()
        .ok_or_else(|| Error::InvalidArgument("recurrence must be a string".into()))?
        .parse()?;
    let list = |k: &str| -> Result<Vec<Rational>> {
        field(k)?
            .as_array()
            .ok_or_else(|| Error::InvalidArgument(format!("{k} must be an array")))?
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) if n.is_i64() => Ok(crate::exact::rat(n.as_i64().unwrap_or_default())),
                _ => Err(Error::InvalidArgument(format!("{k} entries must be rational strings"))),
            })
            .collect()
    };
    Problem::new(recurrence, list("params")?, list("seeds")?)
}

pub fn lattice(l: &Lattice<f64>) -> Value {
    json!({
        "omega1": complex(l.omega1),
        "omega2": complex(l.omega2),
        "eta1": complex(l.eta1),
        "eta2": complex(l.eta2),
        "nome": complex(l.q),
        "roots": l.roots.iter().map(|&e| complex(e)).collect::<Vec<_>>(),
    })
}

pub fn convention(c: &Convention) -> Value {
    json!({
        "root_branch": c.root_branch,
        "kappa_sign": c.kappa_sign,
        "z0_sign": c.z0_sign,
        "kappa_residual": c.kappa_residual,
        "z0_residual": c.z0_residual,
    })
}

fn lift(r: &Rational) -> Complex<f64> {
    Complex::new(crate::exact::to_f64(r), 0.0)
}

fn exact_scalar(r: &Rational) -> Value {
    scalar(lift(r), Some(r))
}

pub fn somos4_solution(p: &Problem, s: &Somos4Solution<f64>) -> Value {
    json!({
        "problem": problem(p),
        "f": s.f.iter().map(exact_scalar).collect::<Vec<_>>(),
        "J": exact_scalar(&s.j),
        "lambda": exact_scalar(&s.lambda),
        "g2": exact_scalar(&s.g2),
        "g3": exact_scalar(&s.g3),
        "j": exact_scalar(&s.j_invariant()),
        "lattice": lattice(&s.lat),
        "kappa": complex(s.kappa),
        "z0": complex(s.z0),
        "A": complex(s.a),
        "B": complex(s.b),
        "convention": convention(&s.convention),
        "reconstruction_error": s.reconstruction_error,
    })
}

pub fn somos5_solution(p: &Problem, s: &Somos5Solution<f64>) -> Value {
    let mu2 = s.mu_t * s.mu_t;
    json!({
        "problem": problem(p),
        "h": s.h.iter().map(exact_scalar).collect::<Vec<_>>(),
        "f": s.f.iter().map(exact_scalar).collect::<Vec<_>>(),
        "Jt": exact_scalar(&s.jt),
        "mu4": exact_scalar(&s.mu4),
        "mu": complex(s.mu_t),
        "lambda": complex(s.lambda_t),
        "x0": complex(s.x0),
        "g2": exact_scalar(&s.g2),
        "g3": complex(s.g3),
        "g2_star": exact_scalar(&s.g2_star),
        "g3_star": exact_scalar(&s.g3_star),
        "lambda_star": scalar(s.lambda_t * mu2, Some(&s.lambda_star)),
        "mu_star": exact_scalar(&s.mu4),
        "x0_star": scalar(s.x0 * mu2, Some(&s.x0_star)),
        "y0_star": exact_scalar(&s.y0_star),
        "j": exact_scalar(&s.j_invariant()),
        "lattice": lattice(&s.lat),
        "lattice_star": lattice(&s.lat_star),
        "kappa": complex(s.kappa),
        "z0": complex(s.z0),
        "u0": complex(s.u0),
        "v": complex(s.v),
        "A_plus": complex(s.a_plus),
        "A_minus": complex(s.a_minus),
        "B_plus": complex(s.b_plus),
        "B_minus": complex(s.b_minus),
        "convention": convention(&s.convention),
        "warnings": s.warnings,
        "reconstruction_error": s.reconstruction_error,
    })
}

pub fn solution(p: &Problem, s: &Solved) -> Value {
    match s {
        Solved::Somos4(s) => somos4_solution(p, s),
        Solved::Somos5(s) => somos5_solution(p, s),
    }
}

/// `{n, log_abs, phase, value?}`; `value` is omitted when it overflows.
pub fn tau_value(t: &TauValue<f64>) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(t.n));
    m.insert("log_abs".into(), json!(t.log_abs));
    m.insert("phase".into(), json!(t.phase));
    if let Some(v) = t.value {
        m.insert("value".into(), complex(v));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::ivp::SolveOptions;

    fn somos5() -> Problem {
        Problem::new(Recurrence::Somos5, vec![rat(1), rat(1)], vec![rat(1); 5]).unwrap()
    }

    #[test]
    fn exact_shadows_and_determinism() {
        let p = somos5();
        let a = serde_json::to_string(&solution(&p, &p.solve(&SolveOptions::default()).unwrap())).unwrap();
        let b = serde_json::to_string(&solution(&p, &p.solve(&SolveOptions::default()).unwrap())).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["g2_star"]["exact"], "121/12");
        assert_eq!(v["g3_star"]["exact"], "-845/216");
        assert_eq!(v["j"]["exact"], "1771561/612");
        assert_eq!(v["convention"]["root_branch"], "principal fourth root");
        assert_eq!(problem_from(&v).unwrap(), p);
    }

    #[test]
    fn floats_round_trip() {
        let x = 0.1 + 0.2;
        let s = serde_json::to_string(&complex(Complex::new(x, -1e-300))).unwrap();
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["re"].as_f64().unwrap(), x);
        assert_eq!(back["im"].as_f64().unwrap(), -1e-300);
    }

    #[test]
    fn bad_problem_json() {
        assert!(problem_from(&json!({"recurrence": "somos4", "params": ["1"], "seeds": ["1"]})).is_err());
        assert!(problem_from(&json!({"recurrence": "somos6", "params": [], "seeds": []})).is_err());
    }
}
