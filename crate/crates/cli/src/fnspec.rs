//! Textual function descriptors: `name[:key=value;key=value]`.
//!
//! | name        | parameters                         | f(x)            |
//! |-------------|------------------------------------|-----------------|
//! | `resolvent` | `z=a+bi` (default `0+1i`)          | 1/(x + z)       |
//! | `rational`  | `num=c0,c1,..;den=d0,d1,..`        | num(x)/den(x)   |
//! | `arctan`    |                                    | arctan x        |
//! | `gauss`     |                                    | e^{-x²}         |
//! | `poly`      | `coeffs=c0,c1,..`                  | Σ c_k x^k       |
//! | `expres`    | `tau=t` (default `1`)              | e^{itx}/(x + i) |
//!
//! Coefficients are listed in ascending powers.

use std::collections::BTreeMap;

use relop::{Error, ScalarFunction, C64};

use crate::error::{CliError, CliResult};

fn spec_err(spec: &str, message: impl Into<String>) -> CliError {
    CliError::Spec {
        spec: spec.to_string(),
        message: message.into(),
    }
}

pub fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (with optional exponents).
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(s).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Some(C64::new(re, im))
}

pub fn render_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_list(spec: &str, key: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| parse_real(t).ok_or_else(|| spec_err(spec, format!("{key}: '{t}' is not a finite number"))))
        .collect()
}

fn render_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_function(spec: &str) -> CliResult<ScalarFunction> {
    let trimmed = spec.trim();
    let (name, rest) = match trimmed.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (trimmed, None),
    };
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    if let Some(rest) = rest {
        for part in rest.split(';').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| spec_err(spec, format!("parameter '{part}' is not key=value")))?;
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(spec_err(spec, format!("parameter '{}' given twice", k.trim())));
            }
        }
    }
    let allowed: &[&str] = match name {
        "resolvent" => &["z"],
        "rational" => &["num", "den"],
        "arctan" | "gauss" => &[],
        "poly" => &["coeffs"],
        "expres" => &["tau"],
        _ => {
            return Err(spec_err(
                spec,
                format!("unknown function '{name}' (expected resolvent, rational, arctan, gauss, poly or expres)"),
            ))
        }
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(spec_err(spec, format!("'{name}' takes no parameter '{k}'")));
    }
    let required = |key: &str| {
        params
            .get(key)
            .ok_or_else(|| spec_err(spec, format!("'{name}' needs parameter '{key}'")))
    };
    let numeric = |e: Error| match e {
        Error::RealPole { at } => spec_err(spec, format!("pole on the real line at x = {at}")),
        other => spec_err(spec, other.to_string()),
    };
    match name {
        "resolvent" => {
            let z = match params.get("z") {
                Some(v) => parse_complex(v).ok_or_else(|| spec_err(spec, format!("z: '{v}' is not a complex number")))?,
                None => C64::new(0.0, 1.0),
            };
            ScalarFunction::resolvent(z).map_err(numeric)
        }
        "rational" => {
            let num = parse_list(spec, "num", required("num")?)?;
            let den = parse_list(spec, "den", required("den")?)?;
            ScalarFunction::rational(num, den).map_err(numeric)
        }
        "arctan" => Ok(ScalarFunction::Arctan),
        "gauss" => Ok(ScalarFunction::Gauss),
        "poly" => Ok(ScalarFunction::poly(parse_list(spec, "coeffs", required("coeffs")?)?)),
        "expres" => {
            let tau = match params.get("tau") {
                Some(v) => parse_real(v).ok_or_else(|| spec_err(spec, format!("tau: '{v}' is not a finite number")))?,
                None => 1.0,
            };
            Ok(ScalarFunction::ExpResolvent { tau })
        }
        _ => unreachable!("name checked above"),
    }
}

pub fn render_function(f: &ScalarFunction) -> String {
    match f {
        ScalarFunction::Resolvent { z } => format!("resolvent:z={}", render_complex(*z)),
        ScalarFunction::Rational { num, den } => format!("rational:num={};den={}", render_list(num), render_list(den)),
        ScalarFunction::Arctan => "arctan".into(),
        ScalarFunction::Gauss => "gauss".into(),
        ScalarFunction::Poly { coeffs } => format!("poly:coeffs={}", render_list(coeffs)),
        ScalarFunction::ExpResolvent { tau } => format!("expres:tau={tau}"),
    }
}
