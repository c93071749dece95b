//! Parsers for the human-friendly value syntax shared by flags and config
//! files.

use std::path::Path;

use metalfluct_core::constants::CM_PER_UM;
use metalfluct_core::materials::{DrudeParams, ImpedanceTable, MaterialModel, ModelTag};

use crate::Failure;

fn number(field: &str, s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Failure::usage(field, format!("'{s}' is not a number")))
}

/// `0.3um`, `300nm`, `3e-5cm`; a bare number is taken in µm. Returns cm.
pub fn length(field: &str, s: &str) -> Result<f64, Failure> {
    let s = s.trim();
    let (value, scale) = if let Some(v) = s.strip_suffix("um") {
        (v, CM_PER_UM)
    } else if let Some(v) = s.strip_suffix("µm") {
        (v, CM_PER_UM)
    } else if let Some(v) = s.strip_suffix("nm") {
        (v, 1e-7)
    } else if let Some(v) = s.strip_suffix("cm") {
        (v, 1.0)
    } else {
        (s, CM_PER_UM)
    };
    let x = number(field, value)? * scale;
    if x <= 0.0 {
        return Err(Failure::usage(field, format!("'{s}' must be positive")));
    }
    Ok(x)
}

/// A single value or `a:b:N{log|lin}` with both ends included.
pub fn range(field: &str, s: &str, one: impl Fn(&str, &str) -> Result<f64, Failure>) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![one(field, single)?]),
        [a, b, spec] => {
            let (a, b) = (one(field, a)?, one(field, b)?);
            let spec = spec.trim();
            let (count, log) = if let Some(n) = spec.strip_suffix("log") {
                (n, true)
            } else if let Some(n) = spec.strip_suffix("lin") {
                (n, false)
            } else {
                return Err(Failure::usage(field, format!("'{spec}' must end in 'log' or 'lin'")));
            };
            let n: usize = count
                .parse()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| Failure::usage(field, format!("point count '{count}' must be an integer >= 2")))?;
            if a >= b {
                return Err(Failure::usage(field, "range must be increasing".into()));
            }
            if log && a <= 0.0 {
                return Err(Failure::usage(field, "log range needs positive ends".into()));
            }
            Ok((0..n)
                .map(|k| {
                    let f = k as f64 / (n - 1) as f64;
                    if log {
                        (a.ln() + f * (b.ln() - a.ln())).exp()
                    } else {
                        a + f * (b - a)
                    }
                })
                .collect())
        }
        _ => Err(Failure::usage(field, format!("'{s}' is neither a value nor a:b:N(log|lin)"))),
    }
}

pub fn positive(field: &str, s: &str) -> Result<f64, Failure> {
    let x = number(field, s)?;
    if x <= 0.0 {
        return Err(Failure::usage(field, format!("'{s}' must be positive")));
    }
    Ok(x)
}

pub fn non_negative(field: &str, s: &str) -> Result<f64, Failure> {
    let x = number(field, s)?;
    if x < 0.0 {
        return Err(Failure::usage(field, format!("'{s}' must not be negative")));
    }
    Ok(x)
}

pub fn count(field: &str, s: &str) -> Result<usize, Failure> {
    s.trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(field, format!("'{s}' is not a positive integer")))
}

/// `lo:hi` in rad/s.
pub fn band(field: &str, s: &str) -> Result<(f64, f64), Failure> {
    match s.split(':').collect::<Vec<_>>().as_slice() {
        [lo, hi] => {
            let (lo, hi) = (positive(field, lo)?, positive(field, hi)?);
            if lo >= hi {
                return Err(Failure::usage(field, "band must be increasing".into()));
            }
            Ok((lo, hi))
        }
        _ => Err(Failure::usage(field, format!("'{s}' is not lo:hi"))),
    }
}

fn frequency(field: &str, s: &str) -> Result<f64, Failure> {
    let s = s.trim();
    if let Some(v) = s.strip_suffix("eV") {
        return Ok(metalfluct_core::constants::ev_to_rad_s(number(field, v)?));
    }
    number(field, s.strip_suffix("rad/s").unwrap_or(s))
}

/// `drude:11.5eV,0.05eV` (or rad/s), `ideal`, `impedance:1e-5`, `table:path`.
pub fn material(field: &str, s: &str) -> Result<MaterialModel, Failure> {
    let s = s.trim();
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "ideal" if rest.is_empty() => Ok(MaterialModel::Ideal),
        "drude" => {
            let (op, g) = rest
                .split_once(',')
                .ok_or_else(|| Failure::usage(field, format!("'{s}' needs plasma,relaxation")))?;
            let params = DrudeParams::new(frequency(field, op)?, frequency(field, g)?)
                .map_err(|e| Failure::usage(field, e.to_string()))?;
            Ok(MaterialModel::DrudeImpedance(params))
        }
        "impedance" => {
            let z = non_negative(field, rest)?;
            Ok(MaterialModel::ConstantImpedance(z))
        }
        "table" if !rest.is_empty() => {
            let path = Path::new(rest);
            if !path.is_file() {
                return Err(Failure::Io(format!("{field}: cannot read impedance table {rest}")));
            }
            ImpedanceTable::from_path(path)
                .map(MaterialModel::TabulatedImpedance)
                .map_err(|e| Failure::usage(field, e.to_string()))
        }
        _ => Err(Failure::usage(
            field,
            format!("'{s}' is not one of drude:<Op>,<gamma>, ideal, impedance:<zeta>, table:<path>"),
        )),
    }
}

pub fn models(field: &str, s: &str) -> Result<Vec<ModelTag>, Failure> {
    match s.trim() {
        "both" => Ok(vec![ModelTag::Impedance, ModelTag::LifshitzDielectric]),
        other => other
            .parse::<ModelTag>()
            .map(|m| vec![m])
            .map_err(|_| Failure::usage(field, format!("'{other}' is not impedance, lifshitz-dielectric or both"))),
    }
}
