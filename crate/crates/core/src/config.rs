//! Density and shape files (TOML).
//!
//! ```toml
//! family = "piecewise-linear"   # constant | linear | power | piecewise-linear
//! params = [0, 0, 1, 1]         # (breakpoint, slope) pairs for piecewise-linear
//! h0 = 0.0
//! ```
//!
//! Shapes are a list of `[[component]]` tables with `kind` one of
//! `centered-ball` (`r`), `annulus` (`inner`, `outer`), `off-center-ball`
//! (`center = [x, y]`, `r`) or `cap` (`rotation`, `nodes = [[τ, θ], ...]`,
//! a repeated `τ` marking a jump).

use std::path::Path;

use toml::{Table, Value};

use crate::density::Density;
use crate::error::{Error, Result};
use crate::geometry::{CapProfile, Component, ShapeUnion};

/// 1-based line of the first assignment to `key`, for error messages.
fn line_of(src: &str, key: &str) -> Option<usize> {
    src.lines()
        .position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

fn key_error(src: &str, key: &str, msg: &str) -> Error {
    match line_of(src, key) {
        Some(l) => Error::Input(format!("line {l}, key '{key}': {msg}")),
        None => Error::Input(format!("key '{key}': {msg}")),
    }
}

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn parse_table(src: &str) -> Result<Table> {
    src.parse::<Table>().map_err(|e| Error::Input(format!("parse error: {}", e.to_string().trim_end())))
}

pub fn parse_density(src: &str) -> Result<Density> {
    let t = parse_table(src)?;
    for k in t.keys() {
        if !["family", "params", "h0"].contains(&k.as_str()) {
            return Err(key_error(src, k, "unknown key"));
        }
    }
    let family = match t.get("family") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(key_error(src, "family", "expected a string")),
        None => return Err(Error::Input("missing key 'family'".into())),
    };
    let params = match t.get("params") {
        Some(Value::Array(a)) => a
            .iter()
            .map(number)
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| key_error(src, "params", "expected an array of numbers"))?,
        Some(_) => return Err(key_error(src, "params", "expected an array of numbers")),
        None => Vec::new(),
    };
    let h0 = match t.get("h0") {
        Some(v) => number(v).ok_or_else(|| key_error(src, "h0", "expected a number"))?,
        None => 0.0,
    };
    Density::from_params(&family, &params, h0).map_err(|e| key_error(src, "params", &e.to_string()))
}

pub fn parse_shape(src: &str) -> Result<ShapeUnion> {
    let t = parse_table(src)?;
    let comps = match t.get("component") {
        Some(Value::Array(a)) => a,
        _ => return Err(Error::Input("expected one or more [[component]] tables".into())),
    };
    let mut out = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let err = |key: &str, msg: &str| Error::Input(format!("component {i}, key '{key}': {msg}"));
        let c = c.as_table().ok_or_else(|| err("component", "expected a table"))?;
        let num =
            |key: &str| -> Result<f64> { c.get(key).and_then(number).ok_or_else(|| err(key, "expected a number")) };
        let kind = c.get("kind").and_then(Value::as_str).ok_or_else(|| err("kind", "expected a string"))?;
        let comp = match kind {
            "centered-ball" => Component::CenteredBall { r: num("r")? },
            "annulus" => Component::Annulus { inner: num("inner")?, outer: num("outer")? },
            "off-center-ball" => {
                let center = c
                    .get("center")
                    .and_then(Value::as_array)
                    .and_then(|a| a.iter().map(number).collect::<Option<Vec<f64>>>())
                    .filter(|v| v.len() == 2)
                    .ok_or_else(|| err("center", "expected [x, y]"))?;
                Component::OffCenterBall { cx: center[0], cy: center[1], r: num("r")? }
            }
            "cap" => {
                let rotation = if c.contains_key("rotation") { num("rotation")? } else { 0.0 };
                let nodes = c
                    .get("nodes")
                    .and_then(Value::as_array)
                    .and_then(|a| {
                        a.iter()
                            .map(|p| {
                                let p = p.as_array()?;
                                (p.len() == 2).then_some((number(&p[0])?, number(&p[1])?))
                            })
                            .collect::<Option<Vec<(f64, f64)>>>()
                    })
                    .ok_or_else(|| err("nodes", "expected [[tau, theta], ...]"))?;
                Component::Cap(CapProfile::new(rotation, &nodes).map_err(|e| err("nodes", &e.to_string()))?)
            }
            other => return Err(err("kind", &format!("unknown kind '{other}'"))),
        };
        out.push(comp);
    }
    ShapeUnion::new(out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_density(path: &Path) -> Result<Density> {
    parse_density(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_shape(path: &Path) -> Result<ShapeUnion> {
    parse_shape(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
