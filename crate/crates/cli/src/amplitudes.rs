//! Parsing of hand-typed amplitude lists.

use lrn_core::numerics::haar_state;
use lrn_core::{ComplexVec4, RngSeed, C64};

use crate::error::{input, CliError};

/// Parses `"re,im;re,im;re,im;re,im"`. A field without a comma is real.
/// Returns the raw vector; see [`normalize_with_warning`].
pub fn parse_amplitudes(s: &str) -> Result<ComplexVec4, CliError> {
    let fields: Vec<&str> = s.trim().trim_end_matches(';').split(';').collect();
    if fields.len() != 4 {
        return Err(input(format!(
            "expected 4 semicolon-separated amplitudes, got {} in `{s}`",
            fields.len()
        )));
    }
    let mut out = [C64::new(0.0, 0.0); 4];
    for (k, f) in fields.iter().enumerate() {
        let parts: Vec<&str> = f.split(',').map(str::trim).collect();
        let num = |p: &str| -> Result<f64, CliError> {
            let x: f64 = p
                .parse()
                .map_err(|_| input(format!("amplitude {k}: `{p}` is not a number")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(input(format!("amplitude {k}: `{p}` is not finite")))
            }
        };
        out[k] = match parts.as_slice() {
            [re] => C64::new(num(re)?, 0.0),
            [re, im] => C64::new(num(re)?, num(im)?),
            _ => return Err(input(format!("amplitude {k}: `{f}` is not `re` or `re,im`"))),
        };
    }
    Ok(ComplexVec4::new(out))
}

/// Rescales to unit norm, returning a warning when the input was off by more
/// than `tol_norm`.
pub fn normalize_with_warning(v: ComplexVec4, tol_norm: f64) -> Result<(ComplexVec4, Option<String>), CliError> {
    let n = v.norm_sqr();
    if n == 0.0 {
        return Err(input("amplitudes are all zero"));
    }
    let unit = v.normalized().map_err(|e| input(e.to_string()))?;
    let warning = ((n - 1.0).abs() > tol_norm)
        .then(|| format!("input squared norm {n} differs from 1; normalized"));
    Ok((unit, warning))
}

/// Amplitudes, or one of the presets `t` (`(|0⟩ + e^{iπ/4}|1⟩)/√2` on the
/// first two entries) and `random` (Haar, drawn from `seed`).
pub fn parse_state_or_preset(s: &str, seed: RngSeed) -> Result<ComplexVec4, CliError> {
    match s.trim() {
        "t" | "T" => Ok(lrn_core::ground_space::encoded_t_state((0, 0), (1, 0))),
        "random" => Ok(haar_state(&mut seed.rng())),
        other => parse_amplitudes(other),
    }
}

pub fn parse_columns(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| input(format!("`{c}` is not a column index")))
        })
        .collect()
}
