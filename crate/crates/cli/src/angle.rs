//! Angle literals: plain radians (`0.785`) or rational multiples of pi
//! (`pi/4`, `-pi/2`, `3pi/2`, `3*pi/4`, `0.5pi`, `π/4`).

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse angle `{input}`: {reason}")]
pub struct AngleError {
    pub input: String,
    pub reason: &'static str,
}

pub fn parse_angle(text: &str) -> Result<f64, AngleError> {
    let err = |reason| AngleError { input: text.to_string(), reason };
    let s = text.trim().to_ascii_lowercase().replace('π', "pi");
    if s.is_empty() {
        return Err(err("empty"));
    }
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|_| err("not a number"))?,
        Some(at) => {
            let coefficient = match s[..at].trim_end_matches('*').trim() {
                "" | "+" => 1.0,
                "-" => -1.0,
                head => head.parse::<f64>().map_err(|_| err("bad coefficient before pi"))?,
            };
            let tail = s[at + 2..].trim();
            let denominator = if tail.is_empty() {
                1.0
            } else {
                let den = tail.strip_prefix('/').ok_or_else(|| err("expected `/` after pi"))?;
                den.trim().parse::<f64>().map_err(|_| err("bad denominator"))?
            };
            if denominator == 0.0 {
                return Err(err("zero denominator"));
            }
            coefficient * PI / denominator
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err("not finite"))
    }
}
