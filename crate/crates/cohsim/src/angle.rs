//! Angles written as radians or as rational multiples of π.

use std::f64::consts::PI;

use anyhow::{anyhow, bail, Result};

/// Denominators tried when printing an angle as a fraction of π.
const DENOMINATORS: [i64; 8] = [1, 2, 3, 4, 6, 8, 16, 32];

/// Parses `0.5`, `pi`, `-pi/2`, `3*pi/4`, `3pi/4`, `π/8` and the like.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('π', "pi").to_ascii_lowercase();
    if s.is_empty() {
        bail!("empty angle");
    }
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| anyhow!("cannot parse angle {text:?}"));
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);
    let coef = match head.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| anyhow!("cannot parse angle {text:?}"))?,
    };
    let den = match tail {
        "" => 1.0,
        t => match t.strip_prefix('/') {
            Some(d) => d.parse::<f64>().map_err(|_| anyhow!("cannot parse angle {text:?}"))?,
            None => bail!("cannot parse angle {text:?}"),
        },
    };
    if den == 0.0 {
        bail!("zero denominator in angle {text:?}");
    }
    Ok(coef * PI / den)
}

/// Parses a comma-separated list of angles.
pub fn parse_angle_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_angle).collect()
}

/// Writes `angle` as `pi`, `-pi/2`, `3*pi/4`, … when it is a small rational
/// multiple of π, and as plain radians otherwise.
pub fn format_angle(angle: f64) -> String {
    if angle == 0.0 {
        return "0".into();
    }
    let turns = angle / PI;
    for den in DENOMINATORS {
        let num = (turns * den as f64).round();
        if (turns * den as f64 - num).abs() < 1e-9 {
            let num = num as i64;
            let g = gcd(num.abs(), den);
            let (num, den) = (num / g, den / g);
            let head = match num {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                n => format!("{n}*pi"),
            };
            return if den == 1 { head } else { format!("{head}/{den}") };
        }
    }
    format!("{angle}")
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}
