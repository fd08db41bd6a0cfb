//! Text form of [`MapSpec`].
//!
//! ```text
//! map     := pair (WS pair)*
//! pair    := key '=' value
//! kind    := "tower" | "h"
//! tower   := kind=tower k=<u32> c=<complex> poly=[<complex>,...]   (a_0 first)
//! h       := kind=h lambda=<real>
//! complex := <real> | <real>i | <real>(+|-)<real>i | i | -i
//! ```
//!
//! Whitespace is allowed inside the brackets of `poly`. Keys may appear in
//! any order; unknown or repeated keys are errors. `c` defaults to `1`.
//! Example: `kind=tower k=2 c=1+0i poly=[-0.5,1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::MapSpec;
use crate::poly::Poly;

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid real number `{s}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("non-finite number `{s}`")))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_poly(s: &str) -> Result<Poly> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("polynomial must be bracketed, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Poly::new(vec![]));
    }
    let coeffs = inner
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse("unbalanced `]`".into()));
                }
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced `[`".into()));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for tok in tokenize(s)? {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))?;
            if pairs.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Parse(format!("repeated key `{k}`")));
            }
        }
        let kind = pairs
            .remove("kind")
            .ok_or_else(|| Error::Parse("missing `kind`".into()))?;
        let map = match kind.as_str() {
            "tower" => {
                let k = match pairs.remove("k") {
                    Some(v) => v
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("invalid tower height `{v}`")))?,
                    None => return Err(Error::Parse("missing `k`".into())),
                };
                let c = match pairs.remove("c") {
                    Some(v) => parse_complex(&v)?,
                    None => Complex64::new(1.0, 0.0),
                };
                let poly = match pairs.remove("poly") {
                    Some(v) => parse_poly(&v)?,
                    None => return Err(Error::Parse("missing `poly`".into())),
                };
                MapSpec::tower(k, c, poly)?
            }
            "h" => {
                let lambda = pairs
                    .remove("lambda")
                    .ok_or_else(|| Error::Parse("missing `lambda`".into()))?;
                MapSpec::h_lambda(parse_real(&lambda)?)?
            }
            other => return Err(Error::Parse(format!("unknown kind `{other}`"))),
        };
        if let Some(extra) = pairs.keys().next() {
            return Err(Error::Parse(format!("unexpected key `{extra}`")));
        }
        Ok(map)
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::TowerPoly { k, c, poly } => {
                write!(f, "kind=tower k={k} c={} poly={poly}", format_complex(*c))
            }
            MapSpec::HLambda { lambda } => write!(f, "kind=h lambda={lambda}"),
        }
    }
}
