//! Argument and file parsing plus the JSON shapes shared by all subcommands.
//!
//! Wire conventions: lattice vectors are `r,n,s` on the command line and
//! `[r, n, s]` in JSON; rationals are `p/q` strings everywhere.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use k3stab_core::halfplane::{Geodesic, HPoint, MoebiusMap};
use k3stab_core::lattice::MukaiVector;
use k3stab_core::{parse_rat, Rat};

pub fn parse_vector(s: &str) -> Result<MukaiVector> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected r,n,s but got `{s}`");
    }
    let ints: Vec<BigInt> = parts
        .iter()
        .map(|p| p.parse::<BigInt>().with_context(|| format!("bad integer `{p}`")))
        .collect::<Result<_>>()?;
    Ok(MukaiVector { r: ints[0].clone(), n: ints[1].clone(), s: ints[2].clone() })
}

pub fn parse_rational(s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| anyhow!("{e}"))
}

pub fn parse_point(x: &str, t: &str) -> Result<HPoint> {
    HPoint::new(parse_rational(x)?, parse_rational(t)?).map_err(|e| anyhow!("{e}"))
}

/// Integers render as JSON numbers while they fit, huge values fall back to
/// decimal strings so nothing is ever rounded.
pub fn bigint_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(k) => json!(k),
        None => json!(v.to_string()),
    }
}

pub fn vector_json(v: &MukaiVector) -> Value {
    json!([bigint_json(&v.r), bigint_json(&v.n), bigint_json(&v.s)])
}

pub fn rat_json(r: &Rat) -> Value {
    json!(r.to_string())
}

pub fn point_json(p: &HPoint) -> Value {
    json!({ "x": rat_json(p.x()), "t": rat_json(p.t()) })
}

pub fn moebius_json(m: &MoebiusMap) -> Value {
    let [a, b, c, e] = m.entries();
    json!({ "matrix": [a.to_string(), b.to_string(), c.to_string(), e.to_string()] })
}

pub fn geodesic_json(g: &Geodesic) -> Value {
    match g {
        Geodesic::Vertical { x } => json!({ "kind": "vertical", "x": rat_json(x) }),
        Geodesic::Semicircle { center, radius_sq } => json!({
            "kind": "semicircle",
            "center": rat_json(center),
            "radius_sq": rat_json(radius_sq),
        }),
    }
}

/// Parses a JSON vector entry of the form `[d, r, n, s]`, numbers or decimal
/// strings.
pub fn alphabet_entry(v: &Value) -> Result<(BigInt, MukaiVector)> {
    let arr = v.as_array().ok_or_else(|| anyhow!("alphabet entries must be [d, r, n, s]"))?;
    if arr.len() != 4 {
        bail!("alphabet entries must be [d, r, n, s]");
    }
    let ints: Vec<BigInt> = arr.iter().map(json_bigint).collect::<Result<_>>()?;
    Ok((
        ints[0].clone(),
        MukaiVector { r: ints[1].clone(), n: ints[2].clone(), s: ints[3].clone() },
    ))
}

pub fn json_bigint(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse::<BigInt>().with_context(|| format!("bad integer `{s}`"));
    }
    bail!("expected an integer, got {v}")
}

/// `label:exp` tokens separated by whitespace; `g` is the central generator
/// and a bare label means exponent 1.
pub fn parse_word_tokens(word: &str) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    for tok in word.split_whitespace() {
        let (label, exp) = match tok.split_once(':') {
            Some((l, e)) => (
                l.to_string(),
                e.parse::<i64>().with_context(|| format!("bad exponent in `{tok}`"))?,
            ),
            None => (tok.to_string(), 1),
        };
        if label.is_empty() {
            bail!("empty label in `{tok}`");
        }
        out.push((label, exp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_and_words() {
        assert_eq!(parse_vector("2,1,1").unwrap(), MukaiVector::new(2, 1, 1));
        assert_eq!(parse_vector(" -4 , -2 , -1 ").unwrap(), MukaiVector::new(-4, -2, -1));
        assert!(parse_vector("1,2").is_err());
        let toks = parse_word_tokens("A:1 g:2 B:-3 C").unwrap();
        assert_eq!(
            toks,
            vec![
                ("A".into(), 1),
                ("g".into(), 2),
                ("B".into(), -3),
                ("C".into(), 1)
            ]
        );
    }
}
