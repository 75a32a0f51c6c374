use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;

/// Arbitrary-precision rational, the scalar type of the whole crate.
pub type Rat = BigRational;

/// `p/q` as a reduced rational. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// An integer as a rational.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses `"p/q"` or `"p"`. This is the wire format for rationals everywhere
/// in the artifact; `Display` on [`Rat`] produces the same shape back.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Error::BadRational(s.to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&r.to_string()).unwrap(), r);
        }
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
