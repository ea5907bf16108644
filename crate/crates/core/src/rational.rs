use num_rational::Rational64;

use crate::error::{invalid, Result};

/// Formats an exact rational as `"p/q"` (always with a denominator).
pub fn format_ratio(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let parse = |t: &str| t.trim().parse::<i64>().ok();
    let r = match s.split_once('/') {
        Some((p, q)) => match (parse(p), parse(q)) {
            (Some(p), Some(q)) if q != 0 => Rational64::new(p, q),
            _ => return invalid(format!("malformed rational {s:?}")),
        },
        None => match parse(s) {
            Some(p) => Rational64::from_integer(p),
            None => return invalid(format!("malformed rational {s:?}")),
        },
    };
    Ok(r)
}

pub(crate) mod serde_ratio {
    use num_rational::Rational64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_ratio(r))
    }
}

pub(crate) mod serde_ratio_pair {
    use num_rational::Rational64;
    use serde::ser::SerializeTuple;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &[Rational64; 2], s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&super::format_ratio(&r[0]))?;
        t.serialize_element(&super::format_ratio(&r[1]))?;
        t.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = Rational64::new(-6, 4);
        assert_eq!(format_ratio(&r), "-3/2");
        assert_eq!(parse_ratio("-3/2").unwrap(), r);
        assert_eq!(parse_ratio("7").unwrap(), Rational64::from_integer(7));
        assert_eq!(format_ratio(&Rational64::from_integer(1)), "1/1");
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }
}
