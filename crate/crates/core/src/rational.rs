//! Exact rational helpers.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rational number used throughout the crate.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// `n` or `n/d`, never a decimal.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_vec(v: &[Rat]) -> String {
    let mut s = String::from("(");
    for (i, r) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}", fmt_rat(r));
    }
    s.push(')');
    s
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rat::new(n.trim().parse().ok()?, d))
        }
        None => s.parse().ok().map(Rat::from_integer),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> i64 {
    v.iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

pub fn is_integral(r: &Rat) -> bool {
    r.is_integer()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(fmt_rat(&rat(22, 4)), "11/2");
        assert_eq!(fmt_rat(&rat(-8, 2)), "-4");
        assert_eq!(parse_rat("121/4"), Some(rat(121, 4)));
        assert_eq!(parse_rat(" 7 "), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(common_denominator(&[rat(1, 4), rat(1, 6), int(3)]), 12);
        assert_eq!(fmt_vec(&[int(1), rat(1, 2)]), "(1, 1/2)");
    }
}
