//! Exact rational and dyadic arithmetic, certified endpoints, and set
//! algebra on finite unions of intervals.

mod dyadic;
mod endpoint;
mod interval;
mod threshold;
mod union;

pub use dyadic::{Dyadic, DyadicEnclosure, RatInterval};
pub use endpoint::{AlgebraicEndpoint, Endpoint};
pub use interval::Interval;
pub use threshold::{PowerThreshold, Threshold};
pub use union::{Direction, IntervalUnion, Measure};

pub(crate) use endpoint::rational_to_f64;
pub(crate) use union::sort_exact;

/// Arbitrary-precision rational in lowest terms.
pub type Rational = num_rational::BigRational;

/// Initial refinement width `2^-64` for endpoint comparisons.
pub const DEFAULT_BITS: u32 = 64;
/// Refinement gives up beyond `2^-4096`.
pub const MAX_BITS: u32 = 4096;

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"0.25"` or `"1e-9"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let exp = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if exp >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, exp as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-exp) as usize));
    }
    if neg {
        r = -r;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(parse_rational("1/10"), Some(q(1, 10)));
        assert_eq!(parse_rational("-3"), Some(q(-3, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("1e-9"), Some(q(1, 1_000_000_000)));
        assert_eq!(parse_rational("2.5E1"), Some(q(25, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }
}
