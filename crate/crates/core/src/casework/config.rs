use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::numkit::{parse_rational, Interval, PowerThreshold, Rational, Threshold};

/// The approximation function `Ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiSpec {
    /// `Ψ(h) = c * h^(-w)`.
    PowerLaw { c: Rational, w: Rational },
    /// Explicit values; heights outside the table have no value.
    Table { label: String, values: BTreeMap<u64, Rational> },
}

impl PsiSpec {
    pub fn power_law(c: Rational, w: Rational) -> Result<Self> {
        if !c.is_positive() || !w.is_positive() {
            return Err(Error::InvalidConfig(format!("power law needs c > 0 and w > 0, got c={c}, w={w}")));
        }
        Ok(PsiSpec::PowerLaw { c, w })
    }

    /// `h^(-w)` with integer `w`.
    pub fn pow(w: i64) -> Self {
        PsiSpec::PowerLaw { c: Rational::one(), w: Rational::from_integer(w.into()) }
    }

    pub fn table(label: impl Into<String>, values: BTreeMap<u64, Rational>) -> Result<Self> {
        if let Some((h, v)) = values.iter().find(|(h, v)| **h == 0 || !v.is_positive()) {
            return Err(Error::InvalidConfig(format!("table entry ({h}, {v}) needs H >= 1 and a positive value")));
        }
        Ok(PsiSpec::Table { label: label.into(), values })
    }

    /// `Ψ(H)`, exact for integer power laws and tables.
    pub fn eval(&self, h: u64) -> Result<Threshold> {
        if h == 0 {
            return Err(Error::Precondition("Ψ is evaluated at H >= 1".into()));
        }
        match self {
            PsiSpec::PowerLaw { c, w } => {
                Ok(Threshold::power(PowerThreshold::new(c.clone(), BigInt::from(h), -w)?))
            }
            PsiSpec::Table { values, .. } => values
                .get(&h)
                .map(|v| Threshold::rational(v.clone()))
                .ok_or(Error::OutsideTable(h)),
        }
    }

    /// `Ψ(H)`, or zero where a table has no entry.
    pub fn eval_or_zero(&self, h: u64) -> Result<Threshold> {
        match self.eval(h) {
            Err(Error::OutsideTable(_)) => Ok(Threshold::Zero),
            r => r,
        }
    }

    /// Canonical identifier, e.g. `pow:c=1,w=3`.
    pub fn id(&self) -> String {
        match self {
            PsiSpec::PowerLaw { c, w } => format!("pow:c={c},w={w}"),
            PsiSpec::Table { label, .. } => format!("table:{label}"),
        }
    }

    /// Parses `pow:c=..,w=..`; tables are built by the caller.
    pub fn parse_power_law(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("pow:")
            .ok_or_else(|| Error::InvalidConfig(format!("unknown psi spec '{s}'")))?;
        let mut c = Rational::one();
        let mut w = None;
        for kv in body.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("malformed psi parameter '{kv}'")))?;
            let v = parse_rational(v).ok_or_else(|| Error::InvalidConfig(format!("malformed rational '{v}'")))?;
            match k.trim() {
                "c" => c = v,
                "w" => w = Some(v),
                other => return Err(Error::InvalidConfig(format!("unknown psi parameter '{other}'"))),
            }
        }
        let w = w.ok_or_else(|| Error::InvalidConfig(format!("psi spec '{s}' needs w")))?;
        Self::power_law(c, w)
    }
}

/// Parses a table file: one `H value` pair per line, `#` comments.
pub fn parse_psi_table(label: &str, text: &str) -> Result<PsiSpec> {
    let mut values = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
        let (h, v) = (it.next(), it.next());
        let h: Option<u64> = h.and_then(|h| h.parse().ok());
        let v = v.and_then(parse_rational);
        match (h, v) {
            (Some(h), Some(v)) => {
                values.insert(h, v);
            }
            _ => {
                return Err(Error::InvalidConfig(format!("psi table line {}: expected 'H value'", lineno + 1)));
            }
        }
    }
    PsiSpec::table(label, values)
}

/// The three derivative regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// `|P'(x)| >= 1`
    Big,
    /// `H^-δ <= |P'(x)| < 1`
    Medium,
    /// `|P'(x)| < H^-δ`
    Small,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::Big, Case::Medium, Case::Small];
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Big => "big",
            Case::Medium => "medium",
            Case::Small => "small",
        })
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "big" => Ok(Case::Big),
            "medium" => Ok(Case::Medium),
            "small" => Ok(Case::Small),
            _ => Err(Error::InvalidConfig(format!("unknown case '{s}' (big|medium|small)"))),
        }
    }
}

/// Parameters shared by every per-polynomial construction.
#[derive(Clone, Debug)]
pub struct CaseConfig {
    pub n: usize,
    pub delta: Rational,
    pub interval: Interval,
    pub psi: PsiSpec,
    pub tol: Rational,
}

impl CaseConfig {
    pub fn new(n: usize, delta: Rational, interval: Interval, psi: PsiSpec, tol: Rational) -> Result<Self> {
        let cfg = CaseConfig { n, delta, interval, psi, tol };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !self.delta.is_positive() || !self.delta.numer().is_one() {
            return Err(Error::IncomparableThreshold(format!(
                "delta = {} must be 1/q for a positive integer q so that |P'| vs H^-delta clears exactly",
                self.delta
            )));
        }
        if !self.tol.is_positive() {
            return Err(Error::InvalidConfig(format!("tolerance {} must be positive", self.tol)));
        }
        self.interval.check_away_from_zero()
    }

    /// `H^-δ`.
    pub fn h_pow_neg_delta(&self, h: u64) -> Threshold {
        self.h_pow(h, -&self.delta)
    }

    /// `H^e`.
    pub fn h_pow(&self, h: u64, e: Rational) -> Threshold {
        Threshold::power(PowerThreshold::pow(h, e))
    }

    pub fn delta_inverse(&self) -> u32 {
        self.delta.denom().to_u32().unwrap_or(u32::MAX)
    }

    pub fn interval_id(&self) -> String {
        match self.interval.rational_bounds() {
            Some((a, b)) => format!("{a}:{b}"),
            None => self.interval.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn psi_values() {
        assert_eq!(PsiSpec::pow(3).eval(2).unwrap(), Threshold::Finite(q(1, 8)));
        assert_eq!(PsiSpec::pow(3).eval(10).unwrap(), Threshold::Finite(q(1, 1000)));
        let t = PsiSpec::table("t", [(1, q(1, 2)), (2, q(1, 8))].into_iter().collect()).unwrap();
        assert_eq!(t.eval(2).unwrap(), Threshold::Finite(q(1, 8)));
        assert_eq!(t.eval(3), Err(Error::OutsideTable(3)));
        assert_eq!(t.eval_or_zero(3).unwrap(), Threshold::Zero);
        let half = PsiSpec::power_law(q(1, 1), q(5, 2)).unwrap();
        assert!(matches!(half.eval(2).unwrap(), Threshold::Power(_)));
        assert_eq!(half.eval(4).unwrap(), Threshold::Finite(q(1, 32)));
    }

    #[test]
    fn parsing() {
        assert_eq!(PsiSpec::parse_power_law("pow:c=1,w=3").unwrap(), PsiSpec::pow(3));
        assert_eq!(PsiSpec::pow(3).id(), "pow:c=1,w=3");
        assert!(PsiSpec::parse_power_law("pow:c=1").is_err());
        let t = parse_psi_table("f", "# H psi\n1 1/2\n2, 0.125\n").unwrap();
        assert_eq!(t.eval(2).unwrap(), Threshold::Finite(q(1, 8)));
        assert!(parse_psi_table("f", "1\n").is_err());
    }

    #[test]
    fn config_checks() {
        let i = Interval::closed_ratio((1, 1), (2, 1));
        assert!(CaseConfig::new(2, q(1, 10), i.clone(), PsiSpec::pow(3), q(1, 1000)).is_ok());
        assert!(matches!(
            CaseConfig::new(2, q(3, 10), i, PsiSpec::pow(3), q(1, 1000)),
            Err(Error::IncomparableThreshold(_))
        ));
        let bad = Interval::closed_ratio((-1, 1), (1, 1));
        assert!(matches!(
            CaseConfig::new(2, q(1, 10), bad, PsiSpec::pow(3), q(1, 1000)),
            Err(Error::InvalidInterval(_))
        ));
    }
}
