//! Real endpoints: exact rationals and isolated real roots of integer
//! polynomials.
//!
//! An [`AlgebraicEndpoint`] is a square-free integer polynomial together
//! with a dyadic isolator `(lo, hi) / 2^k` that contains exactly one of its
//! roots. The isolator is a refinement cache shared by clones; the number it
//! denotes never changes.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Dyadic, RatInterval, Rational, DEFAULT_BITS, MAX_BITS};
use crate::error::{Error, Result};
use crate::polynomials::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Isolator {
    lo: BigInt,
    hi: BigInt,
    k: u32,
}

impl Isolator {
    fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn lo_q(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.k as usize)
    }

    fn hi_q(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.k as usize)
    }

    /// `hi - lo <= 2^-bits`
    fn narrower_than(&self, bits: u32) -> bool {
        ((&self.hi - &self.lo) << bits as usize) <= (BigInt::one() << self.k as usize)
    }
}

struct AlgInner {
    poly: IntPoly,
    sign_lo: Sign,
    iso: Mutex<Isolator>,
    rational: OnceLock<Option<Rational>>,
}

#[derive(Clone)]
pub struct AlgebraicEndpoint(Arc<AlgInner>);

impl AlgebraicEndpoint {
    /// Root of `poly` in the open interval `(lo, hi) / 2^k`.
    ///
    /// `poly` must be square-free with opposite, nonzero signs at the two
    /// isolator ends.
    pub fn new(poly: IntPoly, lo: BigInt, hi: BigInt, k: u32) -> Result<Self> {
        let den = BigInt::one() << k as usize;
        let poly = poly.normalized();
        let s_lo = poly.sign_at_fraction(&lo, &den);
        let s_hi = poly.sign_at_fraction(&hi, &den);
        if lo >= hi || s_lo == Sign::NoSign || s_hi == Sign::NoSign || s_lo == s_hi {
            return Err(Error::Precondition(format!(
                "({lo}, {hi})/2^{k} does not isolate a simple root of {poly}"
            )));
        }
        Ok(Self::new_unchecked(poly, lo, hi, k, s_lo))
    }

    pub(crate) fn new_unchecked(poly: IntPoly, lo: BigInt, hi: BigInt, k: u32, sign_lo: Sign) -> Self {
        AlgebraicEndpoint(Arc::new(AlgInner {
            poly,
            sign_lo,
            iso: Mutex::new(Isolator { lo, hi, k }),
            rational: OnceLock::new(),
        }))
    }

    /// Defining polynomial (square-free, primitive, positive leading term).
    pub fn poly(&self) -> &IntPoly {
        &self.0.poly
    }

    /// Sign of the defining polynomial just left of the root.
    pub fn sign_left(&self) -> Sign {
        self.0.sign_lo
    }

    fn snapshot(&self) -> Isolator {
        self.0.iso.lock().unwrap().clone()
    }

    /// Current isolator as a rational interval (closed hull of the open
    /// isolator, or a single point once the root has been hit exactly).
    pub fn isolator(&self) -> RatInterval {
        let s = self.snapshot();
        RatInterval::new(s.lo_q(), s.hi_q())
    }

    /// The root as a rational, if bisection has landed on it.
    pub fn exact_value(&self) -> Option<Rational> {
        let s = self.snapshot();
        s.is_point().then(|| s.lo_q())
    }

    /// The root as a rational if it is one. Decided exactly for linear
    /// defining polynomials and for leading coefficients below `2^64`,
    /// where a rational root `m / a_d` is found by refining past `1 / a_d`.
    pub fn rational_value(&self) -> Option<Rational> {
        if let Some(v) = self.exact_value() {
            return Some(v);
        }
        self.0
            .rational
            .get_or_init(|| {
                let p = self.poly();
                let lead = p.leading();
                if p.degree() == Some(1) {
                    return Some(Rational::new(-p.coeff(0), lead));
                }
                let bits = lead.bits() as u32;
                if bits > 64 {
                    return None;
                }
                self.refine_to_bits(bits + 2);
                if let Some(v) = self.exact_value() {
                    return Some(v);
                }
                let iso = self.isolator();
                let lo = (&iso.lo * Rational::from_integer(lead.clone())).floor().to_integer();
                (0..3)
                    .map(|j| Rational::new(&lo + j, lead.clone()))
                    .find(|c| *c > iso.lo && *c < iso.hi && p.sign_at(c) == Sign::NoSign)
            })
            .clone()
    }

    /// Bisect until the isolator is at most `2^-bits` wide.
    pub fn refine_to_bits(&self, bits: u32) {
        let mut iso = self.0.iso.lock().unwrap();
        while !iso.is_point() && !iso.narrower_than(bits) {
            self.bisect(&mut iso);
        }
    }

    fn bisect(&self, iso: &mut Isolator) {
        if (&iso.lo + &iso.hi).is_odd() {
            iso.lo <<= 1;
            iso.hi <<= 1;
            iso.k += 1;
        }
        let mid: BigInt = (&iso.lo + &iso.hi) >> 1;
        let den = BigInt::one() << iso.k as usize;
        match self.0.poly.sign_at_fraction(&mid, &den) {
            Sign::NoSign => {
                iso.lo = mid.clone();
                iso.hi = mid;
            }
            s if s == self.0.sign_lo => iso.lo = mid,
            _ => iso.hi = mid,
        }
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        self.refine_to_bits(bits);
        self.isolator()
    }

    /// `(j, j')` with the root in `[j, j'] / 2^bits`, where `j' = j + 1`
    /// unless the root is exactly `j / 2^bits`. Depends only on the value.
    pub fn grid_enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        self.refine_to_bits(bits);
        let s = self.snapshot();
        let shift = |v: &BigInt| -> (BigInt, bool) {
            // floor(v / 2^k * 2^bits) and whether it was exact
            if bits >= s.k {
                (v << (bits - s.k) as usize, true)
            } else {
                let d = BigInt::one() << (s.k - bits) as usize;
                let (q, r) = v.div_mod_floor(&d);
                (q, r.is_zero())
            }
        };
        if s.is_point() {
            let (f, exact) = shift(&s.lo);
            return if exact { (f.clone(), f) } else { (f.clone(), f + 1) };
        }
        let (fl, _) = shift(&s.lo);
        let (fh, hi_exact) = shift(&s.hi);
        if fl == fh {
            return (fl.clone(), fl + 1);
        }
        // one grid point g = fh / 2^bits with lo < g <= hi
        if hi_exact {
            return (fl.clone(), fl + 1);
        }
        let den = BigInt::one() << bits as usize;
        match self.0.poly.sign_at_fraction(&fh, &den) {
            Sign::NoSign => (fh.clone(), fh),
            s if s == self.0.sign_lo => (fh.clone(), fh + 1),
            _ => (fl.clone(), fl + 1),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let e = self.enclosure(60);
        let mid = (e.lo + e.hi) / Rational::from_integer(2.into());
        rational_to_f64(&mid)
    }

    /// Order against a rational, exactly and without refinement.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let s = self.snapshot();
        if s.is_point() {
            return s.lo_q().cmp(r);
        }
        if *r <= s.lo_q() {
            return Ordering::Greater;
        }
        if *r >= s.hi_q() {
            return Ordering::Less;
        }
        match self.0.poly.sign_at(r) {
            Sign::NoSign => Ordering::Equal,
            sg if sg == self.0.sign_lo => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Whether `self` and `other` denote the same real number, decided via
    /// the gcd of the defining polynomials on the overlap of the isolators.
    fn equal_by_gcd(&self, other: &AlgebraicEndpoint) -> bool {
        let (a, b) = (self.snapshot(), other.snapshot());
        let lo = a.lo_q().max(b.lo_q());
        let hi = a.hi_q().min(b.hi_q());
        if lo > hi {
            return false;
        }
        let g = self.poly().gcd(other.poly());
        if g.is_constant() {
            return false;
        }
        if lo == hi {
            return g.sign_at(&lo) == Sign::NoSign;
        }
        let (sl, sh) = (g.sign_at(&lo), g.sign_at(&hi));
        sl != Sign::NoSign && sh != Sign::NoSign && sl != sh
    }

    pub fn cmp_exact(&self, other: &AlgebraicEndpoint) -> Result<Ordering> {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ok(Ordering::Equal);
        }
        let mut bits = DEFAULT_BITS;
        let mut refined = false;
        let mut gcd_checked = false;
        loop {
            if let Some(v) = self.exact_value() {
                return Ok(other.cmp_rational(&v).reverse());
            }
            if let Some(v) = other.exact_value() {
                return Ok(self.cmp_rational(&v));
            }
            let (a, b) = (self.snapshot(), other.snapshot());
            if a.hi_q() <= b.lo_q() {
                return Ok(Ordering::Less);
            }
            if b.hi_q() <= a.lo_q() {
                return Ok(Ordering::Greater);
            }
            if refined && !gcd_checked {
                if self.equal_by_gcd(other) {
                    return Ok(Ordering::Equal);
                }
                gcd_checked = true;
            }
            if refined {
                if bits >= MAX_BITS {
                    return Err(Error::RefinementBudget { bits });
                }
                bits *= 2;
            }
            self.refine_to_bits(bits);
            other.refine_to_bits(bits);
            refined = true;
        }
    }

    /// The root shifted by `+d`.
    pub fn shifted(&self, d: &Dyadic) -> AlgebraicEndpoint {
        let s = self.snapshot();
        let (m, sh) = if d.exponent() >= 0 {
            (d.mantissa() << d.exponent() as usize, 0u32)
        } else {
            (d.mantissa().clone(), (-d.exponent()) as u32)
        };
        let poly = self.poly().shift_roots_dyadic(&m, sh);
        let k = s.k.max(sh);
        let up = |v: &BigInt| v << (k - s.k) as usize;
        let dm = &m << (k - sh) as usize;
        let lo = up(&s.lo) + &dm;
        let hi = up(&s.hi) + &dm;
        let den = BigInt::one() << k as usize;
        if lo == hi {
            return AlgebraicEndpoint::new_unchecked(poly, lo, hi, k, Sign::NoSign);
        }
        let sign_lo = poly.sign_at_fraction(&lo, &den);
        AlgebraicEndpoint::new_unchecked(poly, lo, hi, k, sign_lo)
    }

    /// The negated root.
    pub fn negated(&self) -> AlgebraicEndpoint {
        let s = self.snapshot();
        let poly = self.poly().reflect().normalized();
        let (lo, hi) = (-&s.hi, -&s.lo);
        if lo == hi {
            return AlgebraicEndpoint::new_unchecked(poly, lo, hi, s.k, Sign::NoSign);
        }
        let sign_lo = poly.sign_at_fraction(&lo, &(BigInt::one() << s.k as usize));
        AlgebraicEndpoint::new_unchecked(poly, lo, hi, s.k, sign_lo)
    }

    /// Sign of `q` at the root. Zero is detected through `gcd(q, poly)`;
    /// otherwise the isolator is refined until `q` has constant sign on it.
    pub fn sign_of(&self, q: &IntPoly) -> Result<Sign> {
        if q.is_zero() {
            return Ok(Sign::NoSign);
        }
        if q.is_constant() {
            return Ok(q.leading().sign());
        }
        let mut bits = 16;
        let mut gcd_checked = false;
        loop {
            let s = {
                self.refine_to_bits(bits);
                self.snapshot()
            };
            if s.is_point() {
                return Ok(q.sign_at(&s.lo_q()));
            }
            let (l, h) = q.eval_dyadic_range(&s.lo, &s.hi, s.k);
            if l.is_positive() {
                return Ok(Sign::Plus);
            }
            if h.is_negative() {
                return Ok(Sign::Minus);
            }
            if bits >= DEFAULT_BITS && !gcd_checked {
                let g = q.gcd(self.poly());
                if !g.is_constant() {
                    let den = BigInt::one() << s.k as usize;
                    let (sl, sh) = (g.sign_at_fraction(&s.lo, &den), g.sign_at_fraction(&s.hi, &den));
                    if sl != sh {
                        return Ok(Sign::NoSign);
                    }
                }
                gcd_checked = true;
            }
            if bits >= MAX_BITS {
                return Err(Error::RefinementBudget { bits });
            }
            bits *= 2;
        }
    }
}

impl fmt::Debug for AlgebraicEndpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.snapshot();
        write!(f, "root({} in ({}, {}))", self.poly(), s.lo_q(), s.hi_q())
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// A point of the real line as used by interval endpoints.
#[derive(Clone)]
pub enum Endpoint {
    Rational(Rational),
    Algebraic(AlgebraicEndpoint),
}

impl Endpoint {
    pub fn int(v: i64) -> Self {
        Endpoint::Rational(Rational::from_integer(v.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Endpoint::Rational(Rational::new(n.into(), d.into()))
    }

    /// Exact value when the point is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Endpoint::Rational(r) => Some(r.clone()),
            Endpoint::Algebraic(a) => a.rational_value(),
        }
    }

    pub fn cmp_exact(&self, other: &Endpoint) -> Result<Ordering> {
        Ok(match (self, other) {
            (Endpoint::Rational(a), Endpoint::Rational(b)) => a.cmp(b),
            (Endpoint::Algebraic(a), Endpoint::Rational(b)) => a.cmp_rational(b),
            (Endpoint::Rational(a), Endpoint::Algebraic(b)) => b.cmp_rational(a).reverse(),
            (Endpoint::Algebraic(a), Endpoint::Algebraic(b)) => a.cmp_exact(b)?,
        })
    }

    pub fn max_exact(&self, other: &Endpoint) -> Result<Endpoint> {
        Ok(if self.cmp_exact(other)? == Ordering::Less { other.clone() } else { self.clone() })
    }

    /// Rational enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        match self {
            Endpoint::Rational(r) => RatInterval::point(r.clone()),
            Endpoint::Algebraic(a) => a.enclosure(bits),
        }
    }

    /// Canonical grid enclosure numerators over `2^bits`; a function of
    /// the value alone.
    pub fn grid_enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        match self {
            Endpoint::Rational(r) => {
                let scaled = r.numer() << bits as usize;
                let (q, rem) = scaled.div_mod_floor(r.denom());
                if rem.is_zero() { (q.clone(), q) } else { (q.clone(), q + 1) }
            }
            Endpoint::Algebraic(a) => a.grid_enclosure(bits),
        }
    }

    pub fn shifted(&self, d: &Dyadic) -> Endpoint {
        match self {
            Endpoint::Rational(r) => Endpoint::Rational(r + d.to_rational()),
            Endpoint::Algebraic(a) => match a.exact_value() {
                Some(v) => Endpoint::Rational(v + d.to_rational()),
                None => Endpoint::Algebraic(a.shifted(d)),
            },
        }
    }

    pub fn negated(&self) -> Endpoint {
        match self {
            Endpoint::Rational(r) => Endpoint::Rational(-r),
            Endpoint::Algebraic(a) => Endpoint::Algebraic(a.negated()),
        }
    }

    /// Sign of `q` at this point.
    pub fn sign_of(&self, q: &IntPoly) -> Result<Sign> {
        match self {
            Endpoint::Rational(r) => Ok(q.sign_at(r)),
            Endpoint::Algebraic(a) => a.sign_of(q),
        }
    }

    /// Enclosure of `q` at this point with width at most `tol`.
    pub fn eval_enclosure(&self, q: &IntPoly, tol: &Rational) -> Result<RatInterval> {
        match self {
            Endpoint::Rational(r) => Ok(RatInterval::point(q.eval(r))),
            Endpoint::Algebraic(a) => {
                let mut bits = DEFAULT_BITS;
                loop {
                    let e = a.enclosure(bits);
                    let (lo, hi) = q.eval_range(&e.lo, &e.hi);
                    if &hi - &lo <= *tol {
                        return Ok(RatInterval::new(lo, hi));
                    }
                    if bits >= MAX_BITS {
                        return Err(Error::RefinementBudget { bits });
                    }
                    bits *= 2;
                }
            }
        }
    }

    fn has_open_isolator(&self) -> bool {
        matches!(self, Endpoint::Algebraic(a) if a.exact_value().is_none())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Rational(r) => rational_to_f64(r),
            Endpoint::Algebraic(a) => a.to_f64(),
        }
    }

    /// Rational strictly between `self < other`.
    pub fn rational_between(&self, other: &Endpoint) -> Result<Rational> {
        let mut bits = 8;
        loop {
            let a = self.enclosure(bits);
            let b = other.enclosure(bits);
            if a.hi < b.lo {
                return Ok(simplest_between(&a.hi, &b.lo));
            }
            if a.hi == b.lo && (self.has_open_isolator() && other.has_open_isolator()) {
                return Ok(a.hi);
            }
            if bits >= MAX_BITS {
                return Err(Error::RefinementBudget { bits });
            }
            bits *= 2;
        }
    }
}

/// A short dyadic in the open interval `(a, b)`, `a < b`.
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    let mut bits = 0u32;
    loop {
        let c = Dyadic::floor_of(a, bits).to_rational() + Rational::new(BigInt::one(), BigInt::one() << bits as usize);
        if c > *a && c < *b {
            return c;
        }
        bits += 1;
    }
}

impl fmt::Debug for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Rational(r) => write!(f, "{r}"),
            Endpoint::Algebraic(a) => write!(f, "{a:?}"),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Rational(r) => write!(f, "{r}"),
            Endpoint::Algebraic(a) => write!(f, "{:.12}", a.to_f64()),
        }
    }
}

impl From<Rational> for Endpoint {
    fn from(r: Rational) -> Self {
        Endpoint::Rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> AlgebraicEndpoint {
        // x^2 - 2 on (1, 3/2)
        AlgebraicEndpoint::new(IntPoly::from_i64s(&[-2, 0, 1]), 2.into(), 3.into(), 1).unwrap()
    }

    #[test]
    fn refinement_converges_to_sqrt2() {
        let a = sqrt2();
        let e = a.enclosure(64);
        assert!(e.width() <= Rational::new(1.into(), BigInt::one() << 64));
        assert!((a.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_isolating_interval() {
        assert!(AlgebraicEndpoint::new(IntPoly::from_i64s(&[-2, 0, 1]), 0.into(), 1.into(), 0).is_err());
    }

    #[test]
    fn equality_detected_through_gcd() {
        // sqrt2 as a root of (x^2 - 2)(x - 3) = x^3 - 3x^2 - 2x + 6
        let other = AlgebraicEndpoint::new(IntPoly::from_i64s(&[6, -2, -3, 1]), 1.into(), 2.into(), 0).unwrap();
        assert_eq!(sqrt2().cmp_exact(&other).unwrap(), Ordering::Equal);
        let sqrt3 = AlgebraicEndpoint::new(IntPoly::from_i64s(&[-3, 0, 1]), 1.into(), 2.into(), 0).unwrap();
        assert_eq!(sqrt2().cmp_exact(&sqrt3).unwrap(), Ordering::Less);
    }

    #[test]
    fn rational_comparisons_are_exact() {
        let a = sqrt2();
        assert_eq!(a.cmp_rational(&Rational::new(141.into(), 100.into())), Ordering::Greater);
        assert_eq!(a.cmp_rational(&Rational::new(142.into(), 100.into())), Ordering::Less);
        // root equal to a rational
        let half = AlgebraicEndpoint::new(IntPoly::from_i64s(&[-1, 2]), 0.into(), 1.into(), 0).unwrap();
        assert_eq!(half.cmp_rational(&Rational::new(1.into(), 2.into())), Ordering::Equal);
    }

    #[test]
    fn grid_enclosure_depends_only_on_value() {
        let a = sqrt2();
        let b = sqrt2();
        b.refine_to_bits(300);
        assert_eq!(a.grid_enclosure(40), b.grid_enclosure(40));
        // rational root landing on the grid
        let half = AlgebraicEndpoint::new(IntPoly::from_i64s(&[-1, 2]), 0.into(), 1.into(), 0).unwrap();
        assert_eq!(half.grid_enclosure(3), (4.into(), 4.into()));
        let third = AlgebraicEndpoint::new(IntPoly::from_i64s(&[-1, 3]), 0.into(), 1.into(), 0).unwrap();
        let r = Endpoint::Rational(Rational::new(1.into(), 3.into()));
        assert_eq!(third.grid_enclosure(20), r.grid_enclosure(20));
    }

    #[test]
    fn shift_and_negate() {
        let a = sqrt2();
        let s = a.shifted(&Dyadic::new(1.into(), -2));
        assert!((s.to_f64() - (std::f64::consts::SQRT_2 + 0.25)).abs() < 1e-14);
        let n = a.negated();
        assert!((n.to_f64() + std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn sign_of_polynomial_at_root() {
        let a = sqrt2();
        assert_eq!(a.sign_of(&IntPoly::from_i64s(&[-1, 0, 0, 1])).unwrap(), Sign::Plus);
        // x^4 - 4 vanishes at sqrt2
        assert_eq!(a.sign_of(&IntPoly::from_i64s(&[-4, 0, 0, 0, 1])).unwrap(), Sign::NoSign);
    }
}
