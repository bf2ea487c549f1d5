//! Dense integer polynomials.
//!
//! Coefficients are stored lowest degree first and trimmed, so two
//! representations of the same polynomial always compare equal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numkit::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// `H(P)`: the largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> IntPoly {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut result = IntPoly::constant(BigInt::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let d = match self.degree() {
            None => return Rational::zero(),
            Some(d) => d,
        };
        let v = self.eval_homogeneous(x.numer(), x.denom());
        Rational::new(v, x.denom().pow(d as u32))
    }

    pub fn eval_i64_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + bigint_to_f64(c))
    }

    /// `den^d * P(num/den)` where `d` is the degree; exact.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut iter = self.coeffs.iter().rev();
        let mut acc = match iter.next() {
            None => return BigInt::zero(),
            Some(c) => c.clone(),
        };
        let mut pw = BigInt::one();
        for c in iter {
            pw *= den;
            acc = acc * num + c * &pw;
        }
        acc
    }

    /// Sign of `P(num/den)` for `den > 0`.
    pub fn sign_at_fraction(&self, num: &BigInt, den: &BigInt) -> Sign {
        self.eval_homogeneous(num, den).sign()
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        self.sign_at_fraction(x.numer(), x.denom())
    }

    /// Enclosure of `2^(k d) P(x)` for `x` in `[lo, hi] / 2^k` by Horner
    /// interval arithmetic.
    pub fn eval_dyadic_range(&self, lo: &BigInt, hi: &BigInt, k: u32) -> (BigInt, BigInt) {
        let mut iter = self.coeffs.iter().rev();
        let lead = match iter.next() {
            None => return (BigInt::zero(), BigInt::zero()),
            Some(c) => c.clone(),
        };
        let (mut al, mut ah) = (lead.clone(), lead);
        let mut shift = 0usize;
        for c in iter {
            shift += k as usize;
            let p = [&al * lo, &al * hi, &ah * lo, &ah * hi];
            let mn = p.iter().min().unwrap().clone();
            let mx = p.iter().max().unwrap().clone();
            let term = c << shift;
            al = mn + &term;
            ah = mx + term;
        }
        (al, ah)
    }

    /// Enclosure of `P` over the rational interval `[lo, hi]`.
    pub fn eval_range(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut iter = self.coeffs.iter().rev();
        let lead = match iter.next() {
            None => return (Rational::zero(), Rational::zero()),
            Some(c) => Rational::from_integer(c.clone()),
        };
        let (mut al, mut ah) = (lead.clone(), lead);
        for c in iter {
            let p = [&al * lo, &al * hi, &ah * lo, &ah * hi];
            let mn = p.iter().min().unwrap().clone();
            let mx = p.iter().max().unwrap().clone();
            let c = Rational::from_integer(c.clone());
            al = mn + &c;
            ah = mx + c;
        }
        (al, ah)
    }

    /// Content (positive gcd of coefficients) and primitive part.
    pub fn content_and_primitive(&self) -> Result<(BigInt, IntPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.content();
        Ok((g.clone(), IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient; zero stays zero.
    pub fn normalized(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let g = self.content();
        let g = if self.leading().is_negative() { -g } else { g };
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let lc = d.leading();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading();
            let shift = rd - dd;
            let mut next = r.scale(&lc).coeffs;
            for (i, c) in d.coeffs.iter().enumerate() {
                next[i + shift] -= &lr * c;
            }
            r = IntPoly::new(next);
        }
        r
    }

    /// Exact quotient over the integers, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let sd = match self.degree() {
            None => return Some(IntPoly::zero()),
            Some(sd) => sd,
        };
        if sd < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let (mut f, mut g) = if self.coeffs.len() >= other.coeffs.len() {
            (self.normalized(), other.normalized())
        } else {
            (other.normalized(), self.normalized())
        };
        while !g.is_zero() {
            let r = f.pseudo_rem(&g);
            f = g;
            g = r.normalized();
        }
        f.normalized()
    }

    /// `P / gcd(P, P')`, normalized; the zero polynomial maps to zero.
    pub fn square_free_part(&self) -> IntPoly {
        if self.is_constant() {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.normalized();
        }
        self.normalized()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .normalized()
    }

    /// `P(x + c)`.
    pub fn taylor_shift(&self, c: &BigInt) -> IntPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        if c.is_zero() || n <= 1 {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        IntPoly::new(a)
    }

    /// `P(2^e x)`.
    pub fn scale_var_pow2(&self, e: u32) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (e as usize * i))
                .collect(),
        )
    }

    /// `P(-x)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Primitive integer polynomial whose roots are the roots of `P`
    /// shifted by `+ m / 2^s`.
    pub fn shift_roots_dyadic(&self, m: &BigInt, s: u32) -> IntPoly {
        let d = match self.degree() {
            None => return IntPoly::zero(),
            Some(d) => d,
        };
        // 2^(s d) P(y / 2^s), then y -> y - m, then y -> 2^s x.
        let hat = IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (s as usize * (d - i)))
                .collect(),
        );
        hat.taylor_shift(&-m).scale_var_pow2(s).normalized()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(bigint_to_f64).collect()
    }

    /// Coefficients as `i64` when all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Lexicographic order on coefficient vectors, leading coefficient first,
/// for a fixed representation length `n + 1`.
pub fn lex_cmp(a: &IntPoly, b: &IntPoly, n: usize) -> Ordering {
    for i in (0..=n).rev() {
        match a.coeff(i).cmp(&b.coeff(i)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p(&[-2, 0, 1]).eval(&q(3, 2)), q(1, 4));
        assert_eq!(p(&[1, -3, 0, 2]).eval(&q(2, 1)), q(11, 1));
        let (lo, hi) = p(&[-2, 0, 1]).eval_range(&q(141, 100), &q(142, 100));
        assert!(lo < Rational::zero() && hi > Rational::zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[-2, 0, 1]).derivative(), p(&[0, 2]));
        assert_eq!(p(&[0, 0, 0, 1]).nth_derivative(3), p(&[6]));
        assert_eq!(p(&[5]).derivative(), IntPoly::zero());
        // P^(n) = n! a_n
        assert_eq!(p(&[3, 1, 4, 1, -5]).nth_derivative(4), p(&[-120]));
    }

    #[test]
    fn content_examples() {
        assert_eq!(p(&[4, 0, 2]).content_and_primitive().unwrap(), (2.into(), p(&[2, 0, 1])));
        assert_eq!(p(&[-2, 0, 1]).content_and_primitive().unwrap(), (1.into(), p(&[-2, 0, 1])));
        assert_eq!(p(&[0, -9, 0, 6]).content_and_primitive().unwrap(), (3.into(), p(&[0, -3, 0, 2])));
        assert_eq!(IntPoly::zero().content_and_primitive(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcd_and_square_free() {
        // (x-1)^2 (x-2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-2, 1]);
        assert_eq!(f.square_free_part(), p(&[2, -3, 1]));
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), p(&[1]));
    }

    #[test]
    fn shifts() {
        let f = p(&[-2, 0, 1]);
        assert_eq!(f.taylor_shift(&1.into()), p(&[-1, 2, 1]));
        // roots of x^2 - 2 moved by +1/2: (x - 1/2)^2 - 2 -> 4x^2 - 4x - 7
        assert_eq!(f.shift_roots_dyadic(&1.into(), 1), p(&[-7, -4, 4]));
        assert_eq!(p(&[1, 2, 3]).reflect(), p(&[1, -2, 3]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(p(&[1, -3, 0, 2]).to_string(), "2x^3 - 3x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }
}
