//! Irreducibility over the integers for small-degree primitive polynomials.
//!
//! A rational-root test finds linear factors. For degree four and above,
//! factors of degree `m` in `2..=deg/2` are searched directly: the leading
//! and constant coefficients run over divisors, and the middle coefficients
//! over `|b_j| <= C(m, j) * ||P||_2`, which holds for any integer factor
//! because its Mahler measure is at most that of `P`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};

use super::{FamilySpec, IntPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    Irreducible,
    /// Two factors of positive degree whose product is the input.
    Reducible(IntPoly, IntPoly),
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Factorization::Irreducible)
    }
}

/// Decides irreducibility of a primitive polynomial of positive degree,
/// returning a witness factorization when it is reducible.
pub fn factorize(p: &IntPoly) -> Result<Factorization> {
    let d = match p.degree() {
        None | Some(0) => return Err(Error::Precondition("irreducibility needs degree >= 1".into())),
        Some(d) => d,
    };
    let content = p.content();
    if content != BigInt::from(1) {
        return Err(Error::NotPrimitive(format!("{p} has content {content}")));
    }
    if d == 1 {
        return Ok(Factorization::Irreducible);
    }
    let c = p.to_i64s().ok_or_else(|| Error::Precondition(format!("{p} has coefficients beyond i64")))?;
    if c[0] == 0 {
        let x = IntPoly::monomial(1);
        let rest = p.div_exact(&x).expect("x divides P when a_0 = 0");
        return Ok(Factorization::Reducible(x, rest));
    }
    let lead = c[d];
    for q in divisors(lead.unsigned_abs()) {
        for r in divisors(c[0].unsigned_abs()) {
            for s in [1i64, -1] {
                let f = IntPoly::from_i64s(&[-(s * r as i64), q as i64]);
                if let Some(g) = p.div_exact(&f) {
                    return Ok(Factorization::Reducible(f, g));
                }
            }
        }
    }
    let norm2: BigInt = p.coeffs().iter().map(|a| a * a).sum();
    for m in 2..=d / 2 {
        if let Some((f, g)) = search_factor(p, &c, m, &norm2) {
            return Ok(Factorization::Reducible(f, g));
        }
    }
    Ok(Factorization::Irreducible)
}

pub fn is_irreducible(p: &IntPoly) -> Result<bool> {
    Ok(factorize(p)?.is_irreducible())
}

fn search_factor(p: &IntPoly, c: &[i64], m: usize, norm2: &BigInt) -> Option<(IntPoly, IntPoly)> {
    let d = c.len() - 1;
    // |b_j| <= C(m, j) * ||P||_2
    let bounds: Vec<i64> = (1..m)
        .map(|j| {
            let b = binom(m, j);
            (norm2 * BigInt::from(b * b)).sqrt().to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    for lead in divisors(c[d].unsigned_abs()) {
        for c0 in divisors(c[0].unsigned_abs()) {
            for s in [1i64, -1] {
                let mut b = vec![0i64; m + 1];
                b[0] = s * c0 as i64;
                b[m] = lead as i64;
                for j in 1..m {
                    b[j] = -bounds[j - 1];
                }
                loop {
                    let f = IntPoly::from_i64s(&b);
                    if let Some(g) = p.div_exact(&f) {
                        return Some((f, g));
                    }
                    // odometer over the middle coefficients
                    let mut j = 1;
                    while j < m {
                        if b[j] < bounds[j - 1] {
                            b[j] += 1;
                            break;
                        }
                        b[j] = -bounds[j - 1];
                        j += 1;
                    }
                    if j == m {
                        break;
                    }
                }
            }
        }
    }
    None
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn divisors(v: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=v.sqrt()).filter(|i| v % i == 0).flat_map(|i| [i, v / i]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `#P*_n(H)`: primitive irreducible polynomials of degree exactly `n` and
/// height exactly `H`, counting `P` and `-P` separately.
pub fn count_primitive_irreducible(n: usize, h: u64) -> Result<u64> {
    let mut count = 0u64;
    for c in FamilySpec::full(n, h).iter() {
        if c[n] == 0 || c.iter().fold(0i64, |g, &a| g.gcd(&a)) != 1 {
            continue;
        }
        if is_irreducible(&IntPoly::from_i64s(&c))? {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether `coeffs` (lowest first) describe a primitive irreducible
/// polynomial of exact degree `n`.
pub fn is_primitive_irreducible(coeffs: &[i64], n: usize) -> Result<bool> {
    if coeffs.get(n).map_or(true, |a| a.is_zero()) || coeffs.iter().fold(0i64, |g, &a| g.gcd(&a)) != 1 {
        return Ok(false);
    }
    is_irreducible(&IntPoly::from_i64s(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn quadratic_examples() {
        assert!(is_irreducible(&p(&[-2, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&p(&[1, 1, 1])).unwrap());
        assert!(matches!(factorize(&p(&[4, 0, 2])), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn quartic_without_rational_roots() {
        // (x^2 + 1)(x^2 - 2)
        let prod = &p(&[1, 0, 1]) * &p(&[-2, 0, 1]);
        match factorize(&prod).unwrap() {
            Factorization::Reducible(f, g) => assert_eq!(&f * &g, prod),
            Factorization::Irreducible => panic!("missed quadratic factor"),
        }
        // x^4 + 1 and x^4 - 10x^2 + 1 are irreducible
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1])).unwrap());
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])).unwrap());
        // (x^2 + x + 1)(2x^3 - 3x + 7)
        let quint = &p(&[1, 1, 1]) * &p(&[7, -3, 0, 2]);
        assert!(!is_irreducible(&quint).unwrap());
    }

    #[test]
    fn primitive_irreducible_counts() {
        assert_eq!(count_primitive_irreducible(2, 1).unwrap(), 10);
        assert_eq!(count_primitive_irreducible(1, 1).unwrap(), 6);
    }
}
