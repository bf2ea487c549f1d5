//! Conservative floating-point rejection of polynomials whose solution set
//! is certainly empty.
//!
//! Each cell `[c - r, c + r]` of a bisection of the interval gets a range
//! for `|f|` from the Taylor expansion at `c`, widened by a margin far above
//! the rounding error of the computation. A constraint that fails on every
//! cell proves the exact solution set empty; anything else is passed on to
//! the exact solver.

/// The condition `lo <= |f(x)| < hi` with conservative float bounds:
/// `lo` must not exceed the true lower threshold and `hi` must not be
/// below the true upper one.
#[derive(Clone, Debug)]
pub struct AbsBand {
    coeffs: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl AbsBand {
    /// `coeffs` lowest degree first; they must be exactly representable.
    pub fn new(coeffs: Vec<f64>, lo: f64, hi: f64) -> Self {
        AbsBand { coeffs, lo, hi }
    }

    /// Range of `|f|` on `[c - r, c + r]`, widened for rounding.
    fn range(&self, c: f64, r: f64, scale: f64) -> (f64, f64) {
        let t = taylor(&self.coeffs, c);
        let mut tail = 0.0;
        let mut rp = 1.0;
        for tj in &t[1..] {
            rp *= r;
            tail += tj.abs() * rp;
        }
        let mut weight = 0.0;
        let mut mp = 1.0;
        for a in &self.coeffs {
            weight += a.abs() * mp;
            mp *= scale;
        }
        let err = 1e-10 * weight + 1e-300;
        let v = t[0].abs();
        ((v - tail - err).max(0.0), v + tail + err)
    }

    fn impossible_on(&self, c: f64, r: f64, scale: f64) -> bool {
        let (lo, hi) = self.range(c, r, scale);
        lo >= self.hi || hi < self.lo
    }
}

/// Taylor coefficients of `f` at `c`.
fn taylor(coeffs: &[f64], c: f64) -> Vec<f64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            a[j] += a[j + 1] * c;
        }
    }
    if a.is_empty() {
        a.push(0.0);
    }
    a
}

/// `false` only if no `x` in `[a, b]` satisfies every band.
///
/// `a` and `b` must enclose the real interval of interest.
pub fn may_satisfy(bands: &[AbsBand], a: f64, b: f64, depth: u32) -> bool {
    let scale = a.abs().max(b.abs()) + 1.0;
    may_satisfy_cell(bands, a, b, depth, scale)
}

fn may_satisfy_cell(bands: &[AbsBand], a: f64, b: f64, depth: u32, scale: f64) -> bool {
    let c = 0.5 * (a + b);
    // a little extra radius covers the rounding of c
    let r = 0.5 * (b - a) * (1.0 + 1e-12) + 1e-300;
    if bands.iter().any(|band| band.impossible_on(c, r, scale)) {
        return false;
    }
    if depth == 0 {
        return true;
    }
    may_satisfy_cell(bands, a, c, depth - 1, scale) || may_satisfy_cell(bands, c, b, depth - 1, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_only_empty_sets() {
        // x^2 - 2 on [1, 2]: |P| < 1/10 near sqrt 2
        let p = vec![-2.0, 0.0, 1.0];
        assert!(may_satisfy(&[AbsBand::new(p.clone(), 0.0, 0.1)], 1.0, 2.0, 6));
        // x^2 + 1 never below 1/2
        assert!(!may_satisfy(&[AbsBand::new(vec![1.0, 0.0, 1.0], 0.0, 0.5)], -1.0, 1.0, 6));
        // |2x| >= 2 on [1, 2], so |P'| < 1 is impossible
        assert!(!may_satisfy(&[AbsBand::new(vec![0.0, 2.0], 0.0, 1.0)], 1.0, 2.0, 6));
        // joint: |x^2 - 2| < 1/10 and |2x| < 2.5 cannot both hold on [1, 2]
        let both = [AbsBand::new(p, 0.0, 0.1), AbsBand::new(vec![0.0, 2.0], 0.0, 2.5)];
        assert!(!may_satisfy(&both, 1.0, 2.0, 8));
    }
}
