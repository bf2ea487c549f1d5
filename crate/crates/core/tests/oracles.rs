//! Values computed by independent brute-force programs and frozen here.

use dioph_core::casework::{Case, CaseConfig, PsiSpec};
use dioph_core::experiments::{best_approx, count_sweep, measure_case, measure_tau, RunOptions, Target};
use dioph_core::polynomials::count_primitive_irreducible;
use dioph_core::{AlgebraicEndpoint, IntPoly, Interval, Rational};
use num_traits::ToPrimitive;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn cfg(n: usize, i: Interval, psi: PsiSpec) -> CaseConfig {
    CaseConfig::new(n, q(1, 10), i, psi, q(1, 1 << 40)).unwrap()
}

#[test]
fn primitive_irreducible_counts() {
    for (n, h, want) in [(1, 1, 6), (2, 1, 10), (2, 2, 44), (2, 3, 132), (2, 5, 452), (3, 2, 248)] {
        assert_eq!(count_primitive_irreducible(n, h).unwrap(), want, "n={n} H={h}");
    }
}

#[test]
fn count_rows() {
    let opts = RunOptions::default();
    let row = &count_sweep(2, 1..=1, &PsiSpec::pow(3), &opts).unwrap()[0];
    assert_eq!((row.total, row.primitive_irreducible), (26, 10));
    assert_eq!(row.per_k, vec![8, 8, 8]);
    let row = &count_sweep(1, 3..=3, &PsiSpec::pow(3), &opts).unwrap()[0];
    assert_eq!(row.total, 24);
    assert_eq!(row.per_k, vec![2, 2]);
}

#[test]
fn big_case_measures() {
    let opts = RunOptions::default();
    let c = cfg(1, Interval::closed_ratio((1, 4), (3, 4)), PsiSpec::pow(2));
    assert_eq!(measure_case(&c, Case::Big, 1, &opts).unwrap().measure.exact, Some(q(1, 2)));
    let c = cfg(2, Interval::closed_ratio((1, 1), (2, 1)), PsiSpec::pow(3));
    let m = measure_case(&c, Case::Big, 4, &opts).unwrap().measure;
    // grid oracle with 2e6 cells
    assert!((m.mid_f64() - 0.137_258_431).abs() < 2e-6, "{}", m.mid_f64());
}

#[test]
fn small_block_measures() {
    let opts = RunOptions::default();
    let c = cfg(2, Interval::closed_ratio((1, 1), (2, 1)), PsiSpec::pow(3));
    // grid oracle with 2e5 cells on [1, 2]
    for (m, want) in [(1, 0.466_517_667), (2, 1.0), (3, 0.918_625_407), (4, 0.718_136_409)] {
        let got = measure_tau(&c, m, &opts).unwrap().measure.mid_f64();
        assert!((got - want).abs() < 5e-5, "m={m}: {got} vs {want}");
    }
}

fn cube_root_two() -> Target {
    Target::Algebraic(AlgebraicEndpoint::new(IntPoly::from_i64s(&[-2, 0, 0, 1]), 5.into(), 6.into(), 2).unwrap())
}

#[test]
fn best_approximations() {
    let opts = RunOptions::default();
    let third = best_approx(&Target::Rational(q(1, 3)), 1, 3, &opts).unwrap();
    assert_eq!(third.best.hi, q(0, 1));
    let sqrt2 = Target::Algebraic(AlgebraicEndpoint::new(IntPoly::from_i64s(&[-2, 0, 1]), 5.into(), 6.into(), 2).unwrap());
    let r = best_approx(&sqrt2, 2, 2, &opts).unwrap();
    assert_eq!(r.best.hi, q(0, 1));
    assert_eq!(r.argmin, IntPoly::from_i64s(&[-2, 0, 1]));
    // exhaustive search at 50 digits
    for (h, want, argmin) in [
        (10, 0.004_564_212_019_450_519, [-7, -2, 6]),
        (100, 0.000_020_832_031_358_496_58, [-1, -100, 80]),
    ] {
        let r = best_approx(&cube_root_two(), 2, h, &opts).unwrap();
        let (lo, hi) = (r.best.lo.to_f64().unwrap(), r.best.hi.to_f64().unwrap());
        assert!(lo <= want * (1.0 + 1e-12) && want * (1.0 - 1e-12) <= hi, "H={h}: [{lo}, {hi}]");
        assert_eq!(r.argmin, IntPoly::from_i64s(&argmin));
    }
}
