use dioph_core::casework::{
    alpha_cover, edge_strips, gamma_and_expansions, sigma_case, Case, CaseConfig, PsiSpec,
};
use dioph_core::experiments::{best_approx, case_union, measure_case, RunOptions, Target};
use dioph_core::numkit::{Dyadic, Threshold};
use dioph_core::polynomials::{factorize, FamilySpec, Factorization};
use dioph_core::realroots::{min_abs_on, roots_in, solve_abs_lt, solve_threshold, sturm_count};
use dioph_core::{AlgebraicEndpoint, Endpoint, IntPoly, Interval, IntervalUnion, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

fn tiny() -> Rational {
    q(1, 1 << 40)
}

fn nonconstant() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-10i64..=10, 2..=5).prop_filter("degree >= 1", |c| c[1..].iter().any(|&a| a != 0))
}

/// Degree 1 or 2, so products stay within the quartic range of the factorizer.
fn small_factor() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 2..=3).prop_filter("degree >= 1", |c| c[1..].iter().any(|&a| a != 0))
}

/// `[a/4, b/4]` with `a < b`.
fn quarter_interval() -> impl Strategy<Value = (i64, i64)> {
    (-8i64..8, 1i64..8).prop_map(|(a, w)| (a, a + w))
}

fn interval(a: i64, b: i64) -> Interval {
    Interval::closed(q(a, 4), q(b, 4)).unwrap()
}

/// Midpoint rule for `|{x in [a, b] : |P(x)| < θ}|`.
fn grid_measure(c: &[i64], theta: f64, a: f64, b: f64, n: usize) -> f64 {
    let step = (b - a) / n as f64;
    let hits = (0..n)
        .filter(|&i| {
            let x = a + (i as f64 + 0.5) * step;
            c.iter().rev().fold(0.0, |acc, &k| acc * x + k as f64).abs() < theta
        })
        .count();
    hits as f64 * step
}

fn medium_cfg() -> CaseConfig {
    CaseConfig::new(2, q(1, 10), Interval::closed_ratio((1, 2), (2, 1)), PsiSpec::power_law(q(1, 1), q(3, 2)).unwrap(), tiny())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent(c in nonconstant(), s in -5i64..=5) {
        prop_assume!(s != 0);
        let p = IntPoly::from_i64s(&c).scale(&BigInt::from(s));
        let n = p.normalized();
        prop_assert_eq!(n.normalized(), n.clone());
        prop_assert!(n.leading().is_positive());
        prop_assert_eq!(n.content(), BigInt::from(1));
    }

    #[test]
    fn derivative_is_linear(a in nonconstant(), b in nonconstant(), s in -4i64..=4) {
        let (p, r) = (IntPoly::from_i64s(&a), IntPoly::from_i64s(&b));
        let s = BigInt::from(s);
        let lhs = (&p.scale(&s) + &r).derivative();
        let rhs = &p.derivative().scale(&s) + &r.derivative();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solver_matches_grid(c in nonconstant(), t in 1i64..=40, (a, b) in quarter_interval()) {
        let theta = q(t, 8);
        let set = solve_abs_lt(&IntPoly::from_i64s(&c), &theta, &interval(a, b)).unwrap();
        let m = set.measure(&tiny()).unwrap().mid_f64();
        let g = grid_measure(&c, f(&theta), a as f64 / 4.0, b as f64 / 4.0, 200_000);
        // each of at most 2 deg boundary crossings costs one grid step
        prop_assert!((m - g).abs() <= 1e-4, "exact {m} grid {g}");
    }

    #[test]
    fn measure_is_additive(c in nonconstant(), d in nonconstant(), (a, b) in quarter_interval()) {
        let i = interval(a, b);
        let x = solve_abs_lt(&IntPoly::from_i64s(&c), &q(1, 2), &i).unwrap();
        let y = solve_abs_lt(&IntPoly::from_i64s(&d), &q(1, 3), &i).unwrap();
        let tol = tiny();
        let m = |u: &IntervalUnion| u.measure(&tol).unwrap();
        let (mu, mi, mx, my) = (m(&x.union(&y).unwrap()), m(&x.intersect(&y).unwrap()), m(&x), m(&y));
        let lhs = (mu.lo() + mi.lo(), mu.hi() + mi.hi());
        let rhs = (mx.lo() + my.lo(), mx.hi() + my.hi());
        prop_assert!(lhs.0 <= rhs.1 && rhs.0 <= lhs.1);
    }

    #[test]
    fn dilation_contains_original(c in nonconstant(), (a, b) in quarter_interval(), e in 1i64..=8) {
        let i = interval(a, b);
        let set = solve_abs_lt(&IntPoly::from_i64s(&c), &q(1, 4), &i).unwrap();
        let grown = set.dilate(&Dyadic::new(BigInt::from(1), -e), &i).unwrap();
        prop_assert!(set.is_subset_of(&grown).unwrap());
        prop_assert!(grown.measure(&tiny()).unwrap().hi() >= set.measure(&tiny()).unwrap().lo());
    }

    #[test]
    fn isolation_agrees_with_sturm(c in nonconstant(), (a, b) in quarter_interval()) {
        let p = IntPoly::from_i64s(&c);
        let half_open = Interval::new(Endpoint::Rational(q(a, 4)), Endpoint::Rational(q(b, 4)), false, true).unwrap();
        let isolated = roots_in(&p, &half_open).unwrap();
        prop_assert_eq!(isolated.len(), sturm_count(&p, &q(a, 4), &q(b, 4)));
        for r in &isolated {
            prop_assert!(p.derivative().is_zero() || r.sign_of(&p).unwrap() == num_bigint::Sign::NoSign);
        }
    }

    #[test]
    fn min_abs_is_a_lower_bound(c in nonconstant(), (a, b) in quarter_interval()) {
        let p = IntPoly::from_i64s(&c);
        let m = min_abs_on(&p, &interval(a, b), &tiny()).unwrap();
        prop_assert!(!m.value.lo.is_negative());
        for j in 0..=16 {
            let x = q(a, 4) + q(b - a, 4) * q(j, 16);
            prop_assert!(m.value.lo <= p.eval(&x).abs());
        }
    }

    #[test]
    fn cases_partition_the_threshold_set(c in prop::collection::vec(-6i64..=6, 2..=4), (a, b) in (1i64..6, 1i64..6)) {
        let p = IntPoly::from_i64s(&c);
        prop_assume!(!p.is_constant());
        let h = p.height().to_u64().unwrap();
        let i = Interval::closed(q(a, 2), q(a + b, 2)).unwrap();
        let cfg = CaseConfig::new(c.len() - 1, q(1, 10), i.clone(), PsiSpec::pow(2), tiny()).unwrap();
        let tol = tiny();
        let mut lo = Rational::from_integer(0.into());
        let mut hi = lo.clone();
        let mut pieces = Vec::new();
        for case in Case::ALL {
            let s = sigma_case(&p, &cfg, case, h).unwrap().set;
            let m = s.measure(&tol).unwrap();
            lo += m.lo();
            hi += m.hi();
            pieces.push(s);
        }
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            prop_assert!(pieces[x].intersect(&pieces[y]).unwrap().is_empty());
        }
        let psi = Threshold::rational(q(1, (h * h) as i64));
        let whole = solve_threshold(&p, &psi, &i).unwrap().measure(&tol).unwrap();
        prop_assert!(lo <= whole.hi() && whole.lo() <= hi);
    }

    #[test]
    fn factor_witnesses_multiply_back(a in small_factor(), b in small_factor()) {
        let prod = (&IntPoly::from_i64s(&a) * &IntPoly::from_i64s(&b)).normalized();
        match factorize(&prod).unwrap() {
            Factorization::Reducible(f, g) => {
                prop_assert_eq!(&f * &g, prod);
                prop_assert!(f.degree().unwrap() >= 1 && g.degree().unwrap() >= 1);
            }
            Factorization::Irreducible => prop_assert!(false, "product reported irreducible"),
        }
    }

    #[test]
    fn dirichlet_bound_in_degree_one(h in 1u64..=1000, which in 0usize..3) {
        // sqrt 2 - 1, sqrt 3 - 1, cbrt 2 - 1: below 1, so the height is |a_1|
        let (poly, lo, hi) = [(vec![-1, 2, 1], 1, 2), (vec![-2, 2, 1], 2, 3), (vec![-1, 3, 3, 1], 1, 2)][which].clone();
        let x = Target::Algebraic(AlgebraicEndpoint::new(IntPoly::from_i64s(&poly), lo.into(), hi.into(), 2).unwrap());
        let rec = best_approx(&x, 1, h, &RunOptions::with_workers(1)).unwrap();
        prop_assert!(rec.best.hi < q(1, h as i64 + 1), "H={h} best {:?}", rec.best);
    }
}

#[test]
fn family_counts_match_closed_form() {
    for n in 1..=4usize {
        for h in 1..=12u64 {
            let spec = FamilySpec::full(n, h);
            let formula = (2 * h as u128 + 1).pow(n as u32 + 1) - (2 * h as u128 - 1).pow(n as u32 + 1);
            assert_eq!(spec.count(), formula);
            if n <= 3 && h <= 6 {
                assert_eq!(spec.iter().count() as u128, formula);
                assert!(spec.iter().all(|c| c.iter().map(|a| a.unsigned_abs()).max() == Some(h)));
            }
        }
    }
}

#[test]
fn medium_expansions_nest() {
    let cfg = medium_cfg();
    let h = 8;
    let mut checked = 0;
    for c in FamilySpec::full(2, h).iter() {
        let p = IntPoly::from_i64s(&c);
        if p.derivative().is_zero() {
            continue;
        }
        let s = sigma_case(&p, &cfg, Case::Medium, h).unwrap();
        if s.set.is_empty() {
            continue;
        }
        let e = gamma_and_expansions(&s, &cfg).unwrap();
        assert!(s.set.is_subset_of(&e.sigma1).unwrap());
        assert!(e.sigma1.is_subset_of(&e.sigma2).unwrap());
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn big_sets_lie_in_the_root_cover() {
    let cfg = CaseConfig::new(2, q(1, 10), Interval::closed_ratio((1, 1), (2, 1)), PsiSpec::pow(3), tiny()).unwrap();
    let h = 8;
    let inner = edge_strips(&cfg.interval, &cfg.psi.eval(h).unwrap()).unwrap().inner;
    let mut checked = 0;
    for c in FamilySpec::full(2, h).iter() {
        let p = IntPoly::from_i64s(&c);
        let big = sigma_case(&p, &cfg, Case::Big, h).unwrap().set.intersect(&inner).unwrap();
        if big.is_empty() {
            continue;
        }
        assert!(big.is_subset_of(&alpha_cover(&p, &cfg, h).unwrap()).unwrap(), "{p}");
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn worker_count_does_not_change_results() {
    let cfg = CaseConfig::new(2, q(1, 10), Interval::closed_ratio((1, 1), (2, 1)), PsiSpec::pow(3), tiny()).unwrap();
    for case in Case::ALL {
        let one = measure_case(&cfg, case, 12, &RunOptions::with_workers(1)).unwrap();
        let many = measure_case(&cfg, case, 12, &RunOptions::with_workers(6)).unwrap();
        assert_eq!(one.measure, many.measure);
        assert_eq!(one.poly_count, many.poly_count);
        let (u1, _) = case_union(&cfg, case, 12, &RunOptions::with_workers(1)).unwrap();
        let (u6, _) = case_union(&cfg, case, 12, &RunOptions::with_workers(6)).unwrap();
        assert_eq!(format!("{:?}", u1.parts()), format!("{:?}", u6.parts()));
    }
}
