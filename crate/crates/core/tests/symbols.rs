mod common;

use common::registered;
use proptest::prelude::*;
use relop::symbols::{divided_difference, growth_check, weight_symbol, Weight};
use relop::C64;

fn distinct_pair() -> impl Strategy<Value = (f64, f64)> {
    (-20.0..20.0f64, -20.0..20.0f64).prop_filter("well separated", |(x, y)| (x - y).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn first_resolvent_identity(f in registered(), (x, y) in distinct_pair()) {
        let dd = divided_difference(&f);
        let xi = C64::new(x, 1.0);
        let yi = C64::new(y, 1.0);
        let lhs = (xi * f.eval(x) - yi * f.eval(y)) / (x - y);
        let rhs = xi * dd.eval(x, y) + f.eval(y);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{}", f.name());
    }

    #[test]
    fn second_resolvent_identity(f in registered(), (x, y) in distinct_pair()) {
        let dd = divided_difference(&f);
        let xi = C64::new(x, 1.0);
        let yi = C64::new(y, 1.0);
        let lhs = (xi * xi * f.eval(x) - yi * yi * f.eval(y)) / (x - y);
        let rhs = xi * yi * dd.eval(x, y) + xi * f.eval(x) + yi * f.eval(y);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{}", f.name());
    }

    #[test]
    fn weighted_symbols_have_equal_modulus(f in registered(), x in -50.0..50.0f64, y in -50.0..50.0f64) {
        let one = weight_symbol(&f, Weight::I).eval(x, y).norm();
        let two = weight_symbol(&f, Weight::II).eval(x, y).norm();
        prop_assert!((one - two).abs() <= 1e-12 * (1.0 + one));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // With (1 + |t|) ≤ (1 + |s| + |t|) ≤ 2·max(1 + |s|, 1 + |t|) and the
    // supremum running over both orders of each pair, c_a ≤ c_b ≤ 2·c_a.
    #[test]
    fn growth_constants_are_comparable(f in registered(), grid in prop::collection::vec(-100.0..100.0f64, 2..40)) {
        prop_assume!(grid.iter().any(|&t| t != grid[0]));
        let g = growth_check(&f, &grid).unwrap();
        let eps = 1e-9 * (1.0 + g.c_b);
        prop_assert!(g.c_a <= g.c_b + eps);
        prop_assert!(g.c_b <= 2.0 * g.c_a + eps);
        prop_assert!(g.c_a <= 2.0 * g.c_b + eps);
    }
}
