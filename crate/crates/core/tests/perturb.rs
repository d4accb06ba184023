mod common;

use common::{family, pair, seed_and_size};
use proptest::prelude::*;
use relop::ensemble::{gaussian_hermitian, gaussian_matrix, seeded_rng, wigner};
use relop::perturb::{
    block_dilation, cayley_commutator_identity, chain_identity, commutator_probe, domination_check, make_pair,
};
use relop::schur::{multiplier_norm, sample_symbol};
use relop::symbols::{weight_symbol, Weight};
use relop::{eigh, norms, ScalarFunction};

fn rational_registry() -> Vec<ScalarFunction> {
    ScalarFunction::registry()
        .into_iter()
        .filter(|f| matches!(f, ScalarFunction::Resolvent { .. } | ScalarFunction::Rational { .. }))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cayley_identity_holds((seed, n) in seed_and_size(32), fam in family(), radius in 0.1..100.0f64) {
        let mut rng = seeded_rng(seed);
        let a = fam.sample(n, &mut rng).scaled(radius);
        let b = fam.sample(n, &mut rng);
        let r = gaussian_matrix(n, n, &mut rng);
        let res = cayley_commutator_identity(&a, &b, &r).unwrap();
        prop_assert!(res.residual <= 1e-9 * res.scale, "{res:?}");
    }

    #[test]
    fn block_dilation_preserves_norms((seed, n) in seed_and_size(8), f in common::registered()) {
        let mut rng = seeded_rng(seed);
        let a = wigner(n, 2.0, &mut rng);
        let b = wigner(n, 1.0, &mut rng);
        let r = gaussian_matrix(n, n, &mut rng);
        let direct = commutator_probe(&f, &a, &b, &r).unwrap().ratio_c;
        let (big_a, big_r) = block_dilation(&a, &b, &r).unwrap();
        let dilated = commutator_probe(&f, &big_a, &big_a, &big_r).unwrap().ratio_b;
        prop_assert!((direct.numerator - dilated.numerator).abs() <= 1e-10 * (1.0 + direct.numerator));
        prop_assert!((direct.denominator - dilated.denominator).abs() <= 1e-10 * (1.0 + direct.denominator));
    }

    #[test]
    fn chain_identity_holds((seed, n) in seed_and_size(16), fam in family()) {
        let (a, k) = pair(seed, n, fam);
        let c = chain_identity(&a, &k).unwrap();
        prop_assert!(c.residual <= 1e-9 * c.scale);
        prop_assert!(c.s1_norm.is_finite());
    }

    #[test]
    fn pair_factors_reproduce_k((seed, n) in seed_and_size(16), fam in family()) {
        let (a, k) = pair(seed, n, fam);
        let p = make_pair(&a, &k).unwrap();
        let (r1, r2) = p.residuals();
        let scale = 1.0 + k.as_matrix().frobenius_norm() * (1.0 + a.as_matrix().frobenius_norm());
        prop_assert!(r1 <= 1e-9 * scale && r2 <= 1e-9 * scale);
        let kop = norms(k.as_matrix()).op;
        let rop = norms(&relop::linalg::resolvent(&eigh(&a))).op;
        prop_assert!(norms(&p.c).op <= kop * rop + 1e-12 * (1.0 + kop));
        prop_assert!(norms(&p.g).op <= kop * rop + 1e-12 * (1.0 + kop));
    }

    // Whenever the hypothesis ‖Kv‖ ≤ c + d‖Av‖ holds on every trial, the
    // conclusion with A + K in place of A holds on the same trials.
    #[test]
    fn domination_transfers_to_the_sum((seed, n) in seed_and_size(8), c in 0.0..5.0f64, d in 0.0..0.99f64) {
        let (a, k) = pair(seed, n, relop::ensemble::Family::Gaussian);
        let r = domination_check(&a, &k, c, d, 32, seed).unwrap();
        if r.max_violation == 0.0 {
            prop_assert_eq!(r.implication_holds, Some(true));
        } else {
            prop_assert!(r.max_violation > 0.0 && r.implication_holds.is_none());
        }
    }

    #[test]
    fn rational_ratios_stay_below_multiplier_bound((seed, n) in seed_and_size(8), which in 0..4usize) {
        let fs = rational_registry();
        let f = &fs[which % fs.len()];
        let mut rng = seeded_rng(seed);
        let a = gaussian_hermitian(n, 1.0, &mut rng);
        let b = a.add_scaled(1.0, &gaussian_hermitian(n, 0.5, &mut rng));
        let r = gaussian_matrix(n, n, &mut rng);
        let probe = commutator_probe(f, &a, &b, &r).unwrap();
        let (ea, eb) = (eigh(&a), eigh(&b));
        let sym = weight_symbol(f, Weight::I);
        let hi_b = multiplier_norm(&sample_symbol(&sym, &ea.lambdas, &ea.lambdas).unwrap(), 1e-6, 4, 0).unwrap().hi;
        let hi_c = multiplier_norm(&sample_symbol(&sym, &eb.lambdas, &ea.lambdas).unwrap(), 1e-6, 4, 0).unwrap().hi;
        prop_assert!(!probe.ratio_b.flagged && !probe.ratio_c.flagged);
        prop_assert!(probe.ratio_b.value <= hi_b + 1e-6, "{} {} {}", f.name(), probe.ratio_b.value, hi_b);
        prop_assert!(probe.ratio_c.value <= hi_c + 1e-6, "{} {} {}", f.name(), probe.ratio_c.value, hi_c);
    }
}

#[test]
fn identity_ratio_grows_with_spectral_radius() {
    let f = ScalarFunction::poly(vec![0.0, 1.0]);
    for seed in 0..5 {
        let mut rng = seeded_rng(seed);
        let a = wigner(8, 1.0, &mut rng);
        let r = gaussian_matrix(8, 8, &mut rng);
        let ratios: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&s| commutator_probe(&f, &a.scaled(s), &a.scaled(s), &r).unwrap().ratio_b.value)
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    }
}
