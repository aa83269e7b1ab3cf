use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tencusps::code_search::{builtin, subcode_for_sigma};
use tencusps::disc_forms::{is_admissible, is_isotropic, FormSpec};
use tencusps::gf3_linear::{TernaryCode, TernaryWord};
use tencusps::lattice_engine::{
    a2_component_table, brute_force_report, criterion_extra_roots, criterion_u_exists, disc_group,
    gram_base, line_configuration, overlattice, random_valid_u9_subgroup, signature,
    span_discriminant, u9_quotient_3elementary, LatticeError, U9Word, RANK,
};

const SEVEN: [&str; 7] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7"];

/// A random isotropic admissible code built from low-weight words, so that
/// every branch of the root criteria gets exercised.
fn low_weight_code(seed: u64, m: u32, max_dim: usize) -> TernaryCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = if m == 3 { 12 } else { 10 };
    let spec = if m == 3 { FormSpec::u3() } else { FormSpec::u1() };
    let mut code = TernaryCode::zero(width);
    for _ in 0..200 {
        if code.dim() == max_dim {
            break;
        }
        let wt = rng.random_range(1..=4usize);
        let mut w = vec![0u8; width];
        for _ in 0..wt {
            w[rng.random_range(0..10)] = rng.random_range(1..3);
        }
        if m == 3 {
            w[10] = rng.random_range(0..3);
            w[11] = rng.random_range(0..3);
        }
        let next = code.extended(&TernaryWord::new(&w).unwrap());
        if is_isotropic(&spec, &next).unwrap() && is_admissible(&next) {
            code = next;
        }
    }
    code
}

#[test]
fn component_table_is_complete() {
    let t = a2_component_table();
    assert_eq!(t.len(), 13);
    for coset in 0..3 {
        let n = t.iter().filter(|v| v.coset == coset).count();
        assert_eq!(n, if coset == 0 { 7 } else { 3 });
    }
}

#[test]
fn overlattice_discriminants_on_all_small_subcodes() {
    for name in SEVEN {
        let c = builtin(name).unwrap();
        for k in 1..=2 {
            for sub in c.subcodes(k).into_iter().step_by(17) {
                let n = overlattice(3, &sub).unwrap();
                assert_eq!(n.lattice.det(), -BigInt::from(3i64.pow(12 - 2 * k as u32)));
                assert_eq!(disc_group(&n.lattice).unwrap(), vec![3; 12 - 2 * k]);
                assert_eq!(n.index(), 3u64.pow(k as u32));
                assert!(n.lattice.is_even());
            }
        }
    }
}

#[test]
fn overlattice_rejects_bad_input() {
    let wt1 = TernaryWord::new(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
    let c = TernaryCode::from_rows(12, &[wt1]).unwrap();
    assert!(matches!(overlattice(3, &c), Err(LatticeError::NotIsotropic(_))));
    assert!(overlattice(2, &builtin("C1").unwrap()).is_err());
}

#[test]
fn span_discriminant_examples() {
    let base = gram_base(3).unwrap();
    let unit = |i: usize, scale: i64| -> Vec<BigRational> {
        (0..RANK).map(|j| BigRational::from_integer(BigInt::from(if i == j { scale } else { 0 }))).collect()
    };
    let ident: Vec<Vec<BigRational>> = (0..RANK).map(|i| unit(i, 1)).collect();
    assert_eq!(span_discriminant(&ident, &base).unwrap(), -(3i64.pow(12)));
    let mut doubled = ident.clone();
    doubled[0] = unit(0, 2);
    assert_eq!(span_discriminant(&doubled, &base).unwrap(), -4 * 3i64.pow(12));
    assert!(matches!(
        span_discriminant(&ident[1..], &base),
        Err(LatticeError::RankDeficient { .. })
    ));
    assert_eq!(line_configuration().unwrap().discriminant, -9);
}

#[test]
fn base_lattices() {
    for m in [1, 3, 9] {
        let g = gram_base(m).unwrap();
        assert_eq!(signature(&g), (1, 21));
        assert_eq!(g.det(), -BigInt::from(3i64.pow(10) * (m as i64).pow(2)));
    }
}

#[test]
fn u9_small_cases() {
    let zero = U9Word { x: [0; 10], y: [0, 0] };
    // the trivial subgroup leaves the full discriminant, which is not 3-elementary
    assert!(!u9_quotient_3elementary(&[zero]).unwrap());
    let in_summand = U9Word { x: [0; 10], y: [3, 0] };
    assert!(matches!(u9_quotient_3elementary(&[in_summand]), Err(LatticeError::Precondition(_))));
    let bad_tail = U9Word { x: [1, 1, 1, 0, 0, 0, 0, 0, 0, 0], y: [1, 0] };
    assert!(matches!(u9_quotient_3elementary(&[bad_tail]), Err(LatticeError::Precondition(_))));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(random_valid_u9_subgroup(&mut rng, 5).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn criteria_match_oracle_on_low_weight_u3_codes(seed in any::<u64>(), dim in 1usize..=4) {
        let code = low_weight_code(seed, 3, dim);
        for a in 1..=6 {
            for b in 1..=6 {
                let r = brute_force_report(3, &code, a, b).unwrap();
                prop_assert_eq!(r.found_u, criterion_u_exists(3, &code, a, b).unwrap());
                prop_assert_eq!(r.count_extra > 0, criterion_extra_roots(3, &code, a, b).unwrap());
                prop_assert!(!r.found_half);
            }
        }
    }

    #[test]
    fn criteria_match_oracle_on_low_weight_u1_codes(seed in any::<u64>(), dim in 1usize..=3) {
        let code = low_weight_code(seed, 1, dim);
        for a in 1..=6 {
            for b in 1..=6 {
                let r = brute_force_report(1, &code, a, b).unwrap();
                prop_assert_eq!(r.found_u, criterion_u_exists(1, &code, a, b).unwrap());
                prop_assert_eq!(r.count_extra > 0, criterion_extra_roots(1, &code, a, b).unwrap());
                prop_assert_eq!(r.found_half, a == 2 && b == 2);
            }
        }
    }

    #[test]
    fn sigma_subcodes_have_expected_discriminant(idx in 0usize..7, sigma in 1u32..=6) {
        let sub = subcode_for_sigma(&builtin(SEVEN[idx]).unwrap(), 3, sigma).unwrap();
        let n = overlattice(3, &sub).unwrap();
        prop_assert_eq!(n.lattice.det(), -BigInt::from(3i64.pow(2 * sigma)));
        prop_assert_eq!(signature(&n.lattice), (1, 21));
    }

    #[test]
    fn random_valid_u9_subgroups_are_never_3_elementary(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_valid_u9_subgroup(&mut rng, dim).unwrap();
        prop_assert!(!u9_quotient_3elementary(&h).unwrap());
    }
}
