use std::cmp::Ordering;

use cyclevol_core::mobility::{
    ci_points_p3, continuity_neighborhood, homogeneity_exponent_shift, mc_divisor_exact,
    mc_upper_generic, mc_upper_nonbig, mc_upper_precise, minimal_s, mob_ci_lower, mob_upper,
    FormulaId, Variant,
};
use cyclevol_core::rational::{frac, int, to_f64};
use cyclevol_core::seshadri::{seshadri_interval, wmc_upper, wmc_upper_precise, wmob_ci_bounds};
use cyclevol_core::{CycleClass, DivisorClass, PowerProduct, VarietySpec, Q};
use num_bigint::BigUint;
use proptest::prelude::*;

fn p(n: u32) -> VarietySpec {
    VarietySpec::projective_space(n).unwrap()
}

fn line() -> CycleClass {
    CycleClass::monomial(p(3), vec![2]).unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

#[test]
fn plane_curve_counts() {
    for d in 0..=10i64 {
        let l = DivisorClass::from_ints(p(2), &[d]).unwrap();
        let expected = binom(d as u64 + 2, 2) - 1;
        assert_eq!(mc_divisor_exact(&l).unwrap(), BigUint::from(expected));
    }
}

#[test]
fn lines_in_space_generic_bound() {
    let r = mc_upper_generic(&line(), &DivisorClass::hyperplane_sum(p(3)), &frac(1, 6)).unwrap();
    let expected = 32.0 * 24f64.powf(1.5);
    assert!((r.value.unwrap().to_f64() - expected).abs() < 1e-9);
}

#[test]
fn ci_counts_follow_the_leading_term() {
    let h = DivisorClass::hyperplane_sum(p(3));
    for m in [10u64, 50, 200] {
        let ci = mob_ci_lower(&h, 1, m).unwrap();
        let ratio = 6.0 * to_f64(&Q::from_integer(ci.points.into())) / (m as f64).powi(3);
        assert!((ratio - 1.0).abs() <= 7.0 / m as f64, "m = {m}: {ratio}");
    }
    for d in 1..20u64 {
        let expected = binom(d + 3, 3) - 2;
        assert_eq!(ci_points_p3(d).unwrap().points, BigUint::from(expected));
    }
}

#[test]
fn continuity_delta_meets_its_inequality() {
    for (alpha, mu) in [
        (line(), int(1)),
        (line().scale(&int(5)), frac(1, 3)),
        (line(), int(1000)),
    ] {
        let h = DivisorClass::hyperplane_sum(p(3));
        let m = continuity_neighborhood(&alpha, &h, &mu).unwrap();
        // 3! 2^13 s^(3/2) delta^(1/2) < mu, and 2 delta fails.
        let lhs = |delta: f64| 6.0 * 8192.0 * (m.s as f64).powf(1.5) * delta.sqrt();
        let delta = to_f64(&m.delta);
        assert!(lhs(delta) < to_f64(&mu));
        assert!(lhs(2.0 * delta) >= to_f64(&mu) * (1.0 - 1e-12));
    }
}

#[test]
fn weighted_examples() {
    let h = DivisorClass::hyperplane_sum(p(3));
    let r = wmc_upper_precise(&line(), &h, 9, Variant::Basic).unwrap();
    assert_eq!(r.formula, FormulaId::WeightedBasic);
    assert_eq!(r.value.unwrap().exact(), Some(int(110592)));
    let g = wmc_upper(&line(), &h).unwrap();
    assert!((g.value.to_f64() - 2f64.powf(1.5)).abs() < 1e-12);
}

#[test]
fn seshadri_collapse() {
    let o1 = DivisorClass::hyperplane_sum(p(2));
    for t in 1..=20u64 {
        let e = seshadri_interval(t * t, &o1).unwrap();
        assert_eq!(e.t, t);
        assert!(e.is_collapsed());
    }
}

fn scale_factor(a: i64, n: u32, k: u32, shift: &Q) -> PowerProduct {
    PowerProduct::pow(&int(a), &(frac(n as i64, (n - k) as i64) - shift)).unwrap()
}

fn exact_eq(a: &PowerProduct, b: &PowerProduct) -> bool {
    a.cmp_exact(b) == Ordering::Equal
}

fn classes() -> impl Strategy<Value = (Vec<u32>, u32, Vec<i64>)> {
    (prop::collection::vec(1u32..=2, 1..=3), 0u32..4).prop_flat_map(|(dims, c)| {
        let x = VarietySpec::new(dims.clone()).unwrap();
        let codim = 1 + c % x.dim();
        let len = x.basis(codim).len();
        (
            Just(dims),
            Just(codim),
            prop::collection::vec(0i64..=6, len),
        )
    })
}

fn build(dims: &[u32], codim: u32, coeffs: &[i64]) -> CycleClass {
    let x = VarietySpec::new(dims.to_vec()).unwrap();
    let coeffs: Vec<Q> = coeffs.iter().map(|&c| int(c)).collect();
    CycleClass::from_basis_coeffs(x, codim, &coeffs).unwrap()
}

proptest! {
    #[test]
    fn generic_bound_scales_exactly((dims, codim, coeffs) in classes(), a in 1i64..=4) {
        let alpha = build(&dims, codim, &coeffs);
        let x = alpha.variety().clone();
        let h = DivisorClass::hyperplane_sum(x.clone());
        let c = frac(1, 16);
        let base = mc_upper_generic(&alpha, &h, &c).unwrap().value.unwrap();
        let scaled = mc_upper_generic(&alpha.scale(&int(a)), &h, &c).unwrap().value.unwrap();
        let factor = scale_factor(a, x.dim(), alpha.dim(), &int(0));
        prop_assert!(exact_eq(&scaled, &base.mul(&factor)));
    }

    #[test]
    fn precise_bounds_scale_with_s((dims, codim, coeffs) in classes(), a in 1u64..=4) {
        let alpha = build(&dims, codim, &coeffs);
        let x = alpha.variety().clone();
        let (n, k) = (x.dim(), alpha.dim());
        let h = DivisorClass::hyperplane_sum(x);
        let s = minimal_s(&alpha, &h).unwrap();
        let scaled = alpha.scale(&int(a as i64));
        for variant in [Variant::Basic, Variant::Epsilon, Variant::Tau { t: 1 }] {
            let r1 = mc_upper_precise(&alpha, &h, s, variant).unwrap();
            let ra = mc_upper_precise(&scaled, &h, a * s, match variant {
                Variant::Tau { t } => Variant::Tau { t: a * t },
                v => v,
            })
            .unwrap();
            if let (Some(v1), Some(va)) = (r1.value, ra.value) {
                let shift = homogeneity_exponent_shift(n, k, variant).unwrap();
                prop_assert!(exact_eq(&va, &v1.mul(&scale_factor(a as i64, n, k, &shift))));
            }
        }
        let w1 = wmc_upper_precise(&alpha, &h, 1 << n, Variant::Basic).unwrap();
        let wa = wmc_upper_precise(&scaled, &h, a << n, Variant::Basic).unwrap();
        if let (Some(v1), Some(va)) = (w1.value, wa.value) {
            prop_assert!(exact_eq(&va, &v1.mul(&scale_factor(a as i64, n, k, &int(0)))));
        }
    }

    #[test]
    fn nonbig_and_mobility_applicability((dims, codim, coeffs) in classes()) {
        let alpha = build(&dims, codim, &coeffs);
        let h = DivisorClass::hyperplane_sum(alpha.variety().clone());
        let s = minimal_s(&alpha, &h).unwrap();
        let r = mc_upper_nonbig(&alpha, &h, s).unwrap();
        let (n, k) = (alpha.variety().dim(), alpha.dim());
        prop_assert_eq!(r.is_applicable(), !alpha.is_big() && cyclevol_core::epsilon(n, k).is_ok());
        let m = mob_upper(&alpha, &h, s).unwrap();
        prop_assert!(m.is_applicable());
    }

    #[test]
    fn minimal_s_is_minimal((dims, codim, coeffs) in classes()) {
        let alpha = build(&dims, codim, &coeffs);
        let h = DivisorClass::hyperplane_sum(alpha.variety().clone());
        let s = minimal_s(&alpha, &h).unwrap();
        let degree = alpha.degree_with(&h).unwrap();
        let top = h.volume().unwrap();
        prop_assert!(degree < int(s as i64) * &top);
        prop_assert!(s == 1 || degree >= int(s as i64 - 1) * &top);
    }

    #[test]
    fn growth_bound_is_monotone((dims, codim, coeffs) in classes(), extra in 0usize..8) {
        let alpha = build(&dims, codim, &coeffs);
        let x = alpha.variety().clone();
        let basis = x.basis(codim);
        let bump = CycleClass::new(x.clone(), codim, [(basis[extra % basis.len()].clone(), int(1))]).unwrap();
        let h = DivisorClass::hyperplane_sum(x);
        let before = wmc_upper(&alpha, &h).unwrap().value;
        let after = wmc_upper(&alpha.checked_add(&bump).unwrap(), &h).unwrap().value;
        prop_assert!(after.cmp_exact(&before) != Ordering::Less);
    }

    #[test]
    fn seshadri_interval_is_valid(n in 1u32..=5, b in 1u64..=1_000_000, d in 1i64..=5) {
        let a = DivisorClass::from_ints(p(n), &[d]).unwrap();
        let e = seshadri_interval(b, &a).unwrap();
        let top = d.pow(n) as u128;
        prop_assert!((b as u128) <= (e.t as u128).pow(n) * top);
        prop_assert!(e.t == 1 || (b as u128) > ((e.t - 1) as u128).pow(n) * top);
        prop_assert!(e.hi.cmp_rational(&e.lo) != Ordering::Less);
        prop_assert_eq!(e.is_collapsed(), (b as u128) == (e.t as u128).pow(n) * top);
    }

    #[test]
    fn ci_sandwich(n in 2u32..=4, k_raw in 0u32..3, t in 2u64..=60) {
        let k = 1 + k_raw % (n - 1);
        let h = DivisorClass::hyperplane_sum(p(n));
        let b = wmob_ci_bounds(&h, k, t).unwrap();
        let next = wmob_ci_bounds(&h, k, t + 1).unwrap();
        prop_assert!(b.gap_is_exact());
        prop_assert!(b.lower.cmp_rational(&b.upper) != Ordering::Greater);
        prop_assert!(next.lower.cmp_exact(&b.lower) != Ordering::Less);
        let envelope = wmc_upper(&h.power(n - k).unwrap(), &h).unwrap().value;
        prop_assert!(envelope.cmp_rational(&b.upper) != Ordering::Less);
    }
}
