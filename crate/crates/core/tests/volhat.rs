use std::cmp::Ordering;

use cyclevol_core::mobility::{minimal_s, mob_upper};
use cyclevol_core::rational::{frac, int, to_f64};
use cyclevol_core::volhat::{
    default_tolerance, kt_check, volhat_curve_xiao, volhat_homogeneity_check, volhat_sup,
    weak_duality_check, Status, DEFAULT_GRID,
};
use cyclevol_core::{CycleClass, DivisorClass, Monomial, VarietySpec, Q};
use proptest::prelude::*;

fn var(dims: &[u32]) -> VarietySpec {
    VarietySpec::new(dims.to_vec()).unwrap()
}

/// Closed-form infimum for a big curve class: the minimizer is
/// `x_i = n_i / c_i` with `c_i = H_i . alpha`, giving
/// `(n^n / (top * prod (n_i/c_i)^(n_i)))^(1/(n-1))`.
fn xiao_closed_form(alpha: &CycleClass) -> f64 {
    let x = alpha.variety();
    let n = x.dim() as f64;
    let point = x.point();
    let mut log_value = n * n.ln() - to_f64(&Q::from_integer(x.top_multinomial().into())).ln();
    for (i, &ni) in x.dims().iter().enumerate() {
        let mut e = point.exponents().to_vec();
        e[i] -= 1;
        let c = to_f64(&alpha.coefficient(&Monomial::new(e)));
        log_value -= ni as f64 * (ni as f64 / c).ln();
    }
    (log_value / (n - 1.0)).exp()
}

fn tol() -> Q {
    default_tolerance()
}

fn curve_class(dims: &[u32], coeffs: &[i64]) -> CycleClass {
    let x = var(dims);
    let codim = x.dim() - 1;
    let coeffs: Vec<Q> = coeffs.iter().map(|&c| int(c)).collect();
    CycleClass::from_basis_coeffs(x, codim, &coeffs).unwrap()
}

#[test]
fn quadric_curves_give_2ab() {
    for a in 1..=10 {
        for b in 1..=10 {
            let alpha = curve_class(&[1, 1], &[a, b]);
            let inf = volhat_curve_xiao(&alpha, &tol(), DEFAULT_GRID).unwrap();
            let expected = (2 * a * b) as f64;
            assert!(
                (inf.value_f64() - expected).abs() <= 1e-6 * expected,
                "({a},{b})"
            );
            let sup = volhat_sup(&alpha, &tol(), DEFAULT_GRID).unwrap();
            assert!((sup.value_f64() - expected).abs() <= 1e-6 * expected);
        }
    }
}

#[test]
fn boundary_curve_class_vanishes() {
    let alpha = curve_class(&[1, 1], &[1, 0]);
    let inf = volhat_curve_xiao(&alpha, &tol(), DEFAULT_GRID).unwrap();
    assert_eq!(inf.status, Status::Boundary);
    assert!(inf.value.is_zero());
    // Along (1-t) big + t boundary the value shrinks to zero.
    let big = curve_class(&[1, 1], &[1, 1]);
    let mut last = f64::INFINITY;
    for j in 0..=10 {
        let t = frac(j, 10);
        let mix = big
            .scale(&(int(1) - &t))
            .checked_add(&alpha.scale(&t))
            .unwrap();
        let v = volhat_sup(&mix, &tol(), DEFAULT_GRID).unwrap().value_f64();
        // closed form 2 * 1 * (1 - t)
        assert!((v - 2.0 * (1.0 - j as f64 / 10.0)).abs() < 1e-9);
        assert!(v <= last);
        last = v;
    }
    assert_eq!(last, 0.0);
}

#[test]
fn line_homogeneity_anchor() {
    let line = CycleClass::monomial(var(&[3]), vec![2]).unwrap();
    let r = volhat_sup(&line.scale(&int(2)), &tol(), DEFAULT_GRID).unwrap();
    assert!((r.value_f64() - 2f64.powf(1.5)).abs() < 1e-6);
    assert!(
        volhat_homogeneity_check(&line, &int(1), &tol(), DEFAULT_GRID)
            .unwrap()
            .holds
    );
}

#[test]
fn kt_equality_for_equal_divisors() {
    let x = var(&[2, 1]);
    let a = DivisorClass::from_ints(x, &[2, 5]).unwrap();
    for k in 0..=3 {
        let kt = kt_check(&a, &a, k).unwrap();
        assert_eq!(kt.rhs.cmp_rational(&kt.lhs), Ordering::Equal);
        assert_eq!(kt.lhs, a.volume().unwrap());
    }
}

fn varieties() -> impl Strategy<Value = Vec<u32>> {
    prop_oneof![
        Just(vec![3]),
        Just(vec![1, 1]),
        Just(vec![1, 1, 1]),
        Just(vec![2, 1]),
        Just(vec![2])
    ]
}

fn positive_coords(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((1i64..=40, 1i64..=8), len)
        .prop_map(|v| v.into_iter().map(|(p, q)| frac(p, q)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_recovers_complete_intersections(
        (dims, coords) in varieties().prop_flat_map(|d| { let r = d.len(); (Just(d), positive_coords(r)) }),
        c_raw in 0u32..3,
    ) {
        let x = var(&dims);
        let codim = 1 + c_raw % x.dim();
        let b = DivisorClass::new(x, coords).unwrap();
        let r = volhat_sup(&b.power(codim).unwrap(), &tol(), DEFAULT_GRID).unwrap();
        let vol = to_f64(&b.volume().unwrap());
        prop_assert_eq!(r.status, Status::Converged);
        prop_assert!((r.value_f64() - vol).abs() <= 1e-6 * vol);
        // The certificate is an exact upper bound and the value is attained.
        let cert = r.certificate.unwrap();
        prop_assert!(cert.cmp_rational(&b.volume().unwrap()) != Ordering::Less);
        let a = r.argopt.unwrap();
        let gap = b.power(codim).unwrap().checked_sub(&a.power(codim).unwrap()).unwrap();
        prop_assert!(gap.is_pseudoeffective());
    }

    #[test]
    fn xiao_matches_closed_form(
        (dims, coeffs) in prop_oneof![Just(vec![2]), Just(vec![1, 1]), Just(vec![1, 1, 1]), Just(vec![2, 1]), Just(vec![1, 2, 1])]
            .prop_flat_map(|d| {
                let len = var(&d).basis(var(&d).dim() - 1).len();
                (Just(d), prop::collection::vec(1i64..=30, len))
            }),
    ) {
        let alpha = curve_class(&dims, &coeffs);
        let inf = volhat_curve_xiao(&alpha, &tol(), DEFAULT_GRID).unwrap();
        let expected = xiao_closed_form(&alpha);
        prop_assert_eq!(inf.status, Status::Converged);
        prop_assert!((inf.value_f64() - expected).abs() <= 1e-9 * expected);
        let d = weak_duality_check(&alpha, &tol(), DEFAULT_GRID).unwrap();
        prop_assert!(d.holds);
        prop_assert!(d.gap.abs() <= 1e-6 * expected);
    }

    #[test]
    fn sup_is_monotone_and_positive(
        (dims, codim, a, b) in varieties().prop_flat_map(|d| {
            let x = var(&d);
            (Just(d), 1..=x.dim())
        }).prop_flat_map(|(d, codim)| {
            let len = var(&d).basis(codim).len();
            (Just(d), Just(codim), prop::collection::vec(0i64..=9, len), prop::collection::vec(-2i64..=9, len))
        }),
    ) {
        let x = var(&dims);
        let alpha = CycleClass::from_basis_coeffs(x.clone(), codim, &a.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap();
        let beta = CycleClass::from_basis_coeffs(x, codim, &b.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap();
        let sum = volhat_sup(&alpha.checked_add(&beta).unwrap(), &tol(), DEFAULT_GRID).unwrap();
        let base = volhat_sup(&beta, &tol(), DEFAULT_GRID).unwrap();
        prop_assert!(sum.value_f64() >= base.value_f64() * (1.0 - 1e-6));
        if beta.is_big() {
            prop_assert!(base.value_f64() > 0.0);
        }
        if !beta.is_pseudoeffective() {
            prop_assert_eq!(base.status, Status::Infeasible);
        }
    }

    #[test]
    fn sup_below_mobility_bound(
        (dims, codim, coeffs) in varieties().prop_flat_map(|d| {
            let x = var(&d);
            (Just(d), 1..=x.dim())
        }).prop_flat_map(|(d, codim)| {
            let len = var(&d).basis(codim).len();
            (Just(d), Just(codim), prop::collection::vec(0i64..=20, len))
        }),
    ) {
        let x = var(&dims);
        let alpha = CycleClass::from_basis_coeffs(x.clone(), codim, &coeffs.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap();
        let h = DivisorClass::hyperplane_sum(x);
        let s = minimal_s(&alpha, &h).unwrap();
        let bound = mob_upper(&alpha, &h, s).unwrap().value.unwrap();
        let v = volhat_sup(&alpha, &tol(), DEFAULT_GRID).unwrap();
        prop_assert!(bound.cmp_exact(&v.value) != Ordering::Less);
    }

    #[test]
    fn kt_holds_for_nef_pairs(
        dims in prop::collection::vec(1u32..=2, 1..=3),
        a in prop::collection::vec(0i64..=10, 3),
        b in prop::collection::vec(0i64..=10, 3),
        k_raw in 0u32..6,
    ) {
        let x = var(&dims);
        let r = dims.len();
        let k = k_raw % (x.dim() + 1);
        let a = DivisorClass::from_ints(x.clone(), &a[..r]).unwrap();
        let b = DivisorClass::from_ints(x, &b[..r]).unwrap();
        prop_assert!(kt_check(&a, &b, k).unwrap().holds);
    }

    #[test]
    fn homogeneity_of_sup(
        (dims, coords) in varieties().prop_flat_map(|d| { let r = d.len(); (Just(d), positive_coords(r)) }),
        c in prop_oneof![Just(frac(1, 2)), Just(int(2)), Just(int(3))],
    ) {
        let x = var(&dims);
        let alpha = DivisorClass::new(x.clone(), coords).unwrap().power(x.dim() - 1).unwrap();
        let h = volhat_homogeneity_check(&alpha, &c, &frac(1, 10_000), DEFAULT_GRID).unwrap();
        prop_assert!(h.holds);
        prop_assert!((h.scaled - h.predicted).abs() <= 1e-4 * h.predicted);
    }
}
