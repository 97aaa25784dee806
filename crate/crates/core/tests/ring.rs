use std::collections::HashMap;

use cyclevol_core::rational::{frac, int};
use cyclevol_core::{CycleClass, DivisorClass, Monomial, VarietySpec, Q};
use proptest::prelude::*;

/// Naive polynomial product over i64, truncated by `H_i^(n_i+1) = 0`.
fn naive_product(
    dims: &[u32],
    a: &[(Vec<u32>, i64)],
    b: &[(Vec<u32>, i64)],
) -> HashMap<Vec<u32>, i64> {
    let mut out = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(dims).all(|(x, d)| x <= d) {
                *out.entry(e).or_insert(0) += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// All exponent vectors of total degree `c` inside the box `dims`, by
/// brute-force enumeration.
fn monomials(dims: &[u32], c: u32) -> Vec<Vec<u32>> {
    let mut all = vec![vec![]];
    for &d in dims {
        all = all
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=d).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    all.retain(|e| e.iter().sum::<u32>() == c);
    all
}

fn variety() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=3, 1..=3)
}

type Terms = Vec<(Vec<u32>, i64)>;

fn class_terms(dims: Vec<u32>) -> impl Strategy<Value = (Vec<u32>, u32, Terms)> {
    let n: u32 = dims.iter().sum();
    (Just(dims), 0..=n).prop_flat_map(|(dims, c)| {
        let basis = monomials(&dims, c);
        let len = basis.len();
        (Just(dims), Just(c), prop::collection::vec(-5i64..=5, len)).prop_map(
            move |(d, c, coeffs)| {
                let terms = basis.iter().cloned().zip(coeffs).collect();
                (d, c, terms)
            },
        )
    })
}

fn to_class(dims: &[u32], c: u32, terms: &[(Vec<u32>, i64)]) -> CycleClass {
    let x = VarietySpec::new(dims.to_vec()).unwrap();
    CycleClass::new(
        x,
        c,
        terms
            .iter()
            .map(|(e, v)| (Monomial::new(e.clone()), int(*v))),
    )
    .unwrap()
}

fn as_map(class: &CycleClass) -> HashMap<Vec<u32>, i64> {
    class
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.to_integer().try_into().unwrap()))
        .collect()
}

#[test]
fn basis_matches_brute_force() {
    for dims in [
        vec![3],
        vec![1, 1],
        vec![2, 1],
        vec![1, 1, 1],
        vec![2, 3, 1],
    ] {
        let x = VarietySpec::new(dims.clone()).unwrap();
        for c in 0..=x.dim() {
            let mut expected = monomials(&dims, c);
            expected.sort();
            let got: Vec<Vec<u32>> = x.basis(c).iter().map(|m| m.exponents().to_vec()).collect();
            assert_eq!(got, expected, "dims {dims:?} codim {c}");
        }
    }
}

#[test]
fn point_degrees_of_products() {
    // P^2 x P^1 with A = (2, 3): A^3 = 3 * 2^2 * 3 = 36
    let x = VarietySpec::new(vec![2, 1]).unwrap();
    let a = DivisorClass::from_ints(x, &[2, 3]).unwrap();
    assert_eq!(a.volume().unwrap(), int(36));
    let x = VarietySpec::new(vec![1, 1, 1]).unwrap();
    assert_eq!(DivisorClass::hyperplane_sum(x).volume().unwrap(), int(6));
}

proptest! {
    #[test]
    fn intersection_matches_naive_expansion(
        (dims, ca, ta) in variety().prop_flat_map(class_terms),
        seed in 0u32..1000,
    ) {
        let n: u32 = dims.iter().sum();
        let cb = seed % (n - ca + 1);
        let basis = monomials(&dims, cb);
        let tb: Vec<(Vec<u32>, i64)> = basis.into_iter().enumerate().map(|(i, e)| (e, (i as i64 * 7 + seed as i64) % 11 - 5)).collect();
        let a = to_class(&dims, ca, &ta);
        let b = to_class(&dims, cb, &tb);
        let product = a.intersect(&b).unwrap();
        prop_assert_eq!(as_map(&product), naive_product(&dims, &ta, &tb));
    }

    #[test]
    fn intersection_is_commutative_and_bilinear(
        (dims, c, ta) in variety().prop_flat_map(class_terms),
        scale in -4i64..=4,
    ) {
        let a = to_class(&dims, c, &ta);
        let x = a.variety().clone();
        let h = DivisorClass::hyperplane_sum(x.clone()).to_cycle();
        if c < x.dim() {
            prop_assert_eq!(a.intersect(&h).unwrap(), h.intersect(&a).unwrap());
            let lhs = a.scale(&int(scale)).checked_add(&a).unwrap().intersect(&h).unwrap();
            let rhs = a.intersect(&h).unwrap().scale(&int(scale + 1));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn powers_are_repeated_products(dims in variety(), coords in prop::collection::vec(0i64..=4, 3)) {
        let x = VarietySpec::new(dims.clone()).unwrap();
        let a = DivisorClass::from_ints(x.clone(), &coords[..dims.len()]).unwrap();
        let mut acc = CycleClass::fundamental(x.clone());
        for j in 0..=x.dim() {
            prop_assert_eq!(a.power(j).unwrap(), acc.clone());
            if j < x.dim() {
                acc = acc.intersect(&a.to_cycle()).unwrap();
            }
        }
        prop_assert_eq!(acc.degree().unwrap(), a.volume().unwrap());
    }

    #[test]
    fn section_counts_match_monomial_counts(dims in variety(), coords in prop::collection::vec(0i64..=4, 3)) {
        // h0 of O(d_1..d_r) counts multihomogeneous monomials.
        let x = VarietySpec::new(dims.clone()).unwrap();
        let coords = &coords[..dims.len()];
        let a = DivisorClass::from_ints(x, coords).unwrap();
        let mut expected: u64 = 1;
        for (&n, &d) in dims.iter().zip(coords) {
            let box_dims = vec![d as u32; n as usize + 1];
            expected *= monomials(&box_dims, d as u32).len() as u64;
        }
        prop_assert_eq!(a.h0().unwrap(), expected.into());
    }

    #[test]
    fn cone_tests_follow_coefficient_signs((dims, c, terms) in variety().prop_flat_map(class_terms)) {
        let a = to_class(&dims, c, &terms);
        let signs: Vec<i64> = terms.iter().map(|(_, v)| *v).collect();
        prop_assert_eq!(a.is_pseudoeffective(), signs.iter().all(|v| *v >= 0));
        prop_assert_eq!(a.is_big(), signs.iter().all(|v| *v > 0));
    }
}

#[test]
fn rational_scaling_is_exact() {
    let x = VarietySpec::new(vec![1, 1]).unwrap();
    let a = DivisorClass::new(x, vec![frac(1, 3), frac(3, 2)]).unwrap();
    assert_eq!(a.volume().unwrap(), Q::from(int(1)));
    assert_eq!(a.scale(&int(2)).volume().unwrap(), int(4));
}
