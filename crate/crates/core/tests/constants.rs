use cyclevol_core::rational::{frac, int, to_f64};
use cyclevol_core::{epsilon, tau, Error, RecursionTable};

/// Same recursion in plain floating point.
fn float_constants(n: u32, k: u32) -> Option<(f64, f64)> {
    let (mut e, mut t) = (1.0f64, 1.0f64);
    for m in (k + 2)..=n {
        let (m, k) = (m as f64, k as f64);
        let denom_e = (m - 1.0) / (m - k - 1.0) - e;
        let denom_t = (m - 1.0) / (m - k - 1.0) - t;
        if denom_e == 0.0 || denom_t == 0.0 {
            return None;
        }
        e = (m - k - 1.0) / (m - k) * e / denom_e;
        t = f64::min(
            (m - k - 1.0) / (m - 1.0) * t,
            (m - k - 1.0) / (m - k) * t / denom_t,
        );
    }
    Some((e, t))
}

#[test]
fn stated_values() {
    assert_eq!(epsilon(3, 1).unwrap(), frac(1, 2));
    assert_eq!(epsilon(4, 2).unwrap(), frac(1, 4));
    assert_eq!(tau(4, 2).unwrap(), frac(1, 4));
    for n in 1..=20 {
        assert_eq!(epsilon(n, n - 1).unwrap(), int(1));
        assert_eq!(tau(n, n - 1).unwrap(), int(1));
    }
}

#[test]
fn agrees_with_float_recursion() {
    for n in 2..=20 {
        for k in 1..n {
            let (e, t) = float_constants(n, k).unwrap();
            assert!(
                (to_f64(&epsilon(n, k).unwrap()) - e).abs() <= 1e-12 * e,
                "epsilon({n},{k})"
            );
            assert!(
                (to_f64(&tau(n, k).unwrap()) - t).abs() <= 1e-12 * t,
                "tau({n},{k})"
            );
        }
    }
}

#[test]
fn ordering_on_the_defined_range() {
    let table = RecursionTable::build(20);
    for n in 1..=20u32 {
        for k in 0..n {
            let (Ok(e), Ok(t)) = (table.epsilon(n, k), table.tau(n, k)) else {
                assert_eq!(k, 0, "only k = 0 may be undefined");
                continue;
            };
            assert!(*t > int(0) && t <= e, "tau <= epsilon at ({n},{k})");
            assert!(
                *e <= frac(1, (n - k) as i64),
                "epsilon <= 1/(n-k) at ({n},{k})"
            );
        }
    }
}

#[test]
fn k_one_meets_the_upper_bound() {
    for n in 2..=20 {
        assert_eq!(epsilon(n, 1).unwrap(), frac(1, n as i64 - 1));
    }
}

#[test]
fn k_zero_reports_the_division_by_zero() {
    assert_eq!(float_constants(2, 0), None);
    for n in 2..=20 {
        assert!(matches!(
            epsilon(n, 0),
            Err(Error::UndefinedConstant { .. })
        ));
        assert!(matches!(tau(n, 0), Err(Error::UndefinedConstant { .. })));
    }
}
