//! Multi-point Seshadri intervals and weighted mobility bounds.
//!
//! The Seshadri constant of `b` general points is only known to lie in an
//! interval, so [`SeshadriEstimate`] carries both endpoints; they agree
//! exactly when `b = t^n A^n`. The interval is valid for general point
//! configurations.

use alloc::vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::cycle::{CycleClass, DivisorClass};
use crate::error::{Error, Result};
use crate::mobility::{
    growth_exponent, hyp, precise_formula, precise_hypotheses, shape, BoundReport, FormulaId,
    Variant,
};
use crate::power::PowerProduct;
use crate::rational::{frac, int, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeshadriEstimate {
    pub b: u64,
    pub divisor: DivisorClass,
    /// Least positive integer with `b <= t^n A^n`.
    pub t: u64,
    /// `1/t`.
    pub lo: Q,
    /// `(A^n / b)^(1/n)`.
    pub hi: PowerProduct,
}

impl SeshadriEstimate {
    /// Both endpoints coincide, so the constant is known exactly.
    pub fn is_collapsed(&self) -> bool {
        self.hi.cmp_rational(&self.lo) == Ordering::Equal
    }
}

pub fn seshadri_interval(b: u64, a: &DivisorClass) -> Result<SeshadriEstimate> {
    if b == 0 {
        return Err(Error::InvalidParameter("b must be positive"));
    }
    if !a.is_very_ample() {
        return Err(Error::NotVeryAmple);
    }
    let n = a.variety().dim();
    let top = a.volume()?.to_integer();
    // b <= t^n A^n  <=>  t^n >= ceil(b / A^n)
    let needed = (BigInt::from(b) + &top - 1u8) / &top;
    let needed = needed.to_biguint().expect("positive");
    let mut t: BigUint = needed.nth_root(n);
    if num_traits::pow(t.clone(), n as usize) < needed {
        t += 1u8;
    }
    let t = t.to_u64().expect("t <= b");
    let hi = PowerProduct::pow(&(Q::from_integer(top) / int(b as i64)), &frac(1, n as i64))?;
    Ok(SeshadriEstimate {
        b,
        divisor: a.clone(),
        t,
        lo: frac(1, t as i64),
        hi,
    })
}

/// Both branches of the weighted-count growth bound and their maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmcGrowth {
    /// `A^n`.
    pub volume_branch: Q,
    /// `(2/(A^n)^(1/n))^(nk/(n-k)) (A^k.alpha)^(n/(n-k))`.
    pub degree_branch: PowerProduct,
    pub value: PowerProduct,
}

pub fn wmc_upper(alpha: &CycleClass, a: &DivisorClass) -> Result<WmcGrowth> {
    let (n, k) = shape(alpha, a)?;
    if !a.is_very_ample() {
        return Err(Error::NotVeryAmple);
    }
    if !alpha.is_pseudoeffective() {
        return Err(Error::NotPseudoEffective);
    }
    let top = a.volume()?;
    let degree = alpha.degree_with(a)?;
    let (n_i, k_i) = (n as i64, k as i64);
    let degree_branch = PowerProduct::pow(&int(2), &frac(n_i * k_i, n_i - k_i))?
        .mul(&PowerProduct::pow(
            &(Q::one() / &top),
            &frac(k_i, n_i - k_i),
        )?)
        .mul(&PowerProduct::pow(&degree, &growth_exponent(n, k))?);
    let value = if degree_branch.cmp_rational(&top) == Ordering::Greater {
        degree_branch.clone()
    } else {
        PowerProduct::rational(top.clone())
    };
    Ok(WmcGrowth {
        volume_branch: top,
        degree_branch,
        value,
    })
}

/// The precise weighted bounds; hypotheses carry the extra `2^n`.
pub fn wmc_upper_precise(
    alpha: &CycleClass,
    a: &DivisorClass,
    s: u64,
    variant: Variant,
) -> Result<BoundReport> {
    let (n, k) = shape(alpha, a)?;
    let scale = Q::from_integer(BigInt::one() << n as usize);
    let mut hyps = precise_hypotheses(alpha, a, s, variant, &scale)?;
    for h in hyps.iter_mut() {
        h.name = match h.name {
            "alpha.A^k < s A^n" => "2^n alpha.A^k < s A^n",
            "alpha - [A]^(n-k) not pseudo-effective" => {
                "2^n alpha - [A]^(n-k) not pseudo-effective"
            }
            "alpha - t[A]^(n-k) not pseudo-effective" => {
                "2^n alpha - t[A]^(n-k) not pseudo-effective"
            }
            other => other,
        };
    }
    let formula = match variant {
        Variant::Basic => FormulaId::WeightedBasic,
        Variant::Epsilon => FormulaId::WeightedEpsilon,
        Variant::Tau { .. } => FormulaId::WeightedTau,
    };
    let report = BoundReport {
        formula,
        value: None,
        hypotheses: hyps,
    };
    if report.hypotheses.iter().all(|h| h.holds) {
        let value = precise_formula(n, k, s, variant, &a.volume()?)?;
        return Ok(BoundReport {
            value: Some(value),
            ..report
        });
    }
    Ok(report)
}

/// [`wmc_upper`] as a report, so sweeps can treat it like the other bounds.
pub fn wmc_growth_report(alpha: &CycleClass, a: &DivisorClass) -> Result<BoundReport> {
    let growth = wmc_upper(alpha, a)?;
    Ok(BoundReport {
        formula: FormulaId::WeightedGrowth,
        value: Some(growth.value),
        hypotheses: vec![
            hyp("A very ample", true),
            hyp("alpha pseudo-effective", true),
        ],
    })
}

/// Weighted mobility of `[H^(n-k)]` squeezed between the blow-up
/// construction and the Seshadri cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmobCiBounds {
    pub t: u64,
    /// `((t-1)/t)^(kn/(n-k)) vol(H)`.
    pub lower: PowerProduct,
    /// `vol(H)`.
    pub upper: Q,
    /// `lower / upper`; the relative gap is `1 - ratio`.
    pub ratio: PowerProduct,
}

impl WmobCiBounds {
    pub fn gap_f64(&self) -> f64 {
        1.0 - self.ratio.to_f64()
    }

    /// Checks `lower = ratio * upper` exactly.
    pub fn gap_is_exact(&self) -> bool {
        self.ratio.mul_rational(&self.upper).cmp_exact(&self.lower) == Ordering::Equal
    }
}

pub fn wmob_ci_bounds(h: &DivisorClass, k: u32, t: u64) -> Result<WmobCiBounds> {
    let n = h.variety().dim();
    if k == 0 || k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    if t < 2 {
        return Err(Error::InvalidParameter("t must be at least 2"));
    }
    if !h.is_very_ample() {
        return Err(Error::NotVeryAmple);
    }
    let upper = h.volume()?;
    let (n_i, k_i) = (n as i64, k as i64);
    let ratio = PowerProduct::pow(&frac(t as i64 - 1, t as i64), &frac(k_i * n_i, n_i - k_i))?;
    Ok(WmobCiBounds {
        t,
        lower: ratio.mul_rational(&upper),
        upper,
        ratio,
    })
}

/// Weighted mobility of a big divisor class, `vol(L)`. Every big class here
/// is already nef, so the approximation argument behind the equality needs
/// no birational model.
pub fn wmob_divisor(l: &DivisorClass) -> Result<Q> {
    if !l.is_big() {
        return Err(Error::NotBig);
    }
    l.volume()
}
