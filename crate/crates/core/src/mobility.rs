//! Explicit mobility-count bounds.
//!
//! Upper bounds come back as [`BoundReport`]s: the formula that produced the
//! value, every hypothesis that was checked (exactly), and the value as a
//! [`PowerProduct`] when all hypotheses hold. A failed hypothesis makes the
//! report inapplicable rather than an error, so parameter sweeps can tell
//! "bound does not apply" apart from "bad input".

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constants;
use crate::cycle::{require_proper, CycleClass, DivisorClass};
use crate::error::{Error, Result};
use crate::power::PowerProduct;
use crate::rational::{self, frac, int, Q};

/// Which closed-form bound a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    /// Count bound through a section-growth constant `c`.
    GenericCount,
    PreciseBasic,
    PreciseEpsilon,
    PreciseTau,
    /// Precise bound for classes on the boundary of the pseudo-effective cone.
    NonBig,
    /// Mobility-level restatement of [`FormulaId::PreciseBasic`].
    MobilityBasic,
    WeightedBasic,
    WeightedEpsilon,
    WeightedTau,
    /// Growth bound for the weighted count through Seshadri constants.
    WeightedGrowth,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::GenericCount => "mc_generic",
            FormulaId::PreciseBasic => "mc_precise_1",
            FormulaId::PreciseEpsilon => "mc_precise_2",
            FormulaId::PreciseTau => "mc_precise_3",
            FormulaId::NonBig => "mc_nonbig",
            FormulaId::MobilityBasic => "mob_precise_1",
            FormulaId::WeightedBasic => "wmc_precise_1",
            FormulaId::WeightedEpsilon => "wmc_precise_2",
            FormulaId::WeightedTau => "wmc_precise_3",
            FormulaId::WeightedGrowth => "wmc_growth",
        }
    }

    pub fn from_name(name: &str) -> Option<FormulaId> {
        FormulaId::ALL.iter().copied().find(|f| f.name() == name)
    }

    pub const ALL: [FormulaId; 10] = [
        FormulaId::GenericCount,
        FormulaId::PreciseBasic,
        FormulaId::PreciseEpsilon,
        FormulaId::PreciseTau,
        FormulaId::NonBig,
        FormulaId::MobilityBasic,
        FormulaId::WeightedBasic,
        FormulaId::WeightedEpsilon,
        FormulaId::WeightedTau,
        FormulaId::WeightedGrowth,
    ];

    /// The inequality the value certifies.
    pub fn statement(self) -> &'static str {
        match self {
            FormulaId::GenericCount => {
                "mc(alpha) <= (n+1) 2^n (2(k+1)/c)^(n/(n-k)) (alpha.A^k)^(n/(n-k)) A^n, \
                 given h0(mA) >= floor(c m^n) for all m"
            }
            FormulaId::PreciseBasic => "mc(alpha) < 2^(kn+3n) s^(n/(n-k)) A^n, given alpha.A^k < s A^n",
            FormulaId::PreciseEpsilon => {
                "mc(alpha) < 2^(kn+3n) s^(n/(n-k) - epsilon(n,k)) A^n, \
                 given alpha.A^k < s A^n and alpha - [A]^(n-k) not pseudo-effective"
            }
            FormulaId::PreciseTau => {
                "mc(alpha) < 2^(kn+3n) s^(n/(n-k) - tau(n,k)) t^tau(n,k) A^n, \
                 given alpha.A^k < s A^n, t <= s and alpha - t[A]^(n-k) not pseudo-effective"
            }
            FormulaId::NonBig => {
                "mc(alpha) < 2^(kn+3n) (k+1) s^(n/(n-k) - epsilon(n,k)) A^n, \
                 given alpha not big and alpha.A^k < s A^n"
            }
            FormulaId::MobilityBasic => "mob(alpha) <= n! 2^(kn+3n) s^(n/(n-k)) A^n, given alpha.A^k < s A^n",
            FormulaId::WeightedBasic => "wmc(alpha) < 2^(kn+3n) s^(n/(n-k)) A^n, given 2^n alpha.A^k < s A^n",
            FormulaId::WeightedEpsilon => {
                "wmc(alpha) < 2^(kn+3n) s^(n/(n-k) - epsilon(n,k)) A^n, \
                 given 2^n alpha.A^k < s A^n and 2^n alpha - [A]^(n-k) not pseudo-effective"
            }
            FormulaId::WeightedTau => {
                "wmc(alpha) < 2^(kn+3n) s^(n/(n-k) - tau(n,k)) t^tau(n,k) A^n, \
                 given 2^n alpha.A^k < s A^n, t <= s and 2^n alpha - t[A]^(n-k) not pseudo-effective"
            }
            FormulaId::WeightedGrowth => {
                "wmc(alpha) <= max{ A^n, (2/(A^n)^(1/n))^(nk/(n-k)) (A^k.alpha)^(n/(n-k)) }"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub formula: FormulaId,
    /// Present exactly when every hypothesis holds.
    pub value: Option<PowerProduct>,
    pub hypotheses: Vec<Hypothesis>,
}

impl BoundReport {
    fn assemble(
        formula: FormulaId,
        hypotheses: Vec<Hypothesis>,
        value: impl FnOnce() -> Result<PowerProduct>,
    ) -> Result<Self> {
        let value = if hypotheses.iter().all(|h| h.holds) {
            Some(value()?)
        } else {
            None
        };
        Ok(BoundReport {
            formula,
            value,
            hypotheses,
        })
    }

    pub fn is_applicable(&self) -> bool {
        self.value.is_some()
    }

    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.hypotheses.iter().filter(|h| !h.holds).map(|h| h.name)
    }
}

pub(crate) fn hyp(name: &'static str, holds: bool) -> Hypothesis {
    Hypothesis { name, holds }
}

/// Which refinement of the precise bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Only `alpha.A^k < s A^n`.
    Basic,
    /// Also `alpha - [A]^(n-k)` not pseudo-effective; saves `epsilon(n,k)`.
    Epsilon,
    /// Also `t <= s` and `alpha - t[A]^(n-k)` not pseudo-effective; trades
    /// `tau(n,k)` of the exponent of `s` for `t`.
    Tau { t: u64 },
}

impl Variant {
    /// Maps the numbering 1, 2, 3 used on the command line.
    pub fn from_index(index: u8, t: Option<u64>) -> Result<Variant> {
        match (index, t) {
            (1, _) => Ok(Variant::Basic),
            (2, _) => Ok(Variant::Epsilon),
            (3, Some(t)) => Ok(Variant::Tau { t }),
            (3, None) => Err(Error::InvalidParameter("variant 3 needs t")),
            _ => Err(Error::InvalidParameter("variant must be 1, 2 or 3")),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Variant::Basic => 1,
            Variant::Epsilon => 2,
            Variant::Tau { .. } => 3,
        }
    }
}

/// Everything a bound evaluation may need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInput {
    pub alpha: CycleClass,
    pub divisor: DivisorClass,
    pub s: u64,
    pub t: Option<u64>,
    pub c: Option<Q>,
}

fn pow2(e: u64) -> Q {
    Q::from_integer(BigInt::one() << e as usize)
}

/// `(n, k)` as integers after checking `0 <= k < n` and matching varieties.
pub(crate) fn shape(alpha: &CycleClass, a: &DivisorClass) -> Result<(u32, u32)> {
    if alpha.variety() != a.variety() {
        return Err(Error::VarietyMismatch);
    }
    require_proper(alpha)?;
    Ok((alpha.variety().dim(), alpha.dim()))
}

/// `n/(n-k)`.
pub(crate) fn growth_exponent(n: u32, k: u32) -> Q {
    frac(n as i64, (n - k) as i64)
}

/// `2^(kn+3n) s^(n/(n-k) - shift) t^shift A^n` with `shift` zero,
/// `epsilon(n,k)` or `tau(n,k)` depending on the variant. This is the
/// common shape of the precise bounds, weighted or not.
pub fn precise_formula(n: u32, k: u32, s: u64, variant: Variant, top: &Q) -> Result<PowerProduct> {
    if k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    let exponent = growth_exponent(n, k);
    let constant = pow2(k as u64 * n as u64 + 3 * n as u64) * top;
    let s_q = Q::from_integer(BigInt::from(s));
    let value = match variant {
        Variant::Basic => PowerProduct::pow(&s_q, &exponent)?,
        Variant::Epsilon => {
            let e = constants::epsilon(n, k)?;
            PowerProduct::pow(&s_q, &(exponent - e))?
        }
        Variant::Tau { t } => {
            let tau = constants::tau(n, k)?;
            let t_q = Q::from_integer(BigInt::from(t));
            PowerProduct::pow(&s_q, &(exponent - &tau))?.mul(&PowerProduct::pow(&t_q, &tau)?)
        }
    };
    Ok(value.mul_rational(&constant))
}

/// How far the precise bound misses exact homogeneity: scaling `alpha`,
/// `s` and `t` by `a` multiplies the bound by `a^(n/(n-k) - shift)`.
pub fn homogeneity_exponent_shift(n: u32, k: u32, variant: Variant) -> Result<Q> {
    match variant {
        Variant::Basic | Variant::Tau { .. } => Ok(Q::zero()),
        Variant::Epsilon => constants::epsilon(n, k),
    }
}

/// Smallest positive integer `s` with `factor * alpha.A^k < s A^n`.
pub fn minimal_s_scaled(alpha: &CycleClass, a: &DivisorClass, factor: &Q) -> Result<u64> {
    shape(alpha, a)?;
    let top = a.volume()?;
    if !top.is_positive() {
        return Err(Error::NotBig);
    }
    let ratio = factor * alpha.degree_with(a)? / top;
    let s = rational::next_integer_above(&ratio).max(BigInt::one());
    s.to_u64()
        .ok_or(Error::InvalidParameter("s does not fit in 64 bits"))
}

/// Smallest positive integer `s` with `alpha.A^k < s A^n`.
pub fn minimal_s(alpha: &CycleClass, a: &DivisorClass) -> Result<u64> {
    minimal_s_scaled(alpha, a, &Q::one())
}

fn constant_defined(n: u32, k: u32, variant: Variant) -> bool {
    match variant {
        Variant::Basic => true,
        Variant::Epsilon => constants::epsilon(n, k).is_ok(),
        Variant::Tau { .. } => constants::tau(n, k).is_ok(),
    }
}

/// Precise-bound hypotheses on `scale * alpha`, shared with the weighted
/// version where `scale = 2^n`.
pub(crate) fn precise_hypotheses(
    alpha: &CycleClass,
    a: &DivisorClass,
    s: u64,
    variant: Variant,
    scale: &Q,
) -> Result<Vec<Hypothesis>> {
    let (n, k) = shape(alpha, a)?;
    let very_ample = a.is_very_ample();
    let mut hyps = vec![hyp("A very ample", very_ample), hyp("s >= 1", s >= 1)];
    let scaled = alpha.scale(scale);
    let degree_ok = very_ample && {
        let lhs = scaled.degree_with(a)?;
        lhs < Q::from_integer(BigInt::from(s)) * a.volume()?
    };
    hyps.push(hyp("alpha.A^k < s A^n", degree_ok));
    let complete_intersection = a.power(n - k)?;
    match variant {
        Variant::Basic => {}
        Variant::Epsilon => {
            let diff = scaled.checked_sub(&complete_intersection)?;
            hyps.push(hyp(
                "alpha - [A]^(n-k) not pseudo-effective",
                !diff.is_pseudoeffective(),
            ));
        }
        Variant::Tau { t } => {
            hyps.push(hyp("1 <= t <= s", t >= 1 && t <= s));
            let diff = scaled
                .checked_sub(&complete_intersection.scale(&Q::from_integer(BigInt::from(t))))?;
            hyps.push(hyp(
                "alpha - t[A]^(n-k) not pseudo-effective",
                !diff.is_pseudoeffective(),
            ));
        }
    }
    if variant != Variant::Basic {
        hyps.push(hyp(
            "exponent constant defined",
            constant_defined(n, k, variant),
        ));
    }
    Ok(hyps)
}

/// Upper bound on the mobility count of an integral class through the
/// section-growth constant `c`.
pub fn mc_upper_generic(alpha: &CycleClass, a: &DivisorClass, c: &Q) -> Result<BoundReport> {
    let (n, k) = shape(alpha, a)?;
    if !c.is_positive() || *c >= Q::one() {
        return Err(Error::InvalidParameter("c must lie in (0, 1)"));
    }
    if !alpha.is_pseudoeffective() {
        return Err(Error::NotPseudoEffective);
    }
    let very_ample = a.is_very_ample();
    let growth_ok = very_ample && *c <= section_growth_constant(a)?;
    let hyps = vec![
        hyp("A very ample", very_ample),
        hyp("alpha integral", alpha.is_integral()),
        hyp("h0(mA) >= floor(c m^n) for all m", growth_ok),
    ];
    BoundReport::assemble(FormulaId::GenericCount, hyps, || {
        let exponent = growth_exponent(n, k);
        let lead = Q::from_integer(BigInt::from(n + 1)) * pow2(n as u64) * a.volume()?;
        let ratio = int(2) * int(k as i64 + 1) / c;
        let degree = alpha.degree_with(a)?;
        Ok(PowerProduct::pow(&ratio, &exponent)?
            .mul(&PowerProduct::pow(&degree, &exponent)?)
            .mul_rational(&lead))
    })
}

/// `prod d_i^{n_i} / n_i!`: the limit of `h0(mA)/m^n`. Since `h0(mA)/m^n`
/// decreases to it, a constant `c` satisfies `h0(mA) >= floor(c m^n)` for
/// all `m` exactly when `c` is at most this value.
pub fn section_growth_constant(a: &DivisorClass) -> Result<Q> {
    if !a.is_very_ample() {
        return Err(Error::NotVeryAmple);
    }
    let mut v = Q::one();
    for (d, &n) in a.coords().iter().zip(a.variety().dims()) {
        v *= num_traits::pow(d.clone(), n as usize);
        v /= rational::from_biguint(rational::factorial(n));
    }
    Ok(v)
}

/// Largest `c = 2^-j < 1` with `h0(mA) >= floor(c m^n)` for every `m`.
pub fn largest_dyadic_c(a: &DivisorClass) -> Result<Q> {
    let limit = section_growth_constant(a)?;
    let mut c = frac(1, 2);
    while c > limit {
        c /= int(2);
    }
    Ok(c)
}

/// The precise upper bound on the mobility count of an integral class.
pub fn mc_upper_precise(
    alpha: &CycleClass,
    a: &DivisorClass,
    s: u64,
    variant: Variant,
) -> Result<BoundReport> {
    let (n, k) = shape(alpha, a)?;
    let mut hyps = precise_hypotheses(alpha, a, s, variant, &Q::one())?;
    hyps.insert(1, hyp("alpha integral", alpha.is_integral()));
    let formula = match variant {
        Variant::Basic => FormulaId::PreciseBasic,
        Variant::Epsilon => FormulaId::PreciseEpsilon,
        Variant::Tau { .. } => FormulaId::PreciseTau,
    };
    BoundReport::assemble(formula, hyps, || {
        precise_formula(n, k, s, variant, &a.volume()?)
    })
}

/// The precise bound for non-big integral classes.
pub fn mc_upper_nonbig(alpha: &CycleClass, a: &DivisorClass, s: u64) -> Result<BoundReport> {
    let (n, k) = shape(alpha, a)?;
    let mut hyps = precise_hypotheses(alpha, a, s, Variant::Basic, &Q::one())?;
    hyps.insert(1, hyp("alpha integral", alpha.is_integral()));
    hyps.push(hyp("alpha not big", !alpha.is_big()));
    hyps.push(hyp(
        "exponent constant defined",
        constants::epsilon(n, k).is_ok(),
    ));
    BoundReport::assemble(FormulaId::NonBig, hyps, || {
        let base = precise_formula(n, k, s, Variant::Epsilon, &a.volume()?)?;
        Ok(base.mul_rational(&int(k as i64 + 1)))
    })
}

/// `n! 2^(kn+3n) s^(n/(n-k)) A^n`, an upper bound for the mobility of any
/// rational class with `alpha.A^k < s A^n`.
pub fn mob_upper(alpha: &CycleClass, a: &DivisorClass, s: u64) -> Result<BoundReport> {
    let (n, k) = shape(alpha, a)?;
    let hyps = precise_hypotheses(alpha, a, s, Variant::Basic, &Q::one())?;
    BoundReport::assemble(FormulaId::MobilityBasic, hyps, || {
        let base = precise_formula(n, k, s, Variant::Basic, &a.volume()?)?;
        Ok(base.mul_rational(&rational::from_biguint(rational::factorial(n))))
    })
}

/// Mobility count of a complete linear series: `h0(L) - 1`, or zero when
/// `L` has no sections.
pub fn mc_divisor_exact(l: &DivisorClass) -> Result<BigUint> {
    let h0 = l.h0()?;
    Ok(if h0.is_zero() { h0 } else { h0 - 1u8 })
}

/// Complete intersections of `n - k` members of `|mH|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiLowerBound {
    /// General points the family passes through: `h0(mH) - 1 - (n - k)`.
    pub points: BigUint,
    /// The family has class `class_scale * [H^(n-k)]`, `class_scale = m^(n-k)`.
    pub class_scale: BigUint,
    pub m: u64,
    pub n: u32,
}

impl CiLowerBound {
    /// `n! points / m^n`, the mobility estimate at scale `m`.
    pub fn estimate(&self) -> Q {
        let mut v = rational::from_biguint(rational::factorial(self.n) * &self.points);
        v /= Q::from_integer(num_traits::pow(BigInt::from(self.m), self.n as usize));
        v
    }
}

pub fn mob_ci_lower(h: &DivisorClass, k: u32, m: u64) -> Result<CiLowerBound> {
    let n = h.variety().dim();
    if k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive"));
    }
    if !h.is_nef() {
        return Err(Error::NotNef);
    }
    let h0 = h.scale(&Q::from_integer(BigInt::from(m))).h0()?;
    let lost = BigUint::from(1 + n - k);
    let points = if h0 > lost {
        h0 - lost
    } else {
        BigUint::zero()
    };
    Ok(CiLowerBound {
        points,
        class_scale: num_traits::pow(BigUint::from(m), (n - k) as usize),
        m,
        n,
    })
}

/// Curves in `P^3` cut out by two degree-`d` surfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiCurveCount {
    /// `C(d+3, 3) - 2`: degree-`d` forms through this many points form a pencil.
    pub points: BigUint,
    /// Degree `d^2` of the resulting curve.
    pub degree: BigUint,
}

pub fn ci_points_p3(d: u64) -> Result<CiCurveCount> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive"));
    }
    Ok(CiCurveCount {
        points: rational::binomial(d + 3, 3) - 2u8,
        degree: BigUint::from(d) * BigUint::from(d),
    })
}

/// Leading term of the count bound for families of smooth space curves of
/// degree `d`. The `O(d)` remainder has no published constant and is not
/// included, so `leading` alone is not a certified bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerrinBound {
    pub leading: PowerProduct,
    pub remainder_specified: bool,
}

pub fn perrin_bound(d: u64) -> Result<PerrinBound> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive"));
    }
    let leading = PowerProduct::pow(&Q::from_integer(BigInt::from(d)), &frac(3, 2))?
        .mul_rational(&frac(1, 2));
    Ok(PerrinBound {
        leading,
        remainder_specified: false,
    })
}

/// `floor(dim W / (n - k))`.
pub fn mc_family_dim_bound(dim_w: u64, n: u32, k: u32) -> Result<u64> {
    if k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    Ok(dim_w / (n - k) as u64)
}

/// Neighbourhood size around a class on which the mobility stays below `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityModulus {
    /// Minimal integer with `alpha.A^k < (s/2) A^n`.
    pub s: u64,
    /// `delta = 2^delta_log2`.
    pub delta: Q,
    pub delta_log2: i64,
}

/// Largest power of two `delta` with
/// `n! 2^(kn+3n+1) s^(n/(n-k)) A^n delta^tau(n,k) < mu`.
///
/// Every rational class `beta` with `beta.A^k < s A^n` and
/// `beta - delta s [A]^(n-k)` not pseudo-effective then has `mob(beta) < mu`.
pub fn continuity_neighborhood(
    alpha: &CycleClass,
    a: &DivisorClass,
    mu: &Q,
) -> Result<ContinuityModulus> {
    let (n, k) = shape(alpha, a)?;
    if !a.is_very_ample() {
        return Err(Error::NotVeryAmple);
    }
    if !mu.is_positive() {
        return Err(Error::InvalidParameter("mu must be positive"));
    }
    let tau = constants::tau(n, k)?;
    let s = minimal_s_scaled(alpha, a, &int(2))?;
    let constant = PowerProduct::pow(&Q::from_integer(BigInt::from(s)), &growth_exponent(n, k))?
        .mul_rational(
            &(rational::from_biguint(rational::factorial(n))
                * pow2(k as u64 * n as u64 + 3 * n as u64 + 1)
                * a.volume()?),
        );
    let holds = |e: i64| -> Result<bool> {
        let delta_tau = PowerProduct::pow(&int(2), &(Q::from_integer(BigInt::from(e)) * &tau))?;
        Ok(constant.mul(&delta_tau).cmp_rational(mu) == Ordering::Less)
    };
    // Float guess, then exact correction.
    let guess =
        (libm::log2(rational::to_f64(mu)) - libm::log2(constant.to_f64())) / rational::to_f64(&tau);
    let mut e = if guess.is_finite() {
        libm::floor(guess) as i64
    } else {
        0
    };
    while !holds(e)? {
        e -= 1;
    }
    while holds(e + 1)? {
        e += 1;
    }
    let delta = if e >= 0 {
        pow2(e as u64)
    } else {
        Q::one() / pow2((-e) as u64)
    };
    Ok(ContinuityModulus {
        s,
        delta,
        delta_log2: e,
    })
}
