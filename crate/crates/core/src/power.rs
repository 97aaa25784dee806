//! Products of rational powers of non-negative rationals.
//!
//! Bounds such as `2^12 * s^(3/2) * A^n` are irrational in general. They are
//! kept symbolically as `c * prod b_i^(e_i)` with `0 < e_i < 1`, compared
//! exactly by raising both sides to a common integer power, and turned into
//! numbers only through an outward-rounded [`Enclosure`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rounding, Q};

/// Significant bits used when callers do not ask for a precision.
pub const DEFAULT_BITS: u32 = 96;

/// Rational interval `[lo, hi]` known to contain a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Q,
    pub hi: Q,
}

impl Enclosure {
    pub fn exact(value: Q) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Product of two enclosures of non-negative numbers.
    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    pub fn scale(&self, c: &Q) -> Enclosure {
        debug_assert!(!c.is_negative());
        Enclosure {
            lo: &self.lo * c,
            hi: &self.hi * c,
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational::to_f64(&((&self.lo + &self.hi) / rational::int(2)))
    }

    pub fn upper_decimal(&self, digits: u32) -> String {
        rational::to_decimal(&self.hi, digits, Rounding::Up)
    }

    pub fn lower_decimal(&self, digits: u32) -> String {
        rational::to_decimal(&self.lo, digits, Rounding::Down)
    }
}

/// `coeff * prod base_i^(exp_i)` with every base positive and different
/// from one, every exponent strictly between 0 and 1, bases sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerProduct {
    coeff: Q,
    factors: Vec<(Q, Q)>,
}

impl PowerProduct {
    pub fn zero() -> Self {
        PowerProduct {
            coeff: Q::zero(),
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        PowerProduct::rational(Q::one())
    }

    /// # Panics
    /// If `value` is negative.
    pub fn rational(value: Q) -> Self {
        assert!(!value.is_negative(), "power products are non-negative");
        PowerProduct {
            coeff: value,
            factors: Vec::new(),
        }
    }

    /// `base^exponent` for `base >= 0`.
    pub fn pow(base: &Q, exponent: &Q) -> Result<Self> {
        if base.is_negative() {
            return Err(Error::InvalidParameter("negative base in a rational power"));
        }
        if base.is_zero() {
            return match exponent.cmp(&Q::zero()) {
                Ordering::Greater => Ok(PowerProduct::zero()),
                Ordering::Equal => Ok(PowerProduct::one()),
                Ordering::Less => Err(Error::InvalidParameter("zero raised to a negative power")),
            };
        }
        let mut out = PowerProduct::one();
        out.push_factor(base.clone(), exponent.clone())?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coefficient(&self) -> &Q {
        &self.coeff
    }

    pub fn factors(&self) -> &[(Q, Q)] {
        &self.factors
    }

    /// The value as a rational, when it is one.
    pub fn exact(&self) -> Option<Q> {
        let mut value = self.coeff.clone();
        for (base, exp) in &self.factors {
            value *= exact_root_power(base, exp)?;
        }
        Some(value)
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        if self.is_zero() || other.is_zero() {
            return PowerProduct::zero();
        }
        let mut out = self.clone();
        out.coeff *= &other.coeff;
        for (b, e) in &other.factors {
            out.push_factor(b.clone(), e.clone())
                .expect("factor bases are positive");
        }
        out
    }

    pub fn mul_rational(&self, c: &Q) -> PowerProduct {
        self.mul(&PowerProduct::rational(c.clone()))
    }

    /// `self^exponent`; fails only for `0^(negative)`.
    pub fn powq(&self, exponent: &Q) -> Result<PowerProduct> {
        if self.is_zero() {
            return PowerProduct::pow(&Q::zero(), exponent);
        }
        let mut out = PowerProduct::pow(&self.coeff, exponent)?;
        for (b, e) in &self.factors {
            out.push_factor(b.clone(), e * exponent)?;
        }
        Ok(out)
    }

    pub fn recip(&self) -> Result<PowerProduct> {
        self.powq(&-Q::one())
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &PowerProduct) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let ratio = self.mul(&other.recip().expect("non-zero"));
        let lcm = ratio
            .factors
            .iter()
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
        let lcm = lcm.to_u32().expect("exponent denominators stay small");
        let mut lifted = pow_i64(&ratio.coeff, lcm as i64);
        for (b, e) in &ratio.factors {
            let k = (e * Q::from_integer(BigInt::from(lcm))).to_integer();
            lifted *= pow_i64(b, k.to_i64().expect("small exponent"));
        }
        lifted.cmp(&Q::one())
    }

    pub fn cmp_rational(&self, value: &Q) -> Ordering {
        if value.is_negative() {
            return Ordering::Greater;
        }
        self.cmp_exact(&PowerProduct::rational(value.clone()))
    }

    /// Outward-rounded enclosure with roughly `bits` significant bits.
    pub fn eval(&self, bits: u32) -> Enclosure {
        let mut acc = Enclosure::exact(self.coeff.clone());
        if self.is_zero() {
            return acc;
        }
        for (b, e) in &self.factors {
            acc = acc.mul(&root_power_enclosure(b, e, bits + 4));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let mut value = rational::to_f64(&self.coeff);
        for (b, e) in &self.factors {
            value *= libm::pow(rational::to_f64(b), rational::to_f64(e));
        }
        value
    }

    pub fn upper_decimal(&self, digits: u32) -> String {
        self.eval(digits_to_bits(digits)).upper_decimal(digits)
    }

    fn push_factor(&mut self, base: Q, exponent: Q) -> Result<()> {
        if self.is_zero() || exponent.is_zero() || base.is_one() {
            return Ok(());
        }
        let whole = exponent.floor();
        let fractional = &exponent - &whole;
        let whole = whole
            .to_integer()
            .to_i64()
            .ok_or(Error::InvalidParameter("exponent too large"))?;
        self.coeff *= pow_i64(&base, whole);
        if fractional.is_zero() {
            return Ok(());
        }
        match self.factors.binary_search_by(|(b, _)| b.cmp(&base)) {
            Ok(pos) => {
                let merged = &self.factors[pos].1 + &fractional;
                self.factors.remove(pos);
                self.push_factor(base, merged)?;
            }
            Err(pos) => self.factors.insert(pos, (base, fractional)),
        }
        Ok(())
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational::to_fraction_string(&self.coeff))?;
        for (b, e) in &self.factors {
            write!(
                f,
                " * ({})^({})",
                rational::to_fraction_string(b),
                rational::to_fraction_string(e)
            )?;
        }
        Ok(())
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) < 3.33
    digits * 10 / 3 + 8
}

fn pow_i64(base: &Q, exp: i64) -> Q {
    let magnitude = exp.unsigned_abs() as usize;
    let numer = num_traits::pow(base.numer().clone(), magnitude);
    let denom = num_traits::pow(base.denom().clone(), magnitude);
    if exp >= 0 {
        Q::new(numer, denom)
    } else {
        Q::new(denom, numer)
    }
}

fn exact_root(n: &BigUint, q: u32) -> Option<BigUint> {
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

/// `base^(p/q)` when it is rational.
fn exact_root_power(base: &Q, exp: &Q) -> Option<Q> {
    let q = exp.denom().to_u32()?;
    let p = exp.numer().to_i64()?;
    let y = pow_i64(base, p);
    let num = exact_root(y.numer().magnitude(), q)?;
    let den = exact_root(y.denom().magnitude(), q)?;
    let mut value = Q::new(BigInt::from(num), BigInt::from(den));
    if y.is_negative() {
        value = -value;
    }
    Some(value)
}

fn root_power_enclosure(base: &Q, exp: &Q, bits: u32) -> Enclosure {
    if let Some(v) = exact_root_power(base, exp) {
        return Enclosure::exact(v);
    }
    let q = exp.denom().to_u32().expect("small root index");
    let p = exp.numer().to_i64().expect("small exponent");
    let y = pow_i64(base, p);
    let num = y.numer().magnitude();
    let den = y.denom().magnitude();
    let log2 = (num.bits() as i64 - den.bits() as i64).div_euclid(q as i64);
    let precision = (bits as i64 - log2 + 2).max(0) as usize;
    let scaled = (num << (precision * q as usize)) / den;
    let r = scaled.nth_root(q);
    let scale = BigInt::one() << precision;
    Enclosure {
        lo: Q::new(BigInt::from(r.clone()), scale.clone()),
        hi: Q::new(BigInt::from(r + 1u8), scale),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn integer_parts_are_folded() {
        let p = PowerProduct::pow(&int(2), &frac(3, 2)).unwrap();
        assert_eq!(p.coefficient(), &int(2));
        assert_eq!(p.factors(), &[(int(2), frac(1, 2))]);
        assert_eq!(p.exact(), None);
        let four = PowerProduct::pow(&int(4), &frac(3, 2)).unwrap();
        assert_eq!(four.exact(), Some(int(8)));
    }

    #[test]
    fn exact_comparisons() {
        let a = PowerProduct::pow(&int(2), &frac(1, 2)).unwrap();
        let b = PowerProduct::pow(&int(4), &frac(1, 4)).unwrap();
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        let c = PowerProduct::pow(&int(3), &frac(1, 3)).unwrap();
        // 1.4142 < 1.4422
        assert_eq!(a.cmp_exact(&c), Ordering::Less);
        assert_eq!(PowerProduct::zero().cmp_exact(&a), Ordering::Less);
        assert_eq!(a.cmp_rational(&frac(141, 100)), Ordering::Greater);
        assert_eq!(a.cmp_rational(&frac(142, 100)), Ordering::Less);
    }

    #[test]
    fn enclosure_brackets_the_value() {
        let p = PowerProduct::pow(&int(24), &frac(3, 2))
            .unwrap()
            .mul_rational(&int(32));
        let e = p.eval(80);
        let approx = 32.0 * libm::pow(24.0, 1.5);
        assert!(rational::to_f64(&e.lo) <= approx * (1.0 + 1e-15));
        assert!(rational::to_f64(&e.hi) >= approx * (1.0 - 1e-15));
        assert!(rational::to_f64(&e.width()) < 1e-15);
        assert_eq!(p.upper_decimal(1), "3762.5");
    }

    #[test]
    fn powq_composes() {
        let p = PowerProduct::pow(&int(2), &frac(1, 3)).unwrap();
        let cubed = p.powq(&int(3)).unwrap();
        assert_eq!(cubed.exact(), Some(int(2)));
        let inv = p.recip().unwrap().mul(&p);
        assert_eq!(inv.exact(), Some(int(1)));
    }

    #[test]
    fn zero_powers() {
        assert!(PowerProduct::pow(&int(0), &frac(1, 2)).unwrap().is_zero());
        assert_eq!(
            PowerProduct::pow(&int(0), &int(0)).unwrap().exact(),
            Some(int(1))
        );
        assert!(PowerProduct::pow(&int(0), &int(-1)).is_err());
        assert!(PowerProduct::pow(&int(-2), &int(1)).is_err());
    }
}
