//! Exact rational helpers shared by every module.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint(n: BigUint) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

/// Nearest `f64`, correct to a couple of ulps for any magnitude.
pub fn to_f64(x: &Q) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let negative = x.is_negative();
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    // Shift so the integer quotient carries 64 significant bits.
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let mantissa = quotient.to_f64().unwrap_or(f64::INFINITY);
    let value = libm::ldexp(
        mantissa,
        (-shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32,
    );
    if negative {
        -value
    } else {
        value
    }
}

/// Natural logarithm of a positive rational, without overflowing on huge
/// numerators or denominators.
pub fn ln(x: &Q) -> f64 {
    fn ln_big(n: &BigUint) -> f64 {
        let shift = n.bits().saturating_sub(64);
        let top = (n >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
        libm::log(top) + shift as f64 * core::f64::consts::LN_2
    }
    ln_big(x.numer().magnitude()) - ln_big(x.denom().magnitude())
}

/// Exact value of a finite double, with the mantissa rounded to `sig_bits`
/// significant bits so denominators stay small. Returns `None` for NaN and
/// infinities.
pub fn from_f64(x: f64, sig_bits: u32) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Q::zero());
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mut mantissa, mut exp) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased - 1075)
    };
    let keep = sig_bits.clamp(1, 53);
    let width = 64 - mantissa.leading_zeros();
    if width > keep {
        let drop = width - keep;
        let half = 1u64 << (drop - 1);
        let rounded = (mantissa + half) >> drop;
        mantissa = rounded;
        exp += drop as i64;
    }
    let mut value = Q::from_integer(BigInt::from(mantissa));
    let two = BigInt::from(2u8);
    if exp >= 0 {
        value *= Q::from_integer(num_traits::pow(two, exp as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(two, (-exp) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Direction used when a rational is cut to a fixed number of decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

/// Fixed-point decimal rendering with an explicit rounding direction.
pub fn to_decimal(x: &Q, digits: u32, rounding: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), digits as usize);
    let scaled = x * Q::from_integer(scale.clone());
    let n = match rounding {
        Rounding::Down => scaled.floor(),
        Rounding::Up => scaled.ceil(),
        Rounding::Nearest => scaled.round(),
    }
    .to_integer();
    let negative = n.sign() == Sign::Minus;
    let (int_part, frac_part) = n.abs().div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let _ = write!(out, "{}", int_part);
    if digits > 0 {
        let frac_digits = frac_part.to_str_radix(10);
        out.push('.');
        for _ in frac_digits.len()..digits as usize {
            out.push('0');
        }
        out.push_str(&frac_digits);
    }
    out
}

/// `p/q` string, or just `p` for integers.
pub fn to_fraction_string(x: &Q) -> String {
    let mut out = String::new();
    if x.denom().is_one() {
        let _ = write!(out, "{}", x.numer());
    } else {
        let _ = write!(out, "{}/{}", x.numer(), x.denom());
    }
    out
}

/// Parses `p`, `p/q` or a plain decimal like `-0.125` into an exact value.
pub fn parse(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Q::new(num, den));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !fraction.bytes().all(|b| b.is_ascii_digit()) || fraction.is_empty() {
            return None;
        }
        let mut digits = String::from(whole_digits);
        digits.push_str(fraction);
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u8), fraction.len());
        return Some(Q::new(num, den));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Parses a comma separated list of rationals.
pub fn parse_list(text: &str) -> Option<Vec<Q>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse)
        .collect()
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Smallest integer strictly greater than `x`.
pub fn next_integer_above(x: &Q) -> BigInt {
    x.floor().to_integer() + BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rounding_directions() {
        let x = frac(1, 3);
        assert_eq!(to_decimal(&x, 3, Rounding::Down), "0.333");
        assert_eq!(to_decimal(&x, 3, Rounding::Up), "0.334");
        assert_eq!(to_decimal(&-x, 2, Rounding::Down), "-0.34");
        assert_eq!(to_decimal(&int(7), 0, Rounding::Up), "7");
        assert_eq!(to_decimal(&frac(1, 20), 3, Rounding::Nearest), "0.050");
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6"), Some(frac(1, 2)));
        assert_eq!(parse("-0.125"), Some(frac(-1, 8)));
        assert_eq!(parse("12"), Some(int(12)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("abc"), None);
    }

    #[test]
    fn float_round_trip() {
        for x in [1.5, -0.1, 3.0e-12, 7.25e40] {
            let q = from_f64(x, 53).unwrap();
            assert_eq!(to_f64(&q), x);
        }
        assert_eq!(to_f64(&frac(1, 3)), 1.0 / 3.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), BigUint::from(10u8));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(factorial(5), BigUint::from(120u8));
    }
}
