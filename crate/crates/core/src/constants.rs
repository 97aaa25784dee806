//! The exponent-saving constants `epsilon(n, k)` and `tau(n, k)`.
//!
//! Both are defined for `0 <= k < n` by a recursion in `n` that starts at
//! `epsilon(k+1, k) = tau(k+1, k) = 1`:
//!
//! ```text
//! epsilon(n,k) = ((n-k-1)/(n-k) * e) / ((n-1)/(n-k-1) - e),          e = epsilon(n-1,k)
//! tau(n,k)     = min{ (n-k-1)/(n-1) * t, ((n-k-1)/(n-k) * t) / ((n-1)/(n-k-1) - t) },
//!                                                                     t = tau(n-1,k)
//! ```
//!
//! The recursion is evaluated exactly as written. For `k = 0` the
//! denominator `(n-1)/(n-1) - 1` vanishes at `n = 2`, so every pair
//! `(n, 0)` with `n >= 2` is reported as [`Error::UndefinedConstant`].
//!
//! On the defined range `0 < tau <= epsilon <= 1/(n-k)`. The last bound is
//! attained along `k = 1`: `epsilon(n, 1) = 1/(n-1)` for every `n >= 2`.

use alloc::collections::BTreeMap;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, Q};

fn check(n: u32, k: u32) -> Result<()> {
    if n == 0 || k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    Ok(())
}

/// One step of the shared recursion `((n-k-1)/(n-k) x) / ((n-1)/(n-k-1) - x)`.
fn quotient_step(n: u32, k: u32, prev: &Q) -> Option<Q> {
    let (n, k) = (n as i64, k as i64);
    let denom = frac(n - 1, n - k - 1) - prev;
    if denom.is_zero() {
        return None;
    }
    let value = frac(n - k - 1, n - k) * prev / denom;
    // A negative value would mean the recursion left its domain.
    value.is_positive().then_some(value)
}

fn min_step(n: u32, k: u32, prev: &Q) -> Option<Q> {
    let linear = frac(n as i64 - k as i64 - 1, n as i64 - 1) * prev;
    quotient_step(n, k, prev).map(|q| match q.cmp(&linear) {
        Ordering::Less => q,
        _ => linear,
    })
}

/// `epsilon(n, k)`, evaluated by direct recursion.
pub fn epsilon(n: u32, k: u32) -> Result<Q> {
    check(n, k)?;
    if k == n - 1 {
        return Ok(Q::one());
    }
    let prev = epsilon(n - 1, k)?;
    quotient_step(n, k, &prev).ok_or(Error::UndefinedConstant { n, k })
}

/// `tau(n, k)`, evaluated by direct recursion.
pub fn tau(n: u32, k: u32) -> Result<Q> {
    check(n, k)?;
    if k == n - 1 {
        return Ok(Q::one());
    }
    let prev = tau(n - 1, k)?;
    min_step(n, k, &prev).ok_or(Error::UndefinedConstant { n, k })
}

/// Memoized table of both constants for `1 <= n <= max_n`.
#[derive(Debug, Clone, Default)]
pub struct RecursionTable {
    max_n: u32,
    epsilon: BTreeMap<(u32, u32), Q>,
    tau: BTreeMap<(u32, u32), Q>,
}

impl RecursionTable {
    pub fn build(max_n: u32) -> Self {
        let mut table = RecursionTable {
            max_n,
            ..Default::default()
        };
        for n in 1..=max_n {
            for k in 0..n {
                if k == n - 1 {
                    table.epsilon.insert((n, k), Q::one());
                    table.tau.insert((n, k), Q::one());
                    continue;
                }
                if let Some(e) = table
                    .epsilon
                    .get(&(n - 1, k))
                    .and_then(|e| quotient_step(n, k, e))
                {
                    table.epsilon.insert((n, k), e);
                }
                if let Some(t) = table.tau.get(&(n - 1, k)).and_then(|t| min_step(n, k, t)) {
                    table.tau.insert((n, k), t);
                }
            }
        }
        table
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn epsilon(&self, n: u32, k: u32) -> Result<&Q> {
        check(n, k)?;
        if n > self.max_n {
            return Err(Error::InvalidParameter("pair outside the table"));
        }
        self.epsilon
            .get(&(n, k))
            .ok_or(Error::UndefinedConstant { n, k })
    }

    pub fn tau(&self, n: u32, k: u32) -> Result<&Q> {
        check(n, k)?;
        if n > self.max_n {
            return Err(Error::InvalidParameter("pair outside the table"));
        }
        self.tau
            .get(&(n, k))
            .ok_or(Error::UndefinedConstant { n, k })
    }

    /// Defined pairs `(n, k)` in increasing order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.epsilon.keys().copied()
    }
}
