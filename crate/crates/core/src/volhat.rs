//! The intersection-theoretic volume `volhat`.
//!
//! Two formulations are computed on `X` itself (no birational models):
//!
//! * [`volhat_sup`] maximizes `A^n` over nef `A = sum x_i H_i` with
//!   `alpha - [A^(n-k)]` pseudo-effective. Every coefficient of `A^(n-k)` is
//!   a monomial `K_a x^a`, so in `u = log x` the problem is the linear
//!   program `max sum n_i u_i` subject to `a.u <= log(alpha_a / K_a)`. It is
//!   solved in floating point; the optimizer is then rounded to rationals
//!   and shrunk until it is feasible in exact arithmetic, and the dual
//!   weights give an exact upper bound `prod (alpha_a/K_a)^(lambda_a)`.
//! * [`volhat_curve_xiao`] minimizes `(A.alpha / vol(A)^(1/n))^(n/(n-1))`
//!   for curve classes by gradient descent from grid seeds; the objective at
//!   the rational argopt is evaluated exactly.
//!
//! For curve classes on these varieties the two agree.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::cycle::{require_proper, CycleClass, DivisorClass, Monomial};
use crate::error::{Error, Result};
use crate::optim;
use crate::power::PowerProduct;
use crate::rational::{self, frac, Q};

/// Grid resolution per axis used to seed the optimizers.
pub const DEFAULT_GRID: u32 = 16;

/// `10^-6`.
pub fn default_tolerance() -> Q {
    frac(1, 1_000_000)
}

const SIG_BITS: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// The reported value is within the tolerance of the optimum.
    Converged,
    /// The optimum sits on the boundary of the nef cone; the value is 0.
    Boundary,
    /// No feasible divisor exists; the value is 0.
    Infeasible,
    /// A value was found but not certified to the requested tolerance.
    NotConverged,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Boundary => "boundary",
            Status::Infeasible => "infeasible",
            Status::NotConverged => "not_converged",
        }
    }

    pub fn from_name(name: &str) -> Option<Status> {
        [
            Status::Converged,
            Status::Boundary,
            Status::Infeasible,
            Status::NotConverged,
        ]
        .into_iter()
        .find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Sup,
    Inf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationResult {
    pub sense: Sense,
    /// Objective at `argopt`, exact. A lower bound for a sup, an upper
    /// bound for an inf.
    pub value: PowerProduct,
    /// Rational optimizer. For a boundary inf this is the limiting nef ray.
    pub argopt: Option<DivisorClass>,
    pub status: Status,
    pub tolerance: Q,
    /// Exact bound from the other side, when one was found.
    pub certificate: Option<PowerProduct>,
    pub iterations: u64,
}

impl OptimizationResult {
    fn trivial(sense: Sense, status: Status, tolerance: &Q, argopt: Option<DivisorClass>) -> Self {
        let certificate = (status == Status::Boundary).then(PowerProduct::zero);
        OptimizationResult {
            sense,
            value: PowerProduct::zero(),
            argopt,
            status,
            tolerance: tolerance.clone(),
            certificate,
            iterations: 0,
        }
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn check_tolerance(tol: &Q) -> Result<()> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    Ok(())
}

/// `K_a = c! / prod a_i!`, the multinomial in front of `x^a` in `A^c`.
fn multinomial(m: &Monomial) -> Q {
    let mut v = rational::from_biguint(rational::factorial(m.degree()));
    for &a in m.exponents() {
        v /= rational::from_biguint(rational::factorial(a));
    }
    v
}

/// Rounds `x` to rationals and scales it down until `alpha - A^c` is
/// pseudo-effective in exact arithmetic. Needs every coefficient of `alpha`
/// positive.
fn certify(alpha: &CycleClass, x: &[f64]) -> Option<DivisorClass> {
    let coords: Vec<Q> = x
        .iter()
        .map(|&v| rational::from_f64(v, SIG_BITS))
        .collect::<Option<_>>()?;
    if coords.iter().any(|c| c.is_negative()) {
        return None;
    }
    let a = DivisorClass::new(alpha.variety().clone(), coords).ok()?;
    let power = a.power(alpha.codim()).ok()?;
    let ratio = alpha
        .terms()
        .map(|(m, c)| power.coefficient(m) / c)
        .max()
        .unwrap_or_else(Q::zero);
    if ratio <= Q::one() {
        return Some(a);
    }
    let c = alpha.codim() as f64;
    let mut lambda = rational::from_f64(
        libm::pow(rational::to_f64(&ratio), -1.0 / c) * (1.0 - 1e-13),
        SIG_BITS,
    )?;
    let shrink = Q::one() - frac(1, 1 << 20);
    for _ in 0..64 {
        if &ratio * num_traits::pow(lambda.clone(), alpha.codim() as usize) <= Q::one() {
            return Some(a.scale(&lambda));
        }
        lambda *= &shrink;
    }
    None
}

/// `vol(A) * (1 + tol) >= certificate`.
fn within(value: &Q, certificate: &PowerProduct, tol: &Q) -> bool {
    certificate.cmp_rational(&(value * (Q::one() + tol))) != Ordering::Greater
}

/// `volhat` as a supremum over nef divisors on `X`. The returned value is
/// always achieved by the returned rational `argopt`, so it is a certified
/// lower bound; `certificate` is an exact upper bound for the same problem.
pub fn volhat_sup(alpha: &CycleClass, tol: &Q, grid: u32) -> Result<OptimizationResult> {
    require_proper(alpha)?;
    check_tolerance(tol)?;
    let x = alpha.variety();
    if !alpha.is_pseudoeffective() {
        return Ok(OptimizationResult::trivial(
            Sense::Sup,
            Status::Infeasible,
            tol,
            None,
        ));
    }
    if !alpha.is_big() {
        // Some constraint reads K_a x^a <= 0, which forces a coordinate to
        // vanish and with it A^n.
        let zero = DivisorClass::new(x.clone(), vec![Q::zero(); x.factors()])?;
        return Ok(OptimizationResult::trivial(
            Sense::Sup,
            Status::Boundary,
            tol,
            Some(zero),
        ));
    }

    let basis = x.basis(alpha.codim());
    let rows: Vec<Vec<f64>> = basis
        .iter()
        .map(|m| m.exponents().iter().map(|&e| e as f64).collect())
        .collect();
    let bounds: Vec<Q> = basis
        .iter()
        .map(|m| alpha.coefficient(m) / multinomial(m))
        .collect();
    let rhs: Vec<f64> = bounds.iter().map(rational::ln).collect();
    let obj: Vec<f64> = x.dims().iter().map(|&d| d as f64).collect();
    let top = rational::from_biguint(x.top_multinomial());

    let mut iterations = 0;
    let mut argopt = None;
    let mut certificate = None;
    if let Some(sol) = optim::solve_lp(&rows, &rhs, &obj) {
        iterations += sol.pivots;
        let point: Vec<f64> = sol.u.iter().map(|&u| libm::exp(u)).collect();
        argopt = certify(alpha, &point);
        certificate = dual_certificate(&basis, &bounds, &sol.active, x.dims(), &top)?;
    }
    if argopt.is_none() {
        let (best, evaluated) = grid_seed(alpha, &basis, &bounds, grid);
        iterations += evaluated;
        argopt = best.and_then(|p| certify(alpha, &p));
    }
    let Some(a) = argopt else {
        return Ok(OptimizationResult::trivial(
            Sense::Sup,
            Status::NotConverged,
            tol,
            None,
        ));
    };
    let value = a.volume()?;
    let status = match &certificate {
        Some(c) if within(&value, c, tol) => Status::Converged,
        _ => Status::NotConverged,
    };
    Ok(OptimizationResult {
        sense: Sense::Sup,
        value: PowerProduct::rational(value),
        argopt: Some(a),
        status,
        tolerance: tol.clone(),
        certificate,
        iterations,
    })
}

/// For `lambda >= 0` with `sum lambda_a a = (n_1..n_r)`, multiplying the
/// constraints `K_a x^a <= alpha_a` with weights `lambda_a` gives
/// `A^n <= top * prod (alpha_a/K_a)^(lambda_a)`. The weights are recomputed
/// exactly on the basis the simplex ended with.
fn dual_certificate(
    basis: &[Monomial],
    bounds: &[Q],
    active: &[usize],
    dims: &[u32],
    top: &Q,
) -> Result<Option<PowerProduct>> {
    if active.is_empty() {
        return Ok(None);
    }
    let matrix: Vec<Vec<Q>> = (0..dims.len())
        .map(|i| {
            active
                .iter()
                .map(|&a| rational::int(basis[a].exponents()[i] as i64))
                .collect()
        })
        .collect();
    let target: Vec<Q> = dims.iter().map(|&d| rational::int(d as i64)).collect();
    let Some(lambda) = optim::solve_exact(&matrix, &target) else {
        return Ok(None);
    };
    if !optim::all_non_negative(&lambda) {
        return Ok(None);
    }
    let mut bound = PowerProduct::rational(top.clone());
    for (&a, l) in active.iter().zip(&lambda) {
        bound = bound.mul(&PowerProduct::pow(&bounds[a], l)?);
    }
    Ok(Some(bound))
}

/// Best grid direction pushed out to the boundary of the feasible set.
fn grid_seed(
    alpha: &CycleClass,
    basis: &[Monomial],
    bounds: &[Q],
    grid: u32,
) -> (Option<Vec<f64>>, u64) {
    let x = alpha.variety();
    let c = alpha.codim() as f64;
    let bounds: Vec<f64> = bounds.iter().map(rational::to_f64).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let points = optim::simplex_grid(x.factors(), grid.max(x.factors() as u32), 1);
    let evaluated = points.len() as u64;
    for p in points {
        let d: Vec<f64> = p.iter().map(|&j| j as f64).collect();
        // Largest lambda with (lambda d)^a <= bound_a for every a.
        let mut scale = f64::INFINITY;
        for (m, b) in basis.iter().zip(&bounds) {
            let mono: f64 = m
                .exponents()
                .iter()
                .zip(&d)
                .map(|(&e, v)| libm::pow(*v, e as f64))
                .product();
            scale = scale.min(libm::pow(b / mono, 1.0 / c));
        }
        let point: Vec<f64> = d.iter().map(|v| v * scale).collect();
        let log_vol: f64 = point
            .iter()
            .zip(x.dims())
            .map(|(v, &n)| n as f64 * libm::log(*v))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| log_vol > *b) {
            best = Some((log_vol, point));
        }
    }
    (best.map(|(_, p)| p), evaluated)
}

/// Coefficients `c_i = H_i . alpha` of a curve class.
fn curve_degrees(alpha: &CycleClass) -> Vec<Q> {
    let x = alpha.variety();
    let point = x.point();
    (0..x.factors())
        .map(|i| {
            let mut e = point.exponents().to_vec();
            e[i] -= 1;
            alpha.coefficient(&Monomial::new(e))
        })
        .collect()
}

/// `(A.alpha)^(n/(n-1)) / vol(A)^(1/(n-1))`, exactly.
fn xiao_objective(degrees: &[Q], a: &DivisorClass) -> Result<PowerProduct> {
    let n = a.variety().dim() as i64;
    let dot: Q = degrees.iter().zip(a.coords()).map(|(c, x)| c * x).sum();
    let vol = a.volume()?;
    if vol.is_zero() {
        return Err(Error::NotBig);
    }
    Ok(PowerProduct::pow(&dot, &frac(n, n - 1))?
        .mul(&PowerProduct::pow(&(Q::one() / vol), &frac(1, n - 1))?))
}

/// `volhat` of a curve class as the infimum over big nef `A`. The value is
/// the objective at the returned rational `argopt`, an exact upper bound.
pub fn volhat_curve_xiao(alpha: &CycleClass, tol: &Q, grid: u32) -> Result<OptimizationResult> {
    let x = alpha.variety();
    let n = x.dim();
    if alpha.dim() != 1 {
        return Err(Error::WrongCodimension {
            expected: n.saturating_sub(1),
            found: alpha.codim(),
        });
    }
    require_proper(alpha)?;
    check_tolerance(tol)?;
    if !alpha.is_pseudoeffective() {
        return Ok(OptimizationResult::trivial(
            Sense::Inf,
            Status::Infeasible,
            tol,
            None,
        ));
    }
    let degrees = curve_degrees(alpha);
    if let Some(j) = degrees.iter().position(Q::is_zero) {
        // Pushing x_j to infinity drives the objective to 0.
        let mut ray = vec![Q::zero(); x.factors()];
        ray[j] = Q::one();
        let ray = DivisorClass::new(x.clone(), ray)?;
        return Ok(OptimizationResult::trivial(
            Sense::Inf,
            Status::Boundary,
            tol,
            Some(ray),
        ));
    }

    // g(u) = log sum c_i e^(u_i) - sum (n_i/n) u_i is convex and invariant
    // under u -> u + t(1,..,1); its minimum is the log of the objective
    // scaled by (n-1)/n, up to a constant.
    let log_c: Vec<f64> = degrees.iter().map(rational::ln).collect();
    let weights: Vec<f64> = x.dims().iter().map(|&d| d as f64 / n as f64).collect();
    let softmax = |u: &[f64]| -> (f64, Vec<f64>) {
        let z: Vec<f64> = u.iter().zip(&log_c).map(|(u, l)| u + l).collect();
        let peak = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = z.iter().map(|v| libm::exp(v - peak)).collect();
        let total: f64 = e.iter().sum();
        (
            peak + libm::log(total),
            e.into_iter().map(|v| v / total).collect(),
        )
    };
    let g = |u: &[f64]| softmax(u).0 - u.iter().zip(&weights).map(|(u, w)| u * w).sum::<f64>();
    let grad = |u: &[f64]| -> Vec<f64> {
        softmax(u)
            .1
            .iter()
            .zip(&weights)
            .map(|(p, w)| p - w)
            .collect()
    };

    let mut seeds: Vec<(f64, Vec<f64>)> =
        optim::simplex_grid(x.factors(), grid.max(x.factors() as u32), 1)
            .into_iter()
            .map(|p| {
                let u: Vec<f64> = p.iter().map(|&j| libm::log(j as f64)).collect();
                (g(&u), u)
            })
            .collect();
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut iterations = seeds.len() as u64;
    let mut best: Option<optim::Descent> = None;
    for (_, start) in seeds.into_iter().take(3) {
        let d = optim::descend(g, grad, start, 1e-10, 50_000);
        iterations += d.iterations;
        if best.as_ref().is_none_or(|b| d.value < b.value) {
            best = Some(d);
        }
    }
    let best = best.expect("the grid has at least one interior point");
    let peak = best.point.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = best.point.iter().map(|u| libm::exp(u - peak)).collect();
    let total: f64 = raw.iter().sum();
    let coords: Vec<Q> = raw
        .iter()
        .map(|v| rational::from_f64(v / total, SIG_BITS).filter(|q| q.is_positive()))
        .collect::<Option<_>>()
        .ok_or(Error::InvalidParameter("optimizer left the open nef cone"))?;
    let a = DivisorClass::new(x.clone(), coords)?;
    let value = xiao_objective(&degrees, &a)?;
    Ok(OptimizationResult {
        sense: Sense::Inf,
        value,
        argopt: Some(a),
        status: if best.converged {
            Status::Converged
        } else {
            Status::NotConverged
        },
        tolerance: tol.clone(),
        certificate: None,
        iterations,
    })
}

/// Outcome of a Khovanskii-Teissier comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtCheck {
    /// `A^(n-k) . B^k`.
    pub lhs: Q,
    /// `vol(A)^((n-k)/n) vol(B)^(k/n)`.
    pub rhs: PowerProduct,
    pub holds: bool,
}

pub fn kt_check(a: &DivisorClass, b: &DivisorClass, k: u32) -> Result<KtCheck> {
    if a.variety() != b.variety() {
        return Err(Error::VarietyMismatch);
    }
    let n = a.variety().dim();
    if k > n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    let lhs = a.power(n - k)?.intersect(&b.power(k)?)?.degree()?;
    let (n_i, k_i) = (n as i64, k as i64);
    let rhs = PowerProduct::pow(&a.volume()?, &frac(n_i - k_i, n_i))?
        .mul(&PowerProduct::pow(&b.volume()?, &frac(k_i, n_i))?);
    let holds = rhs.cmp_rational(&lhs) != Ordering::Greater;
    Ok(KtCheck { lhs, rhs, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityCheck {
    pub base: f64,
    pub scaled: f64,
    /// `c^(n/(n-k)) volhat(alpha)`.
    pub predicted: f64,
    pub holds: bool,
}

/// Compares `volhat(c alpha)` against `c^(n/(n-k)) volhat(alpha)`, accepting
/// a difference of at most `tol (1 + volhat(alpha))`.
pub fn volhat_homogeneity_check(
    alpha: &CycleClass,
    c: &Q,
    tol: &Q,
    grid: u32,
) -> Result<HomogeneityCheck> {
    if !c.is_positive() {
        return Err(Error::InvalidParameter("scale must be positive"));
    }
    let base = volhat_sup(alpha, tol, grid)?.value_f64();
    let scaled = volhat_sup(&alpha.scale(c), tol, grid)?.value_f64();
    let (n, k) = (alpha.variety().dim() as f64, alpha.dim() as f64);
    let predicted = libm::pow(rational::to_f64(c), n / (n - k)) * base;
    let holds = libm::fabs(scaled - predicted) <= rational::to_f64(tol) * (1.0 + base);
    Ok(HomogeneityCheck {
        base,
        scaled,
        predicted,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakDuality {
    pub sup: OptimizationResult,
    pub inf: OptimizationResult,
    /// `inf - sup` in floating point.
    pub gap: f64,
    /// `sup <= inf + tol`, decided exactly.
    pub holds: bool,
}

pub fn weak_duality_check(alpha: &CycleClass, tol: &Q, grid: u32) -> Result<WeakDuality> {
    let sup = volhat_sup(alpha, tol, grid)?;
    let inf = volhat_curve_xiao(alpha, tol, grid)?;
    let sup_value = sup.value.exact().expect("the sup value is rational");
    let holds = inf.value.cmp_rational(&(&sup_value - tol)) != Ordering::Less;
    let gap = inf.value_f64() - rational::to_f64(&sup_value);
    Ok(WeakDuality {
        sup,
        inf,
        gap,
        holds,
    })
}

/// `c^(n/(n-k))`, the factor every volume-type function picks up under
/// `alpha -> c alpha`.
pub fn homogeneity_factor(c: &Q, n: u32, k: u32) -> Result<PowerProduct> {
    if k >= n {
        return Err(Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        });
    }
    PowerProduct::pow(c, &frac(n as i64, (n - k) as i64))
}
