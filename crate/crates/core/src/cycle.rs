//! Numerical classes on `X = P^{n_1} x ... x P^{n_r}`.
//!
//! `N^*(X)` is `Q[H_1, ..., H_r] / (H_1^{n_1+1}, ..., H_r^{n_r+1})`, where
//! `H_i` is the pullback of the hyperplane class of the `i`-th factor. The
//! monomials `H^a = prod H_i^{a_i}` with `a_i <= n_i` form a basis, the top
//! monomial `H^{(n_1, ..., n_r)}` is the class of a point, and the pairing
//! between complementary degrees sends `H^a` to the dual monomial
//! `H^{n - a}`. Every effective cycle is a non-negative combination of
//! products of linear subspaces, so in each degree the pseudo-effective cone
//! and the nef cone are both the non-negative orthant of the monomial basis.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// A product of projective spaces, given by the factor dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarietySpec {
    dims: Vec<u32>,
    n: u32,
}

impl VarietySpec {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidVariety("needs at least one factor"));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidVariety("factor dimensions must be positive"));
        }
        let n = dims
            .iter()
            .try_fold(0u32, |acc, &d| acc.checked_add(d))
            .ok_or(Error::InvalidVariety("dimension overflow"))?;
        Ok(VarietySpec { dims, n })
    }

    pub fn projective_space(n: u32) -> Result<Self> {
        VarietySpec::new(vec![n])
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    /// Total dimension `n = sum n_i`.
    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Number of factors `r`.
    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    /// Monomials of total degree `codim`, in lexicographic order.
    pub fn basis(&self, codim: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.dims.len()];
        self.fill_basis(0, codim, &mut current, &mut out);
        out
    }

    fn fill_basis(
        &self,
        i: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == self.dims.len() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let tail: u32 = self.dims[i + 1..].iter().sum();
        for a in 0..=self.dims[i].min(remaining) {
            if remaining - a > tail {
                continue;
            }
            current[i] = a;
            self.fill_basis(i + 1, remaining - a, current, out);
        }
        current[i] = 0;
    }

    /// The monomial `(n_1, ..., n_r)` carrying the class of a point.
    pub fn point(&self) -> Monomial {
        Monomial(self.dims.clone())
    }

    /// `n! / prod n_i!`, the degree of `(H_1 + ... + H_r)^n`.
    pub fn top_multinomial(&self) -> BigUint {
        let denom = self
            .dims
            .iter()
            .fold(BigUint::one(), |acc, &d| acc * rational::factorial(d));
        rational::factorial(self.n) / denom
    }

    /// Whether the monomial is a non-zero basis element.
    pub fn supports(&self, m: &Monomial) -> bool {
        m.0.len() == self.dims.len() && m.0.iter().zip(&self.dims).all(|(a, n)| a <= n)
    }

    fn check_k(&self, k: u32) -> Result<()> {
        if k >= self.n {
            return Err(Error::DimensionOutOfRange {
                k: k as i64,
                n: self.n as i64,
            });
        }
        Ok(())
    }
}

/// Exponent vector of `prod H_i^{a_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A class in `N^c(X) = N_{n-c}(X)` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    variety: VarietySpec,
    codim: u32,
    coeffs: BTreeMap<Monomial, Q>,
}

impl CycleClass {
    /// Builds a class from `(monomial, coefficient)` terms. Repeated
    /// monomials are summed; monomials with some `a_i > n_i` are the zero
    /// class and are dropped.
    pub fn new(
        variety: VarietySpec,
        codim: u32,
        terms: impl IntoIterator<Item = (Monomial, Q)>,
    ) -> Result<Self> {
        if codim > variety.dim() {
            return Err(Error::CodimensionTooLarge {
                codim,
                dim: variety.dim(),
            });
        }
        let mut coeffs: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            if m.0.len() != variety.factors() {
                return Err(Error::ArityMismatch {
                    expected: variety.factors(),
                    found: m.0.len(),
                });
            }
            if m.degree() != codim {
                return Err(Error::DegreeMismatch {
                    expected: codim,
                    found: m.degree(),
                });
            }
            if !variety.supports(&m) {
                continue;
            }
            *coeffs.entry(m).or_insert_with(Q::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(CycleClass {
            variety,
            codim,
            coeffs,
        })
    }

    /// Coefficients listed in the order of [`VarietySpec::basis`].
    pub fn from_basis_coeffs(variety: VarietySpec, codim: u32, coeffs: &[Q]) -> Result<Self> {
        if codim > variety.dim() {
            return Err(Error::CodimensionTooLarge {
                codim,
                dim: variety.dim(),
            });
        }
        let basis = variety.basis(codim);
        if basis.len() != coeffs.len() {
            return Err(Error::InvalidParameter(
                "coefficient count differs from the basis size",
            ));
        }
        CycleClass::new(
            variety,
            codim,
            basis.into_iter().zip(coeffs.iter().cloned()),
        )
    }

    pub fn zero(variety: VarietySpec, codim: u32) -> Result<Self> {
        CycleClass::new(variety, codim, [])
    }

    /// The fundamental class `[X]` (codimension 0).
    pub fn fundamental(variety: VarietySpec) -> Self {
        let unit = Monomial(vec![0; variety.factors()]);
        CycleClass::new(variety, 0, [(unit, Q::one())]).expect("unit monomial")
    }

    pub fn point(variety: VarietySpec) -> Self {
        let codim = variety.dim();
        let m = variety.point();
        CycleClass::new(variety, codim, [(m, Q::one())]).expect("point monomial")
    }

    pub fn monomial(variety: VarietySpec, exponents: Vec<u32>) -> Result<Self> {
        let m = Monomial(exponents);
        let codim = m.degree();
        CycleClass::new(variety, codim, [(m, Q::one())])
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    /// Dimension `k = n - codim` of the cycles the class represents.
    pub fn dim(&self) -> u32 {
        self.variety.dim() - self.codim
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.coeffs.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Non-zero terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.coeffs.iter()
    }

    /// Dense coefficient vector over [`VarietySpec::basis`].
    pub fn basis_coeffs(&self) -> Vec<Q> {
        self.variety
            .basis(self.codim)
            .iter()
            .map(|m| self.coefficient(m))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(rational::is_integral)
    }

    fn check_same(&self, other: &CycleClass) -> Result<()> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch);
        }
        if self.codim != other.codim {
            return Err(Error::WrongCodimension {
                expected: self.codim,
                found: other.codim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycleClass) -> Result<CycleClass> {
        self.check_same(other)?;
        let terms = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|(m, c)| (m.clone(), c.clone()));
        CycleClass::new(self.variety.clone(), self.codim, terms)
    }

    pub fn checked_sub(&self, other: &CycleClass) -> Result<CycleClass> {
        self.checked_add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> CycleClass {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect()
        };
        CycleClass {
            variety: self.variety.clone(),
            codim: self.codim,
            coeffs,
        }
    }

    /// Intersection product: multiplication in the truncated polynomial ring.
    pub fn intersect(&self, other: &CycleClass) -> Result<CycleClass> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch);
        }
        let codim = self.codim + other.codim;
        if codim > self.variety.dim() {
            return Err(Error::CodimensionTooLarge {
                codim,
                dim: self.variety.dim(),
            });
        }
        let mut terms = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                terms.push((ma.times(mb), ca * cb));
            }
        }
        CycleClass::new(self.variety.clone(), codim, terms)
    }

    /// Degree of a zero-cycle class: its coefficient on the point class.
    pub fn degree(&self) -> Result<Q> {
        if self.codim != self.variety.dim() {
            return Err(Error::WrongCodimension {
                expected: self.variety.dim(),
                found: self.codim,
            });
        }
        Ok(self.coefficient(&self.variety.point()))
    }

    /// `alpha . A^k` where `k` is the dimension of the class.
    pub fn degree_with(&self, a: &DivisorClass) -> Result<Q> {
        self.intersect(&a.power(self.dim())?)?.degree()
    }

    /// Pseudo-effective: every basis coefficient is non-negative.
    pub fn is_pseudoeffective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Nef in the dual sense; coincides with pseudo-effectivity here.
    pub fn is_nef_class(&self) -> bool {
        self.is_pseudoeffective()
    }

    /// Big: every basis coefficient is strictly positive.
    pub fn is_big(&self) -> bool {
        let basis_len = self.variety.basis(self.codim).len();
        self.coeffs.len() == basis_len && self.coeffs.values().all(|c| c.is_positive())
    }
}

/// `A = sum x_i H_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    variety: VarietySpec,
    coords: Vec<Q>,
}

impl DivisorClass {
    pub fn new(variety: VarietySpec, coords: Vec<Q>) -> Result<Self> {
        if coords.len() != variety.factors() {
            return Err(Error::ArityMismatch {
                expected: variety.factors(),
                found: coords.len(),
            });
        }
        Ok(DivisorClass { variety, coords })
    }

    pub fn from_ints(variety: VarietySpec, coords: &[i64]) -> Result<Self> {
        DivisorClass::new(variety, coords.iter().map(|&c| rational::int(c)).collect())
    }

    /// `H_1 + ... + H_r`, the smallest very ample class.
    pub fn hyperplane_sum(variety: VarietySpec) -> Self {
        let coords = vec![Q::one(); variety.factors()];
        DivisorClass { variety, coords }
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn scale(&self, c: &Q) -> DivisorClass {
        DivisorClass {
            variety: self.variety.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_nef(&self) -> bool {
        self.coords.iter().all(|x| !x.is_negative())
    }

    /// Big and nef: every coordinate strictly positive.
    pub fn is_big(&self) -> bool {
        self.coords.iter().all(|x| x.is_positive())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(rational::is_integral)
    }

    /// Integral with every coordinate at least one.
    pub fn is_very_ample(&self) -> bool {
        self.is_integral() && self.coords.iter().all(|x| *x >= Q::one())
    }

    pub fn to_cycle(&self) -> CycleClass {
        let r = self.variety.factors();
        let terms = self.coords.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; r];
            e[i] = 1;
            (Monomial(e), c.clone())
        });
        CycleClass::new(self.variety.clone(), 1, terms).expect("degree one monomials")
    }

    /// `A^j` expanded with multinomial coefficients; `A^0 = [X]`.
    pub fn power(&self, j: u32) -> Result<CycleClass> {
        if j > self.variety.dim() {
            return Err(Error::CodimensionTooLarge {
                codim: j,
                dim: self.variety.dim(),
            });
        }
        let j_fact = rational::factorial(j);
        let terms = self.variety.basis(j).into_iter().map(|m| {
            let mut coeff = Q::from_integer(BigInt::from(j_fact.clone()));
            for (x, &a) in self.coords.iter().zip(m.exponents()) {
                coeff /= Q::from_integer(BigInt::from(rational::factorial(a)));
                coeff *= num_traits::pow(x.clone(), a as usize);
            }
            (m, coeff)
        });
        CycleClass::new(self.variety.clone(), j, terms)
    }

    /// `vol(A) = A^n = (n! / prod n_i!) prod x_i^{n_i}` for nef `A`.
    pub fn volume(&self) -> Result<Q> {
        if !self.is_nef() {
            return Err(Error::NotNef);
        }
        Ok(self.self_intersection())
    }

    /// `A^n` without the nef check.
    pub fn self_intersection(&self) -> Q {
        let mut v = rational::from_biguint(self.variety.top_multinomial());
        for (x, &d) in self.coords.iter().zip(self.variety.dims()) {
            v *= num_traits::pow(x.clone(), d as usize);
        }
        v
    }

    /// `h^0(X, O(d_1, ..., d_r)) = prod C(n_i + d_i, n_i)`, zero as soon as
    /// some `d_i` is negative.
    pub fn h0(&self) -> Result<BigUint> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let mut acc = BigUint::one();
        for (x, &n) in self.coords.iter().zip(self.variety.dims()) {
            if x.is_negative() {
                return Ok(BigUint::zero());
            }
            let d: u64 = num_traits::ToPrimitive::to_u64(&x.to_integer())
                .ok_or(Error::InvalidParameter("divisor coordinate too large"))?;
            acc *= rational::binomial(d + n as u64, n as u64);
        }
        Ok(acc)
    }
}

/// Checks `0 <= k < n` for a class of dimension `k`.
pub(crate) fn require_proper(alpha: &CycleClass) -> Result<()> {
    alpha.variety().check_k(alpha.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(dims: &[u32]) -> VarietySpec {
        VarietySpec::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_varieties() {
        assert!(VarietySpec::new(vec![]).is_err());
        assert!(VarietySpec::new(vec![2, 0]).is_err());
        assert_eq!(p(&[2, 1, 3]).dim(), 6);
    }

    #[test]
    fn basis_is_lexicographic() {
        let x = p(&[2, 2]);
        let b: Vec<_> = x.basis(2).into_iter().map(|m| m.0).collect();
        assert_eq!(b, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(p(&[2, 1]).basis(3).len(), 1);
        assert_eq!(p(&[1, 1, 1]).basis(2).len(), 3);
        assert_eq!(p(&[3]).basis(0), vec![Monomial(vec![0])]);
    }

    #[test]
    fn rulings_meet_in_a_point() {
        let x = p(&[1, 1]);
        let h1 = CycleClass::monomial(x.clone(), vec![1, 0]).unwrap();
        let h2 = CycleClass::monomial(x.clone(), vec![0, 1]).unwrap();
        let prod = h1.intersect(&h2).unwrap();
        assert_eq!(prod, CycleClass::point(x));
        assert_eq!(prod.degree().unwrap(), int(1));
        // H_1^2 = 0 on P^1 x P^1
        assert!(h1.intersect(&h1).unwrap().is_zero());
    }

    #[test]
    fn truncation_on_p2_times_p1() {
        let x = p(&[2, 1]);
        let a = DivisorClass::from_ints(x.clone(), &[1, 1])
            .unwrap()
            .to_cycle();
        let sq = a.intersect(&a).unwrap();
        let expected = CycleClass::new(
            x,
            2,
            [
                (Monomial(vec![2, 0]), int(1)),
                (Monomial(vec![1, 1]), int(2)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn intersect_errors() {
        let a = CycleClass::point(p(&[2]));
        let b = CycleClass::point(p(&[1, 1]));
        assert_eq!(a.intersect(&b), Err(Error::VarietyMismatch));
        let h = CycleClass::monomial(p(&[2]), vec![1]).unwrap();
        assert!(matches!(
            a.intersect(&h),
            Err(Error::CodimensionTooLarge { .. })
        ));
        assert!(matches!(h.degree(), Err(Error::WrongCodimension { .. })));
    }

    #[test]
    fn divisor_powers_and_volumes() {
        let x = p(&[1, 1]);
        let a = DivisorClass::new(x.clone(), vec![frac(1, 2), int(3)]).unwrap();
        assert_eq!(a.power(2).unwrap().degree().unwrap(), int(3));
        assert_eq!(a.power(0).unwrap(), CycleClass::fundamental(x.clone()));
        assert!(a.power(3).is_err());
        let cube = DivisorClass::from_ints(p(&[1, 1, 1]), &[1, 1, 1]).unwrap();
        assert_eq!(cube.power(3).unwrap().degree().unwrap(), int(6));
        let b = DivisorClass::from_ints(p(&[2, 1]), &[2, 3]).unwrap();
        assert_eq!(b.volume().unwrap(), int(36));
        let neg = DivisorClass::from_ints(x, &[1, -1]).unwrap();
        assert_eq!(neg.volume(), Err(Error::NotNef));
    }

    #[test]
    fn cone_membership() {
        let x = p(&[1, 1]);
        let d = DivisorClass::from_ints(x.clone(), &[1, -1])
            .unwrap()
            .to_cycle();
        assert!(!d.is_pseudoeffective());
        let z = CycleClass::zero(x, 1).unwrap();
        assert!(z.is_pseudoeffective() && !z.is_big());
        let y = p(&[2, 2]);
        let c = CycleClass::new(
            y.clone(),
            2,
            [
                (Monomial(vec![1, 1]), int(1)),
                (Monomial(vec![2, 0]), int(1)),
            ],
        )
        .unwrap();
        // H_2^2 has coefficient zero
        assert!(c.is_pseudoeffective() && !c.is_big());
        let full = CycleClass::from_basis_coeffs(y, 2, &[int(1), int(1), int(1)]).unwrap();
        assert!(full.is_big());
    }

    #[test]
    fn section_counts() {
        let p3 = p(&[3]);
        assert_eq!(
            DivisorClass::from_ints(p3.clone(), &[2])
                .unwrap()
                .h0()
                .unwrap(),
            BigUint::from(10u8)
        );
        assert_eq!(
            DivisorClass::from_ints(p(&[1, 1]), &[1, 1])
                .unwrap()
                .h0()
                .unwrap(),
            BigUint::from(4u8)
        );
        assert_eq!(
            DivisorClass::from_ints(p(&[2]), &[2])
                .unwrap()
                .h0()
                .unwrap(),
            BigUint::from(6u8)
        );
        assert_eq!(
            DivisorClass::from_ints(p3.clone(), &[-1])
                .unwrap()
                .h0()
                .unwrap(),
            BigUint::zero()
        );
        let half = DivisorClass::new(p3, vec![frac(1, 2)]).unwrap();
        assert_eq!(half.h0(), Err(Error::NotIntegral));
    }

    #[test]
    fn oversized_exponents_are_zero() {
        let c = CycleClass::new(p(&[1, 2]), 2, [(Monomial(vec![2, 0]), int(5))]).unwrap();
        assert!(c.is_zero());
        assert!(CycleClass::new(p(&[1, 2]), 2, [(Monomial(vec![1, 0]), int(5))]).is_err());
    }
}
