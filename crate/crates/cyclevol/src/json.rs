//! JSON shapes for classes, divisors and reports.
//!
//! Rationals travel as strings `"p/q"` (integers are also accepted on
//! input). Irrational values carry the exact symbolic form next to an
//! outward-rounded decimal interval.

use std::collections::BTreeMap;

use cyclevol_core::mobility::BoundReport;
use cyclevol_core::power::digits_to_bits;
use cyclevol_core::rational::{self, Rounding};
use cyclevol_core::volhat::{OptimizationResult, Sense};
use cyclevol_core::{CycleClass, DivisorClass, Monomial, PowerProduct, VarietySpec, Q};
use serde::{Deserialize, Serialize};

use crate::job::JobError;

/// Decimal digits used for rendered values.
pub const DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Int(i64),
    Text(String),
}

impl RationalRepr {
    pub fn parse(&self) -> Result<Q, JobError> {
        match self {
            RationalRepr::Int(n) => Ok(rational::int(*n)),
            RationalRepr::Text(s) => rational::parse(s)
                .ok_or_else(|| JobError::Parse(format!("not a rational number: {s:?}"))),
        }
    }

    pub fn from_q(q: &Q) -> Self {
        RationalRepr::Text(rational::to_fraction_string(q))
    }
}

pub fn q_str(q: &Q) -> String {
    rational::to_fraction_string(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub exponents: Vec<u32>,
    pub coeff: RationalRepr,
}

/// A cycle class either as explicit terms or as coefficients over the
/// lexicographic monomial basis of the given codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleClassDto {
    pub codim: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<RationalRepr>>,
}

impl CycleClassDto {
    pub fn to_class(&self, variety: &VarietySpec) -> Result<CycleClass, JobError> {
        let class = match (&self.coeffs, self.terms.is_empty()) {
            (Some(_), false) => {
                return Err(JobError::Parse(
                    "give either terms or coeffs, not both".into(),
                ))
            }
            (Some(coeffs), true) => {
                let coeffs = coeffs
                    .iter()
                    .map(RationalRepr::parse)
                    .collect::<Result<Vec<_>, _>>()?;
                CycleClass::from_basis_coeffs(variety.clone(), self.codim, &coeffs)?
            }
            (None, _) => {
                let terms = self
                    .terms
                    .iter()
                    .map(|t| Ok((Monomial::new(t.exponents.clone()), t.coeff.parse()?)))
                    .collect::<Result<Vec<_>, JobError>>()?;
                CycleClass::new(variety.clone(), self.codim, terms)?
            }
        };
        Ok(class)
    }

    pub fn from_class(class: &CycleClass) -> Self {
        CycleClassDto {
            codim: class.codim(),
            terms: class
                .terms()
                .map(|(m, c)| TermDto {
                    exponents: m.exponents().to_vec(),
                    coeff: RationalRepr::from_q(c),
                })
                .collect(),
            coeffs: None,
        }
    }
}

pub fn parse_divisor(
    variety: &VarietySpec,
    coords: &[RationalRepr],
) -> Result<DivisorClass, JobError> {
    let coords = coords
        .iter()
        .map(RationalRepr::parse)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DivisorClass::new(variety.clone(), coords)?)
}

pub fn divisor_strings(a: &DivisorClass) -> Vec<String> {
    a.coords().iter().map(q_str).collect()
}

/// A possibly irrational non-negative value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueDto {
    /// Present when the value is rational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// `c * (b)^(e) * ...`.
    pub symbolic: String,
    pub lower: String,
    pub upper: String,
    pub approx: f64,
}

impl ValueDto {
    pub fn from_power(p: &PowerProduct) -> Self {
        let enclosure = p.eval(digits_to_bits(DIGITS));
        ValueDto {
            exact: p.exact().map(|q| q_str(&q)),
            symbolic: p.to_string(),
            lower: rational::to_decimal(&enclosure.lo, DIGITS, Rounding::Down),
            upper: rational::to_decimal(&enclosure.hi, DIGITS, Rounding::Up),
            approx: p.to_f64(),
        }
    }

    pub fn from_rational(q: &Q) -> Self {
        ValueDto::from_power(&PowerProduct::rational(q.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisDto {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDto {
    pub formula: String,
    /// The inequality this value certifies, with its hypotheses.
    pub provenance: String,
    pub applicable: bool,
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<ValueDto>,
    pub hypotheses: Vec<HypothesisDto>,
}

impl BoundDto {
    pub fn new(report: &BoundReport, parameters: BTreeMap<String, String>) -> Self {
        BoundDto {
            formula: report.formula.name().to_string(),
            provenance: report.formula.statement().to_string(),
            applicable: report.is_applicable(),
            parameters,
            value: report.value.as_ref().map(ValueDto::from_power),
            hypotheses: report
                .hypotheses
                .iter()
                .map(|h| HypothesisDto {
                    name: h.name.to_string(),
                    holds: h.holds,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsEntry {
    pub n: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsReport {
    /// Set when a single pair was asked for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    pub entries: Vec<ConstantsEntry>,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityDto {
    pub s: u64,
    pub delta: String,
    pub delta_log2: i64,
    pub mu: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub alpha: CycleClassDto,
    pub divisor: Vec<String>,
    pub bounds: Vec<BoundDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<ContinuityDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationDto {
    /// `sup` or `inf`.
    pub formulation: String,
    pub status: String,
    pub value: ValueDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub argopt: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ValueDto>,
    pub tolerance: String,
    pub iterations: u64,
}

impl OptimizationDto {
    pub fn new(r: &OptimizationResult) -> Self {
        OptimizationDto {
            formulation: match r.sense {
                Sense::Sup => "sup",
                Sense::Inf => "inf",
            }
            .to_string(),
            status: r.status.name().to_string(),
            value: ValueDto::from_power(&r.value),
            argopt: r.argopt.as_ref().map(divisor_strings),
            certificate: r.certificate.as_ref().map(ValueDto::from_power),
            tolerance: q_str(&r.tolerance),
            iterations: r.iterations,
        }
    }
}

/// Outcome of a named consistency check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDto {
    pub name: String,
    pub holds: bool,
    pub details: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolhatReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<CycleClassDto>,
    pub results: Vec<OptimizationDto>,
    pub checks: Vec<CheckDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeshadriReport {
    pub b: u64,
    pub divisor: Vec<String>,
    pub t: u64,
    pub lo: String,
    pub hi: ValueDto,
    pub collapsed: bool,
    pub valid_for: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmobRow {
    pub t: u64,
    pub lower: ValueDto,
    pub upper: String,
    /// `1 - ((t-1)/t)^(kn/(n-k))`.
    pub gap: ValueDto,
    pub gap_exact: bool,
    /// Growth-bound envelope for `[H^(n-k)]`.
    pub envelope: ValueDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmobReport {
    pub divisor: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<WmobRow>,
    /// `wmob([L]) = vol(L)` when no `k` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor_value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub kind: String,
    /// The count itself, an exact integer, when the kind yields one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    pub details: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<ValueDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionDto {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionDto>,
}

/// Every report a job can produce, tagged with its command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Constants(ConstantsReport),
    Bounds(BoundsReport),
    Volhat(VolhatReport),
    Seshadri(SeshadriReport),
    Wmob(WmobReport),
    Mc(McReport),
    Verify(VerifyReport),
}
