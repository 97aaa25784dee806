//! Job descriptions and their evaluation.

use std::collections::BTreeMap;

use cyclevol_core::mobility::{
    ci_points_p3, continuity_neighborhood, largest_dyadic_c, mc_divisor_exact, mc_family_dim_bound,
    mc_upper_generic, mc_upper_nonbig, mc_upper_precise, minimal_s, mob_ci_lower, mob_upper,
    perrin_bound, BoundReport, FormulaId, Variant,
};
use cyclevol_core::power::digits_to_bits;
use cyclevol_core::rational::{self, frac, Rounding};
use cyclevol_core::seshadri::{
    seshadri_interval, wmc_growth_report, wmc_upper, wmc_upper_precise, wmob_ci_bounds,
    wmob_divisor,
};
use cyclevol_core::volhat::{
    default_tolerance, kt_check, volhat_curve_xiao, volhat_homogeneity_check, volhat_sup,
    weak_duality_check, Status, DEFAULT_GRID,
};
use cyclevol_core::{epsilon, tau, DivisorClass, PowerProduct, RecursionTable, VarietySpec, Q};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::acceptance;
use crate::json::{
    divisor_strings, parse_divisor, q_str, BoundDto, BoundsReport, CheckDto, ConstantsEntry,
    ConstantsReport, ContinuityDto, CycleClassDto, McReport, OptimizationDto, RationalRepr, Report,
    SeshadriReport, ValueDto, VerifyReport, VolhatReport, WmobReport, WmobRow, DIGITS,
};

pub mod exit {
    pub const OK: u8 = 0;
    pub const PARSE: u8 = 2;
    pub const INAPPLICABLE: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const TOLERANCE: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] cyclevol_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl JobError {
    pub fn exit_code(&self) -> u8 {
        use cyclevol_core::Error as E;
        match self {
            JobError::Core(
                E::UndefinedConstant { .. } | E::NotNef | E::NotBig | E::NotVeryAmple,
            ) => exit::INAPPLICABLE,
            JobError::Core(E::NotPseudoEffective) => exit::INFEASIBLE,
            _ => exit::PARSE,
        }
    }
}

impl From<serde_json::Error> for JobError {
    fn from(e: serde_json::Error) -> Self {
        JobError::Parse(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Constants,
    Bounds,
    Volhat,
    Seshadri,
    Wmob,
    Mc,
    Verify,
}

/// One unit of work as read from a job file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// `[n_1, ..., n_r]` for `P^{n_1} x ... x P^{n_r}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<Vec<u32>>,
    pub command: Command,
    #[serde(default)]
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

/// Numerical settings shared by every job of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub tol: Q,
    pub grid: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: default_tolerance(),
            grid: DEFAULT_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            exit_code: exit::OK,
        }
    }
}

/// Inclusive range `lo:hi`.
pub fn parse_sweep(text: &str) -> Result<(u64, u64), JobError> {
    let bad = || JobError::Parse(format!("sweep must look like lo:hi, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn payload<T: for<'de> Deserialize<'de>>(value: &Value) -> Result<T, JobError> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value.clone()
    };
    serde_json::from_value(value).map_err(|e| JobError::Parse(format!("payload: {e}")))
}

impl JobSpec {
    fn variety(&self) -> Result<VarietySpec, JobError> {
        let dims = self
            .variety
            .clone()
            .ok_or_else(|| JobError::Parse("this command needs a variety".into()))?;
        Ok(VarietySpec::new(dims)?)
    }

    /// Runs the job. Errors are bad input or inapplicable hypotheses;
    /// anything that produced a report comes back as an [`Outcome`] whose
    /// exit code may still be nonzero.
    pub fn run(&self, settings: &Settings) -> Result<Outcome, JobError> {
        match self.command {
            Command::Constants => run_constants(payload(&self.payload)?),
            Command::Bounds => run_bounds(&self.variety()?, payload(&self.payload)?),
            Command::Volhat => run_volhat(&self.variety()?, payload(&self.payload)?, settings),
            Command::Seshadri => run_seshadri(&self.variety()?, payload(&self.payload)?),
            Command::Wmob => run_wmob(&self.variety()?, payload(&self.payload)?),
            Command::Mc => run_mc(self.variety.as_ref(), payload(&self.payload)?),
            Command::Verify => {
                let _: Empty = payload(&self.payload)?;
                let criteria = acceptance::run_all();
                let passed = criteria.iter().all(|c| c.passed);
                let exit_code = if passed { exit::OK } else { exit::TOLERANCE };
                Ok(Outcome {
                    report: Report::Verify(VerifyReport { passed, criteria }),
                    exit_code,
                })
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsParams {
    n: Option<u32>,
    k: Option<u32>,
    /// Whole table for `n <= max_n`.
    max_n: Option<u32>,
}

const CONSTANTS_PROVENANCE: [&str; 3] = [
    "epsilon(n, n-1) = tau(n, n-1) = 1",
    "epsilon(m, k) = (m-k-1)/(m-k) epsilon(m-1, k) / ((m-1)/(m-k-1) - epsilon(m-1, k))",
    "tau(m, k) = min{ (m-k-1)/(m-1) tau(m-1, k), (m-k-1)/(m-k) tau(m-1, k) / ((m-1)/(m-k-1) - tau(m-1, k)) }",
];

fn run_constants(p: ConstantsParams) -> Result<Outcome, JobError> {
    let provenance = CONSTANTS_PROVENANCE.iter().map(|s| s.to_string()).collect();
    match (p.n, p.k, p.max_n) {
        (Some(n), Some(k), None) => {
            let (e, t) = (q_str(&epsilon(n, k)?), q_str(&tau(n, k)?));
            let entry = ConstantsEntry {
                n,
                k,
                epsilon: Some(e.clone()),
                tau: Some(t.clone()),
                note: None,
            };
            let report = ConstantsReport {
                epsilon: Some(e),
                tau: Some(t),
                entries: vec![entry],
                provenance,
            };
            Ok(Outcome::ok(Report::Constants(report)))
        }
        (n, None, max_n) if n.is_some() != max_n.is_some() => {
            let top = n.or(max_n).unwrap_or(0);
            if top == 0 {
                return Err(JobError::Parse("n must be positive".into()));
            }
            let table = RecursionTable::build(top);
            let first = if max_n.is_some() { 1 } else { top };
            let entries = (first..=top)
                .flat_map(|m| (0..m).map(move |k| (m, k)))
                .map(|(m, k)| match (table.epsilon(m, k), table.tau(m, k)) {
                    (Ok(e), Ok(t)) => ConstantsEntry {
                        n: m,
                        k,
                        epsilon: Some(q_str(e)),
                        tau: Some(q_str(t)),
                        note: None,
                    },
                    (Err(err), _) | (_, Err(err)) => ConstantsEntry {
                        n: m,
                        k,
                        epsilon: None,
                        tau: None,
                        note: Some(err.to_string()),
                    },
                })
                .collect();
            Ok(Outcome::ok(Report::Constants(ConstantsReport {
                epsilon: None,
                tau: None,
                entries,
                provenance,
            })))
        }
        _ => Err(JobError::Parse(
            "constants needs n and k, only n, or only max_n".into(),
        )),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsParams {
    alpha: CycleClassDto,
    /// Defaults to `H_1 + ... + H_r`.
    divisor: Option<Vec<RationalRepr>>,
    /// Defaults to the least admissible `s`.
    s: Option<u64>,
    sweep: Option<String>,
    /// Threshold of the third variant; defaults to 1.
    t: Option<u64>,
    /// Section-growth constant of the generic bound; defaults to the
    /// largest admissible power of two.
    c: Option<RationalRepr>,
    /// Restricts the precise bounds to one variant (1, 2 or 3).
    variant: Option<u8>,
    /// Restricts the report to these formula names.
    formulas: Option<Vec<String>>,
    /// Also report the neighbourhood on which the mobility stays below `mu`.
    mu: Option<RationalRepr>,
}

fn params(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn run_bounds(x: &VarietySpec, p: BoundsParams) -> Result<Outcome, JobError> {
    let alpha = p.alpha.to_class(x)?;
    let a = match &p.divisor {
        Some(coords) => parse_divisor(x, coords)?,
        None => DivisorClass::hyperplane_sum(x.clone()),
    };
    let wanted: Option<Vec<FormulaId>> = p
        .formulas
        .as_ref()
        .map(|names| {
            names
                .iter()
                .map(|n| {
                    FormulaId::from_name(n)
                        .ok_or_else(|| JobError::Parse(format!("unknown formula {n:?}")))
                })
                .collect()
        })
        .transpose()?;
    let include = |f: FormulaId| wanted.as_ref().is_none_or(|w| w.contains(&f));
    let t = p.t.unwrap_or(1);
    let variants: Vec<Variant> = match p.variant {
        Some(i) => vec![Variant::from_index(i, Some(t))?],
        None => vec![Variant::Basic, Variant::Epsilon, Variant::Tau { t }],
    };
    let s_values: Vec<u64> = match (&p.sweep, p.s) {
        (Some(_), Some(_)) => return Err(JobError::Parse("give either s or sweep".into())),
        (Some(range), None) => {
            let (lo, hi) = parse_sweep(range)?;
            (lo..=hi).collect()
        }
        (None, Some(s)) => vec![s],
        (None, None) => vec![minimal_s(&alpha, &a)?],
    };

    let mut bounds = Vec::new();
    if include(FormulaId::GenericCount) {
        let c = match &p.c {
            Some(c) => c.parse()?,
            None => largest_dyadic_c(&a)?,
        };
        let r = mc_upper_generic(&alpha, &a, &c)?;
        bounds.push(BoundDto::new(&r, params(&[("c", q_str(&c))])));
    }
    let per_s: Vec<Vec<BoundDto>> = s_values
        .par_iter()
        .map(|&s| -> Result<Vec<BoundDto>, JobError> {
            let mut out = Vec::new();
            let with = |v: Option<Variant>| {
                let mut e = vec![("s", s.to_string())];
                if let Some(Variant::Tau { t }) = v {
                    e.push(("t", t.to_string()));
                }
                params(&e)
            };
            let mut push = |r: BoundReport, v: Option<Variant>| {
                if include(r.formula) {
                    out.push(BoundDto::new(&r, with(v)));
                }
            };
            for &v in &variants {
                push(mc_upper_precise(&alpha, &a, s, v)?, Some(v));
            }
            push(mc_upper_nonbig(&alpha, &a, s)?, None);
            push(mob_upper(&alpha, &a, s)?, None);
            for &v in &variants {
                push(wmc_upper_precise(&alpha, &a, s, v)?, Some(v));
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    bounds.extend(per_s.into_iter().flatten());
    if include(FormulaId::WeightedGrowth) {
        bounds.push(BoundDto::new(
            &wmc_growth_report(&alpha, &a)?,
            BTreeMap::new(),
        ));
    }

    let continuity = match &p.mu {
        Some(mu) => {
            let mu = mu.parse()?;
            let m = continuity_neighborhood(&alpha, &a, &mu)?;
            Some(ContinuityDto {
                s: m.s,
                delta: q_str(&m.delta),
                delta_log2: m.delta_log2,
                mu: q_str(&mu),
                provenance: "mob(beta) < mu whenever beta.A^k < s A^n and beta - delta s [A]^(n-k) is not \
                             pseudo-effective, for n! 2^(kn+3n+1) s^(n/(n-k)) A^n delta^tau(n,k) < mu"
                    .into(),
            })
        }
        None => None,
    };
    let exit_code = if bounds.iter().any(|b| b.applicable) || continuity.is_some() {
        exit::OK
    } else {
        exit::INAPPLICABLE
    };
    let report = BoundsReport {
        alpha: CycleClassDto::from_class(&alpha),
        divisor: divisor_strings(&a),
        bounds,
        continuity,
    };
    Ok(Outcome {
        report: Report::Bounds(report),
        exit_code,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VolhatParams {
    alpha: Option<CycleClassDto>,
    /// `sup`, `xiao` or `both`.
    formulation: Option<String>,
    /// `kt`, `homogeneity` or `duality`.
    check: Option<String>,
    /// Scale for the homogeneity check.
    c: Option<RationalRepr>,
    /// Divisors and dimension for the Khovanskii-Teissier check.
    a: Option<Vec<RationalRepr>>,
    b: Option<Vec<RationalRepr>>,
    k: Option<u32>,
}

fn details(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    params(entries)
}

fn f64_str(x: f64) -> String {
    format!("{x:.12e}")
}

fn run_volhat(x: &VarietySpec, p: VolhatParams, settings: &Settings) -> Result<Outcome, JobError> {
    let alpha = p.alpha.as_ref().map(|a| a.to_class(x)).transpose()?;
    let need_alpha = || {
        alpha
            .clone()
            .ok_or_else(|| JobError::Parse("volhat needs alpha".into()))
    };
    let (tol, grid) = (&settings.tol, settings.grid);
    let mut results = Vec::new();
    let mut checks = Vec::new();

    match p.check.as_deref() {
        None => {
            let alpha = need_alpha()?;
            let formulation = p.formulation.as_deref().unwrap_or("sup");
            let (sup, inf) = match formulation {
                "sup" => (true, false),
                "xiao" => (false, true),
                "both" => (true, true),
                other => return Err(JobError::Parse(format!("unknown formulation {other:?}"))),
            };
            if sup {
                results.push(volhat_sup(&alpha, tol, grid)?);
            }
            if inf {
                results.push(volhat_curve_xiao(&alpha, tol, grid)?);
            }
        }
        Some("kt") => {
            let a = parse_divisor(
                x,
                p.a.as_deref()
                    .ok_or_else(|| JobError::Parse("kt needs a".into()))?,
            )?;
            let b = parse_divisor(
                x,
                p.b.as_deref()
                    .ok_or_else(|| JobError::Parse("kt needs b".into()))?,
            )?;
            let k = p.k.ok_or_else(|| JobError::Parse("kt needs k".into()))?;
            let kt = kt_check(&a, &b, k)?;
            checks.push(CheckDto {
                name: "kt".into(),
                holds: kt.holds,
                details: details(&[
                    ("lhs", q_str(&kt.lhs)),
                    ("rhs", kt.rhs.to_string()),
                    ("rhs_upper", ValueDto::from_power(&kt.rhs).upper),
                ]),
            });
        }
        Some("homogeneity") => {
            let alpha = need_alpha()?;
            let c =
                p.c.as_ref()
                    .ok_or_else(|| JobError::Parse("homogeneity needs c".into()))?
                    .parse()?;
            let h = volhat_homogeneity_check(&alpha, &c, tol, grid)?;
            checks.push(CheckDto {
                name: "homogeneity".into(),
                holds: h.holds,
                details: details(&[
                    ("c", q_str(&c)),
                    ("base", f64_str(h.base)),
                    ("scaled", f64_str(h.scaled)),
                    ("predicted", f64_str(h.predicted)),
                ]),
            });
        }
        Some("duality") => {
            let alpha = need_alpha()?;
            let d = weak_duality_check(&alpha, tol, grid)?;
            checks.push(CheckDto {
                name: "duality".into(),
                holds: d.holds,
                details: details(&[("gap", f64_str(d.gap))]),
            });
            results.push(d.sup);
            results.push(d.inf);
        }
        Some(other) => return Err(JobError::Parse(format!("unknown check {other:?}"))),
    }

    let exit_code = if results.iter().any(|r| r.status == Status::Infeasible) {
        exit::INFEASIBLE
    } else if results.iter().any(|r| r.status == Status::NotConverged)
        || checks.iter().any(|c| !c.holds)
    {
        exit::TOLERANCE
    } else {
        exit::OK
    };
    let report = VolhatReport {
        alpha: alpha.as_ref().map(CycleClassDto::from_class),
        results: results.iter().map(OptimizationDto::new).collect(),
        checks,
    };
    Ok(Outcome {
        report: Report::Volhat(report),
        exit_code,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeshadriParams {
    b: u64,
    divisor: Option<Vec<RationalRepr>>,
}

fn divisor_or_default(
    x: &VarietySpec,
    coords: Option<&[RationalRepr]>,
) -> Result<DivisorClass, JobError> {
    match coords {
        Some(c) => parse_divisor(x, c),
        None => Ok(DivisorClass::hyperplane_sum(x.clone())),
    }
}

fn run_seshadri(x: &VarietySpec, p: SeshadriParams) -> Result<Outcome, JobError> {
    let a = divisor_or_default(x, p.divisor.as_deref())?;
    let e = seshadri_interval(p.b, &a)?;
    let report = SeshadriReport {
        b: e.b,
        divisor: divisor_strings(&a),
        t: e.t,
        lo: q_str(&e.lo),
        hi: ValueDto::from_power(&e.hi),
        collapsed: e.is_collapsed(),
        valid_for: "very general configurations of b points".into(),
    };
    Ok(Outcome::ok(Report::Seshadri(report)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WmobParams {
    divisor: Option<Vec<RationalRepr>>,
    /// Dimension of the complete intersection `H^(n-k)`; without it the
    /// divisor itself is evaluated.
    k: Option<u32>,
    t: Option<u64>,
    sweep: Option<String>,
}

fn run_wmob(x: &VarietySpec, p: WmobParams) -> Result<Outcome, JobError> {
    let h = divisor_or_default(x, p.divisor.as_deref())?;
    let Some(k) = p.k else {
        if p.t.is_some() || p.sweep.is_some() {
            return Err(JobError::Parse("t and sweep need k".into()));
        }
        let value = wmob_divisor(&h)?;
        let report = WmobReport {
            divisor: divisor_strings(&h),
            k: None,
            rows: Vec::new(),
            divisor_value: Some(q_str(&value)),
        };
        return Ok(Outcome::ok(Report::Wmob(report)));
    };
    let ts: Vec<u64> = match (&p.sweep, p.t) {
        (Some(_), Some(_)) => return Err(JobError::Parse("give either t or sweep".into())),
        (Some(range), None) => {
            let (lo, hi) = parse_sweep(range)?;
            (lo..=hi).collect()
        }
        (None, Some(t)) => vec![t],
        (None, None) => return Err(JobError::Parse("wmob with k needs t or sweep".into())),
    };
    let n = x.dim();
    if k == 0 || k >= n {
        return Err(cyclevol_core::Error::DimensionOutOfRange {
            k: k as i64,
            n: n as i64,
        }
        .into());
    }
    let envelope = ValueDto::from_power(&wmc_upper(&h.power(n - k)?, &h)?.value);
    let rows = ts
        .par_iter()
        .map(|&t| -> Result<WmobRow, JobError> {
            let b = wmob_ci_bounds(&h, k, t)?;
            Ok(WmobRow {
                t,
                lower: ValueDto::from_power(&b.lower),
                upper: q_str(&b.upper),
                gap: gap_value(&b.ratio),
                gap_exact: b.gap_is_exact(),
                envelope: envelope.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = WmobReport {
        divisor: divisor_strings(&h),
        k: Some(k),
        rows,
        divisor_value: None,
    };
    Ok(Outcome::ok(Report::Wmob(report)))
}

/// `1 - ratio` with the enclosure of `ratio` flipped.
fn gap_value(ratio: &PowerProduct) -> ValueDto {
    let one = rational::int(1);
    let e = ratio.eval(digits_to_bits(DIGITS));
    ValueDto {
        exact: ratio.exact().map(|q| q_str(&(&one - q))),
        symbolic: format!("1 - {ratio}"),
        lower: rational::to_decimal(&(&one - &e.hi), DIGITS, Rounding::Down),
        upper: rational::to_decimal(&(&one - &e.lo), DIGITS, Rounding::Up),
        approx: 1.0 - ratio.to_f64(),
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum McParams {
    /// `h0(L) - 1` for a divisor `L`.
    Divisor { divisor: Vec<RationalRepr> },
    /// Complete intersections of `n - k` members of `|mH|`.
    Ci {
        divisor: Option<Vec<RationalRepr>>,
        k: u32,
        m: u64,
    },
    /// Curves in `P^3` cut by two surfaces of degree `d`.
    P3 { d: u64 },
    /// Leading term for families of smooth space curves of degree `d`.
    Perrin { d: u64 },
    /// `floor(dim W / (n - k))` for a family of dimension `dim_w`.
    Family { dim_w: u64, n: u32, k: u32 },
}

fn run_mc(dims: Option<&Vec<u32>>, p: McParams) -> Result<Outcome, JobError> {
    let variety = || -> Result<VarietySpec, JobError> {
        let dims = dims.ok_or_else(|| JobError::Parse("this kind needs a variety".into()))?;
        Ok(VarietySpec::new(dims.clone())?)
    };
    let report = match p {
        McParams::Divisor { divisor } => {
            let l = parse_divisor(&variety()?, &divisor)?;
            McReport {
                kind: "divisor".into(),
                count: Some(mc_divisor_exact(&l)?.to_string()),
                details: details(&[("h0", l.h0()?.to_string())]),
                value: None,
            }
        }
        McParams::Ci { divisor, k, m } => {
            let x = variety()?;
            let h = divisor_or_default(&x, divisor.as_deref())?;
            let ci = mob_ci_lower(&h, k, m)?;
            McReport {
                kind: "ci".into(),
                count: Some(ci.points.to_string()),
                details: details(&[
                    ("class_scale", ci.class_scale.to_string()),
                    ("m", m.to_string()),
                ]),
                value: Some(ValueDto::from_rational(&ci.estimate())),
            }
        }
        McParams::P3 { d } => {
            let c = ci_points_p3(d)?;
            McReport {
                kind: "p3".into(),
                count: Some(c.points.to_string()),
                details: details(&[("degree", c.degree.to_string())]),
                value: None,
            }
        }
        McParams::Perrin { d } => {
            let b = perrin_bound(d)?;
            McReport {
                kind: "perrin".into(),
                count: None,
                details: details(&[
                    (
                        "remainder",
                        "O(d), constant unspecified; the leading term alone is not a bound".into(),
                    ),
                    ("d", d.to_string()),
                ]),
                value: Some(ValueDto::from_power(&b.leading)),
            }
        }
        McParams::Family { dim_w, n, k } => McReport {
            kind: "family".into(),
            count: Some(mc_family_dim_bound(dim_w, n, k)?.to_string()),
            details: details(&[
                ("bound", "mc <= floor(dim W / (n-k))".into()),
                ("scale", q_str(&frac(1, (n - k) as i64))),
            ]),
            value: None,
        },
    };
    Ok(Outcome::ok(Report::Mc(report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("2:5").unwrap(), (2, 5));
        assert!(parse_sweep("5:2").is_err());
        assert!(parse_sweep("x").is_err());
    }

    #[test]
    fn unknown_payload_fields_are_parse_errors() {
        let job: JobSpec =
            serde_json::from_str(r#"{"command":"constants","payload":{"n":3,"kk":1}}"#).unwrap();
        let err = job.run(&Settings::default()).unwrap_err();
        assert_eq!(err.exit_code(), exit::PARSE);
    }
}
