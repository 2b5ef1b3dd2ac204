//! Bundled example data with their expected results.

use adhm_core::adhm::{is_adhm_solution, mu_residual, AdhmDatum};
use adhm_core::cohomology::{charge_and_rank, classify, hypercohomology_column, instanton_vanishing_table};
use adhm_core::config::RunConfig;
use adhm_core::monad::{build_monad, degeneration_info, fiber_cohomology_dim, verify_complex, LocusEstimate};
use adhm_core::poly::{parse_poly, var_name};
use adhm_core::stability::{
    full_report, global_weak_stability, is_weak_costable_at, is_weak_stable_at, sampled_t_and_l,
    stabilizing_subspace_at_point, stabilizing_subspace_global, GlobalCheck, StabilityReport, SubspaceBasis, Verdict,
};
use adhm_core::symmetry::{hom_space, stabilizer_dimension};
use adhm_core::variety::{PointOnY, VarietySpec};
use adhm_core::Field;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;
use crate::json::{datum_from_value, variety_from_value};

const SOURCES: [(&str, &str); 7] = [
    ("scroll", include_str!("../corpus/scroll.json")),
    ("quadric", include_str!("../corpus/quadric.json")),
    ("c2_reducible", include_str!("../corpus/c2_reducible.json")),
    ("c3_p3", include_str!("../corpus/c3_p3.json")),
    ("p2_ideal_point", include_str!("../corpus/p2_ideal_point.json")),
    ("zero_p3", include_str!("../corpus/zero_p3.json")),
    ("c1_r2_p3", include_str!("../corpus/c1_r2_p3.json")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A value displayed in a worked example of the construction.
    ReferenceExample,
    Trivial,
    /// Obtained by an independent hand or oracle computation.
    Derived,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Residual { entries: Vec<Vec<String>> },
    Solution { value: bool },
    SolutionOnPn { value: bool },
    Complex { value: bool },
    StabilizingSubspace { span: Vec<Vec<i64>> },
    PointSubspace { point: Vec<i64>, span: Vec<Vec<i64>> },
    SampledT { points: Vec<Vec<i64>>, span: Vec<Vec<i64>> },
    Verdict { flavor: String, value: String },
    WeakStableAt { point: Vec<i64>, value: bool },
    WeakCostableAt { point: Vec<i64>, value: bool },
    GlobalWeakStability { value: String, degree: Option<u32> },
    Degeneration {
        #[serde(default)]
        codim: Option<usize>,
        #[serde(default)]
        empty: bool,
        nondegenerate: bool,
        /// Variables vanishing at every witness; a nonempty list also demands a witness.
        #[serde(default)]
        witness_zero: Vec<String>,
    },
    FiberCohomology { point: Vec<i64>, value: usize },
    Hypercohomology { k: i64, dims: Vec<usize> },
    HypercohomologyEntry { q: i64, k: i64, value: usize },
    ChargeRank { rank: usize, charge: usize },
    Vanishing { value: bool },
    Classification { kind: String },
    StabilizerDim { value: usize },
    HomDim { value: usize },
}

#[derive(Clone, Debug, Deserialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    pub source: Source,
    #[serde(default)]
    pub anchor: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleRecord {
    pub name: String,
    pub description: String,
    /// Base name for the variety file written by `examples --write`.
    pub variety_file: String,
    pub variety: Value,
    pub datum: Value,
    pub expect: Vec<Expectation>,
}

impl ExampleRecord {
    pub fn variety(&self, field: Field) -> Result<VarietySpec, CliError> {
        variety_from_value(&self.variety, Some(field))
    }

    pub fn datum(&self, field: Field) -> Result<AdhmDatum, CliError> {
        datum_from_value(&self.datum, Some(field))
    }
}

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn load(name: &str) -> Result<ExampleRecord, CliError> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::Usage(format!("unknown example {name:?}; known: {}", names().join(", "))))?;
    let rec: ExampleRecord =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("corpus entry {name}: {e}")))?;
    if let Some(e) = rec.expect.iter().find(|e| e.source == Source::ReferenceExample && e.anchor.is_none()) {
        return Err(CliError::Usage(format!("corpus entry {name}: {:?} lacks an anchor", e.check)));
    }
    Ok(rec)
}

pub fn load_all() -> Result<Vec<ExampleRecord>, CliError> {
    names().into_iter().map(load).collect()
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub label: String,
    pub passed: bool,
    pub observed: String,
}

fn span(field: Field, ambient: usize, vs: &[Vec<i64>]) -> SubspaceBasis {
    SubspaceBasis::span(field, ambient, vs.iter().map(|v| v.iter().map(|&e| field.from_i64(e)).collect()))
}

fn verdict_matches(v: Verdict, expected: &str) -> bool {
    match expected {
        "true" => v.holds(),
        other => v.as_str() == other,
    }
}

fn global_str(g: &GlobalCheck) -> String {
    match g {
        GlobalCheck::CertifiedTrue { degree } => format!("certified_true (degree {degree})"),
        GlobalCheck::False { witness } => format!("false (witness {witness})"),
        GlobalCheck::Unknown => "unknown".into(),
    }
}

fn label(check: &Check) -> String {
    match check {
        Check::Residual { .. } => "residual".into(),
        Check::Solution { .. } => "solution on Y".into(),
        Check::SolutionOnPn { .. } => "solution on P^n".into(),
        Check::Complex { .. } => "beta * alpha = 0 on Y".into(),
        Check::StabilizingSubspace { .. } => "S_Y".into(),
        Check::PointSubspace { point, .. } => format!("S_(Y_P) at {point:?}"),
        Check::SampledT { .. } => "sampled T_Y".into(),
        Check::Verdict { flavor, .. } => format!("verdict {flavor}"),
        Check::WeakStableAt { point, .. } => format!("rank beta_P = c at {point:?}"),
        Check::WeakCostableAt { point, .. } => format!("rank alpha_P = c at {point:?}"),
        Check::GlobalWeakStability { .. } => "global weak stability".into(),
        Check::Degeneration { .. } => "degeneration locus".into(),
        Check::FiberCohomology { point, .. } => format!("fiber cohomology at {point:?}"),
        Check::Hypercohomology { k, .. } => format!("H^*(C({k}))"),
        Check::HypercohomologyEntry { q, k, .. } => format!("H^{q}(C({k}))"),
        Check::ChargeRank { .. } => "rank and charge".into(),
        Check::Vanishing { .. } => "instanton vanishing conditions".into(),
        Check::Classification { .. } => "classification".into(),
        Check::StabilizerDim { .. } => "stabilizer dimension".into(),
        Check::HomDim { .. } => "dim Hom(X, X)".into(),
    }
}

/// Evaluates one expectation; `Err` means the computation itself failed.
fn evaluate(
    check: &Check,
    x: &AdhmDatum,
    y: &VarietySpec,
    config: &RunConfig,
    report: &mut Option<StabilityReport>,
) -> Result<(bool, String), CliError> {
    let field = x.field();
    let point = |c: &[i64]| PointOnY::from_i64(y, c);
    let pn = || VarietySpec::projective_space(field, y.n());
    Ok(match check {
        Check::Residual { entries } => {
            let mu = mu_residual(x);
            let mut ok = entries.len() == mu.rows() && entries.iter().all(|r| r.len() == mu.cols());
            if ok {
                for (i, row) in entries.iter().enumerate() {
                    for (j, text) in row.iter().enumerate() {
                        let p = parse_poly(field, y.n(), text)?;
                        let got = mu.get(i, j);
                        ok &= if p.is_zero() { got.is_zero() } else { &p == got };
                    }
                }
            }
            (ok, mu.to_string())
        }
        Check::Solution { value } => {
            let got = is_adhm_solution(x, y)?;
            (got == *value, got.to_string())
        }
        Check::SolutionOnPn { value } => {
            let got = is_adhm_solution(x, &pn()?)?;
            (got == *value, got.to_string())
        }
        Check::Complex { value } => {
            let got = verify_complex(&build_monad(x), y)?;
            (got == *value, got.to_string())
        }
        Check::StabilizingSubspace { span: s } => {
            let got = stabilizing_subspace_global(x);
            (got == span(field, x.c(), s), got.to_string())
        }
        Check::PointSubspace { point: p, span: s } => {
            let got = stabilizing_subspace_at_point(x, &point(p)?);
            (got == span(field, x.c(), s), got.to_string())
        }
        Check::SampledT { points, span: s } => {
            let pts = points.iter().map(|p| point(p)).collect::<Result<Vec<_>, _>>()?;
            let (t, _) = sampled_t_and_l(x, &pts);
            (t == span(field, x.c(), s), t.to_string())
        }
        Check::Verdict { flavor, value } => {
            if report.is_none() {
                *report = Some(full_report(x, y, config)?);
            }
            let v = report.as_ref().unwrap().verdict(flavor);
            (verdict_matches(v, value), v.to_string())
        }
        Check::WeakStableAt { point: p, value } => {
            let got = is_weak_stable_at(x, &point(p)?);
            (got == *value, got.to_string())
        }
        Check::WeakCostableAt { point: p, value } => {
            let got = is_weak_costable_at(x, &point(p)?);
            (got == *value, got.to_string())
        }
        Check::GlobalWeakStability { value, degree } => {
            let got = global_weak_stability(x, y, config.degree_bound, config.samples, config.seed)?;
            let ok = match (&got, value.as_str()) {
                (GlobalCheck::CertifiedTrue { degree: d }, "certified_true") => degree.map_or(true, |e| e == *d),
                (GlobalCheck::False { .. }, "false") | (GlobalCheck::Unknown, "unknown") => true,
                _ => false,
            };
            (ok, global_str(&got))
        }
        Check::Degeneration {
            codim,
            empty,
            nondegenerate,
            witness_zero,
        } => {
            let info = degeneration_info(x, y, config.degree_bound, config.samples, config.seed)?;
            let mut ok = info.nondegenerate == *nondegenerate;
            match (&info.locus, codim) {
                (LocusEstimate::Empty { .. }, _) => ok &= *empty,
                (LocusEstimate::Dimension { codim: got, .. }, want) => ok &= !*empty && want.map_or(true, |w| w == *got),
            }
            let idx: Vec<usize> = (0..=y.n())
                .filter(|&i| witness_zero.contains(&var_name(y.n(), i)))
                .collect();
            if !witness_zero.is_empty() {
                ok &= idx.len() == witness_zero.len() && !info.witnesses.is_empty();
                ok &= info.witnesses.iter().all(|w| idx.iter().all(|&i| w.coords()[i].is_zero()));
            }
            let witnesses: Vec<String> = info.witnesses.iter().map(ToString::to_string).collect();
            (ok, format!("{:?}, nondegenerate {}, witnesses [{}]", info.locus, info.nondegenerate, witnesses.join(", ")))
        }
        Check::FiberCohomology { point: p, value } => {
            let got = fiber_cohomology_dim(&build_monad(x), &point(p)?)?;
            (got == *value, got.to_string())
        }
        Check::Hypercohomology { k, dims } => {
            let got = hypercohomology_column(&build_monad(x), *k)?;
            (got.standard() == dims.as_slice(), format!("{:?}", got.standard()))
        }
        Check::HypercohomologyEntry { q, k, value } => {
            let got = hypercohomology_column(&build_monad(x), *k)?.get(*q);
            (got == *value, got.to_string())
        }
        Check::ChargeRank { rank, charge } => {
            let got = charge_and_rank(&build_monad(x))?;
            ((got.rank, got.charge) == (*rank, *charge), format!("rank {}, charge {}", got.rank, got.charge))
        }
        Check::Vanishing { value } => {
            let table = instanton_vanishing_table(&build_monad(x), config.kmin, config.kmax)?;
            let got = table.iter().all(|c| c.passes());
            (got == *value, got.to_string())
        }
        Check::Classification { kind } => {
            let got = classify(x, y, config)?;
            (got.kind.as_str() == kind, got.kind.as_str().to_string())
        }
        Check::StabilizerDim { value } => {
            let got = stabilizer_dimension(x).dimension;
            (got == *value, got.to_string())
        }
        Check::HomDim { value } => {
            let got = hom_space(x, x)?.dimension;
            (got == *value, got.to_string())
        }
    })
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub name: String,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }
}

/// Runs every expectation of `rec`; computation errors count as failures.
pub fn verify(rec: &ExampleRecord, field: Field, config: &RunConfig) -> Result<VerifyReport, CliError> {
    let y = rec.variety(field)?;
    let x = rec.datum(field)?;
    let mut report = None;
    let outcomes = rec
        .expect
        .iter()
        .map(|e| {
            let (passed, observed) = match evaluate(&e.check, &x, &y, config, &mut report) {
                Ok(r) => r,
                Err(err) => (false, format!("error: {err}")),
            };
            CheckOutcome {
                label: label(&e.check),
                passed,
                observed,
            }
        })
        .collect();
    Ok(VerifyReport {
        name: rec.name.clone(),
        outcomes,
    })
}
