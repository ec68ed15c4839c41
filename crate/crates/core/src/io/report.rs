//! JSON report documents. Exact values are strings (`"p/q"`); floats are
//! strings with 17 significant digits so documents are lossless and stable.

use serde::{Deserialize, Serialize};

use crate::conversion::{ConversionOutcome, DescriptionMode};
use crate::exact::{Polynomial, Rational, RationalMatrix};
use crate::locality::LocalityReport;
use crate::pattern::{ImpossibilityCertificate, SearchOutcome, SearchReport, TrialVerdict};
use crate::real::RealMatrix;
use crate::shift::{RepresentabilityResult, ShiftEnabledReport};

pub const TOOL_NAME: &str = "shiftkit";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn fmt_matrix(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.rows().map(fmt_rationals).collect()
}

pub fn fmt_real_matrix(m: &RealMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|&x| fmt_f64(x)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDoc {
    /// Ascending exact coefficients.
    pub coefficients: Vec<String>,
    pub display: String,
}

impl From<&Polynomial> for PolynomialDoc {
    fn from(p: &Polynomial) -> Self {
        Self { coefficients: fmt_rationals(p.coeffs()), display: p.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSection {
    pub n: usize,
    pub char_poly: PolynomialDoc,
    pub min_poly: PolynomialDoc,
    pub shift_enabled: bool,
    pub symmetric_cross_check: Option<bool>,
    pub eigenvalues: Option<Vec<String>>,
}

impl ShiftSection {
    pub fn new(report: &ShiftEnabledReport, eigenvalues: Option<&[f64]>) -> Self {
        Self {
            n: report.dim,
            char_poly: (&report.char_poly).into(),
            min_poly: (&report.min_poly).into(),
            shift_enabled: report.shift_enabled,
            symmetric_cross_check: report.symmetric_cross_check,
            eigenvalues: eigenvalues.map(|e| e.iter().map(|&x| fmt_f64(x)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationSection {
    pub commutes: bool,
    pub hs_is_zero: bool,
    pub sh_is_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentabilitySection {
    pub representable: bool,
    pub coefficients: Option<PolynomialDoc>,
    pub witness: Option<Vec<String>>,
    /// 1-based `[[i, j], [i', j']]`.
    pub witness_pair: Option<[[usize; 2]; 2]>,
    pub replay_ok: bool,
}

impl RepresentabilitySection {
    pub fn new(result: &RepresentabilityResult, replay_ok: bool) -> Self {
        match result {
            RepresentabilityResult::Representable { coefficients } => Self {
                representable: true,
                coefficients: Some(coefficients.into()),
                witness: None,
                witness_pair: None,
                replay_ok,
            },
            RepresentabilityResult::NotRepresentable { witness, witness_pair } => Self {
                representable: false,
                coefficients: None,
                witness: Some(fmt_rationals(witness)),
                witness_pair: witness_pair.map(|p| {
                    let ((a, b), (c, d)) = p.one_based();
                    [[a, b], [c, d]]
                }),
                replay_ok,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionSection {
    pub epsilon: String,
    pub s_tilde: Vec<Vec<String>>,
    pub original_eigenvalues: Vec<String>,
    pub perturbed_eigenvalues: Vec<String>,
    pub shift_enabled: bool,
    pub commutes_with_h: bool,
    pub commutator_norm: String,
    pub strict_same_graph: bool,
    pub loose_same_graph: bool,
    pub recovery_coefficients: Option<Vec<String>>,
    pub recovery_residual: Option<String>,
    pub density_original: String,
    pub density_converted: String,
}

impl ConversionSection {
    pub fn new(out: &ConversionOutcome, density_original: f64, density_converted: f64) -> Self {
        let floats = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>();
        Self {
            epsilon: fmt_f64(out.epsilon),
            s_tilde: fmt_real_matrix(&out.s_tilde),
            original_eigenvalues: floats(&out.original_eigenvalues),
            perturbed_eigenvalues: floats(&out.perturbed_eigenvalues),
            shift_enabled: out.shift_enabled,
            commutes_with_h: out.commutes_with_h,
            commutator_norm: fmt_f64(out.commutator_norm),
            strict_same_graph: out.strict_same_graph,
            loose_same_graph: out.loose_same_graph,
            recovery_coefficients: out.recovery.as_ref().map(|r| floats(&r.coefficients)),
            recovery_residual: out.recovery.as_ref().map(|r| fmt_f64(r.residual)),
            density_original: fmt_f64(density_original),
            density_converted: fmt_f64(density_converted),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub kind: String,
    pub structural_rank: Option<usize>,
    pub kernel_multiplicity: Option<usize>,
    /// 1-based `(row, col)` pairs.
    pub matching: Option<Vec<[usize; 2]>>,
    pub generator: Option<Vec<Vec<String>>>,
    pub pair: Option<[[usize; 2]; 2]>,
    pub power_values: Option<Vec<[String; 2]>>,
    pub filter_values: Option<[String; 2]>,
    pub replay_ok: bool,
}

impl CertificateSection {
    pub fn new(cert: &ImpossibilityCertificate, replay_ok: bool) -> Self {
        let mut s = Self {
            kind: cert.kind().to_string(),
            structural_rank: None,
            kernel_multiplicity: None,
            matching: None,
            generator: None,
            pair: None,
            power_values: None,
            filter_values: None,
            replay_ok,
        };
        match cert {
            ImpossibilityCertificate::RankDeficiency { structural_rank, kernel_multiplicity, matching, .. } => {
                s.structural_rank = Some(*structural_rank);
                s.kernel_multiplicity = Some(*kernel_multiplicity);
                s.matching = Some(matching.iter().map(|&(r, c)| [r + 1, c + 1]).collect());
            }
            ImpossibilityCertificate::PowerEquality { generator, pair, power_values, filter_values } => {
                let ((a, b), (c, d)) = pair.one_based();
                s.generator = Some(fmt_matrix(generator));
                s.pair = Some([[a, b], [c, d]]);
                s.power_values = Some(power_values.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect());
                s.filter_values = Some([filter_values.0.to_string(), filter_values.1.to_string()]);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEntry {
    pub trial: u64,
    pub verdict: String,
    pub min_poly_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSearchSection {
    pub mode: DescriptionMode,
    pub trials: u64,
    pub seed: u64,
    pub family_dimension: Option<usize>,
    pub outcome: String,
    pub found_matrix: Option<Vec<Vec<String>>>,
    pub found_trial: Option<u64>,
    pub certificate: Option<CertificateSection>,
    pub transcript: Vec<TrialEntry>,
}

impl PatternSearchSection {
    pub fn new(
        report: &SearchReport,
        mode: DescriptionMode,
        trials: u64,
        seed: u64,
        h: Option<&RationalMatrix>,
    ) -> Self {
        let (outcome, found_matrix, found_trial, certificate) = match &report.outcome {
            SearchOutcome::Found { matrix, trial } => ("found", Some(fmt_matrix(matrix)), Some(*trial), None),
            SearchOutcome::NotFoundAfterTrials { .. } => ("not_found_after_trials", None, None, None),
            SearchOutcome::Impossible(cert) => {
                ("impossible", None, None, Some(CertificateSection::new(cert, cert.replay(h))))
            }
        };
        Self {
            mode,
            trials,
            seed,
            family_dimension: report.family_dimension,
            outcome: outcome.to_string(),
            found_matrix,
            found_trial,
            certificate,
            transcript: report
                .transcript
                .iter()
                .map(|t| {
                    let (verdict, degree) = match t.verdict {
                        TrialVerdict::OffPattern => ("off_pattern", None),
                        TrialVerdict::NotShiftEnabled { min_poly_degree } => {
                            ("not_shift_enabled", Some(min_poly_degree))
                        }
                        TrialVerdict::ShiftEnabled => ("shift_enabled", None),
                    };
                    TrialEntry { trial: t.trial, verdict: verdict.to_string(), min_poly_degree: degree }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalitySection {
    pub output: Vec<String>,
    pub hops: usize,
    pub messages_per_round: usize,
    pub total_messages: usize,
    pub density: String,
}

impl LocalitySection {
    pub fn new(output: &[Rational], report: &LocalityReport) -> Self {
        Self {
            output: fmt_rationals(output),
            hops: report.hops,
            messages_per_round: report.messages_per_round,
            total_messages: report.total_messages,
            density: fmt_f64(report.density),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shift: Option<ShiftSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub commutation: Option<CommutationSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub representability: Option<RepresentabilitySection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conversion: Option<ConversionSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pattern_search: Option<PatternSearchSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub locality: Option<LocalitySection>,
}

impl AnalysisReportDocument {
    pub fn new(command: &str, input_digest: String) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input_digest,
            shift: None,
            commutation: None,
            representability: None,
            conversion: None,
            pattern_search: None,
            locality: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::shift::is_shift_enabled;
    use crate::spectral::ToleranceConfig;

    #[test]
    fn floats_keep_seventeen_digits() {
        let x = 0.1f64 + 0.2;
        let s = fmt_f64(x);
        assert_eq!(s, "3.0000000000000004e-1");
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn document_round_trips() {
        let m = RationalMatrix::new(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 3), ratio(-5, 7)]]).unwrap();
        let report = is_shift_enabled(&m, &ToleranceConfig::default());
        let mut doc = AnalysisReportDocument::new("analyze", "abc".into());
        doc.shift = Some(ShiftSection::new(&report, Some(&[-0.5, 0.25])));
        let text = doc.to_json();
        assert_eq!(AnalysisReportDocument::from_json(&text).unwrap(), doc);
        assert!(doc.shift.as_ref().unwrap().char_poly.coefficients.iter().any(|c| c.contains('/')));
    }
}
