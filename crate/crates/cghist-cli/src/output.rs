//! Emitted document structure: JSON with a config echo and results array,
//! or CSV with one header row and fixed column order. Floats in CSV carry
//! 17 significant digits so re-parsing is lossless; JSON numbers use the
//! shortest round-trip form.

use anyhow::Result;
use cghist::{DecoherenceReport, HistoryClass};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq)]
pub struct ComplexDto {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDto {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexDto> for Complex64 {
    fn from(d: ComplexDto) -> Self {
        Complex64::new(d.re, d.im)
    }
}

/// One decoherence report row; matrix entries in class order
/// (stay right, stay left, cross both), row major.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ReportDto {
    pub t: f64,
    pub lambda: f64,
    pub matrix: Vec<Vec<ComplexDto>>,
    pub probabilities: [f64; 3],
    pub epsilon_dec: f64,
    pub sum_check: ComplexDto,
}

impl ReportDto {
    pub fn new(t: f64, lambda: f64, report: &DecoherenceReport) -> Self {
        let matrix = HistoryClass::ALL
            .iter()
            .map(|&a| {
                HistoryClass::ALL
                    .iter()
                    .map(|&b| report.matrix.get(a, b).into())
                    .collect()
            })
            .collect();
        Self {
            t,
            lambda,
            matrix,
            probabilities: report.probabilities,
            epsilon_dec: report.epsilon_dec,
            sum_check: report.sum_check.into(),
        }
    }

    /// Rebuild the in-memory report (the round-trip direction).
    pub fn to_report(&self) -> DecoherenceReport {
        let mut matrix = cghist::DecoherenceMatrix::zero();
        for (i, a) in HistoryClass::ALL.into_iter().enumerate() {
            for (j, b) in HistoryClass::ALL.into_iter().enumerate() {
                matrix.set(a, b, self.matrix[i][j].into());
            }
        }
        DecoherenceReport {
            matrix,
            probabilities: self.probabilities,
            epsilon_dec: self.epsilon_dec,
            sum_check: self.sum_check.into(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum SweepEntry {
    Ok(ReportDto),
    Err { t: f64, error: String },
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct GaussianRow {
    pub t: f64,
    pub lambda: f64,
    pub lambda_width_sq: f64,
    pub gamma: ComplexDto,
    pub eta: ComplexDto,
    pub rel_err: f64,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub mass_kg: f64,
    pub width_m: f64,
    pub t_decoherence_s: f64,
    pub log10_seconds: f64,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub check: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Command-specific payload of a run.
#[derive(Serialize, Clone, Debug)]
#[serde(untagged)]
pub enum Results {
    Reports(Vec<SweepEntry>),
    Gaussian(Vec<GaussianRow>),
    Estimate(Vec<EstimateRow>),
    Verify(Vec<VerifyRow>),
}

/// Top-level emitted document.
#[derive(Serialize, Clone, Debug)]
pub struct Document {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub results: Results,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_slope: Option<f64>,
    pub warnings: Vec<String>,
}

impl Document {
    pub fn new(config: RunConfig, results: Results) -> Self {
        Self {
            tool: "cghist",
            version: env!("CARGO_PKG_VERSION"),
            command: config.command.clone(),
            config,
            results,
            fitted_slope: None,
            warnings: Vec::new(),
        }
    }
}

/// 17 significant digits; enough to reconstruct any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn class_codes() -> [&'static str; 3] {
    [
        HistoryClass::StayRight.code(),
        HistoryClass::StayLeft.code(),
        HistoryClass::CrossBoth.code(),
    ]
}

/// CSV rendering of the document; one header row naming every column.
pub fn to_csv(doc: &Document) -> Result<String> {
    let mut out = String::new();
    match &doc.results {
        Results::Reports(entries) => {
            let codes = class_codes();
            let mut header = vec!["t".to_string(), "lambda".to_string()];
            for a in codes {
                for b in codes {
                    header.push(format!("d_{a}_{b}_re"));
                    header.push(format!("d_{a}_{b}_im"));
                }
            }
            for c in codes {
                header.push(format!("p_{c}"));
            }
            header.push("epsilon_dec".to_string());
            header.push("sum_re".to_string());
            header.push("sum_im".to_string());
            out.push_str(&header.join(","));
            out.push('\n');
            for entry in entries {
                let dto = match entry {
                    SweepEntry::Ok(dto) => dto,
                    SweepEntry::Err { .. } => continue,
                };
                let mut row = vec![fmt_f64(dto.t), fmt_f64(dto.lambda)];
                for i in 0..3 {
                    for j in 0..3 {
                        row.push(fmt_f64(dto.matrix[i][j].re));
                        row.push(fmt_f64(dto.matrix[i][j].im));
                    }
                }
                for p in dto.probabilities {
                    row.push(fmt_f64(p));
                }
                row.push(fmt_f64(dto.epsilon_dec));
                row.push(fmt_f64(dto.sum_check.re));
                row.push(fmt_f64(dto.sum_check.im));
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Results::Gaussian(rows) => {
            out.push_str("t,lambda,lambda_width_sq,gamma_re,gamma_im,eta_re,eta_im,rel_err\n");
            for r in rows {
                let row = [
                    fmt_f64(r.t),
                    fmt_f64(r.lambda),
                    fmt_f64(r.lambda_width_sq),
                    fmt_f64(r.gamma.re),
                    fmt_f64(r.gamma.im),
                    fmt_f64(r.eta.re),
                    fmt_f64(r.eta.im),
                    fmt_f64(r.rel_err),
                ];
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Results::Estimate(rows) => {
            out.push_str("mass_kg,width_m,t_decoherence_s,log10_seconds\n");
            for r in rows {
                let row = [
                    fmt_f64(r.mass_kg),
                    fmt_f64(r.width_m),
                    fmt_f64(r.t_decoherence_s),
                    fmt_f64(r.log10_seconds),
                ];
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Results::Verify(rows) => {
            out.push_str("check,measured,threshold,pass\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.check,
                    fmt_f64(r.measured),
                    fmt_f64(r.threshold),
                    r.pass
                ));
            }
        }
    }
    Ok(out)
}

pub fn to_json(doc: &Document) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}
