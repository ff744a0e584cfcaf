//! Report documents: deterministic JSON, CSV and text renderings of
//! certification runs. All numeric payloads are exact decimal or
//! rational strings; nothing passes through binary floating point.

use crate::certify::{Certificate, Overall, Params, Status};
use crate::error::{Error, Result};
use crate::signcert::SignCertificate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Echo of the parsed request, for auditability of reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub command: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub inconclusive: u64,
    pub out_of_hypotheses: u64,
}

impl Summary {
    pub fn tally(certs: &[Certificate]) -> Summary {
        let mut s = Summary::default();
        for c in certs {
            match c.overall {
                Overall::Pass => s.pass += 1,
                Overall::Fail => s.fail += 1,
                Overall::Inconclusive => s.inconclusive += 1,
                Overall::OutOfHypotheses => s.out_of_hypotheses += 1,
            }
        }
        s
    }
}

/// Exit code contract: 0 all pass, 1 some failure, 2 inconclusive
/// without failures, 64 usage error (set by the CLI layer).
pub fn exit_code(summary: &Summary) -> i32 {
    if summary.fail > 0 {
        1
    } else if summary.inconclusive > 0 {
        2
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub spec_echo: SpecEcho,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sign_certificates: Vec<serde_json::Value>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(
        spec_echo: SpecEcho,
        certificates: Vec<Certificate>,
        sign_certificates: Vec<SignCertificate>,
    ) -> ReportDocument {
        for c in &certificates {
            debug_assert!(c.recheck_overall(), "overall out of sync for {}", c.params.describe());
        }
        let summary = Summary::tally(&certificates);
        ReportDocument {
            tool_version: TOOL_VERSION.to_string(),
            spec_echo,
            certificates,
            sign_certificates: sign_certificates.iter().map(|s| s.to_json_value()).collect(),
            summary,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.summary)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<ReportDocument> {
        serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
    }

    /// One row per check: (k, M, degrees, l, check, status, value, bound).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "M", "degrees", "l", "check", "status", "value", "bound"])
            .map_err(|e| Error::Serde(e.to_string()))?;
        for cert in &self.certificates {
            let (k, m, degrees) = match &cert.params {
                Params::Tuple { degrees, k, m } => (
                    k.to_string(),
                    m.to_string(),
                    crate::tuple::DegreeTuple::new(degrees.clone())
                        .map(|t| t.to_compact_string())
                        .unwrap_or_default(),
                ),
                Params::Pair { k, m } => (k.to_string(), m.to_string(), String::new()),
                Params::Suite { .. } => (String::new(), String::new(), String::new()),
            };
            for c in &cert.checks {
                w.write_record([
                    k.as_str(),
                    m.as_str(),
                    degrees.as_str(),
                    &c.l.map(|l| l.to_string()).unwrap_or_default(),
                    &c.name,
                    status_str(c.status),
                    &c.value,
                    &c.bound,
                ])
                .map_err(|e| Error::Serde(e.to_string()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fanocert v{}", self.tool_version);
        let _ = writeln!(out, "command: {}", self.spec_echo.command);
        for (k, v) in &self.spec_echo.args {
            let _ = writeln!(out, "  {} = {}", k, v);
        }
        for cert in &self.certificates {
            let header = match &cert.params {
                Params::Tuple { degrees, k, m } => {
                    let compact = crate::tuple::DegreeTuple::new(degrees.clone())
                        .map(|t| t.to_compact_string())
                        .unwrap_or_default();
                    format!("tuple ({}) k={} M={}", compact, k, m)
                }
                Params::Pair { k, m } => format!("instance k={} M={}", k, m),
                Params::Suite { label } => label.clone(),
            };
            let _ = writeln!(
                out,
                "== {} -> {}  [hypotheses: {}]",
                header,
                overall_str(cert.overall),
                if cert.hypothesis_ok { "ok" } else { "not satisfied" }
            );
            for c in &cert.checks {
                let l_part = c.l.map(|l| format!(" (l={})", l)).unwrap_or_default();
                let bound_part = if c.bound.is_empty() {
                    String::new()
                } else {
                    format!("  vs  {}", c.bound)
                };
                let _ = writeln!(
                    out,
                    "  [{}] {}{}: {}{}   -- {}",
                    status_str(c.status),
                    c.name,
                    l_part,
                    c.value,
                    bound_part,
                    c.anchor
                );
            }
        }
        if !self.sign_certificates.is_empty() {
            let _ = writeln!(out, "sign certificates: {}", self.sign_certificates.len());
        }
        let _ = writeln!(
            out,
            "summary: pass={} fail={} inconclusive={} out_of_hypotheses={}",
            self.summary.pass, self.summary.fail, self.summary.inconclusive, self.summary.out_of_hypotheses
        );
        out
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}

fn overall_str(o: Overall) -> &'static str {
    match o {
        Overall::Pass => "pass",
        Overall::Fail => "fail",
        Overall::Inconclusive => "inconclusive",
        Overall::OutOfHypotheses => "out_of_hypotheses",
    }
}

/// Output format selector shared by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format '{}'", s))),
        }
    }
}

impl ReportDocument {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_tuple, CertifyConfig, LevelRule};
    use crate::tuple::DegreeTuple;

    fn sample_report() -> ReportDocument {
        let cert = certify_tuple(
            &DegreeTuple::parse("25^20").unwrap(),
            &CertifyConfig { levels: LevelRule::Single(0) },
        )
        .unwrap();
        let echo = SpecEcho {
            command: "certify".into(),
            args: [("degrees".to_string(), "25^20".to_string())].into_iter().collect(),
        };
        ReportDocument::new(echo, vec![cert], vec![])
    }

    #[test]
    fn json_round_trip() {
        let doc = sample_report();
        let json = doc.to_json().unwrap();
        let back = ReportDocument::from_json(&json).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn summary_tally_and_exit() {
        let doc = sample_report();
        assert_eq!(doc.summary.pass, 1);
        assert_eq!(doc.exit_code(), 0);
        let mut s = Summary::default();
        s.fail = 1;
        s.inconclusive = 3;
        assert_eq!(exit_code(&s), 1);
        s.fail = 0;
        assert_eq!(exit_code(&s), 2);
        s.inconclusive = 0;
        assert_eq!(exit_code(&s), 0);
    }

    #[test]
    fn csv_and_json_agree_on_checks() {
        let doc = sample_report();
        let csv_text = doc.to_csv().unwrap();
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        let checks: Vec<_> = doc.certificates.iter().flat_map(|c| c.checks.iter()).collect();
        assert_eq!(rows.len(), checks.len());
        for (row, check) in rows.iter().zip(checks.iter()) {
            assert_eq!(&row[4], check.name.as_str());
            assert_eq!(&row[5], status_str(check.status));
            assert_eq!(&row[6], check.value.as_str());
            assert_eq!(&row[7], check.bound.as_str());
        }
        // degrees field with commas survives CSV quoting
        assert!(csv_text.contains("\"25^20\"") || csv_text.contains("25^20"));
    }

    #[test]
    fn text_contains_anchors() {
        let doc = sample_report();
        let text = doc.to_text();
        assert!(text.contains("Lemma 1.3: beta < 4/3"));
        assert!(text.contains("summary: pass=1"));
    }
}
