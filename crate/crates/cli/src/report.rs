//! Verification rows and the machine-readable report envelope.

use ctn::claims::{Claim, ClaimSource};
use ctn::genrank::RankCertificate;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One (family, n) verification cell: a computed value next to the
/// claimed one when a claim applies.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationRow {
    pub n: usize,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub check: String,
    pub computed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed: Option<u64>,
    pub source: String,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconclusive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationRow {
    pub fn new(check: &str, family: String, p: Option<usize>, n: usize, computed: u64) -> Self {
        Self {
            n,
            family,
            p,
            check: check.to_string(),
            computed,
            claimed: None,
            source: ClaimSource::None.to_string(),
            matched: None,
            inconclusive: None,
            note: None,
        }
    }

    /// Attaches a claim: asserted claims set the match flag, reference
    /// values (source `none`) are reported without one.
    pub fn with_claim(mut self, claim: Option<Claim>) -> Self {
        if let Some(claim) = claim {
            self.source = claim.source.to_string();
            self.note = claim.note;
            if claim.source == ClaimSource::None {
                self.note = Some(match self.note.take() {
                    Some(note) => format!("reference value {}: {}", claim.value, note),
                    None => format!("reference value {}", claim.value),
                });
            } else {
                self.claimed = Some(claim.value);
                self.matched = Some(claim.value == self.computed);
            }
        }
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note.to_string(),
        });
        self
    }

    pub fn mark_inconclusive(mut self, note: &str) -> Self {
        self.inconclusive = Some(true);
        self.matched = None;
        self.claimed = None;
        self.with_note(note)
    }
}

/// The report envelope. Serialization is deterministic: fixed field
/// order, no timestamps.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub schema_version: u32,
    pub rows: Vec<VerificationRow>,
    pub certificates: Vec<RankCertificate>,
}

impl Report {
    pub fn new() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            rows: Vec::new(),
            certificates: Vec::new(),
        }
    }

    /// Canonical row order: check kind, family, n, p.
    pub fn finish(mut self) -> Self {
        self.rows
            .sort_by(|a, b| (&a.check, &a.family, a.n, a.p).cmp(&(&b.check, &b.family, b.n, b.p)));
        self
    }

    /// 0 all match, 1 some mismatch, 3 some inconclusive row.
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(|r| r.inconclusive == Some(true)) {
            3
        } else if self.rows.iter().any(|r| r.matched == Some(false)) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("check,family,p,n,computed,claimed,source,match,inconclusive,note\n");
        for r in &self.rows {
            let p = r.p.map(|p| p.to_string()).unwrap_or_default();
            let claimed = r.claimed.map(|c| c.to_string()).unwrap_or_default();
            let matched = r.matched.map(|m| m.to_string()).unwrap_or_default();
            let inconclusive = r.inconclusive.map(|i| i.to_string()).unwrap_or_default();
            let note = r.note.clone().unwrap_or_default().replace('"', "''");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},\"{}\"\n",
                r.check,
                r.family,
                p,
                r.n,
                r.computed,
                claimed,
                r.source,
                matched,
                inconclusive,
                note
            ));
        }
        out
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let family = match r.p {
                Some(_) => r.family.clone(),
                None => r.family.clone(),
            };
            let verdict = if r.inconclusive == Some(true) {
                "INCONCLUSIVE"
            } else {
                match r.matched {
                    Some(true) => "match",
                    Some(false) => "MISMATCH",
                    None => "computed",
                }
            };
            let claimed = match r.claimed {
                Some(c) => format!(" claimed {c} [{}]", r.source),
                None => String::new(),
            };
            out.push_str(&format!(
                "{:9} {:10} n={}: computed {}{} -> {}\n",
                r.check, family, r.n, r.computed, claimed, verdict
            ));
            if let Some(note) = &r.note {
                out.push_str(&format!("          note: {note}\n"));
            }
        }
        for cert in &self.certificates {
            let gens: Vec<String> = cert.generators.iter().map(|g| g.to_string()).collect();
            out.push_str(&format!(
                "certificate {} n={} mode={}: size {} ({} candidates tested{}) gens {}\n",
                cert.target,
                cert.n,
                cert.mode,
                cert.size,
                cert.subsets_tested,
                if cert.budget_exhausted {
                    ", budget exhausted"
                } else if cert.exhaustive_below {
                    ", exhaustive below"
                } else {
                    ""
                },
                gens.join(" ")
            ));
        }
        let mismatches = self
            .rows
            .iter()
            .filter(|r| r.matched == Some(false))
            .count();
        let inconclusive = self
            .rows
            .iter()
            .filter(|r| r.inconclusive == Some(true))
            .count();
        out.push_str(&format!(
            "summary: {} rows, {} mismatches, {} inconclusive\n",
            self.rows.len(),
            mismatches,
            inconclusive
        ));
        out
    }

    pub fn render(&self, format: crate::OutputFormat) -> String {
        match format {
            crate::OutputFormat::Lines => self.to_lines(),
            crate::OutputFormat::Csv => self.to_csv(),
            crate::OutputFormat::Json => self.to_json(),
        }
    }
}
