//! JSON and CSV serialisation of identity reports.
//!
//! Both formats carry the same flat rows
//! `{identity, n, r, k_or_phi, m, element_label, residual, pass}`, with `r` and
//! `residual` as exact `"p/q"` strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::rational_string;
use crate::verify::IdentityReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub identity: String,
    pub n: usize,
    pub r: String,
    pub k_or_phi: String,
    pub m: u32,
    pub element_label: String,
    pub residual: String,
    pub pass: bool,
}

pub fn rows(reports: &[IdentityReport]) -> Vec<ReportRow> {
    reports
        .iter()
        .flat_map(|rep| {
            let identity = rep.spec.kind().name().to_string();
            let r = rational_string(&rep.r);
            let k_or_phi = rep.spec.k_or_phi();
            let m = rep.spec.m();
            rep.entries.iter().map(move |e| ReportRow {
                identity: identity.clone(),
                n: rep.n,
                r: r.clone(),
                k_or_phi: k_or_phi.clone(),
                m,
                element_label: e.label.clone(),
                residual: rational_string(&e.residual),
                pass: e.pass,
            })
        })
        .collect()
}

pub fn all_pass(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::pass)
}

/// Pretty-printed JSON array of rows, newline-terminated.
pub fn to_json(reports: &[IdentityReport]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&rows(reports)).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(reports: &[IdentityReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows(reports) {
        w.serialize(row).map_err(|e| Error::Serialization(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// `f64` formatted with 17 significant digits.
pub fn float17(x: f64) -> String {
    format!("{:.16e}", x)
}
