//! JSON persistence for baselines, diagnosis reports and frozen policies,
//! plus the signature CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::infometrics::InfoSignature;
use crate::monitor::{Baseline, DiagnosisReport, BASELINE_SCHEMA_VERSION};
use crate::simlab::Policy;

pub const CSV_HEADER: &str =
    "step,h_s,h_a,h_snext,mi_sa,mi_asnext,mi_ssnext,mi_sa_snext,n,support_s,support_a,support_snext";

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_csv<W: Write>(signatures: &[InfoSignature], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in signatures {
        writeln!(
            w,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{},{}",
            s.step_index,
            s.h_s,
            s.h_a,
            s.h_snext,
            s.mi_sa,
            s.mi_asnext,
            s.mi_ssnext,
            s.mi_sa_snext,
            s.n,
            s.support.states,
            s.support.actions,
            s.support.next_states
        )?;
    }
    Ok(())
}

pub fn emit_csv(signatures: &[InfoSignature], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if signatures.is_empty() {
        return Err(Error::InsufficientData {
            what: "signature CSV (signatures)",
            needed: 1,
            got: 0,
        });
    }
    let mut w = create(path)?;
    write_csv(signatures, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn save_baseline(base: &Baseline, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &to_json(base))
}

/// Parses a baseline, checking the schema version before anything else.
pub fn parse_baseline(text: &str) -> Result<Baseline> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let version = value
        .get("schema_version")
        .ok_or_else(|| Error::Schema("missing field `schema_version`".into()))?
        .as_u64()
        .ok_or_else(|| Error::Schema("`schema_version` must be a non-negative integer".into()))?;
    if version != u64::from(BASELINE_SCHEMA_VERSION) {
        return Err(Error::IncompatibleVersion {
            found: u32::try_from(version).unwrap_or(u32::MAX),
            expected: BASELINE_SCHEMA_VERSION,
        });
    }
    serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))
}

pub fn load_baseline(path: impl AsRef<Path>) -> Result<Baseline> {
    parse_baseline(&read_text(path.as_ref())?)
}

pub fn save_report(report: &DiagnosisReport, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &to_json(report))
}

pub fn save_policy(policy: &Policy, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &to_json(policy))
}

pub fn load_policy(path: impl AsRef<Path>) -> Result<Policy> {
    let path = path.as_ref();
    let policy: Policy = serde_json::from_str(&read_text(path)?).map_err(|e| Error::Schema(e.to_string()))?;
    policy.validate()?;
    Ok(policy)
}
