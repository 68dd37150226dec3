use std::fmt::Write as _;
use std::path::Path;

use super::{ScanRecord, TrialRecord};
use crate::error::Result;
use crate::io::{fmt_f64, write_atomic};

pub const CSV_HEADER: &str = "n,m_rule,m,case,mean_T,var_T,ks,B,seed";
pub const SCAN_CSV_HEADER: &str = "n,m,case,seeds,median_log_var,median_var";

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.m_rule,
            r.m,
            r.case.tag(),
            fmt_f64(r.mean_t),
            fmt_f64(r.var_t),
            fmt_f64(r.ks),
            r.replicates,
            r.master_seed
        )
        .unwrap();
    }
    out
}

/// Writes the table CSV atomically: readers see the old file or the full new one.
pub fn emit_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    write_atomic(path, records_to_csv(records).as_bytes())
}

pub fn scan_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::new();
    out.push_str(SCAN_CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.m,
            r.case.tag(),
            r.seeds,
            fmt_f64(r.median_log_variance),
            fmt_f64(r.median_variance())
        )
        .unwrap();
    }
    out
}

pub fn emit_scan_csv(records: &[ScanRecord], path: &Path) -> Result<()> {
    write_atomic(path, scan_to_csv(records).as_bytes())
}
