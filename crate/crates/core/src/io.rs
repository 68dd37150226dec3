//! Plain-text series files and atomic output.
//!
//! Series files hold one decimal float per line; blank lines and lines whose
//! first non-blank character is `#` are ignored.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits and a `.` separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_series_str(text: &str, origin: &Path) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message: format!("expected a decimal number, found `{line}`"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: idx + 1,
                message: format!("non-finite value `{line}`"),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::Parse {
            path: origin.to_path_buf(),
            line: 0,
            message: "no observations".into(),
        });
    }
    Ok(values)
}

pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_series_str(&text, path)
}

pub fn series_to_string(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for &v in values {
        let _ = writeln!(out, "{}", fmt_f64(v));
    }
    out
}

pub fn write_series(path: &Path, values: &[f64]) -> Result<()> {
    write_atomic(path, series_to_string(values).as_bytes())
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place. On failure nothing is left at `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# header\n1.5\n\n  -2e3 \n# trailing\n0\n";
        let v = parse_series_str(text, Path::new("x")).unwrap();
        assert_eq!(v, vec![1.5, -2000.0, 0.0]);
    }

    #[test]
    fn reports_offending_line() {
        let err = parse_series_str("1\n2\nabc\n", Path::new("data.txt")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("data.txt:3"), "{msg}");
        assert!(parse_series_str("nan\n", Path::new("x")).is_err());
        assert!(parse_series_str("# only\n", Path::new("x")).is_err());
    }

    #[test]
    fn formatted_values_round_trip() {
        for &x in &[0.1, -1.0 / 3.0, 1e-300, 123456789.123, f64::MAX] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert!(!s.contains(','));
        }
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_series(&path, &[1.0, 2.0]).unwrap();
        write_series(&path, &[3.0]).unwrap();
        assert_eq!(read_series(&path).unwrap(), vec![3.0]);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn failed_write_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.txt");
        assert!(write_atomic(&path, b"x").is_err());
        assert!(!path.exists());
    }
}
