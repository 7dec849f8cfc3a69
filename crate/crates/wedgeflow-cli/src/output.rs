//! Result emission: CSV with fixed 17-significant-digit formatting and
//! JSON summaries. No locale, byte-identical across reruns.

use std::io::Write;
use std::path::Path;

use wedgeflow::Result;

/// 17 significant digits, scientific; enough to round-trip any f64.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// CSV from a header and rows of already-formatted cells.
pub fn csv(header: &str, rows: &[Vec<String>], footer: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    if let Some(f) = footer {
        out.push_str(f);
        out.push('\n');
    }
    out
}
