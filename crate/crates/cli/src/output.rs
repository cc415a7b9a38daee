use std::io::Write;
use std::path::Path;

use fracfvt_core::report::Report;

use crate::CliError;

/// Writes the report as JSON to `out`, or to stdout.
pub fn write_report(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    let text = report.to_json()?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

/// Writes a flat numeric table.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: &[R]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

pub fn fmt_f64(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}
